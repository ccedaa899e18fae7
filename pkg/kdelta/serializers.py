import json
import logging

from rest_framework import serializers

from .exceptions import LatticeError
from .kstab import DeltaReport
from .lattice import to_rational
from .zariski import volume_function

logger = logging.getLogger(__name__)


def format_rational(value):
    """"p/q" with q > 0; integers print without a denominator."""
    value = to_rational(value)
    return str(value.p) if value.q == 1 else f'{value.p}/{value.q}'


def canonical_json(data):
    return json.dumps(data, sort_keys=True, indent=2, ensure_ascii=False)


class RationalField(serializers.Field):
    default_error_messages = {
        'invalid': 'Enter an exact rational such as "3/5" or an integer.',
    }

    def to_representation(self, value):
        return format_rational(value)

    def to_internal_value(self, data):
        try:
            return to_rational(data)
        except LatticeError:
            self.fail('invalid')


class ClassVectorSerializer(serializers.Serializer):
    """A class as ``{basis label: "p/q"}`` over its nonzero coordinates."""

    def to_representation(self, instance):
        model = self.context['model']
        return {label: format_rational(value) for label, value in model.coordinates(instance).items()}


class PiecewiseQuadraticSerializer(serializers.Serializer):
    breakpoints = serializers.ListField(child=RationalField())
    pieces = serializers.SerializerMethodField()

    def get_pieces(self, obj):
        return [[format_rational(c) for c in obj.coefficients(i)] for i in range(len(obj.pieces))]


class ZariskiSegmentSerializer(serializers.Serializer):
    t_lo = RationalField()
    t_hi = RationalField()
    support = serializers.ListField(child=serializers.CharField())
    coefficients = serializers.SerializerMethodField()

    def get_coefficients(self, obj):
        return {
            label: {'constant': format_rational(alpha), 'slope': format_rational(beta)}
            for label, (alpha, beta) in obj.coefficients.items()
        }


class ZariskiPathSerializer(serializers.Serializer):
    flag = serializers.CharField()
    model = serializers.CharField(source='model.name')
    tau = RationalField()
    breakpoints = serializers.ListField(child=RationalField())
    start_volume = RationalField()
    segments = ZariskiSegmentSerializer(many=True)
    volume = serializers.SerializerMethodField()

    def get_volume(self, obj):
        return PiecewiseQuadraticSerializer(volume_function(obj)).data


class PointEntrySerializer(serializers.Serializer):
    point = serializers.CharField()
    s_w = RationalField()
    mode = serializers.CharField(source='mode.value')
    quotient = RationalField()

    def to_representation(self, instance):
        data = super().to_representation(instance)
        data['S_W'] = data.pop('s_w')
        return data


class DeltaReportSerializer(serializers.Serializer):
    flag = serializers.CharField()
    A = RationalField()
    S = RationalField()
    ratio = RationalField()
    beta = RationalField()
    tau = RationalField()
    volume = RationalField()
    entries = PointEntrySerializer(many=True)
    delta_lower_bound = RationalField()
    bound_mode = serializers.CharField(source='bound_mode.value')
    verdict = serializers.CharField(source='verdict.value')

    def to_representation(self, instance):
        data = super().to_representation(instance)
        data['A/S'] = data.pop('ratio')
        return data


class EvidenceItemSerializer(serializers.Serializer):
    kind = serializers.CharField(source='kind.value')
    payload = serializers.SerializerMethodField()

    def get_payload(self, obj):
        if isinstance(obj.payload, DeltaReport):
            return DeltaReportSerializer(obj.payload).data
        if isinstance(obj.payload, dict):
            return {key: value if isinstance(value, int) else format_rational(value)
                    for key, value in obj.payload.items()}
        return str(obj.payload)


class ClassificationRowSerializer(serializers.Serializer):
    n = serializers.IntegerField()
    m = serializers.IntegerField()
    k = serializers.IntegerField()
    volume = RationalField(allow_null=True)
    status = serializers.CharField(source='status.value')
    evidence = EvidenceItemSerializer(many=True)

    def to_representation(self, instance):
        # rows coming back from worker tasks are already serialized
        if isinstance(instance, dict):
            return instance
        return super().to_representation(instance)


class TableGroupSerializer(serializers.Serializer):
    pair = serializers.CharField()
    k = serializers.CharField()
    status = serializers.CharField(source='status.value')
    rows = ClassificationRowSerializer(many=True)


class SingularitySerializer(serializers.Serializer):
    label = serializers.CharField()
    type = serializers.CharField(source='describe')
    r = serializers.IntegerField()
    a = serializers.IntegerField()
    group_order = serializers.IntegerField()
    local_index = serializers.IntegerField()
    resolution_chain = serializers.ListField(child=serializers.IntegerField())
    location = serializers.CharField()
    curves = serializers.ListField(child=serializers.CharField())


class ModelDumpSerializer(serializers.Serializer):
    name = serializers.CharField()
    basis = serializers.ListField(child=serializers.CharField())
    intersection_matrix = serializers.SerializerMethodField()
    canonical = serializers.SerializerMethodField()
    anticanonical_pullback = serializers.SerializerMethodField()
    volume = RationalField()
    curves = serializers.SerializerMethodField()
    contracted = serializers.ListField(child=serializers.CharField())
    singularities = SingularitySerializer(many=True)
    resolution_rank = serializers.IntegerField()

    def _vector(self, obj, v):
        return ClassVectorSerializer(v, context={'model': obj}).data

    def get_intersection_matrix(self, obj):
        return [[format_rational(obj.form[i, j]) for j in range(obj.dimension)] for i in range(obj.dimension)]

    def get_canonical(self, obj):
        return self._vector(obj, obj.canonical)

    def get_anticanonical_pullback(self, obj):
        return self._vector(obj, obj.pullback_anticanonical)

    def get_curves(self, obj):
        return {curve.label: self._vector(obj, curve.cls) for curve in obj.curves}
