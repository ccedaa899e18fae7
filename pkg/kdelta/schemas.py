import logging
try:
    from jsonschema import Draft7Validator
except ImportError:
    Draft7Validator = None

from .exceptions import RecipeValidationError
from .utils.constants import RECIPE_FORMAT_VERSION, StepKind

logger = logging.getLogger(__name__)

# --- Common Schemas ---

RATIONAL_SCHEMA = {
    'type': ['string', 'integer'],
    'pattern': r'^\s*-?\d+\s*(/\s*\d+\s*)?$',
}

LABEL_SCHEMA = {'type': 'string', 'minLength': 1, 'maxLength': 40}

CLASS_SCHEMA = {
    'type': 'object',
    'additionalProperties': RATIONAL_SCHEMA,
    'minProperties': 1,
}

POSITIVE_INT_MAP = {
    'type': 'object',
    'additionalProperties': {'type': 'integer', 'minimum': 1},
}

LOCAL_MULTIPLICITY_SCHEMA = {
    'oneOf': [
        RATIONAL_SCHEMA,
        {
            'type': 'object',
            'properties': {
                'value': RATIONAL_SCHEMA,
                'mode': {'type': 'string', 'enum': ['exact', 'upper_bound']},
            },
            'required': ['value', 'mode'],
            'additionalProperties': False,
        },
    ]
}

FLAG_POINT_SCHEMA = {
    'type': 'object',
    'properties': {
        'label': LABEL_SCHEMA,
        'is_generic': {'type': 'boolean'},
        'multiplicities': {'type': 'object', 'additionalProperties': LOCAL_MULTIPLICITY_SCHEMA},
        'log_discrepancy': RATIONAL_SCHEMA,
    },
    'required': ['label'],
    'additionalProperties': False,
}

FLAG_SCHEMA = {
    'type': 'object',
    'properties': {
        'stage': LABEL_SCHEMA,
        'flag': LABEL_SCHEMA,
        'points': {'type': 'array', 'items': FLAG_POINT_SCHEMA, 'minItems': 1},
    },
    'required': ['stage', 'flag', 'points'],
    'additionalProperties': False,
}

# --- Step Schemas ---

STEP_PARAMETERS = {
    StepKind.SEED_P2.value: {
        'properties': {'name': {'type': 'string'}},
    },
    StepKind.SEED_WPS.value: {
        'properties': {'n': {'type': 'integer', 'minimum': 1}, 'name': {'type': 'string'}},
        'required': ['n'],
    },
    StepKind.DECLARE_CURVE.value: {
        'properties': {'label': LABEL_SCHEMA, 'class': CLASS_SCHEMA, 'through': POSITIVE_INT_MAP},
        'required': ['label', 'class'],
    },
    StepKind.BLOW_UP.value: {
        'properties': {
            'point': {
                'type': 'object',
                'properties': {
                    'label': LABEL_SCHEMA,
                    'incidences': POSITIVE_INT_MAP,
                    'is_general': {'type': 'boolean'},
                },
                'required': ['label'],
                'additionalProperties': False,
            },
        },
        'required': ['point'],
    },
    StepKind.WEIGHTED_BLOW_UP_11.value: {
        'properties': {'singularity': LABEL_SCHEMA, 'label': LABEL_SCHEMA},
        'required': ['singularity'],
    },
    StepKind.CONTRACT.value: {
        'properties': {
            'curves': {'type': 'array', 'items': LABEL_SCHEMA, 'minItems': 1, 'uniqueItems': True},
            'label': LABEL_SCHEMA,
        },
        'required': ['curves'],
    },
}

STEP_SCHEMA = {
    'type': 'object',
    'properties': {
        'kind': {'type': 'string', 'enum': [kind.value for kind in StepKind]},
        'checkpoint': LABEL_SCHEMA,
        'from': LABEL_SCHEMA,
    },
    'required': ['kind'],
    'additionalProperties': True,
    'allOf': [
        {'if': {'properties': {'kind': {'const': kind}}}, 'then': rules}
        for kind, rules in STEP_PARAMETERS.items()
    ],
}

RECIPE_SCHEMA = {
    'type': 'object',
    'properties': {
        'format_version': {'type': 'string', 'const': RECIPE_FORMAT_VERSION},
        'name': {'type': 'string', 'maxLength': 80},
        'steps': {'type': 'array', 'items': STEP_SCHEMA},
        'flags': {'type': 'array', 'items': FLAG_SCHEMA},
    },
    'required': ['format_version', 'steps'],
    'additionalProperties': False,
}

# --- Report Schemas (emitted JSON) ---

REPORT_RATIONAL = {'type': 'string', 'pattern': r'^-?\d+(/\d+)?$'}

DELTA_REPORT_SCHEMA = {
    'type': 'object',
    'properties': {
        'flag': {'type': 'string'},
        'A': REPORT_RATIONAL,
        'S': REPORT_RATIONAL,
        'A/S': REPORT_RATIONAL,
        'tau': REPORT_RATIONAL,
        'beta': REPORT_RATIONAL,
        'delta_lower_bound': REPORT_RATIONAL,
        'bound_mode': {'enum': ['exact', 'lower_bound']},
        'verdict': {'enum': ['delta_gt_1', 'delta_eq_1', 'inconclusive']},
        'entries': {
            'type': 'array',
            'items': {
                'type': 'object',
                'properties': {
                    'point': {'type': 'string'},
                    'S_W': REPORT_RATIONAL,
                    'mode': {'enum': ['exact', 'upper_bound']},
                    'quotient': REPORT_RATIONAL,
                },
                'required': ['point', 'S_W', 'mode', 'quotient'],
            },
        },
    },
    'required': ['flag', 'A', 'S', 'A/S', 'tau', 'delta_lower_bound', 'bound_mode', 'verdict', 'entries'],
}

CLASSIFICATION_ROW_SCHEMA = {
    'type': 'object',
    'properties': {
        'n': {'type': 'integer'},
        'm': {'type': 'integer'},
        'k': {'type': 'integer'},
        'volume': {'oneOf': [REPORT_RATIONAL, {'type': 'null'}]},
        'status': {'enum': ['K-unstable', 'K-stable', 'strictly K-semistable', 'out-of-family']},
        'evidence': {
            'type': 'array',
            'items': {
                'type': 'object',
                'properties': {
                    'kind': {'enum': ['liu_exclusion', 'delta_singular_point', 'alpha_bound_assumption',
                                      'finite_automorphism_assumption', 'literature']},
                    'payload': {},
                },
                'required': ['kind', 'payload'],
                'allOf': [
                    {
                        'if': {'properties': {'kind': {'const': 'delta_singular_point'}}},
                        'then': {'properties': {'payload': DELTA_REPORT_SCHEMA}},
                    },
                    {
                        'if': {'properties': {'kind': {'enum': ['alpha_bound_assumption',
                                                                'finite_automorphism_assumption',
                                                                'literature']}}},
                        'then': {'properties': {'payload': {'type': 'string'}}},
                    },
                ],
            },
        },
    },
    'required': ['n', 'm', 'k', 'volume', 'status', 'evidence'],
}

TABLE_REPORT_SCHEMA = {
    'type': 'object',
    'properties': {
        'groups': {
            'type': 'array',
            'items': {
                'type': 'object',
                'properties': {
                    'pair': {'type': 'string'},
                    'k': {'type': 'string'},
                    'status': {'type': 'string'},
                    'rows': {'type': 'array', 'items': CLASSIFICATION_ROW_SCHEMA, 'minItems': 1},
                },
                'required': ['pair', 'k', 'status', 'rows'],
            },
        },
    },
    'required': ['groups'],
}


def _readable_errors(errors):
    errs = {}
    for e in errors:
        # build a readable path
        path = []
        for p in e.path:
            if isinstance(p, int):
                if path:
                    path[-1] = f"{path[-1]}[{p}]"
                else:
                    path.append(f"[{p}]")
            else:
                path.append(str(p))
        key = '.'.join(path) if path else '_schema'
        errs.setdefault(key, e.message)
    return errs


def _run_schema(schema, data):
    if Draft7Validator is None:
        logger.error('jsonschema library is not installed')
        raise ImportError('jsonschema is required to validate recipes. Install via pip install jsonschema')
    validator = Draft7Validator(schema)
    errors = sorted(validator.iter_errors(data), key=lambda e: list(e.path))
    logger.debug('Found %d schema validation errors', len(errors))
    return _readable_errors(errors)


class _LabelState:
    """Labels known after a prefix of the recipe."""

    def __init__(self, curves=(), singularities=()):
        self.curves = set(curves)
        self.singularities = set(singularities)

    def copy(self):
        return _LabelState(self.curves, self.singularities)


def _check_references(steps):
    """Every step may only refer to labels produced before it."""
    errs, state, stages = {}, None, {}
    for index, step in enumerate(steps):
        where = f'steps[{index}]'
        kind = step['kind']
        if step.get('from') is not None:
            if step['from'] not in stages:
                errs[f'{where}.from'] = f"unknown stage {step['from']!r}"
                continue
            state = stages[step['from']].copy()
        if kind in (StepKind.SEED_P2.value, StepKind.SEED_WPS.value):
            if index != 0:
                errs[where] = 'a seed can only be the first step'
                continue
            seeded_singular = kind == StepKind.SEED_WPS.value and step['n'] >= 2
            state = _LabelState(singularities={'o'} if seeded_singular else ())
        elif state is None:
            errs[where] = 'the recipe must start with a seed'
            break
        elif kind == StepKind.DECLARE_CURVE.value:
            if step['label'] in state.curves:
                errs[f'{where}.label'] = f"curve {step['label']!r} already declared"
            for singular in step.get('through', {}):
                if singular not in state.singularities:
                    errs[f'{where}.through'] = f'unknown singularity {singular!r}'
            state.curves.add(step['label'])
        elif kind == StepKind.BLOW_UP.value:
            point = step['point']
            for curve in point.get('incidences', {}):
                if curve not in state.curves:
                    errs[f'{where}.point.incidences'] = f'unknown curve {curve!r}'
            if point.get('is_general') and point.get('incidences'):
                errs[f'{where}.point'] = 'a general point lies on no tracked curve'
            state.curves.add(point['label'])
        elif kind == StepKind.WEIGHTED_BLOW_UP_11.value:
            if step['singularity'] not in state.singularities:
                errs[f'{where}.singularity'] = f"unknown singularity {step['singularity']!r}"
            state.singularities.discard(step['singularity'])
            state.curves.add(step.get('label', 'E'))
        elif kind == StepKind.CONTRACT.value:
            missing = [c for c in step['curves'] if c not in state.curves]
            if missing:
                errs[f'{where}.curves'] = f'unknown curves {missing}'
            state.singularities.add(step.get('label') or f"p_{step['curves'][0]}")
        if step.get('checkpoint'):
            stages[step['checkpoint']] = state.copy()
    return errs, stages


def validate_recipe(data):
    """
    Validate a recipe document: schema first, then label references.

    Raises RecipeValidationError with a dict of errors if invalid.
    """
    logger.debug('Validating recipe %s', data.get('name') if isinstance(data, dict) else None)
    if isinstance(data, dict) and data.get('steps') == []:
        raise RecipeValidationError({'steps': 'empty recipe'})

    # --- 1. Schema validation ---
    errs = _run_schema(RECIPE_SCHEMA, data)
    if errs:
        raise RecipeValidationError(errs)

    # --- 2. Semantic checks ---
    errs, stages = _check_references(data['steps'])
    for index, flag in enumerate(data.get('flags', [])):
        if flag['stage'] != 'final' and flag['stage'] not in stages:
            errs[f'flags[{index}].stage'] = f"unknown stage {flag['stage']!r}"
    if errs:
        raise RecipeValidationError(errs)
    return data


def validate_report(schema, data):
    """Check emitted JSON against one of the report schemas; returns the error dict."""
    return _run_schema(schema, data)
