import json
from pathlib import Path

import sympy as sp
from django.test import SimpleTestCase

from kdelta.catalog import build_config
from kdelta.exceptions import KStabilityError
from kdelta.kstab import (
    FlagPointSpec,
    alpha_delta_bounds,
    at_most,
    beta,
    delta_lower_bound,
    exact,
    generic_point,
    liu_test,
    log_discrepancy,
    s_invariant,
    s_w,
    scaled_path,
)
from kdelta.lattice import pair, to_rational
from kdelta.utils.constants import BoundMode, LiuVerdict, PointMode, Verdict
from kdelta.zariski import zariski_path

from .test_zariski import simpson, flagged_setups

FIXTURES = Path(__file__).resolve().parent / 'fixtures'
R = sp.Rational


def expected_values():
    return json.loads((FIXTURES / 'expected_values.json').read_text(encoding='utf-8'))


def _report(name, flag):
    config = build_config(name)
    return delta_lower_bound(config.model_for(flag), flag, config.points(flag))


def _float_profile(model, segment, flag_class, point):
    """h(t) on one chamber in floats, read off P(t) and N(t) directly."""
    degree_at_zero = float(pair(model, segment.positive.base, flag_class))
    degree_slope = float(pair(model, segment.positive.slope, flag_class))
    local = [(float(alpha), float(beta), float(point.multiplicities[label].value))
             for label, (alpha, beta) in segment.coefficients.items()
             if label in point.multiplicities]

    def evaluate(t):
        degree = degree_at_zero + degree_slope * t
        return degree * sum((alpha + beta * t) * value for alpha, beta, value in local) + degree ** 2 / 2

    return evaluate


class DeltaReportTests(SimpleTestCase):
    def test_recorded_values(self):
        expected = expected_values()
        for name in ('S326', 'S427', 'S325', 'S426', 'S527', 'S335', 'S436'):
            for flag, values in expected[name]['flags'].items():
                report = _report(name, flag)
                entries = {entry.point: entry for entry in report.entries}
                with self.subTest(name=name, flag=flag):
                    self.assertEqual(report.volume, to_rational(expected[name]['volume']))
                    self.assertEqual(report.A, to_rational(values['A']))
                    self.assertEqual(report.S, to_rational(values['S']))
                    self.assertEqual(report.ratio, to_rational(values['A/S']))
                    self.assertEqual(report.verdict, Verdict(values['verdict']))
                    if 'tau' in values:
                        self.assertEqual(report.tau, to_rational(values['tau']))
                    if 'beta' in values:
                        self.assertEqual(report.beta, to_rational(values['beta']))
                    if 'breakpoints' in values:
                        self.assertEqual(list(report.path.breakpoints),
                                         [to_rational(b) for b in values['breakpoints']])
                    if 'delta_lower_bound' in values:
                        self.assertEqual(report.delta_lower_bound, to_rational(values['delta_lower_bound']))
                    for point, value in values['S_W'].items():
                        self.assertEqual(entries[point].s_w, to_rational(value))
                    for point in values.get('upper_bound', []):
                        self.assertEqual(entries[point].mode, PointMode.UPPER_BOUND)
                    if values.get('upper_bound'):
                        self.assertEqual(report.bound_mode, BoundMode.LOWER_BOUND)

    def test_bound_is_minimum_of_quotients(self):
        report = _report('S326', 'E')
        quotients = [report.ratio] + [entry.quotient for entry in report.entries]
        self.assertEqual(report.delta_lower_bound, min(quotients))
        self.assertEqual(report.bound_mode, BoundMode.EXACT)
        self.assertEqual([entry.point for entry in report.entries], sorted(e.point for e in report.entries))

    def test_equality_case(self):
        report = _report('S527', 'E')
        self.assertEqual(report.delta_lower_bound, 1)
        self.assertEqual(report.verdict, Verdict.DELTA_EQ_1)

    def test_generic_point_required(self):
        config = build_config('S326')
        points = [p for p in config.points('L') if not p.is_generic]
        with self.assertRaises(KStabilityError):
            delta_lower_bound(config.model_for('L'), 'L', points)

    def test_inconclusive_when_bound_is_small(self):
        config = build_config('S527')
        model = config.model_for('E')
        points = [generic_point('E'), FlagPointSpec('q', 'E', {'C': at_most(9)}, log_discrepancy=R(1, 2))]
        report = delta_lower_bound(model, 'E', points)
        self.assertLess(report.delta_lower_bound, 1)
        self.assertEqual(report.verdict, Verdict.INCONCLUSIVE)


class FlagPointTests(SimpleTestCase):
    def test_local_number_cannot_exceed_global(self):
        config = build_config('S326')
        model = config.model_for('E')
        point = FlagPointSpec('q', 'E', {'C': exact(2)})
        with self.assertRaises(KStabilityError):
            point.validate(model)

    def test_generic_point_has_no_local_data(self):
        with self.assertRaises(KStabilityError):
            FlagPointSpec('generic', 'E', {'C': exact(1)}, is_generic=True)

    def test_log_discrepancy_range(self):
        with self.assertRaises(KStabilityError):
            FlagPointSpec('q', 'E', log_discrepancy=R(3, 2))

    def test_point_on_another_flag(self):
        config = build_config('S326')
        path = zariski_path(config.model_for('E'), 'E')
        with self.assertRaises(KStabilityError):
            s_w(path, generic_point('L'))

    def test_zero_bound_contributes_nothing(self):
        config = build_config('S326')
        path = zariski_path(config.model_for('L'), 'L')
        value, mode = s_w(path, FlagPointSpec('q', 'L', {'C': at_most(0)}))
        generic, _ = s_w(path, generic_point('L'))
        self.assertEqual(mode, PointMode.EXACT)
        self.assertEqual(value, generic)
        self.assertEqual(generic, R(1, 6))

    def test_s_w_matches_float_quadrature(self):
        for key, config, setup in flagged_setups():
            model = config.stages[setup.stage]
            path = zariski_path(model, setup.flag)
            flag_class = model.curve(setup.flag).cls
            for point in setup.points:
                with self.subTest(configuration=key, flag=setup.flag, point=point.label):
                    numeric = 0.0
                    for segment in path.segments:
                        numeric += simpson(_float_profile(model, segment, flag_class, point),
                                            float(segment.t_lo), float(segment.t_hi))
                    numeric *= 2 / float(path.start_volume)
                    self.assertLess(abs(numeric - float(s_w(path, point)[0])), 1e-9)


class InvariantTests(SimpleTestCase):
    def test_log_discrepancy(self):
        config = build_config('S326')
        self.assertEqual(log_discrepancy(config.stages['X1'], 'L'), R(4, 5))
        self.assertEqual(log_discrepancy(config.stages['X2'], 'E'), R(3, 5))
        self.assertEqual(log_discrepancy(config.stages['X2'], 'C'), 1)

    def test_beta(self):
        config = build_config('S326')
        self.assertEqual(beta(config.stages['X2'], 'E'), R(14, 45))

    def test_scaling(self):
        config = build_config('S326')
        path = zariski_path(config.model_for('L'), 'L')
        doubled = scaled_path(path, 2)
        self.assertEqual(doubled.tau, 2 * path.tau)
        self.assertEqual(s_invariant(doubled), 2 * s_invariant(path))
        with self.assertRaises(KStabilityError):
            scaled_path(path, 0)


class LiuTests(SimpleTestCase):
    def test_threshold(self):
        self.assertEqual(liu_test('15/7', 7), LiuVerdict.EXCLUDED_UNSTABLE)
        self.assertEqual(liu_test(1, 9), LiuVerdict.PASSES)
        # equality passes
        self.assertEqual(liu_test('9/7', 7), LiuVerdict.PASSES)

    def test_invalid_input(self):
        with self.assertRaises(KStabilityError):
            liu_test(0, 3)
        with self.assertRaises(KStabilityError):
            liu_test(1, 0)

    def test_alpha_bounds(self):
        self.assertEqual(alpha_delta_bounds('3/4', 2), (R(9, 8), R(9, 4)))
        with self.assertRaises(KStabilityError):
            alpha_delta_bounds(0, 2)
