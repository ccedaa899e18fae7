import json

import sympy as sp
from django.test import SimpleTestCase

from kdelta.catalog import build_config, catalog_names, load_config
from kdelta.catalog.configs import recipe_s326
from kdelta.catalog.formulas import (
    group_order,
    line_flag_generic_s_w,
    line_flag_s,
    line_flag_special_point,
    line_flag_special_s_w,
    line_flag_special_s_w_printed,
    line_flag_tau,
    record_divergence,
    two_lines_negative_part,
    volume_formula,
)
from kdelta.exceptions import CatalogError, KStabilityError, LatticeError, RecipeValidationError
from kdelta.kstab import delta_lower_bound
from kdelta.serializers import canonical_json

R = sp.Rational

PARAMETRIC = [
    ('Sn2_flagE', 3), ('Sn2_flagE', 4), ('Sn2_flagE', 5),
    ('Sn3_flagE', 3), ('Sn3_flagE', 4),
    ('Snm_n2', 2, 2), ('Snm_n2', 3, 2), ('Snm_n2', 4, 2), ('Snm_n2', 5, 2), ('Snm_n2', 3, 3), ('Snm_n2', 4, 3),
    ('P2_two_lines', 2, 2), ('P2_two_lines', 3, 2), ('P2_two_lines', 3, 3),
    ('Snm_wps', 3, 2), ('Snm_wps', 4, 3),
]


class DeclaredDataTests(SimpleTestCase):
    def test_every_configuration_matches_its_declared_data(self):
        fixed = [(name,) for name in ('S326', 'S427', 'S335_smoothtower', 'S436_smoothtower')]
        for key in fixed + PARAMETRIC:
            with self.subTest(configuration=key):
                self.assertEqual(build_config(*key).verify(), [])

    def test_aliases(self):
        self.assertEqual(build_config('S527').name, build_config('Sn2_flagE', 5).name)
        self.assertEqual(build_config('S436').name, 'S436')
        self.assertIs(build_config('S326'), build_config('S326'))
        for name in ('S325', 'S426', 'S527', 'S335', 'S436', 'S326', 'Snm_n2'):
            self.assertIn(name, catalog_names())

    def test_volumes_match_closed_form(self):
        for (name, n, m, k) in (('S326', 3, 2, 6), ('S427', 4, 2, 7), ('S325', 3, 2, 5),
                                ('S426', 4, 2, 6), ('S527', 5, 2, 7), ('S335', 3, 3, 5), ('S436', 4, 3, 6)):
            with self.subTest(name=name):
                self.assertEqual(build_config(name).model.volume, volume_formula(n, m, k))

    def test_singular_point_order(self):
        for (name, n, m) in (('S326', 3, 2), ('S427', 4, 2), ('S335', 3, 3), ('S436', 4, 3)):
            model = build_config(name).model
            orders = [record.group_order for record in model.singularities]
            self.assertEqual(orders, [group_order(n, m)])


class RegistryTests(SimpleTestCase):
    def test_unknown_configuration(self):
        with self.assertRaises(CatalogError) as cm:
            build_config('S999')
        self.assertIn('catalog', cm.exception.errors)

    def test_parameters(self):
        with self.assertRaises(CatalogError):
            build_config('S326', 3)
        with self.assertRaises(CatalogError):
            build_config('Snm_n2', 3)
        with self.assertRaises(CatalogError):
            build_config('Snm_n2', 2, 3)
        with self.assertRaises(CatalogError):
            build_config('Sn2_flagE', 1)

    def test_flag_setups(self):
        config = build_config('S326')
        self.assertEqual(config.setup('L').stage, 'X1')
        self.assertEqual(config.setup('E').stage, 'X2')
        self.assertEqual([p.label for p in config.points('E')], ['generic', 'E∩L', 'E∩C'])
        # undeclared curve on the final model: generic point only
        fallback = config.setup('C')
        self.assertEqual(fallback.stage, 'final')
        self.assertEqual([p.label for p in fallback.points], ['generic'])
        with self.assertRaises(CatalogError) as cm:
            config.setup('nope')
        self.assertIn('flag', cm.exception.errors)


class LoadConfigTests(SimpleTestCase):
    def test_catalog_recipe_loads_as_user_recipe(self):
        config = load_config(recipe_s326())
        self.assertEqual(config.name, 'S326')
        self.assertEqual(config.model.volume, R(2, 5))
        self.assertEqual(set(config.stages), {'S', 'S1', 'X1', 'S2', 'X2', 'final'})

    def test_recipe_survives_json(self):
        recipe = recipe_s326()
        reparsed = load_config(json.loads(canonical_json(recipe)))
        self.assertEqual(reparsed.stages, load_config(recipe).stages)

    def test_invalid_recipe(self):
        recipe = recipe_s326()
        recipe['steps'] = recipe['steps'][1:]
        with self.assertRaises(RecipeValidationError) as cm:
            load_config(recipe)
        self.assertIn('steps[0]', cm.exception.errors)

    def test_flag_curve_must_exist(self):
        recipe = recipe_s326()
        recipe['flags'][0]['flag'] = 'M'
        with self.assertRaises(LatticeError):
            load_config(recipe)

    def test_flag_point_local_data_checked(self):
        recipe = recipe_s326()
        recipe['flags'][1]['points'][1]['multiplicities'] = {'L': '5'}
        with self.assertRaises(KStabilityError):
            load_config(recipe)


class ClosedFormTests(SimpleTestCase):
    def test_volume_formula(self):
        self.assertEqual(volume_formula(4, 2, 5), R(15, 7))
        self.assertEqual(volume_formula(5, 2, 7), 1)
        with self.assertRaises(CatalogError):
            volume_formula(1, 2, 0)
        with self.assertRaises(CatalogError):
            volume_formula(3, 2, -1)

    def test_line_flag_matches_engine(self):
        # every pair with n >= m >= 2 carries the line flag; n < m is the swapped role
        for n, m in [(n, m) for n in range(2, 6) for m in range(2, n + 1)]:
            config = build_config('Snm_n2', n, m)
            report = delta_lower_bound(config.model_for('L'), 'L', config.points('L'))
            entries = {entry.point: entry.s_w for entry in report.entries}
            with self.subTest(n=n, m=m):
                self.assertEqual(report.A, R(n + 1, m * n - 1))
                self.assertEqual(report.tau, line_flag_tau(n, m))
                self.assertEqual(report.S, line_flag_s(n, m))
                self.assertEqual(entries['generic'], line_flag_generic_s_w(n, m))
                self.assertEqual(entries['L∩C1'], line_flag_special_s_w(n, m))
                self.assertEqual(entries['L∩E1'], entries['L∩C1'])

    def test_line_flag_at_five_two(self):
        config = build_config('Snm_n2', 5, 2)
        report = delta_lower_bound(config.model_for('L'), 'L', config.points('L'))
        self.assertEqual(report.ratio, R(4, 3))
        self.assertEqual(dict((e.point, e.s_w) for e in report.entries)['L∩C1'], R(37, 90))


class DivergenceTests(SimpleTestCase):
    def test_special_point_divergence_is_logged(self):
        with self.assertLogs('kdelta.catalog', level='INFO') as cm:
            value = line_flag_special_point(2, 2)
        self.assertEqual(value, R(19, 36))
        self.assertTrue(any('divergence' in line and '55/108' in line for line in cm.output))

    def test_two_lines_negative_part(self):
        self.assertEqual(two_lines_negative_part(3, 3), {'Ln': R(1, 2), 'Lm': R(1, 2)})
        with self.assertLogs('kdelta.catalog', level='INFO') as cm:
            self.assertEqual(two_lines_negative_part(2, 2), {'Ln': 0, 'Lm': 0})
        self.assertTrue(any('printed' in line and '1/3' in line for line in cm.output))

    def test_printed_special_form_drops_a_term(self):
        for n, m in ((2, 2), (3, 2), (5, 3)):
            with self.subTest(n=n, m=m):
                gap = line_flag_special_s_w(n, m) - line_flag_special_s_w_printed(n, m)
                self.assertEqual(gap, R(m, 3 * n * (n + 1) * (m + n + 2)))

    def test_equal_values_are_not_logged(self):
        self.assertFalse(record_divergence('topic', R(1, 2), R(1, 2)))
        self.assertTrue(record_divergence('topic', R(1, 2), R(1, 3)))
