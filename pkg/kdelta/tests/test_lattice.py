import itertools

import sympy as sp
from django.test import SimpleTestCase

from kdelta.builder import PointSpec, blow_up, declare_curve, seed_p2
from kdelta.exceptions import LatticeError
from kdelta.lattice import (
    Curve,
    SurfaceModel,
    chain_discrepancies,
    is_negative_definite,
    orthogonalize,
    pair,
    solve_discrepancies,
    to_rational,
)


def _plane_with_line(points_on_line):
    model = declare_curve(seed_p2(), 'L', {'l': 1})
    for i in range(points_on_line):
        model = blow_up(model, PointSpec(f'e{i}', {'L': 1}))
    return model


def _chain_model(chain):
    """Resolution chain alone: Eᵢ² = −aᵢ, neighbours meet once, K·Eᵢ = aᵢ − 2."""
    size = len(chain)
    form = sp.ImmutableMatrix(size, size, lambda i, j: -chain[i] if i == j else int(abs(i - j) == 1))
    canonical = sp.ImmutableMatrix(form.inv() * sp.ImmutableMatrix([a - 2 for a in chain]))
    labels = tuple(f'E{i}' for i in range(size))
    curves = tuple(Curve(label, sp.ImmutableMatrix.eye(size)[:, i]) for i, label in enumerate(labels))
    return SurfaceModel('chain', labels, form, canonical, curves=curves)


class RationalCoercionTests(SimpleTestCase):
    def test_accepts_exact_inputs(self):
        self.assertEqual(to_rational('3/5'), sp.Rational(3, 5))
        self.assertEqual(to_rational(' -4 / 6 '), sp.Rational(-2, 3))
        self.assertEqual(to_rational(7), sp.Integer(7))
        self.assertEqual(to_rational(sp.Rational(1, 9)), sp.Rational(1, 9))

    def test_rejects_inexact_inputs(self):
        for value in (0.5, True, '1/0', 'a/b', sp.sqrt(2), None):
            with self.subTest(value=value):
                with self.assertRaises(LatticeError):
                    to_rational(value)


class SurfaceModelTests(SimpleTestCase):
    def test_rejects_asymmetric_form(self):
        with self.assertRaises(LatticeError):
            SurfaceModel('bad', ('a', 'b'), sp.ImmutableMatrix([[-1, 1], [0, -1]]),
                         sp.ImmutableMatrix([0, 0]))

    def test_rejects_duplicate_basis(self):
        with self.assertRaises(LatticeError) as cm:
            SurfaceModel('bad', ('a', 'a'), sp.ImmutableMatrix([[-1, 0], [0, -1]]),
                         sp.ImmutableMatrix([0, 0]))
        self.assertIn('basis', cm.exception.errors)

    def test_rejects_wrong_class_dimension(self):
        with self.assertRaises(LatticeError):
            SurfaceModel('bad', ('a',), sp.ImmutableMatrix([[-2]]), sp.ImmutableMatrix([0, 0]))

    def test_unknown_labels(self):
        model = _plane_with_line(1)
        with self.assertRaises(LatticeError):
            model.curve('M')
        with self.assertRaises(LatticeError):
            model.index('M')

    def test_coordinates_skip_zero_entries(self):
        model = _plane_with_line(1)
        self.assertEqual(model.coordinates(model.curve('L').cls), {'l': 1, 'e0': -1})


class IntersectionTests(SimpleTestCase):
    def test_pair_after_blow_ups(self):
        model = _plane_with_line(2)
        line = model.curve('L').cls
        self.assertEqual(pair(model, line, line), -1)
        self.assertEqual(pair(model, model.anticanonical, line), 1)

    def test_orthogonalize_kills_pairing(self):
        model = _plane_with_line(2)
        result = orthogonalize(model, model.anticanonical, ['L'])
        self.assertEqual(pair(model, result, model.curve('L').cls), 0)
        self.assertEqual(result, model.anticanonical + model.curve('L').cls)

    def test_negative_definite(self):
        model = _plane_with_line(2)
        self.assertTrue(is_negative_definite(model, ['L']))
        self.assertTrue(is_negative_definite(model, ['e0', 'e1']))
        self.assertFalse(is_negative_definite(_plane_with_line(1), ['L']))
        with self.assertRaises(LatticeError):
            is_negative_definite(model, [])

    def test_degenerate_system_raises(self):
        model = _plane_with_line(1)
        with self.assertRaises(LatticeError):
            solve_discrepancies(model, ['L'])


class DiscrepancyTests(SimpleTestCase):
    def test_du_val_chains_are_crepant(self):
        self.assertEqual(chain_discrepancies([2]), [1])
        self.assertEqual(chain_discrepancies([2, 2, 2]), [1, 1, 1])

    def test_weight_11_point(self):
        for r in range(2, 8):
            self.assertEqual(chain_discrepancies([r]), [sp.Rational(2, r)])

    def test_two_curve_chain(self):
        # 1/5(1,3) resolves to [2, 3]
        self.assertEqual(chain_discrepancies([2, 3]), [sp.Rational(4, 5), sp.Rational(3, 5)])

    def test_empty_chain(self):
        with self.assertRaises(LatticeError):
            chain_discrepancies([])

    def test_every_short_chain(self):
        for length in range(1, 4):
            for chain in itertools.product(range(2, 7), repeat=length):
                result = chain_discrepancies(chain)
                model = _chain_model(chain)
                labels = [f'E{i}' for i in range(length)]
                with self.subTest(chain=chain):
                    self.assertTrue(is_negative_definite(model, labels))
                    self.assertEqual(list(solve_discrepancies(model, labels).values()), result)
                    self.assertTrue(all(0 < value <= 1 for value in result))
                    if set(chain) == {2}:
                        self.assertEqual(result, [1] * length)
                    else:
                        self.assertTrue(all(value < 1 for value in result))

    def test_model_discrepancies_match_chain(self):
        model = SurfaceModel(
            'chain', ('a', 'b'), sp.ImmutableMatrix([[-2, 1], [1, -3]]),
            sp.ImmutableMatrix([sp.Rational(-1, 5), sp.Rational(-2, 5)]),
            curves=(Curve('a', sp.ImmutableMatrix([1, 0])), Curve('b', sp.ImmutableMatrix([0, 1]))),
        )
        self.assertEqual(pair(model, model.canonical, model.curve('a').cls), 0)
        self.assertEqual(pair(model, model.canonical, model.curve('b').cls), 1)
        result = solve_discrepancies(model, ['a', 'b'])
        self.assertEqual(result, {'a': sp.Rational(4, 5), 'b': sp.Rational(3, 5)})
