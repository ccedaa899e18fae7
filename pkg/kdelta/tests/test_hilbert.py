from django.test import SimpleTestCase

from kdelta.catalog.hilbert import (
    RationalSeries,
    complete_intersection_hilbert_function,
    hilbert_series_check,
    two_weights_alternative,
    weighted_monomial_count,
)
from kdelta.exceptions import CatalogError


class RationalSeriesTests(SimpleTestCase):
    def test_plane(self):
        self.assertEqual(RationalSeries((1,), (1, 1, 1)).expand(4), [1, 3, 6, 10, 15])

    def test_cubic_surface(self):
        cubic = RationalSeries.complete_intersection((1, 1, 1, 1), (3,))
        self.assertEqual(cubic.numerator_coefficients, (1, 0, 0, -1))
        self.assertEqual(cubic.expand(4), [1, 4, 10, 19, 31])

    def test_validation(self):
        with self.assertRaises(CatalogError):
            RationalSeries((), (1,))
        with self.assertRaises(CatalogError):
            RationalSeries((1,), (0, 1))

    def test_two_weights_alternative(self):
        series = two_weights_alternative(2, 3)
        self.assertEqual(series.numerator_coefficients, (1, 0, 1, 0, 1))
        self.assertEqual(series.weights, (1, 1, 5))
        self.assertEqual(series.expand(2), [1, 2, 4])


class MonomialCountTests(SimpleTestCase):
    def test_weighted_counts(self):
        self.assertEqual(weighted_monomial_count((1, 1, 2), 2), 4)
        self.assertEqual(weighted_monomial_count((1, 1, 2), -1), 0)
        self.assertEqual(weighted_monomial_count((2, 3), 1), 0)

    def test_complete_intersection(self):
        # degree 1 del Pezzo surface in P(1,1,2,3)
        values = [complete_intersection_hilbert_function((1, 1, 2, 3), (6,), d) for d in range(4)]
        self.assertEqual(values, [1, 2, 4, 7])


class HilbertCheckTests(SimpleTestCase):
    def test_closed_form_agrees_with_monomial_count(self):
        self.assertTrue(hilbert_series_check((1, 1, 2, 3), (6,), 30))
        self.assertTrue(hilbert_series_check((1, 1, 1, 1), (2, 2), 20))

    def test_alternative(self):
        same = RationalSeries((1, 0, 0, -1), (1, 1, 1))
        self.assertTrue(hilbert_series_check((1, 1, 1), (3,), 25, alternative=same))
        with self.assertLogs('kdelta.catalog', level='WARNING'):
            self.assertFalse(hilbert_series_check((1, 1, 1), (3,), 25, alternative=RationalSeries((1,), (1, 1, 1))))

    def test_invalid_arguments(self):
        with self.assertRaises(CatalogError):
            hilbert_series_check((), (), 5)
        with self.assertRaises(CatalogError):
            hilbert_series_check((1, 1), (), 0)
        with self.assertRaises(CatalogError):
            hilbert_series_check((1, 1), (-2,), 5)

    def test_hypersurfaces_agree_to_order_fifty(self):
        for n in range(2, 6):
            # (1 − t^{n+1}) / ((1−t)³(1−tⁿ)) with the cubic factor cancelled
            cancelled = RationalSeries((1,) * (n + 1), (1, 1, n))
            with self.subTest(n=n):
                self.assertTrue(hilbert_series_check((1, 1, 1, n), (n + 1,), 50))
                self.assertTrue(hilbert_series_check((1, 1, 1, n), (n + 1,), 50, alternative=cancelled))
        for n, m in ((3, 2), (4, 3), (5, 2)):
            with self.subTest(n=n, m=m):
                self.assertTrue(hilbert_series_check((1, 1, n, n * m - 1), (n * m,), 50,
                                                     alternative=two_weights_alternative(n, m)))

    def test_degree_one_relation_is_trivial(self):
        self.assertTrue(hilbert_series_check((1,), (1,), 50, alternative=RationalSeries((1,), ())))
        self.assertEqual(RationalSeries((1,), ()).expand(3), [1, 0, 0, 0])
