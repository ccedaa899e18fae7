"""Hilbert series of weighted complete intersections as truncated exact power series."""
import itertools
import logging
from dataclasses import dataclass

import sympy as sp

from ..exceptions import CatalogError

logger = logging.getLogger(__name__)

T = sp.Symbol('t')


def _positive_ints(name, values, allow_empty=True):
    values = tuple(values)
    if not allow_empty and not values:
        raise CatalogError(f'{name} must not be empty')
    for value in values:
        if not isinstance(value, int) or value < 1:
            raise CatalogError(f'{name} must be positive integers, got {list(values)}')
    return values


def _truncate(poly, order):
    return sp.Poly(sum((coefficient * T ** degree for (degree,), coefficient in poly.terms()
                        if degree <= order), sp.Integer(0)), T, domain='ZZ')


def _geometric(weight, order):
    """1/(1 − t^w) up to t^order."""
    return sp.Poly(sum(T ** (weight * i) for i in range(order // weight + 1)), T, domain='ZZ')


def _coefficients(poly, order):
    return [int(poly.coeff_monomial(T ** degree)) for degree in range(order + 1)]


@dataclass(frozen=True)
class RationalSeries:
    """(Σ cᵢ tⁱ) / ∏(1 − t^w)."""
    numerator_coefficients: tuple
    weights: tuple

    def __post_init__(self):
        _positive_ints('weights', self.weights)
        if not self.numerator_coefficients:
            raise CatalogError('numerator must have at least one coefficient')

    @classmethod
    def complete_intersection(cls, weights, degrees):
        """∏(1 − t^d) / ∏(1 − t^w)."""
        numerator = sp.Poly(1, T, domain='ZZ')
        for degree in _positive_ints('degrees', degrees):
            numerator = numerator * sp.Poly(1 - T ** degree, T, domain='ZZ')
        return cls(tuple(reversed(numerator.all_coeffs())), tuple(weights))

    def numerator(self):
        return sp.Poly(sum(int(c) * T ** i for i, c in enumerate(self.numerator_coefficients)), T, domain='ZZ')

    def expand(self, order):
        """Coefficients of t⁰ … t^order."""
        series = _truncate(self.numerator(), order)
        for weight in self.weights:
            series = _truncate(series * _geometric(weight, order), order)
        return _coefficients(series, order)


def weighted_monomial_count(weights, degree):
    """Number of monomials of the given weighted degree."""
    if degree < 0:
        return 0
    counts = [1] + [0] * degree
    for weight in weights:
        for total in range(weight, degree + 1):
            counts[total] += counts[total - weight]
    return counts[degree]


def complete_intersection_hilbert_function(weights, degrees, degree):
    """dim of the degree-d part of k[x]/(f₁,…,f_c) for a regular sequence of the given degrees."""
    total = 0
    for size in range(len(degrees) + 1):
        for subset in itertools.combinations(degrees, size):
            total += (-1) ** size * weighted_monomial_count(weights, degree - sum(subset))
    return total


def hilbert_series_check(weights, numerator_degrees, order, alternative=None):
    """Compare ∏(1 − t^d)/∏(1 − t^w) with ``alternative`` up to t^order.

    Without an alternative the comparison is against the complete-intersection Hilbert
    function counted from monomials.
    """
    weights = _positive_ints('weights', weights, allow_empty=False)
    numerator_degrees = _positive_ints('degrees', numerator_degrees)
    if not isinstance(order, int) or order < 1:
        raise CatalogError(f'truncation order must be a positive integer, got {order!r}')

    closed_form = RationalSeries.complete_intersection(weights, numerator_degrees).expand(order)
    if alternative is None:
        other = [complete_intersection_hilbert_function(weights, numerator_degrees, d) for d in range(order + 1)]
    else:
        other = alternative.expand(order)
    agree = closed_form == other
    if not agree:
        first = next(d for d, (a, b) in enumerate(zip(closed_form, other)) if a != b)
        logger.warning('Hilbert series differ first at t^%d: %d vs %d', first, closed_form[first], other[first])
    else:
        logger.debug('Hilbert series of weights %s, degrees %s agree to order %d',
                     weights, numerator_degrees, order)
    return agree


def two_weights_alternative(n, m):
    """(1 + tⁿ + … + t^{n(m−1)}) / ((1−t)²(1−t^{nm−1}))."""
    coefficients = [0] * (n * (m - 1) + 1)
    for j in range(m):
        coefficients[n * j] = 1
    return RationalSeries(tuple(coefficients), (1, 1, n * m - 1))
