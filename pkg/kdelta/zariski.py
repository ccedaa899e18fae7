"""Zariski decompositions and the chamber walk of φ*(−K) − tE."""
import logging
from dataclasses import dataclass

import sympy as sp

from .exceptions import ZariskiError
from .lattice import gram, is_negative_definite, pair, to_rational

logger = logging.getLogger(__name__)

T = sp.Symbol('t')

NOT_PSEUDOEFFECTIVE = 'not pseudoeffective over tracked cone'
DATA_INCOMPLETE = 'pseudoeffective data incomplete'


def _poly(expr):
    return sp.Poly(expr, T, domain='QQ')


class PiecewiseQuadratic:
    """Exact piecewise polynomial of degree at most two in ``t``."""

    def __init__(self, breakpoints, pieces):
        breakpoints = [to_rational(b) for b in breakpoints]
        pieces = [piece if isinstance(piece, sp.Poly) else _poly(piece) for piece in pieces]
        if len(pieces) != len(breakpoints) - 1 or not pieces:
            raise ZariskiError('need one piece per interval')
        if any(lo >= hi for lo, hi in zip(breakpoints, breakpoints[1:])):
            raise ZariskiError(f'breakpoints must increase strictly: {breakpoints}')
        if any(piece.degree() > 2 for piece in pieces):
            raise ZariskiError('pieces must have degree at most 2')
        self.breakpoints = tuple(breakpoints)
        self.pieces = tuple(pieces)

    def __repr__(self):
        return f'PiecewiseQuadratic({list(self.breakpoints)}, {[p.as_expr() for p in self.pieces]})'

    def __eq__(self, other):
        return (isinstance(other, PiecewiseQuadratic)
                and self.breakpoints == other.breakpoints and self.pieces == other.pieces)

    @property
    def domain(self):
        return self.breakpoints[0], self.breakpoints[-1]

    def coefficients(self, index):
        """(c₀, c₁, c₂) of the piece on the index-th interval."""
        piece = self.pieces[index]
        return tuple(piece.coeff_monomial(T ** k) for k in range(3))

    def _locate(self, t):
        lo, hi = self.domain
        if not lo <= t <= hi:
            raise ZariskiError(f't = {t} outside [{lo}, {hi}]')
        for index in range(len(self.pieces)):
            if t <= self.breakpoints[index + 1]:
                return index
        return len(self.pieces) - 1

    def __call__(self, t):
        t = to_rational(t)
        return self.pieces[self._locate(t)].eval(t)

    def is_continuous(self):
        return all(left.eval(b) == right.eval(b)
                   for left, right, b in zip(self.pieces, self.pieces[1:], self.breakpoints[1:-1]))

    def to_float_callable(self):
        """Float evaluator, for numeric cross-checks only."""
        bounds = [float(b) for b in self.breakpoints]
        coefficients = [[float(c) for c in self.coefficients(i)] for i in range(len(self.pieces))]

        def evaluate(t):
            for index, hi in enumerate(bounds[1:]):
                if t <= hi or index == len(coefficients) - 1:
                    c0, c1, c2 = coefficients[index]
                    return c0 + c1 * t + c2 * t * t
        return evaluate


def integrate(f, a, b):
    """Exact ∫ₐᵇ f."""
    a, b = to_rational(a), to_rational(b)
    lo, hi = f.domain
    if not lo <= a <= b <= hi:
        raise ZariskiError(f'integration bounds [{a}, {b}] outside [{lo}, {hi}]')
    total = sp.Integer(0)
    for piece, left, right in zip(f.pieces, f.breakpoints, f.breakpoints[1:]):
        left, right = max(left, a), min(right, b)
        if left >= right:
            continue
        antiderivative = piece.integrate()
        total += antiderivative.eval(right) - antiderivative.eval(left)
    return total


@dataclass(frozen=True)
class AffineClass:
    """The class base + t·slope."""
    base: sp.ImmutableMatrix
    slope: sp.ImmutableMatrix

    def at(self, t):
        return sp.ImmutableMatrix(self.base + to_rational(t) * self.slope)

    def scale(self, factor):
        return AffineClass(sp.ImmutableMatrix(factor * self.base), sp.ImmutableMatrix(factor * self.slope))

    def pair(self, model, v):
        """(base·v, slope·v)."""
        return pair(model, self.base, v), pair(model, self.slope, v)

    def pair_poly(self, model, v):
        value, slope = self.pair(model, v)
        return _poly(value + slope * T)

    def square(self, model):
        b, s = self.base, self.slope
        return _poly(pair(model, b, b) + 2 * pair(model, b, s) * T + pair(model, s, s) * T ** 2)


@dataclass(frozen=True)
class ZariskiSegment:
    t_lo: sp.Rational
    t_hi: sp.Rational
    support: tuple
    # label -> (α, β): the coefficient of the curve in N(t) is α + βt
    coefficients: dict
    positive: AffineClass

    def coefficient(self, label, t):
        alpha, beta = self.coefficients.get(label, (0, 0))
        return alpha + beta * to_rational(t)

    def coefficient_poly(self, label):
        alpha, beta = self.coefficients.get(label, (0, 0))
        return _poly(alpha + beta * T)


@dataclass(frozen=True)
class ZariskiPath:
    model: object
    flag: str
    start: sp.ImmutableMatrix
    segments: tuple
    tau: sp.Rational

    @property
    def breakpoints(self):
        return tuple([self.segments[0].t_lo] + [segment.t_hi for segment in self.segments])

    def positive_part(self, index):
        return self.segments[index].positive

    def segment_at(self, t):
        t = to_rational(t)
        for segment in self.segments:
            if t <= segment.t_hi:
                return segment
        raise ZariskiError(f't = {t} beyond the threshold {self.tau}')

    @property
    def start_volume(self):
        return pair(self.model, self.start, self.start)


def _candidates(model, order):
    labels = tuple(curve.label for curve in model.curves if curve.irreducible)
    if order is None:
        return labels
    order = tuple(order)
    if sorted(order) != sorted(labels):
        raise ZariskiError('insertion order must be a permutation of the tracked curves')
    return order


def _positive_part(model, divisor, support):
    """Solve P·C = 0 on the support; returns (P, {label: (α, β)})."""
    if not support:
        return divisor, {}
    matrix = gram(model, support)
    if matrix.det() == 0:
        raise ZariskiError(NOT_PSEUDOEFFECTIVE, {'support': list(support)})
    classes = [model.curve(label).cls for label in support]
    rhs_base = sp.ImmutableMatrix([pair(model, divisor.base, c) for c in classes])
    rhs_slope = sp.ImmutableMatrix([pair(model, divisor.slope, c) for c in classes])
    alpha = matrix.LUsolve(rhs_base)
    beta = matrix.LUsolve(rhs_slope)
    base, slope = divisor.base, divisor.slope
    for a, b, c in zip(alpha, beta, classes):
        base = base - a * c
        slope = slope - b * c
    coefficients = {label: (a, b) for label, a, b in zip(support, alpha, beta)}
    return AffineClass(sp.ImmutableMatrix(base), sp.ImmutableMatrix(slope)), coefficients


def _grow_support(model, divisor, support, t0, candidates):
    """Add curves that P(t) meets negatively just after t0 until nothing changes."""
    support = list(support)
    while True:
        positive, coefficients = _positive_part(model, divisor, support)
        entering = []
        for label in candidates:
            if label in support:
                continue
            value, slope = positive.pair(model, model.curve(label).cls)
            value = value + slope * t0
            if value < 0 or (value == 0 and slope < 0):
                entering.append(label)
        if not entering:
            break
        support.extend(entering)
        logger.debug('t=%s: %s enter the negative part', t0, entering)
        if not is_negative_definite(model, support):
            logger.error('Support %s at t=%s is not negative definite', support, t0)
            raise ZariskiError(NOT_PSEUDOEFFECTIVE, {'support': list(support)})
    for label, (alpha, beta) in coefficients.items():
        value = alpha + beta * t0
        if value < 0 or (value == 0 and beta < 0):
            raise ZariskiError(NOT_PSEUDOEFFECTIVE, {label: f'coefficient {alpha} + {beta}t at t={t0}'})
    return tuple(support), positive, coefficients


def zariski_decompose(model, divisor, order=None):
    """Zariski decomposition of a fixed class over the tracked curves.

    Returns ``(P, N)`` with N a ``{label: coefficient}`` map.
    """
    candidates = _candidates(model, order)
    fixed = AffineClass(sp.ImmutableMatrix(divisor), model.zero())
    support, positive, coefficients = _grow_support(model, fixed, (), sp.Integer(0), candidates)
    negative = {label: coefficients[label][0] for label in support}
    return positive.base, negative


def _next_crossing(model, positive, support, t0, candidates):
    crossing = None
    for label in candidates:
        if label in support:
            continue
        value, slope = positive.pair(model, model.curve(label).cls)
        if slope >= 0:
            continue
        root = -value / slope
        if root > t0 and (crossing is None or root < crossing):
            crossing = root
    return crossing


def _volume_root(volume, t0):
    if volume.is_zero:
        return t0
    roots = [root for root in volume.real_roots() if bool(root >= t0)]
    if not roots:
        return None
    root = min(roots, key=lambda r: sp.N(r, 30))
    if not root.is_Rational:
        raise ZariskiError(f'pseudoeffective threshold {root} is not rational')
    return root


def zariski_path(model, flag, start=None, order=None):
    """Walk the chambers of start − t·flag from t = 0 to the threshold τ."""
    flag_class = model.curve(flag).cls
    start = model.pullback_anticanonical if start is None else sp.ImmutableMatrix(start)
    candidates = _candidates(model, order)
    divisor = AffineClass(start, sp.ImmutableMatrix(-flag_class))

    if pair(model, start, start) <= 0:
        raise ZariskiError(f'start class of {model.name} is not big')

    t0, support, segments = sp.Integer(0), (), []
    while True:
        support, positive, coefficients = _grow_support(model, divisor, support, t0, candidates)
        volume = positive.square(model)
        crossing = _next_crossing(model, positive, support, t0, candidates)
        if crossing is not None and volume.eval(crossing) > 0:
            segments.append(ZariskiSegment(t0, crossing, support, coefficients, positive))
            t0 = crossing
            continue
        tau = _volume_root(volume, t0)
        if tau is None:
            logger.error('No threshold for %s on %s after t=%s', flag, model.name, t0)
            raise ZariskiError(DATA_INCOMPLETE, {'flag': flag, 't': str(t0)})
        if tau > t0:
            segments.append(ZariskiSegment(t0, tau, support, coefficients, positive))
        break

    if not segments:
        raise ZariskiError(DATA_INCOMPLETE, {'flag': flag})
    path = ZariskiPath(model, flag, start, tuple(segments), tau)
    logger.debug('Zariski path of %s on %s: breakpoints %s', flag, model.name, list(path.breakpoints))
    return path


def volume_function(path):
    """vol(t) = P(t)² per chamber."""
    pieces = [segment.positive.square(path.model) for segment in path.segments]
    return PiecewiseQuadratic(path.breakpoints, pieces)


def flag_degree(path):
    """P(t)·E per chamber."""
    flag_class = path.model.curve(path.flag).cls
    pieces = [segment.positive.pair_poly(path.model, flag_class) for segment in path.segments]
    return PiecewiseQuadratic(path.breakpoints, pieces)
