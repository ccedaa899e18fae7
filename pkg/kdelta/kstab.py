"""Valuative invariants on top of Zariski paths: A, S, β, S(W;q) and δ bounds."""
import logging
from dataclasses import dataclass, field

import sympy as sp

from .exceptions import KStabilityError
from .lattice import pair, solve_discrepancies, to_rational
from .utils.constants import BoundMode, LiuVerdict, PointMode, Verdict
from .zariski import PiecewiseQuadratic, flag_degree, integrate, volume_function, zariski_path

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class LocalMultiplicity:
    value: sp.Rational
    upper_bound: bool = False

    @property
    def mode(self):
        return PointMode.UPPER_BOUND if self.upper_bound else PointMode.EXACT


def exact(value):
    return LocalMultiplicity(to_rational(value))


def at_most(value):
    return LocalMultiplicity(to_rational(value), upper_bound=True)


@dataclass(frozen=True)
class FlagPointSpec:
    """A point q on the flag curve with its local intersection numbers (C·E)_q."""
    label: str
    flag: str
    multiplicities: dict = field(default_factory=dict)
    log_discrepancy: sp.Rational = sp.Integer(1)
    is_generic: bool = False

    def __post_init__(self):
        if self.is_generic and self.multiplicities:
            raise KStabilityError(f'generic point {self.label!r} cannot carry local data')
        if not 0 < self.log_discrepancy <= 1:
            raise KStabilityError(f'log discrepancy of {self.label!r} must lie in (0, 1]')

    def validate(self, model):
        """Declared local numbers cannot exceed the global intersection with the flag."""
        flag_class = model.curve(self.flag).cls
        for label, local in self.multiplicities.items():
            total = pair(model, model.curve(label).cls, flag_class)
            if local.value < 0 or local.value > total:
                raise KStabilityError(
                    f'point {self.label!r}: ({label}·{self.flag}) = {local.value} exceeds {label}·{self.flag} = {total}'
                )


def generic_point(flag, label='generic'):
    return FlagPointSpec(label, flag, is_generic=True)


@dataclass(frozen=True)
class PointEntry:
    point: str
    s_w: sp.Rational
    mode: PointMode
    quotient: sp.Rational


@dataclass(frozen=True)
class DeltaReport:
    flag: str
    A: sp.Rational
    S: sp.Rational
    tau: sp.Rational
    ratio: sp.Rational
    entries: tuple
    delta_lower_bound: sp.Rational
    bound_mode: BoundMode
    verdict: Verdict
    volume: sp.Rational
    path: object = None

    @property
    def beta(self):
        return self.A - self.S


def s_invariant(path):
    """S(E) = (1/vol) ∫₀^τ vol(t) dt."""
    return integrate(volume_function(path), 0, path.tau) / path.start_volume


def log_discrepancy(model, flag):
    """A(E) over the represented surface; 1 for a curve that is not contracted."""
    if flag not in model.contracted:
        model.curve(flag)
        return sp.Integer(1)
    # connected component of the contracted locus containing the flag
    component, stack = [], [flag]
    while stack:
        label = stack.pop()
        if label in component:
            continue
        component.append(label)
        cls = model.curve(label).cls
        stack.extend(other for other in model.contracted
                     if other not in component and pair(model, cls, model.curve(other).cls) != 0)
    return solve_discrepancies(model, component)[flag]


def beta(model, flag):
    return log_discrepancy(model, flag) - s_invariant(zariski_path(model, flag))


def restricted_profile(path, q):
    """h(t) = (P·E)·Σ coeff_N(C)·(C·E)_q + ½(P·E)².

    Returns ``(h, mode)``; mode is upper_bound when a bounded multiplicity meets the
    negative part.
    """
    if q.flag != path.flag:
        raise KStabilityError(f'point {q.label!r} lies on {q.flag}, not on {path.flag}')
    q.validate(path.model)
    degree = flag_degree(path)
    pieces, mode = [], PointMode.EXACT
    for segment, flag_part in zip(path.segments, degree.pieces):
        local = sp.Poly(0, flag_part.gens[0], domain='QQ')
        for label in segment.support:
            multiplicity = q.multiplicities.get(label)
            if multiplicity is None or multiplicity.value == 0:
                continue
            local += segment.coefficient_poly(label) * multiplicity.value
            if multiplicity.upper_bound:
                mode = PointMode.UPPER_BOUND
        pieces.append(flag_part * local + flag_part ** 2 * sp.Rational(1, 2))
    return PiecewiseQuadratic(degree.breakpoints, pieces), mode


def s_w(path, q):
    """S(W;q) = (2/vol) ∫₀^τ h(t) dt, with the mode of the profile."""
    profile, mode = restricted_profile(path, q)
    return 2 * integrate(profile, 0, path.tau) / path.start_volume, mode


def delta_lower_bound(model, flag, points, path=None):
    """min{A/S, A_{E,Φ}(q)/S(W;q)} over the flag and the listed points."""
    points = list(points)
    if not any(point.is_generic for point in points):
        raise KStabilityError(f'flag {flag}: a generic point is required')
    path = path or zariski_path(model, flag)
    A = log_discrepancy(model, flag)
    S = s_invariant(path)
    ratio = A / S

    entries = []
    for point in points:
        value, mode = s_w(path, point)
        if value <= 0:
            raise KStabilityError(f'S(W;{point.label}) = {value} is not positive')
        entries.append(PointEntry(point.label, value, mode, point.log_discrepancy / value))
    entries.sort(key=lambda entry: entry.point)

    bound = min([ratio] + [entry.quotient for entry in entries])
    bounded = any(entry.mode == PointMode.UPPER_BOUND for entry in entries)
    bound_mode = BoundMode.LOWER_BOUND if bounded else BoundMode.EXACT
    if bound > 1:
        verdict = Verdict.DELTA_GT_1
    elif bound == 1 and (ratio == 1 or any(e.quotient == 1 and e.mode == PointMode.EXACT for e in entries)):
        verdict = Verdict.DELTA_EQ_1
    else:
        verdict = Verdict.INCONCLUSIVE

    report = DeltaReport(flag, A, S, path.tau, ratio, tuple(entries), bound,
                         bound_mode, verdict, path.start_volume, path)
    log = logger.warning if verdict == Verdict.INCONCLUSIVE else logger.info
    log('%s on %s: A=%s S=%s A/S=%s bound=%s (%s) -> %s', flag, model.name, A, S, ratio,
        bound, bound_mode.value, verdict.value)
    return report


def liu_test(volume, group_order):
    """Excluded when (−K)² exceeds 9/|G|."""
    volume = to_rational(volume)
    if volume <= 0:
        raise KStabilityError(f'volume must be positive, got {volume}')
    if not isinstance(group_order, int) or group_order < 1:
        raise KStabilityError(f'group order must be a positive integer, got {group_order!r}')
    if volume > sp.Rational(9, group_order):
        return LiuVerdict.EXCLUDED_UNSTABLE
    return LiuVerdict.PASSES


def alpha_delta_bounds(alpha, dim):
    """((d+1)/d·α, (d+1)·α)."""
    alpha = to_rational(alpha)
    if alpha <= 0:
        raise KStabilityError(f'alpha must be positive, got {alpha}')
    if not isinstance(dim, int) or dim < 1:
        raise KStabilityError(f'dimension must be a positive integer, got {dim!r}')
    return sp.Rational(dim + 1, dim) * alpha, (dim + 1) * alpha


def scaled_path(path, factor):
    """The path of factor·start for the same flag."""
    factor = to_rational(factor)
    if factor <= 0:
        raise KStabilityError('scaling factor must be positive')
    return zariski_path(path.model, path.flag, start=factor * path.start)
