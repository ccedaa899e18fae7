"""Exact intersection theory on a finite set of tracked divisor classes.

Classes are column vectors of ``sympy.Rational`` over the model's basis labels and
the intersection form is a symmetric rational matrix. Nothing here touches floats.
"""
import logging
from dataclasses import dataclass, field, replace

import sympy as sp

from .exceptions import LatticeError

logger = logging.getLogger(__name__)


def to_rational(value):
    """Coerce an int, a sympy rational or a "p/q" string to ``sympy.Rational``."""
    if isinstance(value, bool):
        raise LatticeError(f'not an exact rational: {value!r}')
    if isinstance(value, int):
        return sp.Integer(value)
    if isinstance(value, sp.Basic):
        if value.is_Rational:
            return value
        raise LatticeError(f'not an exact rational: {value!r}')
    if isinstance(value, str):
        numerator, _, denominator = value.strip().partition('/')
        try:
            num = int(numerator)
            den = int(denominator) if denominator else 1
        except ValueError:
            raise LatticeError(f'not an exact rational: {value!r}')
        if den == 0:
            raise LatticeError(f'zero denominator in {value!r}')
        return sp.Rational(num, den)
    raise LatticeError(f'not an exact rational: {value!r}')


@dataclass(frozen=True)
class Curve:
    label: str
    cls: sp.ImmutableMatrix
    irreducible: bool = True
    # singularity label -> local multiplicity of the branch through it
    through: dict = field(default_factory=dict)


@dataclass(frozen=True)
class SurfaceModel:
    """A surface described by tracked classes on (a partial resolution of) it.

    Contracted surfaces keep the upstairs basis: ``contracted`` lists the curves
    that are collapsed and downstairs quantities go through ``orthogonalize``.
    """
    name: str
    basis: tuple
    form: sp.ImmutableMatrix
    canonical: sp.ImmutableMatrix
    curves: tuple = ()
    contracted: tuple = ()
    singularities: tuple = ()
    points: tuple = ()

    def __post_init__(self):
        size = len(self.basis)
        if len(set(self.basis)) != size:
            raise LatticeError('duplicate basis labels', {'basis': list(self.basis)})
        if self.form.shape != (size, size):
            raise LatticeError(f'intersection form has shape {self.form.shape}, expected ({size}, {size})')
        if self.form != self.form.T:
            raise LatticeError('intersection form is not symmetric')
        _check_dimension(self, self.canonical)
        for curve in self.curves:
            _check_dimension(self, curve.cls)

    @property
    def dimension(self):
        return len(self.basis)

    def index(self, label):
        try:
            return self.basis.index(label)
        except ValueError:
            raise LatticeError(f'unknown basis label {label!r}')

    def vector(self, coefficients=None):
        """Build a class from a mapping ``{basis label: rational}``."""
        entries = [sp.Integer(0)] * self.dimension
        for label, value in (coefficients or {}).items():
            entries[self.index(label)] = to_rational(value)
        return sp.ImmutableMatrix(entries)

    def zero(self):
        return sp.ImmutableMatrix.zeros(self.dimension, 1)

    def curve(self, label):
        for curve in self.curves:
            if curve.label == label:
                return curve
        raise LatticeError(f'unknown curve label {label!r}')

    def has_curve(self, label):
        return any(curve.label == label for curve in self.curves)

    @property
    def curve_labels(self):
        return tuple(curve.label for curve in self.curves)

    def singularity(self, label):
        for record in self.singularities:
            if record.label == label:
                return record
        raise LatticeError(f'unknown singularity label {label!r}')

    @property
    def anticanonical(self):
        return -self.canonical

    @property
    def pullback_anticanonical(self):
        """−K of the surface this model represents, pulled back to the basis."""
        if not self.contracted:
            return self.anticanonical
        return orthogonalize(self, self.anticanonical, self.contracted)

    @property
    def volume(self):
        pullback = self.pullback_anticanonical
        return pair(self, pullback, pullback)

    @property
    def resolution_rank(self):
        """Picard rank of the minimal resolution of the represented surface."""
        hidden = sum(len(s.resolution_chain) - len(s.curves) for s in self.singularities)
        return self.dimension + hidden

    def coordinates(self, v):
        """Nonzero coefficients of ``v`` keyed by basis label."""
        _check_dimension(self, v)
        return {label: v[i] for i, label in enumerate(self.basis) if v[i] != 0}

    def replace(self, **changes):
        return replace(self, **changes)


def _check_dimension(model, v):
    if v.shape != (model.dimension, 1):
        raise LatticeError(
            f'class has shape {v.shape}, model {model.name!r} has {model.dimension} basis classes'
        )


def pair(model, u, v):
    """Intersection number u·v."""
    _check_dimension(model, u)
    _check_dimension(model, v)
    return (u.T * model.form * v)[0, 0]


def gram(model, curves):
    """Intersection submatrix of the given curve labels, in the given order."""
    classes = [model.curve(label).cls for label in curves]
    return sp.ImmutableMatrix(len(classes), len(classes),
                              lambda i, j: pair(model, classes[i], classes[j]))


def _solve(matrix, rhs):
    if matrix.det() == 0:
        raise LatticeError('degenerate curve configuration')
    return matrix.LUsolve(rhs)


def orthogonalize(model, v, curves):
    """Return v + Σ cᵢCᵢ orthogonal to every curve in ``curves``."""
    curves = tuple(curves)
    if not curves:
        return v
    matrix = gram(model, curves)
    classes = [model.curve(label).cls for label in curves]
    rhs = sp.ImmutableMatrix([-pair(model, v, c) for c in classes])
    coefficients = _solve(matrix, rhs)
    result = v
    for coefficient, c in zip(coefficients, classes):
        result = result + coefficient * c
    return sp.ImmutableMatrix(result)


def is_negative_definite(model, curves):
    """Exact test by signs of the leading principal minors."""
    curves = tuple(curves)
    if not curves:
        raise LatticeError('negative definiteness of an empty curve set is undefined')
    return _negative_definite(gram(model, curves))


def _negative_definite(matrix):
    for k in range(1, matrix.shape[0] + 1):
        if (-1) ** k * matrix[:k, :k].det() <= 0:
            return False
    return True


def solve_discrepancies(model, curves):
    """Log discrepancies Aᵢ = 1 + dᵢ where Σ dᵢ Eᵢ·Eⱼ = K·Eⱼ."""
    curves = tuple(curves)
    matrix = gram(model, curves)
    rhs = sp.ImmutableMatrix([pair(model, model.canonical, model.curve(label).cls) for label in curves])
    try:
        discrepancies = _solve(matrix, rhs)
    except LatticeError:
        logger.error('Singular discrepancy system for %s on %s', curves, model.name)
        raise
    result = {label: 1 + d for label, d in zip(curves, discrepancies)}
    logger.debug('Log discrepancies on %s: %s', model.name, result)
    return result


def chain_discrepancies(chain):
    """Log discrepancies along a chain of smooth rational curves Eᵢ² = −aᵢ.

    Adjunction gives K·Eᵢ = aᵢ − 2; neighbours meet once.
    """
    size = len(chain)
    if size == 0:
        raise LatticeError('empty chain')

    def entry(i, j):
        if i == j:
            return -sp.Integer(chain[i])
        return sp.Integer(1) if abs(i - j) == 1 else sp.Integer(0)

    matrix = sp.ImmutableMatrix(size, size, entry)
    rhs = sp.ImmutableMatrix([sp.Integer(a - 2) for a in chain])
    return [1 + d for d in _solve(matrix, rhs)]
