"""Construction of surface models: seeds, blow-ups, weighted blow-ups, contractions."""
import logging
from dataclasses import dataclass, field

import sympy as sp

from .exceptions import BuilderError, LatticeError
from .lattice import Curve, SurfaceModel, is_negative_definite, pair, to_rational
from .utils.constants import StepKind

logger = logging.getLogger(__name__)

SEED_CLASS = 'l'
SEED_SINGULARITY = 'o'


# --- Hirzebruch–Jung continued fractions ---

def hj_expand(r, a):
    """Expansion r/a = a₁ − 1/(a₂ − …) with every aᵢ ≥ 2."""
    if not (isinstance(r, int) and isinstance(a, int)) or not 0 < a < r or sp.igcd(r, a) != 1:
        raise BuilderError(f'invalid cyclic quotient data r={r!r}, a={a!r}')
    chain = []
    while a:
        entry = -(-r // a)
        chain.append(entry)
        r, a = a, entry * a - r
    return chain


def hj_evaluate(chain):
    """Evaluate [a₁,…,a_k] to (r, a) with r/a in lowest terms."""
    chain = list(chain)
    if not chain:
        raise BuilderError('empty continued fraction')
    for entry in chain:
        if not isinstance(entry, int) or entry < 2:
            raise BuilderError(f'continued fraction entries must be integers >= 2, got {chain}')
    value = sp.Rational(chain[-1])
    for entry in reversed(chain[:-1]):
        value = entry - 1 / value
    return int(value.p), int(value.q)


@dataclass(frozen=True)
class QuotientSingularity:
    """A cyclic quotient point 1/r(1,a) and its minimal resolution chain.

    ``curves`` names the chain members already present in the basis; the rest of the
    chain is not tracked.
    """
    label: str
    r: int
    a: int
    resolution_chain: tuple
    location: str
    curves: tuple = ()

    def __post_init__(self):
        if hj_evaluate(self.resolution_chain) != (self.r, self.a):
            raise BuilderError(
                f'chain {list(self.resolution_chain)} does not evaluate to {self.r}/{self.a}'
            )

    @property
    def group_order(self):
        return self.r

    @property
    def is_weight_11(self):
        return self.a == 1

    @property
    def local_index(self):
        """Gorenstein index: the least k with kK Cartier at the point."""
        return self.r // sp.igcd(self.r, self.a + 1)

    def describe(self):
        return f'1/{self.r}(1,{self.a})'


@dataclass(frozen=True)
class PointSpec:
    label: str
    incidences: dict = field(default_factory=dict)
    is_general: bool = False

    def __post_init__(self):
        if self.is_general and self.incidences:
            raise BuilderError(f'general point {self.label!r} cannot lie on tracked curves')
        for curve, multiplicity in self.incidences.items():
            if not isinstance(multiplicity, int) or multiplicity < 1:
                raise BuilderError(
                    f'point {self.label!r}: multiplicity on {curve!r} must be a positive integer'
                )


# --- Seeds ---

def seed_wps(n, name=None):
    """P(1,1,n) with ℓ² = 1/n and K = −(n+2)ℓ."""
    if not isinstance(n, int) or n < 1:
        raise BuilderError(f'seed_wps needs n >= 1, got {n!r}')
    singularities = ()
    if n >= 2:
        singularities = (QuotientSingularity(SEED_SINGULARITY, n, 1, (n,), location=SEED_SINGULARITY),)
    model = SurfaceModel(
        name=name or f'P(1,1,{n})',
        basis=(SEED_CLASS,),
        form=sp.ImmutableMatrix([[sp.Rational(1, n)]]),
        canonical=sp.ImmutableMatrix([-(n + 2)]),
        singularities=singularities,
    )
    logger.debug('Seeded %s', model.name)
    return model


def seed_p2(name=None):
    return seed_wps(1, name=name or 'P2')


def declare_curve(model, label, cls, through=None):
    """Track an irreducible curve. ``through`` maps singularity labels to branch multiplicities."""
    if model.has_curve(label):
        raise BuilderError(f'curve {label!r} already declared')
    if not isinstance(cls, sp.MatrixBase):
        cls = model.vector(cls)
    through = dict(through or {})
    for singular, multiplicity in through.items():
        model.singularity(singular)
        if not isinstance(multiplicity, int) or multiplicity < 1:
            raise BuilderError(f'curve {label!r}: multiplicity at {singular!r} must be a positive integer')
    curve = Curve(label, sp.ImmutableMatrix(cls), irreducible=True, through=through)
    return model.replace(curves=model.curves + (curve,))


# --- Blow-ups ---

def _extend(model, label, self_intersection):
    """Append an orthogonal basis class with the given square."""
    if label in model.basis or model.has_curve(label):
        raise BuilderError(f'label {label!r} is already in use')
    size = model.dimension
    form = model.form.row_join(sp.zeros(size, 1)).col_join(
        sp.zeros(1, size).row_join(sp.Matrix([[self_intersection]]))
    )

    def grow(v):
        return sp.ImmutableMatrix(v.col_join(sp.Matrix([[0]])))

    exceptional = sp.ImmutableMatrix([0] * size + [1])
    return sp.ImmutableMatrix(form), grow, exceptional


def blow_up(model, p):
    """Blow up a smooth point; incident curves lose ``mult`` times the new class."""
    if any(record.label == p.label for record in model.singularities):
        raise BuilderError(f'{p.label!r} is a recorded singularity; use weighted_blow_up_11')
    for label in p.incidences:
        if label in model.contracted:
            raise BuilderError(f'cannot blow up on contracted curve {label!r}')
        try:
            model.curve(label)
        except LatticeError:
            raise BuilderError(f'point {p.label!r} lies on unknown curve {label!r}')

    form, grow, exceptional = _extend(model, p.label, -1)
    curves = []
    for curve in model.curves:
        cls = grow(curve.cls) - p.incidences.get(curve.label, 0) * exceptional
        curves.append(Curve(curve.label, sp.ImmutableMatrix(cls), curve.irreducible, curve.through))
    curves.append(Curve(p.label, exceptional))

    result = model.replace(
        basis=model.basis + (p.label,),
        form=form,
        canonical=sp.ImmutableMatrix(grow(model.canonical) + exceptional),
        curves=tuple(curves),
        points=model.points + (p,),
    )
    logger.debug('Blew up %s at %s (incidences %s)', model.name, p.label, p.incidences)
    return result


def weighted_blow_up_11(model, singularity, label='E'):
    """(1,1)-weighted blow-up of a 1/r(1,1) point: E² = −r, K ↦ K + (2/r − 1)E."""
    record = model.singularity(singularity)
    if not record.is_weight_11:
        raise BuilderError(
            f'general weighted blow-ups out of scope: {singularity!r} is {record.describe()}'
        )
    r = record.r
    form, grow, exceptional = _extend(model, label, -r)

    curves = []
    for curve in model.curves:
        through = dict(curve.through)
        branch = through.pop(singularity, 0)
        cls = grow(curve.cls) - sp.Rational(branch, r) * exceptional
        curves.append(Curve(curve.label, sp.ImmutableMatrix(cls), curve.irreducible, through))
    curves.append(Curve(label, exceptional))

    result = model.replace(
        basis=model.basis + (label,),
        form=form,
        canonical=sp.ImmutableMatrix(grow(model.canonical) + (sp.Rational(2, r) - 1) * exceptional),
        curves=tuple(curves),
        singularities=tuple(s for s in model.singularities if s.label != singularity),
    )
    logger.debug('Weighted blow-up of %s at %s (%s), exceptional %s', model.name,
                 singularity, record.describe(), label)
    return result


# --- Contraction ---

def _ordered_chains(model, curves):
    """Split the curve sequence into path-shaped components, each walked from the
    endpoint that appears first in ``curves``."""
    classes = {label: model.curve(label).cls for label in curves}
    neighbours = {label: [] for label in curves}
    for i, first in enumerate(curves):
        for second in curves[i + 1:]:
            value = pair(model, classes[first], classes[second])
            if value == 0:
                continue
            if value != 1:
                raise BuilderError(
                    f'only chain contractions supported: {first}·{second} = {value}'
                )
            neighbours[first].append(second)
            neighbours[second].append(first)

    chains, seen = [], set()
    for label in curves:
        if label in seen:
            continue
        component, stack = set(), [label]
        while stack:
            node = stack.pop()
            if node not in component:
                component.add(node)
                stack.extend(neighbours[node])
        edges = sum(len(neighbours[node]) for node in component) // 2
        if edges != len(component) - 1 or any(len(neighbours[node]) > 2 for node in component):
            raise BuilderError('only chain contractions supported', {'curves': sorted(component)})
        start = next(c for c in curves if c in component and len(neighbours[c]) <= 1)
        chain, previous, node = [start], None, start
        while True:
            following = [c for c in neighbours[node] if c != previous]
            if not following:
                break
            previous, node = node, following[0]
            chain.append(node)
        seen |= component
        chains.append(chain)
    return chains


def _resolution_entries(model, chain):
    """Self-intersection sequence of the minimal resolution over ``chain``.

    A member may pass once, with a simple branch, through a recorded 1/r(1,1) point;
    that point sits at an end of the chain and contributes the entry r.
    """
    entries, absorbed, head, tail = [], [], [], []
    for position, label in enumerate(chain):
        curve = model.curve(label)
        square = pair(model, curve.cls, curve.cls)
        for singular, multiplicity in curve.through.items():
            record = model.singularity(singular)
            if multiplicity != 1 or not record.is_weight_11 or singular in absorbed:
                raise BuilderError('only chain contractions supported',
                                   {label: f'branch through {singular} is not a simple chain end'})
            square -= sp.Rational(1, record.r)
            absorbed.append(singular)
            if position == 0 and not head and len(chain) > 1:
                head.append(record.r)
            elif position == len(chain) - 1 and not tail:
                tail.append(record.r)
            else:
                raise BuilderError('only chain contractions supported',
                                   {label: f'{singular} is not at an end of the chain'})
        if not square.is_integer:
            raise BuilderError(f'curve {label!r} has non-integral resolution self-intersection {square}')
        entries.append(int(-square))
    return head + entries + tail, absorbed


def contract(model, curves, label=None):
    """Collapse a negative-definite union of chains; record a quotient point per chain."""
    curves = list(curves)
    if not curves:
        raise BuilderError('nothing to contract')
    for name in curves:
        if name in model.contracted:
            raise BuilderError(f'curve {name!r} is already contracted')
    try:
        definite = is_negative_definite(model, curves)
    except LatticeError as exc:
        raise BuilderError(exc.message) from exc
    if not definite:
        logger.error('Contraction of %s on %s rejected: not negative definite', curves, model.name)
        raise BuilderError(f'curves {curves} are not negative definite')

    singularities = list(model.singularities)
    for index, chain in enumerate(_ordered_chains(model, curves)):
        entries, absorbed = _resolution_entries(model, chain)
        singularities = [s for s in singularities if s.label not in absorbed]
        if entries == [1] and not absorbed:
            # a (-1)-curve goes to a smooth point
            continue
        if any(entry < 2 for entry in entries):
            raise BuilderError('only chain contractions supported',
                               {'chain': f'non-minimal resolution chain {entries}'})
        r, a = hj_evaluate(entries)
        name = label if label and index == 0 else f'{label or "p"}_{chain[0]}'
        record = QuotientSingularity(name, r, a, tuple(entries), location=chain[0], curves=tuple(chain))
        singularities.append(record)
        logger.debug('Contracted chain %s on %s to %s', chain, model.name, record.describe())

    return model.replace(
        contracted=model.contracted + tuple(curves),
        singularities=tuple(singularities),
    )


# --- Dimension count for curves on P(1,1,n) ---

def curve_count_check(n, degree, mult_general, num_general, num_line_pts, vertex_order=None):
    """Linear conditions imposed on |O(degree)| versus the dimension of the subsystem
    of curves with the required order at the vertex.

    Conditions are μ(μ+1)/2 per general point of multiplicity μ plus one per point on
    the line. The vertex order defaults to degree − n·num_line_pts, the intersection
    of the strict transform with the weighted exceptional curve in the constructions
    this is used for. Returns ``(conditions, sublinear_dim, exists)``.
    """
    if vertex_order is None:
        vertex_order = degree - n * num_line_pts
    conditions = num_general * mult_general * (mult_general + 1) // 2 + num_line_pts
    # monomials x^a y^b z^c with a + b + n c = degree and a + b >= vertex_order
    monomials = sum(degree - n * c + 1 for c in range(degree // n + 1) if degree - n * c >= vertex_order)
    sublinear_dim = monomials - 1
    return conditions, sublinear_dim, sublinear_dim >= conditions


# --- Recipes ---

@dataclass(frozen=True)
class RecipeStep:
    kind: StepKind
    params: dict = field(default_factory=dict)
    checkpoint: str = None
    start: str = None

    @classmethod
    def from_dict(cls, data):
        params = {key: value for key, value in data.items() if key not in ('kind', 'checkpoint', 'from')}
        return cls(StepKind(data['kind']), params, data.get('checkpoint'), data.get('from'))


def _class_from(model, coefficients):
    return model.vector({label: to_rational(value) for label, value in coefficients.items()})


def apply_step(model, step):
    params = step.params
    if step.kind in (StepKind.SEED_P2, StepKind.SEED_WPS):
        if model is not None:
            raise BuilderError('a seed can only start a recipe')
        if step.kind == StepKind.SEED_P2:
            return seed_p2(params.get('name'))
        return seed_wps(params['n'], params.get('name'))
    if model is None:
        raise BuilderError(f'{step.kind.value} before any seed')
    if step.kind == StepKind.DECLARE_CURVE:
        return declare_curve(model, params['label'], _class_from(model, params['class']),
                             params.get('through'))
    if step.kind == StepKind.BLOW_UP:
        point = params['point']
        spec = PointSpec(point['label'], dict(point.get('incidences', {})),
                         bool(point.get('is_general', not point.get('incidences'))))
        return blow_up(model, spec)
    if step.kind == StepKind.WEIGHTED_BLOW_UP_11:
        return weighted_blow_up_11(model, params['singularity'], params.get('label', 'E'))
    if step.kind == StepKind.CONTRACT:
        return contract(model, params['curves'], params.get('label'))
    raise BuilderError(f'unsupported step kind {step.kind!r}')


def apply_recipe(steps, name=None):
    """Run recipe steps in order and return ``{stage name: model}``.

    A step's ``checkpoint`` stores the model it produces under that stage name and
    ``start`` (``"from"`` in recipe files) resumes from an earlier stage. The final
    model is also stored under ``"final"``.
    """
    steps = [step if isinstance(step, RecipeStep) else RecipeStep.from_dict(step) for step in steps]
    if not steps:
        raise BuilderError('empty recipe')
    stages, model = {}, None
    for index, step in enumerate(steps):
        if step.start is not None:
            if step.start not in stages:
                raise BuilderError(f'step {index} resumes from unknown stage {step.start!r}')
            model = stages[step.start]
        try:
            model = apply_step(model, step)
        except (BuilderError, LatticeError) as exc:
            logger.error('Recipe %s failed at step %d (%s): %s', name, index, step.kind.value, exc)
            raise BuilderError(exc.message, {f'steps[{index}]': exc.message}) from exc
        if name:
            model = model.replace(name=f'{name}:{step.checkpoint}' if step.checkpoint else name)
        if step.checkpoint:
            stages[step.checkpoint] = model
    stages['final'] = model
    return stages
