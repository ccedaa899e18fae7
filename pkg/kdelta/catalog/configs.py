"""Named surface configurations and their declared intersection data.

Every configuration is a recipe document of the same shape as a recipe file. It is
validated with the recipe schema and built with ``apply_recipe``, so the catalog and
user recipes share one code path.
"""
import functools
import logging
from dataclasses import dataclass

import sympy as sp

from ..builder import apply_recipe
from ..exceptions import CatalogError, KDeltaError
from ..kstab import FlagPointSpec, LocalMultiplicity, generic_point, log_discrepancy
from ..lattice import pair, to_rational
from ..schemas import validate_recipe
from ..utils.constants import RECIPE_FORMAT_VERSION, ErrorMessages

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class FlagSetup:
    stage: str
    flag: str
    points: tuple


@dataclass(frozen=True)
class Check:
    """One declared number of a configuration, e.g. ``L·C = 4/3`` on stage S1."""
    stage: str
    kind: str
    args: tuple
    expected: object


@dataclass(frozen=True)
class CatalogConfig:
    name: str
    recipe: dict
    stages: dict
    flags: tuple = ()
    checks: tuple = ()

    @property
    def model(self):
        return self.stages['final']

    def setup(self, flag):
        for candidate in self.flags:
            if candidate.flag == flag:
                return candidate
        if self.model.has_curve(flag):
            return FlagSetup('final', flag, (generic_point(flag),))
        raise CatalogError(f'{ErrorMessages.UNKNOWN_FLAG} {flag!r}', {'flag': flag})

    def model_for(self, flag):
        return self.stages[self.setup(flag).stage]

    def points(self, flag):
        return list(self.setup(flag).points)

    def verify(self):
        """Recompute every declared check; returns the mismatches."""
        mismatches = []
        for check in self.checks:
            actual = _evaluate(self.stages[check.stage], check)
            if actual != check.expected:
                mismatches.append((check, actual))
        return mismatches


def _evaluate(model, check):
    if check.kind == 'pair':
        first, second = (model.curve(label).cls for label in check.args)
        return pair(model, first, second)
    if check.kind == 'volume':
        return model.volume
    if check.kind in ('anticanonical', 'pullback'):
        target = model.anticanonical if check.kind == 'anticanonical' else model.pullback_anticanonical
        combination = model.zero()
        for label, coefficient in check.expected.items():
            combination = combination + coefficient * model.curve(label).cls
        return check.expected if combination == target else model.coordinates(target)
    if check.kind == 'log_discrepancy':
        return log_discrepancy(model, check.args[0])
    if check.kind == 'singularity':
        return model.singularity(check.args[0]).describe()
    raise CatalogError(f'unknown check kind {check.kind!r}')


# --- Recipe fragments ---

def _seed(n):
    if n == 1:
        return {'kind': 'seed_p2'}
    return {'kind': 'seed_wps', 'n': n}


def _curve(label, degree, through=None):
    step = {'kind': 'declare_curve', 'label': label, 'class': {'l': degree}}
    if through:
        step['through'] = through
    return step


def _point(label, checkpoint=None, **incidences):
    step = {'kind': 'blow_up', 'point': {'label': label, 'incidences': incidences}}
    if not incidences:
        step['point']['is_general'] = True
    if checkpoint:
        step['checkpoint'] = checkpoint
    return step


def _contract(curves, checkpoint, label='p'):
    return {'kind': 'contract', 'curves': list(curves), 'label': label, 'checkpoint': checkpoint}


def _flag_point(label, **multiplicities):
    """Point entry of a recipe flag; a value given as ('<=', v) is an upper bound."""
    entry = {'label': label, 'multiplicities': {}}
    for curve, value in multiplicities.items():
        if isinstance(value, tuple):
            entry['multiplicities'][curve] = {'value': str(value[1]), 'mode': 'upper_bound'}
        else:
            entry['multiplicities'][curve] = str(value)
    return entry


def _flag(stage, flag, *points):
    return {'stage': stage, 'flag': flag,
            'points': [{'label': 'generic', 'is_generic': True}] + list(points)}


def _recipe(name, steps, flags=()):
    return {'format_version': RECIPE_FORMAT_VERSION, 'name': name, 'steps': steps, 'flags': list(flags)}


# --- Recipes ---

def _one_point_tower(n):
    """P(1,1,n) with n+4 points, the first on L and the rest on the (n+1)-curve C;
    then one more point on L."""
    degree = n + 1
    steps = [
        _seed(n),
        _curve('L', 1, {'o': 1}),
        _curve('C', degree, {'o': 1}),
        _point('e1', L=1),
    ]
    steps += [_point(f'e{i}', C=1) for i in range(2, n + 5)]
    steps[-1]['checkpoint'] = 'S'
    steps += [
        _point('f', checkpoint='S1', L=1),
        _contract(['L'], 'X1'),
        {'kind': 'weighted_blow_up_11', 'singularity': 'o', 'label': 'E', 'from': 'S1', 'checkpoint': 'S2'},
        _contract(['L', 'E'], 'X2'),
    ]
    flags = [
        _flag('X1', 'L', _flag_point('L∩C', C=1)),
        _flag('X2', 'E', _flag_point('E∩L', L=1), _flag_point('E∩C', C=1)),
    ]
    return _recipe(f'S{n}2{n + 3}', steps, flags)


def recipe_s326():
    return _one_point_tower(3)


def recipe_s427():
    return _one_point_tower(4)


def _flag_e_family(n, m):
    """P(1,1,n) with the ((m+1)n + m + 2)-curve C; flag E over the 1/n point."""
    degree = (m + 1) * n + m + 2
    through = n + m + 2
    steps = [_seed(n), _curve('L', 1, {'o': 1}), _curve('C', degree, {'o': through})]
    steps += [_point(f'p{i}', L=1, C=1) for i in range(1, m + 1)]
    steps += [_point(f'q{i}', C=m + 1) for i in range(1, n + 3)]
    steps[-1]['checkpoint'] = 'S1'
    steps += [
        {'kind': 'weighted_blow_up_11', 'singularity': 'o', 'label': 'E', 'checkpoint': 'S2'},
        _contract(['L', 'E'], 'X'),
    ]
    flags = [_flag('X', 'E', _flag_point('E∩L', L=1), _flag_point('E∩C', C=('<=', through)))]
    return _recipe(f'S{n}{m}{n + 2}', steps, flags)


def recipe_sn2_flag_e(n):
    return _flag_e_family(n, 2)


def recipe_sn3_flag_e(n):
    return _flag_e_family(n, 3)


def recipe_snm_n2(n, m):
    """m points on L, n+2 general points, the curves C_i in |O(n)| through all but the i-th."""
    steps = [_seed(n), _curve('L', 1, {'o': 1})]
    steps += [_curve(f'C{i}', n) for i in range(1, n + 3)]
    steps += [_point(f'E{j}', L=1) for j in range(1, m + 1)]
    for j in range(1, n + 3):
        steps.append(_point(f'G{j}', **{f'C{i}': 1 for i in range(1, n + 3) if i != j}))
    steps[-1]['checkpoint'] = 'S1'
    steps.append(_contract(['L'], 'X'))
    flags = [_flag('X', 'L', _flag_point('L∩C1', C1=1), _flag_point('L∩E1', E1=1))]
    return _recipe(f'S{n}{m}{n + 2}_L', steps, flags)


def recipe_smooth_tower(n):
    """n+3 general points, L through the first, and two more points on L."""
    steps = [_seed(n), _curve('L', 1, {'o': 1}), _point('G1', L=1)]
    steps += [_point(f'G{i}') for i in range(2, n + 4)]
    steps[-1]['checkpoint'] = 'S'
    steps += [_point('q1', L=1), _point('q2', checkpoint='S1', L=1), _contract(['L'], 'X')]
    return _recipe(f'S{n}3{n + 2}_smoothtower', steps)


def recipe_p2_two_lines(n, m):
    steps = [_seed(1), _curve('Ln', 1), _curve('Lm', 1)]
    steps += [_point(f'a{i}', Ln=1) for i in range(1, n + 2)]
    steps += [_point(f'b{i}', Lm=1) for i in range(1, m + 2)]
    steps[-1]['checkpoint'] = 'S1'
    steps.append(_contract(['Lm', 'Ln'], 'X'))
    return _recipe(f'P2_two_lines_{n}_{m}', steps)


def recipe_wps_line_points(n, m):
    """S_{n,m}^{n+1} from P(1,1,n): m points on L and n+1 general points; contract L."""
    steps = [_seed(n), _curve('L', 1, {'o': 1})]
    steps += [_point(f'e{i}', L=1) for i in range(1, m + 1)]
    steps += [_point(f'g{i}') for i in range(1, n + 2)]
    steps[-1]['checkpoint'] = 'S1'
    steps.append(_contract(['L'], 'X'))
    return _recipe(f'S{n}{m}{n + 1}_wps', steps)


# --- Declared tables ---

def _r(value):
    return to_rational(value)


def _checks_one_point_tower(n):
    """Intersection data of the one-point towers over P(1,1,n), n = 3, 4."""
    r = 2 * n - 1
    line = -sp.Rational(n - 1, n)
    return (
        Check('S', 'pair', ('L', 'L'), line),
        Check('S', 'pair', ('C', 'C'), line),
        Check('S', 'pair', ('L', 'C'), _r(f'{n + 1}/{n}')),
        Check('S', 'anticanonical', (), {'L': 1, 'C': 1}),
        Check('S1', 'pair', ('L', 'L'), line - 1),
        Check('X1', 'pullback', (), {'C': 1, 'L': sp.Rational(n + 1, r)}),
        Check('X1', 'volume', (), {3: _r('2/5'), 4: _r('1/7')}[n]),
        Check('X1', 'log_discrepancy', ('L',), sp.Rational(n + 1, r)),
        Check('X1', 'singularity', ('p',), f'1/{r}(1,{n})'),
        Check('S2', 'pair', ('E', 'E'), -n),
        Check('S2', 'pair', ('L', 'L'), -2),
        Check('S2', 'pair', ('C', 'C'), -1),
        Check('S2', 'pair', ('L', 'E'), 1),
        Check('S2', 'pair', ('C', 'E'), 1),
        Check('X2', 'pullback', (), {'C': 1, 'L': sp.Rational(n + 1, r), 'E': sp.Rational(3, r)}),
        Check('X2', 'log_discrepancy', ('E',), sp.Rational(3, r)),
        Check('X2', 'singularity', ('p',), f'1/{r}(1,{n})'),
    )


def _checks_flag_e(n, m):
    checks = [
        Check('S2', 'pair', ('E', 'E'), -n),
        Check('S2', 'pair', ('L', 'L'), -m),
        Check('S2', 'pair', ('C', 'C'), -n - m - 2),
        Check('S2', 'pair', ('C', 'E'), n + m + 2),
        Check('S2', 'pair', ('L', 'E'), 1),
    ]
    if m == 2:
        checks.append(Check('X', 'log_discrepancy', ('E',), sp.Rational(3, 2 * n - 1)))
        checks.append(Check('S2', 'anticanonical', (),
                            {'E': _r('4/3'), 'L': _r('2/3'), 'C': _r('1/3')}))
    return tuple(checks)


def _checks_smooth_tower(n):
    r = 3 * n - 1
    return (
        Check('X', 'volume', (), sp.Integer(1) if n == 3 else _r('9/11')),
        Check('X', 'log_discrepancy', ('L',), sp.Rational(1, 2) if n == 3 else _r('5/11')),
        Check('X', 'singularity', ('p',), f'1/{r}(1,{n})'),
    )


def _checks_line_contraction(n, m):
    return (
        Check('X', 'log_discrepancy', ('L',), sp.Rational(n + 1, m * n - 1)),
        Check('X', 'singularity', ('p',), f'1/{m * n - 1}(1,{n})'),
    )


def _checks_two_lines(n, m):
    return (
        Check('S1', 'pair', ('Ln', 'Ln'), -n),
        Check('S1', 'pair', ('Lm', 'Lm'), -m),
        Check('S1', 'pair', ('Ln', 'Lm'), 1),
        Check('X', 'singularity', ('p',), f'1/{m * n - 1}(1,{n})'),
    )


# --- Registry ---

def _in_range(name, value, low, high=None):
    if not isinstance(value, int) or value < low or (high is not None and value > high):
        bound = f'{low}..{high}' if high is not None else f'>= {low}'
        raise CatalogError(f'{name}: parameter {value!r} outside {bound}', {name: value})


CONFIGURATIONS = {
    'S326': (0, lambda: (recipe_s326(), _checks_one_point_tower(3))),
    'S427': (0, lambda: (recipe_s427(), _checks_one_point_tower(4))),
    'Sn2_flagE': (1, lambda n: (recipe_sn2_flag_e(n), _checks_flag_e(n, 2))),
    'Sn3_flagE': (1, lambda n: (recipe_sn3_flag_e(n), _checks_flag_e(n, 3))),
    'Snm_n2': (2, lambda n, m: (recipe_snm_n2(n, m), _checks_line_contraction(n, m))),
    'S335_smoothtower': (0, lambda: (recipe_smooth_tower(3), _checks_smooth_tower(3))),
    'S436_smoothtower': (0, lambda: (recipe_smooth_tower(4), _checks_smooth_tower(4))),
    'P2_two_lines': (2, lambda n, m: (recipe_p2_two_lines(n, m), _checks_two_lines(n, m))),
    'Snm_wps': (2, lambda n, m: (recipe_wps_line_points(n, m), _checks_line_contraction(n, m))),
}

ALIASES = {
    'S325': ('Sn2_flagE', 3),
    'S426': ('Sn2_flagE', 4),
    'S527': ('Sn2_flagE', 5),
    'S335': ('Sn3_flagE', 3),
    'S436': ('Sn3_flagE', 4),
}


def _check_params(name, params):
    if name in ('Sn2_flagE', 'Sn3_flagE'):
        _in_range('n', params[0], 2)
    elif name in ('Snm_n2', 'Snm_wps', 'P2_two_lines'):
        n, m = params
        _in_range('m', m, 2)
        _in_range('n', n, m if name != 'P2_two_lines' else 2)


def parse_flags(flags):
    """Recipe flag entries -> FlagSetup tuple."""
    setups = []
    for entry in flags:
        points = []
        for point in entry['points']:
            multiplicities = {}
            for curve, value in point.get('multiplicities', {}).items():
                if isinstance(value, dict):
                    multiplicities[curve] = LocalMultiplicity(to_rational(value['value']),
                                                              value['mode'] == 'upper_bound')
                else:
                    multiplicities[curve] = LocalMultiplicity(to_rational(value))
            points.append(FlagPointSpec(
                point['label'], entry['flag'], multiplicities,
                to_rational(point.get('log_discrepancy', 1)),
                bool(point.get('is_generic', False)),
            ))
        setups.append(FlagSetup(entry['stage'], entry['flag'], tuple(points)))
    return tuple(setups)


def load_config(recipe, checks=()):
    """Validate and build a recipe document into a CatalogConfig."""
    validate_recipe(recipe)
    stages = apply_recipe(recipe['steps'], recipe.get('name'))
    config = CatalogConfig(recipe.get('name') or 'recipe', recipe, stages,
                           parse_flags(recipe.get('flags', [])), tuple(checks))
    for setup in config.flags:
        model = config.stages[setup.stage]
        model.curve(setup.flag)
        for point in setup.points:
            point.validate(model)
    return config


@functools.lru_cache(maxsize=64)
def build_config(name, *params):
    """Build a named configuration; parametric names take (n,) or (n, m)."""
    if name in ALIASES:
        if params:
            raise CatalogError(f'{name} takes no parameters')
        name, *params = ALIASES[name]
    if name not in CONFIGURATIONS:
        raise CatalogError(f'unknown configuration {name!r}', {'catalog': name})
    arity, make = CONFIGURATIONS[name]
    if len(params) != arity:
        raise CatalogError(f'{name} takes {arity} parameter(s), got {len(params)}')
    _check_params(name, params)
    recipe, checks = make(*params)
    try:
        config = load_config(recipe, checks)
    except KDeltaError:
        logger.error('Catalog configuration %s%s failed to build', name, params)
        raise
    logger.debug('Built configuration %s', config.name)
    return config


def catalog_names():
    return sorted(set(CONFIGURATIONS) | set(ALIASES))
