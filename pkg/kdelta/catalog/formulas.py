"""Closed forms for the (n, m) families, and the divergence log for printed values.

The engine never uses these to decide anything; they are compared against values it
recomputes from the models.
"""
import logging

import sympy as sp

from ..exceptions import CatalogError
from ..kstab import delta_lower_bound
from ..zariski import zariski_decompose
from .configs import build_config

logger = logging.getLogger(__name__)


def _family(n, m):
    for name, value in (('n', n), ('m', m)):
        if not isinstance(value, int) or value < 2:
            raise CatalogError(f'{name} must be an integer >= 2, got {value!r}')
    return sp.Integer(n), sp.Integer(m)


def volume_formula(n, m, k):
    """(−K)² of S_{n,m}^k: n + 2 − k + (m+n+2)/(mn−1)."""
    n, m = _family(n, m)
    if not isinstance(k, int) or k < 0:
        raise CatalogError(f'k must be a non-negative integer, got {k!r}')
    return n + 2 - k + (m + n + 2) / (m * n - 1)


def group_order(n, m):
    n, m = _family(n, m)
    return int(m * n - 1)


# --- flag L over the 1/(mn−1)(1,n) point ---

def line_flag_tau(n, m):
    n, m = _family(n, m)
    return 1 / (n + 1) + (n + 1) / (m * n - 1)


def line_flag_s(n, m):
    n, m = _family(n, m)
    return (m * n + 2 * n ** 2 + 4 * n + 1) / (3 * (m * n - 1) * (n + 1))


def line_flag_generic_s_w(n, m):
    n, _ = _family(n, m)
    return (n + 1) / (3 * n)


def line_flag_special_s_w(n, m):
    """S(W;q) at a point where L meets one of the (−1)-curves in the negative part."""
    n, m = _family(n, m)
    return (n ** 3 + (m + 4) * n ** 2 + (3 * m + 5) * n + m + 1) / (3 * n * (n + 1) * (m + n + 2))


def line_flag_special_s_w_printed(n, m):
    """The printed closed form of the special-point S(W;q), kept for the divergence log only."""
    n, m = _family(n, m)
    return (n ** 3 + (m + 4) * n ** 2 + (3 * m + 5) * n + 1) / (3 * n * (n + 1) * (m + n + 2))


# --- −K minimal model program on P² blown up along two lines ---

def two_lines_negative_part_printed(n, m):
    """The printed N-coefficients of the two-lines model, kept for the divergence log only."""
    n, m = _family(n, m)
    return {'Ln': (m * n - m - 1) / (m * n - 1), 'Lm': (m * n - n - 1) / (m * n - 1)}


def record_divergence(topic, certified, printed):
    """Log a printed value that the engine does not reproduce; returns whether they differ."""
    if certified == printed:
        return False
    logger.info('divergence: %s: engine %s, printed %s', topic, certified, printed)
    return True


def two_lines_negative_part(n, m):
    """N of the Zariski decomposition of −K on P² blown up at n+1 and m+1 points of two lines.

    Only the two line transforms can carry N; the coefficients certify P·L̃ = 0.
    """
    model = build_config('P2_two_lines', n, m).stages['S1']
    _, negative = zariski_decompose(model, model.anticanonical)
    certified = {label: negative.get(label, sp.Integer(0)) for label in ('Ln', 'Lm')}
    record_divergence(f'negative part of -K on P2 blown up along two lines (n={n}, m={m})',
                      certified, two_lines_negative_part_printed(n, m))
    return certified


def line_flag_special_point(n, m):
    """Recompute S(W;q) at L∩C1 on the general (n, m) model and compare with the printed form."""
    config = build_config('Snm_n2', n, m)
    report = delta_lower_bound(config.model_for('L'), 'L', config.points('L'))
    certified = next(entry.s_w for entry in report.entries if entry.point == 'L∩C1')
    record_divergence(f'S(W;q) at special points of flag L (n={n}, m={m})',
                      certified, line_flag_special_s_w_printed(n, m))
    return certified
