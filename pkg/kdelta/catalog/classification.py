"""Classification of the surfaces S_{n,m}^k and the K-stability table."""
import logging
from dataclasses import dataclass, field

import sympy as sp
from django.conf import settings

from ..exceptions import CatalogError
from ..kstab import alpha_delta_bounds, delta_lower_bound, liu_test
from ..utils.constants import EvidenceKind, LiuVerdict, Status, Verdict
from .configs import build_config
from .formulas import group_order, volume_formula

logger = logging.getLogger(__name__)

# pairs for which S_{n,m}^{n+3} is still del Pezzo
N_PLUS_3_MEMBERS = frozenset({(2, 2), (3, 2), (4, 2)})

# pair order of the table after the open-ended n+m >= 8 group
TABLE_LAYOUT = ((2, 2), (3, 2), (4, 2), (3, 3), (4, 3), (5, 2))

SMOOTH_POINT_ALPHA = sp.Rational(3, 4)

ALPHA_ASSUMPTION = ('alpha_p >= 3/4 at every smooth point (recorded, not derived); '
                    'delta_p >= 3/2 * alpha_p = {bound} > 1')
AUTOMORPHISM_ASSUMPTION = ('Aut(S) is finite (recorded, not derived); '
                           'K-semistable and not K-stable means not K-polystable')
LITERATURE = {
    'unstable': 'Du Val del Pezzo surface of degree {degree} with an A2 point: K-unstable '
                '(published classification of Du Val del Pezzo surfaces of degree >= 4)',
    'semistable': 'Du Val del Pezzo surface of degree 3 with an A2 point: strictly K-semistable '
                  '(published results on cubic surfaces)',
    'stable': 'Du Val del Pezzo surface of degree {degree} with an A2 point: K-stable '
              '(published results on low degree Du Val del Pezzo surfaces)',
}


@dataclass(frozen=True)
class EvidenceItem:
    kind: EvidenceKind
    payload: object


@dataclass(frozen=True)
class ClassificationRow:
    n: int
    m: int
    k: int
    volume: sp.Rational
    status: Status
    evidence: tuple = ()


@dataclass
class TableGroup:
    pair: str
    k: str
    status: Status
    rows: list = field(default_factory=list)
    ks: list = field(default_factory=list)

    @property
    def evidence_kinds(self):
        return sorted({kind for row in self.rows for kind in _evidence_kinds(row)})


def family_ks(n, m):
    """The k for which S_{n,m}^k is in the family, n >= m >= 2."""
    ks = list(range(n + 3))
    if (n, m) in N_PLUS_3_MEMBERS:
        ks.append(n + 3)
    return ks


def _canonical(n, m, k):
    """Map a triple to its primary-role form ``(n, m, k, swapped)`` or None outside the family.

    For n < m the roles are swapped: k <= n−1 is the swapped family, and from k = n on the
    surface is the primary S_{m,n}^{m+(k−n)} (S_{n,m}^n ≅ S_{m,n}^m plus general points).
    """
    if not all(isinstance(value, int) for value in (n, m, k)) or min(n, m) < 2 or k < 0:
        return None
    if n < m:
        if k <= n - 1:
            return n, m, k, True
        n, m, k = m, n, m + (k - n)
    if k in family_ks(n, m):
        return n, m, k, False
    return None


def _liu_evidence(volume, order):
    return EvidenceItem(EvidenceKind.LIU_EXCLUSION, {
        'volume': volume, 'group_order': order, 'threshold': sp.Rational(9, order),
    })


def _literature_row(n, m, k, volume):
    degree = 6 - k
    if k <= 2:
        status, text = Status.K_UNSTABLE, LITERATURE['unstable']
    elif k == 3:
        status, text = Status.STRICTLY_K_SEMISTABLE, LITERATURE['semistable']
    else:
        status, text = Status.K_STABLE, LITERATURE['stable']
    return ClassificationRow(n, m, k, volume, status,
                             (EvidenceItem(EvidenceKind.LITERATURE, text.format(degree=degree)),))


def flag_reports(n, m, k):
    """δ reports at the singular point for the computed triples of the family."""
    if (n, m, k) == (3, 2, 6):
        configs = [build_config('S326')]
    elif (n, m, k) == (4, 2, 7):
        configs = [build_config('S427')]
    elif k == n + 2 and m in (2, 3):
        configs = [build_config(f'Sn{m}_flagE', n), build_config('Snm_n2', n, m)]
    else:
        raise CatalogError(f'no flag configuration for S_{{{n},{m}}}^{k}', {'triple': [n, m, k]})
    reports = []
    for config in configs:
        for setup in config.flags:
            reports.append(delta_lower_bound(config.stages[setup.stage], setup.flag, setup.points))
    return reports


def _computed_row(n, m, k, volume):
    reports = flag_reports(n, m, k)
    evidence = [EvidenceItem(EvidenceKind.DELTA_SINGULAR_POINT, report) for report in reports]
    smooth_bound, _ = alpha_delta_bounds(SMOOTH_POINT_ALPHA, 2)
    if smooth_bound <= 1:
        raise CatalogError(f'smooth-point bound {smooth_bound} does not exceed 1')
    evidence.append(EvidenceItem(EvidenceKind.ALPHA_BOUND_ASSUMPTION,
                                 ALPHA_ASSUMPTION.format(bound=smooth_bound)))

    verdicts = {report.verdict for report in reports}
    if verdicts == {Verdict.DELTA_GT_1}:
        status = Status.K_STABLE
    elif Verdict.DELTA_EQ_1 in verdicts and Verdict.INCONCLUSIVE not in verdicts:
        status = Status.STRICTLY_K_SEMISTABLE
        evidence.append(EvidenceItem(EvidenceKind.FINITE_AUTOMORPHISM_ASSUMPTION, AUTOMORPHISM_ASSUMPTION))
    else:
        logger.error('S_{%s,%s}^%s: reports are inconclusive', n, m, k)
        raise CatalogError(f'evidence for S_{{{n},{m}}}^{k} is inconclusive',
                           {'verdicts': sorted(v.value for v in verdicts)})
    return ClassificationRow(n, m, k, volume, status, tuple(evidence))


def classify(n, m, k):
    canonical = _canonical(n, m, k)
    if canonical is None:
        logger.info('(%s, %s, %s) is outside the family', n, m, k)
        volume = None
        if all(isinstance(v, int) for v in (n, m, k)) and min(n, m) >= 2 and k >= 0:
            volume = volume_formula(n, m, k)
        return ClassificationRow(n, m, k, volume, Status.OUT_OF_FAMILY)

    first, second, index, _ = canonical
    # the identification with the primary role preserves the volume
    volume = volume_formula(n, m, k)
    order = group_order(n, m)
    if (first, second) == (2, 2):
        row = _literature_row(n, m, k, volume)
    elif liu_test(volume, order) == LiuVerdict.EXCLUDED_UNSTABLE:
        row = ClassificationRow(n, m, k, volume, Status.K_UNSTABLE, (_liu_evidence(volume, order),))
    else:
        row = _computed_row(first, second, index, volume)
        row = ClassificationRow(n, m, k, volume, row.status, row.evidence)
    logger.info('S_{%s,%s}^%s: volume %s, %s', n, m, k, volume, row.status.value)
    return row


def _triples(n, m, ks):
    return [(n, m, k) for k in ks]


def solution_set(max_sum=None):
    """Triples n >= m >= 2 in the family that the volume test does not exclude."""
    max_sum = max_sum or settings.KDELTA_TABLE_MAX_SUM
    found = set()
    for total in range(4, max_sum + 1):
        for m in range(2, total // 2 + 1):
            n = total - m
            for k in family_ks(n, m):
                if liu_test(volume_formula(n, m, k), group_order(n, m)) == LiuVerdict.PASSES:
                    found.add((n, m, k))
    return found


def swapped_solution_set(max_sum=None):
    """Survivors of the volume test in the swapped family S_{m,n}^{k}, k <= m−1; always empty."""
    max_sum = max_sum or settings.KDELTA_TABLE_MAX_SUM
    found = set()
    for total in range(4, max_sum + 1):
        for m in range(2, total // 2 + 1):
            n = total - m
            for k in range(m):
                if liu_test(volume_formula(m, n, k), group_order(n, m)) == LiuVerdict.PASSES:
                    found.add((m, n, k))
    return found


def table_layout(max_sum=None):
    """(pair label, triples) in table order."""
    max_sum = max_sum or settings.KDELTA_TABLE_MAX_SUM
    large = []
    for total in range(8, max_sum + 1):
        for m in range(2, total // 2 + 1):
            n = total - m
            large.extend(_triples(n, m, range(n + 3)))
    layout = [('n+m≥8', large)]
    layout.extend((f'({n},{m})', _triples(n, m, family_ks(n, m))) for n, m in TABLE_LAYOUT)
    return layout


def _status(row):
    return Status(row['status']) if isinstance(row, dict) else row.status


def _evidence_kinds(row):
    if isinstance(row, dict):
        return [item['kind'] for item in row['evidence']]
    return [item.kind.value for item in row.evidence]


def _k_label(ks):
    if len(ks) > 1 and ks[0] == 0 and ks == list(range(ks[-1] + 1)):
        return f'k≤{ks[-1]}'
    return ','.join(str(k) for k in ks)


def group_rows(pair, triples, rows):
    """Split one pair's rows into runs of equal status."""
    if pair == 'n+m≥8':
        statuses = {_status(row) for row in rows}
        if len(statuses) != 1:
            raise CatalogError('rows with n+m >= 8 do not share a status',
                               {'statuses': sorted(s.value for s in statuses)})
        return [TableGroup(pair, 'k≤n+2', statuses.pop(), list(rows))]
    groups = []
    for (_, _, k), row in zip(triples, rows):
        if groups and groups[-1].status == _status(row):
            groups[-1].rows.append(row)
            groups[-1].ks.append(k)
        else:
            groups.append(TableGroup(pair, '', _status(row), [row], [k]))
    for group in groups:
        group.k = _k_label(group.ks)
    return groups


def table1(max_sum=None, classify_many=None):
    """The K-stability table as TableGroups; ``classify_many`` maps a list of triples to rows."""
    classify_many = classify_many or (lambda triples: [classify(*triple) for triple in triples])
    layout = table_layout(max_sum)
    rows = classify_many([triple for _, triples in layout for triple in triples])
    groups, offset = [], 0
    for pair, triples in layout:
        chunk = rows[offset:offset + len(triples)]
        offset += len(triples)
        groups.extend(group_rows(pair, triples, chunk))
    logger.info('Table with %d groups over %d rows', len(groups), len(rows))
    return groups

