from .classification import (
    ClassificationRow,
    EvidenceItem,
    TableGroup,
    classify,
    solution_set,
    swapped_solution_set,
    table1,
)
from .configs import CatalogConfig, FlagSetup, build_config, catalog_names, load_config
from .formulas import volume_formula
from .hilbert import RationalSeries, hilbert_series_check

__all__ = [
    'CatalogConfig',
    'ClassificationRow',
    'EvidenceItem',
    'FlagSetup',
    'RationalSeries',
    'TableGroup',
    'build_config',
    'catalog_names',
    'classify',
    'hilbert_series_check',
    'load_config',
    'solution_set',
    'swapped_solution_set',
    'table1',
    'volume_formula',
]
