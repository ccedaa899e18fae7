# constants.py

from enum import Enum
from django.utils.translation import gettext_lazy as _


class ChoicesMixin:
    @classmethod
    def choices(cls):
        """Returns a list of (value, value) tuples for serializer choices."""
        return [(item.value, item.value) for item in cls]


# --- Recipe step kinds ---

class StepKind(ChoicesMixin, Enum):
    SEED_P2 = "seed_p2"
    SEED_WPS = "seed_wps"
    DECLARE_CURVE = "declare_curve"
    BLOW_UP = "blow_up"
    WEIGHTED_BLOW_UP_11 = "weighted_blow_up_11"
    CONTRACT = "contract"


# --- Report vocabulary ---

class PointMode(ChoicesMixin, Enum):
    """How the local data of a flag point was declared."""
    EXACT = "exact"
    UPPER_BOUND = "upper_bound"


class BoundMode(ChoicesMixin, Enum):
    EXACT = "exact"
    LOWER_BOUND = "lower_bound"


class Verdict(ChoicesMixin, Enum):
    DELTA_GT_1 = "delta_gt_1"
    DELTA_EQ_1 = "delta_eq_1"
    INCONCLUSIVE = "inconclusive"


class LiuVerdict(ChoicesMixin, Enum):
    EXCLUDED_UNSTABLE = "excluded_unstable"
    PASSES = "passes"


class Status(ChoicesMixin, Enum):
    K_UNSTABLE = "K-unstable"
    K_STABLE = "K-stable"
    STRICTLY_K_SEMISTABLE = "strictly K-semistable"
    OUT_OF_FAMILY = "out-of-family"


class EvidenceKind(ChoicesMixin, Enum):
    LIU_EXCLUSION = "liu_exclusion"
    DELTA_SINGULAR_POINT = "delta_singular_point"
    ALPHA_BOUND_ASSUMPTION = "alpha_bound_assumption"
    FINITE_AUTOMORPHISM_ASSUMPTION = "finite_automorphism_assumption"
    LITERATURE = "literature"


class OutputFormat(ChoicesMixin, Enum):
    JSON = "json"
    TSV = "tsv"


# --- Error Messages ---

class ErrorMessages(object):
    """
    Constants for standard error strings used by the commands.
    """
    EMPTY_RECIPE = _("empty recipe")
    RECIPE_UNREADABLE = _("The recipe file could not be read or is not valid JSON.")
    SOURCE_REQUIRED = _("Give either a recipe path or --catalog, not both or neither.")
    UNKNOWN_FLAG = _("Unknown flag curve")


# --- Configuration Values ---

RECIPE_FORMAT_VERSION = "1"

class ExitCode(object):
    """
    Process exit codes of the management commands.
    """
    SUCCESS = 0
    VALIDATION = 2
    COMPUTATION = 3
