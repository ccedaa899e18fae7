"""Exception hierarchy shared by the engine and the management commands."""


class KDeltaError(Exception):
    """Base error. ``errors`` optionally maps a location to a readable message."""

    def __init__(self, message, errors=None):
        super().__init__(message)
        self.message = message
        self.errors = errors or {}


class LatticeError(KDeltaError):
    pass


class BuilderError(KDeltaError):
    pass


class ZariskiError(KDeltaError):
    pass


class KStabilityError(KDeltaError):
    pass


class CatalogError(KDeltaError):
    pass


class RecipeValidationError(KDeltaError):
    """Exception carrying a dict of readable recipe errors.

    errors: dict mapping JSON path (dot/bracket notation) -> human message
    """

    def __init__(self, errors):
        super().__init__('Recipe validation failed', errors)
