"""Exception hierarchy shared by every layer of the engine.

Each error carries a short machine-readable ``code`` so the HTTP facade
can map failures onto status codes without string matching.
"""


class PirError(Exception):
    """Base class for all engine errors."""

    code = "internal"


class DegenerateGeometryError(PirError):
    """Polygon or interval collapsed below the geometric tolerance."""

    code = "degenerate-geometry"


class ValidationError(PirError):
    """Input document or value violates a structural invariant."""

    code = "validation"


class UnknownNameError(PirError):
    """Object name lookup failed inside a bi-list or scene."""

    code = "unknown-name"


class ParseError(PirError):
    """Malformed document; message names the offending position."""

    code = "parse"


class ConfigurationError(PirError):
    """Invalid weights, thresholds or other tunables."""

    code = "configuration"


class ConflictError(PirError):
    """Duplicate identifier on insert."""

    code = "conflict"


class NotFoundError(PirError):
    """Record id not present in the catalog."""

    code = "not-found"


class InsufficientDataError(PirError):
    """Too few samples or pixels to compute a descriptor or track."""

    code = "insufficient-data"


class AlignmentError(PirError):
    """Time-sample sequences of two objects do not line up."""

    code = "alignment"


class DegenerateRegionError(PirError):
    """Mask covers no raster pixels."""

    code = "degenerate-region"


class StoreError(PirError):
    """Catalog file unreadable or corrupt."""

    code = "store"
