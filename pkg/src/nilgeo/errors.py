"""Exception hierarchy shared by the library and the CLI."""


class NilgeoError(Exception):
    """Base class for all library errors."""


class ScalarParseError(NilgeoError, ValueError):
    def __init__(self, message: str, token: str = ""):
        super().__init__(message)
        self.token = token


class DimensionError(NilgeoError, ValueError):
    pass


class StructureError(NilgeoError, ValueError):
    """An endomorphism, triple or metric violates its defining relations."""


class HypothesisError(NilgeoError):
    """A theorem-level operation was called outside its hypotheses
    (for example on a non-nilpotent algebra)."""


class VerificationError(NilgeoError):
    """A postcondition that must hold by construction failed.

    Carries the offending basis indices (zero-based) in ``witness``.
    """

    def __init__(self, message: str, witness=None):
        super().__init__(message)
        self.witness = witness


class DocumentError(NilgeoError, ValueError):
    """Schema violation in an algebra document; ``location`` is a JSON path
    or ``line:col`` string."""

    def __init__(self, message: str, location: str = "$"):
        super().__init__(f"{location}: {message}")
        self.location = location
