"""Exception types shared across the package."""


class PbxError(Exception):
    """Base class for all package errors."""


class DimensionError(PbxError, ValueError):
    """Truncation size or index range is invalid."""


class NumericInputError(PbxError, ValueError):
    """Input contains NaN/Inf or is otherwise numerically unusable."""


class ConstructionError(PbxError, ValueError):
    """A system could not be built (singular S, failed normalization, ...)."""


class UsageError(PbxError, ValueError):
    """Operation called with an unsupported combination of arguments."""


class UnsupportedSystemError(UsageError):
    """Operation requires a regular (Riesz) system."""


class GridAlignmentError(PbxError, ValueError):
    """Position grid is not commensurate with the lattice constant."""


class CoverageError(PbxError, ValueError):
    """Requested computation exceeds the reliable truncated region."""


class ConfigError(PbxError, ValueError):
    """Configuration file failed validation.

    ``errors`` collects one message per offending field so callers can
    report all problems at once.
    """

    def __init__(self, errors):
        if isinstance(errors, str):
            errors = [errors]
        self.errors = list(errors)
        super().__init__("; ".join(self.errors))
