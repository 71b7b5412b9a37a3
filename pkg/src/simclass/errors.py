"""Exception taxonomy shared by all simclass modules."""


class SimclassError(Exception):
    """Base class for all errors raised by this package."""


class BadDescriptor(SimclassError):
    """Malformed ring descriptor string."""


class BadLevel(SimclassError):
    """Level/length argument outside the valid range."""


class DigitOutOfRange(SimclassError):
    """A base-p digit outside [0, p)."""


class NonUnit(SimclassError):
    """Inversion of a non-unit ring element."""


class CtxMismatch(SimclassError):
    """Operands live over different rings."""


class NotInvertible(SimclassError):
    """Matrix inversion of a matrix with non-unit determinant."""


class BadParams(SimclassError):
    """Invalid constructor parameters."""


class SearchBudgetExceeded(SimclassError):
    """A residue-span search would exceed the configured cap."""


class BudgetExceeded(SimclassError):
    """An enumeration or census would exceed the configured budget."""


class WrongResidueType(SimclassError):
    """A canonicalization step received a matrix of the wrong residue type."""


class NotHardCase(SimclassError):
    """classify_hard requires a matrix already in reduced shape."""


class NonIntegralDivision(SimclassError):
    """An exact integer division left a remainder (formula transcription bug)."""
