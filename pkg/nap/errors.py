"""
Error classes raised by the NAP engine
Every failure the engine can signal is a subclass of NAPError
"""


class NAPError(Exception):
    """Base class for all engine errors"""


class DomainError(NAPError, ZeroDivisionError):
    """Division by the zero element"""


class UndeterminedMagnitudeError(NAPError):
    """Magnitude of a multivariate element cannot be decided soundly"""


class NotFiniteError(NAPError):
    """Standard part requested for an unbounded element"""


class IncompatibleIndexError(NAPError):
    """Index variables, families or spaces that do not belong together"""


class UnsupportedShapeError(NAPError):
    """A counting function outside the class a family can take limits of"""


class EnclosurePrecisionError(NAPError):
    """A point could not be separated from an irrational endpoint"""


class ConditioningOnEmptyError(NAPError):
    """Conditioning on the empty event or on an empty finite set"""


class FairOnlyError(NAPError):
    """Operation defined only for fair spaces (w = 1)"""


class UnsupportedFunctionError(NAPError):
    """Function outside the supported weight class"""


class ResourceLimitError(NAPError):
    """A desk-scale cap would be exceeded"""


class AxiomViolation(NAPError):
    """An engine self-check failed"""


class QuerySyntaxError(NAPError):
    """Malformed query text"""

    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"{message} (line {line}, column {column})")
        self.line = line
        self.column = column


class UnknownIdentifierError(NAPError):
    """Reference to an event name that was never bound"""


class FamilyMismatchError(NAPError):
    """Directed family not legal for the declared space"""
