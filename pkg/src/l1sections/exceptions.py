# src/l1sections/exceptions.py

class L1SectionsException(Exception):
    """Base exception for the l1sections package."""
    pass

class ConfigurationError(L1SectionsException):
    """Error related to configuration loading or validation."""
    pass

class ParameterInfeasibleError(L1SectionsException):
    """Requested parameters admit no construction at this scale."""
    def __init__(self, message, guard=None, level=None):
        super().__init__(message)
        self.guard = guard
        self.level = level

    def __str__(self):
        if self.guard:
            return f"{super().__str__()} (guard: {self.guard})"
        return super().__str__()

class DomainError(L1SectionsException):
    """Input outside the mathematical domain of an operation."""
    pass

class NumericalGuardError(L1SectionsException):
    """A dense-factorization or enumeration budget would be exceeded."""
    pass

class VerificationError(L1SectionsException):
    """A construction failed its own exact post-construction check."""
    pass

class FieldMismatchError(DomainError):
    """Operands belong to different finite-field contexts."""
    pass

class CertificateError(L1SectionsException):
    """A spread certificate was used outside its valid form."""
    pass

class ChainError(CertificateError):
    """Consecutive certificates do not chain."""
    pass

class SolverError(L1SectionsException):
    """The LP solver did not converge to a feasible optimum."""
    pass

class InfeasibleMeasurementError(SolverError):
    """The measurement vector lies outside the range of the encoder."""
    pass

class ParsingError(L1SectionsException):
    """Error encountered while reading one of the text formats."""
    def __init__(self, message, line=None, field=None):
        super().__init__(message)
        self.line = line
        self.field = field

    def __str__(self):
        return f"{super().__str__()} (Line: {self.line}, Field: {self.field})"
