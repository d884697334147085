"""
Exception hierarchy shared by all modules
"""
from typing import Optional


class EntanglementToolError(Exception):
    """
    Base class for all errors raised by this package
    """
    pass


class ValidationError(EntanglementToolError, ValueError):
    """
    A precondition of an operation was violated
    """
    pass


class BadSize(ValidationError):
    pass


class AsymmetricRow(ValidationError):
    pass


class CouplingOutOfRange(ValidationError):
    pass


class NotPositiveSemidefinite(ValidationError):
    pass


class BadPartitionParams(ValidationError):
    pass


class WrongKind(ValidationError):
    pass


class TooLarge(ValidationError):
    pass


class ParseError(ValidationError):
    """
    Configuration text could not be parsed

    Args:
        message (str): Human readable description
        line (int): Line number in the config text, if known
        field (str): Dotted path of the offending field, if known
    """
    def __init__(self, message: str, line: Optional[int] = None, field: Optional[str] = None):
        location = []
        if line is not None:
            location.append(f"line {line}")
        if field is not None:
            location.append(f"field '{field}'")
        suffix = f" ({', '.join(location)})" if location else ""
        super().__init__(f"{message}{suffix}")
        self.line = line
        self.field = field


class SchemaError(ValidationError):
    pass


class NumericalError(EntanglementToolError, ArithmeticError):
    """
    A numerical procedure failed to produce a trustworthy result
    """
    pass


class GaplessAtZeroT(NumericalError):
    pass


class QuadratureNoConvergence(NumericalError):
    pass


class NoCrossing(NumericalError):
    """
    A threshold search found no crossing inside its bracket

    Args:
        message (str): Human readable description
        t_max (float): Upper end of the searched bracket, reported as sentinel
    """
    def __init__(self, message: str, t_max: float):
        super().__init__(message)
        self.t_max = t_max


class NoWindow(EntanglementToolError):
    pass


class IoError(EntanglementToolError, OSError):
    pass
