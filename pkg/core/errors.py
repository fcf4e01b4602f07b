"""Exceptions raised by the discrepancy toolkit."""


class DiscrepancyError(Exception):
    """Base class for every error raised by the toolkit"""


class BudgetExceededError(DiscrepancyError):
    """An exact enumeration would exceed its configured budget"""

    def __init__(self, operation: str, required: int, allowed: int):
        self.operation = operation
        self.required = required
        self.allowed = allowed
        super().__init__(
            f"{operation}: enumeration needs {required} candidates, budget allows {allowed}"
        )


class DimensionMismatchError(DiscrepancyError, ValueError):
    """Two objects living on tori of different dimension were combined"""

    def __init__(self, expected: int, actual: int):
        self.expected = expected
        self.actual = actual
        super().__init__(f"Dimension mismatch: expected {expected}, got {actual}")


class PointSetError(DiscrepancyError, ValueError):
    """Invalid point set (empty, ragged, or malformed on disk)"""


class GeneratorError(DiscrepancyError, ValueError):
    """Invalid generator parameters"""


class ConfigError(DiscrepancyError):
    """Invalid or unreadable run configuration"""
