"""
Custom exceptions for the hessian-rigidity library.
"""

from typing import Optional, Sequence


class HessianRigidityError(Exception):
    """
    Base exception class for all hessian-rigidity errors.
    """
    def __init__(self, message: str, error_code: Optional[str] = None):
        self.message = message
        self.error_code = error_code
        super().__init__(self.message)

    def __str__(self) -> str:
        if self.error_code:
            return f"[{self.error_code}] {self.message}"
        return self.message


class DimensionMismatchError(HessianRigidityError):
    """
    Raised when matrices, points or operators of different dimensions meet.
    """
    def __init__(self, message: str, expected: Optional[int] = None, actual: Optional[int] = None):
        self.expected = expected
        self.actual = actual

        if expected is not None and actual is not None:
            detailed_message = f"{message}. Expected dimension {expected}, got {actual}"
        else:
            detailed_message = message

        super().__init__(detailed_message, "DIMENSION_MISMATCH")


class NonFiniteValueError(HessianRigidityError):
    """
    Raised when a matrix entry, field value or coefficient is NaN or infinite.
    """
    def __init__(self, message: str, where: Optional[str] = None, value: Optional[float] = None):
        self.where = where
        self.value = value

        detailed_message = message
        if where:
            detailed_message = f"{message}. Location: {where}"
            if value is not None:
                detailed_message += f" (value: {value})"

        super().__init__(detailed_message, "NON_FINITE")


class ConvergenceError(HessianRigidityError):
    """
    Raised when an iterative method exhausts its iteration cap.
    """
    def __init__(self, message: str, method: Optional[str] = None, cap: Optional[int] = None):
        self.method = method
        self.cap = cap

        detailed_message = message
        if method and cap is not None:
            detailed_message = f"{message}. {method} did not converge within {cap} iterations"
        elif method:
            detailed_message = f"{message}. Method: {method}"

        super().__init__(detailed_message, "NO_CONVERGENCE")


class PreconditionError(HessianRigidityError):
    """
    Raised when an input violates the precondition an inequality is stated for.
    """
    def __init__(self, message: str, field: Optional[str] = None, value: Optional[str] = None):
        self.field = field
        self.value = value

        if field:
            detailed_message = f"{message}. Invalid field: {field}"
            if value:
                detailed_message += f" (value: {value})"
        else:
            detailed_message = message

        super().__init__(detailed_message, "PRECONDITION")


class InfeasibleSearchError(HessianRigidityError):
    """
    Raised when no feasible spectrum with positive S_k exists in a search box.
    """
    def __init__(self, message: str, k: Optional[int] = None, box: Optional[float] = None):
        self.k = k
        self.box = box

        detailed_message = message
        if k is not None and box is not None:
            detailed_message = f"{message}. Equation forces S_{k} = 0 in box [0, {box:g}]"

        super().__init__(detailed_message, "INFEASIBLE")


class ConfigurationError(HessianRigidityError):
    """
    Raised when a scenario configuration is invalid or missing.
    """
    def __init__(
        self,
        message: str,
        config_key: Optional[str] = None,
        expected_type: Optional[str] = None,
        errors: Optional[Sequence[str]] = None,
    ):
        self.config_key = config_key
        self.expected_type = expected_type
        self.errors = list(errors or [])

        detailed_message = message
        if config_key:
            detailed_message = f"{message}. Configuration key: {config_key}"
            if expected_type:
                detailed_message += f" (expected type: {expected_type})"
        if self.errors:
            detailed_message += ". " + "; ".join(self.errors)

        super().__init__(detailed_message, "CONFIG_ERROR")


class FileOperationError(HessianRigidityError):
    """
    Raised when file operations (save/load) fail.
    """
    def __init__(
        self,
        message: str,
        filepath: Optional[str] = None,
        operation: Optional[str] = None,
        cause: Optional[Exception] = None,
    ):
        self.filepath = filepath
        self.operation = operation
        self.cause = cause

        detailed_message = message
        if operation and filepath:
            detailed_message = f"{message}. Failed to {operation} file: {filepath}"
        elif filepath:
            detailed_message = f"{message}. File: {filepath}"

        if cause:
            detailed_message += f". Caused by: {str(cause)}"

        super().__init__(detailed_message, "FILE_OPERATION_ERROR")
