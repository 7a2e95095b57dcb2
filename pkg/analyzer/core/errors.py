"""Excepciones del analizador y su código de salida en la CLI."""


class AnalyzerError(Exception):
    """Base de todos los errores del analizador"""
    exit_code = 1


class LoopSyntaxError(AnalyzerError, ValueError):
    exit_code = 3

    def __init__(self, message: str, line: int = 0, column: int = 0):
        self.message = message
        self.line = line
        self.column = column
        super().__init__(f"line {line}, column {column}: {message}" if line else message)


class NonRealEigenvalues(AnalyzerError):
    exit_code = 2

    def __init__(self, message: str = "non-real eigenvalues"):
        super().__init__(message)


class UnsupportedLoopClass(AnalyzerError):
    exit_code = 2


class ResourceLimitExceeded(AnalyzerError, RuntimeError):
    exit_code = 4


class UnrollCeilingExceeded(ResourceLimitExceeded):
    pass


class SingularSystem(AnalyzerError, AssertionError):
    exit_code = 1


class OracleMismatch(AnalyzerError):
    exit_code = 5
