"""Exception hierarchy. Each class maps to one CLI exit code."""


class SignetError(Exception):
    exit_code = 1


class ParseError(SignetError):
    exit_code = 2

    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class GuardError(SignetError):
    """Raised when an exponential routine would exceed its size guard."""

    exit_code = 3


class BudgetError(SignetError):
    """Step budget exhausted before the orbit closed.

    ``trajectory`` holds every configuration visited so far.
    """

    exit_code = 4

    def __init__(self, message, trajectory=None):
        super().__init__(message)
        self.trajectory = list(trajectory or [])


class CertificationError(SignetError):
    exit_code = 5

    def __init__(self, message, predicted=None, measured=None, log=None):
        super().__init__(message)
        self.predicted = predicted
        self.measured = measured
        self.log = list(log or [])


class PreconditionError(SignetError, ValueError):
    exit_code = 2
