"""Exception hierarchy shared by every module."""


class HandleCalcError(Exception):
    """Base class for all library errors."""


class InvalidWordError(HandleCalcError, ValueError):
    pass


class InvalidEndomorphismError(HandleCalcError, ValueError):
    pass


class InvalidMoveError(HandleCalcError, ValueError):
    pass


class InvalidSpecError(HandleCalcError, ValueError):
    pass


class DomainError(HandleCalcError, ValueError):
    pass


class RefusedError(HandleCalcError):
    """Raised when geometric data needed by an operation is absent."""


class ResourceLimitError(HandleCalcError):
    def __init__(self, message, required=None, cap=None):
        super().__init__(message)
        self.required = required
        self.cap = cap
