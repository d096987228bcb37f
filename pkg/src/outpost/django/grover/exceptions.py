class GroverError(Exception):
    """
    Base class of all errors raised by the phase matching library.
    """

    code = "error"
    exit_status = 1


class InvalidArgument(GroverError, ValueError):
    code = "invalid"


class OutOfDomain(InvalidArgument):
    code = "domain"
    exit_status = 2


class ResourceBound(InvalidArgument):
    code = "resource"


class Infeasible(GroverError):
    code = "infeasible"
    exit_status = 2


class Degenerate(GroverError):
    code = "degenerate"
    exit_status = 2


class ContractViolation(GroverError):
    code = "contract"
    exit_status = 3
