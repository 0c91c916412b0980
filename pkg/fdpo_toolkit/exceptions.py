class FdpoError(Exception):
    """
    Base class of all errors raised by fdpo_toolkit
    """

    pass


class InvalidModelError(FdpoError, ValueError):
    """
    A MDP, policy or dataset violates one of its invariants.
    """

    pass


class SolverError(FdpoError, ArithmeticError):
    """
    A linear system could not be solved numerically.
    """

    pass


class NonConvergenceError(FdpoError, RuntimeError):
    """
    An iterative solver exceeded its iteration cap.
    """

    pass


class InstanceTooLargeError(FdpoError):
    """
    Enumerating all deterministic policies would exceed the enumeration limit.
    """

    pass


class PolicyNotInLocalSetError(FdpoError):
    """
    A state-wise Hoeffding bound was requested for a policy outside its local policy set.
    """

    pass


class InsufficientDataError(FdpoError):
    """
    Not enough trials to compute a confidence interval.
    """

    pass


class EmptySummaryError(FdpoError):
    pass
