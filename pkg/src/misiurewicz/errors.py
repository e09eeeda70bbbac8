"""Exception hierarchy shared by the solvers, renderer and CLI.

Every exception carries an ``exit_code`` so the command line can map
failures onto its stable exit-code contract without a lookup table.
"""


class MisiurewiczError(Exception):
    exit_code = 1


class NoConvergence(MisiurewiczError):
    """Newton (or a limit evaluation) exhausted its iteration budget."""

    exit_code = 2


class NotRepelling(MisiurewiczError):
    """The landing cycle has multiplier of modulus <= 1."""

    exit_code = 3


class NotMinimal(MisiurewiczError):
    """A smaller preperiod/period pair already satisfies the relation."""

    exit_code = 4


class DegenerateTransversality(MisiurewiczError):
    exit_code = 5


class DegenerateB0(DegenerateTransversality):
    pass


class DegenerateA0(MisiurewiczError):
    pass


class BasinJump(MisiurewiczError):
    """Continuation of a periodic point left the neighbourhood of its seed."""


class RangeExceeded(MisiurewiczError):
    """A rescaling factor left the double-precision range."""


class NotInvertible(MisiurewiczError):
    pass


class EmptySet(MisiurewiczError):
    pass


class EmptyInput(MisiurewiczError):
    pass
