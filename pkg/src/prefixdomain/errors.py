"""Exception hierarchy shared by the engine, allocator and trace tools."""


class PrefixDomainError(Exception):
    pass


class LevelTooLow(PrefixDomainError):
    """A basic set was asked for a representation above its granularity."""


class DepthExceeded(PrefixDomainError):
    pass


class KraftExceeded(PrefixDomainError):
    """The requested length does not fit in the remaining measure."""


class GameRuleError(PrefixDomainError):
    """Bob broke a rule of the description game."""

    kind = "rule"


class NotAllowed(GameRuleError):
    kind = "not-allowed"


class PrefixConflict(GameRuleError):
    kind = "prefix-conflict"


class Redefined(GameRuleError):
    kind = "redefined"


class DescriptionTooLong(GameRuleError, DepthExceeded):
    kind = "depth-exceeded"


class BudgetExceeded(PrefixDomainError):
    pass


class AlreadyFired(PrefixDomainError):
    pass


class NotFired(PrefixDomainError):
    pass


class ParseError(PrefixDomainError):
    pass
