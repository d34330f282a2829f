"""Exception types shared across the package."""


class GameflowError(Exception):
    """Base class for all package errors."""

    #: short machine-parsable category used by the CLI error line
    category = "error"


class DomainError(GameflowError):
    """Invalid input to a score function (negative score, log of zero)."""

    category = "domain"


class DegenerateStat(GameflowError):
    """All training finals for a stat are identical; no scale can be fit."""

    category = "degenerate-stat"


class MissingScaler(GameflowError):
    """A path refers to a stat the standardizer has no entry for."""

    category = "missing-scaler"


class RankDeficient(GameflowError):
    """Design matrix is collinear; carries the offending column names."""

    category = "rank-deficient"

    def __init__(self, columns):
        self.columns = list(columns)
        super().__init__(f"collinear design columns: {', '.join(self.columns)}")


class TooFewGames(GameflowError):
    category = "too-few-games"


class EmptyRoster(GameflowError):
    category = "empty-roster"


class GridMismatch(GameflowError):
    category = "grid-mismatch"


class DegenerateModel(GameflowError):
    """tau^2 + sigma^2 = 0: the predictive variance vanishes before t=1."""

    category = "degenerate-model"


class TooFewRises(GameflowError):
    """Fewer positive path increments than the requested threshold rank."""

    category = "too-few-rises"


class InvalidTransform(GameflowError):
    """A registered X-index transform violates its required properties."""

    category = "invalid-transform"


class ParseError(GameflowError):
    category = "parse"

    def __init__(self, path, line, message):
        self.path = str(path)
        self.line = line
        super().__init__(f"{path}:{line}: {message}")


class ConsistencyError(GameflowError):
    category = "consistency"


class VersionMismatch(GameflowError):
    category = "version-mismatch"


class IllegalSub(GameflowError):
    category = "illegal-sub"


class ClockExhausted(GameflowError):
    category = "clock-exhausted"
