"""Exception types shared across the package."""


class SeqcalcError(Exception):
    """Base class for all errors raised by this package."""


class ParseError(SeqcalcError):
    """Malformed input text; carries a character position."""

    def __init__(self, message: str, pos: int | None = None):
        if pos is not None:
            message = f"{message} (at position {pos})"
        super().__init__(message)
        self.pos = pos


class UnboundNameError(SeqcalcError):
    """A defined constant was used without a definition in scope."""


class IllFormedError(SeqcalcError):
    """A term, formula or multiset violates a construction invariant."""


class RuleError(SeqcalcError):
    """A rule instance does not fit the calculus it is used in."""


class TransformError(SeqcalcError):
    """A proof transformation was applied outside its precondition."""


class MeasureError(SeqcalcError):
    """A height/degree measure is undefined for the given proof."""


class SearchError(SeqcalcError):
    """Proof search ran out of its resource budget."""
