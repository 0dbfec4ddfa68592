"""Exception hierarchy shared by all acmatch modules."""

__all__ = [
    "AcmatchError",
    "ArityError",
    "SymbolError",
    "PositionError",
    "IncompatibleSubstitutionError",
    "SpliceError",
    "NonGroundSubjectError",
    "UnsupportedPatternError",
    "FrozenNetError",
    "ProblemSyntaxError",
    "UndeclaredSymbolError",
    "ProblemArityError",
]


class AcmatchError(Exception):
    """Base class for every error raised by this package."""


class ArityError(AcmatchError, ValueError):
    """A compound term has an argument count its head does not accept."""


class SymbolError(AcmatchError, ValueError):
    """Inconsistent symbol declaration (duplicate name, bad flags)."""


class PositionError(AcmatchError, IndexError):
    """A position does not address a subterm of the given term."""


class IncompatibleSubstitutionError(AcmatchError, ValueError):
    """Two substitutions disagree on a shared variable."""


class SpliceError(AcmatchError, ValueError):
    """A sequence or multiset value cannot be spliced at its target position."""


class NonGroundSubjectError(AcmatchError, ValueError):
    """Matching needs a variable-free subject."""


class UnsupportedPatternError(AcmatchError, ValueError):
    """The pattern uses a feature the chosen matcher does not handle."""


class FrozenNetError(AcmatchError, RuntimeError):
    """A discrimination net was modified after :meth:`freeze`."""


class ProblemSyntaxError(AcmatchError, ValueError):
    """Malformed term text or problem file, with a 1-based source location."""

    def __init__(self, message: str, line: int = 1, column: int = 1):
        self.message = message
        self.line = line
        self.column = column
        super().__init__(f"{line}:{column}: {message}")


class UndeclaredSymbolError(ProblemSyntaxError):
    """A compound head was used without a ``symbol`` declaration."""


class ProblemArityError(ProblemSyntaxError):
    """A term in a problem file violates the arity of its head."""
