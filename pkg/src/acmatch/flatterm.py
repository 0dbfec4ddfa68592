"""Flatterms: preorder token sequences with explicit end markers."""
from __future__ import annotations

from typing import List, Sequence, Tuple, Union

from .terms import Compound, Constant, FunctionSymbol, Term, Variable

__all__ = ["FlatTerm", "END_MARK", "flatterm"]


class _EndMark:
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "⟩"

    __str__ = __repr__

    def __reduce__(self):
        return (_EndMark, ())


END_MARK = _EndMark()

Token = Union[FunctionSymbol, Constant, Variable, _EndMark]


class FlatTerm(Sequence):
    """Tokens of a term in preorder.

    A compound contributes its head symbol (an opening token), its arguments
    and a closing :data:`END_MARK`; constants and variables are single tokens.
    """

    __slots__ = ("tokens",)

    def __init__(self, tokens: Sequence[Token]):
        self.tokens: Tuple[Token, ...] = tuple(tokens)

    @classmethod
    def from_term(cls, term: Term) -> "FlatTerm":
        out: List[Token] = []
        _flatten(term, out)
        return cls(out)

    def to_term(self) -> Term:
        term, index = _rebuild(self.tokens, 0)
        if index != len(self.tokens):
            raise ValueError("trailing tokens after a complete term")
        return term

    def __getitem__(self, index):
        return self.tokens[index]

    def __len__(self) -> int:
        return len(self.tokens)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, FlatTerm) and self.tokens == other.tokens

    def __hash__(self) -> int:
        return hash(self.tokens)

    def __str__(self) -> str:
        parts = []
        for tok in self.tokens:
            if isinstance(tok, FunctionSymbol):
                parts.append(f"{tok.name}⟨")
            else:
                parts.append(str(tok))
        return " ".join(parts)

    def __repr__(self) -> str:
        return f"FlatTerm({self})"


def _flatten(term: Term, out: List[Token]) -> None:
    if isinstance(term, Compound):
        out.append(term.head)
        for a in term.args:
            _flatten(a, out)
        out.append(END_MARK)
    else:
        out.append(term)


def _rebuild(tokens: Sequence[Token], index: int) -> Tuple[Term, int]:
    if index >= len(tokens):
        raise ValueError("unexpected end of flatterm")
    tok = tokens[index]
    if isinstance(tok, FunctionSymbol):
        args = []
        index += 1
        while True:
            if index >= len(tokens):
                raise ValueError(f"missing end marker for {tok.name}")
            if tokens[index] is END_MARK:
                break
            arg, index = _rebuild(tokens, index)
            args.append(arg)
        return Compound(tok, args), index + 1
    if tok is END_MARK:
        raise ValueError("unbalanced end marker")
    return tok, index + 1


def flatterm(term: Term) -> FlatTerm:
    return FlatTerm.from_term(term)
