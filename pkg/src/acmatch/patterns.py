"""Patterns, guards and position-based variable renaming."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Callable, Dict, Hashable, Mapping, Optional, Sequence, Tuple

from .terms import Compound, SymbolTable, Term, Variable, make_compound

__all__ = ["Guard", "Pattern", "HasProperties", "NotEqual", "rename_variables_canonical", "position_name"]

LOCAL = "local"
GLOBAL = "global"


@dataclass(frozen=True)
class Guard:
    """A named predicate over the values of some variables.

    The predicate is called as ``predicate(*values)`` with the values bound to
    ``variables`` (terms for regular variables, tuples or multisets for sequence
    variables).  Local guards are checked as soon as all their variables are
    bound; global guards once the whole pattern has matched.
    """

    name: str
    variables: Tuple[str, ...]
    predicate: Callable[..., bool] = field(compare=True)
    scope: str = GLOBAL

    def __post_init__(self):
        object.__setattr__(self, "variables", tuple(self.variables))
        if self.scope not in (LOCAL, GLOBAL):
            raise ValueError(f"unknown guard scope {self.scope!r}")

    @property
    def dependencies(self) -> frozenset:
        return frozenset(self.variables)

    def holds(self, sigma: Mapping[str, Any]) -> bool:
        return bool(self.predicate(*(sigma[v] for v in self.variables)))

    def renamed(self, mapping: Mapping[str, str]) -> "Guard":
        return Guard(self.name, tuple(mapping.get(v, v) for v in self.variables), self.predicate, self.scope)

    def as_scope(self, scope: str) -> "Guard":
        return Guard(self.name, self.variables, self.predicate, scope)

    def __str__(self) -> str:
        return f"{self.name}({', '.join(self.variables)})"


class HasProperties:
    """True when the bound constant has all the given properties in ``table``."""

    __slots__ = ("properties", "table")

    def __init__(self, properties, table: SymbolTable):
        self.properties = frozenset(properties)
        self.table = table

    def __call__(self, value: Any) -> bool:
        if not isinstance(value, Term) or value.args or isinstance(value, Variable):
            return False
        return self.properties <= self.table.properties_of(value.head)

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, HasProperties) and self.properties == other.properties and self.table is other.table
        )

    def __hash__(self) -> int:
        return hash((HasProperties, self.properties, id(self.table)))

    def __repr__(self) -> str:
        return f"HasProperties({sorted(self.properties)})"


@dataclass(frozen=True)
class NotEqual:
    """True when the bound value differs from ``term``."""

    term: Term

    def __call__(self, value: Any) -> bool:
        return value != self.term


class Pattern:
    """A pattern term with optional local and global guards and an identifier."""

    __slots__ = ("term", "global_guards", "local_guards", "id")

    def __init__(
        self,
        term: Term,
        global_guards: Sequence[Guard] = (),
        local_guards: Sequence[Guard] = (),
        id: Hashable = None,
    ):
        self.term = term
        self.global_guards = tuple(g.as_scope(GLOBAL) for g in global_guards)
        self.local_guards = tuple(g.as_scope(LOCAL) for g in local_guards)
        self.id = id
        names = term.variable_names
        if len(names) != len(term.variables):
            raise ValueError("a variable name is used with different classes or kinds")
        for g in self.global_guards + self.local_guards:
            missing = g.dependencies - names
            if missing:
                raise ValueError(f"guard {g} depends on variables not in the pattern: {sorted(missing)}")

    @property
    def guards(self) -> Tuple[Guard, ...]:
        return self.local_guards + self.global_guards

    @property
    def is_syntactic(self) -> bool:
        """No sequence variables and no associative or commutative heads."""
        return _is_syntactic(self.term)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Pattern):
            return NotImplemented
        return (self.term, self.global_guards, self.local_guards, self.id) == (
            other.term,
            other.global_guards,
            other.local_guards,
            other.id,
        )

    def __hash__(self) -> int:
        return hash((self.term, self.global_guards, self.local_guards, self.id))

    def __repr__(self) -> str:
        s = str(self.term)
        if self.guards:
            s += " if " + " and ".join(map(str, self.guards))
        return f"Pattern({self.id!r}: {s})"


def _is_syntactic(term: Term) -> bool:
    if isinstance(term, Variable):
        return not term.is_sequence
    if isinstance(term, Compound):
        if term.head.associative or term.head.commutative:
            return False
        return all(_is_syntactic(a) for a in term.args)
    return True


def as_pattern(p) -> Pattern:
    return p if isinstance(p, Pattern) else Pattern(p)


def position_name(position: Sequence[int], prefix: str = "x") -> str:
    return prefix + ".".join(map(str, position))


def rename_variables_canonical(pattern, prefix: str = "x") -> Tuple[Pattern, Dict[str, Optional[str]]]:
    """Rename every variable after the position of its first occurrence.

    Returns the renamed pattern and the inverse map from new to original names;
    anonymous variables map to None so that they drop out of renamed results.
    """
    pattern = as_pattern(pattern)
    forward: Dict[str, str] = {}
    inverse: Dict[str, Optional[str]] = {}

    def visit(t: Term, pos: Tuple[int, ...]) -> None:
        if isinstance(t, Variable):
            if t.name not in forward:
                new = position_name(pos, prefix)
                forward[t.name] = new
                inverse[new] = None if t.anonymous else t.name
        else:
            for i, a in enumerate(t.args, 1):
                visit(a, pos + (i,))

    visit(pattern.term, ())
    if not forward:
        return pattern, {}

    def rebuild(t: Term) -> Term:
        if isinstance(t, Variable):
            return Variable(forward[t.name], t.vclass, t.kind)
        if isinstance(t, Compound) and not t.is_ground:
            return make_compound(t.head, [rebuild(a) for a in t.args])
        return t

    renamed = Pattern(
        rebuild(pattern.term),
        [g.renamed(forward) for g in pattern.global_guards],
        [g.renamed(forward) for g in pattern.local_guards],
        pattern.id,
    )
    return renamed, inverse
