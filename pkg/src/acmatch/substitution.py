"""Substitutions mapping variable names to terms, sequences or multisets."""
from __future__ import annotations

from typing import Dict, Iterable, Iterator, List, Mapping, Optional, Tuple, Union

from .exceptions import IncompatibleSubstitutionError, SpliceError
from .multiset import Multiset
from .terms import Compound, Term, Variable, make_compound

__all__ = ["Substitution", "Value", "value_equal", "compatible", "union", "apply", "render_value"]

Value = Union[Term, Tuple[Term, ...], Multiset]


def _as_multiset(value: Value) -> Value:
    if isinstance(value, tuple):
        return Multiset(value)
    return value


def value_equal(v1: Value, v2: Value) -> bool:
    """Equality of substitution values; a sequence equals a multiset with the same elements."""
    if v1 is v2:
        return True
    if isinstance(v1, Term) or isinstance(v2, Term):
        return v1 == v2
    if isinstance(v1, tuple) and isinstance(v2, tuple):
        return v1 == v2
    if len(v1) != len(v2):
        return False
    return _as_multiset(v1) == _as_multiset(v2)


def render_value(value: Value) -> str:
    if isinstance(value, tuple):
        return "(" + ", ".join(map(str, value)) + ")"
    return str(value)


class Substitution(Mapping[str, Value]):
    """An immutable partial map from variable names to values."""

    __slots__ = ("_data", "_hash")

    def __init__(self, data: Union[Mapping[str, Value], Iterable[Tuple[str, Value]]] = ()):
        items = dict(data)
        for k, v in items.items():
            if isinstance(v, list):
                items[k] = tuple(v)
            elif not isinstance(v, (Term, tuple, Multiset)):
                raise TypeError(f"invalid substitution value for {k}: {v!r}")
        self._data: Dict[str, Value] = items
        self._hash = None

    def __getitem__(self, name: str) -> Value:
        return self._data[name]

    def __iter__(self) -> Iterator[str]:
        return iter(self._data)

    def __len__(self) -> int:
        return len(self._data)

    def __contains__(self, name: object) -> bool:
        return name in self._data

    def get(self, name: str, default=None):
        return self._data.get(name, default)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, Substitution):
            od = other._data
        elif isinstance(other, Mapping):
            od = other
        else:
            return NotImplemented
        if len(self._data) != len(od):
            return False
        for k, v in self._data.items():
            if k not in od or not value_equal(v, od[k]):
                return False
        return True

    def __ne__(self, other: object) -> bool:
        result = self.__eq__(other)
        return result if result is NotImplemented else not result

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset((k, _as_multiset(v)) for k, v in self._data.items()))
        return self._hash

    def bind(self, name: str, value: Value) -> Optional["Substitution"]:
        """Return ``self`` extended with ``name -> value``, or None on conflict."""
        old = self._data.get(name)
        if old is not None:
            if not value_equal(old, value):
                return None
            if isinstance(old, Multiset) and isinstance(value, tuple):
                data = dict(self._data)
                data[name] = value
                return Substitution(data)
            return self
        data = dict(self._data)
        data[name] = value
        return Substitution(data)

    def compatible(self, other: Mapping[str, Value]) -> bool:
        small, large = (self, other) if len(self) <= len(other) else (other, self)
        for k, v in small.items():
            w = large.get(k)
            if w is not None and not value_equal(v, w):
                return False
        return True

    def union(self, *others: Mapping[str, Value]) -> "Substitution":
        result = self.try_union(*others)
        if result is None:
            raise IncompatibleSubstitutionError("substitutions are not compatible")
        return result

    def try_union(self, *others: Mapping[str, Value]) -> Optional["Substitution"]:
        data = None
        for other in others:
            for k, v in other.items():
                current = (data if data is not None else self._data).get(k)
                if current is None:
                    if data is None:
                        data = dict(self._data)
                    data[k] = v
                elif not value_equal(current, v):
                    return None
                elif isinstance(current, Multiset) and isinstance(v, tuple):
                    if data is None:
                        data = dict(self._data)
                    data[k] = v
        return self if data is None else Substitution(data)

    def rename(self, mapping: Mapping[str, Optional[str]]) -> "Substitution":
        """Rename keys; names mapped to None are dropped, unmapped names kept."""
        data = {}
        for k, v in self._data.items():
            new = mapping.get(k, k)
            if new is not None:
                data[new] = v
        return Substitution(data)

    def without(self, names: Iterable[str]) -> "Substitution":
        names = set(names)
        return Substitution({k: v for k, v in self._data.items() if k not in names})

    def normalized(self) -> "Substitution":
        """Copy with all sequence values turned into multisets."""
        return Substitution({k: _as_multiset(v) for k, v in self._data.items()})

    def __str__(self) -> str:
        return "{" + ", ".join(f"{k} -> {render_value(self._data[k])}" for k in sorted(self._data)) + "}"

    def __repr__(self) -> str:
        return f"Substitution({self})"


def compatible(s1: Mapping[str, Value], s2: Mapping[str, Value]) -> bool:
    return Substitution(s1).compatible(s2)


def union(s1: Mapping[str, Value], s2: Mapping[str, Value]) -> Substitution:
    return Substitution(s1).union(s2)


def _apply_args(sigma: Mapping[str, Value], head, args: Tuple[Term, ...]) -> List[Term]:
    out: List[Term] = []
    for a in args:
        if isinstance(a, Variable) and a.name in sigma:
            value = sigma[a.name]
            if isinstance(value, Term):
                out.append(value)
            elif isinstance(value, tuple):
                if not head.variadic and not a.is_sequence:
                    raise SpliceError(f"cannot splice a sequence into fixed-arity {head.name}")
                out.extend(value)
            else:
                if not head.commutative:
                    raise SpliceError(f"cannot splice a multiset into non-commutative {head.name}")
                out.extend(value)
        else:
            out.append(_apply(sigma, a))
    return out


def _apply(sigma: Mapping[str, Value], term: Term) -> Term:
    if isinstance(term, Variable):
        if term.name not in sigma:
            return term
        value = sigma[term.name]
        if isinstance(value, Term):
            return value
        if len(value) == 1:
            return next(iter(value))
        raise SpliceError(f"cannot place a sequence of {len(value)} terms at the root")
    if isinstance(term, Compound):
        if term.is_ground:
            return term
        args = _apply_args(sigma, term.head, term.args)
        try:
            return make_compound(term.head, args)
        except ValueError as exc:
            raise SpliceError(str(exc)) from exc
    return term


def apply(sigma: Mapping[str, Value], term: Term) -> Term:
    """Replace bound variables in ``term``; sequence values are spliced into the argument list."""
    return _apply(sigma, term)
