"""Immutable, hashable multisets."""
from __future__ import annotations

from collections import Counter
from typing import Dict, Hashable, Iterable, Iterator, Mapping, Tuple

__all__ = ["Multiset"]


class Multiset:
    """A finite multiset with additive union ``+``, scalar ``*``, difference ``-``
    and inclusion ``<=``.

    Iteration yields elements with repetition, in sorted order when the
    elements are orderable and in insertion order otherwise.
    """

    __slots__ = ("_counts", "_hash", "_size")

    def __init__(self, elements: Iterable[Hashable] = (), counts: Mapping[Hashable, int] = None):
        if counts is not None:
            data = {k: v for k, v in counts.items() if v > 0}
            if any(v < 0 for v in counts.values()):
                raise ValueError("negative multiplicity")
        else:
            data = dict(Counter(elements))
        try:
            data = dict(sorted(data.items()))
        except TypeError:
            pass
        self._counts: Dict[Hashable, int] = data
        self._hash = None
        self._size = sum(data.values())

    @classmethod
    def from_counts(cls, counts: Mapping[Hashable, int]) -> "Multiset":
        return cls(counts=counts)

    @classmethod
    def _trusted(cls, data: Dict[Hashable, int]) -> "Multiset":
        # positive counts, keys already in iteration order; not copied
        m = cls.__new__(cls)
        m._counts = data
        m._hash = None
        m._size = sum(data.values())
        return m

    def multiplicity(self, element: Hashable) -> int:
        return self._counts.get(element, 0)

    count = multiplicity

    def items(self) -> Iterable[Tuple[Hashable, int]]:
        return self._counts.items()

    def distinct(self) -> Tuple[Hashable, ...]:
        return tuple(self._counts)

    def __iter__(self) -> Iterator[Hashable]:
        for element, n in self._counts.items():
            for _ in range(n):
                yield element

    def __len__(self) -> int:
        return self._size

    def __bool__(self) -> bool:
        return self._size > 0

    def __contains__(self, element: Hashable) -> bool:
        return element in self._counts

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Multiset):
            return NotImplemented
        return self._counts == other._counts

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self._counts.items()))
        return self._hash

    def __add__(self, other: "Multiset") -> "Multiset":
        counts = dict(self._counts)
        for k, v in other._counts.items():
            counts[k] = counts.get(k, 0) + v
        return Multiset(counts=counts)

    def __sub__(self, other: "Multiset") -> "Multiset":
        counts = dict(self._counts)
        for k, v in other._counts.items():
            if k in counts:
                counts[k] -= v
        return Multiset(counts=counts)

    def __mul__(self, factor: int) -> "Multiset":
        if factor < 0:
            raise ValueError("negative scalar")
        return Multiset(counts={k: v * factor for k, v in self._counts.items()})

    __rmul__ = __mul__

    def __le__(self, other: "Multiset") -> bool:
        if self._size > other._size:
            return False
        oc = other._counts
        return all(oc.get(k, 0) >= v for k, v in self._counts.items())

    def __ge__(self, other: "Multiset") -> bool:
        return other <= self

    def __lt__(self, other: "Multiset") -> bool:
        return self <= other and self._size < other._size

    def __gt__(self, other: "Multiset") -> bool:
        return other < self

    def issubset(self, other: "Multiset") -> bool:
        return self <= other

    def __repr__(self) -> str:
        return "{|" + ", ".join(map(str, self)) + "|}"

    __str__ = __repr__
