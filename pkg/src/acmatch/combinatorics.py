"""Weak compositions, non-negative linear Diophantine equations and the
distribution of leftover commutative arguments onto sequence variables."""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Dict, Iterable, Iterator, List, Sequence, Tuple

from .multiset import Multiset
from .substitution import Substitution
from .terms import FunctionSymbol, Term, Variable, make_compound

__all__ = [
    "Multiset",
    "weak_compositions",
    "solve_linear_diophantine_nonneg",
    "cached_diophantine",
    "SequenceEquationSystem",
    "solve_sequence_equations",
    "wrap_regular",
]


def weak_compositions(total: int, parts: int) -> Iterator[Tuple[int, ...]]:
    """Yield all tuples of ``parts`` non-negative integers summing to ``total``.

    Tuples come in colexicographic order, starting with ``(total, 0, ..., 0)``.
    """
    if total < 0 or parts < 0:
        return
    if parts == 0:
        if total == 0:
            yield ()
        return
    a = [0] * parts
    a[0] = total
    yield tuple(a)
    last = parts - 1
    while a[last] != total:
        i = 0
        while a[i] == 0:
            i += 1
        v = a[i]
        a[i] = 0
        a[0] = v - 1
        a[i + 1] += 1
        yield tuple(a)


def _extended_gcd(a: int, b: int) -> Tuple[int, int, int]:
    x0, x1, y0, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    return a, x0, y0


def _solve_two(a: int, b: int, total: int) -> List[Tuple[int, int]]:
    g, x0, _ = _extended_gcd(a, b)
    if total % g:
        return []
    step = b // g
    x = (x0 * (total // g)) % step
    out = []
    while a * x <= total:
        out.append((x, (total - a * x) // b))
        x += step
    return out


def _solve(coefficients: Tuple[int, ...], total: int) -> List[Tuple[int, ...]]:
    k = len(coefficients)
    if k == 1:
        c = coefficients[0]
        return [(total // c,)] if total % c == 0 else []
    if k == 2:
        return _solve_two(coefficients[0], coefficients[1], total)
    head, rest = coefficients[0], coefficients[1:]
    g = math.gcd(*rest)
    reduced = tuple(c // g for c in rest)
    out = []
    for v, y in _solve_two(head, g, total):
        for tail in _solve(reduced, y):
            out.append((v,) + tail)
    return out


def solve_linear_diophantine_nonneg(coefficients: Sequence[int], total: int) -> List[Tuple[int, ...]]:
    """All non-negative solutions of ``sum(c_i * v_i) == total``, sorted lexicographically."""
    coefficients = tuple(coefficients)
    if not coefficients:
        raise ValueError("at least one coefficient is required")
    if any(c <= 0 for c in coefficients):
        raise ValueError("coefficients must be positive")
    if total < 0:
        return []
    return sorted(_solve(coefficients, total))


@lru_cache(maxsize=4096)
def _cached(coefficients: Tuple[int, ...], total: int) -> Tuple[Tuple[int, ...], ...]:
    return tuple(solve_linear_diophantine_nonneg(coefficients, total))


def cached_diophantine(coefficients: Sequence[int], total: int) -> List[Tuple[int, ...]]:
    """Like :func:`solve_linear_diophantine_nonneg`, memoised on the sorted coefficients."""
    coefficients = tuple(coefficients)
    order = sorted(range(len(coefficients)), key=coefficients.__getitem__)
    solutions = _cached(tuple(coefficients[i] for i in order), total)
    if order == list(range(len(order))):
        return list(solutions)
    result = []
    for sol in solutions:
        v = [0] * len(order)
        for pos, i in enumerate(order):
            v[i] = sol[pos]
        result.append(tuple(v))
    result.sort()
    return result


cached_diophantine.cache_info = _cached.cache_info
cached_diophantine.cache_clear = _cached.cache_clear


@dataclass(frozen=True)
class SequenceEquationSystem:
    """Equations ``d_i = sum_j c_j X_ij`` for distinct subjects ``s_i`` and sequence variables ``x_j``."""

    subjects: Tuple[Tuple[Term, int], ...]
    variables: Tuple[Tuple[str, int, bool], ...]

    @classmethod
    def from_multisets(cls, subjects: Multiset, variables: Multiset) -> "SequenceEquationSystem":
        """Build from a multiset of subject terms and a multiset of sequence :class:`Variable` s."""
        vs = []
        for var, c in variables.items():
            if not isinstance(var, Variable) or not var.is_sequence:
                raise ValueError(f"{var} is not a sequence variable")
            vs.append((var.name, c, var.is_plus))
        return cls(tuple(subjects.items()), tuple(vs))


def solve_sequence_equations(system: SequenceEquationSystem) -> Iterator[Substitution]:
    """Yield one substitution of multisets per solution satisfying the plus constraints."""
    variables = system.variables
    if not variables:
        if not system.subjects:
            yield Substitution()
        return
    coefficients = [c for _, c, _ in variables]
    per_subject = []
    for _, d in system.subjects:
        solutions = cached_diophantine(coefficients, d)
        if not solutions:
            return
        per_subject.append(solutions)
    plus = [j for j, (_, _, is_plus) in enumerate(variables) if is_plus]
    terms = [t for t, _ in system.subjects]
    # visit subjects in multiset order so every value dict comes out sorted
    try:
        order = sorted(range(len(terms)), key=terms.__getitem__)
    except TypeError:
        order = list(range(len(terms)))
    terms = [terms[i] for i in order]
    per_subject = [per_subject[i] for i in order]
    names = [name for name, _, _ in variables]
    width = range(len(variables))
    for combo in itertools.product(*per_subject):
        if plus and any(all(sol[j] == 0 for sol in combo) for j in plus):
            continue
        data = {}
        for j in width:
            data[names[j]] = Multiset._trusted({terms[i]: sol[j] for i, sol in enumerate(combo) if sol[j]})
        yield Substitution(data)


def wrap_regular(solutions: Iterable[Substitution], names: Sequence[str], head: FunctionSymbol) -> Iterator[Substitution]:
    """Turn the multiset bound to each of ``names`` into one term under the associative ``head``.

    A single element stands for itself; several become ``head(...)``.
    """
    if not names:
        yield from solutions
        return
    cache: Dict[Multiset, Term] = {}
    for solution in solutions:
        data = dict(solution)
        for name in names:
            elems = data[name]
            term = cache.get(elems)
            if term is None:
                items = list(elems)
                term = cache[elems] = items[0] if len(items) == 1 else make_compound(head, items)
            data[name] = term
        yield Substitution(data)
