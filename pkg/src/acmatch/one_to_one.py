"""One-to-one matching of a single pattern against a ground subject.

The matcher is a set of chained generators: every function receives the
current substitution and yields the extended substitutions, so a conflict in
one argument stops the enumeration for that branch immediately.  Commutative
arguments are matched in stages (ground patterns, already bound variables,
compound patterns, regular variables, sequence variables).
"""
from __future__ import annotations

from typing import Dict, Iterable, Iterator, List, Mapping, Optional, Sequence, Tuple

from .combinatorics import SequenceEquationSystem, solve_sequence_equations, weak_compositions, wrap_regular
from .exceptions import NonGroundSubjectError, UnsupportedPatternError
from .multiset import Multiset
from .patterns import Guard, Pattern, as_pattern
from .substitution import Substitution, Value
from .terms import Compound, Constant, FunctionSymbol, Term, Variable, VariableClass, make_compound

__all__ = [
    "syntactic_match",
    "match_one_to_one",
    "match_sequence",
    "match_commutative",
    "match_root",
    "GuardContext",
]

_REGULAR = VariableClass.REGULAR
_PLUS = VariableClass.PLUS
_STAR = VariableClass.STAR


class GuardContext:
    """Binds variables while evaluating local guards as soon as their variables are bound."""

    __slots__ = ("_by_var", "_active")

    def __init__(self, guards: Iterable[Guard] = ()):
        self._by_var: Dict[str, List[Guard]] = {}
        for g in guards:
            for v in g.dependencies:
                self._by_var.setdefault(v, []).append(g)
        self._active = bool(self._by_var)

    def _check(self, sigma: Substitution, names: Iterable[str]) -> bool:
        seen = set()
        for name in names:
            for g in self._by_var.get(name, ()):
                if g in seen:
                    continue
                seen.add(g)
                if all(v in sigma for v in g.variables) and not g.holds(sigma):
                    return False
        return True

    def bind(self, sigma: Substitution, name: str, value: Value) -> Optional[Substitution]:
        new = sigma.bind(name, value)
        if new is None or not self._active or name in sigma:
            return new
        return new if self._check(new, (name,)) else None

    def extend(self, sigma: Substitution, other: Mapping[str, Value]) -> Optional[Substitution]:
        new = sigma.try_union(other)
        if new is None or not self._active:
            return new
        fresh = [k for k in other if k not in sigma]
        return new if self._check(new, fresh) else None


_NO_GUARDS = GuardContext()


def _kind_ok(var: Variable, term: Term) -> bool:
    return var.kind is None or (isinstance(term, Constant) and term.symbol.kind == var.kind)


def syntactic_match(
    subject: Term, pattern: Term, sigma: Optional[Mapping[str, Value]] = None, ctx: GuardContext = _NO_GUARDS
) -> Optional[Substitution]:
    """Match a syntactic pattern; returns the unique match or None.

    Raises :class:`UnsupportedPatternError` for sequence variables, commutative
    heads and unrestricted regular variables directly under associative heads.
    """
    sigma = Substitution(sigma or {})
    stack: List[Tuple[Term, Term, bool]] = [(subject, pattern, False)]
    while stack:
        s, p, in_assoc = stack.pop()
        if isinstance(p, Variable):
            if p.is_sequence or (in_assoc and p.kind is None):
                raise UnsupportedPatternError(f"{p} is not a syntactic pattern element")
            if not _kind_ok(p, s):
                return None
            sigma = ctx.bind(sigma, p.name, s)
            if sigma is None:
                return None
        elif isinstance(p, Compound):
            if p.head.commutative:
                raise UnsupportedPatternError(f"commutative head {p.head.name} is not syntactic")
            if not isinstance(s, Compound) or s.head is not p.head or len(s.args) != len(p.args):
                return None
            assoc = p.head.associative
            for sa, pa in zip(reversed(s.args), reversed(p.args)):
                stack.append((sa, pa, assoc))
        elif s != p:
            return None
    return sigma


def _bind_variable(
    subjects: Sequence[Term], p: Variable, fa: Optional[FunctionSymbol], sigma: Substitution, ctx: GuardContext
) -> Optional[Substitution]:
    vclass = p.vclass
    if vclass is _REGULAR:
        if fa is not None and p.kind is None:
            if not subjects:
                return None
            value = subjects[0] if len(subjects) == 1 else make_compound(fa, subjects)
        else:
            if len(subjects) != 1:
                return None
            value = subjects[0]
            if p.kind is not None and not _kind_ok(p, value):
                return None
    else:
        if vclass is _PLUS and not subjects:
            return None
        value = tuple(subjects)
    return ctx.bind(sigma, p.name, value)


def _match(
    subjects: Sequence[Term], p: Term, fa: Optional[FunctionSymbol], sigma: Substitution, ctx: GuardContext
) -> Iterator[Substitution]:
    if isinstance(p, Variable):
        new = _bind_variable(subjects, p, fa, sigma, ctx)
        if new is not None:
            yield new
        return
    if len(subjects) != 1:
        return
    s = subjects[0]
    if isinstance(p, Constant):
        if s == p:
            yield sigma
        return
    if not isinstance(s, Compound) or s.head is not p.head:
        return
    if not p._vars:
        if s == p:
            yield sigma
        return
    if p.head.commutative:
        yield from _match_commutative(s.args, p, sigma, ctx)
    else:
        yield from _match_sequence(s.args, p.args, p.head if p.head.associative else None, sigma, ctx)


def _sequence_info(patterns: Sequence[Term], fa: Optional[FunctionSymbol]) -> Tuple[Tuple[int, ...], int]:
    # 0: exactly one argument, 1: at least one, 2: any number
    flags = []
    n_star = 0
    for p in patterns:
        if isinstance(p, Variable):
            if p.vclass is _STAR:
                flags.append(2)
                n_star += 1
            elif p.vclass is _PLUS or (fa is not None and p.kind is None):
                flags.append(1)
            else:
                flags.append(0)
        else:
            flags.append(0)
    return tuple(flags), n_star


def _match_sequence(
    subjects: Sequence[Term],
    patterns: Sequence[Term],
    fa: Optional[FunctionSymbol],
    sigma: Substitution,
    ctx: GuardContext,
) -> Iterator[Substitution]:
    n, m = len(subjects), len(patterns)
    flags, n_star = _sequence_info(patterns, fa)
    if m - n_star > n:
        return
    n_seq = sum(1 for f in flags if f)
    if n_seq == 0:
        if n != m:
            return
        yield from _chain_single(subjects, patterns, 0, fa, sigma, ctx)
        return
    n_free = n - m + n_star
    for k in weak_compositions(n_free, n_seq):
        lengths = []
        j = 0
        for f in flags:
            if f:
                lengths.append(k[j] + (f == 1))
                j += 1
            else:
                lengths.append(1)
        yield from _chain(subjects, patterns, lengths, 0, 0, fa, sigma, ctx)


def _chain_single(subjects, patterns, i, fa, sigma, ctx) -> Iterator[Substitution]:
    m = len(patterns)
    # cheap prefilter on ground arguments
    while i < m and not patterns[i]._vars:
        if subjects[i] != patterns[i]:
            return
        i += 1
    if i == m:
        yield sigma
        return
    for new in _match((subjects[i],), patterns[i], fa, sigma, ctx):
        yield from _chain_single(subjects, patterns, i + 1, fa, new, ctx)


def _chain(subjects, patterns, lengths, i, start, fa, sigma, ctx) -> Iterator[Substitution]:
    m = len(patterns)
    while i < m and not patterns[i]._vars:
        if subjects[start] != patterns[i]:
            return
        start += 1
        i += 1
    if i == m:
        yield sigma
        return
    end = start + lengths[i]
    for new in _match(subjects[start:end], patterns[i], fa, sigma, ctx):
        yield from _chain(subjects, patterns, lengths, i + 1, end, fa, new, ctx)


class _CommInfo:
    """Classification of the arguments of a commutative pattern compound."""

    __slots__ = ("ground", "variables", "compounds", "seq_vars")

    def __init__(self, p: Compound):
        head = p.head
        assoc = head.associative
        ground: Dict[Term, int] = {}
        variables: Dict[Variable, int] = {}
        compounds: List[Term] = []
        for a in p.args:
            if not a._vars:
                ground[a] = ground.get(a, 0) + 1
            elif isinstance(a, Variable):
                variables[a] = variables.get(a, 0) + 1
            else:
                compounds.append(a)
        self.ground = tuple(ground.items())
        self.variables = tuple(variables.items())
        self.compounds = tuple(compounds)
        # variables that absorb any number of leftover arguments; regular
        # variables under associative heads behave like plus variables there
        self.seq_vars = frozenset(v for v in variables if v.is_sequence or (assoc and v.kind is None))


def _comm_info(p: Compound) -> _CommInfo:
    cache = p._cache
    if cache is None:
        cache = p._cache = {}
    info = cache.get("comm")
    if info is None:
        info = cache["comm"] = _CommInfo(p)
    return info


def _bound_contribution(var: Variable, value: Value, head: FunctionSymbol) -> Iterable[Term]:
    if isinstance(value, Term):
        if var.vclass is _REGULAR and head.associative and isinstance(value, Compound) and value.head is head:
            return value.args
        return (value,)
    return value


def _remove_bound(
    counts: Dict[Term, int], pending: Sequence[Tuple[Variable, int]], head: FunctionSymbol, sigma: Substitution
) -> Optional[Tuple[Dict[Term, int], List[Tuple[Variable, int]]]]:
    """Remove the values of bound variables from ``counts``; None if they do not fit."""
    if not any(v.name in sigma for v, _ in pending):
        return counts, list(pending)
    counts = dict(counts)
    rest = []
    for var, mult in pending:
        value = sigma.get(var.name)
        if value is None:
            rest.append((var, mult))
            continue
        for t in _bound_contribution(var, value, head):
            left = counts.get(t, 0) - mult
            if left < 0:
                return None
            counts[t] = left
    return counts, rest


def _match_commutative(
    subject_args: Sequence[Term], p: Compound, sigma: Substitution, ctx: GuardContext
) -> Iterator[Substitution]:
    seen = set()
    for result in _commutative(subject_args, p, sigma, ctx):
        if result not in seen:
            seen.add(result)
            yield result


def _commutative(
    subject_args: Sequence[Term], p: Compound, sigma: Substitution, ctx: GuardContext
) -> Iterator[Substitution]:
    head = p.head
    info = _comm_info(p)
    counts: Dict[Term, int] = {}
    for s in subject_args:
        counts[s] = counts.get(s, 0) + 1
    distinct = list(counts)
    # stage 1: ground patterns
    for t, mult in info.ground:
        left = counts.get(t, 0) - mult
        if left < 0:
            return
        counts[t] = left
    # stage 2: variables with a value already
    removed = _remove_bound(counts, info.variables, head, sigma)
    if removed is None:
        return
    counts, pending = removed
    # stage 3: compound patterns, paired with subjects of the same head
    compounds = info.compounds

    def compound_stage(i: int, counts: Dict[Term, int], sigma: Substitution, last: int) -> Iterator[Substitution]:
        if i == len(compounds):
            removed = _remove_bound(counts, pending, head, sigma)
            if removed is None:
                return
            rest_counts, rest_vars = removed
            regular = [(v, c) for v, c in rest_vars if v not in info.seq_vars]
            sequence = [(v, c) for v, c in rest_vars if v in info.seq_vars]
            yield from regular_stage(0, regular, sequence, rest_counts, sigma)
            return
        pattern = compounds[i]
        start = last if i and compounds[i - 1] == pattern else 0
        for j in range(start, len(distinct)):
            s = distinct[j]
            if counts[s] <= 0 or not isinstance(s, Compound) or s.head is not pattern.head:
                continue
            for new in _match((s,), pattern, None, sigma, ctx):
                counts[s] -= 1
                try:
                    yield from compound_stage(i + 1, counts, new, j)
                finally:
                    counts[s] += 1

    # stage 4: regular variables take a single argument each
    def regular_stage(i, regular, sequence, counts, sigma) -> Iterator[Substitution]:
        if i == len(regular):
            yield from sequence_stage(sequence, counts, sigma)
            return
        var, mult = regular[i]
        for s in distinct:
            if counts[s] < mult or not _kind_ok(var, s):
                continue
            new = ctx.bind(sigma, var.name, s)
            if new is None:
                continue
            counts[s] -= mult
            try:
                yield from regular_stage(i + 1, regular, sequence, counts, new)
            finally:
                counts[s] += mult

    # stage 5: distribute what is left over the sequence variables
    def sequence_stage(sequence, counts, sigma) -> Iterator[Substitution]:
        leftover = Multiset(counts={t: c for t, c in counts.items() if c})
        if not sequence:
            if not leftover:
                yield sigma
            return
        variables = tuple((v.name, c, v.vclass is not _STAR) for v, c in sequence)
        wrapped = [v.name for v, _ in sequence if v.vclass is _REGULAR]
        system = SequenceEquationSystem(tuple(leftover.items()), variables)
        for solution in wrap_regular(solve_sequence_equations(system), wrapped, head):
            new = ctx.extend(sigma, solution)
            if new is not None:
                yield new

    yield from compound_stage(0, counts, sigma, 0)


def _thetas(thetas: Optional[Iterable[Mapping[str, Value]]]) -> List[Substitution]:
    if thetas is None:
        return [Substitution()]
    return [t if isinstance(t, Substitution) else Substitution(t) for t in thetas]


def _collect(gen_per_theta) -> List[Substitution]:
    seen = set()
    out = []
    for gen in gen_per_theta:
        for sigma in gen:
            if sigma not in seen:
                seen.add(sigma)
                out.append(sigma)
    return out


def match_one_to_one(
    subjects: Sequence[Term],
    pattern: Term,
    fa: Optional[FunctionSymbol] = None,
    thetas: Optional[Iterable[Mapping[str, Value]]] = None,
) -> List[Substitution]:
    """All matches of ``pattern`` against the subject sequence, extending each initial substitution."""
    subjects = tuple(subjects)
    return _collect(_match(subjects, pattern, fa, t, _NO_GUARDS) for t in _thetas(thetas))


def match_sequence(
    subjects: Sequence[Term],
    patterns: Sequence[Term],
    fa: Optional[FunctionSymbol] = None,
    thetas: Optional[Iterable[Mapping[str, Value]]] = None,
) -> List[Substitution]:
    """All matches of the argument patterns against the subject arguments of a non-commutative head."""
    subjects, patterns = tuple(subjects), tuple(patterns)
    return _collect(_match_sequence(subjects, patterns, fa, t, _NO_GUARDS) for t in _thetas(thetas))


def match_commutative(
    subjects: Iterable[Term],
    patterns: Iterable[Term],
    head: FunctionSymbol,
    thetas: Optional[Iterable[Mapping[str, Value]]] = None,
) -> List[Substitution]:
    """All matches of the pattern arguments of commutative ``head`` against the subject arguments."""
    if not head.commutative:
        raise ValueError(f"{head.name} is not commutative")
    subjects = list(subjects)
    p = make_compound(head, patterns)
    s = make_compound(head, subjects)
    return _collect(_match_commutative(s.args, p, t, _NO_GUARDS) for t in _thetas(thetas))


def _dependency_free(guards: Sequence[Guard]) -> bool:
    return all(g.holds({}) for g in guards if not g.variables)


def match_root(subject: Term, pattern) -> Iterator[Substitution]:
    """Lazily yield every distinct match of ``pattern`` (a :class:`Pattern` or term) against ``subject``.

    Local guards are checked as soon as their variables are bound, global
    guards once a full match is found.  Anonymous variables are omitted.
    """
    if not subject.is_ground:
        raise NonGroundSubjectError(f"subject {subject} contains variables")
    pattern = as_pattern(pattern)
    return _match_root(subject, pattern)


def _match_root(subject: Term, pattern: Pattern) -> Iterator[Substitution]:
    if not _dependency_free(pattern.local_guards):
        return
    ctx = GuardContext(pattern.local_guards) if pattern.local_guards else _NO_GUARDS
    global_guards = pattern.global_guards
    hidden = [v.name for v in pattern.term.variables if v.anonymous]
    seen = set()
    for sigma in _match((subject,), pattern.term, None, Substitution(), ctx):
        if global_guards and not all(g.holds(sigma) for g in global_guards):
            continue
        if hidden:
            sigma = sigma.without(hidden)
        if sigma not in seen:
            seen.add(sigma)
            yield sigma
