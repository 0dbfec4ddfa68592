"""Random terms, patterns and brute-force oracles shared by the test modules."""
from __future__ import annotations

import itertools
import random
from typing import Iterator, List, Optional, Set

from acmatch.patterns import Guard, NotEqual, Pattern
from acmatch.substitution import Substitution, apply
from acmatch.terms import Compound, Constant, SymbolTable, Term, Variable, VariableClass


class Signature:
    def __init__(self):
        t = self.table = SymbolTable()
        self.constants = t.constants("a", "b", "c")
        self.kinded = [t.constant("k1", kind="K"), t.constant("k2", kind="K")]
        self.f = t.declare("f", None)
        self.g = t.declare("g", 2)
        self.h = t.declare("h", 1)
        self.fa = t.declare("fa", None, associative=True)
        self.fc = t.declare("fc", None, commutative=True)
        self.fac = t.declare("fac", None, associative=True, commutative=True)
        self.variadic = [self.f, self.fa, self.fc, self.fac]
        self.atoms = self.constants + self.kinded[:1]


def random_ground(sig: Signature, rng: random.Random, depth: int = 3, max_args: int = 4, heads=None) -> Term:
    heads = heads or [sig.f, sig.g, sig.h, sig.fa, sig.fc, sig.fac]
    if depth <= 0 or rng.random() < 0.35:
        return rng.choice(sig.atoms)
    head = rng.choice(heads)
    if head.variadic:
        n = rng.randint(0 if head is sig.f else 2, max_args)
    else:
        n = head.arity
    return head(*[random_ground(sig, rng, depth - 1, max_args, heads) for _ in range(n)])


_NAMES = ["x", "y", "z", "w"]


def abstract(sig: Signature, rng: random.Random, term: Term, p_var: float = 0.3, parent_assoc=False) -> Term:
    """Turn a ground term into a pattern that usually still matches it."""
    name = rng.choice(_NAMES)
    r = rng.random()
    if r < p_var:
        if isinstance(term, Constant) and term.kind and rng.random() < 0.5:
            return Variable(name + "k", kind=term.kind)
        if rng.random() < 0.15:
            return Variable(None)
        return Variable(name)
    if not isinstance(term, Compound):
        return term
    args = []
    i = 0
    n = len(term.args)
    while i < n:
        if term.head.variadic and rng.random() < 0.3:
            length = rng.randint(0, n - i)
            cls = VariableClass.STAR if length == 0 or rng.random() < 0.5 else VariableClass.PLUS
            args.append(Variable(rng.choice(_NAMES) + ("s" if cls is VariableClass.STAR else "p"), cls))
            i += length
            if length == 0:
                continue
        else:
            args.append(abstract(sig, rng, term.args[i], p_var, term.head.associative))
            i += 1
    try:
        return term.head(*args)
    except ValueError:
        return term


def random_pattern_term(sig: Signature, rng: random.Random, subject: Optional[Term] = None) -> Term:
    subject = subject if subject is not None else random_ground(sig, rng)
    for _ in range(10):
        p = abstract(sig, rng, subject, p_var=rng.choice([0.15, 0.3, 0.5]))
        if _names_consistent(p):
            return p
    return subject


def _names_consistent(term: Term) -> bool:
    return len(term.variable_names) == len(term.variables)


def random_pattern(sig: Signature, rng: random.Random, subject: Optional[Term] = None, pid=None, guards=True) -> Pattern:
    term = random_pattern_term(sig, rng, subject)
    global_guards, local_guards = [], []
    names = sorted(v.name for v in term.variables if not v.anonymous and not v.is_sequence)
    if guards and names and rng.random() < 0.3:
        v = rng.choice(names)
        g = Guard("ne", (v,), NotEqual(rng.choice(sig.constants)))
        (local_guards if rng.random() < 0.5 else global_guards).append(g)
    return Pattern(term, global_guards, local_guards, id=pid)


# oracles


def ac_variants(term: Term, limit: int = 5000) -> Set[Term]:
    """All raw terms equal to ``term`` modulo AC (bracketings and permutations)."""
    out: Set[Term] = set()
    for t in _variants(term):
        out.add(t)
        if len(out) >= limit:
            break
    return out


def _compositions(n: int, parts: int) -> Iterator[tuple]:
    if parts == 1:
        yield (n,)
        return
    for first in range(1, n - parts + 2):
        for rest in _compositions(n - first, parts - 1):
            yield (first,) + rest


def _trees(head, args) -> Iterator[Term]:
    """Every nesting of ``args`` (kept in order) under the associative ``head``."""
    if len(args) == 1:
        yield args[0]
        return
    for parts in range(2, len(args) + 1):
        for sizes in _compositions(len(args), parts):
            blocks, i = [], 0
            for size in sizes:
                blocks.append(args[i : i + size])
                i += size
            for children in itertools.product(*[list(_trees(head, b)) for b in blocks]):
                yield Compound(head, children)


def _bracketings(head, args) -> Iterator[Term]:
    if len(args) < 2:
        yield Compound(head, args)
        return
    yield from _trees(head, args)


def _flat_args(head, args):
    out = []
    for a in args:
        if isinstance(a, Compound) and a.head is head:
            out.extend(_flat_args(head, a.args))
        else:
            out.append(a)
    return out


def _variants(term: Term) -> Iterator[Term]:
    if not isinstance(term, Compound):
        yield term
        return
    head = term.head
    args = _flat_args(head, term.args) if head.associative else list(term.args)
    options = [list(_variants(a)) for a in args]
    for combo in itertools.product(*options):
        perms = set(itertools.permutations(combo)) if head.commutative else {tuple(combo)}
        for perm in perms:
            if head.associative:
                yield from _bracketings(head, list(perm))
            else:
                yield Compound(head, perm)


def brute_commutative_matches(subject: Term, pattern: Term) -> Set[Substitution]:
    """Matches of a pattern whose root is commutative, by trying every subject argument order.

    Inner commutative subterms are matched recursively by the same oracle.
    """
    results: Set[Substitution] = set()
    for sigma in _brute(subject, pattern, Substitution()):
        results.add(sigma.normalized())
    return results


def brute_matches(subject: Term, pattern: Term) -> Set[Substitution]:
    """Like :func:`brute_commutative_matches` but keeps sequence values as found."""
    return set(_brute(subject, pattern, Substitution()))


def _brute(s: Term, p: Term, sigma: Substitution) -> Iterator[Substitution]:
    if isinstance(p, Variable):
        if p.is_sequence:
            value = (s,)
        else:
            if p.kind is not None and not (isinstance(s, Constant) and s.kind == p.kind):
                return
            value = s
        new = sigma.bind(p.name, value)
        if new is not None:
            yield new
        return
    if isinstance(p, Constant):
        if s == p:
            yield sigma
        return
    if not isinstance(s, Compound) or s.head is not p.head:
        return
    fa = p.head if p.head.associative else None
    orders = set(itertools.permutations(s.args)) if p.head.commutative else {s.args}
    for order in sorted(orders):
        yield from _brute_sequence(list(order), list(p.args), fa, sigma)


def _brute_sequence(subjects, patterns, fa, sigma):
    """Plain enumeration of all splits of the subject list among the pattern list."""
    if not patterns:
        if not subjects:
            yield sigma
        return
    p = patterns[0]
    if isinstance(p, Variable) and (p.is_sequence or (fa is not None and p.kind is None)):
        lo = 0 if p.vclass is VariableClass.STAR else 1
        for k in range(lo, len(subjects) + 1):
            part = subjects[:k]
            if p.vclass is VariableClass.REGULAR:
                value = part[0] if len(part) == 1 else fa(*part)
            else:
                value = tuple(part)
            new = sigma.bind(p.name, value)
            if new is not None:
                yield from _brute_sequence(subjects[k:], patterns[1:], fa, new)
        return
    if not subjects:
        return
    for new in _brute(subjects[0], p, sigma):
        yield from _brute_sequence(subjects[1:], patterns[1:], fa, new)


def brute_ac_equal(t1: Term, t2: Term) -> bool:
    """Equality modulo AC by searching the raw variant space of ``t1``."""
    if t1.size != t2.size and not _has_assoc(t1) and not _has_assoc(t2):
        return False
    return t2 in ac_variants(t1, limit=10**6)


def _has_assoc(t: Term) -> bool:
    return isinstance(t, Compound) and (t.head.associative or any(_has_assoc(a) for a in t.args))


def brute_matchings(n_left: int, n_right: int, edges) -> Set[frozenset]:
    """All maximum matchings, by trying every assignment of left nodes (or none)."""
    adj = {}
    for u, v in edges:
        adj.setdefault(u, []).append(v)
    lefts = sorted(adj, key=repr)
    found: List[frozenset] = []

    def dfs(k, used, chosen):
        if k == len(lefts):
            found.append(frozenset(chosen))
            return
        u = lefts[k]
        dfs(k + 1, used, chosen)
        for v in adj[u]:
            if v not in used:
                used.add(v)
                chosen.append((u, v))
                dfs(k + 1, used, chosen)
                chosen.pop()
                used.discard(v)

    dfs(0, set(), [])
    best = max(len(m) for m in found)
    return {m for m in found if len(m) == best}


def match_set(results) -> Set:
    return {r.normalized() if isinstance(r, Substitution) else (r[0], r[1].normalized()) for r in results}


def sound(subject: Term, pattern: Term, sigma: Substitution) -> bool:
    return apply(sigma, pattern) == subject
