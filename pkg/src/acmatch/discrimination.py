"""Non-deterministic discrimination nets for many-to-one matching.

An :class:`ADN` is a trie over pattern flatterms whose transitions are
symbols, end markers and variables (optionally guarded).  Matching explores
all runs with backtracking; variables consume one subject subterm, a range of
sibling subterms, or nothing (star variables).

An :class:`MLDN` adds commutative states: every commutative subpattern is
routed through a node that owns an inner net over the subpattern arguments.
Each subject argument runs through the inner net once, requirement
multisets filter the candidate exits, and the remaining ones are decided by
enumerating canonical maximum matchings of a bipartite graph between
subpatterns and subject arguments.  Unmatched arguments are distributed over
the sequence variables.

:class:`ManyToOneMatcher` is the user-facing facade: it renames variables
by position, keeps per-pattern global guards and restores the original names.
"""
from __future__ import annotations

from typing import Dict, Hashable, Iterable, Iterator, List, Optional, Sequence, Tuple

from .bipartite import _hopcroft_karp, _is_canonical_indexed, _maximum_matchings_indexed, _uses_first_copies
from .combinatorics import SequenceEquationSystem, solve_sequence_equations, wrap_regular
from .exceptions import FrozenNetError, NonGroundSubjectError, UnsupportedPatternError
from .flatterm import END_MARK
from .multiset import Multiset
from .patterns import Guard, Pattern, as_pattern, rename_variables_canonical
from .substitution import Substitution
from .terms import Compound, Constant, FunctionSymbol, Term, Variable, VariableClass, make_compound

__all__ = [
    "ADN",
    "MLDN",
    "ManyToOneMatcher",
    "SubjectArrays",
    "adn_add_pattern",
    "adn_match",
    "mldn_add_pattern",
    "mldn_match",
    "many_to_one_match",
]

_REGULAR = VariableClass.REGULAR
_STAR = VariableClass.STAR
Guards = Tuple[Guard, ...]


class SubjectArrays:
    """Flatterm view of a ground subject with per-token navigation tables."""

    __slots__ = ("tokens", "terms", "skip", "parent_head", "n")

    def __init__(self, term: Term):
        tokens: list = []
        terms: list = []
        skip: List[int] = []
        parent: list = []
        stack = [(term, None, False)]
        opened: List[int] = []
        while stack:
            t, head, closing = stack.pop()
            if closing:
                tokens.append(END_MARK)
                terms.append(None)
                skip.append(len(tokens))
                parent.append(t.head)
                skip[opened.pop()] = len(tokens)
                continue
            i = len(tokens)
            terms.append(t)
            parent.append(head)
            if isinstance(t, Compound):
                tokens.append(t.head)
                skip.append(0)
                opened.append(i)
                stack.append((t, None, True))
                for a in reversed(t.args):
                    stack.append((a, t.head, False))
            else:
                tokens.append(t)
                skip.append(i + 1)
        self.tokens = tokens
        self.terms = terms
        self.skip = skip
        self.parent_head = parent
        self.n = len(tokens)


class _State:
    __slots__ = ("symbols", "variables", "commutative", "final")

    def __init__(self):
        self.symbols: Dict[object, List[Tuple[Guards, "_State"]]] = {}
        self.variables: List[Tuple[Variable, Guards, "_State"]] = []
        self.commutative: Dict[FunctionSymbol, "_CommNode"] = {}
        self.final: Dict[Hashable, None] = {}


def _guards_ok(guards: Guards, sigma: Substitution) -> bool:
    for g in guards:
        if not g.holds(sigma):
            return False
    return True


def _var_order(var: Variable, guards: Guards) -> tuple:
    return (var.sort_key, tuple(str(g) for g in guards))


class _Exit:
    __slots__ = ("requirements", "seqvars", "guards", "target", "n_nodes")

    def __init__(self, requirements, seqvars, guards: Guards, target: _State):
        # requirements: list of (subpattern id, {local name: outer name}, multiplicity)
        self.requirements = requirements
        # seqvars: list of (name, multiplicity, at least one, wrap in head)
        self.seqvars = seqvars
        self.guards = guards
        self.target = target
        self.n_nodes = sum(m for _, _, m in requirements)


class _CommNode:
    """A commutative state: inner net over argument subpatterns plus exits."""

    __slots__ = ("head", "inner", "subpatterns", "index", "exits")

    def __init__(self, head: FunctionSymbol):
        self.head = head
        self.inner = MLDN()
        self.subpatterns: List[Term] = []
        self.index: Dict[Term, int] = {}
        self.exits: Dict[tuple, _Exit] = {}

    def add(self, term: Compound, guards: Guards) -> _State:
        assoc = self.head.associative
        grouped: Dict[Term, int] = {}
        for a in term.args:
            grouped[a] = grouped.get(a, 0) + 1
        reqs: Dict[Tuple[int, tuple], int] = {}
        seqvars: Dict[Variable, int] = {}
        for arg, mult in grouped.items():
            if isinstance(arg, Variable) and (arg.is_sequence or (assoc and arg.kind is None)):
                seqvars[arg] = mult
                continue
            renamed, inverse = rename_variables_canonical(arg, prefix="y")
            local = renamed.term
            sid = self.index.get(local)
            if sid is None:
                sid = self.index[local] = len(self.subpatterns)
                self.subpatterns.append(local)
                self.inner.add_term(local, sid)
            mapping = tuple(sorted(inverse.items()))
            key = (sid, mapping)
            reqs[key] = reqs.get(key, 0) + mult
        key = (
            tuple(sorted(reqs.items())),
            tuple(sorted(seqvars.items(), key=lambda vm: vm[0].sort_key)),
            guards,
        )
        ex = self.exits.get(key)
        if ex is None:
            requirements = [(sid, dict(mapping), mult) for (sid, mapping), mult in key[0]]
            sv = [(v.name, m, v.vclass is not _STAR, v.vclass is _REGULAR) for v, m in key[1]]
            ex = self.exits[key] = _Exit(requirements, sv, guards, _State())
        return ex.target

    def requirement_multisets(self) -> List[Multiset]:
        """Requirement multisets of the exits, as multisets of subpattern terms."""
        out = []
        for ex in self.exits.values():
            out.append(Multiset(counts={self.subpatterns[sid]: m for sid, _, m in ex.requirements}))
        return out

    def match(self, subj: SubjectArrays, i: int, sigma: Substitution) -> Iterator[Tuple[_State, Substitution]]:
        distinct, counts, by_sid = self.inner_matches(subj, i)
        for ex in self.survivors(distinct, counts, by_sid):
            target = ex.target
            for result in self._exit_matches(ex, distinct, counts, by_sid, sigma):
                yield target, result

    def inner_matches(self, subj: SubjectArrays, i: int):
        """Run each distinct argument of the subject compound at ``i`` through the inner net once.

        Returns the distinct arguments, their multiplicities and, per
        subpattern id, the local substitutions for each distinct argument.
        """
        compound = subj.terms[i]
        counts: Dict[Term, int] = {}
        start: Dict[Term, int] = {}
        j = i + 1
        skip = subj.skip
        for a in compound.args:
            if a in counts:
                counts[a] += 1
            else:
                counts[a] = 1
                start[a] = j
            j = skip[j]
        distinct = list(counts)
        by_sid: Dict[int, Dict[int, List[Substitution]]] = {}
        for d, term in enumerate(distinct):
            k = start[term]
            for sid, local in self.inner._matches(subj, k, skip[k]):
                by_sid.setdefault(sid, {}).setdefault(d, []).append(local)
        return distinct, counts, by_sid

    def survivors(self, distinct, counts, by_sid) -> List[_Exit]:
        """Exits whose requirement multiset is included in the multiset of match sets."""
        n_args = sum(counts.values())
        out = []
        for ex in self.exits.values():
            if ex.n_nodes > n_args or (not ex.seqvars and ex.n_nodes != n_args):
                continue
            for sid, _, mult in ex.requirements:
                hits = by_sid.get(sid)
                if hits is None or sum(counts[distinct[d]] for d in hits) < mult:
                    break
            else:
                out.append(ex)
        return out

    def _exit_matches(self, ex: _Exit, distinct, counts, by_sid, sigma: Substitution) -> Iterator[Substitution]:
        # edge labels between requirement r and distinct subject d
        labels: Dict[Tuple[int, int], List[Substitution]] = {}
        for r, (sid, mapping, _) in enumerate(ex.requirements):
            for d, locals_ in by_sid[sid].items():
                outs = []
                for local in locals_:
                    out = local.rename(mapping)
                    if sigma.compatible(out):
                        outs.append(out)
                if outs:
                    labels[(r, d)] = outs
        pterm: List[int] = []
        for r, (_, _, mult) in enumerate(ex.requirements):
            pterm.extend([r] * mult)
        sterm: List[int] = []
        for d, term in enumerate(distinct):
            sterm.extend([d] * counts[term])
        n_left, n_right = len(pterm), len(sterm)
        edges = [(a, b) for a in range(n_left) for b in range(n_right) if (pterm[a], sterm[b]) in labels]
        seen = set()
        if n_left:
            adj: List[List[int]] = [[] for _ in range(n_left)]
            for a, b in edges:
                adj[a].append(b)
            seed = _hopcroft_karp(n_left, n_right, adj)
            if any(r < 0 for r in seed):
                return
            matchings: Iterable[List[int]] = _maximum_matchings_indexed(n_left, n_right, edges)
        else:
            matchings = [[]]
        for match_l in matchings:
            if not (_is_canonical_indexed(match_l, pterm, sterm) and _uses_first_copies(match_l, pterm, sterm)):
                continue
            used = [0] * len(distinct)
            choices = []
            for a, b in enumerate(match_l):
                used[sterm[b]] += 1
                choices.append(labels[(pterm[a], sterm[b])])
            for combined in _combine(choices, 0, sigma):
                for result in self._distribute(ex, distinct, counts, used, combined):
                    if result not in seen:
                        seen.add(result)
                        yield result

    def _distribute(self, ex: _Exit, distinct, counts, used, sigma: Substitution) -> Iterator[Substitution]:
        if not ex.seqvars:
            if _guards_ok(ex.guards, sigma):
                yield sigma
            return
        leftover = Multiset(counts={t: counts[t] - used[d] for d, t in enumerate(distinct)})
        system = SequenceEquationSystem(tuple(leftover.items()), tuple((n, m, p) for n, m, p, _ in ex.seqvars))
        wrapped = [n for n, _, _, w in ex.seqvars if w]
        for solution in wrap_regular(solve_sequence_equations(system), wrapped, self.head):
            new = sigma.try_union(solution)
            if new is not None and _guards_ok(ex.guards, new):
                yield new


def _combine(choices: Sequence[List[Substitution]], i: int, sigma: Substitution) -> Iterator[Substitution]:
    if i == len(choices):
        yield sigma
        return
    for option in choices[i]:
        new = sigma.try_union(option)
        if new is not None:
            yield from _combine(choices, i + 1, new)


class ADN:
    """Associative discrimination net over renamed pattern terms.

    Terms are added with :meth:`add_term` under an identifier; :meth:`match`
    yields ``(identifier, substitution)`` in renamed variable names.
    Commutative heads are rejected; use :class:`MLDN` for those.
    """

    allow_commutative = False

    def __init__(self):
        self.root = _State()
        self.frozen = False

    def freeze(self) -> "ADN":
        self.frozen = True
        return self

    def add_term(self, term: Term, pid: Hashable, local_guards: Sequence[Guard] = ()) -> None:
        if self.frozen:
            raise FrozenNetError("cannot add patterns to a frozen net")
        pending = list(local_guards)
        bound: set = set()

        def ready() -> Guards:
            out = tuple(g for g in pending if g.dependencies <= bound)
            for g in out:
                pending.remove(g)
            return out

        state = self._add(self.root, term, bound, ready)
        if pending:
            raise ValueError(f"guards {pending} were never placed")
        state.final[pid] = None

    def _symbol(self, state: _State, key, guards: Guards) -> _State:
        options = state.symbols.setdefault(key, [])
        for g, nxt in options:
            if g == guards:
                return nxt
        nxt = _State()
        options.append((guards, nxt))
        return nxt

    def _add(self, state: _State, t: Term, bound: set, ready) -> _State:
        if isinstance(t, Variable):
            bound.add(t.name)
            guards = ready()
            for v, g, nxt in state.variables:
                if v == t and g == guards:
                    return nxt
            nxt = _State()
            state.variables.append((t, guards, nxt))
            state.variables.sort(key=lambda e: _var_order(e[0], e[1]))
            return nxt
        if isinstance(t, Constant):
            return self._symbol(state, t, ready())
        head = t.head
        if head.commutative:
            if not self.allow_commutative:
                raise UnsupportedPatternError(f"commutative head {head.name} requires a multilayer net")
            node = state.commutative.get(head)
            if node is None:
                node = state.commutative[head] = _CommNode(head)
            bound.update(t.variable_names)
            return node.add(t, ready())
        state = self._symbol(state, head, ready())
        for a in t.args:
            state = self._add(state, a, bound, ready)
        return self._symbol(state, END_MARK, ready())

    # matching

    def _matches(self, subj: SubjectArrays, i: int, end: int) -> Iterator[Tuple[Hashable, Substitution]]:
        for state, sigma in self._run(self.root, subj, i, end, Substitution()):
            for pid in state.final:
                yield pid, sigma

    def match(self, subject: Term) -> Iterator[Tuple[Hashable, Substitution]]:
        if not subject.is_ground:
            raise NonGroundSubjectError(f"subject {subject} contains variables")
        subj = SubjectArrays(subject)
        return self._matches(subj, 0, subj.n)

    def _run(self, state: _State, subj: SubjectArrays, i: int, end: int, sigma: Substitution):
        if i == end:
            if state.final:
                yield state, sigma
            return
        tok = subj.tokens[i]
        options = state.symbols.get(tok)
        if options:
            for guards, nxt in options:
                if not guards or _guards_ok(guards, sigma):
                    yield from self._run(nxt, subj, i + 1, end, sigma)
        if state.commutative and tok.__class__ is FunctionSymbol and tok.commutative:
            node = state.commutative.get(tok)
            if node is not None:
                after = subj.skip[i]
                for nxt, new in node.match(subj, i, sigma):
                    yield from self._run(nxt, subj, after, end, new)
        if not state.variables:
            return
        if tok is END_MARK:
            for var, guards, nxt in state.variables:
                if var.vclass is _STAR:
                    new = sigma.bind(var.name, ())
                    if new is not None and (not guards or _guards_ok(guards, new)):
                        yield from self._run(nxt, subj, i, end, new)
            return
        term = subj.terms[i]
        skip = subj.skip
        tokens = subj.tokens
        parent = subj.parent_head[i]
        for var, guards, nxt in state.variables:
            vclass = var.vclass
            if vclass is _REGULAR and (var.kind is not None or parent is None or not parent.associative):
                if var.kind is not None and not (term.__class__ is Constant and term.symbol.kind == var.kind):
                    continue
                new = sigma.bind(var.name, term)
                if new is not None and (not guards or _guards_ok(guards, new)):
                    yield from self._run(nxt, subj, skip[i], end, new)
                continue
            if vclass is _STAR:
                new = sigma.bind(var.name, ())
                if new is not None and (not guards or _guards_ok(guards, new)):
                    yield from self._run(nxt, subj, i, end, new)
            # ranges of consecutive siblings, shortest first
            taken: List[Term] = []
            j = i
            while j < end and tokens[j] is not END_MARK:
                taken.append(subj.terms[j])
                j = skip[j]
                if vclass is _REGULAR:
                    value = taken[0] if len(taken) == 1 else make_compound(parent, taken)
                else:
                    value = tuple(taken)
                new = sigma.bind(var.name, value)
                if new is not None and (not guards or _guards_ok(guards, new)):
                    yield from self._run(nxt, subj, j, end, new)

    # introspection

    def iter_states(self) -> Iterator[_State]:
        """All states, including those of inner nets, in depth-first order."""
        stack = [self.root]
        while stack:
            st = stack.pop()
            yield st
            children = []
            for options in st.symbols.values():
                children.extend(nxt for _, nxt in options)
            children.extend(nxt for _, _, nxt in st.variables)
            for node in st.commutative.values():
                children.append(node.inner.root)
                children.extend(ex.target for ex in node.exits.values())
            stack.extend(reversed(children))

    @property
    def state_count(self) -> int:
        return sum(1 for _ in self.iter_states())

    @property
    def transition_count(self) -> int:
        total = 0
        for st in self.iter_states():
            total += sum(len(o) for o in st.symbols.values()) + len(st.variables)
            total += sum(len(node.exits) for node in st.commutative.values())
        return total


class MLDN(ADN):
    """Multilayer discrimination net: an :class:`ADN` with commutative states."""

    allow_commutative = True


class ManyToOneMatcher:
    """Match a subject against many patterns at once.

    Example:
        >>> matcher = ManyToOneMatcher([pattern1, pattern2])  # doctest: +SKIP
        >>> sorted(matcher.match(subject))  # doctest: +SKIP
    """

    def __init__(self, patterns: Iterable = (), commutative: bool = True):
        self.net: ADN = MLDN() if commutative else ADN()
        self._patterns: List[Pattern] = []
        self._ids: List[Hashable] = []
        self._inverse: List[Dict[str, Optional[str]]] = []
        self._global: List[Tuple[Guard, ...]] = []
        self._by_key: Dict[Tuple[Pattern, Hashable], int] = {}
        for p in patterns:
            self.add(p)

    def add(self, pattern, id: Hashable = None) -> Hashable:
        """Add a pattern; its id defaults to the pattern's own id, else the insertion index."""
        if self.net.frozen:
            raise FrozenNetError("cannot add patterns to a frozen net")
        pattern = as_pattern(pattern)
        if id is None and pattern.id is None:
            for (existing, eid), _ in self._by_key.items():
                if existing == pattern:
                    return eid
        pid = id if id is not None else (pattern.id if pattern.id is not None else len(self._patterns))
        key = (pattern, pid)
        if key in self._by_key:
            return pid
        renamed, inverse = rename_variables_canonical(pattern)
        index = len(self._patterns)
        self.net.add_term(renamed.term, index, renamed.local_guards)
        self._by_key[key] = index
        self._patterns.append(pattern)
        self._ids.append(pid)
        self._inverse.append(inverse)
        self._global.append(renamed.global_guards)
        return pid

    def freeze(self) -> "ManyToOneMatcher":
        self.net.freeze()
        return self

    @property
    def frozen(self) -> bool:
        return self.net.frozen

    @property
    def patterns(self) -> List[Pattern]:
        return list(self._patterns)

    @property
    def ids(self) -> List[Hashable]:
        return list(self._ids)

    def pattern(self, pid: Hashable) -> Pattern:
        return self._patterns[self._ids.index(pid)]

    def __len__(self) -> int:
        return len(self._patterns)

    def match(self, subject: Term) -> Iterator[Tuple[Hashable, Substitution]]:
        """Lazily yield ``(pattern id, substitution)`` for every match."""
        if not subject.is_ground:
            raise NonGroundSubjectError(f"subject {subject} contains variables")
        return self._match(subject)

    def _match(self, subject: Term) -> Iterator[Tuple[Hashable, Substitution]]:
        seen = set()
        for index, sigma in self.net.match(subject):
            guards = self._global[index]
            if guards and not _guards_ok(guards, sigma):
                continue
            result = sigma.rename(self._inverse[index])
            key = (index, result)
            if key not in seen:
                seen.add(key)
                yield self._ids[index], result

    def matching_ids(self, subject: Term) -> List[Hashable]:
        return list(dict.fromkeys(pid for pid, _ in self.match(subject)))

    @property
    def state_count(self) -> int:
        return self.net.state_count

    @property
    def transition_count(self) -> int:
        return self.net.transition_count


def adn_add_pattern(net: ManyToOneMatcher, pattern, id: Hashable = None) -> ManyToOneMatcher:
    """Add ``pattern`` to a matcher; re-adding the same pattern and id is a no-op."""
    net.add(pattern, id)
    return net


def adn_match(net: ManyToOneMatcher, subject: Term) -> set:
    """All ``(pattern id, substitution)`` pairs, as a set."""
    return set(net.match(subject))


mldn_add_pattern = adn_add_pattern


def mldn_match(net: ManyToOneMatcher, subject: Term) -> Iterator[Tuple[Hashable, Substitution]]:
    return net.match(subject)


def many_to_one_match(net, subject: Term) -> Iterator[Tuple[Hashable, Substitution]]:
    """Match ``subject`` against a matcher, or against an iterable of patterns."""
    if not isinstance(net, ManyToOneMatcher):
        net = ManyToOneMatcher(net).freeze()
    return net.match(subject)
