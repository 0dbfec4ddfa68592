"""Deterministic discrimination net for syntactic patterns over variadic symbols.

Patterns are linearised to flatterms in which every variable becomes the
wildcard ``ω``.  The net is the subset construction over items
``(pattern, token index, depth)``: ``depth > 0`` means the pattern is skipping
over a subterm that matched ``ω`` while another pattern descended into it.
States offer explicit transitions for the symbols and end markers their items
mention, plus one ``ω`` fallback that skips a whole subject subterm.  After
acceptance each candidate is confirmed by a syntactic match, which checks
non-linear variables, symbol kinds and guards.
"""
from __future__ import annotations

from collections import deque
from typing import Dict, FrozenSet, Hashable, Iterator, List, Optional, Sequence, Tuple

from .exceptions import FrozenNetError, NonGroundSubjectError, UnsupportedPatternError
from .flatterm import END_MARK, FlatTerm
from .one_to_one import GuardContext, syntactic_match
from .patterns import Pattern, as_pattern
from .substitution import Substitution
from .terms import Compound, Constant, FunctionSymbol, Term, Variable

__all__ = ["VSDN", "OMEGA", "vsdn_build", "vsdn_match"]


class _Omega:
    def __repr__(self) -> str:
        return "ω"

    __str__ = __repr__


OMEGA = _Omega()

Item = Tuple[int, int, int]


def _check_syntactic(term: Term, parent: Optional[FunctionSymbol] = None) -> None:
    if isinstance(term, Variable):
        if term.is_sequence:
            raise UnsupportedPatternError(f"sequence variable {term} is not supported by the VSDN")
        if parent is not None and parent.associative and term.kind is None:
            raise UnsupportedPatternError(f"regular variable {term} under associative {parent.name} is not supported")
    elif isinstance(term, Compound):
        if term.head.commutative:
            raise UnsupportedPatternError(f"commutative head {term.head.name} is not supported by the VSDN")
        for a in term.args:
            _check_syntactic(a, term.head)


class _VState:
    __slots__ = ("id", "items", "transitions", "omega", "accept")

    def __init__(self, id: int, items: FrozenSet[Item], accept: FrozenSet[int]):
        self.id = id
        self.items = items
        self.transitions: Dict[Hashable, "_VState"] = {}
        self.omega: Optional["_VState"] = None
        self.accept = accept


class VSDN:
    """Variadic syntactic discrimination net.

    Example:
        >>> net = VSDN()
        >>> net.add(pattern)  # doctest: +SKIP
        >>> net.freeze()      # doctest: +SKIP
        >>> list(net.match(subject))  # doctest: +SKIP
    """

    def __init__(self, patterns: Sequence = ()):
        self._patterns: List[Pattern] = []
        self._ids: List[Hashable] = []
        self._tokens: List[Tuple] = []
        self._contexts: List[GuardContext] = []
        self._root: Optional[_VState] = None
        self._states: List[_VState] = []
        self.frozen = False
        for p in patterns:
            self.add(p)

    def add(self, pattern, id: Hashable = None) -> Hashable:
        if self.frozen:
            raise FrozenNetError("cannot add patterns to a frozen net")
        pattern = as_pattern(pattern)
        _check_syntactic(pattern.term)
        pid = id if id is not None else (pattern.id if pattern.id is not None else len(self._patterns))
        for existing, eid in zip(self._patterns, self._ids):
            if existing == pattern and eid == pid:
                return pid
        self._patterns.append(pattern)
        self._ids.append(pid)
        tokens = tuple(OMEGA if isinstance(t, Variable) else t for t in FlatTerm.from_term(pattern.term))
        self._tokens.append(tokens)
        self._contexts.append(GuardContext(pattern.local_guards))
        self._root = None
        return pid

    def freeze(self) -> "VSDN":
        self._build()
        self.frozen = True
        return self

    # construction

    def _step(self, items: FrozenSet[Item], token) -> FrozenSet[Item]:
        out = set()
        for pid, k, depth in items:
            tokens = self._tokens[pid]
            if depth:
                if token is END_MARK:
                    out.add((pid, k, depth - 1))
                elif isinstance(token, FunctionSymbol):
                    out.add((pid, k, depth + 1))
                else:
                    out.add((pid, k, depth))
                continue
            if k >= len(tokens):
                continue
            want = tokens[k]
            if want is OMEGA:
                if isinstance(token, FunctionSymbol):
                    out.add((pid, k + 1, 1))
                elif token is not END_MARK:
                    out.add((pid, k + 1, 0))
            elif want == token if not isinstance(want, FunctionSymbol) else want is token:
                out.add((pid, k + 1, 0))
        return frozenset(out)

    def _skip(self, items: FrozenSet[Item]) -> FrozenSet[Item]:
        # a whole subterm whose head no item names explicitly
        out = set()
        for pid, k, depth in items:
            if depth:
                out.add((pid, k, depth))
            elif k < len(self._tokens[pid]) and self._tokens[pid][k] is OMEGA:
                out.add((pid, k + 1, 0))
        return frozenset(out)

    def _build(self) -> None:
        if self._root is not None:
            return
        index: Dict[FrozenSet[Item], _VState] = {}
        self._states = []

        def state_for(items: FrozenSet[Item]) -> Optional[_VState]:
            if not items:
                return None
            st = index.get(items)
            if st is None:
                accept = frozenset(pid for pid, k, d in items if d == 0 and k == len(self._tokens[pid]))
                st = index[items] = _VState(len(self._states), items, accept)
                self._states.append(st)
                queue.append(st)
            return st

        queue: deque = deque()
        self._root = state_for(frozenset((pid, 0, 0) for pid in range(len(self._tokens))))
        if self._root is None:
            self._root = _VState(0, frozenset(), frozenset())
            self._states.append(self._root)
        while queue:
            st = queue.popleft()
            symbols = []
            for pid, k, depth in st.items:
                tokens = self._tokens[pid]
                if depth == 0 and k < len(tokens) and tokens[k] is not OMEGA:
                    symbols.append(tokens[k])
            if any(d for _, _, d in st.items):
                symbols.append(END_MARK)
            for token in dict.fromkeys(symbols):
                nxt = state_for(self._step(st.items, token))
                if nxt is not None:
                    st.transitions[token] = nxt
            st.omega = state_for(self._skip(st.items))

    # matching

    def run(self, subject: Term) -> Tuple[List[Hashable], int]:
        """Run the automaton; returns candidate ids (before the final check) and transitions taken."""
        self._build()
        flat = FlatTerm.from_term(subject).tokens
        n = len(flat)
        skip = _skip_table(flat)
        state = self._root
        i = 0
        steps = 0
        while i < n:
            tok = flat[i]
            nxt = state.transitions.get(tok)
            steps += 1
            if nxt is not None:
                state = nxt
                i += 1
            elif state.omega is not None and tok is not END_MARK:
                state = state.omega
                i = skip[i]
            else:
                return [], steps
        return [self._ids[pid] for pid in sorted(state.accept)], steps

    def candidates(self, subject: Term) -> List[Hashable]:
        return self.run(subject)[0]

    def match(self, subject: Term) -> Iterator[Tuple[Hashable, Substitution]]:
        """Yield ``(pattern id, substitution)`` for every pattern matching ``subject``."""
        if not subject.is_ground:
            raise NonGroundSubjectError(f"subject {subject} contains variables")
        self._build()
        pos = {pid: i for i, pid in enumerate(self._ids)}
        for pid in self.run(subject)[0]:
            i = pos[pid]
            pattern = self._patterns[i]
            sigma = syntactic_match(subject, pattern.term, None, self._contexts[i])
            if sigma is None:
                continue
            if not all(g.holds(sigma) for g in pattern.guards):
                continue
            hidden = [v.name for v in pattern.term.variables if v.anonymous]
            yield pid, sigma.without(hidden) if hidden else sigma

    def matching_ids(self, subject: Term) -> List[Hashable]:
        return [pid for pid, _ in self.match(subject)]

    # introspection

    @property
    def states(self) -> List[_VState]:
        self._build()
        return list(self._states)

    @property
    def state_count(self) -> int:
        return len(self.states)

    @property
    def transition_count(self) -> int:
        return sum(len(s.transitions) + (s.omega is not None) for s in self.states)

    def patterns(self) -> List[Pattern]:
        return list(self._patterns)

    def pattern_label(self, pid: Hashable) -> str:
        return str(self._patterns[self._ids.index(pid)].term)


def _skip_table(flat: Sequence) -> List[int]:
    n = len(flat)
    skip = [0] * n
    stack: List[int] = []
    for i, tok in enumerate(flat):
        if isinstance(tok, FunctionSymbol):
            stack.append(i)
        elif tok is END_MARK:
            skip[i] = i + 1
            skip[stack.pop()] = i + 1
        else:
            skip[i] = i + 1
    return skip


def vsdn_build(patterns: Sequence) -> VSDN:
    """Build and freeze a VSDN over ``patterns``."""
    return VSDN(patterns).freeze()


def vsdn_match(net: VSDN, subject: Term) -> set:
    """Ids of the patterns of ``net`` matching ``subject``."""
    return set(net.matching_ids(subject))
