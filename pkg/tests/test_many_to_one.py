import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from acmatch.discrimination import (
    ADN,
    MLDN,
    ManyToOneMatcher,
    SubjectArrays,
    adn_add_pattern,
    adn_match,
    many_to_one_match,
    mldn_add_pattern,
    mldn_match,
)
from acmatch.exceptions import FrozenNetError, NonGroundSubjectError, UnsupportedPatternError
from acmatch.flatterm import FlatTerm
from acmatch.multiset import Multiset
from acmatch.one_to_one import match_root
from acmatch.patterns import Pattern, rename_variables_canonical
from acmatch.substitution import Substitution
from acmatch.terms import SymbolTable, Variable, VariableClass
from acmatch.vsdn import VSDN, vsdn_build, vsdn_match
from helpers import Signature, random_ground, random_pattern, match_set

x, y = Variable("x"), Variable("y")
xs, ys = Variable("x", VariableClass.STAR), Variable("y", VariableClass.STAR)
xp = Variable("x", VariableClass.PLUS)


def sig():
    t = SymbolTable()
    f = t.declare("f", None)
    g = t.declare("g", None)
    h = t.declare("h", 1)
    gc = t.declare("gc", None, commutative=True)
    a, b, c = t.constants("a", "b", "c")
    return t, f, g, h, gc, a, b, c


T, f, g, h, gc, a, b, c = sig()
f1 = T.declare("f1", 1)


# VSDN


def fig43():
    return vsdn_build([Pattern(f(a, x), id="f(a,x)"), Pattern(f(a), id="f(a)"), Pattern(f(y, b), id="f(y,b)")])


def test_vsdn_fig43_leaves():
    net = fig43()
    assert vsdn_match(net, f(a, b)) == {"f(a,x)", "f(y,b)"}
    assert vsdn_match(net, f(b, b)) == {"f(y,b)"}
    assert vsdn_match(net, f(a)) == {"f(a)"}
    assert vsdn_match(net, f(a, b, c)) == set()
    assert vsdn_match(net, f(f(a), b)) == {"f(y,b)"}


def test_vsdn_rejects_unknown_head():
    assert vsdn_match(vsdn_build([f(a)]), g(a)) == set()


def test_vsdn_nonlinear_checked_after_acceptance():
    net = vsdn_build([Pattern(f(x, x), id=0)])
    assert net.candidates(f(a, b)) == [0]
    assert vsdn_match(net, f(a, b)) == set()
    assert vsdn_match(net, f(a, a)) == {0}


def test_vsdn_substitutions():
    got = dict(fig43().match(f(a, h(c))))
    assert got == {"f(a,x)": Substitution({"x": h(c)})}


def test_vsdn_rejects_sequence_and_commutative():
    with pytest.raises(UnsupportedPatternError):
        VSDN([f(xs)])
    with pytest.raises(UnsupportedPatternError):
        VSDN([f(gc(a, x))])


def test_vsdn_frozen():
    net = fig43()
    with pytest.raises(FrozenNetError):
        net.add(f(b))
    with pytest.raises(NonGroundSubjectError):
        list(net.match(f(x)))


def test_vsdn_linear_steps():
    s = Signature()
    rng = random.Random(3)
    patterns = [random_pattern(s, rng, random_ground(s, rng, heads=[s.f, s.g, s.h]), guards=False) for _ in range(40)]
    patterns = [p for p in patterns if p.is_syntactic]
    net = vsdn_build(patterns)
    for _ in range(200):
        subject = random_ground(s, rng, heads=[s.f, s.g, s.h])
        _, steps = net.run(subject)
        assert steps <= len(FlatTerm.from_term(subject))


# ADN


def fig44():
    return ManyToOneMatcher([Pattern(f(a), id="f(a)"), Pattern(f(a, xs), id="f(a,x*)"), Pattern(f(y, b), id="f(y,b)")], commutative=False).freeze()


def test_adn_fig44_runs():
    net = fig44()
    assert adn_match(net, f(a, b)) == {("f(a,x*)", Substitution({"x": (b,)})), ("f(y,b)", Substitution({"y": a}))}
    assert adn_match(net, f(a)) == {("f(a)", Substitution()), ("f(a,x*)", Substitution({"x": ()}))}
    assert adn_match(net, g(a)) == set()


def test_adn_renaming_shares_chain():
    one = ManyToOneMatcher([f(x)], commutative=False)
    both = ManyToOneMatcher([f(x), f(y)], commutative=False)
    assert both.state_count == one.state_count
    finals = [list(st.final) for st in both.net.iter_states() if st.final]
    assert finals == [[0, 1]]
    assert set(both.freeze().match(f(a))) == {(0, Substitution({"x": a})), (1, Substitution({"y": a}))}


def test_adn_sequence_variable_gets_own_final_state():
    net = ManyToOneMatcher([f(x), f(y)], commutative=False)
    before = net.state_count
    adn_add_pattern(net, f(xp))
    assert net.state_count > before
    finals = sorted(list(st.final) for st in net.net.iter_states() if st.final)
    assert finals == [[0, 1], [2]]


def test_adn_linear_chain_and_idempotence():
    net = ManyToOneMatcher(commutative=False)
    adn_add_pattern(net, f(a, g(b)))
    assert net.state_count == len(FlatTerm.from_term(f(a, g(b)))) + 1
    states = net.state_count
    adn_add_pattern(net, f(a, g(b)))
    assert net.state_count == states and len(net) == 1


def test_adn_rejects_commutative():
    with pytest.raises(UnsupportedPatternError):
        ADN().add_term(gc(a, x), 0)


def test_frozen_matcher():
    net = fig44()
    with pytest.raises(FrozenNetError):
        net.add(f(c))


def test_state_count_monotone():
    s = Signature()
    rng = random.Random(8)
    net = ManyToOneMatcher()
    last = net.state_count
    for i in range(30):
        net.add(random_pattern(s, rng), i)
        assert net.state_count >= last
        last = net.state_count


# MLDN


def fig45():
    net = ManyToOneMatcher()
    for pid, term in enumerate([f1(gc(a, x, x)), f1(gc(a, h(x), h(a))), f1(gc(h(b), h(x)))]):
        mldn_add_pattern(net, term, pid)
    return net.freeze()


def comm_nodes(net):
    return [node for st in net.net.iter_states() for node in st.commutative.values()]


def paper_label(term):
    # inner pattern ids as numbered in the figure: x, h(x), h(b), h(a), a
    if isinstance(term, Variable):
        return 1
    text = str(term)
    return {"h(b)": 3, "h(a)": 4, "a": 5}.get(text, 2)


def test_mldn_requirement_multisets():
    (node,) = comm_nodes(fig45())
    assert len(node.subpatterns) == 5
    labels = sorted(paper_label(t) for t in node.subpatterns)
    assert labels == [1, 2, 3, 4, 5]
    got = {Multiset(counts={paper_label(t): m for t, m in r.items()}) for r in node.requirement_multisets()}
    assert got == {Multiset([1, 1, 5]), Multiset([2, 4, 5]), Multiset([2, 3])}


def test_mldn_fig45_subjects():
    net = fig45()
    assert set(mldn_match(net, f1(gc(a, h(a), h(a))))) == {(0, Substitution({"x": h(a)})), (1, Substitution({"x": a}))}
    assert list(mldn_match(net, f1(gc(a, a, h(a))))) == []


def test_mldn_sequence_leftovers():
    net = ManyToOneMatcher([f1(gc(a, x, x, ys))]).freeze()
    got = set(net.match(f1(gc(a, a, a, h(a), h(a)))))
    assert (0, Substitution({"x": h(a), "y": Multiset([a, a])})) in got
    assert got == {(0, s) for s in match_root(f1(gc(a, a, a, h(a), h(a))), f1(gc(a, x, x, ys)))}


def test_mldn_plain_pattern_has_no_commutative_states():
    net = ManyToOneMatcher([f(a, x)])
    assert comm_nodes(net) == []
    assert isinstance(net.net, MLDN)


def test_filter_soundness():
    net = fig45()
    patterns = net.patterns
    (node,) = comm_nodes(net)
    for subject_args in [(a, h(a), h(a)), (a, a, h(a)), (h(b), h(c)), (h(b), h(a)), (a, a, a)]:
        subject = f1(gc(*subject_args))
        arrays = SubjectArrays(subject)
        distinct, counts, by_sid = node.inner_matches(arrays, 1)
        survivors = set().union(*[_finals(ex.target) for ex in node.survivors(distinct, counts, by_sid)])
        emitted = {pid for pid, _ in net.match(subject)}
        assert emitted <= survivors
        for pid, p in enumerate(patterns):
            if pid not in survivors:
                assert list(match_root(subject, p)) == []


def _finals(state):
    """Pattern indices reachable from ``state``."""
    out, todo, seen = set(), [state], set()
    while todo:
        st = todo.pop()
        if id(st) in seen:
            continue
        seen.add(id(st))
        out |= set(st.final)
        todo += [nxt for options in st.symbols.values() for _, nxt in options]
        todo += [nxt for _, _, nxt in st.variables]
        todo += [ex.target for node in st.commutative.values() for ex in node.exits.values()]
    return out


def test_many_to_one_trivial_nets():
    assert list(many_to_one_match([], f(a))) == []
    p = Pattern(f(xp, y), id="p")
    assert set(many_to_one_match([p], f(a, b, c))) == {("p", s) for s in match_root(f(a, b, c), p)}


def test_many_to_one_equals_one_to_one_random():
    s = Signature()
    rng = random.Random(11)
    for round_ in range(8):
        patterns = [random_pattern(s, rng, pid=i) for i in range(rng.randint(5, 25))]
        net = ManyToOneMatcher(patterns).freeze()
        for _ in range(10):
            subject = random_ground(s, rng) if rng.random() < 0.5 else rng.choice(patterns).term
            if not subject.is_ground:
                subject = random_ground(s, rng)
            expected = {(p.id, sigma.normalized()) for p in patterns for sigma in match_root(subject, p)}
            assert match_set(net.match(subject)) == expected


# properties


_SIG = Signature()


@given(st.integers(0, 10**6))
def test_renaming_preserves_matches(seed):
    rng = random.Random(seed)
    subject = random_ground(_SIG, rng)
    pattern = random_pattern(_SIG, rng, subject if rng.random() < 0.7 else None)
    renamed, inverse = rename_variables_canonical(pattern)
    again, _ = rename_variables_canonical(renamed)
    assert again.term == renamed.term
    got = {sigma.rename(inverse) for sigma in match_root(subject, renamed)}
    hidden = [v.name for v in pattern.term.variables if v.anonymous]
    expected = {sigma.without(hidden) if hidden else sigma for sigma in match_root(subject, pattern)}
    assert got == expected


@given(st.integers(0, 10**6))
def test_many_to_one_property(seed):
    rng = random.Random(seed)
    seeds = [random_ground(_SIG, rng) for _ in range(4)]
    patterns = [random_pattern(_SIG, rng, rng.choice(seeds), pid=i) for i in range(rng.randint(1, 12))]
    net = ManyToOneMatcher(patterns).freeze()
    for subject in seeds + [random_ground(_SIG, rng)]:
        expected = {(p.id, sigma) for p in patterns for sigma in match_root(subject, p)}
        assert set(net.match(subject)) == expected
