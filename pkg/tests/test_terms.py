import pickle

import pytest
from hypothesis import given
from hypothesis import strategies as st

from acmatch.exceptions import ArityError, PositionError, SymbolError
from acmatch.flatterm import END_MARK, FlatTerm, flatterm
from acmatch.patterns import Pattern, rename_variables_canonical
from acmatch.terms import (
    END,
    Compound,
    SymbolTable,
    Variable,
    VariableClass,
    canonicalize,
    compare,
    next_position,
    positions,
    skip_position,
    subterm_at,
)
from helpers import brute_ac_equal
from strategies import SIG, ground_terms, pattern_terms


@pytest.fixture
def t():
    table = SymbolTable()
    table.declare("f", None)
    table.declare("g", 2)
    table.declare("h", 1)
    table.constants("a", "b", "c", "d")
    return table


def test_symbol_invariants():
    table = SymbolTable()
    with pytest.raises(SymbolError):
        table.declare("fa", 2, associative=True)
    with pytest.raises(SymbolError):
        table.declare("g", 2, kind="Matrix")
    table.declare("f", None)
    with pytest.raises(SymbolError):
        table.declare("f", 1)
    assert table.constant("M", kind="Matrix").kind == "Matrix"


def test_arity_checked(t):
    with pytest.raises(ArityError):
        t["g"](t["a"]())
    with pytest.raises(ArityError):
        t["h"]()


def test_positions_examples(t):
    f, g, a, b, c, d = t["f"], t["g"], t["a"](), t["b"](), t["c"](), t["d"]()
    x, y = Variable("x"), Variable("y")
    assert positions(f(g(a, x), y)) == [(), (1,), (1, 1), (1, 2), (2,)]
    assert positions(a) == [()]
    assert positions(f(a, g(b, c), d)) == [(), (1,), (2,), (2, 1), (2, 2), (3,)]


def test_subterm_at(t):
    f, g, a, b, c, d = t["f"], t["g"], t["a"](), t["b"](), t["c"](), t["d"]()
    x, y = Variable("x"), Variable("y")
    term = f(g(a, x), y)
    assert subterm_at(term, (1, 2)) == x
    assert subterm_at(term, ()) == term
    assert subterm_at(f(a, g(b, c), d), (2, 2)) == c
    with pytest.raises(PositionError):
        subterm_at(term, (3,))


def test_next_and_skip(t):
    f, g, a, b, c, d = t["f"], t["g"], t["a"](), t["b"](), t["c"](), t["d"]()
    term = f(a, g(b, c), d)
    assert next_position(term, (2,)) == (2, 1)
    assert next_position(term, (3,)) is END
    assert next_position(term, (2, 2)) == (3,)
    assert skip_position(term, (2,)) == (3,)
    assert skip_position(term, (2, 2)) == (3,)
    assert skip_position(term, (3,)) is END
    with pytest.raises(PositionError):
        next_position(term, (4,))


def test_compare_examples(t):
    f, a, b, c = t["f"], t["a"](), t["b"](), t["c"]()
    assert compare(f(a), f(a, b)) == -1
    assert compare(f(a, b), f(a, b)) == 0
    assert compare(f(a, b), f(a, c)) == -1
    assert compare(a, Variable("x")) == -1


def test_variable_order():
    x, xp, xs = Variable("x"), Variable("x", VariableClass.PLUS), Variable("x", VariableClass.STAR)
    anon = Variable(None)
    assert x < xp < xs
    assert Variable("y") < anon
    assert Variable("x2") < Variable("x10")


def test_canonicalize_examples():
    table = SymbolTable()
    fa = table.declare("fA", None, associative=True)
    fc = table.declare("fC", None, commutative=True)
    g = table.declare("g", None)
    h = table.declare("h", 1)
    a, b, c = table.constants("a", "b", "c")
    x, y, z = Variable("x"), Variable("y"), Variable("z")
    raw = Compound(fa, (x, Compound(fa, (y, z))))
    assert canonicalize(raw) == Compound(fa, (x, y, z))
    assert fa(x, fa(y, z)) == Compound(fa, (x, y, z))
    raw = Compound(fc, (b, a, Compound(g, (a, b)), Compound(g, (c,)), Compound(h, (a,))))
    assert canonicalize(raw).args == (a, b, g(c), g(a, b), h(a))
    assert canonicalize(a) is a


def test_flatterm_examples(t):
    f, g, h, a, b, c = t["f"], t["g"], t["h"], t["a"](), t["b"](), t["c"]()
    assert str(flatterm(f(a, h(b), c))) == "f⟨ a h⟨ b ⟩ c ⟩"
    assert list(flatterm(a)) == [a]
    assert list(flatterm(f(g(a, b)))) == [f, g, a, b, END_MARK, END_MARK]


def test_rename_canonical_examples(t):
    f, g, h = t["f"], t["g"], t["h"]
    x, y, z = Variable("x"), Variable("y"), Variable("z")
    renamed, inverse = rename_variables_canonical(Pattern(f(x, y, h(z))))
    assert str(renamed.term) == "f(x1_, x2_, h(x3.1_))"
    assert inverse == {"x1": "x", "x2": "y", "x3.1": "z"}
    renamed, _ = rename_variables_canonical(Pattern(f(x, x)))
    assert str(renamed.term) == "f(x1_, x1_)"
    ground = f(t["a"]())
    assert rename_variables_canonical(Pattern(ground))[0].term == ground


def test_rename_keeps_class_and_kind(t):
    f = t["f"]
    p = Pattern(f(Variable("u", kind="K"), Variable("v", VariableClass.STAR), Variable(None)))
    renamed, inverse = rename_variables_canonical(p)
    kinds = sorted((v.vclass, str(v.kind)) for v in renamed.term.variables)
    assert kinds == sorted((v.vclass, str(v.kind)) for v in p.term.variables)
    assert None in inverse.values()


def test_terms_pickle(t):
    term = t["f"](t["a"](), Variable("x"))
    assert pickle.loads(pickle.dumps(term)) == term


@given(ground_terms(30))
def test_next_visits_all_positions(term):
    seen = [()]
    while True:
        nxt = next_position(term, seen[-1])
        if nxt is END:
            break
        seen.append(nxt)
    assert seen == positions(term)
    assert len(seen) == term.size


@given(ground_terms(30), st.data())
def test_skip_matches_brute_force(term, data):
    pos = positions(term)
    nu = data.draw(st.sampled_from(pos))
    later = [q for q in pos[pos.index(nu) + 1 :] if len(q) <= len(nu)]
    expected = later[0] if later else END
    assert skip_position(term, nu) == expected


@given(ground_terms(8), ground_terms(8), ground_terms(8))
def test_compare_total_order(s, t, u):
    assert compare(s, t) == -compare(t, s)
    assert (compare(s, t) == 0) == (s == t)
    if compare(s, t) <= 0 and compare(t, u) <= 0:
        assert compare(s, u) <= 0


@given(ground_terms(15))
def test_canonicalize_idempotent(term):
    assert canonicalize(term) == term
    assert canonicalize(canonicalize(term)) == canonicalize(term)


@given(st.one_of(ground_terms(15), pattern_terms()))
def test_flatterm_roundtrip(term):
    flat = FlatTerm.from_term(term)
    assert flat.to_term() == term
    compounds = [p for p in positions(term) if isinstance(subterm_at(term, p), Compound)]
    assert sum(1 for tok in flat if tok is END_MARK) == len(compounds)


def test_canonical_equality_small_oracle():
    fa, fc, fac = SIG.fa, SIG.fc, SIG.fac
    a, b, c = SIG.constants
    raw1 = Compound(fac, (Compound(fac, (b, a)), c))
    raw2 = Compound(fac, (a, Compound(fac, (c, b))))
    assert canonicalize(raw1) == canonicalize(raw2)
    assert brute_ac_equal(raw1, raw2)
    raw3 = Compound(fa, (Compound(fa, (b, a)), c))
    raw4 = Compound(fa, (a, Compound(fa, (b, c))))
    assert canonicalize(raw3) != canonicalize(raw4)
    assert not brute_ac_equal(raw3, raw4)
    assert canonicalize(Compound(fc, (Compound(fc, (a, b)), c))) != canonicalize(Compound(fc, (a, b, c)))
