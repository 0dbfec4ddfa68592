"""Linear algebra benchmark problem: BLAS-kernel style patterns and random subjects.

Products use the associative symbol ``Times``, sums the associative and
commutative ``Plus``; ``Trans``, ``Inv`` and ``InvTrans`` are unary.  Constants
are scalars ``a0..``, vectors ``v0..`` and matrices ``M0..`` of kinds
``Scalar``, ``Vector`` and ``Matrix``.  Matrices carry consistent property
sets (a diagonal matrix is also triangular, symmetric and square).

Patterns wrap a kernel in context sequence variables, e.g.
``Times(c1___, Trans(A_Matrix), B_Matrix, c2___)`` with the guard
``has_properties(A, Square, UpperTriangular)``.
"""
from __future__ import annotations

import itertools
import random
from typing import List, Optional, Sequence, Tuple

from .parsing import ProblemFile
from .patterns import Guard, HasProperties, Pattern
from .terms import SymbolTable, Term, Variable, VariableClass

__all__ = [
    "KIND_WEIGHTS",
    "PROPERTY_SETS",
    "linalg_table",
    "draw_operand_kind",
    "generate_linalg_subjects",
    "generate_linalg_patterns",
    "linalg_problem",
]

# scalar : vector : matrix = 3 : 5 : 10, i.e. 16.67%, 27.78%, 55.55%
KIND_WEIGHTS = (("Scalar", 3 / 18), ("Vector", 5 / 18), ("Matrix", 10 / 18))

PROPERTY_SETS: Tuple[frozenset, ...] = (
    frozenset(),
    frozenset({"Square"}),
    frozenset({"Square", "Symmetric"}),
    frozenset({"Square", "UpperTriangular"}),
    frozenset({"Square", "LowerTriangular"}),
    frozenset({"Square", "Symmetric", "Diagonal", "UpperTriangular", "LowerTriangular"}),
)

_MATRIX_WRAPS = ("Trans", "Inv", "InvTrans")


def linalg_table(scalars: int = 4, vectors: int = 6, matrices: int = 12) -> SymbolTable:
    """Symbols and constants; matrix ``Mi`` gets property set ``i mod 6``."""
    t = SymbolTable()
    t.declare("Times", None, associative=True)
    t.declare("Plus", None, associative=True, commutative=True)
    for name in ("Trans", "Inv", "InvTrans"):
        t.declare(name, 1)
    for i in range(scalars):
        t.constant(f"a{i}", kind="Scalar")
    for i in range(vectors):
        t.constant(f"v{i}", kind="Vector")
    for i in range(matrices):
        t.constant(f"M{i}", kind="Matrix", properties=PROPERTY_SETS[i % len(PROPERTY_SETS)])
    return t


def draw_operand_kind(rng: random.Random) -> str:
    r = rng.random()
    acc = 0.0
    for kind, weight in KIND_WEIGHTS:
        acc += weight
        if r < acc:
            return kind
    return KIND_WEIGHTS[-1][0]


def _pool(table: SymbolTable, kind: str) -> List[Term]:
    return [s() for s in table if s.is_constant and s.kind == kind]


def _operand(table: SymbolTable, rng: random.Random, pools) -> Term:
    kind = draw_operand_kind(rng)
    term = rng.choice(pools[kind])
    if kind == "Vector" and rng.random() < 0.4:
        return table["Trans"](term)
    if kind == "Matrix" and rng.random() < 0.6:
        # the split among the three wrappers is not given; uniform
        return table[rng.choice(_MATRIX_WRAPS)](term)
    return term


def _count(rng: random.Random, operands: Tuple[float, float]) -> int:
    mu, sigma = operands
    return max(1, int(round(rng.gauss(mu, sigma)))) if sigma > 0 else max(1, int(round(mu)))


def generate_linalg_subjects(
    count: int,
    seed: int = 0,
    operands: Tuple[float, float] = (5, 5 / 3),
    table: Optional[SymbolTable] = None,
    sum_fraction: float = 0.3,
) -> List[Term]:
    """Random products and sums; the same seed gives the same subjects.

    Exactly ``round(count * sum_fraction)`` subjects are sums.  A product has
    a normally distributed operand count.  A sum has that many summands (at
    least two), each a single operand or a product of two or three operands.
    """
    if count < 1:
        raise ValueError("count must be at least 1")
    table = table or linalg_table()
    rng = random.Random(seed)
    pools = {kind: _pool(table, kind) for kind, _ in KIND_WEIGHTS}
    times, plus = table["Times"], table["Plus"]
    n_sums = int(round(count * sum_fraction))
    is_sum = [True] * n_sums + [False] * (count - n_sums)
    rng.shuffle(is_sum)
    out = []
    for sums in is_sum:
        n = _count(rng, operands)
        if sums:
            summands = []
            for _ in range(max(n, 2)):
                k = rng.choice((1, 2, 2, 3))
                ops = [_operand(table, rng, pools) for _ in range(k)]
                summands.append(ops[0] if k == 1 else times(*ops))
            out.append(plus(*summands))
        else:
            out.append(times(*[_operand(table, rng, pools) for _ in range(n)]))
    return out


_CONSTRAINTS = (
    (),
    ("Square", "UpperTriangular"),
    ("Square", "LowerTriangular"),
    ("Symmetric",),
    ("Diagonal",),
)


class _Builder:
    def __init__(self, table: SymbolTable):
        self.table = table
        self.times = table["Times"]
        self.plus = table["Plus"]
        self.patterns: List[Pattern] = []
        self.seen = set()

    def m(self, name: str, wrap: Optional[str] = None) -> Term:
        v = Variable(name, VariableClass.REGULAR, "Matrix")
        return self.table[wrap](v) if wrap else v

    @staticmethod
    def s(name: str) -> Term:
        return Variable(name, VariableClass.REGULAR, "Scalar")

    def v(self, name: str, trans: bool = False) -> Term:
        var = Variable(name, VariableClass.REGULAR, "Vector")
        return self.table["Trans"](var) if trans else var

    def guards(self, constraints) -> List[Guard]:
        return [
            Guard("has_properties", (name,), HasProperties(frozenset(props), self.table))
            for name, props in constraints
            if props
        ]

    def add(self, term: Term, constraints=()) -> None:
        guards = tuple(self.guards(constraints))
        if (term, guards) in self.seen:
            return
        self.seen.add((term, guards))
        self.patterns.append(Pattern(term, (), guards, id=f"P{len(self.patterns) + 1}"))

    def product(self, *factors: Term, constraints=()) -> None:
        self.add(self.times(Variable.star("c1"), *factors, Variable.star("c2")), constraints)

    def sum(self, *summands: Term, constraints=()) -> None:
        self.add(self.plus(*summands, Variable.star("c")), constraints)


def generate_linalg_patterns(table: Optional[SymbolTable] = None) -> List[Pattern]:
    """Kernel patterns: 135 products, 61 sums and 3 single-matrix patterns."""
    table = table or linalg_table()
    b = _Builder(table)
    forms = (None,) + _MATRIX_WRAPS
    plain_t = (None, "Trans")

    products: List[Tuple[Tuple[Term, ...], tuple]] = []
    # trmm / trsm / symm style: op(A) * B and B * op(A) with a structured A
    for wrap, props in itertools.product(forms, _CONSTRAINTS):
        for bwrap in plain_t:
            products.append(((b.m("A", wrap), b.m("B", bwrap)), (("A", props),)))
            products.append(((b.m("B", bwrap), b.m("A", wrap)), (("A", props),)))
    # gemm
    for aw, bw in itertools.product(plain_t, plain_t):
        products.append(((b.s("alpha"), b.m("A", aw), b.m("B", bw)), ()))
    # gemv and trmv / trsv
    for wrap, props in itertools.product(forms, _CONSTRAINTS):
        products.append(((b.m("A", wrap), b.v("x")), (("A", props),)))
    for aw in plain_t:
        products.append(((b.s("alpha"), b.m("A", aw), b.v("x")), ()))
        products.append(((b.v("x", True), b.m("A", aw)), ()))
    # ger, dot, scal, quadratic forms
    products.append(((b.v("x"), b.v("y", True)), ()))
    products.append(((b.s("alpha"), b.v("x"), b.v("y", True)), ()))
    products.append(((b.v("x", True), b.v("y")), ()))
    products.append(((b.v("x", True), b.m("A"), b.v("y")), ()))
    products.append(((b.v("x", True), b.m("A"), b.v("x")), (("A", ("Symmetric",)),)))
    products.append(((b.s("alpha"), b.v("x")), ()))
    products.append(((b.s("alpha"), b.m("A")), ()))
    products.append(((b.s("alpha"), b.s("beta")), ()))
    products.append(((b.m("A"), b.m("B"), b.m("C")), ()))
    products.append(((b.m("A"), b.m("A", "Trans")), ()))
    products.append(((b.m("A", "Trans"), b.m("A")), ()))
    for wrap in forms:
        products.append(((b.m("A", wrap), b.m("A", wrap)), (("A", ("Square",)),)))
    for wrap, props in itertools.product(forms, _CONSTRAINTS[1:]):
        products.append(((b.s("alpha"), b.m("A", wrap), b.m("B")), (("A", props),)))
    for factors, constraints in products:
        if len(b.patterns) >= 135:
            break
        b.product(*factors, constraints=constraints)

    times = b.times
    sums: List[Tuple[Tuple[Term, ...], tuple]] = []
    for aw, bw in itertools.product(plain_t, plain_t):
        sums.append(((times(b.s("alpha"), b.m("A", aw), b.m("B", bw)), times(b.s("beta"), b.m("C"))), ()))
        for cprops in ((), ("Symmetric",)):
            sums.append(((times(b.m("A", aw), b.m("B", bw)), b.m("C")), (("C", cprops),)))
    for aw in plain_t:
        sums.append(((times(b.s("alpha"), b.m("A", aw), b.v("x")), times(b.s("beta"), b.v("y"))), ()))
        sums.append(((times(b.s("alpha"), b.m("A", aw), b.m("A", "Trans" if aw is None else None)), b.m("C")), ()))
    for wrap, props in itertools.product(forms, _CONSTRAINTS):
        sums.append(((times(b.m("A", wrap), b.v("x")), b.v("y")), (("A", props),)))
    for wrap, props in itertools.product(forms, _CONSTRAINTS[1:3]):
        sums.append(((times(b.m("A", wrap), b.m("B")), b.m("C")), (("A", props),)))
    for wrap, props in itertools.product(forms, _CONSTRAINTS[1:]):
        sums.append(((times(b.s("alpha"), b.m("A", wrap), b.v("x")), b.v("y")), (("A", props),)))
    sums.append(((times(b.s("alpha"), b.v("x")), b.v("y")), ()))
    sums.append(((b.v("x"), b.v("y")), ()))
    sums.append(((b.m("A"), b.m("B")), ()))
    sums.append(((times(b.s("alpha"), b.m("A")), b.m("B")), ()))
    sums.append(((times(b.s("alpha"), b.m("A")), times(b.s("beta"), b.m("B"))), ()))
    sums.append(((times(b.s("alpha"), b.v("x"), b.v("y", True)), b.m("A")), ()))
    sums.append(((times(b.v("x"), b.v("y", True)), b.m("A")), ()))
    sums.append(((times(b.m("A"), b.m("A", "Trans")), b.m("C")), (("C", ("Symmetric",)),)))
    sums.append(((b.m("A"), b.m("A", "Trans")), ()))
    sums.append(((times(b.m("A"), b.m("B")), times(b.m("B", "Trans"), b.m("A", "Trans")), b.m("C")), ()))
    sums.append(((times(b.s("alpha"), b.m("A"), b.m("B")), times(b.s("alpha"), b.m("B"), b.m("A"))), ()))
    n_sums = 0
    for summands, constraints in sums:
        if n_sums >= 61:
            break
        before = len(b.patterns)
        b.sum(*summands, constraints=constraints)
        n_sums += len(b.patterns) - before

    b.add(b.m("A"))
    b.add(b.m("A", "Trans"))
    b.add(b.m("A", "Inv"), (("A", ("Square",)),))
    return b.patterns


def linalg_problem(count: int = 100, seed: int = 0, operands: Tuple[float, float] = (5, 5 / 3)) -> ProblemFile:
    """The full benchmark problem with ``count`` generated subjects."""
    table = linalg_table()
    problem = ProblemFile(table=table)
    for p in generate_linalg_patterns(table):
        problem.patterns[p.id] = p
    for i, s in enumerate(generate_linalg_subjects(count, seed, operands, table)):
        problem.subjects[f"S{i + 1}"] = s
    return problem
