"""Terms over a symbol table: constants, variables and compound terms.

Terms are immutable and always kept in canonical form when built through
:class:`FunctionSymbol` calls or :func:`make_compound`: arguments of
associative heads are flattened and arguments of commutative heads are sorted
by the total term order.  :class:`Compound` itself is a raw constructor that
performs no normalisation; :func:`canonicalize` repairs such terms.

Positions are tuples of 1-based argument indices, ``()`` being the root.
"""
from __future__ import annotations

import enum
import itertools
import re
from typing import Dict, Iterable, Iterator, List, Optional, Sequence, Tuple, Union

from .exceptions import ArityError, PositionError, SymbolError

__all__ = [
    "FunctionSymbol",
    "SymbolTable",
    "VariableClass",
    "Term",
    "Constant",
    "Variable",
    "Compound",
    "make_compound",
    "canonicalize",
    "compare",
    "positions",
    "subterm_at",
    "next_position",
    "skip_position",
    "END",
    "Position",
]

Position = Tuple[int, ...]


class _End:
    """The position after the last one of a preorder traversal."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "END"

    def __reduce__(self):
        return (_End, ())


END = _End()


class FunctionSymbol:
    """A function symbol; constants are fixed-arity symbols with arity 0.

    ``arity`` is the exact argument count for fixed-arity symbols and the
    minimum count for variadic ones.  Built by :meth:`SymbolTable.declare`.
    """

    __slots__ = ("name", "arity", "variadic", "associative", "commutative", "kind", "index", "_key", "_constant")

    def __init__(
        self,
        name: str,
        arity: int = 0,
        variadic: bool = False,
        associative: bool = False,
        commutative: bool = False,
        kind: Optional[str] = None,
        index: int = 0,
    ):
        if arity < 0:
            raise SymbolError(f"negative arity for {name!r}")
        if associative and not variadic:
            raise SymbolError(f"associative symbol {name!r} must be variadic")
        if kind is not None and (variadic or arity != 0):
            raise SymbolError(f"only constants may carry a kind ({name!r})")
        self.name = name
        self.arity = arity
        self.variadic = variadic
        self.associative = associative
        self.commutative = commutative
        self.kind = kind
        self.index = index
        self._key = (0, name, index)
        self._constant = Constant(self) if self.is_constant else None

    @property
    def is_constant(self) -> bool:
        return self.arity == 0 and not self.variadic

    def accepts(self, count: int) -> bool:
        return count >= self.arity if self.variadic else count == self.arity

    def __call__(self, *args: Term) -> Term:
        if self._constant is not None and not args:
            return self._constant
        return make_compound(self, args)

    def __repr__(self) -> str:
        flags = []
        if self.variadic:
            flags.append(f"variadic>={self.arity}")
        else:
            flags.append(f"arity={self.arity}")
        if self.associative:
            flags.append("A")
        if self.commutative:
            flags.append("C")
        if self.kind:
            flags.append(f"kind={self.kind}")
        return f"FunctionSymbol({self.name}, {', '.join(flags)})"

    def __str__(self) -> str:
        return self.name

    def __lt__(self, other: "FunctionSymbol") -> bool:
        return self._key < other._key

    def __reduce__(self):
        return (
            FunctionSymbol,
            (self.name, self.arity, self.variadic, self.associative, self.commutative, self.kind, self.index),
        )


class SymbolTable:
    """Declares function symbols with unique names.

    Also carries a property table mapping constant names to sets of property
    names, consulted by the ``has_properties`` guard predicate.
    """

    def __init__(self):
        self._symbols: Dict[str, FunctionSymbol] = {}
        self.properties: Dict[str, frozenset] = {}

    def declare(
        self,
        name: str,
        arity: Optional[int] = 0,
        *,
        variadic: bool = False,
        associative: bool = False,
        commutative: bool = False,
        kind: Optional[str] = None,
    ) -> FunctionSymbol:
        """Declare ``name``; ``arity=None`` is shorthand for variadic with minimum 0."""
        if name in self._symbols:
            raise SymbolError(f"symbol {name!r} already declared")
        if arity is None:
            arity, variadic = 0, True
        symbol = FunctionSymbol(name, arity, variadic, associative, commutative, kind, len(self._symbols))
        self._symbols[name] = symbol
        return symbol

    def constant(self, name: str, kind: Optional[str] = None, properties: Iterable[str] = ()) -> "Constant":
        """Declare a constant (or fetch an existing one) and return its term."""
        symbol = self._symbols.get(name)
        if symbol is None:
            symbol = self.declare(name, 0, kind=kind)
        elif not symbol.is_constant:
            raise SymbolError(f"{name!r} is not a constant")
        props = frozenset(properties)
        if props:
            self.properties[name] = self.properties.get(name, frozenset()) | props
        return symbol()

    def constants(self, *names: str, kind: Optional[str] = None) -> List["Constant"]:
        return [self.constant(n, kind) for n in names]

    def properties_of(self, symbol: Union[FunctionSymbol, str]) -> frozenset:
        name = symbol if isinstance(symbol, str) else symbol.name
        return self.properties.get(name, frozenset())

    def __getitem__(self, name: str) -> FunctionSymbol:
        return self._symbols[name]

    def get(self, name: str) -> Optional[FunctionSymbol]:
        return self._symbols.get(name)

    def __contains__(self, name: str) -> bool:
        return name in self._symbols

    def __iter__(self) -> Iterator[FunctionSymbol]:
        return iter(self._symbols.values())

    def __len__(self) -> int:
        return len(self._symbols)


class VariableClass(enum.IntEnum):
    """Variable classes in term order: regular < plus < star."""

    REGULAR = 0
    PLUS = 1
    STAR = 2


_anonymous_ids = itertools.count()
_DIGITS = re.compile(r"(\d+)")


def _natural_key(name: str) -> tuple:
    parts = _DIGITS.split(name)
    return tuple(int(p) if i % 2 else p for i, p in enumerate(parts))


class Term:
    """Common base of :class:`Constant`, :class:`Variable` and :class:`Compound`."""

    __slots__ = ("_key", "_hash", "_vars", "size", "__weakref__")

    head: object
    args: Tuple["Term", ...] = ()

    def __eq__(self, other: object) -> bool:
        if self is other:
            return True
        if not isinstance(other, Term):
            return NotImplemented
        return self._hash == other._hash and self._key == other._key

    def __ne__(self, other: object) -> bool:
        result = self.__eq__(other)
        return result if result is NotImplemented else not result

    def __hash__(self) -> int:
        return self._hash

    def __lt__(self, other: "Term") -> bool:
        return self._key < other._key

    def __le__(self, other: "Term") -> bool:
        return self._key <= other._key

    def __gt__(self, other: "Term") -> bool:
        return self._key > other._key

    def __ge__(self, other: "Term") -> bool:
        return self._key >= other._key

    @property
    def sort_key(self) -> tuple:
        return self._key

    @property
    def variables(self) -> frozenset:
        """Set of :class:`Variable` objects occurring in the term."""
        return self._vars

    @property
    def variable_names(self) -> frozenset:
        return frozenset(v.name for v in self._vars)

    @property
    def is_ground(self) -> bool:
        return not self._vars

    def __repr__(self) -> str:
        return f"{type(self).__name__}({self})"


class Constant(Term):
    """A constant symbol used as a term."""

    __slots__ = ("symbol",)

    def __init__(self, symbol: FunctionSymbol):
        self.symbol = symbol
        self._key = (symbol._key, 0, ())
        self._hash = hash(self._key)
        self._vars = frozenset()
        self.size = 1

    @property
    def head(self) -> FunctionSymbol:
        return self.symbol

    @property
    def kind(self) -> Optional[str]:
        return self.symbol.kind

    def __str__(self) -> str:
        return self.symbol.name

    def __reduce__(self):
        return (Constant, (self.symbol,))


class Variable(Term):
    """A (possibly anonymous, possibly kind-restricted) variable.

    Anonymous wildcards get a hidden unique name so that two occurrences never
    constrain each other; ``anonymous`` marks them for removal from results.
    A ``kind`` restricts a regular variable to constants of that kind.
    """

    __slots__ = ("name", "vclass", "kind", "anonymous")

    def __init__(
        self,
        name: Optional[str] = None,
        vclass: VariableClass = VariableClass.REGULAR,
        kind: Optional[str] = None,
        anonymous: bool = False,
    ):
        vclass = VariableClass(vclass)
        if kind is not None and vclass is not VariableClass.REGULAR:
            raise ValueError("only regular variables can be restricted to a symbol kind")
        if name is None:
            name = f"_{next(_anonymous_ids)}"
            anonymous = True
        self.name = name
        self.vclass = vclass
        self.kind = kind
        self.anonymous = anonymous
        self._key = ((1, int(vclass), int(anonymous), _natural_key(name), kind or ""), 0, ())
        self._hash = hash(self._key)
        self._vars = frozenset((self,))
        self.size = 1

    @classmethod
    def regular(cls, name: Optional[str] = None, kind: Optional[str] = None) -> "Variable":
        return cls(name, VariableClass.REGULAR, kind)

    @classmethod
    def plus(cls, name: Optional[str] = None) -> "Variable":
        return cls(name, VariableClass.PLUS)

    @classmethod
    def star(cls, name: Optional[str] = None) -> "Variable":
        return cls(name, VariableClass.STAR)

    @property
    def head(self) -> "Variable":
        return self

    @property
    def is_sequence(self) -> bool:
        return self.vclass is not VariableClass.REGULAR

    @property
    def is_star(self) -> bool:
        return self.vclass is VariableClass.STAR

    @property
    def is_plus(self) -> bool:
        return self.vclass is VariableClass.PLUS

    def renamed(self, name: str) -> "Variable":
        return Variable(name, self.vclass, self.kind, self.anonymous)

    def __str__(self) -> str:
        base = "" if self.anonymous else self.name
        if self.vclass is VariableClass.REGULAR:
            return f"{base}_{self.kind or ''}"
        if self.vclass is VariableClass.PLUS:
            return f"{base}__"
        return f"{base}___"

    def __reduce__(self):
        return (Variable, (self.name, self.vclass, self.kind, self.anonymous))


def _check_arity(head: FunctionSymbol, args: Sequence[Term]) -> None:
    fixed = sum(1 for a in args if not (isinstance(a, Variable) and a.is_sequence))
    if fixed == len(args):
        ok = head.accepts(fixed)
    else:
        ok = head.variadic or fixed <= head.arity
    if not ok:
        expected = f"at least {head.arity}" if head.variadic else str(head.arity)
        raise ArityError(f"{head.name} expects {expected} arguments, got {len(args)}")


class Compound(Term):
    """A head symbol applied to an argument tuple.

    The constructor checks arity but does not canonicalise; prefer calling the
    head symbol (``f(a, b)``) or :func:`make_compound`.
    """

    __slots__ = ("head", "args", "_cache")

    def __init__(self, head: FunctionSymbol, args: Iterable[Term]):
        args = tuple(args)
        if head.is_constant:
            raise ArityError(f"constant {head.name} cannot take arguments")
        _check_arity(head, args)
        self.head = head
        self.args = args
        self._key = (head._key, len(args), tuple(a._key for a in args))
        self._hash = hash((head._key, len(args), tuple(a._hash for a in args)))
        if args:
            self._vars = frozenset().union(*(a._vars for a in args))
        else:
            self._vars = frozenset()
        self.size = 1 + sum(a.size for a in args)
        self._cache = None

    def __str__(self) -> str:
        return f"{self.head.name}({', '.join(map(str, self.args))})"

    def __reduce__(self):
        return (Compound, (self.head, self.args))


def make_compound(head: FunctionSymbol, args: Iterable[Term]) -> Compound:
    """Build ``head(args)`` in canonical form (flattened, sorted)."""
    args = tuple(args)
    if head.associative and any(isinstance(a, Compound) and a.head is head for a in args):
        flat: List[Term] = []
        for a in args:
            if isinstance(a, Compound) and a.head is head:
                flat.extend(a.args)
            else:
                flat.append(a)
        args = tuple(flat)
    if head.commutative and len(args) > 1:
        args = tuple(sorted(args, key=_sort_key))
    return Compound(head, args)


def _sort_key(term: Term) -> tuple:
    return term._key


def canonicalize(term: Term) -> Term:
    """Return the AC-canonical form of ``term``: flatten, then sort, bottom-up."""
    if isinstance(term, Compound):
        return make_compound(term.head, (canonicalize(a) for a in term.args))
    return term


def compare(t1: Term, t2: Term) -> int:
    """Three-way comparison under the total term order (-1, 0 or 1)."""
    k1, k2 = t1._key, t2._key
    if k1 == k2:
        return 0
    return -1 if k1 < k2 else 1


def positions(term: Term) -> List[Position]:
    """All positions of ``term`` in lexicographic (preorder) order."""
    result: List[Position] = []
    stack: List[Tuple[Position, Term]] = [((), term)]
    while stack:
        pos, t = stack.pop()
        result.append(pos)
        for i in range(len(t.args), 0, -1):
            stack.append((pos + (i,), t.args[i - 1]))
    return result


def subterm_at(term: Term, position: Sequence[int]) -> Term:
    t = term
    for i in position:
        if not 1 <= i <= len(t.args):
            raise PositionError(f"position {tuple(position)} is not in {term}")
        t = t.args[i - 1]
    return t


def next_position(term: Term, position: Sequence[int]):
    """Next position in preorder, or :data:`END`."""
    position = tuple(position)
    if subterm_at(term, position).args:
        return position + (1,)
    return skip_position(term, position)


def skip_position(term: Term, position: Sequence[int]):
    """Next position in preorder after the subterm at ``position``, or :data:`END`."""
    position = tuple(position)
    subterm_at(term, position)
    for depth in range(len(position), 0, -1):
        parent = subterm_at(term, position[: depth - 1])
        index = position[depth - 1]
        if index < len(parent.args):
            return position[: depth - 1] + (index + 1,)
    return END
