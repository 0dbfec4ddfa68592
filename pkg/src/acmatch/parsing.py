"""Text syntax for terms and problem files.

Term syntax::

    f(a, g(x_, y__), z___)      compound, regular, plus and star variables
    _  __  ___                  anonymous variables
    x_Matrix  _Matrix           variables restricted to constants of a kind
    (g(x_, a) if ne(x, b))      subterm carrying a local guard

Problem files hold one declaration per line; ``#`` starts a comment::

    symbol f: variadic associative commutative
    symbol g: arity 2
    symbol M0, M1: constant kind Matrix
    property M0: Square Symmetric
    pattern P1: f(x_, a) if ne(x, b)
    subject S1: f(a, b)

Guards may use the builtin predicates ``has_properties(VAR, P1, ...)`` and
``ne(VAR, symbol)``.  Undeclared bare identifiers are declared as constants on
first use; undeclared compound heads are an error.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

from .exceptions import ArityError, ProblemArityError, ProblemSyntaxError, SymbolError, UndeclaredSymbolError
from .patterns import Guard, HasProperties, NotEqual, Pattern
from .terms import Compound, Constant, SymbolTable, Term, Variable, VariableClass

__all__ = ["ProblemFile", "parse_problem", "parse_term", "parse_pattern", "dump_problem", "render_guard"]

_TOKEN = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<var>(?:[A-Za-z][A-Za-z0-9]*)?_{1,3}(?:[A-Za-z][A-Za-z0-9]*)?)
  | (?P<ident>[A-Za-z][A-Za-z0-9]*)
  | (?P<punct>[(),])
    """,
    re.VERBOSE,
)

_CLASSES = {1: VariableClass.REGULAR, 2: VariableClass.PLUS, 3: VariableClass.STAR}


@dataclass
class ProblemFile:
    """Parsed problem file: symbols (with properties), patterns and subjects."""

    table: SymbolTable = field(default_factory=SymbolTable)
    patterns: Dict[str, Pattern] = field(default_factory=dict)
    subjects: Dict[str, Term] = field(default_factory=dict)

    @property
    def properties(self) -> Dict[str, frozenset]:
        return self.table.properties


class _Tokens:
    def __init__(self, text: str, line: int, offset: int):
        self.items: List[Tuple[str, str, int]] = []
        self.line = line
        pos = 0
        while pos < len(text):
            m = _TOKEN.match(text, pos)
            if m is None:
                raise ProblemSyntaxError(f"unexpected character {text[pos]!r}", line, offset + pos + 1)
            kind = m.lastgroup
            if kind != "ws":
                value = m.group()
                if kind == "punct" or (kind == "ident" and value in ("if", "and")):
                    kind = value
                self.items.append((kind, value, offset + pos + 1))
            pos = m.end()
        self.end_col = offset + len(text) + 1
        self.i = 0

    def peek(self) -> Tuple[str, str, int]:
        if self.i < len(self.items):
            return self.items[self.i]
        return ("eof", "", self.end_col)

    def next(self) -> Tuple[str, str, int]:
        tok = self.peek()
        self.i += 1
        return tok

    def expect(self, kind: str, what: Optional[str] = None) -> Tuple[str, str, int]:
        tok = self.next()
        if tok[0] != kind:
            found = "end of input" if tok[0] == "eof" else repr(tok[1])
            raise ProblemSyntaxError(f"expected {what or kind}, found {found}", self.line, tok[2])
        return tok

    def error(self, message: str, tok=None) -> ProblemSyntaxError:
        tok = tok or self.peek()
        return ProblemSyntaxError(message, self.line, tok[2])


class _TermParser:
    def __init__(self, table: SymbolTable, tokens: _Tokens, declare_constants: bool = True):
        self.table = table
        self.tokens = tokens
        self.declare_constants = declare_constants
        self.local_guards: List[Guard] = []
        self.variables: Dict[str, Variable] = {}

    def term(self) -> Term:
        kind, value, col = self.tokens.peek()
        if kind == "(":
            return self._guarded()
        if kind == "var":
            self.tokens.next()
            return self._variable(value, col)
        if kind == "ident":
            self.tokens.next()
            if self.tokens.peek()[0] == "(":
                return self._compound(value, col)
            return self._constant(value, col)
        if kind == "eof":
            raise self.tokens.error("unexpected end of input")
        raise self.tokens.error(f"unexpected {value!r}")

    def _guarded(self) -> Term:
        self.tokens.expect("(")
        inner = self.term()
        self.tokens.expect("if", "'if'")
        guards = self.guards()
        self.tokens.expect(")", "')'")
        self.local_guards.extend(guards)
        return inner

    def _variable(self, text: str, col: int) -> Variable:
        m = re.fullmatch(r"([A-Za-z][A-Za-z0-9]*)?(_{1,3})([A-Za-z][A-Za-z0-9]*)?", text)
        name, underscores, kind = m.group(1), len(m.group(2)), m.group(3)
        if kind and underscores != 1:
            raise ProblemSyntaxError(f"only regular variables take a kind: {text!r}", self.tokens.line, col)
        var = Variable(name, _CLASSES[underscores], kind)
        if name is not None:
            known = self.variables.get(name)
            if known is None:
                self.variables[name] = var
            elif known != var:
                raise ProblemSyntaxError(f"variable {name!r} used inconsistently", self.tokens.line, col)
        return var

    def _constant(self, name: str, col: int) -> Constant:
        symbol = self.table.get(name)
        if symbol is None:
            if not self.declare_constants:
                raise UndeclaredSymbolError(f"undeclared symbol {name!r}", self.tokens.line, col)
            return self.table.constant(name)
        if not symbol.is_constant:
            raise ProblemArityError(f"{name} needs arguments", self.tokens.line, col)
        return symbol()

    def _compound(self, name: str, col: int) -> Term:
        symbol = self.table.get(name)
        if symbol is None:
            raise UndeclaredSymbolError(f"undeclared symbol {name!r}", self.tokens.line, col)
        self.tokens.expect("(")
        args: List[Term] = []
        if self.tokens.peek()[0] != ")":
            args.append(self.term())
            while self.tokens.peek()[0] == ",":
                self.tokens.next()
                args.append(self.term())
        self.tokens.expect(")", "')' or ','")
        if symbol.is_constant:
            if args:
                raise ProblemArityError(f"constant {name} takes no arguments", self.tokens.line, col)
            return symbol()
        try:
            return symbol(*args)
        except ArityError as exc:
            raise ProblemArityError(str(exc), self.tokens.line, col) from None

    def guards(self) -> List[Guard]:
        out = [self._guard()]
        while self.tokens.peek()[0] == "and":
            self.tokens.next()
            out.append(self._guard())
        return out

    def _guard(self) -> Guard:
        kind, name, col = self.tokens.next()
        if kind not in ("ident", "var"):
            raise ProblemSyntaxError(f"expected a guard predicate, found {name or 'end of input'!r}", self.tokens.line, col)
        self.tokens.expect("(")
        args: List[Tuple[str, str, int]] = []
        if self.tokens.peek()[0] != ")":
            args.append(self.tokens.next())
            while self.tokens.peek()[0] == ",":
                self.tokens.next()
                args.append(self.tokens.next())
        self.tokens.expect(")", "')' or ','")
        if not args or args[0][0] not in ("ident", "var"):
            raise ProblemSyntaxError(f"{name} needs a variable as first argument", self.tokens.line, col)
        var = args[0][1].split("_")[0]
        if not var or var not in self.variables:
            raise ProblemSyntaxError(f"guard refers to unknown variable {args[0][1]!r}", self.tokens.line, args[0][2])
        rest = []
        for kind, value, c in args[1:]:
            if kind != "ident":
                raise ProblemSyntaxError(f"expected an identifier, found {value!r}", self.tokens.line, c)
            rest.append(value)
        if name == "has_properties":
            if not rest:
                raise ProblemSyntaxError("has_properties needs at least one property", self.tokens.line, col)
            return Guard(name, (var,), HasProperties(frozenset(rest), self.table))
        if name == "ne":
            if len(rest) != 1:
                raise ProblemSyntaxError("ne takes a variable and one symbol", self.tokens.line, col)
            sym = self.table.get(rest[0])
            if sym is None:
                other = self.table.constant(rest[0])
            elif sym.is_constant:
                other = sym()
            else:
                raise ProblemSyntaxError(f"ne compares against constants, not {rest[0]}", self.tokens.line, col)
            return Guard(name, (var,), NotEqual(other))
        raise ProblemSyntaxError(f"unknown guard predicate {name!r}", self.tokens.line, col)


def parse_term(text: str, table: SymbolTable, line: int = 1, offset: int = 0, declare_constants: bool = True) -> Term:
    """Parse a single term; local guards are not allowed here."""
    tokens = _Tokens(text, line, offset)
    parser = _TermParser(table, tokens, declare_constants)
    term = parser.term()
    if tokens.peek()[0] != "eof":
        raise tokens.error(f"unexpected {tokens.peek()[1]!r} after term")
    if parser.local_guards:
        raise ProblemSyntaxError("guards are only allowed in patterns", line, offset + 1)
    return term


def parse_pattern(text: str, table: SymbolTable, id=None, line: int = 1, offset: int = 0) -> Pattern:
    """Parse ``term [if guard and ...]``; parenthesised ``(t if g)`` subterms give local guards."""
    tokens = _Tokens(text, line, offset)
    parser = _TermParser(table, tokens)
    term = parser.term()
    global_guards: List[Guard] = []
    if tokens.peek()[0] == "if":
        tokens.next()
        global_guards = parser.guards()
    if tokens.peek()[0] != "eof":
        raise tokens.error(f"unexpected {tokens.peek()[1]!r} after pattern")
    return Pattern(term, global_guards, parser.local_guards, id=id)


_SYMBOL_LINE = re.compile(r"symbol\s+(?P<names>[^:]+):(?P<spec>.*)$")
_NAMED_LINE = re.compile(r"(?P<kw>pattern|subject|property)\s+(?P<names>[^:]+):(?P<body>.*)$")
_IDENT = re.compile(r"[A-Za-z][A-Za-z0-9]*$")


def _names(text: str, line: int, col: int) -> List[str]:
    names = [n.strip() for n in text.split(",")]
    for n in names:
        if not _IDENT.match(n):
            raise ProblemSyntaxError(f"invalid name {n!r}", line, col)
    return names


def _declare(table: SymbolTable, names: List[str], spec: str, line: int, col: int) -> None:
    words = spec.split()
    arity: Optional[int] = 0
    variadic = associative = commutative = False
    kind = None
    i = 0

    def number(j: int) -> int:
        if j >= len(words) or not words[j].isdigit():
            raise ProblemSyntaxError(f"expected a number after {words[j - 1]!r}", line, col)
        return int(words[j])

    while i < len(words):
        w = words[i]
        if w == "constant":
            arity, variadic = 0, False
        elif w == "arity":
            arity = number(i + 1)
            i += 1
        elif w == "variadic":
            variadic = True
            arity = 0
            if i + 1 < len(words) and words[i + 1] == "min":
                arity = number(i + 2)
                i += 2
        elif w == "associative":
            associative = True
        elif w == "commutative":
            commutative = True
        elif w == "kind":
            if i + 1 >= len(words) or not _IDENT.match(words[i + 1]):
                raise ProblemSyntaxError("expected a kind name", line, col)
            kind = words[i + 1]
            i += 1
        else:
            raise ProblemSyntaxError(f"unknown symbol attribute {w!r}", line, col)
        i += 1
    for name in names:
        try:
            table.declare(
                name, arity, variadic=variadic, associative=associative, commutative=commutative, kind=kind
            )
        except SymbolError as exc:
            raise ProblemSyntaxError(str(exc), line, col) from None


def parse_problem(text: str) -> ProblemFile:
    """Parse a problem file; errors carry the line and column of the offending text."""
    problem = ProblemFile()
    table = problem.table
    for lineno, raw in enumerate(text.splitlines(), 1):
        content = raw.split("#", 1)[0].rstrip()
        stripped = content.lstrip()
        if not stripped:
            continue
        indent = len(content) - len(stripped)
        m = _SYMBOL_LINE.match(stripped)
        if m:
            names = _names(m.group("names"), lineno, indent + 1)
            _declare(table, names, m.group("spec"), lineno, indent + m.start("spec") + 1)
            continue
        m = _NAMED_LINE.match(stripped)
        if not m:
            raise ProblemSyntaxError("expected 'symbol', 'property', 'pattern' or 'subject'", lineno, indent + 1)
        kw, body = m.group("kw"), m.group("body")
        body_offset = indent + m.start("body")
        names = _names(m.group("names"), lineno, indent + m.start("names") + 1)
        if kw == "property":
            props = body.replace(",", " ").split()
            for name in names:
                sym = table.get(name)
                if sym is not None and not sym.is_constant:
                    raise ProblemSyntaxError(f"properties apply to constants, not {name}", lineno, indent + 1)
                table.constant(name, properties=props)
            continue
        if len(names) != 1:
            raise ProblemSyntaxError(f"a {kw} takes exactly one name", lineno, indent + 1)
        name = names[0]
        store = problem.patterns if kw == "pattern" else problem.subjects
        if name in store:
            raise ProblemSyntaxError(f"duplicate {kw} {name!r}", lineno, indent + 1)
        try:
            if kw == "pattern":
                store[name] = parse_pattern(body, table, id=name, line=lineno, offset=body_offset)
            else:
                term = parse_term(body, table, line=lineno, offset=body_offset)
                if not term.is_ground:
                    raise ProblemSyntaxError("subjects must be ground", lineno, body_offset + 1)
                store[name] = term
        except ValueError as exc:
            if isinstance(exc, ProblemSyntaxError):
                raise
            raise ProblemSyntaxError(str(exc), lineno, body_offset + 1) from None
    return problem


def render_guard(guard: Guard) -> str:
    pred = guard.predicate
    if isinstance(pred, HasProperties):
        return f"has_properties({', '.join(guard.variables + tuple(sorted(pred.properties)))})"
    if isinstance(pred, NotEqual):
        return f"ne({guard.variables[0]}, {pred.term})"
    raise ValueError(f"guard {guard} has no text form")


def _render_pattern(pattern: Pattern) -> str:
    text = str(pattern.term)
    if pattern.local_guards:
        text = f"({text} if {' and '.join(map(render_guard, pattern.local_guards))})"
    if pattern.global_guards:
        text += " if " + " and ".join(map(render_guard, pattern.global_guards))
    return text


def dump_problem(problem: ProblemFile) -> str:
    """Serialise a problem; :func:`parse_problem` reads the output back to an equal problem."""
    lines = []
    table = problem.table
    for sym in table:
        if sym.is_constant:
            spec = "constant" + (f" kind {sym.kind}" if sym.kind else "")
        else:
            spec = (f"variadic min {sym.arity}" if sym.arity else "variadic") if sym.variadic else f"arity {sym.arity}"
            if sym.associative:
                spec += " associative"
            if sym.commutative:
                spec += " commutative"
        lines.append(f"symbol {sym.name}: {spec}")
    for name, props in table.properties.items():
        if props:
            lines.append(f"property {name}: {' '.join(sorted(props))}")
    for pid, pattern in problem.patterns.items():
        lines.append(f"pattern {pid}: {_render_pattern(pattern)}")
    for sid, term in problem.subjects.items():
        lines.append(f"subject {sid}: {term}")
    return "\n".join(lines) + "\n"
