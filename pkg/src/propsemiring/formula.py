"""Propositional formulas over indexed atoms x1, x2, ...

The surface syntax::

    formula  := or_expr ( ("->" | "<->") formula )?
    or_expr  := and_expr ( "|" and_expr )*
    and_expr := unary ( "&" unary )*
    unary    := "~" unary | "(" formula ")" | "x"DIGITS | IDENT | "0" | "1"

``->`` is right-associative and ``a <-> b`` expands to ``(a -> b) & (b -> a)``.
``#`` starts a comment running to the end of the line.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterator, Union


class Formula:
    """Base class of the formula AST. Nodes are immutable and hashable."""

    __slots__ = ()

    def __and__(self, other: Formula) -> Formula:
        return And(self, other)

    def __or__(self, other: Formula) -> Formula:
        return Or(self, other)

    def __invert__(self) -> Formula:
        return Neg(self)

    def __rshift__(self, other: Formula) -> Formula:
        return Implies(self, other)

    def __str__(self) -> str:
        return render(self)


@dataclass(frozen=True, slots=True)
class Atom(Formula):
    index: int

    def __post_init__(self) -> None:
        if not isinstance(self.index, int) or self.index < 1:
            raise ValueError(f"atom index must be a positive integer, got {self.index!r}")


@dataclass(frozen=True, slots=True)
class Neg(Formula):
    arg: Formula


@dataclass(frozen=True, slots=True)
class And(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True, slots=True)
class Or(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True, slots=True)
class Implies(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True, slots=True)
class _Top(Formula):
    pass


@dataclass(frozen=True, slots=True)
class _Bottom(Formula):
    pass


Top = _Top()
Bottom = _Bottom()

Binary = Union[And, Or, Implies]


def x(i: int) -> Atom:
    """Shorthand for ``Atom(i)``."""
    return Atom(i)


def max_atom(phi: Formula) -> int:
    """Largest atom index occurring in ``phi``; 0 for atom-free formulas."""
    best = 0
    stack = [phi]
    while stack:
        node = stack.pop()
        if isinstance(node, Atom):
            best = max(best, node.index)
        elif isinstance(node, Neg):
            stack.append(node.arg)
        elif isinstance(node, (And, Or, Implies)):
            stack.append(node.left)
            stack.append(node.right)
    return best


def atoms(phi: Formula) -> set[int]:
    """Set of atom indices occurring in ``phi``."""
    found: set[int] = set()
    stack = [phi]
    while stack:
        node = stack.pop()
        if isinstance(node, Atom):
            found.add(node.index)
        elif isinstance(node, Neg):
            stack.append(node.arg)
        elif isinstance(node, (And, Or, Implies)):
            stack.append(node.left)
            stack.append(node.right)
    return found


def desugar(phi: Formula) -> Formula:
    """Replace every ``Implies(a, b)`` by ``Or(Neg(a), b)``."""
    if isinstance(phi, Implies):
        return Or(Neg(desugar(phi.left)), desugar(phi.right))
    if isinstance(phi, Neg):
        return Neg(desugar(phi.arg))
    if isinstance(phi, And):
        return And(desugar(phi.left), desugar(phi.right))
    if isinstance(phi, Or):
        return Or(desugar(phi.left), desugar(phi.right))
    return phi


def evaluate(phi: Formula, valuation) -> bool:
    """Truth value of ``phi``; ``valuation`` maps atom index to bool."""
    if isinstance(phi, Atom):
        return bool(valuation[phi.index])
    if isinstance(phi, Neg):
        return not evaluate(phi.arg, valuation)
    if isinstance(phi, And):
        return evaluate(phi.left, valuation) and evaluate(phi.right, valuation)
    if isinstance(phi, Or):
        return evaluate(phi.left, valuation) or evaluate(phi.right, valuation)
    if isinstance(phi, Implies):
        return (not evaluate(phi.left, valuation)) or evaluate(phi.right, valuation)
    if isinstance(phi, _Top):
        return True
    if isinstance(phi, _Bottom):
        return False
    raise TypeError(f"not a formula: {phi!r}")


# -- rendering ---------------------------------------------------------------

# binding strength; higher binds tighter
_PREC = {Implies: 1, Or: 2, And: 3}
_OPS = {Implies: "->", Or: "|", And: "&"}


def render(phi: Formula, names: dict[int, str] | None = None) -> str:
    """Print ``phi`` with the fewest parentheses that still parse back to it.

    ``names`` optionally maps atom indices to identifiers used instead of ``xN``.
    """
    if isinstance(phi, Atom):
        if names and phi.index in names:
            return names[phi.index]
        return f"x{phi.index}"
    if isinstance(phi, _Top):
        return "1"
    if isinstance(phi, _Bottom):
        return "0"
    if isinstance(phi, Neg):
        inner = render(phi.arg, names)
        if isinstance(phi.arg, (And, Or, Implies)):
            inner = f"({inner})"
        return "~" + inner
    if isinstance(phi, (And, Or, Implies)):
        prec = _PREC[type(phi)]
        left = render(phi.left, names)
        right = render(phi.right, names)
        lp = _PREC.get(type(phi.left), 99)
        rp = _PREC.get(type(phi.right), 99)
        if isinstance(phi, Implies):
            # right associative
            if lp <= prec:
                left = f"({left})"
            if rp < prec:
                right = f"({right})"
        else:
            # left associative
            if lp < prec:
                left = f"({left})"
            if rp <= prec:
                right = f"({right})"
        return f"{left} {_OPS[type(phi)]} {right}"
    raise TypeError(f"not a formula: {phi!r}")


# -- parsing -----------------------------------------------------------------


class FormulaSyntaxError(ValueError):
    """Raised on malformed formula text."""

    def __init__(self, message: str, line: int, column: int, expected: frozenset[str] = frozenset()):
        self.message = message
        self.line = line
        self.column = column
        self.expected = expected
        detail = f"{message} at line {line}, column {column}"
        if expected:
            detail += f" (expected one of: {', '.join(sorted(expected))})"
        super().__init__(detail)


@dataclass(frozen=True, slots=True)
class Token:
    kind: str  # one of: atom ident const op eof
    text: str
    line: int
    column: int


_TOKEN_RE = re.compile(
    r"(?P<ws>[ \t\r\n]+)"
    r"|(?P<comment>\#[^\n]*)"
    r"|(?P<op><->|->|[~&|()])"
    r"|(?P<ident>[A-Za-z_][A-Za-z0-9_]*)"
    r"|(?P<num>[0-9]+)"
)
_ATOM_RE = re.compile(r"x([0-9]+)")


def tokenize(text: str) -> Iterator[Token]:
    line, line_start, pos = 1, 0, 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        column = pos - line_start + 1
        if m is None:
            raise FormulaSyntaxError(f"unexpected character {text[pos]!r}", line, column)
        kind = m.lastgroup
        lexeme = m.group()
        if kind == "ws":
            newlines = lexeme.count("\n")
            if newlines:
                line += newlines
                line_start = pos + lexeme.rfind("\n") + 1
        elif kind == "op":
            yield Token("op", lexeme, line, column)
        elif kind == "ident":
            am = _ATOM_RE.fullmatch(lexeme)
            if am:
                if int(am.group(1)) == 0:
                    raise FormulaSyntaxError("atom index 0 is not allowed (atoms start at x1)", line, column)
                yield Token("atom", lexeme, line, column)
            else:
                yield Token("ident", lexeme, line, column)
        elif kind == "num":
            if lexeme not in ("0", "1"):
                raise FormulaSyntaxError(f"unexpected number {lexeme!r}", line, column)
            yield Token("const", lexeme, line, column)
        pos = m.end()
    yield Token("eof", "", line, pos - line_start + 1)


class SymbolTable:
    """Maps bare identifiers to atom indices.

    Identifiers get the smallest index not written explicitly as ``xN``
    anywhere in the text seen so far, in order of first appearance.
    """

    def __init__(self) -> None:
        self.by_name: dict[str, int] = {}
        self.explicit: set[int] = set()

    def reserve(self, index: int) -> None:
        if index in self.by_name.values():
            name = next(k for k, v in self.by_name.items() if v == index)
            raise ValueError(f"x{index} is already bound to identifier {name!r}")
        self.explicit.add(index)

    def lookup(self, name: str) -> int:
        if name not in self.by_name:
            taken = self.explicit | set(self.by_name.values())
            index = 1
            while index in taken:
                index += 1
            self.by_name[name] = index
        return self.by_name[name]

    @property
    def names(self) -> dict[int, str]:
        return {v: k for k, v in self.by_name.items()}


_EXPECT_OPERAND = frozenset({"~", "(", "xN", "identifier", "0", "1"})


class _Parser:
    def __init__(self, tokens: list[Token], symbols: SymbolTable):
        self.tokens = tokens
        self.pos = 0
        self.symbols = symbols

    def peek(self) -> Token:
        return self.tokens[self.pos]

    def advance(self) -> Token:
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def fail(self, expected: frozenset[str]) -> FormulaSyntaxError:
        tok = self.peek()
        found = "end of input" if tok.kind == "eof" else repr(tok.text)
        return FormulaSyntaxError(f"unexpected {found}", tok.line, tok.column, expected)

    def formula(self) -> Formula:
        left = self.or_expr()
        tok = self.peek()
        if tok.kind == "op" and tok.text == "->":
            self.advance()
            return Implies(left, self.formula())
        if tok.kind == "op" and tok.text == "<->":
            self.advance()
            right = self.formula()
            return And(Implies(left, right), Implies(right, left))
        return left

    def or_expr(self) -> Formula:
        left = self.and_expr()
        while self.peek().kind == "op" and self.peek().text == "|":
            self.advance()
            left = Or(left, self.and_expr())
        return left

    def and_expr(self) -> Formula:
        left = self.unary()
        while self.peek().kind == "op" and self.peek().text == "&":
            self.advance()
            left = And(left, self.unary())
        return left

    def unary(self) -> Formula:
        tok = self.peek()
        if tok.kind == "op" and tok.text == "~":
            self.advance()
            return Neg(self.unary())
        if tok.kind == "op" and tok.text == "(":
            self.advance()
            inner = self.formula()
            if not (self.peek().kind == "op" and self.peek().text == ")"):
                raise self.fail(frozenset({")", "&", "|", "->", "<->"}))
            self.advance()
            return inner
        if tok.kind == "atom":
            self.advance()
            return Atom(int(tok.text[1:]))
        if tok.kind == "ident":
            self.advance()
            return Atom(self.symbols.lookup(tok.text))
        if tok.kind == "const":
            self.advance()
            return Top if tok.text == "1" else Bottom
        raise self.fail(_EXPECT_OPERAND)


def _tokens_for(text: str, symbols: SymbolTable) -> list[Token]:
    tokens = list(tokenize(text))
    for tok in tokens:
        if tok.kind == "atom":
            try:
                symbols.reserve(int(tok.text[1:]))
            except ValueError as exc:
                raise FormulaSyntaxError(str(exc), tok.line, tok.column) from None
    return tokens


def parse_with_symbols(text: str, symbols: SymbolTable | None = None) -> tuple[Formula, SymbolTable]:
    """Parse one formula, returning it with the identifier table used."""
    symbols = symbols if symbols is not None else SymbolTable()
    parser = _Parser(_tokens_for(text, symbols), symbols)
    if parser.peek().kind == "eof":
        raise parser.fail(_EXPECT_OPERAND)
    result = parser.formula()
    if parser.peek().kind != "eof":
        raise parser.fail(frozenset({"&", "|", "->", "<->", "end of input"}))
    return result, symbols


def parse(text: str) -> Formula:
    """Parse a formula from text.

    >>> parse("x1 -> x2 -> x3")
    Implies(left=Atom(index=1), right=Implies(left=Atom(index=2), right=Atom(index=3)))
    """
    return parse_with_symbols(text)[0]


_NAME_PREFIX = re.compile(r"\s*([A-Za-z_][A-Za-z0-9_.\-]*)\s*:")


def parse_theory(text: str, symbols: SymbolTable | None = None) -> tuple[list[tuple[str, Formula]], SymbolTable]:
    """Parse a theory file: one formula per line, optional ``name:`` prefix.

    Blank and comment-only lines are skipped. Unnamed formulas are called
    ``alpha1``, ``alpha2``, ... by position. Explicit ``xN`` atoms anywhere in
    the file are reserved before any identifier receives an index.
    """
    symbols = symbols if symbols is not None else SymbolTable()
    lines = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        body = raw.split("#", 1)[0]
        if not body.strip():
            continue
        name = None
        offset = 0
        m = _NAME_PREFIX.match(body)
        if m:
            name = m.group(1)
            offset = m.end()
            body = body[offset:]
        lines.append((lineno, name, offset, body))
    # reserve explicit atoms file-wide before binding any identifier
    for lineno, _, offset, body in lines:
        try:
            _tokens_for(body, symbols)
        except FormulaSyntaxError as exc:
            raise FormulaSyntaxError(exc.message, lineno, exc.column + offset, exc.expected) from None
    items: list[tuple[str, Formula]] = []
    names: set[str] = set()
    for lineno, name, offset, body in lines:
        if name is None:
            name = f"alpha{len(items) + 1}"
        if name in names:
            raise FormulaSyntaxError(f"duplicate formula name {name!r}", lineno, 1)
        try:
            phi, _ = parse_with_symbols(body, symbols)
        except FormulaSyntaxError as exc:
            raise FormulaSyntaxError(exc.message, lineno, exc.column + offset, exc.expected) from None
        names.add(name)
        items.append((name, phi))
    return items, symbols
