"""CTL formula ASTs, the surface-syntax parser, and structural helpers.

Formulas are immutable and compared structurally: two parses of the same
text are the same formula everywhere (labellings, proofs, bundles).
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Iterator

# Operator tags. "prop" is the atom case; everything else is compound.
PROP = "prop"
TRUE = "true"
FALSE = "false"
NOT = "not"
AND = "and"
OR = "or"
EX = "EX"
AX = "AX"
EF = "EF"
AF = "AF"
EG = "EG"
AG = "AG"
EU = "EU"
AU = "AU"

ARITY = {
    TRUE: 0, FALSE: 0,
    NOT: 1, EX: 1, AX: 1, EF: 1, AF: 1, EG: 1, AG: 1,
    AND: 2, OR: 2, EU: 2, AU: 2,
}

# The existential core fragment; every other operator desugars into it.
CORE_OPS = frozenset({TRUE, NOT, OR, EX, EU, EG})
TEMPORAL_OPS = frozenset({EX, AX, EF, AF, EG, AG, EU, AU})
PREFIX_OPS = ("EX", "AX", "EF", "AF", "EG", "AG")
RESERVED = frozenset({"true", "false", "U"}) | frozenset(PREFIX_OPS)

_IDENT_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")


@dataclass(frozen=True)
class Formula:
    """A proposition (op == "prop") or a compound operator node."""

    op: str
    children: tuple["Formula", ...] = ()
    name: str = ""

    def __post_init__(self):
        if self.op == PROP:
            if not _IDENT_RE.fullmatch(self.name):
                raise ValueError(f"bad proposition name: {self.name!r}")
            if self.children:
                raise ValueError("propositions have no children")
        else:
            arity = ARITY.get(self.op)
            if arity is None:
                raise ValueError(f"unknown operator: {self.op!r}")
            if len(self.children) != arity:
                raise ValueError(
                    f"{self.op} expects {arity} children, got {len(self.children)}")
            if self.name:
                raise ValueError("compound formulas carry no name")

    @property
    def is_prop(self) -> bool:
        return self.op == PROP

    @property
    def is_compound(self) -> bool:
        return self.op != PROP

    @property
    def is_temporal(self) -> bool:
        return self.op in TEMPORAL_OPS

    @property
    def is_core(self) -> bool:
        """True if every operator in the tree belongs to the core fragment."""
        if self.op == PROP:
            return True
        return self.op in CORE_OPS and all(c.is_core for c in self.children)

    def __str__(self) -> str:
        return pretty(self)

    def __repr__(self) -> str:
        return f"Formula({pretty(self)!r})"


def prop(name: str) -> Formula:
    return Formula(PROP, name=name)


def true() -> Formula:
    return Formula(TRUE)


def false() -> Formula:
    return Formula(FALSE)


def not_(f: Formula) -> Formula:
    return Formula(NOT, (f,))


def and_(a: Formula, b: Formula) -> Formula:
    return Formula(AND, (a, b))


def or_(a: Formula, b: Formula) -> Formula:
    return Formula(OR, (a, b))


def ex(f: Formula) -> Formula:
    return Formula(EX, (f,))


def ax(f: Formula) -> Formula:
    return Formula(AX, (f,))


def ef(f: Formula) -> Formula:
    return Formula(EF, (f,))


def af(f: Formula) -> Formula:
    return Formula(AF, (f,))


def eg(f: Formula) -> Formula:
    return Formula(EG, (f,))


def ag(f: Formula) -> Formula:
    return Formula(AG, (f,))


def eu(a: Formula, b: Formula) -> Formula:
    return Formula(EU, (a, b))


def au(a: Formula, b: Formula) -> Formula:
    return Formula(AU, (a, b))


@lru_cache(maxsize=None)
def depth(f: Formula) -> int:
    """1 for leaves, else 1 + max over children."""
    if not f.children:
        return 1
    return 1 + max(depth(c) for c in f.children)


def formula_key(f: Formula) -> tuple[int, str]:
    """Canonical ordering key: ascending depth, then stable structural order."""
    return (depth(f), pretty(f))


@dataclass(frozen=True)
class FormulaSet:
    """A subformula-closed collection in canonical iteration order."""

    members: tuple[Formula, ...]
    core_only: bool

    def __iter__(self) -> Iterator[Formula]:
        return iter(self.members)

    def __len__(self) -> int:
        return len(self.members)

    def __contains__(self, f: Formula) -> bool:
        return f in self.members

    @property
    def props(self) -> tuple[Formula, ...]:
        return tuple(f for f in self.members if f.is_prop)

    @property
    def compounds(self) -> tuple[Formula, ...]:
        return tuple(f for f in self.members if f.is_compound)

    def depth(self) -> int:
        """Max depth over members; 0 for the empty set."""
        return max((depth(f) for f in self.members), default=0)

    def union(self, other: "FormulaSet") -> "FormulaSet":
        return formula_set(self.members + other.members)

    def issubset(self, other: "FormulaSet") -> bool:
        return set(self.members) <= set(other.members)


def formula_set(formulas: Iterable[Formula]) -> FormulaSet:
    """Close the given formulas under subformulas and sort canonically."""
    seen: set[Formula] = set()
    stack = list(formulas)
    while stack:
        f = stack.pop()
        if f in seen:
            continue
        seen.add(f)
        stack.extend(f.children)
    members = tuple(sorted(seen, key=formula_key))
    return FormulaSet(members, all(f.is_core for f in members))


def subformula_closure(f: Formula) -> FormulaSet:
    """Smallest subformula-closed set containing f."""
    return formula_set([f])


def subformulas_preorder(f: Formula) -> list[Formula]:
    """Tree preorder (root first, children left to right, duplicates kept)."""
    out = [f]
    for c in f.children:
        out.extend(subformulas_preorder(c))
    return out


@lru_cache(maxsize=None)
def desugar(f: Formula) -> Formula:
    """Rewrite into the core fragment {true, !, ||, EX, EU, EG}, bottom-up."""
    if f.is_prop:
        return f
    kids = tuple(desugar(c) for c in f.children)
    op = f.op
    if op in (TRUE, NOT, OR, EX, EG):
        return Formula(op, kids)
    if op == EU:
        return Formula(EU, kids)
    if op == FALSE:
        return not_(true())
    if op == AND:
        a, b = kids
        return not_(or_(not_(a), not_(b)))
    if op == AX:
        return not_(ex(not_(kids[0])))
    if op == EF:
        return eu(true(), kids[0])
    if op == AG:
        return not_(eu(true(), not_(kids[0])))
    if op == AF:
        return not_(eg(not_(kids[0])))
    if op == AU:
        # A[a U b] == !(E[!b U (!a && !b)] || EG !b), with the && expanded.
        a, b = kids
        both = not_(or_(not_(not_(a)), not_(not_(b))))
        return not_(or_(eu(not_(b), both), eg(not_(b))))
    raise AssertionError(f"unhandled operator {op}")


# Pretty printing with the surface grammar's precedence:
# atoms > unary (!, prefix ops) > && > ||.  E[a U b] brackets are atoms.

@lru_cache(maxsize=None)
def pretty(f: Formula) -> str:
    return _pp_disj(f)


def _pp_disj(f: Formula) -> str:
    if f.op == OR:
        return f"{_pp_disj(f.children[0])} || {_pp_conj(f.children[1])}"
    return _pp_conj(f)


def _pp_conj(f: Formula) -> str:
    if f.op == AND:
        return f"{_pp_conj(f.children[0])} && {_pp_unary(f.children[1])}"
    return _pp_unary(f)


def _pp_unary(f: Formula) -> str:
    if f.op == NOT:
        return "!" + _pp_unary(f.children[0])
    if f.op in PREFIX_OPS:
        return f"{f.op} {_pp_unary(f.children[0])}"
    return _pp_atom(f)


def _pp_atom(f: Formula) -> str:
    if f.op == PROP:
        return f.name
    if f.op == TRUE:
        return "true"
    if f.op == FALSE:
        return "false"
    if f.op == EU:
        return f"E[{_pp_disj(f.children[0])} U {_pp_disj(f.children[1])}]"
    if f.op == AU:
        return f"A[{_pp_disj(f.children[0])} U {_pp_disj(f.children[1])}]"
    return "(" + _pp_disj(f) + ")"


class ParseError(ValueError):
    """Syntax error with a 1-based source position and the offending token."""

    def __init__(self, message: str, line: int, column: int, token: str):
        super().__init__(f"{line}:{column}: {message} (at {token!r})")
        self.line = line
        self.column = column
        self.token = token


_TOKEN_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*|&&|\|\||[!()\[\]]|\S")


class _Token:
    __slots__ = ("text", "line", "column")

    def __init__(self, text, line, column):
        self.text = text
        self.line = line
        self.column = column


def _tokenize(text: str) -> list[_Token]:
    tokens = []
    for lineno, line in enumerate(text.splitlines() or [""], start=1):
        for m in _TOKEN_RE.finditer(line):
            tokens.append(_Token(m.group(), lineno, m.start() + 1))
    nlines = max(1, text.count("\n") + 1)
    tokens.append(_Token("<end>", nlines, len(text.splitlines()[-1]) + 1 if text.splitlines() else 1))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.tokens = _tokenize(text)
        self.pos = 0

    def peek(self) -> _Token:
        return self.tokens[self.pos]

    def advance(self) -> _Token:
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def error(self, message: str, tok: _Token | None = None):
        tok = tok or self.peek()
        raise ParseError(message, tok.line, tok.column, tok.text)

    def expect(self, text: str) -> _Token:
        tok = self.peek()
        if tok.text != text:
            self.error(f"expected {text!r}")
        return self.advance()

    def parse(self) -> Formula:
        f = self.disj()
        if self.peek().text != "<end>":
            self.error("unexpected trailing input")
        return f

    def disj(self) -> Formula:
        f = self.conj()
        while self.peek().text == "||":
            self.advance()
            f = or_(f, self.conj())
        return f

    def conj(self) -> Formula:
        f = self.unary()
        while self.peek().text == "&&":
            self.advance()
            f = and_(f, self.unary())
        return f

    def unary(self) -> Formula:
        tok = self.peek()
        if tok.text == "!":
            self.advance()
            return not_(self.unary())
        if tok.text in PREFIX_OPS:
            self.advance()
            return Formula(tok.text, (self.unary(),))
        return self.atom()

    def atom(self) -> Formula:
        tok = self.peek()
        text = tok.text
        if text == "(":
            self.advance()
            f = self.disj()
            self.expect(")")
            return f
        if text in ("E", "A") and self.tokens[self.pos + 1].text == "[":
            self.advance()
            self.advance()
            left = self.disj()
            self.expect("U")
            right = self.disj()
            self.expect("]")
            return eu(left, right) if text == "E" else au(left, right)
        if text == "true":
            self.advance()
            return true()
        if text == "false":
            self.advance()
            return false()
        if _IDENT_RE.fullmatch(text):
            if text in RESERVED:
                self.error("reserved word cannot be used as a proposition")
            self.advance()
            return prop(text)
        self.error("expected a formula")
        raise AssertionError  # unreachable


def parse_formula(text: str) -> Formula:
    """Parse the surface syntax; raises ParseError with line/column on failure."""
    return _Parser(text).parse()
