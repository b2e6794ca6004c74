"""Curve language: parse ``"g1(s), g2(s), g3(s)"`` and evaluate it as jets.

Grammar (lowest to highest precedence)::

    curve   := expr ',' expr ',' expr
    expr    := term (('+' | '-') term)*
    term    := unary (('*' | '/') unary)*
    unary   := '-' unary | '+' unary | power
    power   := atom ('^' | '**') unary        # right associative
    atom    := NUMBER | 's' | 'pi' | 'e' | NAME '(' args ')' | '(' expr ')'

so ``-s^2`` reads as ``-(s^2)`` and ``2^-1`` as ``2^(-1)``.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from typing import Optional, Tuple, Union

from . import jet as J
from .errors import ArityError, CurveSyntaxError, DomainError, UnknownFunction

__all__ = [
    "Num", "Var", "Neg", "BinOp", "Call", "CurveExpr",
    "parse_curve", "parse_expr", "to_text", "eval_jet3", "eval_jets", "evaluate",
]


@dataclass(frozen=True)
class Num:
    value: float


@dataclass(frozen=True)
class Var:
    name: str = "s"


@dataclass(frozen=True)
class Neg:
    operand: "Node"


@dataclass(frozen=True)
class BinOp:
    op: str  # one of + - * / ^
    left: "Node"
    right: "Node"


@dataclass(frozen=True)
class Call:
    name: str
    args: Tuple["Node", ...]


Node = Union[Num, Var, Neg, BinOp, Call]

# name -> (arity, jet implementation)
FUNCTIONS = {
    "sin": (1, J.sin),
    "cos": (1, J.cos),
    "tan": (1, J.tan),
    "exp": (1, J.exp),
    "ln": (1, J.log),
    "arctan": (1, J.atan),
    "sqrt": (1, J.sqrt),
    "pow": (2, J.jpow),
}
ALIASES = {"log": "ln", "atan": "arctan"}
CONSTANTS = {"pi": math.pi, "e": math.e}


@dataclass(frozen=True)
class CurveExpr:
    components: Tuple[Node, Node, Node]
    source_text: str = ""
    domain: Optional[Tuple[float, float]] = None

    def __str__(self):
        return to_text(self)

    def contains(self, s: float) -> bool:
        if self.domain is None:
            return True
        lo, hi = self.domain
        return lo <= s <= hi


# -- tokenizer ----------------------------------------------------------

_TOKEN = re.compile(
    r"\s*(?:(?P<num>(?:\d+\.\d*|\.\d+|\d+)(?:[eE][+-]?\d+)?)"
    r"|(?P<name>[A-Za-z_][A-Za-z_0-9]*)"
    r"|(?P<op>\*\*|[-+*/^(),]))"
)


def _tokenize(text):
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None or m.end() == pos:
            if text[pos:].strip() == "":
                break
            raise CurveSyntaxError(f"unexpected character {text[pos]!r}", pos, text)
        kind = m.lastgroup
        start = m.start(kind)
        tok = m.group(kind)
        if kind == "op" and tok == "**":
            tok = "^"
        tokens.append((kind, tok, start))
        pos = m.end()
    tokens.append(("end", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text):
        self.text = text
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def next(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def error(self, msg, tok=None):
        tok = tok or self.peek()
        what = "end of input" if tok[0] == "end" else repr(tok[1])
        return CurveSyntaxError(f"{msg}, found {what}", tok[2], self.text)

    def expect(self, op):
        tok = self.peek()
        if tok[0] != "op" or tok[1] != op:
            raise self.error(f"expected {op!r}")
        return self.next()

    def expr(self):
        node = self.term()
        while self.peek()[0] == "op" and self.peek()[1] in "+-":
            op = self.next()[1]
            node = BinOp(op, node, self.term())
        return node

    def term(self):
        node = self.unary()
        while self.peek()[0] == "op" and self.peek()[1] in "*/":
            op = self.next()[1]
            node = BinOp(op, node, self.unary())
        return node

    def unary(self):
        tok = self.peek()
        if tok[0] == "op" and tok[1] == "-":
            self.next()
            return Neg(self.unary())
        if tok[0] == "op" and tok[1] == "+":
            self.next()
            return self.unary()
        return self.power()

    def power(self):
        base = self.atom()
        if self.peek()[0] == "op" and self.peek()[1] == "^":
            self.next()
            return BinOp("^", base, self.unary())
        return base

    def atom(self):
        tok = self.next()
        kind, val, pos = tok
        if kind == "num":
            return Num(float(val))
        if kind == "name":
            if self.peek()[0] == "op" and self.peek()[1] == "(":
                return self.call(val, pos)
            if val == "s":
                return Var("s")
            if val in CONSTANTS:
                return Call(val, ())
            if val in FUNCTIONS or val in ALIASES:
                raise CurveSyntaxError(f"function {val!r} needs an argument list", pos, self.text)
            raise UnknownFunction(f"unknown identifier {val!r}", pos, self.text)
        if kind == "op" and val == "(":
            node = self.expr()
            self.expect(")")
            return node
        raise self.error("expected a number, 's', a function call or '('", tok)

    def call(self, name, pos):
        canonical = ALIASES.get(name, name)
        if canonical not in FUNCTIONS:
            raise UnknownFunction(f"unknown function {name!r}", pos, self.text)
        self.expect("(")
        args = [self.expr()]
        while self.peek()[0] == "op" and self.peek()[1] == ",":
            self.next()
            args.append(self.expr())
        self.expect(")")
        arity = FUNCTIONS[canonical][0]
        if len(args) != arity:
            raise ArityError(
                f"{name} takes {arity} argument(s), got {len(args)}", pos, self.text
            )
        return Call(canonical, tuple(args))


def parse_expr(text: str) -> Node:
    p = _Parser(text)
    node = p.expr()
    if p.peek()[0] != "end":
        raise p.error("unexpected trailing input")
    return node


def parse_curve(text: str, domain: Optional[Tuple[float, float]] = None) -> CurveExpr:
    """Parse three comma-separated component expressions in the variable ``s``."""
    p = _Parser(text)
    comps = [p.expr()]
    while p.peek()[0] == "op" and p.peek()[1] == ",":
        p.next()
        comps.append(p.expr())
    if p.peek()[0] != "end":
        raise p.error("expected ',' or end of input")
    if len(comps) != 3:
        raise CurveSyntaxError(f"a curve needs 3 components, got {len(comps)}", len(text), text)
    if domain is not None and not domain[0] < domain[1]:
        raise ValueError(f"empty curve domain {domain!r}")
    return CurveExpr(tuple(comps), text, domain)


# -- printing -----------------------------------------------------------


def _fmt_num(x: float) -> str:
    if x < 0 or not math.isfinite(x):
        raise ValueError(f"cannot print constant {x!r}; use Neg(Num(...))")
    return repr(float(x))


def node_text(node: Node) -> str:
    if isinstance(node, Num):
        return _fmt_num(node.value)
    if isinstance(node, Var):
        return node.name
    if isinstance(node, Neg):
        return f"(-{node_text(node.operand)})"
    if isinstance(node, BinOp):
        return f"({node_text(node.left)} {node.op} {node_text(node.right)})"
    if isinstance(node, Call):
        if not node.args:
            return node.name
        return f"{node.name}({', '.join(node_text(a) for a in node.args)})"
    raise TypeError(f"not a curve node: {node!r}")


def to_text(curve: Union[CurveExpr, Node]) -> str:
    """Fully parenthesized text that parses back to the same tree."""
    if isinstance(curve, CurveExpr):
        return ", ".join(node_text(c) for c in curve.components)
    return node_text(curve)


# -- evaluation ---------------------------------------------------------


def _eval(node: Node, s: J.Jet) -> J.Jet:
    if isinstance(node, Num):
        return J.jet_const(node.value, s.order)
    if isinstance(node, Var):
        return s
    if isinstance(node, Neg):
        return -_eval(node.operand, s)
    if isinstance(node, BinOp):
        a = _eval(node.left, s)
        b = _eval(node.right, s)
        if node.op == "+":
            return a + b
        if node.op == "-":
            return a - b
        if node.op == "*":
            return a * b
        if node.op == "/":
            return a / b
        return J.jpow(a, b)
    if isinstance(node, Call):
        if not node.args:
            return J.jet_const(CONSTANTS[node.name], s.order)
        fn = FUNCTIONS[node.name][1]
        return fn(*(_eval(a, s) for a in node.args))
    raise TypeError(f"not a curve node: {node!r}")


def eval_jets(curve: CurveExpr, s: float, order: int = 3) -> Tuple[J.Jet, J.Jet, J.Jet]:
    """Component jets of ``curve`` at ``s`` to the given derivative order."""
    if not curve.contains(s):
        raise DomainError(f"s={s!r} outside curve domain {curve.domain!r}")
    sj = J.jet_var(float(s), order)
    out = tuple(_eval(c, sj) for c in curve.components)
    for k, comp in enumerate(out):
        if not comp.isfinite():
            raise DomainError(f"component {k + 1} is not finite at s={s!r}")
    return out


def eval_jet3(curve: CurveExpr, s: float) -> Tuple[J.Jet, J.Jet, J.Jet]:
    return eval_jets(curve, s, 3)


def evaluate(node: Node, s: float) -> float:
    """Plain value of a single expression tree."""
    return _eval(node, J.jet_var(float(s), 0)).value
