"""Recursive-descent parser for the differential-form expression language.

Grammar, lowest precedence first (all binary operators left-associative)::

    expr    := ['+'|'-'] wedge (('+'|'-') wedge)*
    wedge   := product ('^' product)*
    product := power (['*'] power)*          # juxtaposition multiplies
    power   := atom ['**' INT]
    atom    := INT ['/' INT] | 'x' INT | 'dx[' INT (',' INT)* ']' | '@' NAME
             | 'd(' expr ')' | 'i_[' field '](' expr ')' | 'L_[' field '](' expr ')'
             | '(' expr ')' | '[' field ']'
    field   := expr (',' expr)*

Unsorted basis indices are sorted with the permutation sign; a repeated
index gives the zero form. Canonical form text such as
``+ (1/2*x1**2) dx[1,3] + (-1) dx[2,3]`` parses back to the same form.
"""

import re
from dataclasses import dataclass, field
from fractions import Fraction

from .algebra import Polynomial
from .errors import DegreeError, G2CalcError, LimitError
from .exterior import (
    DifferentialForm,
    PolynomialMap,
    VectorField,
    canonical_index,
    exterior_derivative,
    interior_product,
    lie_derivative,
    wedge,
)


class ParseError(G2CalcError, ValueError):
    """Base class for parse failures; ``position`` is a 0-based character offset."""

    kind = "parse error"

    def __init__(self, message, position=None):
        self.position = position
        where = f" at position {position}" if position is not None else ""
        super().__init__(f"{self.kind}{where}: {message}")


class LexicalError(ParseError):
    kind = "lexical error"


class ArityError(ParseError):
    kind = "arity error"


class DegreeMismatch(ParseError):
    kind = "degree mismatch"


class IndexOutOfRange(ParseError):
    kind = "index out of range"


# --- parse tree -----------------------------------------------------------------

def _pos():
    return field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class Num:
    value: Fraction
    pos: int = _pos()


@dataclass(frozen=True)
class Var:
    index: int
    pos: int = _pos()


@dataclass(frozen=True)
class Basis:
    indices: tuple
    pos: int = _pos()


@dataclass(frozen=True)
class Preset:
    name: str
    pos: int = _pos()


@dataclass(frozen=True)
class Deriv:
    arg: object
    pos: int = _pos()


@dataclass(frozen=True)
class Interior:
    field: tuple
    arg: object
    pos: int = _pos()


@dataclass(frozen=True)
class Lie:
    field: tuple
    arg: object
    pos: int = _pos()


@dataclass(frozen=True)
class FieldLit:
    components: tuple
    pos: int = _pos()


@dataclass(frozen=True)
class Neg:
    arg: object
    pos: int = _pos()


@dataclass(frozen=True)
class BinOp:
    op: str  # one of + - * ^
    left: object
    right: object
    pos: int = _pos()


@dataclass(frozen=True)
class Pow:
    base: object
    exponent: int
    pos: int = _pos()


# --- lexer ------------------------------------------------------------------------

_TOKEN = re.compile(r"""
    (?P<ws>\s+)
  | (?P<dx>dx\[)
  | (?P<d>d\()
  | (?P<interior>i_\[)
  | (?P<lie>L_\[)
  | (?P<var>x(?P<varidx>\d+))
  | (?P<int>\d+)
  | (?P<preset>@[A-Za-z_][A-Za-z0-9_]*(?::\d+)?)
  | (?P<pow>\*\*)
  | (?P<sym>[-+*^/()\[\],])
""", re.VERBOSE)


@dataclass
class Token:
    kind: str
    text: str
    pos: int


def tokenize(text):
    tokens = []
    i = 0
    while i < len(text):
        m = _TOKEN.match(text, i)
        if not m:
            raise LexicalError(f"unexpected character {text[i]!r}", i)
        kind = m.lastgroup
        if kind == "varidx":
            kind = "var"
        if kind == "sym":
            kind = m.group()
        if kind != "ws":
            tokens.append(Token(kind, m.group(), i))
        i = m.end()
    tokens.append(Token("end", "", len(text)))
    return tokens


_ATOM_START = {"int", "var", "dx", "preset", "d", "interior", "lie", "("}


class _Parser:
    def __init__(self, text):
        self.text = text
        self.tokens = tokenize(text)
        self.i = 0

    @property
    def tok(self):
        return self.tokens[self.i]

    def take(self, kind=None):
        t = self.tok
        if kind is not None and t.kind != kind:
            what = repr(t.text) if t.text else "end of input"
            raise LexicalError(f"expected {kind!r}, found {what}", t.pos)
        self.i += 1
        return t

    def parse(self):
        node = self.expr()
        if self.tok.kind != "end":
            raise LexicalError(f"unexpected {self.tok.text!r}", self.tok.pos)
        return node

    def expr(self):
        start = self.tok.pos
        if self.tok.kind in ("+", "-"):
            sign = self.take().kind
            node = self.wedge()
            if sign == "-":
                node = Neg(node, pos=start)
        else:
            node = self.wedge()
        while self.tok.kind in ("+", "-"):
            op = self.take()
            node = BinOp(op.kind, node, self.wedge(), pos=op.pos)
        return node

    def wedge(self):
        node = self.product()
        while self.tok.kind == "^":
            op = self.take()
            node = BinOp("^", node, self.product(), pos=op.pos)
        return node

    def product(self):
        node = self.power()
        while self.tok.kind == "*" or self.tok.kind in _ATOM_START:
            pos = self.tok.pos
            if self.tok.kind == "*":
                self.take()
            node = BinOp("*", node, self.power(), pos=pos)
        return node

    def power(self):
        node = self.atom()
        if self.tok.kind == "pow":
            op = self.take()
            exp = self.take("int")
            node = Pow(node, int(exp.text), pos=op.pos)
        return node

    def integer(self):
        return int(self.take("int").text)

    def field_items(self):
        items = [self.expr()]
        while self.tok.kind == ",":
            self.take()
            items.append(self.expr())
        return tuple(items)

    def atom(self):
        t = self.tok
        k = t.kind
        if k == "int":
            self.take()
            value = Fraction(int(t.text))
            if self.tok.kind == "/":
                self.take()
                den = self.take("int")
                if int(den.text) == 0:
                    raise LexicalError("zero denominator", den.pos)
                value = Fraction(int(t.text), int(den.text))
            return Num(value, pos=t.pos)
        if k == "var":
            self.take()
            return Var(int(t.text[1:]), pos=t.pos)
        if k == "dx":
            self.take()
            idx = [self.integer()]
            while self.tok.kind == ",":
                self.take()
                idx.append(self.integer())
            self.take("]")
            return Basis(tuple(idx), pos=t.pos)
        if k == "preset":
            self.take()
            return Preset(t.text[1:], pos=t.pos)
        if k == "d":
            self.take()
            arg = self.expr()
            self.take(")")
            return Deriv(arg, pos=t.pos)
        if k in ("interior", "lie"):
            self.take()
            comps = self.field_items()
            self.take("]")
            self.take("(")
            arg = self.expr()
            self.take(")")
            return (Interior if k == "interior" else Lie)(comps, arg, pos=t.pos)
        if k == "(":
            self.take()
            node = self.expr()
            self.take(")")
            return node
        if k == "[":
            self.take()
            comps = self.field_items()
            self.take("]")
            return FieldLit(comps, pos=t.pos)
        what = repr(t.text) if t.text else "end of input"
        raise LexicalError(f"unexpected {what}", t.pos)


# --- evaluation -------------------------------------------------------------------

def _is_zero_form(v):
    return isinstance(v, DifferentialForm) and v.degree == 0 and v.is_zero()


def _need_form(v, node):
    if not isinstance(v, DifferentialForm):
        raise DegreeMismatch("a vector field cannot appear here", node.pos)
    return v


def _field(components, dim, node):
    if len(components) != dim:
        raise ArityError(f"vector field needs {dim} components, got {len(components)}", node.pos)
    comps = []
    for c in components:
        v = _need_form(evaluate(c, dim), c)
        if v.degree != 0:
            raise DegreeMismatch(f"field components must be functions, got a {v.degree}-form", c.pos)
        comps.append(v.as_function())
    return VectorField(comps, dim)


def evaluate(node, dim):
    """Evaluate a parse tree on an ``dim``-dimensional chart."""
    try:
        return _evaluate(node, dim)
    except ParseError:
        raise
    except (DegreeError, LimitError) as exc:
        raise DegreeMismatch(str(exc), getattr(node, "pos", None)) from exc


def _evaluate(node, dim):
    if isinstance(node, Num):
        return DifferentialForm.function(Polynomial.constant(dim, node.value))
    if isinstance(node, Var):
        if not 1 <= node.index <= dim:
            raise IndexOutOfRange(f"x{node.index} on a {dim}-dimensional chart", node.pos)
        return DifferentialForm.function(Polynomial.variable(dim, node.index))
    if isinstance(node, Basis):
        for i in node.indices:
            if not 1 <= i <= dim:
                raise IndexOutOfRange(f"dx index {i} on a {dim}-dimensional chart", node.pos)
        k = len(node.indices)
        if k > dim:
            raise DegreeMismatch(f"a {k}-form cannot exist on a {dim}-dimensional chart", node.pos)
        sign, key = canonical_index(node.indices)
        if not sign:
            return DifferentialForm.zero(dim, k)
        return DifferentialForm(dim, k, {key: sign})
    if isinstance(node, Preset):
        from .presets import preset_form
        try:
            form = preset_form(node.name)
        except KeyError as exc:
            raise LexicalError(str(exc.args[0]), node.pos) from None
        if form.dim != dim:
            raise DegreeMismatch(f"preset @{node.name} lives on {form.dim} dims, chart has {dim}", node.pos)
        return form
    if isinstance(node, Deriv):
        a = _need_form(evaluate(node.arg, dim), node.arg)
        if a.degree >= dim:
            raise DegreeMismatch(f"d of a {a.degree}-form on a {dim}-dimensional chart", node.pos)
        return exterior_derivative(a)
    if isinstance(node, (Interior, Lie)):
        X = _field(node.field, dim, node)
        a = _need_form(evaluate(node.arg, dim), node.arg)
        if isinstance(node, Interior):
            if a.degree == 0:
                raise DegreeMismatch("interior product of a 0-form", node.pos)
            return interior_product(X, a)
        return lie_derivative(X, a)
    if isinstance(node, FieldLit):
        return _field(node.components, dim, node)
    if isinstance(node, Neg):
        v = evaluate(node.arg, dim)
        return -v
    if isinstance(node, Pow):
        a = _need_form(evaluate(node.base, dim), node.base)
        if a.degree != 0:
            raise DegreeMismatch("only functions can be raised to a power", node.pos)
        return DifferentialForm.function(a.as_function() ** node.exponent)
    if isinstance(node, BinOp):
        left = evaluate(node.left, dim)
        right = evaluate(node.right, dim)
        if node.op in "+-":
            if isinstance(left, VectorField) and isinstance(right, VectorField):
                return left + right if node.op == "+" else left - right
            left, right = _need_form(left, node.left), _need_form(right, node.right)
            if left.degree != right.degree:
                # the canonical text of a zero form is "0", a function
                if _is_zero_form(left):
                    left = DifferentialForm.zero(dim, right.degree)
                elif _is_zero_form(right):
                    right = DifferentialForm.zero(dim, left.degree)
                else:
                    raise DegreeMismatch(
                        f"cannot add a {left.degree}-form and a {right.degree}-form", node.pos)
            return left + right if node.op == "+" else left - right
        left, right = _need_form(left, node.left), _need_form(right, node.right)
        if node.op == "*":
            if left.degree == 0:
                return right * left.as_function()
            if right.degree == 0:
                return left * right.as_function()
            raise DegreeMismatch("'*' needs a function on one side; use '^' for the wedge product", node.pos)
        if left.degree + right.degree > dim:
            raise DegreeMismatch(
                f"wedge of degree {left.degree + right.degree} on a {dim}-dimensional chart", node.pos)
        return wedge(left, right)
    raise TypeError(f"unknown node {node!r}")


def parse(text, ambient_dim):
    """Parse ``text`` and type-check it on an ``ambient_dim`` chart; returns the tree."""
    tree = _Parser(text).parse()
    evaluate(tree, ambient_dim)
    return tree


def parse_form(text, ambient_dim):
    value = evaluate(_Parser(text).parse(), ambient_dim)
    if not isinstance(value, DifferentialForm):
        raise DegreeMismatch("expected a differential form, got a vector field", 0)
    return value


def parse_function(text, ambient_dim):
    form = parse_form(text, ambient_dim)
    if form.degree != 0:
        raise DegreeMismatch(f"expected a function, got a {form.degree}-form", 0)
    return form.as_function()


def parse_field(text, ambient_dim):
    tree = _Parser(text).parse()
    if not isinstance(tree, FieldLit):
        raise ArityError("a vector field is written as [p1, ..., pn]", 0)
    return evaluate(tree, ambient_dim)


def parse_map(text, source_dim):
    """``[p1, ..., pm]`` as a polynomial map on ``source_dim`` variables."""
    tree = _Parser(text).parse()
    if not isinstance(tree, FieldLit):
        raise ArityError("a map is written as [p1, ..., pm]", 0)
    comps = []
    for c in tree.components:
        v = _need_form(evaluate(c, source_dim), c)
        if v.degree != 0:
            raise DegreeMismatch("map components must be functions", c.pos)
        comps.append(v.as_function())
    return PolynomialMap(comps, source_dim=source_dim)


# --- printing ---------------------------------------------------------------------

_LEVEL = {"+": 1, "-": 1, "^": 2, "*": 3}


def to_source(node):
    """Text that parses back to exactly ``node``."""
    return _show(node, 0)


def _show(node, ctx):
    if isinstance(node, BinOp):
        level = _LEVEL[node.op]
        op = f" {node.op} "
        text = _show(node.left, level) + op + _show(node.right, level + 1)
        return f"({text})" if level < ctx else text
    if isinstance(node, Pow):
        text = f"{_show(node.base, 5)}**{node.exponent}"
        return f"({text})" if ctx >= 5 else text
    if isinstance(node, Neg):
        return f"(-{_show(node.arg, 2)})"
    if isinstance(node, Num):
        text = str(node.value)
        if node.value < 0:
            return f"({text})"
        if node.value.denominator != 1 and ctx >= 5:
            return f"({text})"
        return text
    if isinstance(node, Var):
        return f"x{node.index}"
    if isinstance(node, Basis):
        return "dx[" + ",".join(map(str, node.indices)) + "]"
    if isinstance(node, Preset):
        return f"@{node.name}"
    if isinstance(node, Deriv):
        return f"d({_show(node.arg, 0)})"
    if isinstance(node, (Interior, Lie)):
        head = "i_[" if isinstance(node, Interior) else "L_["
        comps = ", ".join(_show(c, 0) for c in node.field)
        return f"{head}{comps}]({_show(node.arg, 0)})"
    if isinstance(node, FieldLit):
        return "[" + ", ".join(_show(c, 0) for c in node.components) + "]"
    raise TypeError(f"unknown node {node!r}")
