"""
Entire-function symbols: parsing, printing, evaluation, symbolic derivatives,
composition and classification.

Grammar (whitespace insensitive):

    expr   := term (('+' | '-') term)*
    term   := unary ('*' unary)*
    unary  := '-' unary | power
    power  := atom ('^' INTEGER)?
    atom   := NUMBER | NUMBER 'i' | 'i' | 'z' | 'exp' '(' expr ')' | '(' expr ')'

`^` binds tighter than unary minus, so -z^2 is -(z^2). Parentheses never create
nodes, which keeps the printer's output reparsable into the same tree.
"""

import logging
import math
import re
from dataclasses import dataclass, field
from functools import reduce, singledispatch
from typing import List, Optional, Tuple

import numpy as np
from numpy.polynomial import polynomial as npoly

from .errors import SymbolSyntaxError
from .quadrature import GaussianBound

logger = logging.getLogger(__name__)

# Normal forms above this degree are classified as general.
MAX_DEGREE = 256


# =============================================================================
# AST NODES
# =============================================================================

class Node:
    """Base class of expression nodes."""


@dataclass(frozen=True)
class Const(Node):
    value: complex


@dataclass(frozen=True)
class Var(Node):
    pass


@dataclass(frozen=True)
class Neg(Node):
    operand: Node


@dataclass(frozen=True)
class Sum(Node):
    terms: Tuple[Node, ...]


@dataclass(frozen=True)
class Product(Node):
    factors: Tuple[Node, ...]


@dataclass(frozen=True)
class Power(Node):
    base: Node
    exponent: int


@dataclass(frozen=True)
class Exp(Node):
    arg: Node


ZERO = Const(0j)
ONE = Const(1 + 0j)
Z = Var()


# =============================================================================
# TOKENIZER AND PARSER
# =============================================================================

@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    position: int


_TOKEN_RE = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<num>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)
  | (?P<ident>[A-Za-z_][A-Za-z_0-9]*)
  | (?P<op>[-+*^()])
    """,
    re.VERBOSE,
)

_OPERATORS = {"+": "PLUS", "-": "MINUS", "*": "STAR", "^": "CARET", "(": "LPAREN", ")": "RPAREN"}


def tokenize(text: str) -> List[Token]:
    """Split expression text into tokens; imaginary literals like 2.5i are one token."""
    tokens: List[Token] = []
    position = 0
    while position < len(text):
        match = _TOKEN_RE.match(text, position)
        if match is None:
            raise SymbolSyntaxError(f"unexpected character {text[position]!r}", position)
        kind = match.lastgroup
        lexeme = match.group()
        if kind == "num":
            end = match.end()
            if end < len(text) and text[end] == "i" and not re.match(r"[A-Za-z_0-9]", text[end + 1 : end + 2]):
                tokens.append(Token("IMAG", lexeme, position))
                position = end + 1
                continue
            tokens.append(Token("NUM", lexeme, position))
        elif kind == "ident":
            if lexeme == "z":
                tokens.append(Token("VAR", lexeme, position))
            elif lexeme == "i":
                tokens.append(Token("IMAG", "1", position))
            elif lexeme == "exp":
                tokens.append(Token("EXP", lexeme, position))
            else:
                raise SymbolSyntaxError(f"unknown identifier {lexeme!r}", position)
        elif kind == "op":
            tokens.append(Token(_OPERATORS[lexeme], lexeme, position))
        position = match.end()
    tokens.append(Token("EOF", "", len(text)))
    return tokens


class Parser:
    """Recursive-descent parser over the token stream."""

    def __init__(self, text: str):
        self.text = text
        self.tokens = tokenize(text)
        self.position = 0

    def current(self) -> Token:
        return self.tokens[self.position]

    def advance(self) -> Token:
        token = self.tokens[self.position]
        self.position += 1
        return token

    def expect(self, kind: str, what: str) -> Token:
        token = self.current()
        if token.kind != kind:
            found = "end of input" if token.kind == "EOF" else repr(token.text)
            raise SymbolSyntaxError(f"expected {what}, found {found}", token.position)
        return self.advance()

    def parse(self) -> Node:
        if self.current().kind == "EOF":
            raise SymbolSyntaxError("empty expression", 0)
        node = self.parse_expr()
        token = self.current()
        if token.kind != "EOF":
            raise SymbolSyntaxError(f"unexpected {token.text!r}", token.position)
        return node

    def parse_expr(self) -> Node:
        terms = [self.parse_term()]
        while self.current().kind in ("PLUS", "MINUS"):
            negate = self.advance().kind == "MINUS"
            term = self.parse_term()
            terms.append(Neg(term) if negate else term)
        return terms[0] if len(terms) == 1 else Sum(tuple(terms))

    def parse_term(self) -> Node:
        factors = [self.parse_unary()]
        while self.current().kind == "STAR":
            self.advance()
            factors.append(self.parse_unary())
        return factors[0] if len(factors) == 1 else Product(tuple(factors))

    def parse_unary(self) -> Node:
        if self.current().kind == "MINUS":
            self.advance()
            return Neg(self.parse_unary())
        return self.parse_power()

    def parse_power(self) -> Node:
        base = self.parse_atom()
        if self.current().kind != "CARET":
            return base
        self.advance()
        token = self.current()
        if token.kind == "MINUS":
            raise SymbolSyntaxError("negative exponent rejected", token.position)
        if token.kind != "NUM":
            found = "end of input" if token.kind == "EOF" else repr(token.text)
            raise SymbolSyntaxError(f"expected integer exponent, found {found}", token.position)
        if not token.text.isdigit():
            raise SymbolSyntaxError(f"fractional exponent {token.text!r} rejected", token.position)
        self.advance()
        return Power(base, int(token.text))

    def parse_atom(self) -> Node:
        token = self.current()
        if token.kind == "NUM":
            self.advance()
            return Const(complex(float(token.text), 0.0))
        if token.kind == "IMAG":
            self.advance()
            return Const(complex(0.0, float(token.text)))
        if token.kind == "VAR":
            self.advance()
            return Z
        if token.kind == "EXP":
            self.advance()
            self.expect("LPAREN", "'(' after exp")
            arg = self.parse_expr()
            self.expect("RPAREN", "')'")
            return Exp(arg)
        if token.kind == "LPAREN":
            self.advance()
            inner = self.parse_expr()
            self.expect("RPAREN", "')'")
            return inner
        found = "end of input" if token.kind == "EOF" else repr(token.text)
        raise SymbolSyntaxError(f"expected operand, found {found}", token.position)


# =============================================================================
# PRINTER
# =============================================================================

def _format_const(value: complex) -> str:
    if value.imag == 0 and math.copysign(1.0, value.real) > 0:
        return repr(value.real)
    if value.real == 0 and math.copysign(1.0, value.real) > 0 and value.imag > 0:
        return f"{value.imag!r}i"
    if value.imag == 0:
        return f"(-{-value.real!r})"
    sign = "+" if value.imag >= 0 else "-"
    return f"({value.real!r} {sign} {abs(value.imag)!r}i)"


@singledispatch
def _text(node: Node) -> str:
    raise TypeError(f"unknown node {node!r}")


@_text.register
def _(node: Const) -> str:
    return _format_const(node.value)


@_text.register
def _(node: Var) -> str:
    return "z"


@_text.register
def _(node: Exp) -> str:
    return f"exp({_text(node.arg)})"


@_text.register
def _(node: Power) -> str:
    base = _text(node.base)
    if not isinstance(node.base, (Var, Exp, Const)):
        base = f"({base})"
    return f"{base}^{node.exponent}"


@_text.register
def _(node: Neg) -> str:
    inner = _text(node.operand)
    if isinstance(node.operand, (Sum, Product, Neg)):
        inner = f"({inner})"
    return f"-{inner}"


@_text.register
def _(node: Product) -> str:
    parts = []
    for factor in node.factors:
        text = _text(factor)
        if isinstance(factor, (Sum, Product, Neg)):
            text = f"({text})"
        parts.append(text)
    return "*".join(parts)


@_text.register
def _(node: Sum) -> str:
    parts = []
    for index, term in enumerate(node.terms):
        if index and isinstance(term, Neg):
            inner = _text(term.operand)
            if isinstance(term.operand, Sum):
                inner = f"({inner})"
            parts.append(f" - {inner}")
            continue
        text = _text(term)
        if isinstance(term, Sum):
            text = f"({text})"
        parts.append(f" + {text}" if index else text)
    return "".join(parts)


# =============================================================================
# EVALUATION
# =============================================================================

@singledispatch
def evaluate(node: Node, z: np.ndarray) -> np.ndarray:
    """Evaluate a node on a complex array."""
    raise TypeError(f"unknown node {node!r}")


@evaluate.register
def _(node: Const, z: np.ndarray) -> np.ndarray:
    return np.full(np.shape(z), node.value, dtype=complex)


@evaluate.register
def _(node: Var, z: np.ndarray) -> np.ndarray:
    return np.asarray(z, dtype=complex)


@evaluate.register
def _(node: Neg, z: np.ndarray) -> np.ndarray:
    return -evaluate(node.operand, z)


@evaluate.register
def _(node: Sum, z: np.ndarray) -> np.ndarray:
    return reduce(lambda acc, term: acc + evaluate(term, z), node.terms[1:], evaluate(node.terms[0], z))


@evaluate.register
def _(node: Product, z: np.ndarray) -> np.ndarray:
    return reduce(lambda acc, f: acc * evaluate(f, z), node.factors[1:], evaluate(node.factors[0], z))


@evaluate.register
def _(node: Power, z: np.ndarray) -> np.ndarray:
    return evaluate(node.base, z) ** node.exponent


@evaluate.register
def _(node: Exp, z: np.ndarray) -> np.ndarray:
    return np.exp(evaluate(node.arg, z))


@singledispatch
def log_modulus(node: Node, z: np.ndarray) -> np.ndarray:
    """log|f(z)| computed without forming huge exponentials where possible."""
    with np.errstate(divide="ignore", over="ignore"):
        return np.log(np.abs(evaluate(node, z)))


@log_modulus.register
def _(node: Neg, z: np.ndarray) -> np.ndarray:
    return log_modulus(node.operand, z)


@log_modulus.register
def _(node: Product, z: np.ndarray) -> np.ndarray:
    return reduce(lambda acc, f: acc + log_modulus(f, z), node.factors[1:], log_modulus(node.factors[0], z))


@log_modulus.register
def _(node: Power, z: np.ndarray) -> np.ndarray:
    if node.exponent == 0:
        return np.zeros(np.shape(z))
    return node.exponent * log_modulus(node.base, z)


@log_modulus.register
def _(node: Exp, z: np.ndarray) -> np.ndarray:
    return np.real(evaluate(node.arg, z))


@singledispatch
def log_value(node: Node, z: np.ndarray) -> np.ndarray:
    """A complex logarithm of f(z); exponentials stay in their exponent."""
    with np.errstate(divide="ignore", over="ignore", invalid="ignore"):
        return np.log(evaluate(node, z).astype(complex))


@log_value.register
def _(node: Neg, z: np.ndarray) -> np.ndarray:
    return log_value(node.operand, z) + 1j * np.pi


@log_value.register
def _(node: Product, z: np.ndarray) -> np.ndarray:
    return reduce(lambda acc, f: acc + log_value(f, z), node.factors[1:], log_value(node.factors[0], z))


@log_value.register
def _(node: Power, z: np.ndarray) -> np.ndarray:
    if node.exponent == 0:
        return np.zeros(np.shape(z), dtype=complex)
    return node.exponent * log_value(node.base, z)


@log_value.register
def _(node: Exp, z: np.ndarray) -> np.ndarray:
    return evaluate(node.arg, z)


# =============================================================================
# SMART CONSTRUCTORS AND DERIVATIVES
# =============================================================================

def make_neg(node: Node) -> Node:
    if isinstance(node, Const):
        return Const(-node.value)
    if isinstance(node, Neg):
        return node.operand
    return Neg(node)


def make_sum(*terms: Node) -> Node:
    flat: List[Node] = []
    for term in terms:
        flat.extend(term.terms if isinstance(term, Sum) else (term,))
    constant = sum((t.value for t in flat if isinstance(t, Const)), 0j)
    rest = [t for t in flat if not isinstance(t, Const)]
    if constant != 0 or not rest:
        rest.append(Const(constant))
    return rest[0] if len(rest) == 1 else Sum(tuple(rest))


def make_product(*factors: Node) -> Node:
    flat: List[Node] = []
    for factor in factors:
        flat.extend(factor.factors if isinstance(factor, Product) else (factor,))
    constant = reduce(lambda a, b: a * b, (f.value for f in flat if isinstance(f, Const)), 1 + 0j)
    if constant == 0:
        return ZERO
    rest = [f for f in flat if not isinstance(f, Const)]
    if constant != 1 or not rest:
        rest.insert(0, Const(constant))
    return rest[0] if len(rest) == 1 else Product(tuple(rest))


def make_power(base: Node, exponent: int) -> Node:
    if exponent == 0:
        return ONE
    if exponent == 1:
        return base
    if isinstance(base, Const):
        return Const(base.value**exponent)
    return Power(base, exponent)


@singledispatch
def _derive(node: Node) -> Node:
    raise TypeError(f"unknown node {node!r}")


@_derive.register
def _(node: Const) -> Node:
    return ZERO


@_derive.register
def _(node: Var) -> Node:
    return ONE


@_derive.register
def _(node: Neg) -> Node:
    return make_neg(_derive(node.operand))


@_derive.register
def _(node: Sum) -> Node:
    return make_sum(*(_derive(term) for term in node.terms))


@_derive.register
def _(node: Product) -> Node:
    terms = []
    for index, factor in enumerate(node.factors):
        others = node.factors[:index] + node.factors[index + 1 :]
        terms.append(make_product(*others, _derive(factor)))
    return make_sum(*terms)


@_derive.register
def _(node: Power) -> Node:
    return make_product(
        Const(complex(node.exponent)), make_power(node.base, node.exponent - 1), _derive(node.base)
    )


@_derive.register
def _(node: Exp) -> Node:
    return make_product(_derive(node.arg), node)


@singledispatch
def _substitute(node: Node, inner: Node) -> Node:
    raise TypeError(f"unknown node {node!r}")


@_substitute.register
def _(node: Const, inner: Node) -> Node:
    return node


@_substitute.register
def _(node: Var, inner: Node) -> Node:
    return inner


@_substitute.register
def _(node: Neg, inner: Node) -> Node:
    return Neg(_substitute(node.operand, inner))


@_substitute.register
def _(node: Sum, inner: Node) -> Node:
    return Sum(tuple(_substitute(t, inner) for t in node.terms))


@_substitute.register
def _(node: Product, inner: Node) -> Node:
    return Product(tuple(_substitute(f, inner) for f in node.factors))


@_substitute.register
def _(node: Power, inner: Node) -> Node:
    return Power(_substitute(node.base, inner), node.exponent)


@_substitute.register
def _(node: Exp, inner: Node) -> Node:
    return Exp(_substitute(node.arg, inner))


# =============================================================================
# CLASSIFICATION
# =============================================================================

NormalForm = Tuple[np.ndarray, np.ndarray]


def _trim(coefficients: np.ndarray, scale: Optional[np.ndarray] = None) -> np.ndarray:
    """
    Drop trailing zero coefficients.

    `scale` holds, per coefficient, the sum of |contributions| that produced it;
    an entry at or below 1e-14 of its own scale is cancellation residue.
    """
    coefficients = np.asarray(coefficients, dtype=complex)
    if scale is not None:
        coefficients = np.where(np.abs(coefficients) <= 1e-14 * np.asarray(scale), 0, coefficients)
    nonzero = np.nonzero(coefficients)[0]
    if nonzero.size == 0:
        return np.zeros(1, dtype=complex)
    return coefficients[: nonzero[-1] + 1]


def _poly_add(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return _trim(npoly.polyadd(a, b), npoly.polyadd(np.abs(a), np.abs(b)))


def _poly_mul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return _trim(npoly.polymul(a, b), npoly.polymul(np.abs(a), np.abs(b)))


def _degree(coefficients: np.ndarray) -> int:
    return len(_trim(coefficients)) - 1


def _is_zero_poly(coefficients: np.ndarray) -> bool:
    return not np.any(_trim(coefficients))


@singledispatch
def _normal_form(node: Node) -> Optional[NormalForm]:
    """(P, (c0, c1, c2)) with node = P(z) exp(c0 + c1 z + c2 z^2), or None."""
    raise TypeError(f"unknown node {node!r}")


@_normal_form.register
def _(node: Const) -> Optional[NormalForm]:
    return np.array([node.value]), np.zeros(3, dtype=complex)


@_normal_form.register
def _(node: Var) -> Optional[NormalForm]:
    return np.array([0, 1], dtype=complex), np.zeros(3, dtype=complex)


@_normal_form.register
def _(node: Neg) -> Optional[NormalForm]:
    form = _normal_form(node.operand)
    return None if form is None else (-form[0], form[1])


@_normal_form.register
def _(node: Sum) -> Optional[NormalForm]:
    poly: Optional[np.ndarray] = None
    exponent: Optional[np.ndarray] = None
    for term in node.terms:
        form = _normal_form(term)
        if form is None:
            return None
        if _is_zero_poly(form[0]):
            continue
        if exponent is None:
            poly, exponent = form
        elif np.array_equal(form[1], exponent):
            poly = _poly_add(poly, form[0])
        else:
            return None
    if exponent is None:
        return np.zeros(1, dtype=complex), np.zeros(3, dtype=complex)
    return _trim(poly), exponent


@_normal_form.register
def _(node: Product) -> Optional[NormalForm]:
    poly = np.array([1 + 0j])
    exponent = np.zeros(3, dtype=complex)
    for factor in node.factors:
        form = _normal_form(factor)
        if form is None:
            return None
        poly = _poly_mul(poly, form[0])
        exponent = exponent + form[1]
        if _degree(poly) > MAX_DEGREE:
            return None
    return poly, exponent


@_normal_form.register
def _(node: Power) -> Optional[NormalForm]:
    form = _normal_form(node.base)
    if form is None or _degree(form[0]) * node.exponent > MAX_DEGREE:
        return None
    poly = np.array([1 + 0j])
    for _ in range(node.exponent):
        poly = _poly_mul(poly, form[0])
    return poly, form[1] * node.exponent


@_normal_form.register
def _(node: Exp) -> Optional[NormalForm]:
    form = _normal_form(node.arg)
    if form is None or np.any(form[1]) or _degree(form[0]) > 2:
        return None
    exponent = np.zeros(3, dtype=complex)
    arg = _trim(form[0])
    exponent[: len(arg)] = arg
    return np.array([1 + 0j]), exponent


@dataclass(frozen=True)
class SymbolClass:
    """
    Most specific recognised class of a symbol.

    kind is one of 'zero', 'constant', 'polynomial', 'gauss-poly', 'general'.
    For polynomial and constant kinds `poly` holds the ascending coefficients;
    gauss-poly symbols are P(z) exp(c2 z^2 + c1 z + c0) with P = poly.
    """

    kind: str
    degree: Optional[int] = None
    poly: Tuple[complex, ...] = ()
    c2: complex = 0j
    c1: complex = 0j
    c0: complex = 0j

    @property
    def is_polynomial(self) -> bool:
        return self.kind in ("zero", "constant", "polynomial")

    def closed_form(self, z: np.ndarray) -> np.ndarray:
        """Re-evaluate the recognised closed form."""
        z = np.asarray(z, dtype=complex)
        if self.kind == "general":
            raise ValueError("general symbols have no closed form")
        values = npoly.polyval(z, np.array(self.poly or (0j,)))
        if self.kind == "gauss-poly":
            values = values * np.exp(self.c2 * z**2 + self.c1 * z + self.c0)
        return values


def _classify_node(node: Node) -> SymbolClass:
    form = _normal_form(node)
    if form is None:
        return SymbolClass("general")
    poly, exponent = form
    poly = _trim(poly)
    if _is_zero_poly(poly):
        return SymbolClass("zero", degree=0, poly=(0j,))
    c0, c1, c2 = (complex(c) for c in exponent)
    if c1 == 0 and c2 == 0:
        if c0 != 0:
            poly = poly * np.exp(c0)
        degree = len(poly) - 1
        kind = "constant" if degree == 0 else "polynomial"
        return SymbolClass(kind, degree=degree, poly=tuple(complex(c) for c in poly))
    return SymbolClass(
        "gauss-poly",
        degree=len(poly) - 1,
        poly=tuple(complex(c) for c in poly),
        c2=c2,
        c1=c1,
        c0=c0,
    )


# =============================================================================
# PUBLIC API
# =============================================================================

@dataclass(frozen=True)
class EntireExpr:
    """A parsed entire symbol; immutable, callable on complex arrays."""

    root: Node
    symbol_class: SymbolClass = field(init=False, compare=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "symbol_class", _classify_node(self.root))

    @property
    def kind(self) -> str:
        return self.symbol_class.kind

    @property
    def degree(self) -> Optional[int]:
        return self.symbol_class.degree if self.symbol_class.is_polynomial else None

    def __call__(self, z: np.ndarray) -> np.ndarray:
        with np.errstate(over="ignore", invalid="ignore"):
            return evaluate(self.root, np.asarray(z, dtype=complex))

    def log_abs(self, z: np.ndarray) -> np.ndarray:
        with np.errstate(over="ignore", invalid="ignore"):
            return log_modulus(self.root, np.asarray(z, dtype=complex))

    def log(self, z: np.ndarray) -> np.ndarray:
        with np.errstate(over="ignore", invalid="ignore"):
            return log_value(self.root, np.asarray(z, dtype=complex))

    def __str__(self) -> str:
        return to_text(self)


def parse_symbol(text: str) -> EntireExpr:
    """
    Parse expression text into an EntireExpr.

    Raises:
        SymbolSyntaxError: with the offending position
    """
    expr = EntireExpr(Parser(text).parse())
    logger.debug("Parsed %r as %s", text, expr.symbol_class.kind)
    return expr


def to_text(f: EntireExpr) -> str:
    """Canonical text; reparses to a tree with identical evaluation."""
    return _text(f.root)


def differentiate(f: EntireExpr) -> EntireExpr:
    return EntireExpr(_derive(f.root))


def compose(f: EntireExpr, g: EntireExpr) -> EntireExpr:
    """f o g, obtained by substituting g's tree for every z in f."""
    return EntireExpr(_substitute(f.root, g.root))


def classify(f: EntireExpr) -> SymbolClass:
    return f.symbol_class


def constant(value: complex) -> EntireExpr:
    return EntireExpr(Const(complex(value)))


def identity() -> EntireExpr:
    return EntireExpr(Z)


def monomial(n: int) -> EntireExpr:
    return EntireExpr(make_power(Z, n))


def scaled(f: EntireExpr, factor: complex) -> EntireExpr:
    return EntireExpr(make_product(Const(complex(factor)), f.root))


def linear_combination(a: complex, f: EntireExpr, b: complex, g: EntireExpr) -> EntireExpr:
    return EntireExpr(make_sum(make_product(Const(complex(a)), f.root), make_product(Const(complex(b)), g.root)))


def exp_of(f: EntireExpr) -> EntireExpr:
    return EntireExpr(Exp(f.root))


def linear_form(f: EntireExpr) -> Optional[Tuple[complex, complex]]:
    """(a, b) when f(z) = a z + b, else None."""
    cls = f.symbol_class
    if not cls.is_polynomial or (cls.degree or 0) > 1:
        return None
    poly = cls.poly + (0j, 0j)
    return complex(poly[1]), complex(poly[0])


def growth_bound(f: EntireExpr) -> Optional[GaussianBound]:
    """
    Analytic majorant |f(z)| <= A (1+|z|)^k e^{s|z|^2 + t|z|} from the class.

    Polynomials give s = t = 0 with A the coefficient l1 norm; gauss-poly symbols
    add s = |c2|, t = |c1| and fold Re(c0) into A. General symbols combine the
    bounds of their sums, products and powers; None when some exponential has an
    argument beyond degree 2.
    """
    if f.symbol_class.kind == "general":
        return _structural_bound(f.root)
    return _class_bound(f.symbol_class)


def _class_bound(cls: SymbolClass) -> GaussianBound:
    if cls.kind == "zero":
        return GaussianBound.zero()
    l1 = float(np.sum(np.abs(np.array(cls.poly))))
    log_A = math.log(l1) + cls.c0.real
    return GaussianBound(log_A=log_A, k=float(cls.degree or 0), s=abs(cls.c2), t=abs(cls.c1))


def _structural_bound(node: Node) -> Optional[GaussianBound]:
    cls = _classify_node(node)
    if cls.kind != "general":
        return _class_bound(cls)
    if isinstance(node, Neg):
        return _structural_bound(node.operand)
    if isinstance(node, Power):
        base = _structural_bound(node.base)
        return None if base is None else base.power(node.exponent)
    if isinstance(node, Product):
        bounds = [_structural_bound(factor) for factor in node.factors]
        if any(b is None for b in bounds):
            return None
        return reduce(lambda acc, b: acc * b, bounds)
    if isinstance(node, Sum):
        bounds = [_structural_bound(term) for term in node.terms]
        if any(b is None for b in bounds):
            return None
        live = [b for b in bounds if not b.is_zero]
        if not live:
            return GaussianBound.zero()
        # each term is dominated by the largest k, s and t on r >= 0
        return GaussianBound(
            log_A=float(np.logaddexp.reduce([b.log_A for b in live])),
            k=max(b.k for b in live),
            s=max(b.s for b in live),
            t=max(b.t for b in live),
        )
    return None
