"""Scalar coordinate expressions: parsing, printing and jet evaluation.

Grammar (whitespace insignificant)::

    expr   := term (("+"|"-") term)* ;
    term   := factor (("*"|"/") factor)* ;
    factor := ("-" factor) | power ;
    power  := atom ("^" factor)? ;
    atom   := NUMBER | IDENT | IDENT "(" expr ")" | "(" expr ")" ;

``^`` binds tighter than unary minus, so ``-x^2`` is ``-(x^2)``, and it is
right-associative through ``factor``.  Identifiers parse as ``Var``; ``bind``
turns the ones that are declared parameters into ``Param``.
"""
import logging
import math
import re
from dataclasses import dataclass
from typing import Any

import numpy as np

from . import jets
from .exceptions import EvaluationError, ExprSyntaxError, UnboundNameError, UnknownFunctionError
from .jets import Jet
from .quadrature import double_integral, single_integral

logger = logging.getLogger(__name__)

FUNCTIONS = ('exp', 'log', 'sin', 'cos', 'sqrt')

_TOKEN = re.compile(r'\s*(?:(?P<number>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)'
                    r'|(?P<ident>[A-Za-z_][A-Za-z_0-9]*)|(?P<op>[-+*/^()]))')


@dataclass(frozen=True)
class Constant:
    value: float


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Param:
    name: str


@dataclass(frozen=True)
class Binary:
    op: str
    left: Any
    right: Any


@dataclass(frozen=True)
class Unary:
    op: str
    operand: Any


@dataclass(frozen=True)
class Call:
    func: str
    arg: Any


@dataclass(frozen=True)
class DoubleIntegral:
    """gamma(var) = int_base^var (var - s) kernel(s) ds, so gamma'' = kernel.

    ``kernel`` must provide ``derivatives(value, count)`` returning
    ``[k(value), k'(value), ...]`` with ``count`` entries, and
    ``samples(values)`` returning k on an array.  Built programmatically by the
    catalog and the Walker reconstruction; it has no surface syntax.
    """
    kernel: Any
    var: str
    base: float


@dataclass(frozen=True)
class _Token:
    kind: str
    text: str
    offset: int


def _tokenize(text):
    tokens = []
    pos = 0
    stripped_end = len(text.rstrip())
    while pos < stripped_end:
        match = _TOKEN.match(text, pos)
        if match is None or match.end() == pos:
            bad = pos + (len(text[pos:]) - len(text[pos:].lstrip()))
            raise ExprSyntaxError(f'unexpected character {text[bad]!r}', bad + 1,
                                  ('number', 'identifier', 'operator'))
        kind = match.lastgroup
        start = match.start(kind)
        tokens.append(_Token(kind, match.group(kind), start + 1))
        pos = match.end()
    tokens.append(_Token('end', '', len(text) + 1))
    return tokens


class _Parser:
    def __init__(self, text):
        self.tokens = _tokenize(text)
        self.index = 0

    @property
    def current(self):
        return self.tokens[self.index]

    def _advance(self):
        token = self.current
        self.index += 1
        return token

    def _is_op(self, *ops):
        return self.current.kind == 'op' and self.current.text in ops

    def _expect_op(self, op):
        if not self._is_op(op):
            self._fail(f'expected {op!r}', (op,))
        return self._advance()

    def _fail(self, message, expected):
        token = self.current
        found = 'end of input' if token.kind == 'end' else repr(token.text)
        raise ExprSyntaxError(f'{message}, found {found}', token.offset, expected)

    def parse(self):
        node = self.expr()
        if self.current.kind != 'end':
            self._fail('unexpected trailing input', ('+', '-', '*', '/', '^', 'end of input'))
        return node

    def expr(self):
        node = self.term()
        while self._is_op('+', '-'):
            op = self._advance().text
            node = Binary(op, node, self.term())
        return node

    def term(self):
        node = self.factor()
        while self._is_op('*', '/'):
            op = self._advance().text
            node = Binary(op, node, self.factor())
        return node

    def factor(self):
        if self._is_op('-'):
            self._advance()
            return Unary('neg', self.factor())
        return self.power()

    def power(self):
        node = self.atom()
        if self._is_op('^'):
            self._advance()
            node = Binary('^', node, self.factor())
        return node

    def atom(self):
        token = self.current
        if token.kind == 'number':
            self._advance()
            return Constant(float(token.text))
        if token.kind == 'ident':
            self._advance()
            if self._is_op('('):
                if token.text not in FUNCTIONS:
                    raise UnknownFunctionError(f'unknown function {token.text!r}', token.offset,
                                               FUNCTIONS)
                self._advance()
                arg = self.expr()
                self._expect_op(')')
                return Call(token.text, arg)
            return Var(token.text)
        if self._is_op('('):
            self._advance()
            node = self.expr()
            self._expect_op(')')
            return node
        self._fail('expected an operand', ('number', 'identifier', '(', '-'))


def parse(text):
    """Parse one scalar expression; raises ExprSyntaxError with a 1-based offset."""
    if not text or not text.strip():
        raise ExprSyntaxError('empty expression', 1, ('number', 'identifier', '(', '-'))
    return _Parser(text).parse()


def to_text(node):
    """Fully parenthesized rendering that parses back to the same tree."""
    if isinstance(node, Constant):
        text = repr(float(node.value))
        return f'({text})' if node.value < 0 else text
    if isinstance(node, (Var, Param)):
        return node.name
    if isinstance(node, Unary):
        return f'(-{to_text(node.operand)})'
    if isinstance(node, Binary):
        return f'({to_text(node.left)} {node.op} {to_text(node.right)})'
    if isinstance(node, Call):
        return f'{node.func}({to_text(node.arg)})'
    if isinstance(node, DoubleIntegral):
        return f'<double integral in {node.var} from {node.base!r}>'
    raise TypeError(f'not an expression node: {node!r}')


def names(node):
    """Set of identifier names (variables and parameters) used by the tree."""
    if isinstance(node, (Var, Param)):
        return {node.name}
    if isinstance(node, Unary):
        return names(node.operand)
    if isinstance(node, Binary):
        return names(node.left) | names(node.right)
    if isinstance(node, Call):
        return names(node.arg)
    if isinstance(node, DoubleIntegral):
        return {node.var}
    return set()


def bind(node, coordinates, params):
    """Resolve identifiers against declared coordinates and parameters."""
    if isinstance(node, (Var, Param)):
        if node.name in coordinates:
            return Var(node.name)
        if node.name in params:
            return Param(node.name)
        raise UnboundNameError(f'unbound name {node.name!r}', operation='bind')
    if isinstance(node, Unary):
        return Unary(node.op, bind(node.operand, coordinates, params))
    if isinstance(node, Binary):
        return Binary(node.op, bind(node.left, coordinates, params),
                      bind(node.right, coordinates, params))
    if isinstance(node, Call):
        return Call(node.func, bind(node.arg, coordinates, params))
    if isinstance(node, DoubleIntegral) and node.var not in coordinates:
        raise UnboundNameError(f'unbound name {node.var!r}', operation='bind')
    return node


def ensure_expr(value):
    return parse(value) if isinstance(value, str) else value


class Evaluator:
    """Evaluates expression trees to jets at one point.

    Seeds are shared between the trees evaluated through one instance, so a
    metric's components and a potential can be produced consistently.
    """

    def __init__(self, coordinates, point, order, params=None):
        self.coordinates = tuple(coordinates)
        self.point = np.asarray(point, dtype=float).ravel()
        if len(self.point) != len(self.coordinates):
            raise UnboundNameError(
                f'point has {len(self.point)} entries for {len(self.coordinates)} coordinates',
                operation='eval')
        self.order = order
        self.params = dict(params or {})
        self.seeds = dict(zip(self.coordinates, jets.seed_jets(self.point, order)))
        self.space = jets.space(len(self.coordinates), order)
        self.samples = None

    @classmethod
    def at_samples(cls, coordinates, samples, params=None, order=0):
        """Evaluator over many points at once; ``samples`` has one column per coordinate.

        Jets produced this way carry a trailing sample axis.
        """
        samples = np.atleast_2d(np.asarray(samples, dtype=float))
        evaluator = cls(coordinates, samples[0], order, params)
        sp = evaluator.space
        seeds = {}
        for axis, name in enumerate(evaluator.coordinates):
            coeffs = np.zeros((sp.size, samples.shape[0]))
            coeffs[0] = samples[:, axis]
            if order >= 1:
                unit = [0] * sp.dim
                unit[axis] = 1
                coeffs[sp.position[tuple(unit)]] = 1.0
            seeds[name] = Jet(sp, coeffs)
        evaluator.seeds = seeds
        evaluator.samples = samples
        return evaluator

    def constant(self, value):
        return Jet.constant(self.space, value)

    def __call__(self, node):
        try:
            return self._eval(node)
        except EvaluationError as exc:
            if self.samples is None:
                exc.with_point(self.point)
            raise

    def _name(self, name):
        if name in self.seeds:
            return self.seeds[name]
        if name in self.params:
            return self.constant(float(self.params[name]))
        raise UnboundNameError(f'unbound name {name!r}', operation='eval')

    def _eval(self, node):
        if isinstance(node, Constant):
            return self.constant(node.value)
        if isinstance(node, (Var, Param)):
            return self._name(node.name)
        if isinstance(node, Unary):
            return -self._eval(node.operand)
        if isinstance(node, Call):
            return jets.jet_op(node.func, [self._eval(node.arg)])
        if isinstance(node, Binary):
            left = self._eval(node.left)
            if node.op == '^':
                return self._power(left, node.right)
            right = self._eval(node.right)
            op = {'+': 'add', '-': 'sub', '*': 'mul', '/': 'div'}[node.op]
            return jets.jet_op(op, [left, right])
        if isinstance(node, DoubleIntegral):
            return self._double_integral(node)
        raise TypeError(f'not an expression node: {node!r}')

    def _power(self, base, exponent_node):
        exponent = self._eval(exponent_node)
        if not np.any(exponent.coeffs[1:]) and np.ndim(exponent.coeffs[0]) == 0:
            value = float(exponent.coeffs[0])
            if value.is_integer():
                return jets.pow_int(base, int(value))
            return jets.pow_real(base, value)
        return jets.general_power(base, exponent)

    def _double_integral(self, node):
        if node.var not in self.seeds:
            raise UnboundNameError(f'unbound name {node.var!r}', operation='eval')
        if self.samples is not None:
            raise EvaluationError('double integrals are evaluated one point at a time',
                                  operation='quadrature')
        axis = self.coordinates.index(node.var)
        y = float(self.point[axis])
        coeffs = np.zeros(self.space.size)
        coeffs[0] = double_integral(node.kernel, node.base, y)
        if self.order >= 1:
            unit = [0] * len(self.coordinates)
            unit[axis] = 1
            coeffs[self.space.position[tuple(unit)]] = single_integral(node.kernel, node.base, y)
        if self.order >= 2:
            tail = node.kernel.derivatives(y, self.order - 1)
            for k in range(2, self.order + 1):
                exponents = [0] * len(self.coordinates)
                exponents[axis] = k
                coeffs[self.space.position[tuple(exponents)]] = tail[k - 2] / math.factorial(k)
        return Jet(self.space, coeffs)


def eval_jet(node, point, order, params=None, coordinates=None):
    """Jet of ``node`` at ``point``; coordinates default to sorted free names minus params."""
    params = dict(params or {})
    if coordinates is None:
        coordinates = sorted(names(node) - set(params))
    return Evaluator(coordinates, point, order, params)(ensure_expr(node))


def evaluate(node, point, params=None, coordinates=None):
    """Plain float value (an order-0 jet)."""
    return eval_jet(node, point, 0, params, coordinates).value


@dataclass(frozen=True)
class ExprKernel:
    """Kernel of a DoubleIntegral given by a one-variable expression."""
    expr: Any
    var: str
    params: tuple = ()

    def derivatives(self, value, count):
        order = max(count - 1, 0)
        jet = Evaluator((self.var,), [value], order, dict(self.params))(self.expr)
        return [jet.derivative(*([0] * k)) for k in range(count)]

    def samples(self, values):
        column = np.ravel(np.asarray(values, dtype=float))[:, None]
        return np.broadcast_to(
            Evaluator.at_samples((self.var,), column, dict(self.params))(self.expr).value,
            (column.shape[0],)).astype(float)
