"""Truncated multivariate Taylor arithmetic ("jets") of order at most 3.

Coefficients are stored Taylor-normalized: the slot of multi-index ``a`` holds
``d^a F / a!`` where ``a! = a_1! ... a_d!``.  ``Jet.partial`` converts back to
raw partial derivatives, which is the only normalization callers see.

A jet may be tensor valued: ``coeffs`` has shape ``(n,) + shape`` where ``n``
is the number of monomials of degree <= order in ``dim`` variables and the
leading axis enumerates them degree by degree.  Because of that ordering a
lower-order truncation is a prefix of the coefficient array.
"""
import functools
import itertools
import math

import numpy as np

from .exceptions import EvaluationError, JetDomainError

MAX_DIM = 8
MAX_ORDER = 3


class JetSpace:
    """Monomial enumeration and multiplication tables for one (dim, order)."""

    def __init__(self, dim, order):
        if not 1 <= dim <= MAX_DIM:
            raise EvaluationError(f'jet dimension {dim} outside 1..{MAX_DIM}', operation='seed')
        if not 0 <= order <= MAX_ORDER:
            raise EvaluationError(f'jet order {order} outside 0..{MAX_ORDER}', operation='seed')
        self.dim = dim
        self.order = order

        indices = []
        for degree in range(order + 1):
            for combo in itertools.combinations_with_replacement(range(dim), degree):
                exponents = [0] * dim
                for axis in combo:
                    exponents[axis] += 1
                indices.append(tuple(exponents))
        self.indices = tuple(indices)
        self.size = len(indices)
        self.position = {idx: k for k, idx in enumerate(indices)}
        self.degrees = np.array([sum(idx) for idx in indices])
        self.factorials = np.array(
            [math.prod(math.factorial(e) for e in idx) for idx in indices], dtype=float)

        left, right, target = [], [], []
        for a, idx_a in enumerate(indices):
            for b, idx_b in enumerate(indices):
                if self.degrees[a] + self.degrees[b] <= order:
                    left.append(a)
                    right.append(b)
                    target.append(self.position[tuple(x + y for x, y in zip(idx_a, idx_b))])
        self.left = np.array(left, dtype=int)
        self.right = np.array(right, dtype=int)
        self._scatter = np.zeros((self.size, len(left)))
        self._scatter[target, np.arange(len(left))] = 1.0

        if order > 0:
            lower = space(dim, order - 1)
            self.grad_source = np.empty((lower.size, dim), dtype=int)
            self.grad_factor = np.empty((lower.size, dim))
            for b, idx in enumerate(lower.indices):
                for axis in range(dim):
                    raised = list(idx)
                    raised[axis] += 1
                    self.grad_source[b, axis] = self.position[tuple(raised)]
                    self.grad_factor[b, axis] = raised[axis]

    def scatter(self, products):
        """Accumulate pairwise coefficient products onto their target monomials."""
        count = products.shape[0]
        flat = products.reshape(count, -1)
        return (self._scatter @ flat).reshape((self.size,) + products.shape[1:])

    def __repr__(self):
        return f'JetSpace(dim={self.dim}, order={self.order})'


@functools.lru_cache(maxsize=None)
def space(dim, order):
    return JetSpace(dim, order)


class Jet:
    """Immutable truncated Taylor value, scalar or tensor valued."""

    __slots__ = ('space', 'coeffs')
    __array_ufunc__ = None

    def __init__(self, jet_space, coeffs):
        self.space = jet_space
        self.coeffs = np.asarray(coeffs, dtype=float)
        self.coeffs.setflags(write=False)

    @classmethod
    def constant(cls, jet_space, value):
        value = np.asarray(value, dtype=float)
        coeffs = np.zeros((jet_space.size,) + value.shape)
        coeffs[0] = value
        return cls(jet_space, coeffs)

    @property
    def dim(self):
        return self.space.dim

    @property
    def order(self):
        return self.space.order

    @property
    def shape(self):
        return self.coeffs.shape[1:]

    @property
    def value(self):
        v = self.coeffs[0]
        return float(v) if v.ndim == 0 else np.array(v)

    def partial(self, idx):
        """Raw partial derivative for the exponent multi-index ``idx``."""
        idx = tuple(int(e) for e in idx)
        if len(idx) != self.dim or any(e < 0 for e in idx):
            raise EvaluationError(f'multi-index {idx} does not match dimension {self.dim}',
                                  operation='partial')
        if sum(idx) > self.order:
            raise EvaluationError(f'multi-index {idx} exceeds jet order {self.order}',
                                  operation='partial')
        k = self.space.position[idx]
        out = self.space.factorials[k] * self.coeffs[k]
        return float(out) if out.ndim == 0 else np.array(out)

    def derivative(self, *axes):
        """Raw partial derivative along the listed coordinate axes (repeats allowed)."""
        exponents = [0] * self.dim
        for axis in axes:
            exponents[axis] += 1
        return self.partial(exponents)

    def gradient(self):
        """Jet of one order less whose trailing axis indexes d/dx^k."""
        if self.order == 0:
            raise EvaluationError('cannot differentiate an order-0 jet', operation='gradient')
        sp = self.space
        taken = self.coeffs[sp.grad_source]
        factor = sp.grad_factor.reshape(sp.grad_factor.shape + (1,) * len(self.shape))
        return Jet(space(self.dim, self.order - 1), np.moveaxis(taken * factor, 1, -1))

    def truncate(self, order):
        if order > self.order:
            raise EvaluationError(f'cannot raise jet order {self.order} to {order}',
                                  operation='truncate')
        if order == self.order:
            return self
        lower = space(self.dim, order)
        return Jet(lower, self.coeffs[:lower.size])

    def __getitem__(self, key):
        if not isinstance(key, tuple):
            key = (key,)
        return Jet(self.space, self.coeffs[(slice(None),) + key])

    def _lift(self, other):
        if isinstance(other, Jet):
            a, b = _align(self, other)
        else:
            a, b = self, Jet.constant(self.space, other)
        ca, cb = _broadcastable(a.coeffs, b.coeffs)
        return a.space, ca, cb

    def __add__(self, other):
        sp, ca, cb = self._lift(other)
        return Jet(sp, ca + cb)

    __radd__ = __add__

    def __sub__(self, other):
        sp, ca, cb = self._lift(other)
        return Jet(sp, ca - cb)

    def __rsub__(self, other):
        sp, ca, cb = self._lift(other)
        return Jet(sp, cb - ca)

    def __neg__(self):
        return Jet(self.space, -self.coeffs)

    def __mul__(self, other):
        if not isinstance(other, Jet):
            other = np.asarray(other, dtype=float)
            coeffs, _ = _broadcastable(self.coeffs, np.zeros((1,) + other.shape))
            return Jet(self.space, coeffs * other)
        a, b = _align(self, other)
        sp = a.space
        ca, cb = _broadcastable(a.coeffs[sp.left], b.coeffs[sp.right])
        return Jet(sp, sp.scatter(ca * cb))

    __rmul__ = __mul__

    def __truediv__(self, other):
        if not isinstance(other, Jet):
            other = np.asarray(other, dtype=float)
            if np.any(other == 0):
                raise JetDomainError('division by zero', operation='div')
            return Jet(self.space, self.coeffs / other)
        return self * reciprocal(other)

    def __rtruediv__(self, other):
        return reciprocal(self) * other

    def __pow__(self, exponent):
        if isinstance(exponent, Jet):
            return general_power(self, exponent)
        if float(exponent).is_integer():
            return pow_int(self, int(exponent))
        return pow_real(self, float(exponent))

    def __repr__(self):
        return f'Jet(dim={self.dim}, order={self.order}, shape={self.shape}, value={self.value!r})'


def _broadcastable(ca, cb):
    """Pad tensor axes (after the leading coefficient axis) so numpy broadcasts them right-aligned."""
    rank = max(ca.ndim, cb.ndim)

    def pad(c):
        if c.ndim == rank:
            return c
        return c.reshape((c.shape[0],) + (1,) * (rank - c.ndim) + c.shape[1:])

    return pad(ca), pad(cb)


def _align(a, b):
    if a.dim != b.dim:
        raise EvaluationError(f'jet dimensions differ ({a.dim} vs {b.dim})', operation='align')
    order = min(a.order, b.order)
    return a.truncate(order), b.truncate(order)


def seed_jets(point, order):
    """One jet per coordinate: value point[i], unit first partial along axis i."""
    point = np.asarray(point, dtype=float).ravel()
    sp = space(len(point), order)
    seeds = []
    for axis, coordinate in enumerate(point):
        coeffs = np.zeros(sp.size)
        coeffs[0] = coordinate
        if order >= 1:
            unit = [0] * sp.dim
            unit[axis] = 1
            coeffs[sp.position[tuple(unit)]] = 1.0
        seeds.append(Jet(sp, coeffs))
    return seeds


def stack(jets, shape=None):
    """Assemble same-space jets into one tensor-valued jet."""
    jets = list(jets)
    order = min(j.order for j in jets)
    jets = [j.truncate(order) for j in jets]
    coeffs = np.stack([j.coeffs for j in jets], axis=1)
    if shape is not None:
        coeffs = coeffs.reshape((coeffs.shape[0],) + tuple(shape) + coeffs.shape[2:])
    return Jet(jets[0].space, coeffs)


def contract(subscripts, a, b):
    """``numpy.einsum`` for two operands, at least one of them a jet.

    Subscripts use lower-case letters only; the coefficient axis is handled here.
    """
    lhs, out = subscripts.replace(' ', '').split('->')
    sa, sb = lhs.split(',')
    if not isinstance(a, Jet):
        return Jet(b.space, np.einsum(f'{sa},Z{sb}->Z{out}', np.asarray(a, dtype=float), b.coeffs))
    if not isinstance(b, Jet):
        return Jet(a.space, np.einsum(f'Z{sa},{sb}->Z{out}', a.coeffs, np.asarray(b, dtype=float)))
    a, b = _align(a, b)
    sp = a.space
    products = np.einsum(f'Z{sa},Z{sb}->Z{out}', a.coeffs[sp.left], b.coeffs[sp.right])
    return Jet(sp, sp.scatter(products))


def linear(subscripts, a):
    """Single-operand ``einsum`` (traces, transposes, index shuffles)."""
    src, out = subscripts.replace(' ', '').split('->')
    return Jet(a.space, np.einsum(f'Z{src}->Z{out}', a.coeffs))


def inverse(matrix):
    """Inverse of a square-matrix jet by the truncated Neumann series."""
    g0 = matrix.value
    try:
        base = np.linalg.inv(g0)
    except np.linalg.LinAlgError as exc:
        raise JetDomainError('singular matrix', operation='inverse') from exc
    step = contract('ij,jk->ik', -base, matrix - g0)
    term = Jet.constant(matrix.space, base)
    total = term
    for _ in range(matrix.order):
        term = contract('ij,jk->ik', step, term)
        total = total + term
    return total


def _compose(u, coefficients):
    """Sum_n c_n (u - u0)^n, where c_n = f^(n)(u0)/n! evaluated elementwise."""
    h = u - u.value
    result = Jet.constant(u.space, coefficients[0])
    power = h
    for n in range(1, u.order + 1):
        result = result + power * coefficients[n]
        if n < u.order:
            power = power * h
    return result


def _base(u):
    return np.asarray(u.coeffs[0], dtype=float)


def reciprocal(u):
    u0 = _base(u)
    if np.any(u0 == 0):
        raise JetDomainError('division by a jet with zero value', operation='div')
    return _compose(u, [(-1.0) ** n / u0 ** (n + 1) for n in range(u.order + 1)])


def exp(u):
    e = np.exp(_base(u))
    return _compose(u, [e / math.factorial(n) for n in range(u.order + 1)])


def log(u):
    u0 = _base(u)
    if np.any(u0 <= 0):
        raise JetDomainError('log of a non-positive value', operation='log')
    coefficients = [np.log(u0)]
    coefficients += [(-1.0) ** (n + 1) / (n * u0 ** n) for n in range(1, u.order + 1)]
    return _compose(u, coefficients)


def sin(u):
    u0 = _base(u)
    cycle = [np.sin(u0), np.cos(u0), -np.sin(u0), -np.cos(u0)]
    return _compose(u, [cycle[n % 4] / math.factorial(n) for n in range(u.order + 1)])


def cos(u):
    u0 = _base(u)
    cycle = [np.cos(u0), -np.sin(u0), -np.cos(u0), np.sin(u0)]
    return _compose(u, [cycle[n % 4] / math.factorial(n) for n in range(u.order + 1)])


def _binomial(a, n):
    out = 1.0
    for k in range(n):
        out *= (a - k) / (k + 1)
    return out


def pow_real(u, exponent, operation='pow_real'):
    u0 = _base(u)
    if np.any(u0 <= 0):
        raise JetDomainError(f'{operation} of a non-positive base', operation=operation)
    return _compose(u, [_binomial(exponent, n) * u0 ** (exponent - n) for n in range(u.order + 1)])


def sqrt(u):
    return pow_real(u, 0.5, operation='sqrt')


def pow_int(u, exponent):
    if exponent < 0:
        return reciprocal(pow_int(u, -exponent))
    result = Jet.constant(u.space, np.ones(u.shape))
    base = u
    while exponent:
        if exponent & 1:
            result = result * base
        exponent >>= 1
        if exponent:
            base = base * base
    return result


def general_power(u, exponent):
    """u ** v for a jet exponent; constant exponents keep the sign-tolerant paths."""
    if not np.any(exponent.coeffs[1:]):
        value = np.asarray(exponent.coeffs[0])
        if value.ndim == 0:
            return u ** float(value)
    return exp(exponent * log(u))


_UNARY = {'exp': exp, 'log': log, 'sin': sin, 'cos': cos, 'sqrt': sqrt, 'neg': lambda u: -u}


def jet_op(op, args):
    """Dispatch one named arithmetic operation on jet operands."""
    args = list(args)
    if op in _UNARY:
        (u,) = args
        return _UNARY[op](u)
    if op == 'add':
        return args[0] + args[1]
    if op == 'sub':
        return args[0] - args[1]
    if op == 'mul':
        return args[0] * args[1]
    if op == 'div':
        return args[0] / args[1]
    if op == 'pow_int':
        return pow_int(args[0], int(args[1]))
    if op == 'pow_real':
        return pow_real(args[0], float(args[1]))
    raise EvaluationError(f'unknown jet operation {op!r}', operation=op)
