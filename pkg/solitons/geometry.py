"""Pointwise tensor calculus for coordinate metrics of any signature.

Conventions (fixed, calibrated on plane waves):

* ``R(X,Y)Z = nabla_X nabla_Y Z - nabla_Y nabla_X Z - nabla_[X,Y] Z``;
  ``riemann_op[k, a, b, c]`` is the ``d_k`` component of ``R(d_a, d_b) d_c``.
* ``rho(Y,Z) = trace(X -> R(X,Y)Z)``.
* ``R(X,Y,Z,W) = g(R(X,Y)W, Z)``, stored as ``riemann[a, b, c, w]``.
* Derivative axes are trailing: ``christoffel_d1[k, i, j, m] = d_m Gamma^k_ij``.

The metric is carried as an order-3 jet, so every derivative below comes from
jet arithmetic at the point rather than from finite differences.
"""
import functools
import logging
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from . import jets
from .exceptions import EvaluationError, SingularMetricError, UnboundNameError
from .exprlang import Constant, Evaluator, bind, ensure_expr

logger = logging.getLogger(__name__)

SEED_ORDER = 3
DEGENERACY_RATIO = 1e-12


@dataclass(frozen=True)
class MetricSpec:
    """Coordinate metric ``g_ij`` given by expressions; the lower triangle is authoritative."""
    coordinates: tuple
    components: dict
    params: dict = field(default_factory=dict)

    @classmethod
    def from_entries(cls, coordinates, entries, params=None):
        """Build from ``{(name_i, name_j): expr}``; missing entries are zero."""
        coordinates = tuple(coordinates)
        params = dict(params or {})
        index = {name: k for k, name in enumerate(coordinates)}
        components = {}
        for (a, b), expr in entries.items():
            if a not in index or b not in index:
                raise UnboundNameError(f'metric entry g.{a}.{b} names an unknown coordinate',
                                       operation='bind')
            i, j = sorted((index[a], index[b]), reverse=True)
            lower = index[a] >= index[b]
            if (i, j) in components and not lower:
                continue
            components[(i, j)] = bind(ensure_expr(expr), coordinates, params)
        return cls(coordinates, components, params)

    @property
    def dim(self):
        return len(self.coordinates)

    def entry(self, i, j):
        i, j = max(i, j), min(i, j)
        return self.components.get((i, j), Constant(0.0))

    def evaluator(self, point, order=SEED_ORDER):
        return Evaluator(self.coordinates, point, order, self.params)

    def matrix(self, point):
        """Plain metric values at ``point``."""
        ev = self.evaluator(point, 0)
        return np.array([[ev(self.entry(i, j)).value for j in range(self.dim)]
                         for i in range(self.dim)])


@dataclass
class CurvaturePack:
    point: np.ndarray
    metric: np.ndarray
    inverse_metric: np.ndarray
    christoffel: np.ndarray
    christoffel_d1: np.ndarray
    christoffel_d2: np.ndarray
    riemann_op: Optional[np.ndarray] = None
    riemann: Optional[np.ndarray] = None
    ricci: Optional[np.ndarray] = None
    ricci_op: Optional[np.ndarray] = None
    scalar_curvature: Optional[float] = None
    scalar_curvature_gradient: Optional[np.ndarray] = None
    nabla_ricci: Optional[np.ndarray] = None


@dataclass
class ScalarPack:
    value: float
    differential: np.ndarray
    gradient: np.ndarray
    hessian: np.ndarray
    hessian_op: np.ndarray
    laplacian: float
    grad_norm_sq: float
    hess_norm_sq: float
    laplacian_grad_norm_sq: float
    grad_laplacian: np.ndarray


@dataclass
class FieldResiduals:
    killing: np.ndarray
    parallel: np.ndarray


def check_nondegenerate(matrix, point=None):
    """Raise SingularMetricError when |det g| <= 1e-12 times the product of row norms."""
    scale = float(np.prod(np.linalg.norm(matrix, axis=1)))
    det = float(np.linalg.det(matrix))
    if scale == 0.0 or abs(det) <= DEGENERACY_RATIO * scale:
        raise SingularMetricError(f'metric is degenerate (det={det:.3e})', operation='metric',
                                  point=point)
    return det


class PointGeometry:
    """All jets needed at one point, computed lazily and shared between checks."""

    def __init__(self, spec, point, order=SEED_ORDER):
        self.spec = spec
        self.point = np.asarray(point, dtype=float).ravel()
        self.evaluator = spec.evaluator(self.point, order)
        d = spec.dim
        self.metric_jet = jets.stack(
            [self._eval(spec.entry(i, j)) for i in range(d) for j in range(d)], (d, d))
        check_nondegenerate(self.metric_jet.value, self.point)

    def _eval(self, expr):
        return self.evaluator(ensure_expr(expr))

    def scalar_jet(self, expr):
        """Jet of a scalar expression in this chart (parameters of the metric apply)."""
        if isinstance(expr, jets.Jet):
            return expr
        node = bind(ensure_expr(expr), self.spec.coordinates, self.spec.params)
        return self._eval(node)

    @functools.cached_property
    def inverse_jet(self):
        try:
            return jets.inverse(self.metric_jet.truncate(self.metric_jet.order - 1))
        except EvaluationError as exc:
            raise SingularMetricError(str(exc), operation='inverse', point=self.point) from exc

    @functools.cached_property
    def christoffel_jet(self):
        dg = self.metric_jet.gradient()
        lowered = 0.5 * (jets.linear('jli->lij', dg) + jets.linear('ilj->lij', dg)
                         - jets.linear('ijl->lij', dg))
        return jets.contract('kl,lij->kij', self.inverse_jet, lowered)

    @functools.cached_property
    def riemann_op_jet(self):
        gamma = self.christoffel_jet
        d_gamma = gamma.gradient()
        gamma = gamma.truncate(d_gamma.order)
        return (jets.linear('kbca->kabc', d_gamma) - jets.linear('kacb->kabc', d_gamma)
                + jets.contract('kam,mbc->kabc', gamma, gamma)
                - jets.contract('kbm,mac->kabc', gamma, gamma))

    @functools.cached_property
    def ricci_jet(self):
        return jets.linear('aabc->bc', self.riemann_op_jet)

    @functools.cached_property
    def scalar_curvature_jet(self):
        return jets.contract('ij,ij->', self.inverse_jet, self.ricci_jet)

    @functools.cached_property
    def nabla_ricci(self):
        rho = self.ricci_jet
        gamma = self.christoffel_jet.value
        rho0 = rho.value
        d_rho = np.moveaxis(rho.gradient().value, -1, 0)
        return (d_rho - np.einsum('aki,aj->kij', gamma, rho0)
                - np.einsum('akj,ia->kij', gamma, rho0))

    def connection_pack(self):
        gamma = self.christoffel_jet
        d1 = gamma.gradient()
        return CurvaturePack(
            point=self.point,
            metric=np.array(self.metric_jet.value),
            inverse_metric=np.array(self.inverse_jet.value),
            christoffel=np.array(gamma.value),
            christoffel_d1=np.array(d1.value),
            christoffel_d2=np.array(d1.gradient().value),
        )

    def curvature_pack(self):
        pack = self.connection_pack()
        g = pack.metric
        pack.riemann_op = np.array(self.riemann_op_jet.value)
        pack.riemann = np.einsum('ck,kabw->abcw', g, pack.riemann_op)
        pack.ricci = np.array(self.ricci_jet.value)
        pack.ricci_op = pack.inverse_metric @ pack.ricci
        pack.scalar_curvature = float(self.scalar_curvature_jet.value)
        pack.scalar_curvature_gradient = np.array(self.scalar_curvature_jet.gradient().value)
        pack.nabla_ricci = self.nabla_ricci
        return pack

    def covariant_hessian(self, scalar):
        """Hess of a scalar jet as a jet two orders lower."""
        d_scalar = scalar.gradient()
        return d_scalar.gradient() - jets.contract('kij,k->ij', self.christoffel_jet, d_scalar)

    def scalar_pack(self, expr):
        f = self.scalar_jet(expr)
        ginv = self.inverse_jet
        df = f.gradient()
        hess = self.covariant_hessian(f)
        grad = jets.contract('ij,j->i', ginv, df)
        grad_norm_sq = jets.contract('i,i->', df, grad)
        laplacian = jets.contract('ij,ij->', ginv, hess)

        ginv0 = np.array(ginv.value)
        hess0 = np.array(hess.value)
        hess_op = ginv0 @ hess0
        d_laplacian = np.array(laplacian.gradient().value)
        hess_of_norm = np.array(self.covariant_hessian(grad_norm_sq).value)
        return ScalarPack(
            value=f.value,
            differential=np.array(df.value),
            gradient=np.array(grad.value),
            hessian=hess0,
            hessian_op=hess_op,
            laplacian=float(laplacian.value),
            grad_norm_sq=float(grad_norm_sq.value),
            hess_norm_sq=float(np.einsum('ia,jb,ij,ab->', ginv0, ginv0, hess0, hess0)),
            laplacian_grad_norm_sq=float(np.einsum('ij,ij->', ginv0, hess_of_norm)),
            grad_laplacian=ginv0 @ d_laplacian,
        )

    def vector_jet(self, components):
        return jets.stack([self.scalar_jet(c) for c in components])

    def field_residuals(self, components):
        """Killing and parallel residuals of a vector field given by its components."""
        if len(components) != self.spec.dim:
            raise UnboundNameError(
                f'vector field has {len(components)} components in dimension {self.spec.dim}',
                operation='field_residuals', point=self.point)
        return self._field_residuals(self.vector_jet(components))

    def _field_residuals(self, field_jet):
        parallel = self._covariant_derivative(field_jet)
        lowered = np.einsum('jk,ki->ij', np.array(self.metric_jet.value), parallel)
        return FieldResiduals(killing=lowered + lowered.T, parallel=parallel)

    def _covariant_derivative(self, field_jet):
        """``out[k, i] = d_i X^k + Gamma^k_ij X^j`` at the point."""
        d_field = np.array(field_jet.gradient().value)
        return d_field + np.einsum('kij,j->ki', np.array(self.christoffel_jet.value),
                                   np.array(field_jet.value))

    def gradient_of_derivative(self, components, expr):
        """grad{X(f)} as a jet, with X(f) = X^k d_k f."""
        field_jet = self.vector_jet(components)
        df = self.scalar_jet(expr).gradient()
        h = jets.contract('k,k->', field_jet, df)
        return h, jets.contract('ij,j->i', self.inverse_jet, h.gradient())

    def parallel_residual_of(self, vector_jet):
        return self._covariant_derivative(vector_jet)

    def metric_compatibility(self):
        """Max |nabla_k g_ij| at the point."""
        g = np.array(self.metric_jet.value)
        dg = np.moveaxis(np.array(self.metric_jet.gradient().value), -1, 0)
        gamma = np.array(self.christoffel_jet.value)
        residual = dg - np.einsum('aki,aj->kij', gamma, g) - np.einsum('akj,ia->kij', gamma, g)
        return float(np.max(np.abs(residual)))


def connection(spec, point):
    """Metric, inverse and Christoffel symbols (with two derivatives) at ``point``."""
    return PointGeometry(spec, point).connection_pack()


def curvature(spec, point):
    return PointGeometry(spec, point).curvature_pack()


def scalar_pack(spec, f, point):
    return PointGeometry(spec, point).scalar_pack(f)


def field_residuals(spec, components, point):
    return PointGeometry(spec, point).field_residuals(components)
