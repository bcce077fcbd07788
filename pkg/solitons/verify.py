"""Residual checks for gradient Ricci solitons ``Hess f + rho = lambda g``.

Every check reduces to a max-abs statistic over components and sample points.
Residuals are divided by the size of the tensors they compare only when that
size exceeds 1, so targets of zero stay absolute.

Signs under the curvature convention of ``geometry`` (``R(X,Y,Z,W) =
g(R(X,Y)W, Z)``), derived from ``Hess f = lambda g - rho``:

* ``R(X,Y,grad f,Z) = (nabla_X rho)(Y,Z) - (nabla_Y rho)(X,Z)``
* ``(nabla_{grad f} Ric) + Ric o H_f = R(., grad f) grad f``
"""
import logging
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from joblib import Parallel, delayed

from . import speclin
from .catalog import ExpectedProfile
from .config import default_tolerances
from .exceptions import EvaluationError
from .geometry import PointGeometry
from .walker3 import match_homogeneous_family, tensor_grid

logger = logging.getLogger(__name__)

PASS = 'pass'
FAIL = 'fail'
NOT_APPLICABLE = 'not_applicable'
INFO = 'info'

SIGN_NOTES = (
    'identity R(X,Y,Z,grad f) evaluated as R(X,Y,grad f,Z) = (nabla_X rho)(Y,Z) - '
    '(nabla_Y rho)(X,Z) under R(X,Y,Z,W) = g(R(X,Y)W,Z)',
    'identity (nabla_{grad f} Ric) + Ric o H_f evaluated against R(., grad f) grad f',
)

CHECK_ORDER = (
    'soliton_residual', 'ric_grad_f', 'grad_norm_spread', 'curvature_gradient_identity',
    'ricci_transport_identity', 'trace_identity', 'steady_hessian_norm',
    'steady_grad_norm_spread', 'bochner', 'hamilton_identity', 'scalar_gradient_identity',
    'scalar_curvature_spread', 'schouten_codazzi', 'killing_fields',
    'killing_gradient_parallel', 'parallel_fields', 'isotropic_einstein', 'steady_structure',
    'rigid_eigenstructure', 'recurrence_theta', 'ricci_profile', 'expected_profile',
)


@dataclass(frozen=True)
class CheckRecord:
    name: str
    max_residual: Optional[float]
    tolerance: float
    status: str
    points_evaluated: int

    @property
    def passed(self):
        return self.status != FAIL


@dataclass
class CheckReport:
    problem: str
    family: str
    dim: int
    lam: float
    checks: list
    profile: dict
    constancy: dict = field(default_factory=dict)
    notes: list = field(default_factory=list)

    @property
    def failed(self):
        return [c.name for c in self.checks if not c.passed]

    @property
    def passed(self):
        return not self.failed

    def check(self, name):
        for record in self.checks:
            if record.name == name:
                return record
        raise KeyError(name)


@dataclass(frozen=True)
class Recurrence:
    applicable: bool
    theta: Optional[np.ndarray] = None
    residual: Optional[float] = None


@dataclass
class PointData:
    point: np.ndarray
    metric: np.ndarray
    ricci_op: np.ndarray
    hessian_op: np.ndarray
    gradient: np.ndarray
    value: float
    scalar_curvature: float
    grad_norm_sq: float
    hess_norm_sq: float
    nabla_ricci_max: float
    residuals: dict
    recurrence: Recurrence


def _scaled(residual, *terms):
    size = max([1.0] + [float(np.max(np.abs(t))) if np.size(t) else 0.0 for t in terms])
    return float(np.max(np.abs(residual))) / size if np.size(residual) else 0.0


def _soliton_matrix(problem, pack, sp):
    return sp.hessian + pack.ricci - problem.lam * pack.metric


def _curvature_gradient(pack, sp):
    lhs = np.einsum('abcz,c->abz', pack.riemann, sp.gradient)
    rhs = pack.nabla_ricci - np.swapaxes(pack.nabla_ricci, 0, 1)
    return _scaled(lhs - rhs, lhs, rhs)


def _ricci_transport(pack, sp):
    nabla_ric_op = np.einsum('ia,kaj->kij', pack.inverse_metric, pack.nabla_ricci)
    lhs = np.einsum('k,kij->ij', sp.gradient, nabla_ric_op) + pack.ricci_op @ sp.hessian_op
    rhs = np.einsum('kabc,b,c->ka', pack.riemann_op, sp.gradient, sp.gradient)
    return _scaled(lhs - rhs, lhs, rhs)


def _codazzi(pack):
    d = len(pack.point)
    nabla_s = pack.nabla_ricci - np.einsum(
        'k,ij->kij', pack.scalar_curvature_gradient, pack.metric) / (2.0 * (d - 1))
    return _scaled(nabla_s - np.swapaxes(nabla_s, 0, 1), nabla_s)


def _bochner(pack, sp):
    lhs = 0.5 * sp.laplacian_grad_norm_sq
    ric_term = float(sp.gradient @ pack.ricci @ sp.gradient)
    transport = float(sp.grad_laplacian @ pack.metric @ sp.gradient)
    rhs = sp.hess_norm_sq + ric_term + transport
    return _scaled(lhs - rhs, lhs, sp.hess_norm_sq, ric_term, transport)


def _rigid_eigenstructure(problem, pack, sp, tol):
    lam = problem.lam
    ric = speclin.operator_profile(pack.ricci_op, tol)
    hess = speclin.operator_profile(sp.hessian_op, tol)
    residual = max(_scaled(pack.ricci_op @ sp.hessian_op, pack.ricci_op, sp.hessian_op),
                   _scaled(sp.hessian_op @ pack.ricci_op, pack.ricci_op, sp.hessian_op))
    for profile in (ric, hess):
        for z in profile.spectrum:
            residual = max(residual, min(abs(z - 0.0), abs(z - lam)) / max(1.0, abs(lam)))
    return residual + abs(ric.rank + hess.rank - len(pack.point))


def _recurrence(pack, sp, causal_tol):
    if speclin.causal_type(sp.gradient, pack.metric, causal_tol) != speclin.NULL:
        return Recurrence(False)
    df = sp.differential
    u = df / float(df @ df)
    theta = u @ sp.hessian
    residual = sp.hessian_op - np.outer(sp.gradient, theta)
    return Recurrence(True, theta, _scaled(residual, sp.hessian_op))


def _field_checks(problem, geo, pack, f_jet, sp):
    killing = parallel_grad = parallel = 0.0
    for components in problem.killing_fields:
        residuals = geo.field_residuals(components)
        killing = max(killing, _scaled(residuals.killing, geo.metric_jet.value))
        h, grad_h = geo.gradient_of_derivative(components, f_jet)
        transport = geo.parallel_residual_of(grad_h)
        derivative = float(np.array(h.gradient().value) @ sp.gradient)
        field_value = np.array(geo.vector_jet(components).value)
        # grad f (X f) = lambda X f - rho(X, grad f) for Killing X.
        expected = problem.lam * float(h.value) - float(field_value @ pack.ricci @ sp.gradient)
        balance = derivative - expected
        parallel_grad = max(parallel_grad, _scaled(transport, grad_h.value),
                            _scaled(balance, derivative))
    for components in problem.parallel_fields:
        parallel = max(parallel, _scaled(geo.field_residuals(components).parallel))
    return killing, parallel_grad, parallel


def evaluate_point(problem, point, rigid=False, rank_tol=speclin.DEFAULT_TOL,
                   causal_tol=1e-9):
    """Every pointwise statistic the checks need, from one set of jets."""
    point = np.asarray(point, dtype=float)
    try:
        geo = PointGeometry(problem.metric, point)
        pack = geo.curvature_pack()
        f_jet = geo.scalar_jet(problem.potential)
        sp = geo.scalar_pack(f_jet)
        d = problem.dim
        lam = problem.lam
        soliton = _soliton_matrix(problem, pack, sp)
        ric_grad = pack.ricci_op @ sp.gradient
        trace = lam * (d * lam - pack.scalar_curvature) - sp.hess_norm_sq
        scalar_gradient = pack.scalar_curvature_gradient - 2.0 * pack.ricci @ sp.gradient
        trace_free = pack.ricci - pack.scalar_curvature / d * pack.metric
        steady = max(_scaled(sp.hessian_op + pack.ricci_op, sp.hessian_op, pack.ricci_op),
                     _scaled(sp.hessian_op @ sp.gradient, sp.gradient))
        killing, killing_gradient, parallel = _field_checks(problem, geo, pack, f_jet, sp)
        residuals = {
            'soliton_residual': _scaled(soliton, sp.hessian, pack.ricci, lam * pack.metric),
            'ric_grad_f': _scaled(ric_grad, pack.ricci_op),
            'curvature_gradient_identity': _curvature_gradient(pack, sp),
            'ricci_transport_identity': _ricci_transport(pack, sp),
            'trace_identity': _scaled(trace, sp.hess_norm_sq, lam * lam * d),
            'bochner': _bochner(pack, sp),
            'scalar_gradient_identity': _scaled(scalar_gradient, pack.scalar_curvature_gradient),
            'schouten_codazzi': _codazzi(pack),
            'killing_fields': killing,
            'killing_gradient_parallel': killing_gradient,
            'parallel_fields': parallel,
            'isotropic_einstein': _scaled(trace_free, pack.ricci),
            'steady_structure': steady,
        }
        if rigid:
            residuals['rigid_eigenstructure'] = _rigid_eigenstructure(problem, pack, sp, rank_tol)
        recurrence = _recurrence(pack, sp, causal_tol)
    except EvaluationError as exc:
        raise exc.with_point(point)
    return PointData(
        point=point, metric=pack.metric, ricci_op=pack.ricci_op, hessian_op=sp.hessian_op,
        gradient=sp.gradient, value=float(sp.value), scalar_curvature=pack.scalar_curvature,
        grad_norm_sq=sp.grad_norm_sq, hess_norm_sq=sp.hess_norm_sq,
        nabla_ricci_max=float(np.max(np.abs(pack.nabla_ricci))), residuals=residuals,
        recurrence=recurrence)


def evaluate_points(problem, points, rigid=False, rank_tol=speclin.DEFAULT_TOL,
                    causal_tol=1e-9, n_jobs=1):
    """Per-point data in input order, fanned out over joblib workers."""
    points = [np.asarray(p, dtype=float) for p in points]
    logger.info('evaluating %d points of %s with n_jobs=%d', len(points), problem.family, n_jobs)
    return Parallel(n_jobs=n_jobs)(
        delayed(evaluate_point)(problem, p, rigid, rank_tol, causal_tol) for p in points)


def soliton_residual(problem, point):
    """``Hess f + rho - lambda g`` at ``point``."""
    point = np.asarray(point, dtype=float)
    try:
        geo = PointGeometry(problem.metric, point)
        pack = geo.curvature_pack()
        return _soliton_matrix(problem, pack, geo.scalar_pack(problem.potential))
    except EvaluationError as exc:
        raise exc.with_point(point)


def schouten_codazzi_residual(problem, point):
    return _codazzi(PointGeometry(problem.metric, point).curvature_pack())


def recurrence_theta(problem, point, causal_tol=1e-9):
    """theta_i = g(U, H_f e_i) with U = df/|df|^2, and max |H_f e_i - theta_i grad f|."""
    geo = PointGeometry(problem.metric, point)
    return _recurrence(geo.curvature_pack(), geo.scalar_pack(problem.potential), causal_tol)


def scalar_gradient_identity(problem, point):
    return evaluate_point(problem, point).residuals['scalar_gradient_identity']


def killing_checks(problem, point):
    """(Killing residual, grad{X(f)} transport residual) over the problem's Killing fields."""
    residuals = evaluate_point(problem, point).residuals
    return residuals['killing_fields'], residuals['killing_gradient_parallel']


def steady_structure(problem, point):
    return evaluate_point(problem, point).residuals['steady_structure']


def rigid_eigenstructure(problem, point, tol=speclin.DEFAULT_TOL):
    return evaluate_point(problem, point, rigid=True, rank_tol=tol).residuals[
        'rigid_eigenstructure']


def _spread(values):
    values = np.asarray(values, dtype=float)
    return float(np.ptp(values)) / max(1.0, float(np.max(np.abs(values))))


def _record(name, residual, tol, points, applicable=True, asserted=True):
    if not applicable:
        return CheckRecord(name, None, tol, NOT_APPLICABLE, 0)
    if not asserted:
        return CheckRecord(name, residual, tol, INFO, points)
    ok = residual is not None and np.isfinite(residual) and residual < tol
    return CheckRecord(name, residual, tol, PASS if ok else FAIL, points)


def _max(samples, name):
    return max(s.residuals[name] for s in samples)


def hamilton_identity(problem, samples):
    """Spread of tau + |grad f|^2 - 2 lambda f over the samples."""
    return _spread([s.scalar_curvature + s.grad_norm_sq - 2.0 * problem.lam * s.value
                    for s in samples])


def identity_suite(problem, samples, tolerances, expected=None):
    """Soliton equation, curvature identities and the structure checks, in CHECK_ORDER."""
    expected = expected or ExpectedProfile(steady=problem.lam == 0.0)
    tolerances = {**default_tolerances(), **(tolerances or {})}
    lam = problem.lam
    n = len(samples)
    steady = lam == 0.0
    potential_spread = _spread([s.grad_norm_sq - 2.0 * lam * s.value for s in samples])
    hamilton = hamilton_identity(problem, samples)
    isotropic = all(abs(s.grad_norm_sq) < tolerances['isotropic_einstein'] for s in samples)
    symmetric_expected = expected.locally_symmetric or expected.rigid
    recurrent = [s.recurrence.residual for s in samples if s.recurrence.applicable]

    def tol(name):
        return tolerances[name]

    return [
        _record('soliton_residual', _max(samples, 'soliton_residual'), tol('soliton_residual'), n),
        _record('ric_grad_f', _max(samples, 'ric_grad_f'), tol('ric_grad_f'), n),
        _record('grad_norm_spread', potential_spread, tol('grad_norm_spread'), n),
        _record('curvature_gradient_identity', _max(samples, 'curvature_gradient_identity'),
                tol('curvature_gradient_identity'), n),
        _record('ricci_transport_identity', _max(samples, 'ricci_transport_identity'),
                tol('ricci_transport_identity'), n),
        _record('trace_identity', _max(samples, 'trace_identity'), tol('trace_identity'), n),
        _record('steady_hessian_norm', max(abs(s.hess_norm_sq) for s in samples),
                tol('steady_hessian_norm'), n, applicable=steady),
        _record('steady_grad_norm_spread', _spread([s.grad_norm_sq for s in samples]),
                tol('steady_grad_norm_spread'), n, applicable=steady),
        _record('bochner', _max(samples, 'bochner'), tol('bochner'), n),
        _record('hamilton_identity', hamilton, tol('hamilton_identity'), n),
        _record('scalar_gradient_identity', _max(samples, 'scalar_gradient_identity'),
                tol('scalar_gradient_identity'), n),
        _record('scalar_curvature_spread', _spread([s.scalar_curvature for s in samples]),
                tol('scalar_curvature_spread'), n,
                asserted=expected.scalar_curvature is not None),
        _record('schouten_codazzi', _max(samples, 'schouten_codazzi'), tol('schouten_codazzi'), n,
                asserted=symmetric_expected),
        _record('killing_fields', _max(samples, 'killing_fields'), tol('killing_fields'), n,
                applicable=bool(problem.killing_fields)),
        _record('killing_gradient_parallel', _max(samples, 'killing_gradient_parallel'),
                tol('killing_gradient_parallel'), n, applicable=bool(problem.killing_fields)),
        _record('parallel_fields', _max(samples, 'parallel_fields'), tol('parallel_fields'), n,
                applicable=bool(problem.parallel_fields)),
        _record('isotropic_einstein', _max(samples, 'isotropic_einstein'),
                tol('isotropic_einstein'), n, applicable=not steady and isotropic),
        _record('steady_structure', _max(samples, 'steady_structure'), tol('steady_structure'), n,
                applicable=steady),
        _record('rigid_eigenstructure',
                _max(samples, 'rigid_eigenstructure') if expected.rigid else None,
                tol('rigid_eigenstructure'), n, applicable=expected.rigid),
        _record('recurrence_theta', max(recurrent) if recurrent else None,
                tol('recurrence_theta'), len(recurrent), applicable=bool(recurrent)),
    ]


@dataclass(frozen=True)
class RicciProfile:
    ric: list
    hessian: list
    stability: float


def ricci_profile(samples, tol=speclin.DEFAULT_TOL):
    """Operator profiles of Ric and H_f at every point plus their spread across points."""
    ric = [speclin.operator_profile(s.ricci_op, tol) for s in samples]
    hess = [speclin.operator_profile(s.hessian_op, tol) for s in samples]
    stability = 0.0
    for profiles in (ric, hess):
        first = profiles[0]
        for profile in profiles[1:]:
            stability = max(stability,
                            speclin.spectrum_distance(first.spectrum, profile.spectrum))
            stability += abs(first.rank - profile.rank)
            stability += float(first.nilpotency_index != profile.nilpotency_index)
    return RicciProfile(ric, hess, stability)


def expected_profile_mismatches(problem, expected, samples, profile, tol, causal_tol):
    """(residual, messages) comparing measurements against an ExpectedProfile."""
    residual = 0.0
    messages = []
    lam = problem.lam
    for sample, ric in zip(samples, profile.ric):
        where = tuple(round(float(v), 6) for v in sample.point)
        if expected.grad_causal_type is not None:
            kind = speclin.causal_type(sample.gradient, sample.metric, causal_tol)
            if kind != expected.grad_causal_type:
                residual += 1.0
                messages.append(f'grad f is {kind}, expected {expected.grad_causal_type} at {where}')
        if expected.ric_kind == 'zero' and ric.nilpotency_index != 0:
            residual += 1.0
            messages.append(f'Ric is not zero at {where}')
        elif expected.ric_kind == 'nilpotent' and (
                ric.nilpotency_index != expected.ric_nilpotency or ric.rank != expected.ric_rank):
            residual += 1.0
            messages.append(f'Ric has nilpotency {ric.nilpotency_index} and rank {ric.rank}, '
                            f'expected {expected.ric_nilpotency} and {expected.ric_rank} at {where}')
        elif expected.ric_kind == 'zero_lambda' and not (
                speclin.spectrum_within(ric.spectrum, (0.0, lam), tol)
                and ric.rank == expected.ric_rank):
            residual += 1.0
            messages.append(f'Ric spectrum is not within {{0, lambda}} with rank '
                            f'{expected.ric_rank} at {where}')
        for name, value in (('grad_norm_sq', sample.grad_norm_sq),
                            ('hess_norm_sq', sample.hess_norm_sq),
                            ('scalar_curvature', sample.scalar_curvature)):
            target = getattr(expected, name)
            if target is not None:
                residual = max(residual, abs(value - target) / max(1.0, abs(target)))
        if expected.locally_symmetric:
            residual = max(residual, sample.nabla_ricci_max)
    return residual, messages


def _asserts_anything(expected):
    return any(getattr(expected, name) is not None for name in (
        'grad_causal_type', 'ric_kind', 'grad_norm_sq', 'hess_norm_sq', 'scalar_curvature'))


def _spectrum(profile):
    return [[float(z.real), float(z.imag)] for z in profile.spectrum]


def summary_profile(samples, profile, causal_tol):
    first = samples[0]
    return {
        'ric_spectrum': _spectrum(profile.ric[0]),
        'ric_rank': profile.ric[0].rank,
        'ric_nilpotency': profile.ric[0].nilpotency_index,
        'hf_spectrum': _spectrum(profile.hessian[0]),
        'grad_f_causal_type': speclin.causal_type(first.gradient, first.metric, causal_tol),
        'grad_f_norm_sq': first.grad_norm_sq,
    }


def family_note(problem, grid_size=5, tol=speclin.DEFAULT_TOL):
    if problem.walker_phi is None:
        return None
    if problem.family == 'cahen_wallach':
        grid = tensor_grid((-1.0, 1.0), (-1.0, 1.0), grid_size)
    else:
        grid = tensor_grid(problem.box_for('x'), problem.box_for('y'), grid_size)
    match = match_homogeneous_family(problem.walker_phi, grid, problem.metric.params, tol)
    if match.family is None:
        return 'walker form: phi matches no homogeneous family template'
    detail = ', '.join(f'{k}={v:.12g}' for k, v in sorted(match.params.items()))
    return f'walker form: phi matches {match.family}' + (f' ({detail})' if detail else '')


def run_checks(problem, expected, points, tolerances, rank_tol=speclin.DEFAULT_TOL,
               causal_tol=1e-9, n_jobs=1, grid_size=5):
    """Full CheckReport for a problem on the given sample points."""
    samples = evaluate_points(problem, points, expected.rigid, rank_tol, causal_tol, n_jobs)
    tolerances = {**default_tolerances(), **(tolerances or {})}
    checks = identity_suite(problem, samples, tolerances, expected)
    profile = ricci_profile(samples, rank_tol)
    checks.append(_record('ricci_profile', profile.stability, tolerances['ricci_profile'],
                          len(samples), asserted=expected.ric_kind is not None))
    mismatch, messages = expected_profile_mismatches(problem, expected, samples, profile,
                                                     rank_tol, causal_tol)
    checks.append(_record('expected_profile', mismatch, tolerances['expected_profile'],
                          len(samples), applicable=_asserts_anything(expected)))
    lam = problem.lam
    constancy = {
        'scalar_curvature': _spread([s.scalar_curvature for s in samples]),
        'grad_norm_sq': _spread([s.grad_norm_sq for s in samples]),
        'grad_norm_sq_minus_2_lambda_f': _spread(
            [s.grad_norm_sq - 2.0 * lam * s.value for s in samples]),
    }
    notes = list(SIGN_NOTES) + list(problem.notes) + messages[:10]
    note = family_note(problem, grid_size, rank_tol)
    if note:
        notes.append(note)
    report = CheckReport(problem.description, problem.family, problem.dim, lam, checks,
                         summary_profile(samples, profile, causal_tol), constancy, notes)
    logger.info('%s: %d checks, failed: %s', problem.family, len(checks),
                ', '.join(report.failed) or 'none')
    return report
