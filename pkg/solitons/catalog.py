"""Concrete metric/potential families with their expected invariants.

Every family returns a bound ``SolitonProblem`` (metric, potential, lambda and a
sampling box that avoids singularities) together with an ``ExpectedProfile``.
Boxes are swept at construction: metric degeneracy or a domain error anywhere
on the sweep raises ``CatalogError``.
"""
import itertools
import logging
import math
import re
from dataclasses import dataclass, field, replace
from typing import Any, Optional

import numpy as np

from .exceptions import CatalogError, EvaluationError, ExprSyntaxError
from .exprlang import Binary, DoubleIntegral, Evaluator, ExprKernel, bind, names, parse, to_text
from .geometry import MetricSpec, check_nondegenerate
from .speclin import NULL, SPACELIKE, TIMELIKE, ZERO

logger = logging.getLogger(__name__)

WALKER_COORDINATES = ('t', 'x', 'y')
WALKER_BOX = ((-1.0, 1.0), (-1.0, 1.0), (-1.0, 1.0))
SWEEP_SEED = 0
SWEEP_RANDOM_POINTS = 8
MAX_CORNER_DIM = 4

COEFFICIENT_NOTE = ('potential coefficient follows the soliton ODE: gamma\'\' = phi_xx/2 '
                    '(quadratic coefficient kappa/2); a factor 1/4 leaves a nonzero yy residual')
PARALLEL_NOTE = ('the null parallel field is d/dt; grad f = gamma\'(y) d/dt is recurrent, '
                 'with nabla grad f = H_f')


@dataclass(frozen=True)
class ExpectedProfile:
    """What the measured profile of a family must show; None means not asserted."""
    steady: bool
    grad_causal_type: Optional[str] = None
    ric_kind: Optional[str] = None
    ric_rank: Optional[int] = None
    ric_nilpotency: Optional[int] = None
    grad_norm_sq: Optional[float] = None
    hess_norm_sq: Optional[float] = None
    scalar_curvature: Optional[float] = None
    strict_walker: bool = False
    locally_symmetric: bool = False
    rigid: bool = False

    def __post_init__(self):
        if self.ric_kind == 'nilpotent' and self.ric_nilpotency in (None, 0):
            raise CatalogError('a nilpotent Ricci profile needs an index of at least 1')
        if self.ric_kind == 'zero' and self.ric_rank not in (None, 0):
            raise CatalogError('a zero Ricci profile cannot have positive rank')


@dataclass(frozen=True)
class SolitonProblem:
    family: str
    metric: MetricSpec
    potential: Any
    lam: float
    box: tuple
    description: str
    params: dict = field(default_factory=dict)
    walker_phi: Any = None
    killing_fields: tuple = ()
    parallel_fields: tuple = ()
    notes: tuple = ()

    @property
    def coordinates(self):
        return self.metric.coordinates

    @property
    def dim(self):
        return self.metric.dim

    def box_for(self, name):
        return self.box[self.coordinates.index(name)]


@dataclass(frozen=True)
class Family:
    builder: Any
    defaults: dict
    description: str


FAMILIES = {}


def family(name, description, **defaults):
    def register(builder):
        FAMILIES[name] = Family(builder, defaults, description)
        return builder
    return register


def _expr(text, coordinates, params, what):
    try:
        return bind(parse(str(text)), coordinates, params)
    except (ExprSyntaxError, EvaluationError) as exc:
        raise CatalogError(f'{what}: {exc}') from exc


def _y_function(text, what):
    node = parse(str(text))
    extra = names(node) - {'y'}
    if extra:
        raise CatalogError(f'{what} must be a function of y only (found {", ".join(sorted(extra))})')
    return node


def _number(params, key, *, nonzero=False, positive=False):
    try:
        value = float(params[key])
    except (TypeError, ValueError) as exc:
        raise CatalogError(f'parameter {key!r} must be a number') from exc
    if not math.isfinite(value):
        raise CatalogError(f'parameter {key!r} must be finite')
    if nonzero and value == 0.0:
        raise CatalogError(f'parameter {key!r} must be nonzero')
    if positive and value <= 0.0:
        raise CatalogError(f'parameter {key!r} must be positive')
    return value


def _walker_metric(phi, params):
    return MetricSpec.from_entries(
        WALKER_COORDINATES, {('y', 't'): '1', ('x', 'x'): '1', ('y', 'y'): phi}, params)


def _walker_fields():
    # d/dt is parallel (hence Killing) for every strict Walker metric.
    return (('1', '0', '0'),)


def _y_box_avoiding(root, box):
    """Shift a y-interval of the same width so it stays clear of ``root``."""
    lo, hi = box
    if root is None or not lo - 0.25 <= root <= hi + 0.25:
        return box
    width = hi - lo
    return (root + 0.25, root + 0.25 + width)


def _potential_kernel(text, params):
    node = bind(parse(text), ('y',), params)
    return ExprKernel(node, 'y', tuple(sorted(params.items())))


@family('minkowski_rigid', 'flat metric of index nu with f = (lambda/2) * signed squared norm',
        dim=3, nu=1, **{'lambda': 0.7})
def minkowski_rigid(params, box):
    dim = int(_number(params, 'dim'))
    nu = int(_number(params, 'nu'))
    lam = _number(params, 'lambda')
    if nu not in (0, 1) or not 1 <= dim <= 8:
        raise CatalogError('minkowski_rigid needs 1 <= dim <= 8 and nu in {0, 1}')
    spatial = dim - nu
    coordinates = (('t',) if nu else ()) + tuple(f'x{k}' for k in range(1, spatial + 1))
    signs = [-1.0] * nu + [1.0] * spatial
    entries = {(c, c): repr(s) for c, s in zip(coordinates, signs)}
    terms = ' + '.join(f'({s!r})*{c}^2' for c, s in zip(coordinates, signs))
    metric = MetricSpec.from_entries(coordinates, entries, {'lam': lam})
    potential = _expr(f'0.5*lam*({terms})', coordinates, metric.params, 'potential')
    translations = tuple(tuple('1' if k == j else '0' for k in range(dim)) for j in range(dim))
    steady = lam == 0.0
    expected = ExpectedProfile(
        steady=steady, grad_causal_type=ZERO if steady else None, ric_kind='zero', ric_rank=0,
        ric_nilpotency=0, grad_norm_sq=0.0 if steady else None, hess_norm_sq=dim * lam ** 2,
        scalar_curvature=0.0, locally_symmetric=True, rigid=not steady)
    problem = SolitonProblem(
        'minkowski_rigid', metric, potential, lam, ((-1.0, 1.0),) * dim,
        f'flat R^({nu},{spatial}) with rigid Gaussian potential, lambda={lam!r}',
        killing_fields=translations, parallel_fields=translations)
    return problem, expected


@family('timelike_linear', 'flat -dt^2+dx^2+dy^2 with steady potential f = a*t', a=1.0)
def timelike_linear(params, box):
    a = _number(params, 'a', nonzero=True)
    coordinates = ('t', 'x', 'y')
    metric = MetricSpec.from_entries(
        coordinates, {('t', 't'): '-1', ('x', 'x'): '1', ('y', 'y'): '1'}, {'a': a})
    potential = _expr('a*t', coordinates, metric.params, 'potential')
    fields = (('1', '0', '0'), ('0', '1', '0'), ('0', '0', '1'))
    expected = ExpectedProfile(
        steady=True, grad_causal_type=TIMELIKE, ric_kind='zero', ric_rank=0, ric_nilpotency=0,
        grad_norm_sq=-a ** 2, hess_norm_sq=0.0, scalar_curvature=0.0, locally_symmetric=True)
    problem = SolitonProblem(
        'timelike_linear', metric, potential, 0.0, ((-1.0, 1.0),) * 3,
        f'flat Lorentzian product with timelike linear potential, a={a!r}',
        killing_fields=fields + (('0', '-y', 'x'),), parallel_fields=fields)
    return problem, expected


@family('sphere_rigid', 'round 2-sphere of Einstein constant lambda times a line, f = (lambda/2) x^2',
        **{'lambda': 0.5})
def sphere_rigid(params, box):
    lam = _number(params, 'lambda', positive=True)
    coordinates = ('theta', 'phi', 'x')
    metric = MetricSpec.from_entries(
        coordinates,
        {('theta', 'theta'): '1/lam', ('phi', 'phi'): 'sin(theta)^2/lam', ('x', 'x'): '1'},
        {'lam': lam})
    potential = _expr('0.5*lam*x^2', coordinates, metric.params, 'potential')
    expected = ExpectedProfile(
        steady=False, grad_causal_type=SPACELIKE, ric_kind='zero_lambda', ric_rank=2,
        hess_norm_sq=lam ** 2, scalar_curvature=2.0 * lam, locally_symmetric=True, rigid=True)
    box = ((0.3, math.pi - 0.3), (0.0, 2.0 * math.pi), (0.5, 1.5))
    problem = SolitonProblem(
        'sphere_rigid', metric, potential, lam, box,
        f'S^2 x R rigid shrinking soliton, lambda={lam!r}',
        killing_fields=(('0', '1', '0'), ('0', '0', '1')), parallel_fields=(('0', '0', '1'),))
    return problem, expected


def _kappas(params):
    keys = sorted((k for k in params if re.fullmatch(r'kappa\d*', k)),
                  key=lambda k: int(k[5:] or 0))
    if 'kappa' in params and len(keys) > 1:
        raise CatalogError("give either 'kappa' or 'kappa1'..'kappaN', not both")
    values = [_number(params, k) for k in keys]
    if not 1 <= len(values) <= 6:
        raise CatalogError('cahen_wallach takes between 1 and 6 kappa parameters')
    return values


@family('cahen_wallach', 'plane wave 2dtdy + (sum kappa_i x_i^2) dy^2 + sum dx_i^2, steady',
        kappa=1.0, a0=0.0, a1=0.0)
def cahen_wallach(params, box):
    kappas = _kappas(params)
    a0, a1 = _number(params, 'a0'), _number(params, 'a1')
    n = len(kappas)
    xs = ('x',) if n == 1 else tuple(f'x{k}' for k in range(1, n + 1))
    coordinates = ('t', 'y') + xs
    values = {f'kappa{k}': v for k, v in enumerate(kappas, 1)}
    total = sum(kappas)
    if total == 0.0:
        raise CatalogError('cahen_wallach needs a nonzero sum of kappa values')
    values.update(a0=a0, a1=a1, K=total)
    entries = {('y', 't'): '1', ('y', 'y'): ' + '.join(
        f'kappa{k}*{x}^2' for k, x in enumerate(xs, 1))}
    entries.update({(x, x): '1' for x in xs})
    metric = MetricSpec.from_entries(coordinates, entries, values)
    potential = _expr('a0 + a1*y + 0.5*K*y^2', coordinates, metric.params, 'potential')
    box = [(-1.0, 1.0)] * len(coordinates)
    box[1] = _y_box_avoiding(-a1 / total, box[1])
    zero = ('0',) * n
    expected = ExpectedProfile(
        steady=True, grad_causal_type=NULL, ric_kind='nilpotent', ric_rank=1, ric_nilpotency=2,
        grad_norm_sq=0.0, hess_norm_sq=0.0, scalar_curvature=0.0, strict_walker=True,
        locally_symmetric=True)
    walker_phi = None
    if n == 1:
        walker_phi = _expr(f'{kappas[0]!r}*x^2', WALKER_COORDINATES, {}, 'phi')
    problem = SolitonProblem(
        'cahen_wallach', metric, potential, 0.0, tuple(box),
        f'Cahen-Wallach space kappa={kappas!r}, a0={a0!r}, a1={a1!r}', params=dict(params),
        walker_phi=walker_phi, killing_fields=(('1', '0') + zero, ('0', '1') + zero),
        parallel_fields=(('1', '0') + zero,), notes=(COEFFICIENT_NOTE, PARALLEL_NOTE))
    return problem, expected


def _walker_problem(name, phi, potential, lam, params, description, expected, *, box=WALKER_BOX,
                    killing=(), notes=()):
    metric = _walker_metric(phi, params)
    phi_node = _expr(phi, WALKER_COORDINATES, params, 'phi')
    if not isinstance(potential, str):
        potential = bind(potential, WALKER_COORDINATES, params)
    else:
        potential = _expr(potential, WALKER_COORDINATES, params, 'potential')
    problem = SolitonProblem(
        name, metric, potential, lam, tuple(box), description, params=dict(params),
        walker_phi=phi_node, killing_fields=_walker_fields() + tuple(killing),
        parallel_fields=_walker_fields(), notes=tuple(notes))
    return problem, expected


@family('walker3', 'raw strict Walker metric 2dtdy + dx^2 + phi(x,y) dy^2 with a given potential',
        phi='exp(x)', potential='x', **{'lambda': 0.0})
def walker3(params, box):
    phi, potential = str(params['phi']), str(params['potential'])
    lam = _number(params, 'lambda')
    extra = (names(parse(phi)) | names(parse(potential))) - set(WALKER_COORDINATES)
    if extra:
        raise CatalogError(f'walker3 expressions use unknown names: {", ".join(sorted(extra))}')
    expected = ExpectedProfile(steady=lam == 0.0, scalar_curvature=0.0, strict_walker=True)
    return _walker_problem('walker3', phi, potential, lam, {},
                           f'Walker metric phi={phi}, f={potential}, lambda={lam!r}', expected)


def _nonvanishing(node, interval, params=None, samples=33):
    ys = np.linspace(interval[0], interval[1], samples)[:, None]
    values = Evaluator.at_samples(('y',), ys, params)(node).value
    return bool(np.min(np.abs(np.broadcast_to(values, (samples,)))) > 1e-6)


def _walker_box(y_box):
    return WALKER_BOX[:2] + (tuple(y_box),)


def _slope_nonvanishing(potential, params, interval, samples=9):
    for y in np.linspace(interval[0], interval[1], samples):
        jet = Evaluator(WALKER_COORDINATES, (0.0, 0.0, y), 1, params)(potential)
        if abs(jet.derivative(2)) <= 1e-6:
            return False
    return True


@family('thm12_case1', 'phi = a(y) e^(alpha x)/alpha^2 + x b(y) + c(y), f = alpha x + gamma(y)',
        alpha=1.0, a='1', b='y', c='0')
def thm12_case1(params, box):
    alpha = _number(params, 'alpha', nonzero=True)
    a, b, c = (_y_function(params[k], k) for k in ('a', 'b', 'c'))
    values = {'alpha': alpha}
    phi = f'{to_text(a)}*exp(alpha*x)/alpha^2 + x*{to_text(b)} + {to_text(c)}'
    y_box = _interval(box, 'y', WALKER_BOX[2])
    y0 = 0.5 * sum(y_box)
    kernel = _potential_kernel(f'-0.5*alpha*{to_text(b)}', values)
    potential = Binary('+', parse('alpha*x'), DoubleIntegral(kernel, 'y', y0))
    nilpotent = _nonvanishing(a, y_box)
    expected = ExpectedProfile(
        steady=True, grad_causal_type=SPACELIKE, ric_kind='nilpotent' if nilpotent else None,
        ric_rank=1 if nilpotent else None, ric_nilpotency=2 if nilpotent else None,
        grad_norm_sq=alpha ** 2, hess_norm_sq=0.0, scalar_curvature=0.0, strict_walker=True)
    return _walker_problem(
        'thm12_case1', phi, potential, 0.0, values,
        f'spacelike steady Walker soliton alpha={alpha!r}, a={to_text(a)}, b={to_text(b)}, '
        f'c={to_text(c)}', expected, box=_walker_box(y_box))


@family('thm12_case2', 'phi = x^2 a(y) + x b(y) + c(y), f = a1 y + gamma(y) with gamma\'\' = a',
        a='1', b='0', c='0', a1=2.0)
def thm12_case2(params, box):
    a, b, c = (_y_function(params[k], k) for k in ('a', 'b', 'c'))
    a1 = _number(params, 'a1')
    values = {'a1': a1}
    phi = f'x^2*{to_text(a)} + x*{to_text(b)} + {to_text(c)}'
    y_box = _interval(box, 'y', WALKER_BOX[2])
    y0 = 0.5 * sum(y_box)
    kernel = ExprKernel(a, 'y')
    potential = Binary('+', parse('a1*y'), DoubleIntegral(kernel, 'y', y0))
    nilpotent = _nonvanishing(a, y_box)
    bound = bind(potential, WALKER_COORDINATES, values)
    null = _slope_nonvanishing(bound, values, y_box)
    expected = ExpectedProfile(
        steady=True, grad_causal_type=NULL if null else None,
        ric_kind='nilpotent' if nilpotent else None, ric_rank=1 if nilpotent else None,
        ric_nilpotency=2 if nilpotent else None, grad_norm_sq=0.0, hess_norm_sq=0.0,
        scalar_curvature=0.0, strict_walker=True)
    return _walker_problem(
        'thm12_case2', phi, bound, 0.0, values,
        f'isotropic steady Walker soliton a={to_text(a)}, b={to_text(b)}, c={to_text(c)}, '
        f'a1={a1!r}', expected, box=_walker_box(y_box), notes=(COEFFICIENT_NOTE,))


@family('N_b', 'phi = e^(b x)/b^2, f = b x (spacelike gradient)', b=1.0)
def n_b(params, box):
    b = _number(params, 'b', nonzero=True)
    expected = ExpectedProfile(
        steady=True, grad_causal_type=SPACELIKE, ric_kind='nilpotent', ric_rank=1,
        ric_nilpotency=2, grad_norm_sq=b ** 2, hess_norm_sq=0.0, scalar_curvature=0.0,
        strict_walker=True)
    return _walker_problem('N_b', 'exp(b*x)/b^2', 'b*x', 0.0, {'b': b},
                           f'homogeneous Walker soliton N_b, b={b!r}', expected,
                           killing=(('0', '0', '1'),))


@family('P_c', 'phi = x^2 alpha(y)/2 with alpha = 4/(k - c y)^2, f = a1 y + gamma(y)',
        c=1.0, k=3.0, a1=1.0)
def p_c(params, box):
    c = _number(params, 'c', nonzero=True)
    k = _number(params, 'k')
    a1 = _number(params, 'a1')
    y_box = _interval(box, 'y', WALKER_BOX[2])
    lo, hi = y_box
    if min(k - c * lo, k - c * hi) <= 0.0:
        raise CatalogError(f'P_c needs k - c*y > 0 on the box y in [{lo}, {hi}]')
    values = {'c': c, 'k': k, 'a1': a1}
    y0 = 0.5 * (lo + hi)
    kernel = _potential_kernel('2/(k - c*y)^2', {'c': c, 'k': k})
    potential = bind(Binary('+', parse('a1*y'), DoubleIntegral(kernel, 'y', y0)),
                     WALKER_COORDINATES, values)
    null = _slope_nonvanishing(potential, values, y_box)
    expected = ExpectedProfile(
        steady=True, grad_causal_type=NULL if null else None, ric_kind='nilpotent', ric_rank=1,
        ric_nilpotency=2, grad_norm_sq=0.0, hess_norm_sq=0.0, scalar_curvature=0.0,
        strict_walker=True)
    return _walker_problem('P_c', '2*x^2/(k - c*y)^2', potential, 0.0, values,
                           f'homogeneous Walker soliton P_c, c={c!r}, k={k!r}, a1={a1!r}',
                           expected, box=_walker_box(y_box), notes=(COEFFICIENT_NOTE,))


def _cahen_wallach_walker(sign, params):
    a1 = _number(params, 'a1')
    name = 'CWplus' if sign > 0 else 'CWminus'
    phi = 'x^2' if sign > 0 else '-x^2'
    potential = f'{0.5 * sign!r}*y^2 + a1*y'
    box = list(WALKER_BOX)
    box[2] = _y_box_avoiding(-a1 * sign, box[2])
    expected = ExpectedProfile(
        steady=True, grad_causal_type=NULL, ric_kind='nilpotent', ric_rank=1, ric_nilpotency=2,
        grad_norm_sq=0.0, hess_norm_sq=0.0, scalar_curvature=0.0, strict_walker=True,
        locally_symmetric=True)
    return _walker_problem(name, phi, potential, 0.0, {'a1': a1},
                           f'Cahen-Wallach Walker form phi={phi}, a1={a1!r}', expected, box=box,
                           killing=(('0', '0', '1'),), notes=(COEFFICIENT_NOTE, PARALLEL_NOTE))


@family('CWplus', 'phi = x^2, f = y^2/2 + a1 y', a1=0.0)
def cw_plus(params, box):
    return _cahen_wallach_walker(1, params)


@family('CWminus', 'phi = -x^2, f = -y^2/2 + a1 y', a1=0.0)
def cw_minus(params, box):
    return _cahen_wallach_walker(-1, params)


def family_names():
    return tuple(FAMILIES)


def resolve_params(name, params=None):
    """Family defaults overlaid by ``params``; unknown keys are rejected."""
    if name not in FAMILIES:
        raise CatalogError(f'unknown family {name!r} (known: {", ".join(FAMILIES)})')
    defaults = FAMILIES[name].defaults
    merged = dict(defaults)
    for key, value in (params or {}).items():
        known = key in defaults or (name == 'cahen_wallach' and re.fullmatch(r'kappa\d+', key))
        if not known:
            raise CatalogError(f'family {name!r} has no parameter {key!r}')
        merged[key] = value
    if name == 'cahen_wallach' and any(re.fullmatch(r'kappa\d+', k) for k in merged):
        if 'kappa' not in (params or {}):
            merged.pop('kappa', None)
    return merged


def instantiate(name, params=None, box=None):
    """Build ``(SolitonProblem, ExpectedProfile)`` for a catalog family.

    ``box`` optionally overrides sampling intervals by coordinate name.  The
    builder sees the overrides, so base points and validity checks that depend
    on the box are taken on the box actually sampled.
    """
    merged = resolve_params(name, params)
    box = dict(box or {})
    try:
        problem, expected = FAMILIES[name].builder(merged, box)
    except (EvaluationError, ExprSyntaxError) as exc:
        raise CatalogError(f'family {name!r}: {exc}') from exc
    if box:
        problem = with_box(problem, box)
    sweep_box(problem)
    logger.debug('instantiated %s with %s', name, merged)
    return problem, expected


def _interval(overrides, coordinate, default):
    if coordinate not in (overrides or {}):
        return tuple(default)
    lo, hi = (float(v) for v in overrides[coordinate])
    if not lo < hi:
        raise CatalogError(f'box interval for {coordinate!r} must have lo < hi')
    return lo, hi


def with_box(problem, overrides):
    box = list(problem.box)
    for coordinate in overrides:
        if coordinate not in problem.coordinates:
            raise CatalogError(f'box names unknown coordinate {coordinate!r}')
        index = problem.coordinates.index(coordinate)
        box[index] = _interval(overrides, coordinate, box[index])
    return replace(problem, box=tuple(box))


def custom_problem(coordinates, metric_entries, potential, lam, params=None, box=None,
                   description='custom metric'):
    """A problem from user-supplied metric entries and potential."""
    params = dict(params or {})
    try:
        metric = MetricSpec.from_entries(coordinates, metric_entries, params)
    except (ExprSyntaxError, EvaluationError) as exc:
        raise CatalogError(f'metric: {exc}') from exc
    node = _expr(potential, metric.coordinates, params, 'potential')
    problem = SolitonProblem('custom', metric, node, float(lam),
                             ((-1.0, 1.0),) * metric.dim, description, params=params)
    if box:
        problem = with_box(problem, box)
    sweep_box(problem)
    return problem, ExpectedProfile(steady=float(lam) == 0.0)


def _sweep_points(problem):
    lo = np.array([b[0] for b in problem.box])
    hi = np.array([b[1] for b in problem.box])
    points = [0.5 * (lo + hi)]
    if problem.dim <= MAX_CORNER_DIM:
        points.extend(np.array(corner) for corner in itertools.product(*problem.box))
    rng = np.random.default_rng(SWEEP_SEED)
    points.extend(lo + (hi - lo) * rng.random((SWEEP_RANDOM_POINTS, problem.dim)))
    return points


def sweep_box(problem):
    """Evaluate metric and potential over a sweep of the box; raise CatalogError on failure."""
    for point in _sweep_points(problem):
        try:
            check_nondegenerate(problem.metric.matrix(point), point)
            value = problem.metric.evaluator(point, 0)(problem.potential).value
        except EvaluationError as exc:
            raise CatalogError(f'box validity sweep failed for {problem.family}: {exc}') from exc
        if not math.isfinite(value):
            raise CatalogError(f'potential is not finite at {tuple(point)}')


def sample_points(problem, count, seed):
    """``count`` points drawn uniformly in the box by ``numpy.random.default_rng(seed)``.

    One ``rng.random((count, dim))`` draw scaled into the box, so a given seed
    reproduces the same points bit for bit.
    """
    if count < 1:
        raise CatalogError('sample count must be at least 1')
    lo = np.array([b[0] for b in problem.box])
    hi = np.array([b[1] for b in problem.box])
    rng = np.random.default_rng(seed)
    return lo + (hi - lo) * rng.random((int(count), problem.dim))


def walker_problem(phi, potential, lam=0.0, box=None):
    """Shortcut for ad-hoc Walker problems given by phi and f."""
    return instantiate('walker3', {'phi': phi, 'potential': potential, 'lambda': lam}, box)
