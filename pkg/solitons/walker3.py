"""Three-dimensional strict Walker metrics ``2 dt dy + dx^2 + phi(x,y) dy^2``.

Coordinates are ``(t, x, y)``.  The soliton equation reduces to six scalar
residuals in f and phi; steady solitons exist exactly when phi_xxx = alpha phi_xx
for a constant alpha (Case I, alpha != 0, spacelike gradient) or phi_xxx = 0
(Case II, null gradient).  The potential is then recovered by integrating
gamma'' = (phi_xx - alpha phi_x)/2 twice in y.
"""
import logging
from dataclasses import dataclass, field
from typing import Any, Optional

import numpy as np

from .exceptions import DegenerateGridError, EvaluationError, PotentialReconstructionError
from .exprlang import Binary, Constant, DoubleIntegral, Evaluator, Var, bind, ensure_expr

logger = logging.getLogger(__name__)

COORDINATES = ('t', 'x', 'y')
FLAT = 'Flat'
CASE_I = 'CaseI'
CASE_II = 'CaseII'
NOT_SOLITON = 'NotSoliton'

DEFAULT_TOL = 1e-8
MIN_GRID_POINTS = 9

T, X, Y = 0, 1, 2


@dataclass(frozen=True)
class WalkerClassification:
    verdict: str
    grid: np.ndarray
    alpha: Optional[float] = None
    a_samples: tuple = ()
    b_samples: tuple = ()
    c_samples: tuple = ()
    ratio_spread: Optional[float] = None
    max_phi_xx: float = 0.0
    max_phi_xxx: float = 0.0
    affine_residual: Optional[float] = None
    tol: float = DEFAULT_TOL

    @property
    def is_soliton(self):
        return self.verdict in (CASE_I, CASE_II)


@dataclass(frozen=True)
class FamilyMatch:
    family: Optional[str]
    params: dict = field(default_factory=dict)
    residual: Optional[float] = None


@dataclass(frozen=True)
class WalkerKernel:
    """gamma''(y) = (phi_xx - alpha phi_x)/2 taken on the line x = x_ref."""
    phi: Any
    alpha: float
    x_ref: float
    params: tuple = ()

    def _jet(self, ys, order):
        ys = np.ravel(np.asarray(ys, dtype=float))
        samples = np.column_stack([np.zeros_like(ys), np.full_like(ys, self.x_ref), ys])
        return Evaluator.at_samples(COORDINATES, samples, dict(self.params), order)(self.phi)

    def samples(self, values):
        jet = self._jet(values, 2)
        second = jet.partial((0, 2, 0)) - self.alpha * jet.partial((0, 1, 0))
        return np.broadcast_to(0.5 * np.asarray(second), (np.size(values),)).astype(float)

    def derivatives(self, value, count):
        if count > 2:
            raise EvaluationError('walker kernel derivatives need jets beyond order 3',
                                  operation='kernel', point=(value,))
        jet = self._jet([value], 3)
        out = [jet.partial((0, 2, 0)) - self.alpha * jet.partial((0, 1, 0)),
               jet.partial((0, 2, 1)) - self.alpha * jet.partial((0, 1, 1))]
        return [0.5 * float(np.ravel(v)[0]) for v in out[:count]]


@dataclass(frozen=True)
class WalkerPotential:
    """Reconstructed f(t, x, y) with gauge gamma(y0) = gamma'(y0) = 0."""
    expr: Any
    verdict: str
    alpha: float
    y0: float
    params: tuple = ()
    max_residual: Optional[float] = None

    def __call__(self, t, x, y):
        return Evaluator(COORDINATES, (t, x, y), 0, dict(self.params))(self.expr).value


def _bound(phi, params):
    return bind(ensure_expr(phi), COORDINATES, params or {})


def _check_grid(grid):
    grid = np.atleast_2d(np.asarray(grid, dtype=float))
    if grid.ndim != 2 or grid.shape[1] != 2:
        raise DegenerateGridError('grid must be a list of (x, y) points')
    if len(grid) < MIN_GRID_POINTS:
        raise DegenerateGridError(f'grid needs at least {MIN_GRID_POINTS} points, got {len(grid)}')
    if np.ptp(grid[:, 0]) == 0.0 or np.ptp(grid[:, 1]) == 0.0:
        raise DegenerateGridError('grid must span both the x and the y direction')
    return grid


def tensor_grid(x_interval, y_interval, size=5):
    """size x size tensor grid over the two intervals, rows of constant y."""
    xs = np.linspace(*x_interval, size)
    ys = np.linspace(*y_interval, size)
    return np.array([(x, y) for y in ys for x in xs])


def staggered_grid(x_interval, y_interval, size=5):
    """Cell midpoints of a (size+1)-node grid; disjoint from ``tensor_grid`` nodes."""
    xs = np.linspace(*x_interval, size + 1)
    ys = np.linspace(*y_interval, size + 1)
    return np.array([(x, y) for y in 0.5 * (ys[1:] + ys[:-1]) for x in 0.5 * (xs[1:] + xs[:-1])])


def _phi_data(phi, grid, params, order=3):
    samples = np.column_stack([np.zeros(len(grid)), grid[:, 0], grid[:, 1]])
    jet = Evaluator.at_samples(COORDINATES, samples, params, order)(phi)
    n = len(grid)

    def part(idx):
        return np.broadcast_to(np.asarray(jet.partial(idx), dtype=float), (n,))

    data = {
        'phi': part((0, 0, 0)), 'x': part((0, 1, 0)), 'y': part((0, 0, 1)),
        'xx': part((0, 2, 0)), 'xy': part((0, 1, 1)),
    }
    if order >= 3:
        data.update(xxx=part((0, 3, 0)), xxy=part((0, 2, 1)))
    return data


def _rows(grid):
    """Indices of grid points grouped by y value, ordered by y."""
    ys = np.unique(grid[:, 1])
    return [(float(y), np.flatnonzero(grid[:, 1] == y)) for y in ys]


def walker_residuals(phi, f, lam, point, params=None):
    """The six scalar residuals of the soliton equation for a Walker metric.

    (f_tt, f_tx, f_xx - lam, f_ty - lam, 2 f_xy - phi_x f_t,
    2 lam phi + phi_xx - 2 f_yy - phi_x f_x + phi_y f_t)
    """
    params = dict(params or {})
    if isinstance(f, WalkerPotential):
        params = {**dict(f.params), **params}
        f = f.expr
    evaluator = Evaluator(COORDINATES, point, 2, params)
    F = evaluator(_bound(f, params))
    P = evaluator(_bound(phi, params))
    ft, fx = F.derivative(T), F.derivative(X)
    phi_x, phi_y = P.derivative(X), P.derivative(Y)
    return np.array([
        F.derivative(T, T),
        F.derivative(T, X),
        F.derivative(X, X) - lam,
        F.derivative(T, Y) - lam,
        2.0 * F.derivative(X, Y) - phi_x * ft,
        2.0 * lam * P.value + P.derivative(X, X) - 2.0 * F.derivative(Y, Y) - phi_x * fx
        + phi_y * ft,
    ])


def max_walker_residual(phi, f, lam, points, params=None):
    if isinstance(f, WalkerPotential):
        params = {**dict(f.params), **dict(params or {})}
        f = f.expr
    return max(float(np.max(np.abs(walker_residuals(phi, f, lam, p, params)))) for p in points)


def classify(phi, grid, params=None, tol=DEFAULT_TOL):
    """Decide Flat / CaseI / CaseII / NotSoliton from phi on an (x, y) grid."""
    grid = _check_grid(grid)
    params = dict(params or {})
    node = _bound(phi, params)
    data = _phi_data(node, grid, params)
    scale = max(1.0, float(np.max(np.abs(data['phi']))))
    max_xx = float(np.max(np.abs(data['xx'])))
    max_xxx = float(np.max(np.abs(data['xxx'])))
    common = dict(grid=grid, max_phi_xx=max_xx, max_phi_xxx=max_xxx, tol=tol)

    if max_xx < tol * scale:
        return WalkerClassification(FLAT, **common)

    mask = np.abs(data['xx']) > tol * scale
    ratio = data['xxx'][mask] / data['xx'][mask]
    alpha = float(np.mean(ratio))
    spread = float(np.ptp(ratio))
    if spread < tol * max(1.0, abs(alpha)) and abs(alpha) > tol:
        return _case_one(data, grid, alpha, spread, scale, common)

    if max_xxx < tol * scale:
        a, b, c = [], [], []
        for y, idx in _rows(grid):
            xs = grid[idx, 0]
            a_y = 0.5 * float(np.mean(data['xx'][idx]))
            b_y = float(np.mean(data['x'][idx] - 2.0 * a_y * xs))
            a.append((y, a_y))
            b.append((y, b_y))
            c.append((y, float(np.mean(data['phi'][idx] - a_y * xs ** 2 - b_y * xs))))
        return WalkerClassification(CASE_II, a_samples=tuple(a), b_samples=tuple(b),
                                    c_samples=tuple(c), ratio_spread=spread, **common)

    logger.info('phi_xxx/phi_xx is not constant (spread %.3e); not a steady soliton', spread)
    return WalkerClassification(NOT_SOLITON, ratio_spread=spread, **common)


def _case_one(data, grid, alpha, spread, scale, common):
    # phi - phi_xx/alpha^2 must be affine in x on every row: x b(y) + c(y).
    remainder = data['phi'] - data['xx'] / alpha ** 2
    a, b, c = [], [], []
    worst = 0.0
    fitted_rows = 0
    for y, idx in _rows(grid):
        xs = grid[idx, 0]
        a.append((y, float(np.mean(data['xx'][idx] * np.exp(-alpha * xs)))))
        if np.unique(xs).size < 2:
            continue
        slope, intercept = np.polyfit(xs, remainder[idx], 1)
        worst = max(worst, float(np.max(np.abs(remainder[idx] - (slope * xs + intercept)))))
        b.append((y, float(slope)))
        c.append((y, float(intercept)))
        fitted_rows += 1
    if not fitted_rows:
        raise DegenerateGridError('no grid row has two distinct x values')
    verdict = CASE_I if worst < common['tol'] * scale else NOT_SOLITON
    return WalkerClassification(verdict, alpha=alpha if verdict == CASE_I else None,
                                a_samples=tuple(a), b_samples=tuple(b), c_samples=tuple(c),
                                ratio_spread=spread, affine_residual=worst, **common)


def construct_potential(phi, cls, y0, params=None, tol=DEFAULT_TOL, check_grid=None):
    """Potential for a classified phi; gamma(y0) = gamma'(y0) = 0.

    Case I: f = alpha x + gamma(y), Case II: f = gamma(y).  The result is
    checked against ``walker_residuals`` on ``check_grid`` (default: the
    classification grid) before it is returned.
    """
    if not cls.is_soliton:
        raise PotentialReconstructionError(f'no soliton potential for verdict {cls.verdict}',
                                           operation='construct_potential')
    params = dict(params or {})
    node = _bound(phi, params)
    alpha = cls.alpha if cls.verdict == CASE_I else 0.0
    grid = cls.grid
    x_ref = float(np.mean(grid[:, 0]))
    kernel = WalkerKernel(node, alpha, x_ref, tuple(sorted(params.items())))

    if cls.verdict == CASE_I:
        data = _phi_data(node, grid, params, order=2)
        second = 0.5 * (data['xx'] - alpha * data['x'])
        scale = max(1.0, float(np.max(np.abs(second))))
        for y, idx in _rows(grid):
            if np.ptp(second[idx]) > tol * scale:
                raise PotentialReconstructionError(
                    f"gamma'' depends on x at y={y!r}", operation='construct_potential',
                    point=(0.0, float(grid[idx[0], 0]), y))

    gamma = DoubleIntegral(kernel, 'y', float(y0))
    expr = gamma if cls.verdict == CASE_II else Binary(
        '+', Binary('*', Constant(alpha), Var('x')), gamma)
    points = [(0.0, x, y) for x, y in (grid if check_grid is None else check_grid)]
    worst = max_walker_residual(node, expr, 0.0, points, params)
    if worst >= tol:
        raise PotentialReconstructionError(
            f'reconstructed potential leaves residual {worst:.3e}', operation='construct_potential')
    logger.debug('reconstructed %s potential, residual %.3e', cls.verdict, worst)
    return WalkerPotential(expr, cls.verdict, alpha, float(y0), tuple(sorted(params.items())),
                           worst)


def match_homogeneous_family(phi, grid, params=None, tol=DEFAULT_TOL):
    """Identify N_b, P_c, CWplus or CWminus by their defining identities on the grid."""
    grid = _check_grid(grid)
    params = dict(params or {})
    data = _phi_data(_bound(phi, params), grid, params)
    xs, ys = grid[:, 0], grid[:, 1]
    scale = max(1.0, float(np.max(np.abs(data['phi']))))

    for name, sign in (('CWplus', 1.0), ('CWminus', -1.0)):
        residual = float(np.max(np.abs(data['phi'] - sign * xs ** 2)))
        if residual < tol * scale:
            return FamilyMatch(name, {}, residual)

    match = _match_n_b(data, xs, scale, tol)
    if match is not None:
        return match
    match = _match_p_c(data, xs, ys, scale, tol)
    if match is not None:
        return match
    return FamilyMatch(None)


def _match_n_b(data, xs, scale, tol):
    phi = data['phi']
    if np.max(np.abs(data['y'])) >= tol * scale or np.min(np.abs(phi)) <= tol:
        return None
    ratio = data['x'] / phi
    b = float(np.mean(ratio))
    if abs(b) <= tol or np.ptp(ratio) >= tol * max(1.0, abs(b)):
        return None
    normalized = phi * b ** 2
    if np.min(normalized) <= 0.0:
        return None
    residual = float(np.max(np.abs(np.log(normalized) - b * xs)))
    if residual >= tol * max(1.0, float(np.max(np.abs(b * xs)))):
        return None
    return FamilyMatch('N_b', {'b': b}, residual)


def _match_p_c(data, xs, ys, scale, tol):
    homogeneity = float(np.max(np.abs(data['phi'] - 0.5 * xs ** 2 * data['xx'])))
    alpha = data['xx']
    if homogeneity >= tol * scale or np.min(alpha) <= 0.0:
        return None
    ratio = data['xxy'] / alpha ** 1.5
    c = float(np.mean(ratio))
    if abs(c) <= tol or np.ptp(ratio) >= tol * max(1.0, abs(c)):
        return None
    k = float(np.mean(2.0 / np.sqrt(alpha) + c * ys))
    return FamilyMatch('P_c', {'c': c, 'k': k}, homogeneity)
