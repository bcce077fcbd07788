"""Composite Gauss-Legendre quadrature for second-order reconstructions.

gamma(y) = int_{y0}^{y} (y - s) gamma''(s) ds is the double antiderivative with
gamma(y0) = gamma'(y0) = 0; gamma'(y) = int_{y0}^{y} gamma''(s) ds.
"""
import functools
import math

import numpy as np
from scipy import special

from .config import lab_setting
from .exceptions import QuadratureError

DEFAULT_ORDER = 12
DEFAULT_PANEL = 0.25
TARGET_ACCURACY = 1e-10


@functools.lru_cache(maxsize=None)
def gauss_legendre(npt):
    nodes, weights = special.roots_legendre(npt)
    return np.asarray(nodes), np.asarray(weights)


def _panel_nodes(a, b, panels, order):
    nodes, weights = gauss_legendre(order)
    edges = np.linspace(a, b, panels + 1)
    half = 0.5 * (edges[1:] - edges[:-1])
    mid = 0.5 * (edges[1:] + edges[:-1])
    points = (mid[:, None] + half[:, None] * nodes[None, :]).ravel()
    w = (half[:, None] * weights[None, :]).ravel()
    return points, w


def _integrate(kernel, base, y, weight_fn, order, panel):
    if y == base:
        return 0.0
    panels = max(1, math.ceil(abs(y - base) / panel))
    estimates = []
    for count in (panels, 2 * panels):
        s, w = _panel_nodes(base, y, count, order)
        values = np.asarray(kernel.samples(s), dtype=float)
        if not np.all(np.isfinite(values)):
            raise QuadratureError(f'integrand is not finite between {base!r} and {y!r}',
                                  operation='quadrature')
        estimates.append(float(np.dot(w, weight_fn(y, s) * values)))
    coarse, fine = estimates
    if abs(fine - coarse) > TARGET_ACCURACY * max(1.0, abs(fine)):
        raise QuadratureError(
            f'quadrature did not settle between {base!r} and {y!r} ({coarse!r} vs {fine!r})',
            operation='quadrature')
    return fine


def _rule(order, panel):
    if order is None:
        order = int(lab_setting('QUADRATURE_ORDER', DEFAULT_ORDER))
    if panel is None:
        panel = float(lab_setting('QUADRATURE_PANEL', DEFAULT_PANEL))
    return order, panel


def single_integral(kernel, base, y, order=None, panel=None):
    return _integrate(kernel, base, y, lambda _y, s: np.ones_like(s), *_rule(order, panel))


def double_integral(kernel, base, y, order=None, panel=None):
    return _integrate(kernel, base, y, lambda y_, s: y_ - s, *_rule(order, panel))
