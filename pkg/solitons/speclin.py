"""Small dense linear algebra for indefinite inner products."""
import logging
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .exceptions import AsymmetricMatrixError

logger = logging.getLogger(__name__)

DEFAULT_TOL = 1e-8

SPACELIKE = 'spacelike'
TIMELIKE = 'timelike'
NULL = 'null'
ZERO = 'zero'


@dataclass(frozen=True)
class OperatorProfile:
    """Spectral summary of a square matrix.

    ``nilpotency_index`` is 0 for the zero matrix, k when A^k vanishes but
    A^(k-1) does not, and None when A is not nilpotent.
    """
    spectrum: tuple
    rank: int
    nilpotency_index: Optional[int]
    kernel_dim: int
    diagonalizable: bool

    @property
    def nilpotent(self):
        return self.nilpotency_index is not None

    @property
    def real_spectrum(self):
        return tuple(float(np.real(z)) for z in self.spectrum)


def signature(sym, tol=DEFAULT_TOL):
    """(positive, negative, null) eigenvalue counts of a symmetric matrix."""
    sym = np.asarray(sym, dtype=float)
    scale = max(1.0, float(np.max(np.abs(sym)))) if sym.size else 1.0
    if np.max(np.abs(sym - sym.T), initial=0.0) > tol * scale:
        raise AsymmetricMatrixError('signature needs a symmetric matrix')
    eigenvalues = np.linalg.eigvalsh(0.5 * (sym + sym.T))
    pos = int(np.sum(eigenvalues > tol))
    neg = int(np.sum(eigenvalues < -tol))
    return pos, neg, len(eigenvalues) - pos - neg


def numerical_rank(matrix, tol=DEFAULT_TOL):
    singular = np.linalg.svd(np.asarray(matrix), compute_uv=False)
    if singular.size == 0 or singular[0] == 0.0:
        return 0
    return int(np.sum(singular > tol * singular[0]))


def nilpotency_index(matrix, tol=DEFAULT_TOL):
    """Smallest k with ||A^k|| / ||A||^k < tol; 0 for a (numerically) zero matrix."""
    matrix = np.asarray(matrix, dtype=float)
    norm = np.linalg.norm(matrix)
    if norm < tol:
        return 0
    unit = matrix / norm
    power = unit
    for k in range(2, matrix.shape[0] + 1):
        power = power @ unit
        if np.linalg.norm(power) < tol:
            return k
    return None


def _sorted_spectrum(values):
    rounded = [complex(v) for v in values]
    return tuple(sorted(rounded, key=lambda z: (round(z.real, 12), round(z.imag, 12))))


def _clusters(spectrum, tol):
    clusters = []
    for z in spectrum:
        for cluster in clusters:
            if abs(cluster[0] - z) <= tol * max(1.0, abs(z)):
                cluster.append(z)
                break
        else:
            clusters.append([z])
    return clusters


def operator_profile(matrix, tol=DEFAULT_TOL):
    matrix = np.asarray(matrix, dtype=float)
    d = matrix.shape[0]
    index = nilpotency_index(matrix, tol)
    if index is not None:
        spectrum = tuple(complex(0.0) for _ in range(d))
    else:
        spectrum = _sorted_spectrum(np.linalg.eigvals(matrix))
    rank = 0 if index == 0 else numerical_rank(matrix, tol)
    diagonalizable = True
    if index is not None:
        diagonalizable = index == 0
    else:
        scale = max(1.0, float(np.linalg.norm(matrix)))
        for cluster in _clusters(spectrum, tol):
            mean = np.mean(cluster)
            shifted = matrix.astype(complex) - mean * np.eye(d)
            geometric = d - numerical_rank(shifted / scale, tol)
            if geometric < len(cluster):
                diagonalizable = False
                break
    return OperatorProfile(spectrum=spectrum, rank=rank, nilpotency_index=index,
                           kernel_dim=d - rank, diagonalizable=diagonalizable)


def causal_type(vector, metric, tol=DEFAULT_TOL):
    vector = np.asarray(vector, dtype=float)
    metric = np.asarray(metric, dtype=float)
    if np.linalg.norm(vector) < tol:
        return ZERO
    quadratic = float(vector @ metric @ vector)
    scale = float(np.abs(vector) @ np.abs(metric) @ np.abs(vector))
    if abs(quadratic) < tol * max(scale, 1.0):
        return NULL
    return SPACELIKE if quadratic > 0 else TIMELIKE


def spectrum_within(spectrum, targets, tol=DEFAULT_TOL):
    """True when every eigenvalue lies within tol of one of ``targets`` on the real axis."""
    targets = [float(t) for t in targets]
    for z in spectrum:
        if abs(z.imag) > tol:
            return False
        if not any(abs(z.real - t) <= tol * max(1.0, abs(t)) for t in targets):
            return False
    return True


def spectrum_distance(first, second):
    """Max distance between two sorted spectra of equal length."""
    if len(first) != len(second):
        return float('inf')
    return max((abs(a - b) for a, b in zip(first, second)), default=0.0)
