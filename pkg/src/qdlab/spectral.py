"""Spectral measures, their Fourier-Stieltjes transforms, and decay diagnostics.

Finite truncations only ever produce purely atomic spectral measures, so
everything here is exact arithmetic on (support, weight) pairs: transforms
are finite exponential sums and Cesaro time averages reduce to closed-form
sinc sums.  The middle-thirds Cantor measure is included as the classical
witness that Cesaro decay does not imply pointwise (Rajchman) decay.
"""

import math
from dataclasses import dataclass

import numpy as np

ATOM_MERGE_TOL = 1e-12

# Hausdorff dimension of the middle-thirds Cantor measure.
CANTOR_DIMENSION = math.log(2) / math.log(3)


@dataclass(frozen=True)
class AtomicMeasure:
    support: np.ndarray
    weights: np.ndarray

    def __post_init__(self):
        s = np.asarray(self.support, dtype=float)
        w = np.asarray(self.weights, dtype=float)
        if s.shape != w.shape or s.ndim != 1:
            raise ValueError("support and weights must be matching 1-d arrays")
        if np.any(w < 0):
            raise ValueError("weights must be non-negative")
        order = np.argsort(s)
        s, w = s[order], w[order]
        # merge atoms closer than the tolerance
        keep_s, keep_w = [], []
        for x, wx in zip(s, w):
            if keep_s and x - keep_s[-1] <= ATOM_MERGE_TOL:
                keep_w[-1] += wx
            else:
                keep_s.append(x)
                keep_w.append(wx)
        object.__setattr__(self, "support", np.array(keep_s))
        object.__setattr__(self, "weights", np.array(keep_w))

    @property
    def mass(self) -> float:
        return float(self.weights.sum())


@dataclass(frozen=True)
class CesaroSeries:
    horizons: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        h = np.asarray(self.horizons, dtype=float)
        v = np.asarray(self.values, dtype=float)
        if np.any(np.diff(h) <= 0):
            raise ValueError("horizons must be increasing")
        if np.any(v < 0):
            raise ValueError("Cesaro averages are non-negative")
        object.__setattr__(self, "horizons", h)
        object.__setattr__(self, "values", v)


@dataclass(frozen=True)
class HolderReport:
    alpha: float
    holder_constant: float
    scales_tested: np.ndarray
    degenerate: bool = False


def spectral_measure(eigenvalues, eigenvectors, vector) -> AtomicMeasure:
    """Measure of `vector` in the eigenbasis: weight |<psi_k, vector>|^2 at
    eigenvalue_k.  Total mass equals ||vector||^2."""
    vector = np.asarray(vector, dtype=float)
    eigenvectors = np.asarray(eigenvectors)
    if eigenvectors.shape[0] != vector.size:
        raise ValueError("vector dimension does not match the eigenbasis")
    w = np.abs(eigenvectors.T @ vector) ** 2
    return AtomicMeasure(np.asarray(eigenvalues, dtype=float), w)


def fs_transform(mu: AtomicMeasure, t):
    """Fourier-Stieltjes transform sum_k w_k exp(-i lambda_k t)."""
    t = np.asarray(t, dtype=float)
    phase = np.exp(-1j * np.outer(t.ravel(), mu.support))
    out = (phase @ mu.weights).reshape(t.shape)
    return out if out.shape else complex(out)


def cesaro_average(mu: AtomicMeasure, T: float, grid=None) -> float:
    """(1/T) int_0^T |mu_hat(t)|^2 dt, in closed form.

    For atoms the integrand is a finite sum of cosines, so the average is
    sum_{jk} w_j w_k sinc((lambda_j - lambda_k) T).  The `grid` argument is
    accepted for interface compatibility and ignored.  As T -> infinity the
    value tends to sum_k w_k^2 (Wiener).
    """
    if T <= 0:
        raise ValueError("T must be positive")
    d = mu.support[:, None] - mu.support[None, :]
    kern = np.sinc(d * T / np.pi)
    return float(mu.weights @ kern @ mu.weights)


def wiener_limit(mu: AtomicMeasure) -> float:
    return float(np.sum(mu.weights**2))


def fit_decay_exponent(series: CesaroSeries, with_residual: bool = False):
    """Least-squares slope of log value vs log T, sign-flipped."""
    if series.horizons.size < 5:
        raise ValueError("need at least 5 horizons")
    if series.horizons[-1] / series.horizons[0] < 100:
        raise ValueError("horizons must span at least two decades")
    if np.any(series.values <= 0):
        raise ValueError("non-positive values cannot be log-fitted")
    x = np.log(series.horizons)
    y = np.log(series.values)
    slope, intercept = np.polyfit(x, y, 1)
    if with_residual:
        resid = float(np.sqrt(np.mean((y - slope * x - intercept) ** 2)))
        return -float(slope), resid
    return -float(slope)


def cantor_transform(u: float, depth: int = 60):
    """Partial product prod_{j=1}^{depth} cos(2 pi u / 3^j).

    This is the transform of the symmetric middle-thirds Cantor measure on
    [-pi, pi]; it satisfies the exact scaling identity at integers that
    witnesses the failure of Rajchman decay.
    """
    if depth < 1:
        raise ValueError("depth must be >= 1")
    u = np.asarray(u, dtype=float)
    scales = 2.0 * np.pi / 3.0 ** np.arange(1, depth + 1)
    out = np.prod(np.cos(np.multiply.outer(u, scales)), axis=-1)
    return out if out.shape else float(out)


def cantor_measure(depth: int) -> AtomicMeasure:
    """Depth-d truncation of the Cantor measure: 2^d equal atoms at
    sum_j s_j 2 pi / 3^j over sign patterns s in {-1,+1}^d."""
    if depth < 1:
        raise ValueError("depth must be >= 1")
    if depth > 20:
        raise ValueError("depth beyond 20 exceeds the atom budget")
    scales = 2.0 * np.pi / 3.0 ** np.arange(1, depth + 1)
    idx = np.arange(2**depth)
    signs = np.where((idx[:, None] >> np.arange(depth)) & 1, 1.0, -1.0)
    support = signs @ scales
    weights = np.full(2**depth, 2.0**-depth)
    return AtomicMeasure(support, weights)


def rajchman_indicator(mu_or_transform, t_grid) -> float:
    """limsup proxy: max |mu_hat(t)| over the top decade of the grid."""
    t = np.asarray(t_grid, dtype=float)
    if np.any(np.diff(t) <= 0):
        raise ValueError("t_grid must be increasing")
    if t[-1] < 1e3:
        raise ValueError("t_grid must reach at least 10^3")
    if isinstance(mu_or_transform, AtomicMeasure):
        vals = np.abs(fs_transform(mu_or_transform, t))
    else:
        vals = np.abs(np.asarray([mu_or_transform(x) for x in t]))
    top = t >= t[-1] / 10.0
    return float(vals[top].max())


def max_interval_mass(mu: AtomicMeasure, length: float) -> float:
    """sup over intervals [x, x+length] of mu-mass.

    The supremum over closed intervals is attained with the left endpoint
    at an atom, so an atom-anchored scan is exact.
    """
    csum = np.concatenate([[0.0], np.cumsum(mu.weights)])
    right = np.searchsorted(mu.support, mu.support + length, side="right")
    left = np.arange(mu.support.size)
    return float(np.max(csum[right] - csum[left]))


def holder_estimate(mu: AtomicMeasure, scales) -> HolderReport:
    """Uniform-Holder exponent from max interval mass vs scale.

    Fits log(max mass over intervals of length s) against log s; the slope
    estimates alpha and the intercept the Holder constant.  A single-atom
    measure is degenerate and reported with alpha = 0.
    """
    scales = np.asarray(scales, dtype=float)
    if scales.size < 3:
        raise ValueError("need at least 3 scales")
    if np.any(scales >= 1.0) or np.any(scales <= 0):
        raise ValueError("scales must lie in (0, 1)")
    if mu.support.size == 1:
        return HolderReport(0.0, mu.mass, scales, degenerate=True)
    masses = np.array([max_interval_mass(mu, s) for s in scales])
    slope, intercept = np.polyfit(np.log(scales), np.log(masses), 1)
    alpha = float(np.clip(slope, 0.0, 1.0))
    return HolderReport(alpha, float(np.exp(intercept)), scales)


def survival_cesaro(eigenvalues, eigenvectors, psi, T: float) -> float:
    """(1/T) int_0^T |<psi, exp(-itH) psi>|^2 dt via the spectral measure."""
    psi = np.asarray(psi, dtype=float)
    norm = np.linalg.norm(psi)
    if not np.isclose(norm, 1.0, atol=1e-10):
        raise ValueError("psi must be normalized")
    mu = spectral_measure(eigenvalues, eigenvectors, psi)
    return cesaro_average(mu, T)
