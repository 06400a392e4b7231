"""Separable two-dimensional operator A (x) I + theta I (x) B.

Dynamics of the Kronecker sum factorize: matrix elements of the evolution
are products f1(t) f2(theta t) of one-dimensional transforms.  The edge
windows [-2(1+theta), lambda_-(1+theta)) and (lambda_+(1+theta), 2(1+theta)]
are pure point; a central absolutely-continuous window is only indicated
numerically through local dimension estimates with 2 alpha > 1, and
whether singular-continuous spectrum survives in between is left open.
"""

import math
from dataclasses import dataclass

import numpy as np

from .spectral import AtomicMeasure, fs_transform
from .sparse_jacobi import mobility_edges


@dataclass(frozen=True)
class WindowReport:
    band: tuple  # [-2(1+theta), 2(1+theta)]
    pp_region: tuple  # pair of edge intervals, or () if hypothesis fails
    ac_candidate: tuple | None  # central interval estimate, None if unknown
    sc_unknown: bool
    hypothesis_ok: bool
    theta: float


def product_amplitude(mu1: AtomicMeasure, mu2: AtomicMeasure,
                      theta: float, t):
    """Evolution amplitude f1(t) * f2(theta t)."""
    return fs_transform(mu1, t) * fs_transform(mu2, theta * np.asarray(t, dtype=float))


def two_alpha_indicator(alpha_estimates: dict):
    """Maximal contiguous sub-grid where 2 alpha(lambda) > 1.

    `alpha_estimates` maps grid energies to local dimension estimates.
    Returns the (lambda_start, lambda_end) of the longest run, or None.
    """
    if not alpha_estimates:
        raise ValueError("empty energy grid")
    lams = np.array(sorted(alpha_estimates))
    ok = np.array([2.0 * alpha_estimates[l] > 1.0 for l in lams])
    best, cur = None, None
    for lam, flag in zip(lams, ok):
        if flag:
            cur = (cur[0], lam) if cur else (lam, lam)
            if best is None or cur[1] - cur[0] > best[1] - best[0]:
                best = cur
        else:
            cur = None
    return best


def theorem2_windows(v: float, beta_base: int, theta: float,
                     a: float = 4.0, alpha_estimates: dict | None = None) -> WindowReport:
    """Spectral window report for the separable operator.

    Requires the hypothesis v^2 < a (sqrt(beta) - 1) with a <= 4; when it
    fails the report carries empty regions and hypothesis_ok = False.  The
    ac_candidate is derived from the 2 alpha > 1 rule when local dimension
    estimates are supplied, scaled by (1 + theta); it is an indicator, not
    a proven window.
    """
    if not 0.0 <= theta <= 1.0:
        raise ValueError("theta must lie in [0, 1]")
    if a > 4.0:
        raise ValueError("the hypothesis constant a must be <= 4")
    band = (-2.0 * (1 + theta), 2.0 * (1 + theta))
    if v * v >= a * (math.sqrt(beta_base) - 1.0):
        return WindowReport(band, (), None, True, False, theta)
    lam_m, lam_p = mobility_edges(v, beta_base)
    pp = ((band[0], lam_m * (1 + theta)), (lam_p * (1 + theta), band[1]))
    ac = None
    if alpha_estimates:
        inner = {l: al for l, al in alpha_estimates.items() if lam_m < l < lam_p}
        run = two_alpha_indicator(inner) if inner else None
        if run:
            ac = (run[0] * (1 + theta), run[1] * (1 + theta))
    return WindowReport(band, pp, ac, True, True, theta)


@dataclass(frozen=True)
class SaturationReport:
    T_grid: np.ndarray
    integral: np.ndarray  # I(T) = int_0^T |f1 f2(theta .)|^2
    loglog_slope: float  # over the last decade; ~1 linear growth, ~0 saturation
    linear_rate: float  # I(T) growth rate over the last decade
    saturating: bool


def l2_saturation_test(mu1: AtomicMeasure, mu2: AtomicMeasure, theta: float,
                       T_grid, points_per_unit: float = 4.0) -> SaturationReport:
    """Growth of the L2 mass of the product amplitude.

    Bounded I(T) indicates an absolutely continuous component of the
    product measure; linear growth betrays atoms.  The integral is a
    trapezoid sum on a grid resolving the fastest phase in the product.
    """
    T_grid = np.asarray(T_grid, dtype=float)
    if np.any(np.diff(T_grid) <= 0):
        raise ValueError("T_grid must be increasing")
    span = max(np.abs(mu1.support).max(), theta * np.abs(mu2.support).max(), 1.0)
    n = int(T_grid[-1] * span * points_per_unit) + 2
    t = np.linspace(0.0, T_grid[-1], n)
    integrand = np.abs(product_amplitude(mu1, mu2, theta, t)) ** 2
    dt = t[1] - t[0]
    cum = np.concatenate([[0.0], np.cumsum((integrand[1:] + integrand[:-1]) * dt / 2)])
    I = np.interp(T_grid, t, cum)
    last = T_grid >= T_grid[-1] / 10.0
    slope = float(np.polyfit(np.log(T_grid[last]), np.log(I[last]), 1)[0])
    rate = float((I[-1] - np.interp(T_grid[-1] / 2, T_grid, I)) / (T_grid[-1] / 2))
    return SaturationReport(T_grid, I, slope, rate, saturating=slope < 0.5)
