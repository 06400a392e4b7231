"""Sparse random Jacobi operator on the half line.

The free hopping operator (J0 u)_n = u_{n+1} + u_{n-1} is perturbed by a
diagonal potential that equals v at a geometrically sparse random set of
sites and vanishes elsewhere.  The unperturbed bump positions satisfy
a_1 = beta - 1 and a_j = a_{j-1} + beta^j; each realized position is
a_j + omega_j with omega_j uniform on {-j, ..., j}.  A phase phi fixes the
boundary condition u_{-1} cos(phi) - u_0 sin(phi) = 0 at the origin.

The in-band transition criterion (beta - 1)(4 - lambda^2) / v^2 > 1 splits
[-2, 2] into a singular-continuous window around 0 and pure-point edges,
separated at lambda_pm = +-2 sqrt(1 - v^2 / v_c^2) with v_c = 2 sqrt(beta-1).
"""

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from scipy.linalg import eigh_tridiagonal

from .streams import substream

# Largest tridiagonal eigenproblem we attempt before refusing (dense
# eigenvectors: n^2 doubles).
MAX_TRUNCATION = 20_000

EDGE_TOL = 1e-9


class ResourceBudgetError(RuntimeError):
    """A requested computation exceeds the configured desk-scale budget."""


@dataclass(frozen=True)
class SparseModelParams:
    beta_base: int
    v: float
    phi: float = 0.0
    max_bump_index: int = 20
    seed: int = 0

    def __post_init__(self):
        if int(self.beta_base) != self.beta_base or self.beta_base < 2:
            raise ValueError("beta_base must be an integer >= 2")
        if not 0 < self.v < 1:
            raise ValueError("bump strength v must lie in (0, 1)")
        if not 0 <= self.phi < np.pi:
            raise ValueError("boundary phase phi must lie in [0, pi)")
        if self.max_bump_index < 1:
            raise ValueError("max_bump_index must be >= 1")

    @property
    def critical_v(self) -> float:
        return 2.0 * math.sqrt(self.beta_base - 1)


@dataclass(frozen=True)
class SparsePotential:
    positions: tuple  # strictly increasing site indices of the bumps
    v: float
    omegas: tuple

    def __post_init__(self):
        pos = self.positions
        if any(b <= a for a, b in zip(pos, pos[1:])):
            raise ValueError("bump positions must be strictly increasing")
        if any(abs(w) > j for j, w in enumerate(self.omegas, start=1)):
            raise ValueError("|omega_j| <= j violated")

    def values_up_to(self, n: int) -> np.ndarray:
        """Diagonal potential on sites 0..n-1."""
        out = np.zeros(n)
        for p in self.positions:
            if p < n:
                out[p] = self.v
        return out


def build_potential(params: SparseModelParams, omegas=None) -> SparsePotential:
    """Realize the random bump positions a_j + omega_j.

    Each omega_j is drawn from its own substream keyed by the bump index,
    so enlarging max_bump_index never changes earlier positions.  Passing
    an explicit `omegas` sequence overrides the random draws (used for
    deterministic checks).
    """
    beta, J = params.beta_base, params.max_bump_index
    if omegas is not None:
        omegas = tuple(int(w) for w in omegas)
        if len(omegas) != J:
            raise ValueError("omegas must have max_bump_index entries")
    else:
        omegas = tuple(
            int(substream(params.seed, "bump-offset", j).integers(-j, j + 1))
            for j in range(1, J + 1)
        )
    positions = []
    a = beta - 1
    for j, w in enumerate(omegas, start=1):
        if j > 1:
            a += beta**j
        positions.append(a + w)
    return SparsePotential(tuple(positions), params.v, omegas)


def apply_operator(u, pot: SparsePotential, phi: float) -> np.ndarray:
    """Apply the truncated operator to a finite sequence u_0..u_{n-1}.

    The boundary value u_{-1} = u_0 tan(phi) is eliminated into the first
    component; entries beyond the truncation are taken as zero.
    """
    u = np.asarray(u, dtype=float)
    if u.ndim != 1 or u.size == 0:
        raise ValueError("u must be a non-empty 1-d sequence")
    if abs(math.cos(phi)) < 1e-12:
        raise ValueError("phi = pi/2 constrains u_0 = 0; use the shifted lattice")
    n = u.size
    v = pot.values_up_to(n)
    out = v * u
    out[:-1] += u[1:]
    out[1:] += u[:-1]
    out[0] += math.tan(phi) * u[0]
    return out


def transfer_step(lam: float, v_n: float) -> np.ndarray:
    """One-site transfer matrix [[lam - v_n, -1], [1, 0]]; det = 1 exactly."""
    return np.array([[lam - v_n, -1.0], [1.0, 0.0]])


@dataclass(frozen=True)
class PruferTrajectory:
    energy: float
    angle: float
    radii: np.ndarray  # radius after each bump
    phases: np.ndarray

    def __post_init__(self):
        if not np.isclose(self.energy, 2.0 * math.cos(self.angle), atol=1e-10):
            raise ValueError("energy and angle are inconsistent")
        if np.any(self.radii <= 0):
            raise ValueError("radii must be positive")


def _elliptic_change_of_basis(alpha: float):
    """Q with Q T_free Q^{-1} = rotation by alpha, acting on (u_n, u_{n-1})."""
    s, c = math.sin(alpha), math.cos(alpha)
    Q = np.array([[1.0, -c], [0.0, s]])
    Qinv = np.array([[1.0, c / s], [0.0, 1.0 / s]])
    return Q, Qinv


def _rotation(theta: float) -> np.ndarray:
    c, s = math.cos(theta), math.sin(theta)
    return np.array([[c, -s], [s, c]])


def prufer_evolve(lam: float, pot: SparsePotential, phi: float = 0.0,
                  u0=None) -> PruferTrajectory:
    """Evolve the transfer cocycle in elliptic (polar) coordinates.

    In the coordinates where the free step is a rotation by alpha the
    radius is exactly constant between bumps; only the bump steps change
    it.  Radius and phase are recorded after each bump.
    """
    if not -2.0 < lam < 2.0:
        raise ValueError("Prufer coordinates require lambda in (-2, 2)")
    alpha = math.acos(lam / 2.0)
    Q, Qinv = _elliptic_change_of_basis(alpha)
    bump = Q @ transfer_step(lam, pot.v) @ Qinv

    if u0 is None:
        u0 = np.array([math.cos(phi), math.sin(phi)])  # (u_0, u_{-1})
    w = Q @ np.asarray(u0, dtype=float)

    radii, phases = [], []
    prev = 0
    for p in pot.positions:
        # free rotation across the bump-free stretch, then the bump step
        w = _rotation(alpha * (p - prev)) @ w
        w = bump @ w
        prev = p + 1
        radii.append(math.hypot(w[0], w[1]))
        phases.append(math.atan2(w[1], w[0]))
    return PruferTrajectory(lam, alpha, np.array(radii), np.array(phases))


def transfer_cocycle(lam: float, pot: SparsePotential) -> np.ndarray:
    """Direct product of one-site transfer matrices through the last bump.

    Free stretches use binary powering of the free step; no elliptic
    coordinates are involved, so this serves as an independent cross-check
    of prufer_evolve.
    """
    free = transfer_step(lam, 0.0)
    bump = transfer_step(lam, pot.v)
    M = np.eye(2)
    prev = 0
    for p in pot.positions:
        M = np.linalg.matrix_power(free, p - prev) @ M
        M = bump @ M
        prev = p + 1
    return M


def prufer_cocycle(lam: float, pot: SparsePotential) -> np.ndarray:
    """Cocycle matrix reconstructed from two Prufer evolutions.

    Evolves the canonical basis vectors of (u_0, u_{-1}) space and maps the
    elliptic end states back to lattice coordinates.
    """
    alpha = math.acos(lam / 2.0)
    Q, Qinv = _elliptic_change_of_basis(alpha)
    cols = []
    for e in (np.array([1.0, 0.0]), np.array([0.0, 1.0])):
        traj = prufer_evolve(lam, pot, u0=e)
        r, th = traj.radii[-1], traj.phases[-1]
        cols.append(Qinv @ (r * np.array([math.cos(th), math.sin(th)])))
    return np.column_stack(cols)


@dataclass(frozen=True)
class RegionClassification:
    label: str  # SC | PP | EDGE | EXCLUDED
    criterion_value: float


def classify_energy(lam: float, params: SparseModelParams,
                    rational_denominator_bound: int = 0) -> RegionClassification:
    """Label an in-band energy by the transition criterion.

    criterion = (beta - 1)(4 - lambda^2) / v^2; SC above 1, PP below, EDGE
    within EDGE_TOL of 1.  When rational_denominator_bound > 0, energies
    whose angle alpha = arccos(lambda/2) has alpha/pi within 1e-9 of a
    rational with denominator <= the bound are flagged EXCLUDED (the
    criterion only speaks off that measure-zero set).
    """
    if not -2.0 <= lam <= 2.0:
        raise ValueError("lambda must lie in [-2, 2]")
    crit = (params.beta_base - 1) * (4.0 - lam * lam) / params.v**2
    if rational_denominator_bound > 0:
        x = math.acos(lam / 2.0) / math.pi
        approx = Fraction(x).limit_denominator(rational_denominator_bound)
        if abs(x - float(approx)) <= 1e-9:
            return RegionClassification("EXCLUDED", crit)
    if crit > 1.0 + EDGE_TOL:
        label = "SC"
    elif crit < 1.0 - EDGE_TOL:
        label = "PP"
    else:
        label = "EDGE"
    return RegionClassification(label, crit)


def mobility_edges(v: float, beta_base: int):
    """Band energies where the criterion equals 1, or None if v >= v_c.

    lambda_pm = +-sqrt(4 - v^2/(beta-1)) = +-2 sqrt(1 - v^2/v_c^2).
    """
    if v <= 0:
        raise ValueError("v must be positive")
    vc = 2.0 * math.sqrt(beta_base - 1)
    if v >= vc:
        return None  # the whole band is PP: empty SC window
    lam = math.sqrt(4.0 - v * v / (beta_base - 1))
    return (-lam, lam)


def truncated_spectrum(pot: SparsePotential, n: int, phi: float = 0.0):
    """Eigendecomposition of the n-site truncation.

    Symmetric tridiagonal with unit off-diagonals; the boundary phase is
    eliminated into the first diagonal entry (tan phi), except phi = pi/2
    where the constraint u_0 = 0 shifts the lattice by one site.
    Returns (eigenvalues ascending, eigenvector columns).
    """
    if n < 2:
        raise ValueError("n must be >= 2")
    if n > MAX_TRUNCATION:
        raise ResourceBudgetError(
            f"truncation n={n} exceeds the budget of {MAX_TRUNCATION}")
    if abs(math.cos(phi)) < 1e-12:
        diag = pot.values_up_to(n + 1)[1:]
    else:
        diag = pot.values_up_to(n).copy()
        diag[0] += math.tan(phi)
    return eigh_tridiagonal(diag, np.ones(n - 1))


def participation_ratio(vectors: np.ndarray) -> np.ndarray:
    """Inverse of sum of fourth powers, per eigenvector column."""
    return 1.0 / np.sum(np.abs(vectors) ** 4, axis=0)


def concentration_ratio(pot: SparsePotential, R: int) -> float:
    """#{j : a_j <= R} / R, the zero-concentration diagnostic."""
    if R < 1:
        raise ValueError("R must be >= 1")
    return sum(1 for p in pot.positions if p <= R) / R
