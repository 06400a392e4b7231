"""Disordered Emch-Radin dynamics of the mean transverse magnetization.

The Hamiltonian is Ising-diagonal, (1/2) sum_{j,k} J_(j,k) eps(j-k)
sigma^z_j sigma^z_k, and the initial state a transverse product state with
single-site weight exp(-gamma sigma^x).  The transverse magnetization of a
single site then evolves as

    <sigma^x_i0>(t) = delta * prod_{k != i0} cos(2 t eps(i0-k) J_(i0,k)),

with delta = -tanh(gamma).  The disorder average of the nearest-neighbor
product is [E cos(2 beta J t)]^z with coordination z = 2d, giving the
periodic / power-law / Gaussian closed forms for Bernoulli, uniform and
Gaussian couplings.
"""

import itertools
import math
from dataclasses import dataclass

import numpy as np
from scipy.linalg import expm

from . import ensembles
from .ensembles import CouplingDistribution, Kind
from .sparse_jacobi import ResourceBudgetError
from .streams import substream

MAX_DENSE_SPINS = 12


# --- interaction kernels ---------------------------------------------------

@dataclass(frozen=True)
class InteractionKernel:
    dimension: int
    values: object  # callable lattice vector -> non-negative coupling profile
    summability_class: str  # "L1" | "L2_ONLY" | "NONE"
    nearest_neighbor: bool = False
    amplitude: float = 1.0  # profile value on the support, for the n.n. case

    def __call__(self, vec) -> float:
        return self.values(tuple(vec))


def nearest_neighbor_kernel(dimension: int, beta_coupling: float) -> InteractionKernel:
    """Profile equal to beta on the 2d unit vectors and zero elsewhere."""

    def eps(vec):
        return beta_coupling if sum(abs(c) for c in vec) == 1 else 0.0

    return InteractionKernel(dimension, eps, "L1", nearest_neighbor=True,
                             amplitude=beta_coupling)


def power_law_kernel(dimension: int, exponent: float) -> InteractionKernel:
    """|n|^(-exponent) away from the origin; zero at the origin."""

    def eps(vec):
        r = math.sqrt(sum(c * c for c in vec))
        return 0.0 if r == 0 else r**-exponent

    cls = classify_summability(eps, dimension)
    return InteractionKernel(dimension, eps, cls)


def classify_summability(eps, dimension: int, radius: int = 200_000) -> str:
    """Numerical partial-sum test of sum eps and sum eps^2.

    Compares partial sums over boxes of radius R and 2R; a relative
    increase below 1e-3 counts as converged.  Only dimension 1 is scanned
    exhaustively; higher dimensions use a radial shell estimate.
    """
    def partial(power, R):
        if dimension == 1:
            n = np.arange(-R, R + 1)
            vals = np.array([eps((k,)) for k in n[np.abs(n) <= min(R, 5000)]])
            # far tail evaluated on the axis only, scaled by shell count (2)
            far = np.arange(5001, R + 1)
            tail = np.array([eps((k,)) for k in far]) if far.size else np.array([])
            return float(np.sum(vals**power) + 2 * np.sum(tail**power))
        total = 0.0
        for r in range(1, min(R, 2000) + 1):
            shell = 2 * dimension * (2 * r) ** (dimension - 1)
            total += shell * eps((r,) + (0,) * (dimension - 1)) ** power
        return total

    out = []
    for power in (1, 2):
        a, b = partial(power, radius // 2), partial(power, radius)
        converged = b > 0 and (b - a) / b < 1e-3 or b == 0
        out.append(converged)
    l1, l2 = out
    if l1:
        return "L1"
    if l2:
        return "L2_ONLY"
    return "NONE"


# --- model -----------------------------------------------------------------

@dataclass(frozen=True)
class DisorderedEmchModel:
    kernel: InteractionKernel
    distribution: CouplingDistribution
    beta_coupling: float
    gamma: float
    volume_half_width: int  # V_n = [-n, n]^d

    def __post_init__(self):
        if self.gamma == 0:
            raise ValueError("gamma = 0 gives a symmetric state with delta = 0")

    @property
    def coordination(self) -> int:
        return 2 * self.kernel.dimension

    @property
    def delta(self) -> float:
        return delta_of_gamma(self.gamma)


@dataclass(frozen=True)
class MagnetizationTrace:
    times: np.ndarray
    values: np.ndarray
    stderr: np.ndarray

    def __post_init__(self):
        t = np.asarray(self.times, dtype=float)
        if np.any(np.diff(t) <= 0):
            raise ValueError("times must be increasing")
        object.__setattr__(self, "times", t)
        object.__setattr__(self, "values", np.asarray(self.values, dtype=float))
        object.__setattr__(self, "stderr", np.asarray(self.stderr, dtype=float))


def delta_of_gamma(gamma: float) -> float:
    """Single-site transverse expectation tr(sx e^(-g sx)) / tr(e^(-g sx))."""
    return -math.tanh(gamma)


def _single_site_state(gamma: float) -> np.ndarray:
    sx = np.array([[0.0, 1.0], [1.0, 0.0]])
    rho = expm(-gamma * sx)
    return rho / np.trace(rho)


def _volume_sites(dimension: int, n: int):
    return list(itertools.product(range(-n, n + 1), repeat=dimension))


def sample_couplings(model: DisorderedEmchModel, seed: int, index: int = 0):
    """One coupling per unordered in-volume pair with nonzero profile."""
    sites = _volume_sites(model.kernel.dimension, model.volume_half_width)
    rng = substream(seed, "emch-couplings", index)
    couplings = {}
    for a in range(len(sites)):
        for b in range(a + 1, len(sites)):
            diff = tuple(x - y for x, y in zip(sites[a], sites[b]))
            if model.kernel(diff) != 0.0:
                couplings[(sites[a], sites[b])] = float(
                    ensembles.sample(model.distribution, rng))
    return couplings


def _pair_coupling(couplings, a, b):
    return couplings.get((a, b), couplings.get((b, a), 0.0))


def exact_magnetization(model: DisorderedEmchModel, couplings, t, site=None):
    """<sigma^x_i0>(t) by exact unitary evolution of the finite volume.

    The Hamiltonian is diagonal in the z basis; sigma^x at the observed
    site couples each z configuration to its single-bit flip, so the trace
    reduces to a phase sum over all 2^N configurations weighted by the
    product-state matrix elements.  No product-of-cosines identity is used.
    """
    sites = _volume_sites(model.kernel.dimension, model.volume_half_width)
    N = len(sites)
    if N > MAX_DENSE_SPINS:
        raise ResourceBudgetError(
            f"{N} spins exceed the dense-evolution budget of {MAX_DENSE_SPINS}")
    if site is None:
        site = (0,) * model.kernel.dimension
    i0 = sites.index(tuple(site))

    # diagonal energies of all z configurations
    idx = np.arange(2**N)
    sz = np.where((idx[:, None] >> np.arange(N)) & 1, -1.0, 1.0)  # (2^N, N)
    energies = np.zeros(2**N)
    strengths = {}
    for a in range(N):
        for b in range(a + 1, N):
            diff = tuple(x - y for x, y in zip(sites[a], sites[b]))
            eps = model.kernel(diff)
            if eps != 0.0:
                J = _pair_coupling(couplings, sites[a], sites[b])
                energies += eps * J * sz[:, a] * sz[:, b]
                strengths[(a, b)] = eps * J

    # matrix element of the product state between z and z^(bit i0):
    # diagonal entry of rho1 per spectator site, off-diagonal at i0
    rho1 = _single_site_state(model.gamma)
    bits = ((idx[:, None] >> np.arange(N)) & 1)
    elem = np.ones(2**N)
    for s in range(N):
        if s == i0:
            continue
        elem *= np.where(bits[:, s] == 0, rho1[0, 0], rho1[1, 1])
    offdiag = rho1[1, 0]  # = rho1[0,1] by symmetry of exp(-g sx)
    elem *= offdiag

    flipped = idx ^ (1 << i0)
    dE = energies[flipped] - energies
    t = np.asarray(t, dtype=float)
    phases = np.exp(1j * np.outer(t.ravel(), dE))
    out = np.real(phases @ elem).reshape(t.shape)
    return out if out.shape else float(out)


def product_formula(model: DisorderedEmchModel, couplings, t, site=None):
    """Analytic value delta * prod_k cos(2 t eps(i0-k) J_(i0,k))."""
    sites = _volume_sites(model.kernel.dimension, model.volume_half_width)
    if site is None:
        site = (0,) * model.kernel.dimension
    i0 = tuple(site)
    t = np.asarray(t, dtype=float)
    scalar = not t.shape
    out = np.full(t.shape if not scalar else (1,), model.delta)
    for k in sites:
        if k == i0:
            continue
        eps = model.kernel(tuple(x - y for x, y in zip(i0, k)))
        if eps != 0.0:
            J = _pair_coupling(couplings, i0, k)
            out = out * np.cos(2.0 * t * eps * J)
    return float(out[0]) if scalar else out


def closed_form_f(distribution: CouplingDistribution, z: int,
                  beta_coupling: float, t):
    """Disorder-averaged product [E cos(2 beta J t)]^z.

    Bernoulli: cos(2 beta t)^z; uniform on [-1,1]: (sin(2 beta t)/(2 beta
    t))^z with value 1 at t = 0; Gaussian of variance s2:
    exp(-2 z s2 beta^2 t^2).  The value at t = 0 is 1; multiply by delta
    for the magnetization itself.
    """
    if z < 1:
        raise ValueError("coordination z must be >= 1")
    t = np.asarray(t, dtype=float)
    out = ensembles.char_function(distribution, 2.0 * beta_coupling * t) ** z
    return out if t.shape else float(out)


def printed_f(kind: Kind, z: int, t):
    """Commonly printed variants of the closed forms at unit amplitude.

    The uniform form divides by 2t rather than 2*beta*t and the Gaussian
    exponent is 2 z t^2 (unit-variance convention); both coincide with
    closed_form_f only under specific normalization conventions, so they
    are exposed separately for comparison rather than silently merged.
    """
    t = np.asarray(t, dtype=float)
    if kind is Kind.BERNOULLI:
        return np.cos(2.0 * t) ** z
    if kind is Kind.UNIFORM:
        with np.errstate(divide="ignore", invalid="ignore"):
            out = np.where(t == 0, 1.0, np.sin(2.0 * t) / (2.0 * t)) ** z
        return out
    return np.exp(-2.0 * z * t**2)


def mc_average_f(model: DisorderedEmchModel, t_grid, n_samples: int,
                 seed: int) -> MagnetizationTrace:
    """Monte Carlo estimate of delta * Av(prod cos(2 beta J t)).

    Each grid point draws its own n_samples coupling vectors (coordination
    many i.i.d. draws each) from a substream keyed by the point index.
    """
    if n_samples < 100:
        raise ValueError("need at least 100 samples")
    t_grid = np.asarray(t_grid, dtype=float)
    z = model.coordination
    beta = model.kernel.amplitude
    delta = model.delta
    values = np.empty(t_grid.size)
    errs = np.empty(t_grid.size)
    for k, t in enumerate(t_grid):
        rng = substream(seed, "emch-mc", k)
        J = ensembles.sample(model.distribution, rng, size=(n_samples, z))
        prod = np.prod(np.cos(2.0 * beta * J * t), axis=1)
        values[k] = delta * np.mean(prod)
        errs[k] = abs(delta) * np.std(prod, ddof=1) / math.sqrt(n_samples)
    return MagnetizationTrace(t_grid, values, errs)


def finite_volume_average_f(model: DisorderedEmchModel, t, n: int,
                            seed: int = 0, subsample: int | None = None):
    """Spatial average of the per-site cosine product on [-n, n]^d.

    One disorder realization; bonds between neighboring sites share a
    single coupling drawn from a bond-keyed substream.  Returns (mean,
    stderr) where stderr is the site-to-site spread over sqrt(#sites).
    """
    if not model.kernel.nearest_neighbor:
        raise ValueError("spatial averaging is implemented for the "
                         "nearest-neighbor kernel only")
    d = model.kernel.dimension
    beta = model.kernel.amplitude
    side = 2 * n + 1
    shape = (side,) * d
    rng = substream(seed, "emch-volume", 0)
    # one coupling array per axis: J[axis][site] couples site to site+e_axis
    J = [np.asarray(ensembles.sample(model.distribution, rng, size=shape))
         for _ in range(d)]
    prod = np.ones(shape)
    for axis in range(d):
        cos_fwd = np.cos(2.0 * beta * J[axis] * t)
        prod = prod * cos_fwd * np.roll(cos_fwd, 1, axis=axis)
    # boundary sites lack one neighbor: keep the interior only
    core = prod[tuple(slice(1, -1) for _ in range(d))]
    vals = model.delta * core.ravel()
    if subsample is not None:
        vals = vals[:subsample]
    return float(np.mean(vals)), float(np.std(vals, ddof=1) / math.sqrt(vals.size))


def decay_classify(trace: MagnetizationTrace) -> str:
    """ALMOST_PERIODIC, POWER_LAW, or GAUSSIAN_LIKE from the trace shape."""
    t, f = trace.times, trace.values
    if t.size < 16:
        raise ValueError("trace too short to classify")
    scale = abs(f[0])
    if scale == 0:
        raise ValueError("trace starts at zero; nothing to classify")
    a = np.abs(f) / scale

    # recurrence of the envelope above 0.9 after it first left that level
    below = np.nonzero(a < 0.9)[0]
    if below.size == 0 or np.any(a[below[0]:] > 0.9):
        return "ALMOST_PERIODIC"

    # envelope through local maxima of |f| (endpoints included)
    peaks = [0]
    for k in range(1, t.size - 1):
        if a[k] >= a[k - 1] and a[k] >= a[k + 1]:
            peaks.append(k)
    peaks = np.array(peaks)
    usable = peaks[(a[peaks] > 1e-12) & (t[peaks] > 0)]
    if usable.size < 3:
        usable = np.nonzero((a > 1e-12) & (t > 0))[0]

    loge = np.log(a[usable])

    def resid(x):
        slope, icpt = np.polyfit(x, loge, 1)
        return float(np.sqrt(np.mean((loge - slope * x - icpt) ** 2)))

    r_power = resid(np.log(t[usable]))
    r_gauss = resid(t[usable] ** 2)
    return "POWER_LAW" if r_power < r_gauss else "GAUSSIAN_LIKE"


def power_law_exponent(trace: MagnetizationTrace) -> float:
    """Envelope log-log slope, for traces classified POWER_LAW."""
    t, f = trace.times, trace.values
    a = np.abs(f) / abs(f[0])
    peaks = [k for k in range(1, t.size - 1)
             if a[k] >= a[k - 1] and a[k] >= a[k + 1] and a[k] > 1e-12]
    peaks = np.array(peaks)
    return float(np.polyfit(np.log(t[peaks]), np.log(a[peaks]), 1)[0])


# --- stability -------------------------------------------------------------

@dataclass(frozen=True)
class StabilityReport:
    stable: bool
    first_kind: bool
    second_kind: bool
    no_exponential_decay: bool
    summability_class: str
    rationale: str


def stability_classify(kernel: InteractionKernel,
                       distribution: CouplingDistribution) -> StabilityReport:
    """Qualitative stability flags for a kernel/coupling pair.

    Second-kind stability (energy bounded below proportionally to the
    volume) needs a summable profile and bounded couplings, and then rules
    out exponential decay of the magnetization.  Unbounded couplings break
    even first-kind stability, which is how the Gaussian ensemble admits
    its Gaussian-fast return to equilibrium.
    """
    bounded = distribution.bounded_support
    l1 = kernel.summability_class == "L1"
    first = bounded
    second = bounded and l1
    stable = kernel.summability_class in ("L1", "L2_ONLY")
    bits = []
    bits.append("profile " + {"L1": "summable", "L2_ONLY": "square-summable only",
                              "NONE": "not square-summable"}[kernel.summability_class])
    bits.append(("bounded" if bounded else "unbounded") + " coupling support")
    if second:
        bits.append("local field operator semibounded: exponential decay excluded")
    elif not first:
        bits.append("energy unbounded below even at fixed volume")
    return StabilityReport(stable, first, second, second,
                           kernel.summability_class, "; ".join(bits))
