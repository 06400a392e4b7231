"""Coupling distributions for the disordered models.

Three centered ensembles are supported: symmetric Bernoulli on {-1,+1},
uniform on [-1,1], and a Gaussian whose default density is
pi^(-1/2) exp(-x^2), i.e. variance 1/2.  The Gaussian variance is a
parameter so the unit-variance convention can be exercised as well.
"""

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np


class Kind(Enum):
    BERNOULLI = "bernoulli"
    UNIFORM = "uniform"
    GAUSSIAN = "gaussian"


@dataclass(frozen=True)
class CouplingDistribution:
    kind: Kind
    variance: float = 0.5  # only used by GAUSSIAN

    def __post_init__(self):
        if self.kind is Kind.GAUSSIAN and self.variance <= 0:
            raise ValueError("Gaussian variance must be positive")

    @property
    def bounded_support(self) -> bool:
        return self.kind in (Kind.BERNOULLI, Kind.UNIFORM)


BERNOULLI = CouplingDistribution(Kind.BERNOULLI)
UNIFORM = CouplingDistribution(Kind.UNIFORM)
GAUSSIAN = CouplingDistribution(Kind.GAUSSIAN)  # density pi^(-1/2) e^(-x^2)


def from_name(name: str, variance: float = 0.5) -> CouplingDistribution:
    return CouplingDistribution(Kind(name.lower()), variance)


def sample(dist: CouplingDistribution, rng: np.random.Generator, size=None):
    """I.i.d. draws from the distribution; the stream advance is deterministic."""
    if dist.kind is Kind.BERNOULLI:
        return rng.choice(np.array([-1.0, 1.0]), size=size)
    if dist.kind is Kind.UNIFORM:
        return rng.uniform(-1.0, 1.0, size=size)
    return rng.normal(0.0, np.sqrt(dist.variance), size=size)


def char_function(dist: CouplingDistribution, s):
    """E[cos(s J)], the real characteristic function of the coupling law."""
    s = np.asarray(s, dtype=float)
    if dist.kind is Kind.BERNOULLI:
        out = np.cos(s)
    elif dist.kind is Kind.UNIFORM:
        out = np.sinc(s / np.pi)  # sin(s)/s with the limit 1 at s=0
    else:
        out = np.exp(-0.5 * dist.variance * s**2)
    return out if out.shape else float(out)


def _abs_moment(dist: CouplingDistribution, n: int) -> float:
    """|E[J^n]| in closed form."""
    if n % 2 == 1:
        return 0.0
    if dist.kind is Kind.BERNOULLI:
        return 1.0
    if dist.kind is Kind.UNIFORM:
        return 1.0 / (n + 1)
    # Gaussian: E[J^n] = (n-1)!! * variance^(n/2)
    m = 1.0
    for k in range(1, n, 2):
        m *= k
    return m * dist.variance ** (n / 2)


def moment_bound_check(dist: CouplingDistribution, n_max: int) -> float:
    """Smallest c with |E[J^n]| <= n! c^n for all 2 <= n <= n_max."""
    if n_max < 2:
        raise ValueError("n_max must be >= 2")
    c = 0.0
    for n in range(2, n_max + 1):
        m = _abs_moment(dist, n)
        if m > 0:
            c = max(c, (m / math.factorial(n)) ** (1.0 / n))
    return c
