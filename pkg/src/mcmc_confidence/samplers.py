"""The example Markov chain samplers: AR(1), a data-augmentation sampler
targeting the 4-df Student t, and a two-block Gibbs sampler for a normal
mean/variance posterior.

Chains carry their provenance (sampler id, parameters, seed) and are
append-only: extending a chain never mutates the prefix, so running
estimates computed on a prefix stay valid after more samples arrive.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import NamedTuple, Optional

import numpy as np

from .rng import Rng

__all__ = [
    "Ar1Params",
    "NormalPosteriorParams",
    "TdaState",
    "Chain",
    "ar1_step",
    "ar1_run",
    "ar1_extend",
    "Ar1Source",
    "tda_step",
    "tda_run",
    "nv_gibbs_step",
    "nv_gibbs_run",
]


@dataclass(frozen=True)
class Ar1Params:
    """x' = rho * x + N(0, tau^2) innovation; |rho| < 1 keeps it stationary."""

    rho: float
    tau: float = 1.0

    def __post_init__(self):
        if not abs(self.rho) < 1.0:
            raise ValueError(f"need |rho| < 1 for stationarity, got {self.rho}")
        if self.tau <= 0.0:
            raise ValueError(f"innovation sd tau must be positive, got {self.tau}")

    @property
    def stationary_sd(self) -> float:
        return self.tau / math.sqrt(1.0 - self.rho * self.rho)


@dataclass(frozen=True)
class NormalPosteriorParams:
    """Sufficient statistics of the observed sample: size m, mean, biased variance."""

    m: int = 11
    y_bar: float = 1.0
    s2: float = 4.0

    def __post_init__(self):
        if self.m < 3:
            raise ValueError(f"sample size m must be at least 3, got {self.m}")
        if self.s2 <= 0.0:
            raise ValueError(f"sample variance s2 must be positive, got {self.s2}")


class TdaState(NamedTuple):
    x: float
    y: float


@dataclass(frozen=True)
class Chain:
    """Ordered sampler output plus provenance.

    ``values`` is (n,) for scalar chains and (n, 2) for paired ones; the
    pairing of components is never broken up.
    """

    values: np.ndarray
    sampler: str
    params: dict = field(default_factory=dict)
    seed: Optional[int] = None

    def __post_init__(self):
        if len(self.values) < 1:
            raise ValueError("a chain must hold at least one state")

    def __len__(self) -> int:
        return len(self.values)


# AR(1) -------------------------------------------------------------------


def ar1_step(x: float, params: Ar1Params, rng: Rng) -> float:
    return params.rho * x + rng.normal(0.0, params.tau)


def _ar1_recur(x0: float, rho: float, eps: np.ndarray) -> np.ndarray:
    out = np.empty(eps.size + 1)
    out[0] = x = x0
    for i, e in enumerate(eps.tolist()):
        x = rho * x + e
        out[i + 1] = x
    return out


def ar1_run(n: int, params: Ar1Params, rng: Rng, x0: float = 1.0) -> Chain:
    """Chain of n states starting at x0 (the start value is state 1)."""
    if n < 1:
        raise ValueError(f"chain length must be positive, got {n}")
    eps = rng.normals(n - 1, 0.0, params.tau)
    return Chain(
        values=_ar1_recur(x0, params.rho, eps),
        sampler="ar1",
        params={"rho": params.rho, "tau": params.tau, "x0": x0},
        seed=rng.seed,
    )


def ar1_extend(chain: Chain, p: int, params: Ar1Params, rng: Rng) -> Chain:
    """Append p freshly generated states; the input chain is left untouched."""
    if p < 1:
        raise ValueError(f"extension length must be positive, got {p}")
    eps = rng.normals(p, 0.0, params.tau)
    tail = _ar1_recur(float(chain.values[-1]), params.rho, eps)[1:]
    return Chain(
        values=np.concatenate((chain.values, tail)),
        sampler=chain.sampler,
        params=chain.params,
        seed=chain.seed,
    )


class Ar1Source:
    """Chain factory the fixed-width stopping rules drive."""

    def __init__(self, params: Ar1Params, x0: float = 1.0):
        self.params = params
        self.x0 = x0

    def start(self, n: int, rng: Rng) -> Chain:
        return ar1_run(n, self.params, rng, self.x0)

    def extend(self, chain: Chain, p: int, rng: Rng) -> Chain:
        return ar1_extend(chain, p, self.params, rng)

    def truth_mean(self) -> float:
        return 0.0

    def truth_quantile(self, p: float) -> float:
        from .distributions import normal_quantile

        return normal_quantile(p) * self.params.stationary_sd


# data augmentation for the t4 target ---------------------------------------


def tda_step(state: TdaState, rng: Rng) -> TdaState:
    """One transition (x', y') -> (x, y') -> (x, y).

    x | y' ~ N(0, 1/y'), then y | x ~ Gamma(5/2, rate 2 + x^2/2).
    """
    x = rng.normal(0.0, math.sqrt(1.0 / state.y))
    y = rng.gamma(2.5, 2.0 + 0.5 * x * x)
    return TdaState(x, y)


def tda_run(n: int, rng: Rng, init: TdaState = TdaState(1.0, 1.0)) -> Chain:
    """Bivariate (x, y) chain of n states, init included as state 1."""
    if n < 1:
        raise ValueError(f"chain length must be positive, got {n}")
    if init.y <= 0.0:
        raise ValueError(f"latent coordinate y must be positive, got {init.y}")
    out = np.empty((n, 2))
    out[0, 0], out[0, 1] = init.x, init.y
    y = init.y
    normal = rng.normal
    gamma = rng.gamma
    for i in range(1, n):
        x = normal(0.0, math.sqrt(1.0 / y))
        y = gamma(2.5, 2.0 + 0.5 * x * x)
        out[i, 0] = x
        out[i, 1] = y
    return Chain(values=out, sampler="tda", params={"init": (init.x, init.y)}, seed=rng.seed)


# Gibbs sampler for the normal mean/variance posterior ----------------------


def nv_gibbs_step(
    state: tuple[float, float],
    params: NormalPosteriorParams,
    rng: Rng,
    order: str = "theta-first",
) -> tuple[float, float]:
    """One Gibbs transition for (mu, theta).

    Default order refreshes the variance first: theta | mu via the inverse
    gamma (reciprocal of a gamma draw), then mu | theta ~ N(y_bar,
    theta/m). ``order="mu-first"`` runs the two conditional draws the other
    way round; both leave the same posterior invariant.
    """
    mu, theta = state
    m, y_bar, s2 = params.m, params.y_bar, params.s2
    if order == "theta-first":
        g = rng.gamma(0.5 * (m - 1), 0.5 * m * (s2 + (y_bar - mu) ** 2))
        theta = 1.0 / g
        mu = rng.normal(y_bar, math.sqrt(theta / m))
    elif order == "mu-first":
        mu = rng.normal(y_bar, math.sqrt(theta / m))
        g = rng.gamma(0.5 * (m - 1), 0.5 * m * (s2 + (y_bar - mu) ** 2))
        theta = 1.0 / g
    else:
        raise ValueError(f"unknown update order {order!r}")
    return mu, theta


def nv_gibbs_run(
    n: int,
    params: NormalPosteriorParams,
    rng: Rng,
    init: tuple[float, float] = (1.0, 1.0),
    order: str = "theta-first",
) -> Chain:
    """Bivariate (mu, theta) chain of n states, init included as state 1."""
    if n < 1:
        raise ValueError(f"chain length must be positive, got {n}")
    mu, theta = float(init[0]), float(init[1])
    if theta <= 0.0:
        raise ValueError(f"variance coordinate theta must be positive, got {theta}")
    if order not in ("theta-first", "mu-first"):
        raise ValueError(f"unknown update order {order!r}")
    out = np.empty((n, 2))
    out[0, 0], out[0, 1] = mu, theta
    for i in range(1, n):
        mu, theta = nv_gibbs_step((mu, theta), params, rng, order)
        out[i, 0] = mu
        out[i, 1] = theta
    return Chain(
        values=out,
        sampler="normal-gibbs",
        params={"m": params.m, "y_bar": params.y_bar, "s2": params.s2, "order": order},
        seed=rng.seed,
    )
