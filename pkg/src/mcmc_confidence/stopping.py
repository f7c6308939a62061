"""Fixed-width sequential stopping rules.

The simulation grows until the interval half-width, padded by 1/N, drops
to the target epsilon: ``while half + 1/N > epsilon: N += step``. The 1/N
term forces N >= 1/epsilon before termination can even be considered.
Everything is recomputed from scratch at each check, exactly as a batch
re-analysis would; checks happen only every ``step`` iterations so the
total cost stays modest.

Hitting ``max_n`` without meeting the criterion is a reportable outcome
(``converged=False``), not an exception, so replication studies can tally
non-convergence.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .distributions import t_quantile
from .mcse import MIN_SAMPLES, mcse_obm, subsample_quantile_se
from .rng import Rng
from .samplers import Chain

__all__ = ["StoppingConfig", "StoppingResult", "fixed_width_mean", "fixed_width_quantiles"]


@dataclass(frozen=True)
class StoppingConfig:
    epsilon: float = 0.1
    level: float = 0.9
    step: int = 1000
    pilot_n: int = 2000
    max_n: int = 200_000

    def __post_init__(self):
        if self.epsilon <= 0.0:
            raise ValueError(f"target half-width epsilon must be positive, got {self.epsilon}")
        if not 0.0 < self.level < 1.0:
            raise ValueError(f"level must lie in (0, 1), got {self.level}")
        if self.step < 1:
            raise ValueError(f"step must be a positive integer, got {self.step}")
        if self.pilot_n < MIN_SAMPLES:
            raise ValueError(f"pilot_n must be at least {MIN_SAMPLES}, got {self.pilot_n}")
        if self.pilot_n > self.max_n:
            raise ValueError(f"pilot_n {self.pilot_n} exceeds max_n {self.max_n}")


@dataclass
class StoppingResult:
    terminal_n: int
    half_width: float  # the half-width that drove the stop (max over functionals)
    half_widths: np.ndarray
    estimates: np.ndarray
    converged: bool
    trace: list = field(default_factory=list)  # (N, half) at every check
    chain: Chain | None = None


def _mean_half_width(chain: Chain, level: float) -> float:
    est = mcse_obm(chain.values, "sqroot")
    df = est.n - est.b + 1
    return t_quantile(level, df) * est.se


def fixed_width_mean(source, config: StoppingConfig, rng: Rng) -> StoppingResult:
    """Grow the chain until the OBM t interval for the mean is narrow enough.

    ``source`` provides ``start(n, rng)`` and ``extend(chain, p, rng)``.
    """
    chain = source.start(config.pilot_n, rng)
    n = len(chain)
    half = _mean_half_width(chain, config.level)
    trace = [(n, half)]
    while half + 1.0 / n > config.epsilon and n < config.max_n:
        chain = source.extend(chain, config.step, rng)
        n = len(chain)
        half = _mean_half_width(chain, config.level)
        trace.append((n, half))
    return StoppingResult(
        terminal_n=n,
        half_width=half,
        half_widths=np.array([half]),
        estimates=np.array([float(np.mean(chain.values))]),
        converged=half + 1.0 / n <= config.epsilon,
        trace=trace,
        chain=chain,
    )


def _quantile_check(chain: Chain, probabilities, level: float, bonferroni: bool):
    qset = subsample_quantile_se(chain.values, probabilities)
    adj = 1.0 - (1.0 - level) / len(qset.probabilities) if bonferroni else level
    crit = t_quantile(adj, qset.n - qset.b + 1)
    return crit * qset.ses, qset


def fixed_width_quantiles(
    source,
    probabilities: Sequence[float],
    config: StoppingConfig,
    rng: Rng,
    bonferroni: bool = False,
) -> StoppingResult:
    """Same loop with the largest per-quantile half-width driving the stop.

    With ``bonferroni`` the critical level is inflated to 1 - (1-level)/k
    so the k intervals hold simultaneously.
    """
    probs = tuple(float(p) for p in probabilities)
    chain = source.start(config.pilot_n, rng)
    n = len(chain)
    halves, qset = _quantile_check(chain, probs, config.level, bonferroni)
    half = float(np.max(halves))
    trace = [(n, half)]
    while half + 1.0 / n > config.epsilon and n < config.max_n:
        chain = source.extend(chain, config.step, rng)
        n = len(chain)
        halves, qset = _quantile_check(chain, probs, config.level, bonferroni)
        half = float(np.max(halves))
        trace.append((n, half))
    return StoppingResult(
        terminal_n=n,
        half_width=half,
        half_widths=halves,
        estimates=qset.point_estimates,
        converged=half + 1.0 / n <= config.epsilon,
        trace=trace,
        chain=chain,
    )
