"""Seeded random source shared by every sampler in the package.

A single ``Rng`` owns one PCG64 stream. The seed fully determines every
draw sequence, draws are identical across runs and platforms, and the
state round-trips through ``state_dict`` so a stream can be checkpointed
and resumed mid-run. Rejection-based draws (gamma) consume a variable
number of underlying uniforms, so determinism is a property of the
uniform stream, not of a fixed draw count.

Gamma draws use the shape-rate convention throughout: the density is
proportional to ``x**(shape-1) * exp(-rate*x)``.
"""

from __future__ import annotations

import copy

import numpy as np

_UINT64_MAX = 2**64 - 1


class Rng:
    """Deterministic random generator with scalar and batch draw primitives.

    A generator is owned by one thread of execution at a time; replication
    studies should give each replicate its own ``spawn(index)`` stream
    instead of sharing a single instance.
    """

    def __init__(self, seed: int):
        seed = int(seed)
        if not 0 <= seed <= _UINT64_MAX:
            raise ValueError(f"seed must fit in an unsigned 64-bit integer, got {seed}")
        self.seed = seed
        self._gen = np.random.Generator(np.random.PCG64(seed))

    def __repr__(self) -> str:
        return f"Rng(seed={self.seed})"

    def spawn(self, index: int) -> "Rng":
        """Independent generator for replicate `index` (seed = base seed + index)."""
        if index < 0:
            raise ValueError("replicate index must be nonnegative")
        return Rng((self.seed + int(index)) % (_UINT64_MAX + 1))

    # scalar draws ---------------------------------------------------------

    def uniform(self) -> float:
        """One draw from U[0, 1)."""
        return float(self._gen.random())

    def normal(self, mean: float = 0.0, sd: float = 1.0) -> float:
        if sd <= 0.0:
            raise ValueError(f"normal draw needs sd > 0, got {sd}")
        return float(self._gen.normal(mean, sd))

    def gamma(self, shape: float, rate: float) -> float:
        if shape <= 0.0 or rate <= 0.0:
            raise ValueError(f"gamma draw needs shape > 0 and rate > 0, got ({shape}, {rate})")
        return float(self._gen.gamma(shape, 1.0 / rate))

    # batch draws ----------------------------------------------------------

    def uniforms(self, n: int) -> np.ndarray:
        return self._gen.random(int(n))

    def normals(self, n: int, mean: float = 0.0, sd: float = 1.0) -> np.ndarray:
        if sd <= 0.0:
            raise ValueError(f"normal draw needs sd > 0, got {sd}")
        return self._gen.normal(mean, sd, size=int(n))

    def gammas(self, n: int, shape: float, rate: float) -> np.ndarray:
        if shape <= 0.0 or rate <= 0.0:
            raise ValueError(f"gamma draw needs shape > 0 and rate > 0, got ({shape}, {rate})")
        return self._gen.gamma(shape, 1.0 / rate, size=int(n))

    # checkpointing --------------------------------------------------------

    def state_dict(self) -> dict:
        """JSON-serializable snapshot; restoring it continues the stream exactly."""
        return {"seed": self.seed, "state": copy.deepcopy(self._gen.bit_generator.state)}

    @classmethod
    def from_state_dict(cls, snapshot: dict) -> "Rng":
        rng = cls(snapshot["seed"])
        rng._gen.bit_generator.state = copy.deepcopy(snapshot["state"])
        return rng
