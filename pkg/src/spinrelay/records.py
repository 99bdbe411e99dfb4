"""Shared result containers for trajectory simulation and MC estimation."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class ChainRecord:
    """One simulated observer chain.

    ``estimates[j]`` is observer j+1's guess of the encoded direction and
    ``dots[j]`` its overlap with the true direction.
    """

    true_direction: np.ndarray       # shape (3,)
    estimates: np.ndarray            # shape (k, 3)
    dots: np.ndarray                 # shape (k,)

    def __post_init__(self):
        if self.estimates.shape != (self.dots.shape[0], 3):
            raise ValueError("estimates and dots lengths disagree")
        if np.any(np.abs(self.dots) > 1.0 + 1e-12):
            raise ValueError("dot products must lie in [-1, 1]")

    @property
    def n_observers(self) -> int:
        return self.dots.shape[0]


@dataclass(frozen=True)
class McEstimate:
    """Monte Carlo mean with its statistical contract.

    ``stderr`` is the sample standard deviation over sqrt(trials); it is
    None for trials = 1 where the spread is undefined.
    """

    mean: float
    stderr: float | None
    trials: int
    seed: int

    @classmethod
    def from_samples(cls, samples: np.ndarray, seed: int) -> "McEstimate":
        samples = np.asarray(samples, dtype=float)
        n = samples.size
        if n < 1:
            raise ValueError("need at least one sample")
        mean = float(samples.mean())
        stderr = float(samples.std(ddof=1) / np.sqrt(n)) if n > 1 else None
        return cls(mean=mean, stderr=stderr, trials=n, seed=seed)

    def z_score(self, reference: float) -> float | None:
        """(mean - reference) / stderr, or None when stderr is undefined."""
        if self.stderr is None or self.stderr == 0.0:
            return None
        return (self.mean - reference) / self.stderr
