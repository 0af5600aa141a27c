"""Seeded Gaussian snapshot generation.

Each trial owns an independent stream keyed by (master_seed, trial_index),
so results never depend on execution order or thread scheduling. Normal
variates come from numpy's PCG64 generator (ziggurat transform), the one
generator used throughout this package.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import ScenarioSpec, UnsupportedField

__all__ = ["SeedPolicy", "SnapshotMatrix", "standard_gaussian_stream", "generate_snapshots"]


@dataclass(frozen=True)
class SeedPolicy:
    """Derives a reproducible random stream from (master_seed, trial_index)."""

    master_seed: int
    trial_index: int = 0

    def __post_init__(self) -> None:
        if not 0 <= self.master_seed < 2**64:
            raise ValueError(f"master_seed must be a 64-bit unsigned int, got {self.master_seed}")
        if self.trial_index < 0:
            raise ValueError(f"trial_index must be >= 0, got {self.trial_index}")

    def rng(self) -> np.random.Generator:
        """Fresh generator; a pure function of (master_seed, trial_index)."""
        seq = np.random.SeedSequence(entropy=self.master_seed, spawn_key=(self.trial_index,))
        return np.random.Generator(np.random.PCG64(seq))


@dataclass(frozen=True)
class SnapshotMatrix:
    """n x m observation matrix whose columns are independent snapshots."""

    data: np.ndarray
    n: int
    m: int
    beta: int

    def __post_init__(self) -> None:
        data = np.array(self.data, copy=True)
        data.flags.writeable = False
        object.__setattr__(self, "data", data)
        if data.shape != (self.n, self.m):
            raise ValueError(f"expected shape ({self.n}, {self.m}), got {data.shape}")
        if self.beta == 1 and np.iscomplexobj(data):
            raise ValueError("beta=1 snapshots must be real-valued")
        if self.beta == 2 and not np.iscomplexobj(data):
            raise ValueError("beta=2 snapshots must be complex-valued")
        if self.beta not in (1, 2):
            raise UnsupportedField(f"snapshot matrices exist only for beta in (1, 2), got {self.beta}")


def standard_gaussian_stream(seed: SeedPolicy, count: int) -> np.ndarray:
    """`count` i.i.d. N(0, 1) variates, reproducible from the seed policy."""
    if count < 0:
        raise ValueError(f"count must be >= 0, got {count}")
    return seed.rng().standard_normal(count)


def generate_snapshots(spec: ScenarioSpec, seed: SeedPolicy) -> SnapshotMatrix:
    """Draw the n x m snapshot matrix for a scenario.

    Columns are i.i.d. zero-mean Gaussian vectors with diagonal covariance
    diag(lambda_1, ..., lambda_k, sigma2, ..., sigma2). Every consumer in this
    package is eigenvalue-only, and the eigenvalue distribution of the sample
    covariance is invariant under rotations of the population covariance, so
    the diagonal form loses nothing.

    For beta=2 each standard entry has independent real and imaginary parts
    of variance 1/2, giving E|z|^2 = 1 before scaling.

    Raises:
        UnsupportedField: spec.beta is 4 (no quaternion synthesis).
    """
    if spec.beta not in (1, 2):
        raise UnsupportedField(f"snapshot generation supports beta in (1, 2), got {spec.beta}")
    rng = seed.rng()
    scale = np.sqrt(spec.population_eigenvalues())[:, np.newaxis]
    if spec.beta == 1:
        data = scale * rng.standard_normal((spec.n, spec.m))
    else:
        re = rng.standard_normal((spec.n, spec.m))
        im = rng.standard_normal((spec.n, spec.m))
        data = scale * ((re + 1j * im) / np.sqrt(2.0))
    return SnapshotMatrix(data=data, n=spec.n, m=spec.m, beta=spec.beta)
