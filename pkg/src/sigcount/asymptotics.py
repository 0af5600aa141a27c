"""Closed-form large-matrix predictions for sample covariance spectra.

Everything here is deterministic arithmetic in the aspect ratio c = n/m:
the joint CLT for the first two spectral moments of a noise-only sample
covariance, the almost-sure limits of spiked sample eigenvalues, the
effective number of detectable signals, and the two-source identifiability
condition.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import DomainError, SampleSpectrum, ScenarioSpec, VALID_BETAS

__all__ = [
    "MomentCLT",
    "SpikedPrediction",
    "q_matrix",
    "clt_statistics",
    "moment_clt",
    "spiked_limit",
    "detection_threshold",
    "bulk_edge",
    "effective_num_signals",
    "two_source_eigenvalues",
    "identifiability_check",
]


def q_matrix(c: float, beta: int = 1) -> np.ndarray:
    """Limit covariance of the centered pair (sum l_i, sum l_i^2).

    Equals (2/beta) [[c, 2c(c+1)], [2c(c+1), 2c(2c^2 + 5c + 2)]]; symmetric
    positive definite for every c > 0.
    """
    if c <= 0:
        raise DomainError(f"aspect ratio c must be > 0, got {c}")
    if beta not in VALID_BETAS:
        raise DomainError(f"beta must be one of {VALID_BETAS}, got {beta}")
    off = 2.0 * c * (c + 1.0)
    return (2.0 / beta) * np.array([[c, off], [off, 2.0 * c * (2.0 * c**2 + 5.0 * c + 2.0)]])


@dataclass(frozen=True)
class MomentCLT:
    """Gaussian limit of the first two spectral moments of a noise-only SCM.

    ``centering`` holds what is subtracted from (sum l_i, sum l_i^2); the
    centered pair converges to a zero-mean Gaussian with covariance
    ``covariance``.
    """

    n: int
    m: int
    beta: int

    @property
    def c(self) -> float:
        return self.n / self.m

    @property
    def centering(self) -> tuple[float, float]:
        c = self.c
        return (float(self.n), self.n * (1.0 + c) + (2.0 / self.beta - 1.0) * c)

    @property
    def covariance(self) -> np.ndarray:
        return q_matrix(self.c, self.beta)


def moment_clt(n: int, m: int, beta: int = 1) -> MomentCLT:
    """Bundle the CLT centering and covariance for an (n, m, beta) setting."""
    if n < 1 or m < 1:
        raise DomainError(f"n and m must be positive, got n={n}, m={m}")
    if beta not in VALID_BETAS:
        raise DomainError(f"beta must be one of {VALID_BETAS}, got {beta}")
    return MomentCLT(n=n, m=m, beta=beta)


def clt_statistics(spectrum: SampleSpectrum) -> tuple[float, float]:
    """Centered moment pair (sum l_i - n, sum l_i^2 - n(1+c) - (2/beta - 1)c).

    For a noise-only unit-variance spectrum this pair is asymptotically
    N(0, Q) with Q from :func:`q_matrix` at c = n/m.
    """
    eigs = spectrum.eigenvalues
    first, second = moment_clt(spectrum.n, spectrum.m, spectrum.beta).centering
    return (float(eigs.sum()) - first, float((eigs * eigs).sum()) - second)


def detection_threshold(sigma2: float, c: float) -> float:
    """Population eigenvalue level sigma2 (1 + sqrt(c)) separating detectable spikes."""
    return sigma2 * (1.0 + math.sqrt(c))


def bulk_edge(sigma2: float, c: float) -> float:
    """Almost-sure limit sigma2 (1 + sqrt(c))^2 of the largest noise eigenvalue."""
    return sigma2 * (1.0 + math.sqrt(c)) ** 2


@dataclass(frozen=True)
class SpikedPrediction:
    """Almost-sure limit of one sample eigenvalue under a spiked covariance."""

    population_eigenvalue: float
    limit: float
    above_threshold: bool


def spiked_limit(lambda_j: float, sigma2: float, c: float) -> SpikedPrediction:
    """Limit of the j-th sample eigenvalue for population eigenvalue lambda_j.

    Above the detection threshold sigma2 (1 + sqrt(c)) the sample eigenvalue
    separates to lambda_j (1 + sigma2 c / (lambda_j - sigma2)); at or below it
    the sample eigenvalue sticks to the bulk edge sigma2 (1 + sqrt(c))^2. The
    two branches agree at the threshold.

    Raises:
        DomainError: unless lambda_j >= sigma2 > 0 and c > 0.
    """
    if sigma2 <= 0:
        raise DomainError(f"sigma2 must be > 0, got {sigma2}")
    if lambda_j < sigma2:
        raise DomainError(f"lambda_j must be >= sigma2={sigma2}, got {lambda_j}")
    if c <= 0:
        raise DomainError(f"aspect ratio c must be > 0, got {c}")
    above = lambda_j > detection_threshold(sigma2, c)
    if above:
        limit = lambda_j * (1.0 + sigma2 * c / (lambda_j - sigma2))
    else:
        limit = bulk_edge(sigma2, c)
    return SpikedPrediction(population_eigenvalue=lambda_j, limit=limit, above_threshold=above)


def effective_num_signals(spec: ScenarioSpec) -> int:
    """Signals strictly above the detection threshold sigma2 (1 + sqrt(n/m)).

    Only these are asymptotically distinguishable from noise using sample
    eigenvalues alone; eigenvalues exactly at the threshold do not count.
    """
    threshold = detection_threshold(spec.noise_variance, spec.n / spec.m)
    return int(sum(1 for lam in spec.signal_eigenvalues if lam > threshold))


def two_source_eigenvalues(
    p1: float,
    p2: float,
    norm1: float,
    norm2: float,
    inner: float,
    sigma2: float,
) -> tuple[float, float]:
    """Top two population eigenvalues of p1 v1 v1' + p2 v2 v2' + sigma2 I.

    Takes source powers p1, p2, the norms of the two steering vectors, and
    the magnitude of their inner product. The discriminant is evaluated with
    hypot to stay stable when the two rank-one terms nearly balance.

    Raises:
        DomainError: non-positive powers/norms, negative inner product
            magnitude, or inner > norm1 * norm2 (Cauchy-Schwarz).
    """
    if p1 <= 0 or p2 <= 0:
        raise DomainError(f"source powers must be > 0, got {p1}, {p2}")
    if norm1 <= 0 or norm2 <= 0:
        raise DomainError(f"vector norms must be > 0, got {norm1}, {norm2}")
    if inner < 0:
        raise DomainError(f"inner product magnitude must be >= 0, got {inner}")
    if inner > norm1 * norm2 * (1.0 + 1e-15):
        raise DomainError(
            f"inner product {inner} exceeds norm1*norm2={norm1 * norm2} (Cauchy-Schwarz)"
        )
    d1 = p1 * norm1**2
    d2 = p2 * norm2**2
    half_sum = (d1 + d2) / 2.0
    half_disc = math.hypot(d1 - d2, 2.0 * math.sqrt(p1 * p2) * inner) / 2.0
    return (sigma2 + half_sum + half_disc, sigma2 + half_sum - half_disc)


def identifiability_check(
    p: float,
    norm: float,
    inner: float,
    sigma2: float,
    n: int,
    m: int,
) -> bool:
    """Can two equal-power, equal-norm sources both be detected asymptotically?

    True iff p norm^2 (1 - inner/norm) > sigma2 sqrt(n/m). For unit-norm
    steering vectors this is exactly the condition that the smaller of the
    two population eigenvalues clears the detection threshold.

    Raises:
        DomainError: any negative input.
    """
    if p < 0 or norm < 0 or inner < 0 or sigma2 < 0:
        raise DomainError("all inputs must be non-negative")
    if norm == 0 or n < 1 or m < 1:
        raise DomainError(f"need norm > 0 and positive n, m; got norm={norm}, n={n}, m={m}")
    return p * norm**2 * (1.0 - inner / norm) > sigma2 * math.sqrt(n / m)
