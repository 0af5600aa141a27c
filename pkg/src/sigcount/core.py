"""Shared domain types: scenarios, sample spectra, detection results."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "NonFiniteInput",
    "NegativeEigenvalue",
    "UnsupportedField",
    "ConvergenceFailure",
    "DomainError",
    "VALID_BETAS",
    "CLAMP_RTOL",
    "EstimatorId",
    "ScenarioSpec",
    "SampleSpectrum",
    "DetectionResult",
    "validate_spectrum",
]

#: Field indicator: 1 real, 2 complex, 4 quaternion (formula evaluation only).
VALID_BETAS = (1, 2, 4)

#: Relative tolerance (vs. the largest eigenvalue) below which round-off
#: eigenvalues of a rank-deficient covariance are snapped to exactly zero.
CLAMP_RTOL = 1e-10


class NonFiniteInput(ValueError):
    """An input array contains NaN or infinity."""


class NegativeEigenvalue(ValueError):
    """An eigenvalue is negative beyond round-off tolerance (non-PSD input)."""


class UnsupportedField(ValueError):
    """Operation does not support the requested field indicator beta."""


class ConvergenceFailure(RuntimeError):
    """Eigenvalue iteration failed to reach tolerance."""


class DomainError(ValueError):
    """Arguments violate the mathematical domain of a formula."""


class EstimatorId(enum.Enum):
    """Identifiers for the three signal-count estimators."""

    NEW_RMT_AIC = "NEW_RMT_AIC"
    WK_AIC = "WK_AIC"
    WK_MDL = "WK_MDL"

    def __str__(self) -> str:
        return self.value


def _check_beta(beta: int) -> int:
    if beta not in VALID_BETAS:
        raise UnsupportedField(f"beta must be one of {VALID_BETAS}, got {beta!r}")
    return int(beta)


@dataclass(frozen=True)
class ScenarioSpec:
    """Population covariance description used to synthesize snapshots.

    The population covariance is diag(lambda_1, ..., lambda_k, sigma2, ...,
    sigma2): ``signal_eigenvalues`` holds the k eigenvalues strictly above the
    noise floor, the remaining n - k equal ``noise_variance``.
    """

    signal_eigenvalues: tuple[float, ...]
    noise_variance: float
    n: int
    m: int
    beta: int = 1

    def __post_init__(self) -> None:
        object.__setattr__(
            self, "signal_eigenvalues", tuple(float(v) for v in self.signal_eigenvalues)
        )
        sig = self.signal_eigenvalues
        if not all(math.isfinite(v) for v in sig) or not math.isfinite(self.noise_variance):
            raise NonFiniteInput("scenario eigenvalues must be finite")
        if self.noise_variance <= 0:
            raise ValueError(f"noise_variance must be > 0, got {self.noise_variance}")
        if any(a < b for a, b in zip(sig, sig[1:])):
            raise ValueError("signal_eigenvalues must be sorted non-increasing")
        if any(v <= self.noise_variance for v in sig):
            raise ValueError(
                "every signal eigenvalue must exceed the noise variance "
                f"{self.noise_variance}, got {sig}"
            )
        if self.n < 1 or self.m < 1:
            raise ValueError(f"n and m must be positive, got n={self.n}, m={self.m}")
        if len(sig) >= self.n:
            raise ValueError(
                f"need fewer signals than sensors: k={len(sig)} >= n={self.n}"
            )
        _check_beta(self.beta)

    @property
    def k(self) -> int:
        """Number of signal eigenvalues."""
        return len(self.signal_eigenvalues)

    def population_eigenvalues(self) -> np.ndarray:
        """All n population eigenvalues, descending."""
        out = np.full(self.n, self.noise_variance)
        out[: self.k] = self.signal_eigenvalues
        return out


@dataclass(frozen=True)
class SampleSpectrum:
    """Descending eigenvalues of a sample covariance matrix.

    Construct through :func:`validate_spectrum`, which sorts and clamps
    round-off; direct construction checks but does not repair.
    """

    eigenvalues: np.ndarray
    n: int
    m: int
    beta: int = 1

    def __post_init__(self) -> None:
        eigs = np.array(self.eigenvalues, dtype=float, copy=True)
        eigs.flags.writeable = False
        object.__setattr__(self, "eigenvalues", eigs)
        if eigs.ndim != 1 or eigs.size != self.n:
            raise ValueError(f"expected {self.n} eigenvalues, got shape {eigs.shape}")
        if self.n < 1 or self.m < 1:
            raise ValueError(f"n and m must be positive, got n={self.n}, m={self.m}")
        if not np.all(np.isfinite(eigs)):
            raise NonFiniteInput("eigenvalues must be finite")
        if np.any(eigs < 0):
            raise NegativeEigenvalue("eigenvalues must be non-negative")
        if np.any(np.diff(eigs) > 0):
            raise ValueError("eigenvalues must be sorted non-increasing")
        _check_beta(self.beta)


@dataclass(frozen=True)
class DetectionResult:
    """Estimated signal count with the per-k criterion values behind it."""

    k_hat: int
    criterion_values: tuple[tuple[int, float], ...]
    estimator_id: EstimatorId

    def criterion(self, k: int) -> float:
        for kk, value in self.criterion_values:
            if kk == k:
                return value
        raise KeyError(f"k={k} outside the searched range")


def validate_spectrum(eigs, n: int, m: int, beta: int = 1) -> SampleSpectrum:
    """Build a SampleSpectrum from raw eigensolver output.

    Sorts descending and snaps round-off noise to exact zeros so that the
    zero modes of a rank-deficient covariance come out as true zeros.

    Args:
        eigs: n eigenvalues in any order.
        n: sensor count; must equal len(eigs).
        m: snapshot count the covariance was formed from.
        beta: field indicator in {1, 2, 4}.

    Raises:
        NonFiniteInput: any entry is NaN or infinite.
        NegativeEigenvalue: an entry is more negative than round-off
            (magnitude above ``CLAMP_RTOL`` times the largest eigenvalue).
    """
    arr = np.asarray(eigs, dtype=float).reshape(-1)
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    if arr.size != n:
        raise ValueError(f"expected {n} eigenvalues, got {arr.size}")
    if m < 1:
        raise ValueError(f"m must be >= 1, got {m}")
    _check_beta(beta)
    if not np.all(np.isfinite(arr)):
        raise NonFiniteInput("eigenvalues contain NaN or infinity")
    arr = np.sort(arr)[::-1].copy()
    tol = CLAMP_RTOL * max(arr[0], 0.0)
    if arr[-1] < -tol:
        raise NegativeEigenvalue(
            f"eigenvalue {arr[-1]} below -{tol:g}; input covariance is not PSD"
        )
    arr[np.abs(arr) <= tol] = 0.0
    return SampleSpectrum(eigenvalues=arr, n=n, m=m, beta=beta)
