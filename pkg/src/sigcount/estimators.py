"""Signal-count estimators operating on a sample eigenvalue spectrum.

Three estimators share the same contract: scan candidate signal counts
k = 0, ..., min(n, m) - 1, score each k from the n - k smallest eigenvalues,
and return the smallest k attaining the minimum score.

``estimate_wk_aic`` and ``estimate_wk_mdl`` are the classical information
criteria built on the arithmetic/geometric mean ratio of the noise window.
``estimate_new`` scores the window by how far its mean-square-to-squared-mean
ratio sits from the value random matrix theory predicts for pure noise at
aspect ratio n/m, which keeps it calibrated when m is comparable to or
smaller than n.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import DetectionResult, EstimatorId, SampleSpectrum

__all__ = [
    "WindowMoments",
    "window_moments",
    "estimate_wk_aic",
    "estimate_wk_mdl",
    "estimate_new",
    "ESTIMATORS",
]


@dataclass(frozen=True)
class WindowMoments:
    """Moments of the n - k smallest sample eigenvalues.

    ``t`` is mean_square / mean**2 (+inf when the window mean is 0) and
    ``geo_mean`` is 0 whenever the window contains a zero eigenvalue.
    """

    k: int
    mean: float
    mean_square: float
    geo_mean: float
    t: float


def window_moments(spectrum: SampleSpectrum, k: int) -> WindowMoments:
    """Moments of eigenvalues l_{k+1}, ..., l_n for candidate signal count k."""
    if not 0 <= k < spectrum.n:
        raise ValueError(f"k must satisfy 0 <= k < n={spectrum.n}, got {k}")
    window = spectrum.eigenvalues[k:]
    mean = float(window.mean())
    mean_square = float((window * window).mean())
    if np.any(window == 0.0):
        geo_mean = 0.0
    else:
        geo_mean = float(np.exp(np.log(window).mean()))
    t = mean_square / (mean * mean) if mean > 0.0 else math.inf
    return WindowMoments(k=k, mean=mean, mean_square=mean_square, geo_mean=geo_mean, t=t)


def _argmin_result(criteria: list[float], estimator_id: EstimatorId) -> DetectionResult:
    # Ties (including the all-infinite degenerate case) break to the smallest k.
    k_hat = min(range(len(criteria)), key=lambda k: (criteria[k], k))
    values = tuple((k, criteria[k]) for k in range(len(criteria)))
    return DetectionResult(k_hat=k_hat, criterion_values=values, estimator_id=estimator_id)


def _wk_log_ratio(moments: WindowMoments) -> float:
    """log(g(k) / a(k)); -inf when the window holds a zero eigenvalue."""
    if moments.geo_mean == 0.0 or moments.mean == 0.0:
        return -math.inf
    return math.log(moments.geo_mean / moments.mean)


def estimate_wk_aic(spectrum: SampleSpectrum) -> DetectionResult:
    """AIC form of the classical arithmetic/geometric mean estimator.

    Minimizes -2 (n-k) m log(g(k)/a(k)) + 2 k (2n - k) over
    0 <= k < min(n, m). A window touching a zero eigenvalue of a
    rank-deficient covariance scores +inf, so singular spectra report 0.
    """
    n, m = spectrum.n, spectrum.m
    criteria: list[float] = []
    for k in range(min(n, m)):
        ratio = _wk_log_ratio(window_moments(spectrum, k))
        if ratio == -math.inf:
            criteria.append(math.inf)
        else:
            criteria.append(-2.0 * (n - k) * m * ratio + 2.0 * k * (2 * n - k))
    return _argmin_result(criteria, EstimatorId.WK_AIC)


def estimate_wk_mdl(spectrum: SampleSpectrum) -> DetectionResult:
    """MDL form: -(n-k) m log(g(k)/a(k)) + (1/2) k (2n - k) log m."""
    n, m = spectrum.n, spectrum.m
    criteria: list[float] = []
    for k in range(min(n, m)):
        ratio = _wk_log_ratio(window_moments(spectrum, k))
        if ratio == -math.inf:
            criteria.append(math.inf)
        else:
            criteria.append(-(n - k) * m * ratio + 0.5 * k * (2 * n - k) * math.log(m))
    return _argmin_result(criteria, EstimatorId.WK_MDL)


def estimate_new(spectrum: SampleSpectrum) -> DetectionResult:
    """Random-matrix calibrated AIC estimator of the signal count.

    For each k the noise-window statistic t_{n,k} is compared with the pure
    noise prediction 1 + n/m; the standardized gap

        q_k = n [t_{n,k} - (1 + n/m)] - (2/beta - 1) (n/m)

    is asymptotically N(0, (4/beta)(n/m)^2) under a noise-only window, and the
    criterion (beta/4)(m/n)^2 q_k^2 + 2 (k + 1) is its AIC-penalized square.
    Remains well defined for m < n, where the classical criteria degenerate.
    """
    n, m, beta = spectrum.n, spectrum.m, spectrum.beta
    c = n / m
    criteria: list[float] = []
    for k in range(min(n, m)):
        moments = window_moments(spectrum, k)
        if moments.mean == 0.0:
            criteria.append(math.inf)
            continue
        q_k = n * (moments.t - (1.0 + c)) - (2.0 / beta - 1.0) * c
        criteria.append((beta / 4.0) * (m / n) ** 2 * q_k**2 + 2.0 * (k + 1))
    return _argmin_result(criteria, EstimatorId.NEW_RMT_AIC)


#: Dispatch table used by the simulation harness and the command line.
ESTIMATORS = {
    EstimatorId.NEW_RMT_AIC: estimate_new,
    EstimatorId.WK_AIC: estimate_wk_aic,
    EstimatorId.WK_MDL: estimate_wk_mdl,
}
