"""Shared builders for the test suite."""

import numpy as np

from sigcount import SampleSpectrum, validate_spectrum


def spectrum_from(values, m, beta=1) -> SampleSpectrum:
    """Spectrum from a plain list; n is inferred from the length."""
    arr = np.asarray(values, dtype=float)
    return validate_spectrum(arr, arr.size, m, beta)
