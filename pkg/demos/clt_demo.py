"""Check the noise-only moment fluctuations against their Gaussian limit.

For a pure-noise sample covariance the first two spectral moments, suitably
centered, fluctuate jointly like a two-dimensional Gaussian whose covariance
has a closed form in the aspect ratio c = n/m. This demo simulates a few
thousand independent spectra for real and complex data and prints the
empirical moments next to the prediction. The complex case fluctuates with
exactly half the variance of the real case.
"""

import numpy as np

from sigcount import run_clt_check

SEED = 7
TRIALS = 2000


def show(report):
    kind = {1: "real", 2: "complex"}[report.beta]
    print(f"{kind} data, n={report.n}, m={report.m}, {report.trials} trials")
    print(f"  empirical mean : {np.array2string(report.empirical_mean, precision=4)}"
          f"   (tolerance {np.array2string(report.mean_tolerance, precision=4)})")
    print("  empirical cov  :",
          np.array2string(report.empirical_cov, precision=3, prefix="  empirical cov  : "))
    print("  predicted cov  :",
          np.array2string(report.predicted_cov, precision=3, prefix="  predicted cov  : "))
    print(f"  verdict: {'PASS' if report.passed else 'FAIL'}")
    print()


def main():
    for beta in (1, 2):
        show(run_clt_check(80, 160, beta, TRIALS, SEED))


if __name__ == "__main__":
    main()
