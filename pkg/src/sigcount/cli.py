"""Command line frontend: estimate | simulate | keff | limits | clt-check.

Exit codes: 0 success, 1 statistical failure (clt-check only), 2 input
parse failure, 3 validation failure.
"""

from __future__ import annotations

import argparse
import csv
import math
import sys

import numpy as np

from .asymptotics import (
    bulk_edge,
    detection_threshold,
    effective_num_signals,
    spiked_limit,
)
from .core import (
    DomainError,
    EstimatorId,
    NegativeEigenvalue,
    NonFiniteInput,
    SampleSpectrum,
    ScenarioSpec,
    UnsupportedField,
    validate_spectrum,
)
from .covariance import hermitian_eigenvalues, sample_covariance
from .estimators import ESTIMATORS
from .montecarlo import ExperimentPlan, run_clt_check, run_experiment
from .snapshots import SnapshotMatrix

__all__ = [
    "main",
    "DEFAULT_SEED",
    "InputFormatError",
    "load_input_file",
    "write_eigenvalue_file",
    "write_snapshot_file",
]

#: Fixed default so bare invocations are reproducible; override with --seed.
DEFAULT_SEED = 1729

_VALIDATION_ERRORS = (
    ValueError,
    DomainError,
    NonFiniteInput,
    NegativeEigenvalue,
    UnsupportedField,
)

_ESTIMATOR_ALIASES = {
    "new": EstimatorId.NEW_RMT_AIC,
    "aic": EstimatorId.WK_AIC,
    "mdl": EstimatorId.WK_MDL,
}


class InputFormatError(Exception):
    """Unparseable input file; carries the offending 1-based line number."""

    def __init__(self, line: int, message: str):
        super().__init__(f"line {line}: {message}")
        self.line = line


# ---------------------------------------------------------------------------
# file formats

def _parse_header(line: str) -> tuple[str, int, int, int]:
    tokens = [t.strip() for t in line.strip().split(",")]
    kind = tokens[0].lower()
    if kind not in ("eigenvalues", "snapshots"):
        raise InputFormatError(1, f"unknown header {tokens[0]!r}; expected 'eigenvalues' or 'snapshots'")
    fields = {}
    for token in tokens[1:]:
        if "=" not in token:
            raise InputFormatError(1, f"malformed header field {token!r}")
        key, _, value = token.partition("=")
        try:
            fields[key.strip()] = int(value)
        except ValueError:
            raise InputFormatError(1, f"non-integer header field {token!r}") from None
    missing = {"n", "m", "beta"} - fields.keys()
    if missing:
        raise InputFormatError(1, f"header missing {sorted(missing)}")
    return kind, fields["n"], fields["m"], fields["beta"]


def _parse_row(text: str, line_no: int) -> list[float]:
    try:
        return [float(cell) for cell in text.split(",")]
    except ValueError:
        raise InputFormatError(line_no, f"could not parse {text.strip()!r} as numbers") from None


def load_input_file(path: str) -> SampleSpectrum | SnapshotMatrix:
    """Read an eigenvalue or snapshot file, auto-detected from the header.

    Raises InputFormatError for structural problems; validation errors from
    the domain constructors pass through unchanged.
    """
    with open(path, "r", encoding="utf-8") as f:
        lines = f.read().splitlines()
    if not lines or not lines[0].strip():
        raise InputFormatError(1, "empty file, expected a header line")
    kind, n, m, beta = _parse_header(lines[0])
    body = [(i + 1, line) for i, line in enumerate(lines) if i > 0 and line.strip()]

    if kind == "eigenvalues":
        values = []
        for line_no, line in body:
            row = _parse_row(line, line_no)
            if len(row) != 1:
                raise InputFormatError(line_no, f"expected one value per line, got {len(row)}")
            values.append(row[0])
        if len(values) != n:
            raise InputFormatError(
                len(lines), f"expected {n} eigenvalues, file holds {len(values)}"
            )
        return validate_spectrum(values, n, m, beta)

    if len(body) != n:
        raise InputFormatError(len(lines), f"expected {n} snapshot rows, file holds {len(body)}")
    width = m if beta == 1 else 2 * m
    rows = []
    for line_no, line in body:
        row = _parse_row(line, line_no)
        if len(row) != width:
            raise InputFormatError(line_no, f"expected {width} values per row, got {len(row)}")
        rows.append(row)
    data = np.asarray(rows)
    if beta == 2:
        data = data[:, 0::2] + 1j * data[:, 1::2]
    return SnapshotMatrix(data=data, n=n, m=m, beta=beta)


def write_eigenvalue_file(path: str, spectrum: SampleSpectrum) -> None:
    with open(path, "w", encoding="utf-8") as f:
        f.write(f"eigenvalues,n={spectrum.n},m={spectrum.m},beta={spectrum.beta}\n")
        for value in spectrum.eigenvalues:
            f.write(f"{float(value)!r}\n")


def write_snapshot_file(path: str, snapshots: SnapshotMatrix) -> None:
    with open(path, "w", encoding="utf-8") as f:
        f.write(f"snapshots,n={snapshots.n},m={snapshots.m},beta={snapshots.beta}\n")
        for row in snapshots.data:
            if snapshots.beta == 2:
                cells = [f"{float(z.real)!r},{float(z.imag)!r}" for z in row]
            else:
                cells = [f"{float(v)!r}" for v in row]
            f.write(",".join(cells) + "\n")


def _open_output(path: str | None):
    if path is None:
        return sys.stdout, False
    return open(path, "w", encoding="utf-8", newline=""), True


# ---------------------------------------------------------------------------
# subcommands

def _parse_estimators(text: str) -> tuple[EstimatorId, ...]:
    names = [name.strip().lower() for name in text.split(",") if name.strip()]
    if not names:
        raise ValueError("no estimators selected")
    unknown = [name for name in names if name not in _ESTIMATOR_ALIASES]
    if unknown:
        raise ValueError(f"unknown estimators {unknown}; choose from new, aic, mdl")
    return tuple(_ESTIMATOR_ALIASES[name] for name in names)


def _parse_signals(text: str) -> tuple[float, ...]:
    return tuple(float(v) for v in text.split(",") if v.strip())


def _parse_grid(text: str) -> tuple[tuple[int, int], ...]:
    points = []
    for chunk in text.split(","):
        if not chunk.strip():
            continue
        n_text, sep, m_text = chunk.partition(":")
        if not sep:
            raise ValueError(f"grid point {chunk!r} is not of the form n:m")
        points.append((int(n_text), int(m_text)))
    if not points:
        raise ValueError("grid is empty")
    return tuple(points)


def cmd_estimate(args: argparse.Namespace) -> int:
    try:
        loaded = load_input_file(args.input)
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except InputFormatError as exc:
        print(f"error: {args.input}: {exc}", file=sys.stderr)
        return 2
    except _VALIDATION_ERRORS as exc:
        print(f"error: {args.input}: {exc}", file=sys.stderr)
        return 3

    try:
        estimators = _parse_estimators(args.estimators)
        if isinstance(loaded, SnapshotMatrix):
            eigs = hermitian_eigenvalues(sample_covariance(loaded))
            spectrum = validate_spectrum(eigs, loaded.n, loaded.m, loaded.beta)
        else:
            spectrum = loaded
    except _VALIDATION_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3

    results = [ESTIMATORS[est](spectrum) for est in estimators]
    out, close = _open_output(args.output)
    try:
        writer = csv.writer(out, lineterminator="\n")
        header = ["estimator_id", "k_hat"]
        if args.verbose:
            header += [f"crit_k{k}" for k, _ in results[0].criterion_values]
        writer.writerow(header)
        for result in results:
            row = [result.estimator_id.value, result.k_hat]
            if args.verbose:
                row += [repr(float(value)) for _, value in result.criterion_values]
            writer.writerow(row)
    finally:
        if close:
            out.close()
    return 0


def cmd_simulate(args: argparse.Namespace) -> int:
    try:
        grid = _parse_grid(args.grid)
        scenario = ScenarioSpec(
            signal_eigenvalues=_parse_signals(args.signals),
            noise_variance=args.sigma2,
            n=grid[0][0],
            m=grid[0][1],
            beta=args.beta,
        )
        plan = ExperimentPlan(
            scenario=scenario,
            grid=grid,
            trials=args.trials,
            master_seed=args.seed,
            estimators=_parse_estimators(args.estimators),
        )
    except _VALIDATION_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3

    summaries = run_experiment(plan, workers=args.workers)
    out, close = _open_output(args.output)
    try:
        writer = csv.writer(out, lineterminator="\n")
        writer.writerow(["n", "m", "estimator", "k", "probability", "stderr"])
        for summary in summaries:
            for k in range(min(summary.n, summary.m)):
                p = summary.counts.get(k, 0) / summary.trials
                se = math.sqrt(p * (1.0 - p) / summary.trials)
                writer.writerow(
                    [summary.n, summary.m, summary.estimator_id.value, k, repr(p), repr(se)]
                )
    finally:
        if close:
            out.close()
    return 0


def cmd_keff(args: argparse.Namespace) -> int:
    try:
        spec = ScenarioSpec(
            signal_eigenvalues=_parse_signals(args.signals),
            noise_variance=args.sigma2,
            n=args.n,
            m=args.m,
            beta=args.beta,
        )
    except _VALIDATION_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    threshold = detection_threshold(spec.noise_variance, spec.n / spec.m)
    k_eff = effective_num_signals(spec)
    out, close = _open_output(args.output)
    try:
        print(f"threshold={threshold:g}, k_eff={k_eff}", file=out)
    finally:
        if close:
            out.close()
    return 0


def cmd_limits(args: argparse.Namespace) -> int:
    try:
        if args.c is not None:
            c = args.c
        elif args.n is not None and args.m is not None:
            c = args.n / args.m
        else:
            raise ValueError("provide either --c or both --n and --m")
        signals = _parse_signals(args.signals)
        if c <= 0:
            raise ValueError(f"aspect ratio must be > 0, got {c}")
        predictions = [spiked_limit(lam, args.sigma2, c) for lam in signals]
    except _VALIDATION_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    edge = bulk_edge(args.sigma2, c)
    out, close = _open_output(args.output)
    try:
        writer = csv.writer(out, lineterminator="\n")
        writer.writerow(["lambda", "limit", "above_threshold", "bulk_edge"])
        for pred in predictions:
            writer.writerow(
                [repr(float(pred.population_eigenvalue)), repr(float(pred.limit)),
                 str(pred.above_threshold).lower(), repr(float(edge))]
            )
    finally:
        if close:
            out.close()
    return 0


def cmd_clt_check(args: argparse.Namespace) -> int:
    if args.trials < 1000:
        print(f"error: clt-check needs at least 1000 trials, got {args.trials}", file=sys.stderr)
        return 3
    if args.beta not in (1, 2):
        print(f"error: clt-check simulates beta in (1, 2), got {args.beta}", file=sys.stderr)
        return 3
    try:
        report = run_clt_check(args.n, args.m, args.beta, args.trials, args.seed)
    except _VALIDATION_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    out, close = _open_output(args.output)
    try:
        print(f"n={report.n} m={report.m} beta={report.beta} trials={report.trials}", file=out)
        print(f"empirical mean     : {report.empirical_mean.tolist()}", file=out)
        print(f"mean tolerance (4s): {report.mean_tolerance.tolist()}", file=out)
        print(f"empirical cov      : {report.empirical_cov.tolist()}", file=out)
        print(f"predicted cov      : {report.predicted_cov.tolist()}", file=out)
        print(f"mean check : {'pass' if report.mean_ok else 'FAIL'}", file=out)
        print(f"cov check  : {'pass' if report.cov_ok else 'FAIL'} (10% bands)", file=out)
        print("PASS" if report.passed else "FAIL", file=out)
    finally:
        if close:
            out.close()
    return 0 if report.passed else 1


# ---------------------------------------------------------------------------
# argument parsing

def _add_scenario_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--signals", default="", help="signal eigenvalues, e.g. '10,3'")
    parser.add_argument("--sigma2", type=float, default=1.0, help="noise variance (default 1)")
    parser.add_argument("--beta", type=int, default=1, choices=(1, 2, 4),
                        help="field indicator: 1 real, 2 complex, 4 quaternion")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sigcount",
        description="Estimate the number of signals in white noise from sample covariance eigenvalues.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_est = sub.add_parser("estimate", help="run estimators on an eigenvalue or snapshot file")
    p_est.add_argument("input", help="input file (header: 'eigenvalues,...' or 'snapshots,...')")
    p_est.add_argument("--estimators", default="new,aic,mdl")
    p_est.add_argument("--verbose", action="store_true", help="append per-k criterion values")
    p_est.add_argument("--output", default=None, help="output CSV path (default stdout)")
    p_est.set_defaults(func=cmd_estimate)

    p_sim = sub.add_parser("simulate", help="Monte Carlo detection probabilities over an (n, m) grid")
    _add_scenario_flags(p_sim)
    p_sim.add_argument("--grid", required=True, help="grid points 'n1:m1,n2:m2,...'")
    p_sim.add_argument("--trials", type=int, default=1000)
    p_sim.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p_sim.add_argument("--estimators", default="new,aic,mdl")
    p_sim.add_argument("--workers", type=int, default=1, help="worker processes (results identical)")
    p_sim.add_argument("--output", default=None)
    p_sim.set_defaults(func=cmd_simulate)

    p_keff = sub.add_parser("keff", help="effective number of detectable signals")
    _add_scenario_flags(p_keff)
    p_keff.add_argument("--n", type=int, required=True)
    p_keff.add_argument("--m", type=int, required=True)
    p_keff.add_argument("--output", default=None)
    p_keff.set_defaults(func=cmd_keff)

    p_lim = sub.add_parser("limits", help="asymptotic sample-eigenvalue limits for given signals")
    _add_scenario_flags(p_lim)
    p_lim.add_argument("--c", type=float, default=None, help="aspect ratio n/m")
    p_lim.add_argument("--n", type=int, default=None)
    p_lim.add_argument("--m", type=int, default=None)
    p_lim.add_argument("--output", default=None)
    p_lim.set_defaults(func=cmd_limits)

    p_clt = sub.add_parser("clt-check", help="empirical check of the noise-only moment CLT")
    p_clt.add_argument("--n", type=int, default=100)
    p_clt.add_argument("--m", type=int, default=200)
    p_clt.add_argument("--beta", type=int, default=1, choices=(1, 2))
    p_clt.add_argument("--trials", type=int, default=5000)
    p_clt.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p_clt.add_argument("--output", default=None)
    p_clt.set_defaults(func=cmd_clt_check)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
