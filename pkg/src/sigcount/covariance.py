"""Sample covariance construction and Hermitian eigenvalue extraction."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import ConvergenceFailure
from .snapshots import SnapshotMatrix

__all__ = ["HermitianMatrix", "sample_covariance", "hermitian_eigenvalues"]

#: Relative Frobenius tolerance for accepting a matrix as self-adjoint.
HERMITIAN_RTOL = 1e-12

#: Relative trace-residual budget for the eigenvalue solve.
TRACE_RTOL = 1e-9


@dataclass(frozen=True)
class HermitianMatrix:
    """Self-adjoint matrix wrapper; rejects input that is not Hermitian."""

    entries: np.ndarray

    def __post_init__(self) -> None:
        a = np.array(self.entries, copy=True)
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise ValueError(f"expected a square matrix, got shape {a.shape}")
        norm = np.linalg.norm(a)
        skew = np.linalg.norm(a - a.conj().T)
        if skew > HERMITIAN_RTOL * max(norm, 1e-300):
            raise ValueError(
                f"matrix is not self-adjoint: relative asymmetry {skew / max(norm, 1e-300):.3e}"
            )
        a.flags.writeable = False
        object.__setattr__(self, "entries", a)

    @property
    def order(self) -> int:
        return self.entries.shape[0]


def sample_covariance(snapshots: SnapshotMatrix) -> HermitianMatrix:
    """(1/m) X X' with X the snapshot matrix and ' the conjugate transpose.

    Symmetry is forced exactly by averaging with the adjoint, so downstream
    checks never see round-off asymmetry.
    """
    x = snapshots.data
    r = (x @ x.conj().T) / snapshots.m
    r = (r + r.conj().T) / 2.0
    return HermitianMatrix(entries=r)


def hermitian_eigenvalues(matrix: HermitianMatrix) -> np.ndarray:
    """All eigenvalues of a self-adjoint matrix, real and sorted descending.

    Backed by LAPACK's symmetric/Hermitian solver. The returned spectrum is
    checked against the trace; a residual beyond tolerance means the solve
    cannot be trusted.

    Raises:
        ConvergenceFailure: the iteration did not converge, or the eigenvalue
            sum disagrees with the trace beyond ``TRACE_RTOL``.
    """
    try:
        eigs = np.linalg.eigvalsh(matrix.entries)
    except np.linalg.LinAlgError as exc:
        raise ConvergenceFailure(f"eigenvalue iteration failed to converge: {exc}") from exc
    trace = float(np.trace(matrix.entries).real)
    residual = abs(float(eigs.sum()) - trace)
    if residual > TRACE_RTOL * abs(trace) + 1e-12:
        raise ConvergenceFailure(
            f"eigenvalue sum off trace by {residual:.3e} (trace {trace:.6e})"
        )
    return eigs[::-1].copy()
