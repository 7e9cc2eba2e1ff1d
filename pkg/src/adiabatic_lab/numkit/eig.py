"""Dense Hermitian eigensolver: cyclic Jacobi with unitary 2x2 rotations.

Chosen over faster factorizations for its simplicity and unconditional
stability at the desk scales this package targets (N <= 64). One sweep
annihilates every off-diagonal element once; the off-diagonal Frobenius
norm decreases quadratically once small.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import DomainError, EigenConvergenceError

__all__ = ["HermitianMatrix", "hermitian_eig"]

HERMITICITY_TOL = 1e-12
OFFDIAG_TOL_FACTOR = 1e-13
SWEEP_CAP = 30


@dataclass(frozen=True, eq=False)
class HermitianMatrix:
    """Square complex matrix validated to be Hermitian on construction."""

    entries: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.entries, dtype=complex).copy()
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise DomainError(f"matrix must be square, got shape {m.shape}")
        drift = np.max(np.abs(m - m.conj().T)) if m.size else 0.0
        if drift > HERMITICITY_TOL:
            raise DomainError(
                f"matrix is not Hermitian: max |A - A^H| = {drift:.3e} "
                f"exceeds {HERMITICITY_TOL:.0e}"
            )
        m.flags.writeable = False
        object.__setattr__(self, "entries", m)

    @property
    def dim(self) -> int:
        return self.entries.shape[0]


def _offdiag_norm(a: np.ndarray) -> float:
    off = a - np.diag(np.diag(a))
    return float(np.linalg.norm(off))


def hermitian_eig(m, sweep_cap: int = SWEEP_CAP):
    """Eigendecomposition of a Hermitian matrix.

    Returns ``(eigenvalues, eigenvectors)`` with eigenvalues real and
    ascending and eigenvectors as orthonormal columns of a unitary matrix.

    Raises EigenConvergenceError if the off-diagonal norm has not dropped
    below ``1e-13 * ||m||_F`` after ``sweep_cap`` full sweeps.
    """
    if not isinstance(m, HermitianMatrix):
        m = HermitianMatrix(m)
    n = m.dim
    a = m.entries.astype(complex).copy()
    vecs = np.eye(n, dtype=complex)
    scale = float(np.linalg.norm(a))
    target = OFFDIAG_TOL_FACTOR * scale

    if n == 1:
        return np.array([a[0, 0].real]), vecs

    sweeps = 0
    while _offdiag_norm(a) > target:
        if sweeps >= sweep_cap:
            raise EigenConvergenceError(
                f"Jacobi sweeps exhausted: off-diagonal norm "
                f"{_offdiag_norm(a):.3e} > target {target:.3e} "
                f"after {sweep_cap} sweeps (N = {n})"
            )
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                mag = abs(apq)
                if mag == 0.0:
                    continue
                phase = apq / mag
                tau = (a[q, q].real - a[p, p].real) / (2.0 * mag)
                if tau >= 0.0:
                    t = 1.0 / (tau + np.hypot(1.0, tau))
                else:
                    t = -1.0 / (-tau + np.hypot(1.0, tau))
                c = 1.0 / np.hypot(1.0, t)
                s = t * c * phase

                # two-sided rotation on rows/columns p, q
                col_p = a[:, p] * c - a[:, q] * np.conj(s)
                col_q = a[:, p] * s + a[:, q] * c
                a[:, p] = col_p
                a[:, q] = col_q
                row_p = a[p, :] * c - a[q, :] * s
                row_q = a[p, :] * np.conj(s) + a[q, :] * c
                a[p, :] = row_p
                a[q, :] = row_q
                a[p, q] = 0.0
                a[q, p] = 0.0
                a[p, p] = a[p, p].real
                a[q, q] = a[q, q].real

                vec_p = vecs[:, p] * c - vecs[:, q] * np.conj(s)
                vec_q = vecs[:, p] * s + vecs[:, q] * c
                vecs[:, p] = vec_p
                vecs[:, q] = vec_q
        sweeps += 1

    w = np.diag(a).real.copy()
    order = np.argsort(w, kind="stable")
    return w[order], vecs[:, order]
