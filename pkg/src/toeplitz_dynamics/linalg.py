"""Small dense complex linear algebra.

Everything here targets matrices of dimension <= ~64. Storage is a plain
``numpy.ndarray`` of dtype complex128; the eigensolver is a cyclic complex
Jacobi iteration written out explicitly rather than delegated to LAPACK.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .exceptions import BadDimension, NoConvergence, NotHermitian

HERMITIAN_TOL = 1e-12
MAX_SWEEPS = 100


@dataclass(frozen=True)
class HermitianEigenDecomposition:
    """Eigenvalues in ascending order; column ``k`` of ``eigenvectors``
    belongs to ``eigenvalues[k]``."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    def reconstruct(self) -> np.ndarray:
        V = self.eigenvectors
        return (V * self.eigenvalues) @ V.conj().T


def as_matrix(A) -> np.ndarray:
    M = np.asarray(A, dtype=complex)
    if M.ndim != 2 or M.shape[0] != M.shape[1] or M.shape[0] < 1:
        raise BadDimension(f"expected a non-empty square matrix, got shape {M.shape}")
    if not np.all(np.isfinite(M)):
        raise ValueError("matrix contains NaN or Inf")
    return M


def hermiticity_defect(A) -> float:
    M = np.asarray(A, dtype=complex)
    return float(np.max(np.abs(M - M.conj().T))) if M.size else 0.0


def check_hermitian(A, tol: float = HERMITIAN_TOL) -> np.ndarray:
    """Validate ``A`` and return its symmetrised copy ``(A + A^H) / 2``."""
    M = as_matrix(A)
    defect = hermiticity_defect(M)
    if defect > tol:
        raise NotHermitian(f"max |A - A^H| = {defect:.3e} exceeds {tol:.1e}")
    return 0.5 * (M + M.conj().T)


def _rotation(app: float, aqq: float, apq: complex) -> np.ndarray:
    # 2x2 unitary J with (J^H [[app, apq], [apq*, aqq]] J) diagonal.
    mag = abs(apq)
    phase = apq / mag
    theta = (aqq - app) / (2.0 * mag)
    t = 1.0 / (abs(theta) + np.sqrt(theta * theta + 1.0))
    if theta < 0.0:
        t = -t
    c = 1.0 / np.sqrt(t * t + 1.0)
    s = t * c
    pc = np.conj(phase)
    return np.array([[c, s], [-s * pc, c * pc]], dtype=complex)


def hermitian_eig(A, max_sweeps: int = MAX_SWEEPS) -> HermitianEigenDecomposition:
    """Diagonalise a Hermitian matrix with cyclic complex Jacobi rotations.

    Parameters
    ----------
    A : array_like
        Square Hermitian matrix (``max|A - A^H| <= 1e-12``).
    max_sweeps : int
        Budget of full cyclic sweeps over the strict upper triangle.

    Returns
    -------
    HermitianEigenDecomposition
        Ascending real eigenvalues and orthonormal eigenvector columns.

    Raises
    ------
    NotHermitian
        If ``A`` fails the Hermiticity check.
    NoConvergence
        If the off-diagonal mass is not annihilated within ``max_sweeps``.
    """
    a = check_hermitian(A).copy()
    n = a.shape[0]
    v = np.eye(n, dtype=complex)
    scale = float(np.max(np.abs(a))) if n else 0.0
    if scale == 0.0 or n == 1:
        return _sorted(np.real(np.diag(a)).copy(), v)

    # Converged when the off-diagonal Frobenius mass is at roundoff level.
    target = (np.finfo(float).eps * scale) ** 2
    for _ in range(max_sweeps):
        off = np.sum(np.abs(np.triu(a, 1)) ** 2)
        if off <= target:
            return _sorted(np.real(np.diag(a)).copy(), v)
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if abs(apq) <= 1e-300:
                    continue
                J = _rotation(a[p, p].real, a[q, q].real, apq)
                idx = [p, q]
                a[:, idx] = a[:, idx] @ J
                a[idx, :] = J.conj().T @ a[idx, :]
                a[p, q] = a[q, p] = 0.0
                a[p, p] = a[p, p].real
                a[q, q] = a[q, q].real
                v[:, idx] = v[:, idx] @ J
    raise NoConvergence(f"Jacobi did not converge in {max_sweeps} sweeps")


def _sorted(w: np.ndarray, v: np.ndarray) -> HermitianEigenDecomposition:
    order = np.argsort(w, kind="stable")
    return HermitianEigenDecomposition(w[order], v[:, order])


def hermitian_eigvalsh(A) -> np.ndarray:
    return hermitian_eig(A).eigenvalues


def matrix_function(
    A, f: Callable[[np.ndarray], np.ndarray], *, decomposition: HermitianEigenDecomposition | None = None
) -> np.ndarray:
    """Return ``V diag(f(lambda)) V^H`` for Hermitian ``A``.

    ``f`` receives the full eigenvalue vector and must be elementwise.
    A precomputed ``decomposition`` of ``A`` may be passed to skip the solve.
    """
    dec = decomposition if decomposition is not None else hermitian_eig(A)
    V = dec.eigenvectors
    fw = np.asarray(f(dec.eigenvalues), dtype=complex)
    return (V * fw) @ V.conj().T


def kron(A, B) -> np.ndarray:
    A = np.asarray(A, dtype=complex)
    B = np.asarray(B, dtype=complex)
    ra, ca = A.shape
    rb, cb = B.shape
    out = np.empty((ra * rb, ca * cb), dtype=complex)
    for i in range(ra):
        for j in range(ca):
            out[i * rb:(i + 1) * rb, j * cb:(j + 1) * cb] = A[i, j] * B
    return out


def partial_trace(rho, keep: str) -> np.ndarray:
    """Reduced state of a two-qubit operator.

    Basis order is |00>, |01>, |10>, |11> with the first factor being
    subsystem A. ``keep`` is ``"A"`` or ``"B"``.
    """
    r = np.asarray(rho, dtype=complex)
    if r.shape != (4, 4):
        raise BadDimension(f"partial_trace expects a 4x4 matrix, got {r.shape}")
    t = r.reshape(2, 2, 2, 2)  # [a, b, a', b']
    key = keep.upper()
    if key == "A":
        return np.einsum("ijkj->ik", t)
    if key == "B":
        return np.einsum("ijil->jl", t)
    raise ValueError(f"keep must be 'A' or 'B', got {keep!r}")


def hermitian_eigvals_2x2(m: np.ndarray) -> np.ndarray:
    """Closed-form eigenvalues of a stack of 2x2 Hermitian matrices.

    ``m`` has shape ``(..., 2, 2)``; returns ``(..., 2)`` ascending.
    """
    a = m[..., 0, 0].real
    d = m[..., 1, 1].real
    b = m[..., 0, 1]
    half_tr = 0.5 * (a + d)
    rad = np.sqrt(0.25 * (a - d) ** 2 + np.abs(b) ** 2)
    return np.stack([half_tr - rad, half_tr + rad], axis=-1)


PAULI_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
IDENTITY_2 = np.eye(2, dtype=complex)
