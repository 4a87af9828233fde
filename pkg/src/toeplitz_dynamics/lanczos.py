"""Hermitian Lanczos tridiagonalisation with optional full re-orthogonalisation."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .exceptions import LengthMismatch, ZeroStartVector
from .hamiltonian import is_toeplitz_tridiagonal
from .linalg import check_hermitian

BREAKDOWN_TOL = 1e-12


@dataclass(frozen=True)
class LanczosOutput:
    alphas: np.ndarray
    betas: np.ndarray
    basis: np.ndarray
    terminated_early: bool
    orthogonality_loss: float

    @property
    def k(self) -> int:
        return len(self.alphas)

    def tridiagonal(self) -> np.ndarray:
        return tridiagonal_from(self.alphas, self.betas)

    @property
    def is_toeplitz(self) -> bool:
        return is_toeplitz_tridiagonal(self.tridiagonal())


def tridiagonal_from(alphas, betas) -> np.ndarray:
    alphas = np.asarray(alphas, dtype=float).ravel()
    betas = np.asarray(betas, dtype=float).ravel()
    if len(alphas) < 1 or len(betas) != len(alphas) - 1:
        raise LengthMismatch(f"need len(betas) == len(alphas) - 1, got {len(alphas)} and {len(betas)}")
    T = np.diag(alphas) + np.diag(betas, 1) + np.diag(betas, -1)
    return T.astype(complex)


def lanczos_tridiagonalize(A, start, k: int | None = None, *, reorthogonalize: bool = True) -> LanczosOutput:
    """Run ``k`` steps of the Lanczos three-term recurrence.

    The start vector is normalised and used as ``q_1``. Each step computes
    ``r = A q_j - beta_{j-1} q_{j-1}``, ``alpha_j = q_j^H r``,
    ``r -= alpha_j q_j``, ``beta_j = ||r||``. With ``reorthogonalize`` the
    residual is additionally swept twice against all previous basis vectors
    (modified Gram-Schmidt). A residual norm below 1e-12 ends the run.
    """
    M = check_hermitian(A)
    dim = M.shape[0]
    k = dim if k is None else int(k)
    if not 1 <= k <= dim:
        raise ValueError(f"k must lie in [1, {dim}], got {k}")
    q = np.asarray(start, dtype=complex).ravel()
    if q.shape != (dim,):
        raise LengthMismatch(f"start vector has length {q.size}, matrix is {dim}x{dim}")
    norm = np.linalg.norm(q)
    if norm == 0.0:
        raise ZeroStartVector("Lanczos start vector is zero")

    Q = np.zeros((dim, k), dtype=complex)
    Q[:, 0] = q / norm
    alphas: list[float] = []
    betas: list[float] = []
    early = False
    for j in range(k):
        qj = Q[:, j]
        r = M @ qj
        if j > 0:
            r = r - betas[-1] * Q[:, j - 1]
        alpha = float(np.vdot(qj, r).real)
        r = r - alpha * qj
        if reorthogonalize:
            for _ in range(2):
                for i in range(j + 1):
                    r = r - np.vdot(Q[:, i], r) * Q[:, i]
        alphas.append(alpha)
        if j == k - 1:
            break
        beta = float(np.linalg.norm(r))
        if beta < BREAKDOWN_TOL:
            early = True
            break
        betas.append(beta)
        Q[:, j + 1] = r / beta

    Q = Q[:, :len(alphas)]
    loss = float(np.max(np.abs(Q.conj().T @ Q - np.eye(Q.shape[1]))))
    return LanczosOutput(np.array(alphas), np.array(betas), Q, early, loss)
