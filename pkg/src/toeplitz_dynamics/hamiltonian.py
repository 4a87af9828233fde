"""Tridiagonal Toeplitz Hamiltonians with exponentiated entries.

The matrix has ``a**n`` on the main diagonal and ``b**n`` on the first
super- and sub-diagonals.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Literal

import numpy as np

from .exceptions import InvalidParams
from .linalg import hermitian_eig

Formula = Literal["standard", "swapped"]
Source = Literal["closed_form_standard", "closed_form_swapped", "numerical"]


@dataclass(frozen=True)
class ToeplitzParams:
    a: float
    b: float
    n: float = 1.0
    m: int = 4

    def __post_init__(self):
        if int(self.m) != self.m or self.m < 2:
            raise InvalidParams(f"dimension m must be an integer >= 2, got {self.m}")

    @property
    def diagonal(self) -> float:
        return _power(self.a, self.n)

    @property
    def off_diagonal(self) -> float:
        return _power(self.b, self.n)


def _power(base: float, n: float) -> float:
    with np.errstate(invalid="ignore", over="ignore"):
        value = np.power(float(base), float(n))
    if not np.isfinite(value):
        raise InvalidParams(f"{base}**{n} is not a finite real number")
    return float(value)


@dataclass(frozen=True)
class ToeplitzSpectrum:
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray
    source: Source


def shift_matrix(m: int = 4) -> np.ndarray:
    """Zero-diagonal matrix with ones on the first off-diagonals."""
    return np.diag(np.ones(m - 1), 1) + np.diag(np.ones(m - 1), -1)


def build_hamiltonian(p: ToeplitzParams) -> np.ndarray:
    m = int(p.m)
    H = p.diagonal * np.eye(m) + p.off_diagonal * shift_matrix(m)
    return H.astype(complex)


def closed_form_spectrum(p: ToeplitzParams, formula: Formula = "standard") -> ToeplitzSpectrum:
    """Analytic spectrum of ``build_hamiltonian(p)``.

    ``formula="standard"`` gives ``a^n + 2 b^n cos(j pi/(m+1))`` with
    eigenvectors ``sin(k j pi/(m+1))`` (normalised). ``"swapped"``
    evaluates ``b^n + 2 a^n sqrt(b^n/a^n) cos(j pi/(m+1))``, which only
    agrees with the matrix when ``a == b``; it is kept as a diagnostic.
    """
    if p.a <= 0 or p.b <= 0:
        raise InvalidParams("closed-form spectrum needs a > 0 and b > 0")
    m = int(p.m)
    j = np.arange(1, m + 1)
    cosines = np.cos(j * np.pi / (m + 1))
    k = np.arange(1, m + 1)[:, None]
    vecs = np.sin(k * j[None, :] * np.pi / (m + 1))
    vecs = vecs / np.linalg.norm(vecs, axis=0)
    an, bn = p.diagonal, p.off_diagonal
    if formula == "standard":
        return ToeplitzSpectrum(an + 2.0 * bn * cosines, vecs.astype(complex), "closed_form_standard")
    if formula == "swapped":
        lam = bn + 2.0 * an * np.sqrt(bn / an) * cosines
        return ToeplitzSpectrum(lam, vecs.astype(complex), "closed_form_swapped")
    raise ValueError(f"unknown formula {formula!r}")


def numerical_spectrum(p: ToeplitzParams) -> ToeplitzSpectrum:
    dec = hermitian_eig(build_hamiltonian(p))
    return ToeplitzSpectrum(dec.eigenvalues, dec.eigenvectors, "numerical")


def spectrum_discrepancy(p: ToeplitzParams) -> float:
    """Max |swapped - numerical| over sorted eigenvalues."""
    alt = np.sort(closed_form_spectrum(p, "swapped").eigenvalues)
    exact = np.sort(numerical_spectrum(p).eigenvalues)
    return float(np.max(np.abs(alt - exact)))


def is_toeplitz_tridiagonal(T, tol: float = 1e-8) -> bool:
    T = np.asarray(T)
    m = T.shape[0]
    if m == 1:
        return True
    if np.max(np.abs(np.triu(T, 2))) > tol or np.max(np.abs(np.tril(T, -2))) > tol:
        return False
    d = np.diag(T)
    e = np.diag(T, 1)
    return bool(np.ptp(d.real) <= tol and np.ptp(np.abs(e)) <= tol)
