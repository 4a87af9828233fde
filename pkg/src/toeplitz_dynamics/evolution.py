"""Closed-system evolution ``rho(t) = U rho U^H`` with ``U = exp(-i H t)``.

hbar is fixed to 1. Exponentiation is spectral, so any ``t`` is exact up
to the eigensolver's accuracy.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .exceptions import DimensionMismatch, InvalidParams
from .hamiltonian import ToeplitzParams, build_hamiltonian
from .linalg import HermitianEigenDecomposition, hermitian_eig, matrix_function
from .states import DensityMatrix


@dataclass(frozen=True)
class EvolutionSpec:
    hamiltonian: ToeplitzParams
    t: float

    def __post_init__(self):
        if not np.isfinite(self.t):
            raise InvalidParams(f"time must be finite, got {self.t}")


@dataclass(frozen=True)
class ShiftedDecomposition:
    """Eigen-decomposition of ``H - shift * I``.

    Splitting off the mean diagonal keeps a large ``a**n`` from inflating
    the absolute eigenvalue error, which ``t`` would otherwise amplify.
    """

    shift: float
    dec: HermitianEigenDecomposition

    @property
    def eigenvalues(self) -> np.ndarray:
        return self.dec.eigenvalues + self.shift


def shifted_decomposition(H) -> ShiftedDecomposition:
    H = np.asarray(H, dtype=complex)
    shift = float(np.mean(np.diag(H).real))
    return ShiftedDecomposition(shift, hermitian_eig(H - shift * np.eye(H.shape[0])))


@lru_cache(maxsize=256)
def hamiltonian_decomposition(p: ToeplitzParams) -> ShiftedDecomposition:
    return shifted_decomposition(build_hamiltonian(p))


def propagator_from(sd: ShiftedDecomposition, t: float) -> np.ndarray:
    U = matrix_function(None, lambda lam: np.exp(-1j * lam * t), decomposition=sd.dec)
    return np.exp(-1j * sd.shift * t) * U


def propagator(spec: EvolutionSpec) -> np.ndarray:
    return propagator_from(hamiltonian_decomposition(spec.hamiltonian), spec.t)


def conjugate(U: np.ndarray, rho: np.ndarray) -> np.ndarray:
    out = U @ rho @ U.conj().T
    return 0.5 * (out + out.conj().T)


def evolve(rho0, spec: EvolutionSpec) -> DensityMatrix:
    r = np.asarray(rho0, dtype=complex)
    m = int(spec.hamiltonian.m)
    if r.shape != (m, m):
        raise DimensionMismatch(f"state is {r.shape}, Hamiltonian is {m}x{m}")
    label = getattr(rho0, "label", "")
    meta = dict(getattr(rho0, "meta", {}) or {})
    meta["t"] = spec.t
    return DensityMatrix(conjugate(propagator(spec), r), label=label, meta=meta)


def scaled_time_equivalence(rho0, a: float, b: float, n: float, t: float) -> float:
    """Distance between evolving under ``(a, b, n, t)`` and under
    ``(a, b**n, 1, t)``. Zero when only ``b**n * t`` matters."""
    p = ToeplitzParams(a, b, n)
    q = ToeplitzParams(a, p.off_diagonal, 1.0)
    lhs = np.asarray(evolve(rho0, EvolutionSpec(p, t)))
    rhs = np.asarray(evolve(rho0, EvolutionSpec(q, t)))
    return float(np.max(np.abs(lhs - rhs)))
