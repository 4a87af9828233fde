"""Two-qubit initial states: Werner and Munro-type MEMS."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .exceptions import OutOfRange
from .linalg import hermitian_eigvalsh, hermiticity_defect

SINGLET = np.array([0, 1, -1, 0], dtype=complex) / np.sqrt(2)
PHI_PLUS = np.array([1, 0, 0, 1], dtype=complex) / np.sqrt(2)


@dataclass(frozen=True)
class StateParam:
    gamma: float

    def __post_init__(self):
        g = float(self.gamma)
        if not (0.0 <= g <= 1.0):
            raise OutOfRange(f"gamma must lie in [0, 1], got {self.gamma}")

    @property
    def delta(self) -> float:
        """g(gamma): 1/3 below gamma = 2/3, gamma/2 from there on."""
        return 1.0 / 3.0 if self.gamma < 2.0 / 3.0 else self.gamma / 2.0


@dataclass(frozen=True)
class DensityMatrix:
    matrix: np.ndarray
    label: str = ""
    meta: dict = field(default_factory=dict, compare=False)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.matrix, dtype=dtype)


@dataclass(frozen=True)
class DensityDiagnostics:
    hermiticity_defect: float
    trace_defect: float
    min_eigenvalue: float

    def ok(self, tol: float = 1e-12, psd_tol: float = 1e-10) -> bool:
        return (self.hermiticity_defect <= tol and self.trace_defect <= tol
                and self.min_eigenvalue >= -psd_tol)


def _param(gamma) -> StateParam:
    return gamma if isinstance(gamma, StateParam) else StateParam(float(gamma))


def werner_state(gamma) -> DensityMatrix:
    p = _param(gamma)
    g = p.gamma
    rho = g * np.outer(SINGLET, SINGLET.conj()) + (1.0 - g) * np.eye(4) / 4.0
    return DensityMatrix(rho, label=f"werner(gamma={g:g})", meta={"gamma": g})


def mems_state(gamma) -> DensityMatrix:
    p = _param(gamma)
    g, d = p.gamma, p.delta
    rho = np.zeros((4, 4), dtype=complex)
    rho[0, 0] = rho[3, 3] = d
    rho[1, 1] = 1.0 - 2.0 * d
    rho[0, 3] = rho[3, 0] = g / 2.0
    return DensityMatrix(rho, label=f"mems(gamma={g:g})", meta={"gamma": g, "delta": d})


def validate_density(rho) -> DensityDiagnostics:
    M = np.asarray(rho, dtype=complex)
    herm = hermiticity_defect(M)
    tr = abs(np.trace(M) - 1.0)
    sym = 0.5 * (M + M.conj().T)
    return DensityDiagnostics(herm, float(tr), float(hermitian_eigvalsh(sym)[0]))


STATE_FACTORIES = {"werner": werner_state, "mems": mems_state}
