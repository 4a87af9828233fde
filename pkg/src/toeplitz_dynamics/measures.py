"""Entropy, concurrence and quantum discord for two-qubit states.

All entropies are in bits. Discord uses rank-1 projective measurements on
subsystem A, parametrised by Bloch angles.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize

from .evolution import EvolutionSpec, evolve
from .exceptions import BadDimension, NegativeEigenvalue, OptimizerFailure
from .linalg import (IDENTITY_2, PAULI_Y, hermitian_eig, hermitian_eigvalsh,
                     kron, matrix_function, partial_trace)

ZERO_CLAMP_LOW = -1e-10
ZERO_CLAMP_HIGH = 1e-12
NEGATIVE_TOL = 1e-8
GRID_THETA = 64
GRID_PHI = 64
N_STARTS = 3
FATOL = 1e-10
MAX_EVALS = 500
SOUNDNESS_TOL = 1e-9

SPIN_FLIP = kron(PAULI_Y, PAULI_Y)


@dataclass(frozen=True)
class MeasurementBasis:
    theta: float
    phi: float

    @property
    def vector(self) -> np.ndarray:
        return np.array([math.cos(self.theta / 2),
                         complex(math.cos(self.phi), math.sin(self.phi)) * math.sin(self.theta / 2)])

    def projectors(self) -> tuple[np.ndarray, np.ndarray]:
        v = self.vector
        plus = np.outer(v, v.conj())
        return plus, IDENTITY_2 - plus

    @classmethod
    def canonical(cls, theta: float, phi: float) -> "MeasurementBasis":
        """Fold arbitrary angles back onto theta in [0, pi], phi in [0, 2 pi)."""
        theta = math.fmod(theta, 2 * math.pi)
        if theta < 0:
            theta += 2 * math.pi
        if theta > math.pi:
            theta = 2 * math.pi - theta
            phi += math.pi
        phi = math.fmod(phi, 2 * math.pi)
        if phi < 0:
            phi += 2 * math.pi
        return cls(theta, phi)


@dataclass(frozen=True)
class DiscordResult:
    discord: float
    classical_correlation: float
    mutual_information: float
    argmin_basis: MeasurementBasis
    optimizer_evals: int
    min_conditional_entropy: float
    coarse_min: float
    refinement_failed: bool = False


def _entropy_from_eigs(w: np.ndarray) -> float:
    w = np.asarray(w, dtype=float)
    if np.any(w < ZERO_CLAMP_LOW):
        raise NegativeEigenvalue(f"eigenvalue {w.min():.3e} below {ZERO_CLAMP_LOW:g}")
    w = w[w > ZERO_CLAMP_HIGH]
    return float(-np.sum(w * np.log2(w)))


def von_neumann_entropy(rho) -> float:
    return _entropy_from_eigs(hermitian_eigvalsh(np.asarray(rho, dtype=complex)))


def _check_two_qubit(rho) -> np.ndarray:
    r = np.asarray(rho, dtype=complex)
    if r.shape != (4, 4):
        raise BadDimension(f"expected a 4x4 two-qubit matrix, got {r.shape}")
    return r


def spin_flip(rho) -> np.ndarray:
    r = np.asarray(rho, dtype=complex)
    return SPIN_FLIP @ r.conj() @ SPIN_FLIP


def concurrence_lambdas(rho) -> np.ndarray:
    """Descending square roots of the eigenvalues of rho * rho_tilde."""
    r = _check_two_qubit(rho)
    rt = spin_flip(r)
    dec = hermitian_eig(r)
    if dec.eigenvalues[0] >= -NEGATIVE_TOL:
        # rho rho~ is similar to sqrt(rho) rho~ sqrt(rho), which is Hermitian.
        root = matrix_function(r, lambda w: np.sqrt(np.clip(w, 0.0, None)), decomposition=dec)
        ev = hermitian_eigvalsh(0.5 * ((root @ rt @ root) + (root @ rt @ root).conj().T))
    else:
        ev = np.linalg.eigvals(r @ rt)
        ev = np.where(np.abs(ev.imag) < 1e-8, ev.real, np.nan)
    if np.any(np.isnan(ev)) or np.min(ev) < -NEGATIVE_TOL:
        raise NegativeEigenvalue("rho * rho_tilde has a negative or complex eigenvalue; rho is not a state")
    return np.sort(np.sqrt(np.clip(ev, 0.0, None)))[::-1]


def concurrence(rho) -> float:
    lam = concurrence_lambdas(rho)
    return float(min(1.0, max(0.0, lam[0] - lam[1] - lam[2] - lam[3])))


def conditional_entropy(rho, basis: MeasurementBasis) -> float:
    """Average entropy of B after measuring A in ``basis``.

    Each outcome contributes ``p_i * S(rho_B|i)``; outcomes with
    ``p_i < 1e-14`` are dropped.
    """
    r = _check_two_qubit(rho)
    total = 0.0
    for proj in basis.projectors():
        P = kron(proj, IDENTITY_2)
        post = P @ r @ P
        p = float(np.trace(post).real)
        if p < 1e-14:
            continue
        total += p * von_neumann_entropy(partial_trace(post, "B") / p)
    return total


def _pauli_components(M: np.ndarray) -> np.ndarray:
    # Hermitian M = (t I + x X + y Y + z Z) / 2  ->  (t, x, y, z)
    return np.array([(M[0, 0] + M[1, 1]).real, 2 * M[0, 1].real, -2 * M[0, 1].imag,
                     (M[0, 0] - M[1, 1]).real])


class _ConditionalBlocks:
    """Pauli-component form of the B-operators ``<i|_A rho |j>_A``.

    For ``|v> = (cos(theta/2), e^{i phi} sin(theta/2))`` the unnormalised
    conditional state of B is
    ``c^2 R00 + s^2 R11 + c s K`` for the ``+`` outcome and
    ``s^2 R00 + c^2 R11 - c s K`` for ``-``, where
    ``K = cos(phi) Kc + sin(phi) Ks``,
    ``Kc = R01 + R10`` and ``Ks = i (R01 - R10)``.
    """

    def __init__(self, rho: np.ndarray):
        R = rho.reshape(2, 2, 2, 2)
        r00, r11 = R[0, :, 0, :], R[1, :, 1, :]
        r01, r10 = R[0, :, 1, :], R[1, :, 0, :]
        self.a = _pauli_components(r00)
        self.d = _pauli_components(r11)
        self.kc = _pauli_components(r01 + r10)
        self.ks = _pauli_components(1j * (r01 - r10))
        self._flat = [tuple(float(x) for x in v) for v in (self.a, self.d, self.kc, self.ks)]

    def grid(self, theta, phi) -> np.ndarray:
        theta, phi = np.broadcast_arrays(np.asarray(theta, float), np.asarray(phi, float))
        c2 = np.cos(theta / 2) ** 2
        s2 = np.sin(theta / 2) ** 2
        cs = 0.5 * np.sin(theta)
        plus = c2[..., None] * self.a + s2[..., None] * self.d
        minus = s2[..., None] * self.a + c2[..., None] * self.d
        cross = cs[..., None] * (np.cos(phi)[..., None] * self.kc + np.sin(phi)[..., None] * self.ks)
        out = np.zeros(theta.shape)
        for vec in (plus + cross, minus - cross):
            p = vec[..., 0]
            rad = np.sqrt(np.sum(vec[..., 1:] ** 2, axis=-1))
            mu = np.clip(np.stack([p - rad, p + rad], axis=-1) / 2, 0.0, None)
            contrib = -_xlog2x(mu).sum(axis=-1) + _xlog2x(p)
            out += np.where(p >= 1e-14, contrib, 0.0)
        return out

    def __call__(self, x) -> float:
        theta, phi = float(x[0]), float(x[1])
        c2 = math.cos(theta / 2) ** 2
        s2 = 1.0 - c2
        cs = 0.5 * math.sin(theta)
        cp, sp = cs * math.cos(phi), cs * math.sin(phi)
        a, d, kc, ks = self._flat
        total = 0.0
        for wa, wd, sign in ((c2, s2, 1.0), (s2, c2, -1.0)):
            t, x1, y1, z1 = (wa * a[k] + wd * d[k] + sign * (cp * kc[k] + sp * ks[k]) for k in range(4))
            if t < 1e-14:
                continue
            rad = math.sqrt(x1 * x1 + y1 * y1 + z1 * z1)
            total += _xlog2x_scalar(t)
            total -= _xlog2x_scalar(0.5 * (t - rad)) + _xlog2x_scalar(0.5 * (t + rad))
        return total


def _xlog2x(x):
    x = np.where(x > ZERO_CLAMP_HIGH, x, 0.0)
    safe = np.where(x > 0.0, x, 1.0)
    return x * np.log2(safe)


def _xlog2x_scalar(x: float) -> float:
    return x * math.log2(x) if x > ZERO_CLAMP_HIGH else 0.0


def conditional_entropy_grid(rho, theta, phi) -> np.ndarray:
    """Vectorised ``conditional_entropy`` over broadcastable angle arrays."""
    return _ConditionalBlocks(_check_two_qubit(rho)).grid(theta, phi)


def minimize_conditional_entropy(rho, *, grid: tuple[int, int] = (GRID_THETA, GRID_PHI),
                                 starts: int = N_STARTS, max_evals: int = MAX_EVALS):
    """Grid search followed by Nelder-Mead refinement from the best points.

    Returns ``(min_value, basis, evals, coarse_min, refinement_failed)``.
    """
    r = _check_two_qubit(rho)
    thetas = np.linspace(0.0, np.pi, grid[0])
    phis = np.linspace(0.0, 2 * np.pi, grid[1], endpoint=False)
    blocks = _ConditionalBlocks(r)
    values = blocks.grid(thetas[:, None], phis[None, :])
    evals = values.size
    flat = np.argsort(values, axis=None, kind="stable")[:starts]
    coarse_min = float(values.flat[flat[0]])
    i0, j0 = np.unravel_index(flat[0], values.shape)
    best_val, best_x = coarse_min, (thetas[i0], phis[j0])

    f = blocks
    dt, dp = np.pi / (grid[0] - 1), 2 * np.pi / grid[1]
    refined_best = np.inf
    for k in flat:
        i, j = np.unravel_index(k, values.shape)
        x0 = np.array([thetas[i], phis[j]])
        simplex = np.array([x0, x0 + [dt, 0.0], x0 + [0.0, dp]])
        res = minimize(f, x0, method="Nelder-Mead",
                       options={"initial_simplex": simplex, "fatol": FATOL, "xatol": 1e-9,
                                "maxfev": max_evals})
        evals += int(res.nfev)
        refined_best = min(refined_best, float(res.fun))
        if res.fun < best_val:
            best_val, best_x = float(res.fun), (res.x[0], res.x[1])

    failed = refined_best > coarse_min + SOUNDNESS_TOL
    if failed:
        warnings.warn(f"discord refinement ended at {refined_best:.3e}, above the coarse "
                      f"minimum {coarse_min:.3e}; keeping the grid value", OptimizerFailure)
    return best_val, MeasurementBasis.canonical(*best_x), evals, coarse_min, failed


def discord(rho) -> DiscordResult:
    """Quantum discord with measurement on A.

    ``Q = S(rho_A) - S(rho) + min_M S(rho | M)``; the classical part is
    ``S(rho_B) - min_M S(rho | M)`` and mutual information
    ``S(rho_A) + S(rho_B) - S(rho)``.
    """
    r = _check_two_qubit(rho)
    s_ab = von_neumann_entropy(r)
    s_a = von_neumann_entropy(partial_trace(r, "A"))
    s_b = von_neumann_entropy(partial_trace(r, "B"))
    min_ce, basis, evals, coarse, failed = minimize_conditional_entropy(r)
    q = s_a - s_ab + min_ce
    if q < 0.0:
        q = 0.0  # roundoff only; genuine values are >= 0
    return DiscordResult(
        discord=float(q),
        classical_correlation=float(s_b - min_ce),
        mutual_information=float(s_a + s_b - s_ab),
        argmin_basis=basis,
        optimizer_evals=evals,
        min_conditional_entropy=float(min_ce),
        coarse_min=coarse,
        refinement_failed=failed,
    )


def correlations_at(rho0, spec: EvolutionSpec) -> tuple[float, DiscordResult]:
    rho = evolve(rho0, spec)
    return concurrence(rho), discord(rho)
