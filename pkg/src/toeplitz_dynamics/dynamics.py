"""Parameter sweeps, ESD and balancing-point detection, invariance checks."""
from __future__ import annotations

import csv
import itertools
import logging
import math
import warnings
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Sequence

import numpy as np

from .evolution import (EvolutionSpec, conjugate, evolve, hamiltonian_decomposition, propagator_from,
                        scaled_time_equivalence, shifted_decomposition)
from .exceptions import ConfigError
from .hamiltonian import ToeplitzParams, build_hamiltonian, shift_matrix
from .linalg import hermitian_eigvalsh
from .measures import concurrence, discord
from .states import STATE_FACTORIES, werner_state, mems_state

log = logging.getLogger(__name__)

CSV_HEADER = ("t", "t_norm", "concurrence", "discord", "classical_correlation", "mutual_information")
ESD_THRESHOLD = 1e-6
REFINE_TOL = 1e-4
MIN_SAMPLES_PER_PERIOD = 20
# Widest eigenvalue gap of the unit off-diagonal generator, 4 cos(pi/5).
_UNIT_SPREAD = float(np.ptp(np.linalg.eigvalsh(shift_matrix(4))))


def _as_list(x) -> list[float]:
    if isinstance(x, (list, tuple, np.ndarray)):
        return [float(v) for v in x]
    return [float(x)]


@dataclass
class SweepConfig:
    """One sweep: every ``(gamma, n)`` combination becomes a trace.

    ``t_max=None`` means ``periods`` normalised periods ``T = 2 pi / b**n``
    for each ``n`` separately.
    """

    state: str
    gamma: float | list[float]
    b: float
    n: float | list[float] = 1.0
    a: float = 1.0
    t_max: float | None = None
    t_steps: int = 2000
    normalize_time: bool = True
    periods: float = 1.0
    seed: int = 0
    workers: int = 1

    def __post_init__(self):
        self.gamma = _as_list(self.gamma)
        self.n = _as_list(self.n)
        self.validate()

    def validate(self) -> None:
        if self.state not in STATE_FACTORIES:
            raise ConfigError(f"state: expected one of {sorted(STATE_FACTORIES)}, got {self.state!r}")
        if not self.gamma:
            raise ConfigError("gamma: at least one value required")
        for g in self.gamma:
            if not 0.0 <= g <= 1.0:
                raise ConfigError(f"gamma: {g} outside [0, 1]")
        if not self.n:
            raise ConfigError("n: at least one value required")
        if int(self.t_steps) != self.t_steps or self.t_steps < 2:
            raise ConfigError(f"t_steps: must be an integer >= 2, got {self.t_steps}")
        self.t_steps = int(self.t_steps)
        if self.t_max is not None and not self.t_max > 0:
            raise ConfigError(f"t_max: must be > 0, got {self.t_max}")
        if not self.periods > 0:
            raise ConfigError(f"periods: must be > 0, got {self.periods}")
        if self.workers < 1:
            raise ConfigError(f"workers: must be >= 1, got {self.workers}")
        for n in self.n:
            try:
                p = ToeplitzParams(self.a, self.b, n)
                p.diagonal, p.off_diagonal
            except ValueError as exc:
                raise ConfigError(f"a/b/n: {exc}") from None

    def points(self) -> list[tuple[float, float]]:
        return list(itertools.product(self.gamma, self.n))


@dataclass(frozen=True)
class TraceParams:
    state: str
    gamma: float
    a: float
    b: float
    n: float

    @property
    def hamiltonian(self) -> ToeplitzParams:
        return ToeplitzParams(self.a, self.b, self.n)

    @property
    def period(self) -> float:
        bn = self.hamiltonian.off_diagonal
        return 2 * math.pi / abs(bn) if bn != 0 else math.inf

    def initial_state(self):
        return STATE_FACTORIES[self.state](self.gamma)

    def rho_at(self, t: float) -> np.ndarray:
        return np.asarray(evolve(self.initial_state(), EvolutionSpec(self.hamiltonian, t)))

    def concurrence_at(self, t: float) -> float:
        return concurrence(self.rho_at(t))

    def discord_at(self, t: float) -> float:
        return discord(self.rho_at(t)).discord


@dataclass
class CorrelationTrace:
    params: TraceParams
    t: np.ndarray
    t_norm: np.ndarray
    concurrence: np.ndarray
    discord: np.ndarray
    classical_correlation: np.ndarray
    mutual_information: np.ndarray

    def rows(self):
        return zip(self.t, self.t_norm, self.concurrence, self.discord,
                   self.classical_correlation, self.mutual_information)

    def __len__(self) -> int:
        return len(self.t)

    @property
    def filename(self) -> str:
        p = self.params
        return f"{p.state}_g{p.gamma:g}_n{p.n:g}.csv"


def _trace_point(args) -> CorrelationTrace:
    params, times = args
    sd = hamiltonian_decomposition(params.hamiltonian)
    rho0 = np.asarray(params.initial_state())
    cols = np.zeros((4, len(times)))
    for k, t in enumerate(times):
        rho = conjugate(propagator_from(sd, t), rho0)
        res = discord(rho)
        cols[:, k] = (concurrence(rho), res.discord, res.classical_correlation, res.mutual_information)
    T = params.period
    return CorrelationTrace(params, times, times / T, cols[0], cols[1], cols[2], cols[3])


def sample_times(cfg: SweepConfig, n: float) -> np.ndarray:
    T = TraceParams(cfg.state, 0.0, cfg.a, cfg.b, n).period
    t_max = cfg.t_max if cfg.t_max is not None else cfg.periods * T
    times = np.linspace(0.0, t_max, cfg.t_steps)
    bn = abs(ToeplitzParams(cfg.a, cfg.b, n).off_diagonal)
    if bn > 0:
        fastest = 2 * math.pi / (bn * _UNIT_SPREAD)
        per_period = fastest / (times[1] - times[0])
        if per_period < MIN_SAMPLES_PER_PERIOD:
            warnings.warn(f"n={n:g}: only {per_period:.1f} samples per fastest oscillation "
                          f"(want >= {MIN_SAMPLES_PER_PERIOD}); raise t_steps", RuntimeWarning)
    return times


def run_sweep(cfg: SweepConfig) -> list[CorrelationTrace]:
    """Evaluate concurrence and discord along each ``(gamma, n)`` trace.

    Output order follows ``cfg.points()`` regardless of ``cfg.workers``.
    """
    jobs = [(TraceParams(cfg.state, g, cfg.a, cfg.b, n), sample_times(cfg, n)) for g, n in cfg.points()]
    if cfg.workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=cfg.workers) as pool:
            return list(pool.map(_trace_point, jobs))
    return [_trace_point(j) for j in jobs]


def _bisect(pred: Callable[[float], bool], lo: float, hi: float, tol: float) -> float:
    """Locate the switch of ``pred`` on ``[lo, hi]`` given ``pred(lo) != pred(hi)``."""
    p_lo = pred(lo)
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if pred(mid) == p_lo:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def _runs(mask: np.ndarray) -> list[tuple[int, int]]:
    out = []
    start = None
    for i, m in enumerate(mask):
        if m and start is None:
            start = i
        elif not m and start is not None:
            out.append((start, i - 1))
            start = None
    if start is not None:
        out.append((start, len(mask) - 1))
    return out


@dataclass
class EsdReport:
    zero_intervals: list[tuple[float, float]] = field(default_factory=list)
    zero_intervals_norm: list[tuple[float, float]] = field(default_factory=list)
    discord_positive_in_zones: list[bool] = field(default_factory=list)
    max_discord_in_zones: list[float] = field(default_factory=list)

    @property
    def count(self) -> int:
        return len(self.zero_intervals)

    def total_width(self) -> float:
        return float(sum(e - s for s, e in self.zero_intervals))


def detect_esd(trace: CorrelationTrace, threshold: float = ESD_THRESHOLD, *, refine: bool = True,
               tol: float = REFINE_TOL, discord_floor: float = 1e-8) -> EsdReport:
    """Maximal runs with concurrence below ``threshold``.

    Interior endpoints are bisected on the continuous concurrence to ``tol``
    in normalised time (one unit = one period ``2 pi / b**n``).
    """
    c = np.asarray(trace.concurrence)
    T = trace.params.period
    t_tol = tol * T if math.isfinite(T) else tol
    pred = (lambda t: trace.params.concurrence_at(t) < threshold)
    report = EsdReport()
    for i, j in _runs(c < threshold):
        start = trace.t[i]
        end = trace.t[j]
        if refine and i > 0:
            start = _bisect(pred, trace.t[i - 1], trace.t[i], t_tol)
        if refine and j < len(c) - 1:
            end = _bisect(pred, trace.t[j], trace.t[j + 1], t_tol)
        dmax = float(np.max(trace.discord[i:j + 1]))
        report.zero_intervals.append((float(start), float(end)))
        report.zero_intervals_norm.append((float(start / T), float(end / T)) if math.isfinite(T)
                                          else (float(start), float(end)))
        report.max_discord_in_zones.append(dmax)
        report.discord_positive_in_zones.append(dmax > discord_floor)
    return report


@dataclass
class BalancePointReport:
    crossings: list[float] = field(default_factory=list)
    crossings_norm: list[float] = field(default_factory=list)

    @property
    def count(self) -> int:
        return len(self.crossings)


def detect_balance_points(trace: CorrelationTrace, *, refine: bool = True, tol: float = REFINE_TOL,
                          zero_tol: float = 1e-9) -> BalancePointReport:
    """Times where ``concurrence - discord`` changes sign.

    Samples with ``|difference| <= zero_tol`` carry no sign and are skipped.
    """
    diff = np.asarray(trace.concurrence) - np.asarray(trace.discord)
    sign = np.where(np.abs(diff) <= zero_tol, 0, np.sign(diff))
    T = trace.params.period
    t_tol = tol * T if math.isfinite(T) else tol
    p = trace.params

    def pred(t: float) -> bool:
        rho = p.rho_at(t)
        return concurrence(rho) - discord(rho).discord > 0

    report = BalancePointReport()
    last = None
    for k, s in enumerate(sign):
        if s == 0:
            continue
        if last is not None and sign[last] != s:
            lo, hi = trace.t[last], trace.t[k]
            tc = _bisect(pred, lo, hi, t_tol) if refine else 0.5 * (lo + hi)
            report.crossings.append(float(tc))
            report.crossings_norm.append(float(tc / T) if math.isfinite(T) else float(tc))
        last = k
    return report


# -- invariance suite ---------------------------------------------------------------------------

@dataclass
class CheckResult:
    name: str
    passed: bool
    worst: float
    tol: float
    samples: int


@dataclass
class InvarianceReport:
    checks: list[CheckResult]
    warnings: list[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def lines(self) -> list[str]:
        out = [f"{'PASS' if c.passed else 'FAIL'} {c.name}: worst={c.worst:.3e} tol={c.tol:.0e} "
               f"samples={c.samples}" for c in self.checks]
        return out + [f"WARNING {w}" for w in self.warnings]


def _faulty_hamiltonian(p: ToeplitzParams) -> np.ndarray:
    # Negative control: uneven diagonal so a**n no longer factors out as a phase.
    H = build_hamiltonian(p)
    H[1, 1] *= 1.5
    return H


def _evolve_with(builder, p: ToeplitzParams, rho0: np.ndarray, t: float) -> np.ndarray:
    sd = shifted_decomposition(builder(p))
    return conjugate(propagator_from(sd, t), rho0)


def invariance_suite(seed: int = 0, samples: int = 50, *, tol: float = 1e-10,
                     fault: str | None = None) -> InvarianceReport:
    """Randomised checks of the three structural invariances.

    * Werner spectrum is unchanged by any ``(a, b, n, t)``.
    * Evolved MEMS does not depend on ``a``.
    * Only ``b**n * t`` matters (``scaled_time_equivalence``).

    ``fault="asymmetric_diagonal"`` swaps in a broken Hamiltonian so the
    ``a``-independence check must fail.
    """
    if fault not in (None, "asymmetric_diagonal"):
        raise ValueError(f"unknown fault mode {fault!r}")
    builder = _faulty_hamiltonian if fault else build_hamiltonian
    rng = np.random.default_rng(seed)
    notes = []
    if samples <= 0:
        notes.append("empty parameter grid; checks pass vacuously")

    worst_w = worst_a = worst_s = 0.0
    for _ in range(max(samples, 0)):
        a1, a2, b = rng.uniform(0.1, 5.0, size=3)
        n = rng.uniform(0.5, 9.0)
        t = rng.uniform(0.0, 20.0)
        g = rng.uniform(0.0, 1.0)

        rho_w = _evolve_with(builder, ToeplitzParams(a1, b, n), np.asarray(werner_state(g)), t)
        want = np.sort([(1 - g) / 4] * 3 + [(1 + 3 * g) / 4])
        worst_w = max(worst_w, float(np.max(np.abs(hermitian_eigvalsh(rho_w) - want))))

        m0 = np.asarray(mems_state(g))
        r1 = _evolve_with(builder, ToeplitzParams(a1, b, n), m0, t)
        r2 = _evolve_with(builder, ToeplitzParams(a2, b, n), m0, t)
        worst_a = max(worst_a, float(np.max(np.abs(r1 - r2))))

        if fault:
            lhs = _evolve_with(builder, ToeplitzParams(a1, b, n), m0, t)
            rhs = _evolve_with(builder, ToeplitzParams(a1, b ** n, 1.0), m0, t)
            worst_s = max(worst_s, float(np.max(np.abs(lhs - rhs))))
        else:
            worst_s = max(worst_s, scaled_time_equivalence(m0, a1, b, n, t))

    count = max(samples, 0)
    checks = [
        CheckResult("werner_spectrum", worst_w < tol, worst_w, tol, count),
        CheckResult("a_independence", worst_a < tol, worst_a, tol, count),
        CheckResult("bn_t_scaling", worst_s < tol, worst_s, tol, count),
    ]
    for w in notes:
        log.warning(w)
    return InvarianceReport(checks, notes)


# -- output -------------------------------------------------------------------------------------

def _fmt(x: float) -> str:
    return format(float(x), ".12g")


def emit_csv(traces: Sequence[CorrelationTrace] | CorrelationTrace, path) -> list[Path]:
    """Write one CSV per trace.

    ``path`` is a directory (files named ``<state>_g<gamma>_n<n>.csv``) or,
    for a single trace, an explicit ``.csv`` file name.
    """
    if isinstance(traces, CorrelationTrace):
        traces = [traces]
    path = Path(path)
    written = []
    try:
        if path.suffix == ".csv" and len(traces) == 1:
            targets = [path]
            path.parent.mkdir(parents=True, exist_ok=True)
        else:
            path.mkdir(parents=True, exist_ok=True)
            targets = [path / tr.filename for tr in traces]
        for tr, target in zip(traces, targets):
            with open(target, "w", newline="") as fh:
                w = csv.writer(fh, lineterminator="\n")
                w.writerow(CSV_HEADER)
                for row in tr.rows():
                    w.writerow([_fmt(v) for v in row])
            written.append(target)
    except OSError as exc:
        raise OSError(f"cannot write CSV output under {path}: {exc}") from exc
    return written


def read_csv(path) -> dict[str, np.ndarray]:
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        data = np.array([[float(v) for v in row] for row in reader], dtype=float).reshape(-1, len(header))
    return {name: data[:, k] for k, name in enumerate(header)}


_PLOT_TEMPLATE = '''#!/usr/bin/env python3
"""Plot concurrence and discord traces written by toeplitz-dynamics."""
import csv
import math
import os

import matplotlib.pyplot as plt

HERE = os.path.dirname(os.path.abspath(__file__))
PANELS = {panels!r}


def load(name):
    with open(os.path.join(HERE, name), newline="") as fh:
        rows = list(csv.DictReader(fh))
    return {{k: [float(r[k]) for r in rows] for k in rows[0]}}


cols = min(3, len(PANELS))
nrows = math.ceil(len(PANELS) / cols)
fig, axes = plt.subplots(nrows, cols, figsize=(4 * cols, 3 * nrows), squeeze=False)
for ax in axes.flat[len(PANELS):]:
    ax.set_visible(False)
for ax, (fname, title) in zip(axes.flat, PANELS):
    d = load(fname)
    ax.plot(d["t_norm"], d["concurrence"], "k:", label="concurrence")
    ax.plot(d["t_norm"], d["discord"], "r-", label="discord")
    ax.set_title(title)
    ax.set_xlabel("t/T")
axes.flat[0].legend()
fig.tight_layout()
fig.savefig(os.path.join(HERE, {figure!r}), dpi=150)
'''


def emit_plot_script(traces: Sequence[CorrelationTrace], path) -> Path:
    path = Path(path)
    panels = [(tr.filename, f"{tr.params.state} gamma={tr.params.gamma:g} b={tr.params.b:g} n={tr.params.n:g}")
              for tr in traces]
    text = _PLOT_TEMPLATE.format(panels=panels, figure=path.with_suffix(".png").name)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text)
    except OSError as exc:
        raise OSError(f"cannot write plot script {path}: {exc}") from exc
    return path
