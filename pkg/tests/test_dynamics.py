import ast
import math
import warnings

import numpy as np
import pytest

from toeplitz_dynamics.dynamics import (CSV_HEADER, CorrelationTrace, SweepConfig, TraceParams,
                                        detect_balance_points, detect_esd, emit_csv, emit_plot_script,
                                        invariance_suite, read_csv, run_sweep, sample_times)
from toeplitz_dynamics.exceptions import ConfigError
from toeplitz_dynamics.measures import concurrence, discord


def _synthetic(conc, disc, b=1.0):
    t = np.linspace(0, 2 * np.pi / b, len(conc))
    p = TraceParams("mems", 0.5, 1.0, b, 1.0)
    z = np.zeros(len(conc))
    return CorrelationTrace(p, t, t / p.period, np.asarray(conc, float), np.asarray(disc, float), z, z)


@pytest.fixture(scope="module")
def mems03():
    return run_sweep(SweepConfig("mems", 0.3, b=2.0, n=[1.0, 2.0], t_steps=120))


# -- config -------------------------------------------------------------------------------------

@pytest.mark.parametrize("kw", [dict(state="ghz"), dict(gamma=1.5), dict(gamma=[]), dict(t_steps=1),
                                dict(t_max=-1.0), dict(periods=0.0), dict(workers=0), dict(n=[]),
                                dict(b=-2.0, n=0.5)])
def test_config_rejects(kw):
    base = dict(state="mems", gamma=0.3, b=2.0)
    base.update(kw)
    with pytest.raises(ConfigError):
        SweepConfig(**base)


def test_config_points_and_scalars():
    cfg = SweepConfig("werner", [0.1, 0.5], b=np.e, n=[1, 2, 3])
    assert cfg.points() == [(0.1, 1.0), (0.1, 2.0), (0.1, 3.0), (0.5, 1.0), (0.5, 2.0), (0.5, 3.0)]
    assert SweepConfig("werner", 0.2, b=1.0).gamma == [0.2]


def test_sample_times_default_covers_period():
    cfg = SweepConfig("mems", 0.3, b=2.0, n=3.0, t_steps=200, periods=2.0)
    t = sample_times(cfg, 3.0)
    assert t[0] == 0 and t[-1] == pytest.approx(2 * 2 * np.pi / 8)


def test_sample_times_warns_when_coarse():
    cfg = SweepConfig("mems", 0.3, b=2.0, t_steps=10)
    with pytest.warns(RuntimeWarning, match="samples per fastest"):
        sample_times(cfg, 1.0)


# -- sweep --------------------------------------------------------------------------------------

def test_two_step_trace():
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", RuntimeWarning)
        (tr,) = run_sweep(SweepConfig("werner", 0.5, b=1.0, t_steps=2))
    assert len(tr) == 2
    assert tr.t_norm[-1] == pytest.approx(1.0)
    assert tr.concurrence[0] == pytest.approx(0.25, abs=1e-10)


def test_trace_matches_pointwise(mems03):
    tr = mems03[0]
    for k in (0, 17, 85):
        rho = tr.params.rho_at(tr.t[k])
        assert tr.concurrence[k] == pytest.approx(concurrence(rho), abs=1e-12)
        assert tr.discord[k] == pytest.approx(discord(rho).discord, abs=1e-12)
    np.testing.assert_allclose(tr.discord, tr.mutual_information - tr.classical_correlation, atol=1e-9)


def test_workers_preserve_order():
    kw = dict(state="mems", gamma=[0.9, 0.3, 0.6], b=2.0, t_steps=70)
    serial = run_sweep(SweepConfig(**kw))
    parallel = run_sweep(SweepConfig(workers=2, **kw))
    assert [tr.params for tr in serial] == [tr.params for tr in parallel]
    for s, p in zip(serial, parallel):
        np.testing.assert_array_equal(s.discord, p.discord)


# -- ESD ----------------------------------------------------------------------------------------

def test_mems_esd_zones(mems03):
    rep = detect_esd(mems03[0])
    assert rep.count == 2
    assert all(rep.discord_positive_in_zones)
    assert min(rep.max_discord_in_zones) > 0.05
    for s, e in rep.zero_intervals_norm:
        assert 0 < s < e < 1


def test_esd_endpoints_refined(mems03):
    tr = mems03[0]
    rep = detect_esd(tr)
    T = tr.params.period
    for s, e in rep.zero_intervals:
        # just outside the zone the state is entangled, just inside it is not
        assert tr.params.concurrence_at(s - 2e-4 * T) > 1e-6 or tr.params.concurrence_at(s + 2e-4 * T) < 1e-6
        assert tr.params.concurrence_at(0.5 * (s + e)) < 1e-6


def test_esd_zone_width_shrinks_with_n_in_physical_time(mems03):
    r1, r2 = detect_esd(mems03[0]), detect_esd(mems03[1])
    assert r1.count == r2.count == 2
    assert r2.total_width() < r1.total_width()
    assert r2.total_width() == pytest.approx(r1.total_width() / 2, rel=1e-3)
    # in units of t/T the zones coincide
    np.testing.assert_allclose(r1.zero_intervals_norm, r2.zero_intervals_norm, atol=1e-3)


def test_werner_below_third_single_full_interval():
    (tr,) = run_sweep(SweepConfig("werner", 0.2, b=1.5, t_steps=80))
    rep = detect_esd(tr)
    assert rep.count == 1
    assert rep.zero_intervals[0] == (0.0, pytest.approx(tr.t[-1]))


def test_werner_above_third_can_still_die():
    # The evolved state leaves the singlet, so entanglement between 1/3 and
    # about 0.45 does vanish for part of the period.
    (w4, w5) = run_sweep(SweepConfig("werner", [0.4, 0.5], b=1.0, t_steps=200, periods=3.0))
    assert detect_esd(w4).count >= 1
    assert detect_esd(w5).count == 0
    assert w5.concurrence.min() == pytest.approx(0.05, abs=2e-3)


def test_esd_empty_when_always_entangled():
    rep = detect_esd(_synthetic([0.5, 0.4, 0.3, 0.4], [0.1] * 4), refine=False)
    assert rep.count == 0 and rep.total_width() == 0.0


def test_esd_unrefined_uses_samples():
    rep = detect_esd(_synthetic([0.5, 0, 0, 0.2, 0, 0.1], [0.1, 0.2, 0, 0.1, 0.3, 0.1]), refine=False)
    assert rep.count == 2
    assert rep.discord_positive_in_zones == [True, True]


# -- balance points -----------------------------------------------------------------------------

def test_balance_synthetic():
    rep = detect_balance_points(_synthetic([0.5, 0.3, 0.1, 0.1, 0.3], [0.2, 0.2, 0.2, 0.2, 0.2]), refine=False)
    assert rep.count == 2


def test_balance_skips_ties():
    rep = detect_balance_points(_synthetic([0.3, 0.2, 0.1], [0.2, 0.2, 0.2]), refine=False)
    assert rep.count == 1
    assert rep.crossings[0] == pytest.approx(np.pi)


def test_balance_werner_separable_has_none():
    (tr,) = run_sweep(SweepConfig("werner", 0.25, b=1.0, t_steps=80))
    assert detect_balance_points(tr).count == 0


def test_balance_mems_refined_crossings(mems03):
    tr = mems03[0]
    rep = detect_balance_points(tr)
    assert rep.count >= 2
    for tc in rep.crossings:
        rho_l, rho_r = tr.params.rho_at(tc - 1e-3 * tr.params.period), tr.params.rho_at(tc + 1e-3 * tr.params.period)
        dl = concurrence(rho_l) - discord(rho_l).discord
        dr = concurrence(rho_r) - discord(rho_r).discord
        assert dl * dr < 0


# -- invariance ---------------------------------------------------------------------------------

def test_invariance_suite_passes():
    rep = invariance_suite(seed=0, samples=40)
    assert rep.passed
    assert [c.name for c in rep.checks] == ["werner_spectrum", "a_independence", "bn_t_scaling"]
    assert all(c.worst < 1e-12 for c in rep.checks)


def test_invariance_fault_is_caught():
    rep = invariance_suite(seed=0, samples=10, fault="asymmetric_diagonal")
    by_name = {c.name: c for c in rep.checks}
    assert not rep.passed
    assert not by_name["a_independence"].passed
    assert by_name["a_independence"].worst > 1e-3


def test_invariance_empty_grid():
    rep = invariance_suite(samples=0)
    assert rep.passed and rep.warnings
    assert any(line.startswith("WARNING") for line in rep.lines())


def test_invariance_unknown_fault():
    with pytest.raises(ValueError):
        invariance_suite(samples=1, fault="nope")


# -- output -------------------------------------------------------------------------------------

def test_csv_round_trip(tmp_path, mems03):
    files = emit_csv(mems03, tmp_path / "out")
    assert [f.name for f in files] == ["mems_g0.3_n1.csv", "mems_g0.3_n2.csv"]
    assert files[0].read_text().splitlines()[0] == ",".join(CSV_HEADER)
    data = read_csv(files[0])
    np.testing.assert_allclose(data["discord"], mems03[0].discord, rtol=1e-11, atol=1e-300)
    np.testing.assert_allclose(data["t_norm"], mems03[0].t_norm, rtol=1e-11)


def test_csv_single_file(tmp_path, mems03):
    (f,) = emit_csv(mems03[0], tmp_path / "one.csv")
    assert f == tmp_path / "one.csv" and len(read_csv(f)["t"]) == 120


def test_csv_unwritable(tmp_path, mems03):
    blocker = tmp_path / "file"
    blocker.write_text("x")
    with pytest.raises(OSError, match="cannot write"):
        emit_csv(mems03, blocker / "sub")


def test_output_deterministic(tmp_path):
    cfg = dict(state="mems", gamma=0.6, b=np.e, t_steps=70)
    a = emit_csv(run_sweep(SweepConfig(**cfg)), tmp_path / "a")[0].read_bytes()
    b = emit_csv(run_sweep(SweepConfig(**cfg)), tmp_path / "b")[0].read_bytes()
    assert a == b


def test_plot_script_panels(tmp_path):
    traces = [_synthetic([0.1, 0.2], [0.2, 0.1]) for _ in range(6)]
    path = emit_plot_script(traces, tmp_path / "plot.py")
    text = path.read_text()
    tree = ast.parse(text)
    (panels,) = [node.value for node in tree.body
                 if isinstance(node, ast.Assign) and getattr(node.targets[0], "id", None) == "PANELS"]
    assert len(ast.literal_eval(panels)) == 6
    assert "plot.png" in text


def test_period():
    assert TraceParams("mems", 0.3, 1.0, 2.0, 3.0).period == pytest.approx(2 * math.pi / 8)
    assert TraceParams("mems", 0.3, 1.0, 0.0, 1.0).period == math.inf
