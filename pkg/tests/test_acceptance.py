"""Acceptance criteria 1-10, each reported as one PASS/FAIL line.

Every criterion collects its individual checks, prints a single verdict
line (also repeated in the terminal summary) and then asserts that all
checks hold. Tolerances are the published ones; nothing is loosened.
"""

import math

import numpy as np
import pytest

from conftest import ACCEPTANCE_LINES
from coupled_tbp import (
    ImpulseCase,
    SampledSeries,
    SystemParams,
    analyze,
    envelope,
    integrate_ode,
    mechanical_energy,
    modal_excitation,
    modes,
    tbp,
    total_energy,
    velocity,
)
from coupled_tbp.cli import run
from coupled_tbp.ingest import bundled_config, load_rom, rom_metrics
from coupled_tbp.model import mode_mpc
from coupled_tbp.studies import (
    SweepSpec,
    compare_same_bw,
    compare_same_est,
    default_damping_grid,
    grid_damping,
    locate_extremum,
    mpc_curve,
    record_length,
    sweep_gamma,
)


class Checks:
    def __init__(self, number, title):
        self.number, self.title, self.items = number, title, []

    def close(self, label, value, target, rel=None, abs_=None):
        err = abs(value - target)
        tol = abs_ if abs_ is not None else rel * abs(target)
        self.items.append((label, err <= tol, f"{label}={value:.6g} (target {target:g}, tol {tol:.3g})"))

    def within(self, label, value, lo, hi):
        self.items.append((label, lo <= value <= hi, f"{label}={value:.6g} in [{lo:g}, {hi:g}]"))

    def true(self, label, ok, detail):
        self.items.append((label, bool(ok), f"{label}: {detail}"))

    def report(self):
        failed = [d for _, ok, d in self.items if not ok]
        verdict = "PASS" if not failed else "FAIL"
        line = f"[{verdict}] criterion {self.number:2d} {self.title}: {len(self.items) - len(failed)}/{len(self.items)} checks"
        if failed:
            line += "; failing: " + "; ".join(failed)
        ACCEPTANCE_LINES[self.number] = line
        print(line)
        assert not failed, line


def _metrics(gamma, case):
    return analyze(SystemParams.from_gamma(gamma), case).metrics


@pytest.fixture(scope="module")
def sweeps():
    return {c: sweep_gamma(SweepSpec(case=ImpulseCase.case(c))) for c in (1, 2)}


def test_c01_single_dof_closed_form():
    c = Checks(1, "single-DOF closed form")
    for sigma in (0.0125, 0.025, 0.05):
        env = SampledSeries.from_function(lambda t: np.exp(-sigma * t),
                                          1.05 * record_length(sigma), 0.05)
        m = tbp(env)
        c.close(f"bw(s={sigma})", m.bandwidth, 2 * sigma, rel=0.01)
        c.close(f"est(s={sigma})", m.storage_time, 1 / (2 * sigma), rel=0.01)
        c.within(f"tbp(s={sigma})", m.tbp, 0.99, 1.01)
    c.report()


def test_c02_gamma_limits():
    c = Checks(2, "gamma -> 0 and gamma -> inf limits")
    lo1, lo2 = _metrics(0.05, 1), _metrics(0.05, 2)
    hi1, hi2 = _metrics(50.0, 1), _metrics(50.0, 2)
    c.close("bw(0.05,case1)", lo1.bandwidth, 0.00125, rel=0.05)
    c.close("bw(0.05,case2)", lo2.bandwidth, 0.05, rel=0.05)
    for name, m in (("case1", hi1), ("case2", hi2)):
        c.close(f"bw(50,{name})", m.bandwidth, 0.025625, rel=0.05)
        c.close(f"est(50,{name})", m.storage_time, 39.0, rel=0.05)
    for name, m in (("0.05,case1", lo1), ("0.05,case2", lo2), ("50,case1", hi1), ("50,case2", hi2)):
        c.close(f"tbp({name})", m.tbp, 1.0, abs_=0.02)
    c.report()


def test_c03_sweep_extremes(sweeps):
    c = Checks(3, "TBP extremes along gamma")
    g1 = [r.gamma for r in sweeps[1]]
    xmax, ymax = locate_extremum(g1, [r.tbp for r in sweeps[1]], "max")
    g2 = [r.gamma for r in sweeps[2]]
    xmin, ymin = locate_extremum(g2, [r.tbp for r in sweeps[2]], "min")
    c.true("rows", len(g1) == len(g2) == 261, f"{len(g1)}/{len(g2)} rows")
    c.close("case1 max tbp", ymax, 1.341, abs_=0.03)
    c.close("case1 argmax gamma", xmax, 2.70, abs_=0.1)
    c.close("case2 min tbp", ymin, 0.687, abs_=0.03)
    c.close("case2 argmin gamma", xmin, 0.35, abs_=0.1)
    c.report()


def test_c04_same_bandwidth_storage_times():
    c = Checks(4, "same-bandwidth storage-time comparison")
    for (gamma, case), (two, sdof) in {(2.70, 1): (65.4, 48.78), (0.35, 2): (33.68, 49.02)}.items():
        rep = compare_same_bw(gamma, case)
        c.close(f"est two-DOF({gamma})", rep.metrics[0].storage_time, two, rel=0.03)
        c.close(f"est SDOF({gamma})", rep.metrics[1].storage_time, sdof, rel=0.03)
    c.report()


def test_c05_same_storage_time_bandwidths():
    c = Checks(5, "same-storage-time bandwidth comparison")
    for (gamma, case), (two, sdof) in {(2.70, 1): (0.0206, 0.0153), (0.35, 2): (0.020, 0.0297)}.items():
        rep = compare_same_est(gamma, case)
        c.close(f"bw two-DOF({gamma})", rep.metrics[0].bandwidth, two, rel=0.05)
        c.close(f"bw SDOF({gamma})", rep.metrics[1].bandwidth, sdof, rel=0.05)
    c.report()


def test_c06_equal_damping_transition():
    c = Checks(6, "equal damping gives TBP = 1")
    _, beta = default_damping_grid()
    for case in (1, 2):
        rows = grid_damping(SweepSpec(case=ImpulseCase.case(case), lambda1_grid=[0.05]))
        worst = max(abs(r.tbp - 1) for r in rows)
        c.true(f"case{case}", len(rows) == len(beta) and worst <= 0.01,
               f"{len(rows)} betas, max |tbp-1| = {worst:.3g}")
    c.report()


def test_c07_modal_phase_collinearity():
    c = Checks(7, "modal phase collinearity")
    _, beta = default_damping_grid()
    worst = max(np.max(np.abs(mode_mpc(modes(SystemParams(beta=b, lambda1=0.05, lambda2=0.05))) - 1))
                for b in beta)
    c.true("proportional damping", worst <= 1e-9, f"max |MPC-1| = {worst:.2e}")
    rows = mpc_curve()
    g = [r[0] for r in rows]
    xmin, _ = locate_extremum(g, [min(r[1], r[2]) for r in rows], "min")
    c.close("MPC argmin gamma", xmin, 2.0, abs_=0.1)
    c.report()


def test_c08_oracle_equivalence():
    c = Checks(8, "modal solution vs RK4 oracle")
    worst = 0.0
    for gamma in (0.5, 1.9, 2.1, 5.0):
        p = SystemParams.from_gamma(gamma)
        for case in (1, 2):
            traj = integrate_ode(p, ImpulseCase.case(case), 200.0, dt=0.01)
            v = velocity(modal_excitation(modes(p), ImpulseCase.case(case), p), traj.t)
            ref = traj.states[:, 2:].T
            worst = max(worst, np.max(np.abs(v - ref)) / np.max(np.abs(ref)))
    c.true("velocity", worst <= 1e-6, f"max relative deviation {worst:.2e}")
    worst_e = 0.0
    for gamma in (0.5, 1.9, 2.1, 5.0, 0.35, 2.70):
        p = SystemParams.from_gamma(gamma)
        for case in (1, 2):
            eff = analyze(p, case)
            T = 3 * eff.metrics.storage_time
            traj = integrate_ode(p, ImpulseCase.case(case), T, dt=0.01)
            Em = mechanical_energy(p, traj).values
            Ek = total_energy(eff.data, p, traj.t)
            worst_e = max(worst_e, np.max(np.abs(Ek - Em)) / Em[0])
    c.true("energy", worst_e <= 0.05, f"max |E - E_mech| / E(0) = {worst_e:.3g} over [0, 3 est]")
    p = SystemParams(beta=0.05, lambda1=0.0, lambda2=0.0)
    E = mechanical_energy(p, integrate_ode(p, ImpulseCase.case(1), 200.0)).values
    drift = np.max(np.abs(E - E[0])) / E[0]
    c.true("undamped drift", drift <= 1e-8, f"{drift:.2e}")
    c.report()


def test_c09_table1_rom_rows():
    c = Checks(9, "measured-fixture ROM rows")
    weak = load_rom(bundled_config("rom_weak.cfg"))
    for case, (bw, est, prod) in {1: (3.4134, 0.339, 1.157), 2: (4.4811, 0.205, 0.918)}.items():
        m = rom_metrics(weak, case)
        c.close(f"weak case{case} bw", m.bandwidth, bw, rel=0.05)
        c.close(f"weak case{case} est", m.storage_time, est, rel=0.05)
        c.close(f"weak case{case} tbp", m.tbp, prod, abs_=0.05)
    strong = load_rom(bundled_config("rom_strong.cfg"))
    for case, prod in {1: 0.993, 2: 1.089}.items():
        m = rom_metrics(strong, case)
        c.close(f"strong(gamma={strong.gamma:.3g}) case{case} tbp", m.tbp, prod, abs_=0.1)
    c.report()


def test_c10_property_suite(tmp_path):
    c = Checks(10, "property suite")
    rng = np.random.default_rng(7)
    env = analyze(SystemParams.from_gamma(1.3), 2).envelope
    base = tbp(env)
    worst = 0.0
    for s in 10.0 ** rng.uniform(-6, 6, 8):
        m = tbp(env.scaled(s))
        worst = max(worst, abs(m.bandwidth / base.bandwidth - 1), abs(m.storage_time / base.storage_time - 1))
    c.true("scale invariance", worst <= 1e-10, f"{worst:.1e}")
    worst = max(abs(tbp(SampledSeries(0.0, env.dt * k, env.values)).tbp - base.tbp)
                for k in (0.01, 0.5, 3.0, 167.26))
    c.true("time dilation", worst <= 1e-6, f"{worst:.1e}")
    bad_env = bad_e = 0
    for gamma in np.geomspace(0.05, 50, 12):
        p = SystemParams.from_gamma(gamma)
        for case in (1, 2):
            d = modal_excitation(modes(p), ImpulseCase.case(case), p)
            t = np.linspace(0, 2000, 4001)
            bad_env += int(np.sum(envelope(d, t) < np.abs(velocity(d, t)) - 1e-12))
            bad_e += int(np.sum(total_energy(d, p, t) < 0))
    c.true("envelope >= |v|", bad_env == 0, f"{bad_env} violations")
    c.true("E >= 0", bad_e == 0, f"{bad_e} violations")
    worst = 0.0
    for gamma, case in ((0.35, 2), (2.70, 1), (0.05, 1), (50.0, 2)):
        p = SystemParams.from_gamma(gamma)
        a, b = analyze(p, case, dt=0.05).metrics, analyze(p, case, dt=0.025).metrics
        worst = max(worst, abs(a.bandwidth / b.bandwidth - 1), abs(a.storage_time / b.storage_time - 1))
    c.true("grid refinement", worst <= 2e-3, f"max change {worst:.1e}")
    outs = []
    for k in range(2):
        d = tmp_path / f"run{k}"
        run(["sweep-gamma", "--case", "1", "--points", "9", "--out", str(d)])
        run(["metrics", "--gamma", "0.35", "--case", "2", "--out", str(d)])
        outs.append({p.name: p.read_bytes() for p in sorted(d.glob("*.csv"))})
    c.true("CSV determinism", outs[0] == outs[1] and len(outs[0]) == 4, f"{len(outs[0])} files compared")
    c.report()
