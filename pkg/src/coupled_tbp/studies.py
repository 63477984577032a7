"""Parameter studies of the effective oscillator.

The core pipeline (:func:`analyze`) goes eigenproblem -> modal excitation
-> kinetic-envelope energy -> effective velocity envelope -> metrics.
Sweeps evaluate it over grids of gamma or (lambda1, beta) and never abort
on a single bad point: failures become flagged rows with NaN metrics.
"""

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
import logging
import math
import os

import numpy as np

from . import _io
from .errors import DecayGuardError, GuardError, InputError
from .metrics import DECAY_FLOOR, DissipationMetrics, envelope_spectrum, sdof_reference, tbp
from .model import ImpulseCase, SystemParams, mode_mpc, modal_excitation, modes
from .response import (
    SampledSeries,
    effective_envelope,
    energy_series,
    time_grid,
    total_energy,
    velocity,
)

log = logging.getLogger(__name__)

#: default sampling step of envelopes (nondimensional time)
ENVELOPE_DT = 0.05
GAMMA_EXCLUSION = 1e-4
SWEEP_HEADER = ("gamma", "case", "bandwidth", "storage_time", "tbp", "central_frequency", "flag")


def _threads():
    try:
        n = int(os.environ.get("TBP_THREADS", "0"))
    except ValueError:
        n = 0
    return n if n > 0 else (os.cpu_count() or 1)


def _pmap(func, items):
    items = list(items)
    workers = min(_threads(), len(items)) or 1
    if workers == 1:
        return [func(x) for x in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(func, items))


def _as_case(case):
    return case if isinstance(case, ImpulseCase) else ImpulseCase.case(int(case))


@dataclass(frozen=True)
class EffectiveOscillator:
    """Everything the pipeline computes for one (params, case) pair."""

    params: SystemParams
    case: ImpulseCase
    energy: SampledSeries
    envelope: SampledSeries
    metrics: DissipationMetrics
    data: object = None


def record_length(sigma_min, floor=DECAY_FLOOR):
    """Time for ``exp(-sigma_min t)`` to fall to ``floor``, at least ten storage times."""
    return max(math.log(1 / floor) / sigma_min, 10 / (2 * sigma_min))


def analyze(params, case, dt=ENVELOPE_DT, decay_floor=DECAY_FLOOR, t_end=None):
    """Effective-oscillator metrics of the two-DOF system for one impulse case."""
    case = _as_case(case)
    sol = modes(params)
    data = modal_excitation(sol, case, params)
    sig = float(np.min(data.sigma))
    if not sig > 0:
        raise DecayGuardError("undamped mode: energy never decays", module="studies")
    T = t_end if t_end is not None else 1.05 * record_length(sig, decay_floor)
    for _ in range(6):
        E = energy_series(data, params, T, dt)
        env = effective_envelope(E, params.total_mass)
        try:
            m = tbp(env, decay_floor=decay_floor)
        except DecayGuardError:
            if t_end is not None:
                raise
            T *= 1.5
            continue
        return EffectiveOscillator(params, case, E, env, m, data)
    raise DecayGuardError("envelope failed to decay within the record", module="studies")


def default_gamma_grid():
    """200 log-spaced points on [0.05, 50] merged with 61 linear points on [0.2, 4]."""
    g = np.union1d(np.logspace(np.log10(0.05), np.log10(50), 200), np.linspace(0.2, 4, 61))
    return avoid_exceptional_point(g)


def avoid_exceptional_point(gammas):
    g = np.array(gammas, dtype=float)
    g[np.abs(g - 2) < GAMMA_EXCLUSION] += GAMMA_EXCLUSION
    if np.any(np.diff(g) <= 0):
        raise InputError("gamma grid must be strictly increasing", module="studies")
    return g


@dataclass(frozen=True)
class SweepSpec:
    base: SystemParams = field(default_factory=SystemParams)
    case: ImpulseCase = field(default_factory=ImpulseCase)
    gamma_grid: np.ndarray = None
    lambda1_grid: np.ndarray = None
    beta_grid: np.ndarray = None
    out: str = None


@dataclass(frozen=True)
class SweepRow:
    gamma: float
    case: int
    bandwidth: float
    storage_time: float
    tbp: float
    central_frequency: float
    flag: str = ""
    lambda1: float = math.nan
    beta: float = math.nan

    @classmethod
    def evaluate(cls, params, case, gamma, **kw):
        try:
            m = analyze(params, case, **kw).metrics
        except (GuardError, InputError) as exc:
            log.warning("gamma=%g: %s", gamma, exc)
            return cls(gamma, case.label, *(math.nan,) * 4, flag=type(exc).__name__,
                       lambda1=params.lambda1, beta=params.beta)
        return cls(gamma, case.label, m.bandwidth, m.storage_time, m.tbp,
                   m.central_frequency, lambda1=params.lambda1, beta=params.beta)


def sweep_gamma(spec, **kw):
    """Metrics along a gamma grid at fixed damping; writes CSV if ``spec.out``."""
    base = spec.base
    if base.lambda1 == base.lambda2:
        raise InputError("gamma sweep needs lambda1 != lambda2", module="studies")
    grid = default_gamma_grid() if spec.gamma_grid is None else avoid_exceptional_point(spec.gamma_grid)
    rows = _pmap(lambda g: SweepRow.evaluate(base.with_gamma(g), spec.case, g, **kw), grid)
    if spec.out:
        write_sweep(spec.out, rows)
    return rows


def write_sweep(path, rows):
    return _io.write_table(
        path, SWEEP_HEADER,
        [(r.gamma, r.case, r.bandwidth, r.storage_time, r.tbp, r.central_frequency, r.flag)
         for r in rows],
    )


GRID_HEADER = ("lambda1", "beta", "gamma", "case", "bandwidth", "storage_time", "tbp",
               "central_frequency", "flag")


def default_damping_grid(lambda2=0.05):
    lam1 = np.linspace(0.00125, lambda2, 6)
    beta = np.logspace(np.log10(3e-4), np.log10(0.6), 30)
    return lam1, beta


def grid_damping(spec, **kw):
    """Metrics over every (lambda1, beta) pair, lambda2 fixed by ``spec.base``."""
    base = spec.base
    lam1, beta = default_damping_grid(base.lambda2)
    if spec.lambda1_grid is not None:
        lam1 = np.asarray(spec.lambda1_grid, dtype=float)
    if spec.beta_grid is not None:
        beta = np.asarray(spec.beta_grid, dtype=float)
    for name, g in (("lambda1", lam1), ("beta", beta)):
        if np.any(np.diff(g) <= 0):
            raise InputError(f"{name} grid must be strictly increasing", module="studies")
    if np.any(lam1 <= 0) or np.any(lam1 > base.lambda2):
        raise InputError("lambda1 grid must lie in (0, lambda2]", module="studies")

    def point(pair):
        l1, b = pair
        p = replace(base, lambda1=float(l1), beta=float(b))
        dl = p.lambda2 - p.lambda1
        g = 4 * b / dl if dl != 0 else math.inf
        return SweepRow.evaluate(p, spec.case, g, **kw)

    rows = _pmap(point, [(l1, b) for l1 in lam1 for b in beta])
    if spec.out:
        _io.write_table(
            spec.out, GRID_HEADER,
            [(r.lambda1, r.beta, r.gamma, r.case, r.bandwidth, r.storage_time, r.tbp,
              r.central_frequency, r.flag) for r in rows],
        )
    return rows


def locate_extremum(x, y, kind="max"):
    """Grid extremum refined by the parabola through its two neighbours.

    Works on non-uniform grids. NaN entries are ignored. Returns ``(x*, y*)``.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    ok = np.isfinite(y)
    x, y = x[ok], y[ok]
    s = 1.0 if kind == "max" else -1.0
    k = int(np.argmax(s * y))
    if k == 0 or k == len(y) - 1:
        return float(x[k]), float(y[k])
    x0, x1, x2 = x[k - 1: k + 2]
    y0, y1, y2 = y[k - 1: k + 2]
    # vertex of the Lagrange parabola
    d01, d12 = (y1 - y0) / (x1 - x0), (y2 - y1) / (x2 - x1)
    a = (d12 - d01) / (x2 - x0)
    if a == 0:
        return float(x1), float(y1)
    xv = 0.5 * (x0 + x1) - d01 / (2 * a)
    yv = y0 + d01 * (xv - x0) + a * (xv - x0) * (xv - x1)
    return float(xv), float(yv)


def mpc_curve(base=None, gammas=None, out=None):
    """MPC of both physical modes along a gamma grid; rows ``(gamma, mpc1, mpc2)``."""
    base = base or SystemParams()
    grid = default_gamma_grid() if gammas is None else avoid_exceptional_point(gammas)
    rows = [(g, *mode_mpc(modes(base.with_gamma(g)))) for g in grid]
    if out:
        _io.write_table(out, ("gamma", "mpc1", "mpc2"), rows)
    return rows


@dataclass(frozen=True)
class ComparisonReport:
    """Two labelled series on a common axis, their metrics and marker positions.

    ``kind`` is ``"energy"`` (axis = time, markers = storage times) or
    ``"spectrum"`` (axis = frequency, markers = half bandwidths).
    """

    kind: str
    labels: tuple
    axis: np.ndarray
    series: tuple
    metrics: tuple
    markers: tuple
    extra: dict = field(default_factory=dict)

    def columns(self):
        x = "t" if self.kind in ("energy", "transient") else "omega"
        cols = {x: self.axis}
        for lab, s in zip(self.labels, self.series):
            cols[lab] = s
        cols.update(self.extra)
        return cols

    def to_csv(self, path):
        return _io.write_columns(path, self.columns())


EXTREME_CASES = ((0.35, 2), (2.70, 1))


def extreme_case_transients(base=None, t_end=600.0, dt=ENVELOPE_DT):
    """Velocities and normalized energy for the min-TBP and max-TBP configurations."""
    base = base or SystemParams()
    t = time_grid(t_end, dt)
    labels, series, mets, markers, extra = [], [], [], [], {}
    for gamma, case_no in EXTREME_CASES:
        p = base.with_gamma(gamma)
        eff = analyze(p, case_no)
        v = velocity(eff.data, t)
        E = total_energy(eff.data, p, t)
        tag = f"gamma{gamma:.2f}_case{case_no}"
        labels.append(f"energy_{tag}")
        series.append(E / E[0])
        mets.append(eff.metrics)
        markers.append(eff.metrics.storage_time)
        extra[f"v1_{tag}"] = v[0]
        extra[f"v2_{tag}"] = v[1]
    return ComparisonReport("transient", tuple(labels), t, tuple(series), tuple(mets),
                            tuple(markers), extra)


def compare_same_bw(gamma, case, base=None, dt=ENVELOPE_DT):
    """Normalized energy decay of the two-DOF system vs a same-bandwidth SDOF."""
    base = base or SystemParams()
    eff = analyze(base.with_gamma(gamma), case, dt=dt)
    sdof, sdof_m = sdof_reference(bandwidth=eff.metrics.bandwidth)
    t = eff.energy.t
    E2 = eff.energy.values / eff.energy.values[0]
    E1 = sdof.energy(t)
    return ComparisonReport(
        "energy", ("two_dof", "sdof"), t, (E2, E1), (eff.metrics, sdof_m),
        (eff.metrics.storage_time, sdof_m.storage_time),
    )


def compare_same_est(gamma, case, base=None, dt=ENVELOPE_DT):
    """Envelope spectra of the two-DOF system vs a same-storage-time SDOF.

    Both envelopes are normalized to unit initial value and sampled on the
    same grid, so their spectra share a frequency axis.
    """
    base = base or SystemParams()
    eff = analyze(base.with_gamma(gamma), case, dt=dt)
    sdof, sdof_m = sdof_reference(storage_time=eff.metrics.storage_time)
    n = max(len(eff.envelope), len(time_grid(1.05 * record_length(sdof.decay_rate), dt)))
    t = dt * np.arange(n)
    v2 = np.zeros(n)
    v2[: len(eff.envelope)] = eff.envelope.values / eff.envelope.values[0]
    env2 = SampledSeries(0.0, dt, v2)
    env1 = SampledSeries(0.0, dt, sdof.envelope(t))
    s2 = envelope_spectrum(env2)
    s1 = envelope_spectrum(env1)
    w = s2.omega
    keep = w <= 20 * max(eff.metrics.bandwidth, sdof_m.bandwidth)
    return ComparisonReport(
        "spectrum", ("two_dof", "sdof"), w[keep],
        (s2.magnitudes[keep], s1.magnitudes[keep]), (eff.metrics, sdof_m),
        (eff.metrics.bandwidth / 2, sdof_m.bandwidth / 2),
    )
