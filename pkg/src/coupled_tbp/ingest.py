"""Experimental ring-down records and reduced-order models (ROMs).

Two routes to the dissipation metrics of a measured fixture:

* ROM route: eigenproblem of the identified two-DOF model, kinetic-envelope
  energy, effective envelope, metrics (computed in nondimensional time and
  rescaled by the normalization frequency).
* Record route: Akima-spline envelopes through the local maxima of each
  measured velocity, energy ``sum m_i <v_i>^2 / 2``, effective envelope,
  metrics in the record's own units.
"""

from dataclasses import dataclass
from importlib import resources
import math

import numpy as np
from scipy.interpolate import Akima1DInterpolator

from . import _io
from .errors import InputError
from .metrics import DissipationMetrics, tbp
from .model import ImpulseCase, SystemParams
from .response import SampledSeries, effective_envelope, integrate_ode
from .studies import ENVELOPE_DT, analyze

ROM_KEYS = ("m1", "m2", "k1", "k2", "c1", "c2", "K")
MIN_PEAKS = 8
#: measured records are only required to ring down to 5% of their peak
RECORD_DECAY_FLOOR = 0.05
TABLE1_HEADER = ("case", "gamma", "approach", "bandwidth_rad_s", "est_s", "tbp")


@dataclass(frozen=True)
class RomConfig:
    """Dimensional two-DOF model: kg, N/m, N s/m.

    Nondimensionalization divides by ``m1`` and ``k1``: time by
    ``1/omega_n`` with ``omega_n = sqrt(k1/m1)``, so
    ``beta_i = k_i/k1``, ``beta = K/k1`` and ``lambda_i = c_i/(m1 omega_n)``.
    """

    m1: float
    m2: float
    k1: float
    k2: float
    c1: float
    c2: float
    K: float
    omega_n_override: float = None
    gamma_label: float = None

    def __post_init__(self):
        for key in ("m1", "m2", "k1", "k2"):
            if not getattr(self, key) > 0:
                raise InputError(f"{key} must be > 0", module="ingest")
        for key in ("c1", "c2", "K"):
            if not getattr(self, key) >= 0:
                raise InputError(f"{key} must be >= 0", module="ingest")
        if self.omega_n_override is not None and not self.omega_n_override > 0:
            raise InputError("omega_n must be > 0", module="ingest")

    @property
    def omega_n(self):
        if self.omega_n_override is not None:
            return self.omega_n_override
        return math.sqrt(self.k1 / self.m1)

    @property
    def beta1(self):
        return self.k1 / (self.m1 * self.omega_n**2)

    @property
    def beta2(self):
        return self.k2 / (self.m1 * self.omega_n**2)

    @property
    def beta(self):
        return self.K / (self.m1 * self.omega_n**2)

    @property
    def lambda1(self):
        return self.c1 / (self.m1 * self.omega_n)

    @property
    def lambda2(self):
        return self.c2 / (self.m1 * self.omega_n)

    @property
    def gamma(self):
        """``4 beta / (lambda2 - lambda1)`` from the stated parameters."""
        dl = self.lambda2 - self.lambda1
        return math.inf if dl == 0 else 4 * self.beta / dl

    def system_params(self):
        """Nondimensional model (unit time = 1/omega_n, unit mass = m1)."""
        return SystemParams(
            m1=1.0, m2=self.m2 / self.m1, beta1=self.beta1, beta2=self.beta2,
            beta=self.beta, lambda_c=0.0, lambda1=self.lambda1, lambda2=self.lambda2,
        )

    def dimensional_params(self):
        return SystemParams(
            m1=self.m1, m2=self.m2, beta1=self.k1, beta2=self.k2, beta=self.K,
            lambda_c=0.0, lambda1=self.c1, lambda2=self.c2,
        )


def load_rom(path):
    """Parse a ROM ``key = value`` file.

    Required keys: ``m1 m2 k1 k2 c1 c2 K``; optional ``omega_n`` and
    ``gamma_label`` (the nominal gamma quoted for the fixture, kept only as
    metadata).
    """
    raw = _io.read_keyvalue(path, module="ingest")
    missing = [k for k in ROM_KEYS if k not in raw]
    if missing:
        raise InputError(f"{path}: missing keys {missing}", module="ingest")
    extra = set(raw) - set(ROM_KEYS) - {"omega_n", "gamma_label"}
    if extra:
        raise InputError(f"{path}: unknown keys {sorted(extra)}", module="ingest")
    for k, v in raw.items():
        if isinstance(v, str):
            raise InputError(f"{path}: {k}={v!r} is not a number", module="ingest")
    return RomConfig(
        *(raw[k] for k in ROM_KEYS),
        omega_n_override=raw.get("omega_n"),
        gamma_label=raw.get("gamma_label"),
    )


def bundled_config(name):
    """Path of a config file shipped with the package (e.g. ``"rom_weak.cfg"``)."""
    return resources.files("coupled_tbp") / "data" / name


@dataclass(frozen=True)
class MeasuredChannel:
    oscillator: int
    series: SampledSeries
    case: int = None


def load_channel(path, oscillator, case=None, rtol=1e-6):
    """Velocity record from a CSV with columns ``t,v`` (s, m/s)."""
    cols = _io.read_table(path, numeric=("t", "v"))
    if "t" not in cols or "v" not in cols:
        raise InputError(f"{path}: need columns t,v", module="ingest")
    t, v = cols["t"], cols["v"]
    if len(t) < 3:
        raise InputError(f"{path}: record too short", module="ingest")
    steps = np.diff(t)
    dt = float(np.mean(steps))
    if dt <= 0 or np.max(np.abs(steps - dt)) > rtol * max(dt, abs(t[-1])):
        raise InputError(f"{path}: sampling is not uniform", module="ingest")
    return MeasuredChannel(oscillator, SampledSeries(float(t[0]), dt, v), case)


def _local_maxima(y):
    k = np.nonzero((y[1:-1] > y[:-2]) & (y[1:-1] > y[2:]))[0] + 1
    # parabolic refinement of height and position
    ym, y0, yp = y[k - 1], y[k], y[k + 1]
    den = ym - 2 * y0 + yp
    with np.errstate(divide="ignore", invalid="ignore"):
        off = np.where(den != 0, 0.5 * (ym - yp) / den, 0.0)
    off = np.clip(off, -0.5, 0.5)
    peak = y0 - 0.25 * (ym - yp) * off
    return k + off, np.maximum(peak, y0)


def peak_envelope(ch):
    """Akima-spline envelope through the local maxima of ``|v|``.

    Held flat at the first (last) peak value before (after) the peaks and
    clipped at zero, on the channel's own time grid.
    """
    s = ch.series
    y = np.abs(s.values)
    idx, peaks = _local_maxima(y)
    if len(idx) < MIN_PEAKS:
        raise InputError(
            f"oscillator {ch.oscillator}: only {len(idx)} peaks (need {MIN_PEAKS})",
            module="ingest",
        )
    tp = s.t0 + s.dt * idx
    t = s.t
    env = np.empty_like(t)
    inside = (t >= tp[0]) & (t <= tp[-1])
    env[inside] = Akima1DInterpolator(tp, peaks)(t[inside])
    env[t < tp[0]] = peaks[0]
    env[t > tp[-1]] = peaks[-1]
    return SampledSeries(s.t0, s.dt, np.maximum(env, 0.0))


def experimental_energy(ch1, ch2, m1, m2):
    """``m1 <v1>^2 / 2 + m2 <v2>^2 / 2`` from peak envelopes."""
    a, b = ch1.series, ch2.series
    if len(a) != len(b) or not np.isclose(a.dt, b.dt, rtol=1e-9) or not np.isclose(a.t0, b.t0):
        raise InputError("channels do not share a sampling grid", module="ingest")
    e1 = peak_envelope(ch1).values
    e2 = peak_envelope(ch2).values
    return SampledSeries(a.t0, a.dt, 0.5 * m1 * e1**2 + 0.5 * m2 * e2**2)


def synthesize_channels(rom, case, v0=1.0, t_end=None, dt=None, decay=1e-4):
    """Simulated ring-down records (s, m/s) of the ROM from the RK4 oracle.

    The excited oscillator starts at velocity ``v0``. By default the record
    runs until the slowest mode has decayed by ``decay``.
    """
    case_no = int(case)
    p = rom.dimensional_params()
    masses = (p.m1, p.m2)
    imp = ImpulseCase.case(case_no, intensity=v0 * masses[case_no - 1])
    w_ref = max(math.sqrt(p.beta1 / p.m1), math.sqrt(p.beta2 / p.m2))
    if dt is None:
        dt = 0.02 / w_ref
    if t_end is None:
        sol_sigma = analyze_sigma_min(rom)
        t_end = math.log(1 / decay) / sol_sigma
    traj = integrate_ode(p, imp, t_end, dt)
    return (MeasuredChannel(1, traj.v1, case_no), MeasuredChannel(2, traj.v2, case_no))


def analyze_sigma_min(rom):
    """Slowest dimensional modal decay rate of the ROM (1/s)."""
    from .model import modes

    return float(np.min(modes(rom.system_params()).sigma)) * rom.omega_n


@dataclass(frozen=True)
class Table1Result:
    case: int
    gamma: float
    rom: DissipationMetrics
    experimental: DissipationMetrics = None

    def rows(self):
        out = [(self.case, self.gamma, "rom", *self.rom.row()[:3])]
        if self.experimental is not None:
            out.append((self.case, self.gamma, "experimental", *self.experimental.row()[:3]))
        return out


def rom_metrics(rom, case, dt=ENVELOPE_DT, v0=1.0):
    """Dimensional (rad/s, s) metrics of the ROM route."""
    p = rom.system_params()
    case_no = int(case)
    imp = ImpulseCase.case(case_no, intensity=v0 * (1.0, p.m2)[case_no - 1])
    m = analyze(p, imp, dt=dt).metrics
    w = rom.omega_n
    return DissipationMetrics(m.bandwidth * w, m.storage_time / w, m.central_frequency * w)


def record_metrics(ch1, ch2, m1, m2, decay_floor=RECORD_DECAY_FLOOR):
    """Metrics of the record route, in the records' own units."""
    E = experimental_energy(ch1, ch2, m1, m2)
    env = effective_envelope(E, m1 + m2)
    env = SampledSeries(0.0, env.dt, env.values)
    return tbp(env, decay_floor=decay_floor)


def table1_pipeline(rom, case, channels=None, dt=ENVELOPE_DT):
    """Both routes for one fixture and impulse case.

    ``channels`` is an optional ``(ch1, ch2)`` pair of measured records;
    when present the excited oscillator's ROM initial velocity is set to
    the largest measured velocity amplitude.
    """
    case_no = int(case)
    if case_no not in (1, 2):
        raise InputError(f"case must be 1 or 2, got {case}", module="ingest")
    v0 = 1.0
    exp_m = None
    if channels is not None:
        ch1, ch2 = channels
        v0 = float(np.max(np.abs((ch1, ch2)[case_no - 1].series.values)))
        exp_m = record_metrics(ch1, ch2, rom.m1, rom.m2)
    return Table1Result(case_no, rom.gamma, rom_metrics(rom, case_no, dt=dt, v0=v0), exp_m)


def write_table1(path, results):
    rows = [r for res in results for r in res.rows()]
    return _io.write_table(path, TABLE1_HEADER, rows)
