"""Impulse response: modal velocities, analytic envelopes and energy decay.

The closed-form path superposes the two positive-frequency modes of the
exact eigen-decomposition; :func:`integrate_ode` is an independent
fixed-step Runge-Kutta oracle that never touches the eigenvectors.
"""

from dataclasses import dataclass

import numpy as np

from . import _io
from .errors import InputError
from .model import state_matrix

#: largest admissible RK4 step, in units of the fastest grounding period / 2 pi
MAX_STEP = 0.05


@dataclass(frozen=True)
class ExcitedModalData:
    """Complex modal velocity amplitudes ``psi[i, m]`` (oscillator i, mode m)."""

    psi: np.ndarray
    sigma: np.ndarray
    omega: np.ndarray

    def __post_init__(self):
        psi = np.asarray(self.psi, dtype=complex)
        if psi.shape != (2, 2):
            raise InputError("psi must be 2x2", module="response")
        object.__setattr__(self, "psi", psi)
        object.__setattr__(self, "sigma", np.asarray(self.sigma, dtype=float))
        object.__setattr__(self, "omega", np.asarray(self.omega, dtype=float))

    @property
    def phi_arg(self):
        return np.angle(self.psi)

    def analytic(self, t):
        """Analytic velocities ``z_i(t)``, shape (2, len(t))."""
        t = np.asarray(t, dtype=float)
        rates = -self.sigma + 1j * self.omega
        modes = np.exp(np.multiply.outer(rates, t))  # (2, n)
        return 2 * (self.psi @ modes)


@dataclass(frozen=True)
class SampledSeries:
    """Uniformly sampled scalar series ``values[n]`` at ``t0 + n*dt``."""

    t0: float
    dt: float
    values: np.ndarray

    def __post_init__(self):
        if not self.dt > 0:
            raise InputError(f"dt must be > 0, got {self.dt}", module="response")
        vals = np.asarray(self.values, dtype=float)
        if vals.ndim != 1:
            raise InputError("values must be 1-D", module="response")
        if not np.all(np.isfinite(vals)):
            raise InputError("values must be finite", module="response")
        object.__setattr__(self, "values", vals)

    @classmethod
    def from_function(cls, f, t_end, dt, t0=0.0):
        t = time_grid(t_end, dt, t0)
        return cls(t0, dt, f(t))

    def __len__(self):
        return len(self.values)

    @property
    def t(self):
        return self.t0 + self.dt * np.arange(len(self.values))

    def scaled(self, c):
        return SampledSeries(self.t0, self.dt, c * self.values)

    def to_csv(self, path, name="value"):
        return _io.write_columns(path, {"t": self.t, name: self.values})


def time_grid(t_end, dt, t0=0.0):
    n = int(np.floor((t_end - t0) / dt + 1e-9)) + 1
    return t0 + dt * np.arange(n)


def velocity(data, t):
    """Oscillator velocities from modal superposition; returns ``(v1, v2)``."""
    return data.analytic(t).real


def envelope(data, t):
    """Envelope ``|z_i(t)|`` of each oscillator velocity; returns ``(e1, e2)``.

    Written out as the modulus of a two-term sum so that it stays exact
    when one modal amplitude vanishes.
    """
    t = np.asarray(t, dtype=float)
    a = np.abs(data.psi)
    ph = data.phi_arg
    s1, s2 = data.sigma
    w1, w2 = data.omega
    e1 = np.exp(-2 * s1 * t)
    e2 = np.exp(-2 * s2 * t)
    e12 = np.exp(-(s1 + s2) * t)
    out = []
    for i in range(2):
        sq = (a[i, 0] ** 2 * e1 + a[i, 1] ** 2 * e2
              + 2 * a[i, 0] * a[i, 1] * e12 * np.cos((w1 - w2) * t + ph[i, 0] - ph[i, 1]))
        out.append(2 * np.sqrt(np.maximum(sq, 0.0)))
    return np.array(out)


def total_energy(data, params, t):
    """Kinetic-envelope energy decay of the whole system.

    Reduces to the unit-mass expression when ``m1 = m2 = 1``; for general
    masses each oscillator's contribution is weighted by its mass.
    """
    t = np.asarray(t, dtype=float)
    a = np.abs(data.psi)
    ph = data.phi_arg
    s1, s2 = data.sigma
    w1, w2 = data.omega
    m = params.masses
    e1 = np.exp(-2 * s1 * t)
    e2 = np.exp(-2 * s2 * t)
    e12 = np.exp(-(s1 + s2) * t)
    E = 2 * (m[0] * a[0, 0] ** 2 + m[1] * a[1, 0] ** 2) * e1
    E = E + 2 * (m[0] * a[0, 1] ** 2 + m[1] * a[1, 1] ** 2) * e2
    cross = sum(
        m[i] * a[i, 0] * a[i, 1] * np.cos((w1 - w2) * t + ph[i, 0] - ph[i, 1])
        for i in range(2)
    )
    return E + 4 * e12 * cross


def energy_series(data, params, t_end, dt):
    return SampledSeries.from_function(lambda t: total_energy(data, params, t), t_end, dt)


def effective_envelope(E, M):
    """Velocity envelope of the equivalent single oscillator of mass ``M``.

    ``sqrt(2/M) * sqrt(E)``. Tiny negative round-off (relative 1e-12) is
    clipped; genuinely negative energy is rejected.
    """
    vals = np.asarray(E.values)
    if M <= 0:
        raise InputError("total mass must be > 0", module="response")
    floor = -1e-12 * max(np.max(np.abs(vals)), 1e-300)
    if np.any(vals < floor):
        raise InputError("energy series contains negative values", module="response")
    return SampledSeries(E.t0, E.dt, np.sqrt(2.0 / M) * np.sqrt(np.maximum(vals, 0.0)))


@dataclass(frozen=True)
class Trajectories:
    """RK4 state history; ``states[n] = (u1, u2, v1, v2)`` at ``t[n]``."""

    dt: float
    states: np.ndarray

    @property
    def t(self):
        return self.dt * np.arange(len(self.states))

    def series(self, name):
        j = ("u1", "u2", "v1", "v2").index(name)
        return SampledSeries(0.0, self.dt, self.states[:, j])

    @property
    def u1(self):
        return self.series("u1")

    @property
    def u2(self):
        return self.series("u2")

    @property
    def v1(self):
        return self.series("v1")

    @property
    def v2(self):
        return self.series("v2")


def integrate_ode(params, case, t_end, dt=0.01):
    """Classical fixed-step RK4 from the post-impulse state.

    The step guard is ``dt * max(sqrt(beta_i / m_i)) <= 0.05``, i.e.
    ``dt <= 0.05`` for unit grounding frequencies.
    """
    w_ref = max(np.sqrt(params.beta1 / params.m1), np.sqrt(params.beta2 / params.m2))
    if not dt > 0 or dt * w_ref > MAX_STEP * (1 + 1e-12):
        raise InputError(
            f"step dt={dt} too coarse (need dt <= {MAX_STEP / w_ref:.4g})",
            module="response",
        )
    A = state_matrix(params)
    n = int(np.floor(t_end / dt + 1e-9)) + 1
    x = np.empty((n, 4))
    x[0] = case.initial_state(params)
    # for x' = A x the four RK4 stages collapse to x <- P x with
    # P = I + hA + (hA)^2/2 + (hA)^3/6 + (hA)^4/24
    hA = dt * A
    P = np.eye(4)
    term = np.eye(4)
    for j in range(1, 5):
        term = term @ hA / j
        P = P + term
    PT = P.T
    for k in range(n - 1):
        x[k + 1] = x[k] @ PT
    return Trajectories(dt, x)


def mechanical_energy(params, traj):
    """Exact kinetic plus strain energy along a trajectory."""
    u1, u2, v1, v2 = traj.states.T
    E = (0.5 * params.m1 * v1**2 + 0.5 * params.m2 * v2**2
         + 0.5 * params.beta1 * u1**2 + 0.5 * params.beta2 * u2**2
         + 0.5 * params.beta * (u1 - u2) ** 2)
    return SampledSeries(0.0, traj.dt, E)
