"""rms bandwidth, energy-storage time and time-bandwidth product.

For a velocity envelope ``v(t)`` with Fourier transform ``V(w)``::

    bandwidth    = 2 sqrt( int (w - wc)^2 |V|^4 dw / int |V|^4 dw )
    storage_time = sqrt(2) sqrt( int t^2 v^4 dt / int v^4 dt )

both over ``[0, inf)``. A single-DOF LTI envelope ``exp(-s t)`` gives
``bandwidth = 2 s`` and ``storage_time = 1 / (2 s)``, so the product is 1.
"""

from dataclasses import dataclass

import numpy as np
from scipy import fft as sp_fft

from .errors import DecayGuardError, InputError
from .response import SampledSeries

#: the record must end below this fraction of the envelope maximum
DECAY_FLOOR = 1e-6
PAD_FACTOR = 8
#: spectral quadrature stops where |V|^4 falls below this fraction of its peak
SPECTRUM_FLOOR = 1e-12


@dataclass(frozen=True)
class SpectralDensity:
    domega: float
    magnitudes: np.ndarray
    central_frequency: float

    @property
    def omega(self):
        return self.domega * np.arange(len(self.magnitudes))


@dataclass(frozen=True)
class DissipationMetrics:
    bandwidth: float
    storage_time: float
    central_frequency: float = 0.0

    @property
    def tbp(self):
        return self.bandwidth * self.storage_time

    def row(self):
        return (self.bandwidth, self.storage_time, self.tbp, self.central_frequency)


def _check_decay(env, floor):
    v = np.abs(env.values)
    peak = v.max() if len(v) else 0.0
    if peak <= 0:
        raise InputError("envelope is identically zero", module="metrics")
    if v[-1] > floor * peak:
        raise DecayGuardError(
            f"envelope ends at {v[-1] / peak:.3g} of its peak (> {floor:g}); "
            "extend the record",
            module="metrics",
        )


def _parabolic_peak(y, k):
    """Vertex offset (in bins) of the parabola through y[k-1], y[k], y[k+1]."""
    if k == 0:
        # |V| is even in omega, so the left neighbour mirrors the right one
        ym, y0, yp = y[1], y[0], y[1]
    elif k == len(y) - 1:
        return 0.0
    else:
        ym, y0, yp = y[k - 1], y[k], y[k + 1]
    den = ym - 2 * y0 + yp
    if den == 0:
        return 0.0
    return float(np.clip(0.5 * (ym - yp) / den, -0.5, 0.5))


def _interp_weights(theta):
    """Fourier weights of the piecewise-linear interpolant (Filon-type).

    Returns the interior weight ``W`` and the first-endpoint correction
    ``a0`` for the kernel ``exp(-1j w t)``.
    """
    W = np.ones_like(theta)
    a0 = np.full(theta.shape, -0.5 + 0j)
    nz = theta > 0
    th = theta[nz]
    one_minus_cos = 2 * np.sin(th / 2) ** 2
    W[nz] = 2 * one_minus_cos / th**2
    a0[nz] = -one_minus_cos / th**2 - 1j * (th - np.sin(th)) / th**2
    return W, a0


def envelope_spectrum(env, pad=PAD_FACTOR, decay_floor=DECAY_FLOOR):
    """One-sided magnitude of the Fourier transform of ``env``.

    The transform is that of the piecewise-linear interpolant of the
    samples, evaluated with a zero-padded FFT plus endpoint corrections;
    it keeps the ``v(0) / (j w)`` high-frequency asymptote of an envelope
    that starts at a nonzero value.
    """
    if pad < 8:
        raise InputError("padding factor must be >= 8", module="metrics")
    _check_decay(env, decay_floor)
    v = env.values
    dt = env.dt
    n = sp_fft.next_fast_len(int(pad * len(v)), real=True)
    omega = 2 * np.pi * sp_fft.rfftfreq(n, dt)
    W, a0 = _interp_weights(omega * dt)
    t_last = (len(v) - 1) * dt
    F = W * sp_fft.rfft(v, n) * dt
    F = F + dt * (a0 * v[0] + np.conj(a0) * v[-1] * np.exp(-1j * omega * t_last))
    mag = np.abs(F)
    k = int(np.argmax(mag))
    wc = (k + _parabolic_peak(mag, k)) * omega[1]
    return SpectralDensity(domega=float(omega[1]), magnitudes=mag, central_frequency=float(wc))


def bandwidth(spec):
    """rms bandwidth from the fourth power of the spectrum magnitude.

    Trapezoid quadrature up to the frequency where ``|V|^4`` drops below
    ``SPECTRUM_FLOOR`` of its peak; beyond it the ``C / w`` asymptote is
    integrated in closed form.
    """
    V4 = spec.magnitudes.astype(float) ** 4
    if not np.all(np.isfinite(V4)) or V4.max() <= 0:
        raise InputError("invalid spectrum", module="metrics")
    keep = np.nonzero(V4 >= SPECTRUM_FLOOR * V4.max())[0]
    stop = int(keep[-1]) + 1
    w = spec.omega[:stop]
    V4 = V4[:stop]
    wc = spec.central_frequency
    num = np.trapezoid((w - wc) ** 2 * V4, w)
    den = np.trapezoid(V4, w)
    if stop < len(spec.magnitudes) and w[-1] > 0:
        # |V|^4 ~ V4[-1] (w_max / w)^4 for w > w_max
        num += V4[-1] * w[-1] ** 3
        den += V4[-1] * w[-1] / 3
    return float(2 * np.sqrt(num / den))


def storage_time(env, decay_floor=DECAY_FLOOR):
    """Energy-storage time; time is measured from the record start."""
    _check_decay(env, decay_floor)
    t = env.t - env.t0
    v4 = env.values**4
    num = np.trapezoid(t**2 * v4, t)
    den = np.trapezoid(v4, t)
    return float(np.sqrt(2) * np.sqrt(num / den))


def tbp(env, pad=PAD_FACTOR, decay_floor=DECAY_FLOOR):
    """Bandwidth, storage time and their product for one envelope."""
    spec = envelope_spectrum(env, pad=pad, decay_floor=decay_floor)
    return DissipationMetrics(
        bandwidth=bandwidth(spec),
        storage_time=storage_time(env, decay_floor=decay_floor),
        central_frequency=spec.central_frequency,
    )


@dataclass(frozen=True)
class SdofParams:
    """Single oscillator ``m x'' + damping x' + stiffness x = 0``."""

    mass: float = 1.0
    stiffness: float = 1.0
    damping: float = 0.0

    @property
    def decay_rate(self):
        return self.damping / (2 * self.mass)

    def energy(self, t, E0=1.0):
        """Energy decay envelope ``E0 exp(-damping t / mass)``."""
        return E0 * np.exp(-2 * self.decay_rate * np.asarray(t, dtype=float))

    def envelope(self, t, v0=1.0):
        return v0 * np.exp(-self.decay_rate * np.asarray(t, dtype=float))

    def envelope_series(self, t_end, dt, v0=1.0):
        return SampledSeries.from_function(lambda t: self.envelope(t, v0), t_end, dt)


def sdof_reference(bandwidth=None, storage_time=None):
    """Unit single-DOF resonator matching either a bandwidth or a storage time.

    Exactly one target is given. Same-bandwidth uses damping = bandwidth;
    same storage time uses damping = 1 / storage_time. The closed-form
    metrics (bandwidth = damping, storage time = 1/damping) are returned.
    """
    if (bandwidth is None) == (storage_time is None):
        raise InputError("give exactly one of bandwidth / storage_time", module="metrics")
    target = bandwidth if bandwidth is not None else storage_time
    if not target > 0:
        raise InputError(f"target must be > 0, got {target}", module="metrics")
    lam = bandwidth if bandwidth is not None else 1.0 / storage_time
    return SdofParams(damping=lam), DissipationMetrics(lam, 1.0 / lam, 0.0)
