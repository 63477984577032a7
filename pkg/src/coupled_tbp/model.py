"""Two-DOF oscillator with non-classical viscous damping.

Two grounded oscillators (mass ``m_i``, grounding stiffness ``beta_i``,
grounding damper ``lambda_i``) joined by a coupling spring ``beta`` and a
coupling damper ``lambda_c``. The first-order state is ``(u1, u2, v1, v2)``.

The default damping values are the lightly/heavily damped pair used
throughout the nondimensional studies, ``lambda1 = 0.00125`` and
``lambda2 = 0.05``.
"""

from dataclasses import dataclass, replace
import math

import numpy as np

from . import _io
from .errors import DegeneracyError, InputError
from .quartic import charpoly, quartic_roots

LAMBDA1 = 0.00125
LAMBDA2 = 0.05

PARAM_KEYS = ("m1", "m2", "beta1", "beta2", "beta", "lambda_c", "lambda1", "lambda2")

#: eigenvectors more parallel than this are treated as a defective pair
PARALLEL_TOL = 1e-8
#: condition number of the modal matrix above which excitation is refused
MAX_CONDITION = 1e8


@dataclass(frozen=True)
class SystemParams:
    m1: float = 1.0
    m2: float = 1.0
    beta1: float = 1.0
    beta2: float = 1.0
    beta: float = 0.0
    lambda_c: float = 0.0
    lambda1: float = LAMBDA1
    lambda2: float = LAMBDA2

    def __post_init__(self):
        for key in PARAM_KEYS:
            v = getattr(self, key)
            if not np.isfinite(v):
                raise InputError(f"{key} must be finite, got {v}", module="model")
        for key in ("m1", "m2", "beta1", "beta2"):
            if getattr(self, key) <= 0:
                raise InputError(f"{key} must be > 0", module="model")
        for key in ("beta", "lambda_c", "lambda1", "lambda2"):
            if getattr(self, key) < 0:
                raise InputError(f"{key} must be >= 0", module="model")

    @classmethod
    def from_gamma(cls, gamma, **kw):
        """Coupling stiffness chosen so that ``4 beta / (lambda2 - lambda1) = gamma``."""
        p = cls(**kw)
        return p.with_gamma(gamma)

    def with_gamma(self, gamma):
        dl = self.lambda2 - self.lambda1
        if dl == 0:
            raise InputError("gamma undefined for lambda1 == lambda2", module="model")
        return replace(self, beta=gamma * dl / 4)

    @property
    def total_mass(self):
        return self.m1 + self.m2

    @property
    def masses(self):
        return np.array([self.m1, self.m2])

    def mass_matrix(self):
        return np.diag([self.m1, self.m2])

    def stiffness_matrix(self):
        b = self.beta
        return np.array([[self.beta1 + b, -b], [-b, self.beta2 + b]])

    def damping_matrix(self):
        c = self.lambda_c
        return np.array([[self.lambda1 + c, -c], [-c, self.lambda2 + c]])

    def as_dict(self):
        return {k: getattr(self, k) for k in PARAM_KEYS}


def load_params(path, **overrides):
    """Read :class:`SystemParams` from a ``key = value`` file.

    Keys missing from the file take the class defaults. Keyword overrides
    (``None`` values ignored) win over the file.
    """
    raw = _io.read_keyvalue(path, module="model")
    unknown = set(raw) - set(PARAM_KEYS)
    if unknown:
        raise InputError(f"unknown keys in {path}: {sorted(unknown)}", module="model")
    for k, v in raw.items():
        if isinstance(v, str):
            raise InputError(f"{k}={v!r} is not a decimal number", module="model")
    raw.update({k: v for k, v in overrides.items() if v is not None})
    return SystemParams(**raw)


@dataclass(frozen=True)
class ImpulseCase:
    """Impulses applied at ``t = 0+`` to oscillators 1 and 2."""

    impulses: tuple = (math.sqrt(2), 0.0)

    def __post_init__(self):
        imp = tuple(float(x) for x in self.impulses)
        if len(imp) != 2:
            raise InputError("impulses must be a 2-vector", module="model")
        if imp[0] == 0 and imp[1] == 0:
            raise InputError("at least one impulse must be nonzero", module="model")
        object.__setattr__(self, "impulses", imp)

    @classmethod
    def case(cls, n, intensity=math.sqrt(2)):
        """Case 1: impulse on oscillator 1; Case 2: impulse on oscillator 2."""
        if n == 1:
            return cls((intensity, 0.0))
        if n == 2:
            return cls((0.0, intensity))
        raise InputError(f"unknown impulse case {n!r} (expected 1 or 2)", module="model")

    @property
    def label(self):
        if self.impulses[1] == 0:
            return 1
        if self.impulses[0] == 0:
            return 2
        return 0

    def initial_state(self, params):
        j1, j2 = self.impulses
        return np.array([0.0, 0.0, j1 / params.m1, j2 / params.m2])


@dataclass(frozen=True)
class AsymptoticParams:
    gamma: float
    lambda_plus: float
    lambda_minus: float
    omega_d: float
    omega0: float
    gamma_defined: bool = True

    def sigmas(self):
        """Leading-order decay rates of the two modes (slow first)."""
        lp, lm, g = self.lambda_plus, self.lambda_minus, self.gamma
        if not self.gamma_defined or g >= 2:
            return np.array([lp / 2, lp / 2])
        root = math.sqrt(4 - g * g)
        return np.array([lp / 2 - lm / 4 * root, lp / 2 + lm / 4 * root])

    def omegas(self):
        """Leading-order frequencies (low first)."""
        return np.array([self.omega0 - self.omega_d, self.omega0 + self.omega_d])


def derive_asymptotic(params):
    """Weak-coupling, weak-damping modal parameters.

    For ``lambda1 == lambda2`` the ratio gamma is undefined; it is returned
    as ``inf`` with ``gamma_defined=False``.
    """
    l1, l2, b = params.lambda1, params.lambda2, params.beta
    lp = (l2 + l1) / 2
    lm = (l2 - l1) / 2
    omega0 = 1 + b / 2
    if l2 == l1:
        return AsymptoticParams(math.inf, lp, lm, b / 2, omega0, gamma_defined=False)
    gamma = 4 * b / (l2 - l1)
    omega_d = abs(lm) / 4 * math.sqrt(gamma * gamma - 4) if abs(gamma) >= 2 else 0.0
    return AsymptoticParams(gamma, lp, lm, omega_d, omega0)


def state_matrix(params):
    """First-order system matrix for the state ``(u1, u2, v1, v2)``."""
    Minv = np.diag(1.0 / params.masses)
    A = np.zeros((4, 4))
    A[:2, 2:] = np.eye(2)
    A[2:, :2] = -Minv @ params.stiffness_matrix()
    A[2:, 2:] = -Minv @ params.damping_matrix()
    return A


@dataclass(frozen=True)
class ModalSolution:
    """Eigen-decomposition of the state matrix.

    Columns 0 and 1 of ``mode_shapes`` are the positive-frequency modes
    (``omega[0] <= omega[1]``); columns 2 and 3 are their conjugates.
    Eigenvalues are ``-sigma + 1j*omega``.
    """

    sigma: np.ndarray
    omega: np.ndarray
    mode_shapes: np.ndarray
    pairing: tuple = ((0, 2), (1, 3))
    condition_estimate: float = 1.0
    defective: bool = False
    residual: float = 0.0

    @property
    def eigenvalues(self):
        return -self.sigma + 1j * self.omega


def _null_vector(A, lam):
    _, s, vh = np.linalg.svd(A - lam * np.eye(A.shape[0]))
    return vh[-1].conj()


def _normalize(vec):
    vec = vec / np.linalg.norm(vec)
    k = int(np.argmax(np.abs(vec[:2])))
    return vec * (abs(vec[k]) / vec[k])


def solve_modes(A):
    """Modal decomposition of a 4x4 real state matrix.

    Eigenvalues come from the closed-form roots of the characteristic
    quartic; eigenvectors span the null space of ``A - lambda I``.

    Raises
    ------
    DegeneracyError
        If a mode is non-oscillatory (real eigenvalue), which the
        underdamped formulation cannot represent.
    """
    A = np.asarray(A, dtype=float)
    if A.shape != (4, 4):
        raise InputError("state matrix must be 4x4", module="model")
    roots = quartic_roots(charpoly(A))
    scale = max(np.max(np.abs(roots)), 1.0)
    upper = [r for r in roots if r.imag > 1e-12 * scale]
    if len(upper) != 2:
        raise DegeneracyError(
            "state matrix has real eigenvalues (overdamped mode)", module="model"
        )
    # deterministic order: omega ascending, then sigma ascending
    upper.sort(key=lambda r: (r.imag, -r.real))
    lams = np.array(upper + [u.conjugate() for u in upper])

    phi = np.empty((4, 4), dtype=complex)
    for k in range(2):
        phi[:, k] = _normalize(_null_vector(A, lams[k]))
    normA = np.linalg.norm(A, 2)
    if abs(lams[0] - lams[1]) <= 1e-8 * normA:
        # repeated eigenvalue: a two-dimensional null space means two
        # independent modes (semisimple), otherwise a Jordan block
        _, s, vh = np.linalg.svd(A - lams[0] * np.eye(4))
        if s[-2] <= 1e-8 * s[0]:
            phi[:, 0] = _normalize(vh[-1].conj())
            phi[:, 1] = _normalize(vh[-2].conj())
    phi[:, 2:] = phi[:, :2].conj()

    overlap = abs(np.vdot(phi[:, 0], phi[:, 1]))
    defective = overlap > 1 - PARALLEL_TOL
    cond = math.inf if defective else float(np.linalg.cond(phi))
    residual = max(
        np.linalg.norm(A @ phi[:, k] - lams[k] * phi[:, k]) for k in range(4)
    ) / normA
    return ModalSolution(
        sigma=-lams.real,
        omega=lams.imag,
        mode_shapes=phi,
        condition_estimate=cond,
        defective=bool(defective),
        residual=float(residual),
    )


def modes(params):
    """Shorthand for ``solve_modes(state_matrix(params))``."""
    return solve_modes(state_matrix(params))


def modal_amplitudes(sol, x0):
    """Solve ``Phi alpha = x0`` for the modal amplitudes."""
    if sol.defective:
        raise DegeneracyError("defective modal matrix (coalescing modes)", module="model")
    if sol.condition_estimate > MAX_CONDITION:
        raise DegeneracyError(
            f"ill-conditioned modal matrix (cond={sol.condition_estimate:.3g})",
            module="model",
        )
    return np.linalg.solve(sol.mode_shapes, np.asarray(x0, dtype=complex))


def modal_excitation(sol, case, params):
    """Per-oscillator complex modal velocity amplitudes for an impulse case.

    ``psi[i, m] = Phi[velocity row i, m] * alpha[m]`` for the two
    positive-frequency modes ``m``.
    """
    from .response import ExcitedModalData

    alpha = modal_amplitudes(sol, case.initial_state(params))
    psi = sol.mode_shapes[2:4, :2] * alpha[None, :2]
    return ExcitedModalData(
        psi=psi,
        sigma=sol.sigma[:2].copy(),
        omega=sol.omega[:2].copy(),
    )


def mpc(mode_shape):
    """Modal phase collinearity of a complex mode shape, in ``[0, 1]``.

    1 for a real (or uniformly phased) mode, 0 for a mode whose real and
    imaginary parts are orthogonal with equal norm.
    """
    phi = np.asarray(mode_shape, dtype=complex)
    x, y = phi.real, phi.imag
    sxx, syy, sxy = x @ x, y @ y, x @ y
    denom = (sxx + syy) ** 2
    if denom == 0:
        raise InputError("MPC of a zero vector is undefined", module="model")
    return float(((sxx - syy) ** 2 + 4 * sxy**2) / denom)


def mode_mpc(sol):
    """MPC of the displacement partition of the two physical modes."""
    return np.array([mpc(sol.mode_shapes[:2, k]) for k in range(2)])


def receptance(params, omega):
    """Displacement-per-force FRF ``(K - w^2 M + j w C)^-1``.

    ``omega`` may be a scalar (returns 2x2) or an array (returns n x 2 x 2).
    """
    w = np.asarray(omega, dtype=float)
    if np.any(w < 0):
        raise InputError("omega must be >= 0", module="model")
    K = params.stiffness_matrix()
    M = params.mass_matrix()
    C = params.damping_matrix()
    ww = np.atleast_1d(w)[:, None, None]
    Z = K[None] - ww**2 * M[None] + 1j * ww * C[None]
    try:
        H = np.linalg.inv(Z)
    except np.linalg.LinAlgError as exc:
        raise InputError("singular dynamic stiffness (undamped resonance)",
                         module="model") from exc
    return H[0] if w.ndim == 0 else H
