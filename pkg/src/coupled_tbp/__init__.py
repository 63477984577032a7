"""Dissipative capacity of a non-classically damped two-DOF oscillator.

Bandwidth, energy-storage time and time-bandwidth product of the
"effective oscillator" built from the total energy decay of two coupled,
differently damped oscillators with closely spaced modes.
"""

__version__ = "0.1.0"

from .errors import DecayGuardError, DegeneracyError, GuardError, InputError, TBPError
from .model import (
    AsymptoticParams,
    ImpulseCase,
    ModalSolution,
    SystemParams,
    derive_asymptotic,
    load_params,
    modal_excitation,
    modes,
    mpc,
    receptance,
    solve_modes,
    state_matrix,
)
from .response import (
    ExcitedModalData,
    SampledSeries,
    effective_envelope,
    envelope,
    integrate_ode,
    mechanical_energy,
    total_energy,
    velocity,
)
from .metrics import (
    DissipationMetrics,
    SpectralDensity,
    bandwidth,
    envelope_spectrum,
    sdof_reference,
    storage_time,
    tbp,
)
from .studies import analyze
