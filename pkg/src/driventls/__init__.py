"""Floquet-Markov master equation for a strongly driven two-level system.

Exact Floquet decomposition of the driven TLS, LGKS generators built from
bath spectral densities with the KMS extension, the detuned Mollow
fluorescence spectrum, and the stationary thermodynamics of the two-bath
laser-driven heat pump.
"""

from .algebra import (
    Basis,
    Operator2,
    SuperOp,
    devectorize,
    expm_hermitian,
    lindblad_superop,
    pauli_decompose,
    pauli_reconstruct,
    vectorize,
)
from .dissipator import (
    BathSpec,
    DensityMatrix,
    Generator,
    RateSet,
    cubic_density,
    density_matrix,
    evolve_interaction,
    evolve_schrodinger,
    flat_density,
    fluorescence_rates,
    kms_density,
    local_generator,
    phenomenological_generator,
    stationary_state,
    tabulated_density,
    total_generator,
)
from .errors import BasisMismatchError, DegenerateStateError, FrequencyCollisionError
from .floquet import (
    DressedBasis,
    SystemParams,
    dressed_basis,
    make_params,
    mean_hamiltonian,
    propagator,
    propagator_oracle,
)
from .spectroscopy import Spectrum, mollow_spectrum, regression_spectrum_oracle
from .thermo import (
    HeatPumpRates,
    ThermoReport,
    classify_regime,
    entropy_production,
    heatpump_currents,
    heatpump_rates,
    heatpump_steady_ratio,
    local_heat_current,
    small_detuning_currents,
    stationary_current,
    stationary_power,
    thermo_report,
)
from .transitions import (
    TransitionOperator,
    heisenberg_coupling,
    numeric_decomposition_oracle,
    sigma1_transition_ops,
    sigma3_transition_ops,
)

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
