"""Collective motional cat states of trapped-ion ensembles.

Simulation of bichromatic-pulse protocols that entangle the shared
center-of-mass mode of N ions with their collective electronic state,
producing superpositions of coherent states conditioned on fluorescence
outcomes, plus a brute-force full-space oracle and Wigner-function tools.
"""

from .engine import (
    PROTOCOLS,
    TARGETS,
    PhysicalParams,
    ProtocolResult,
    PulseSpec,
    VibronicState,
    apply_carrier,
    apply_dispersive,
    apply_pulse,
    apply_resonant,
    dispersive_rate,
    ground_state,
    lamb_dicke,
    lamb_dicke_si,
    postselect,
    resonant_alpha,
    run_protocol,
    sample_outcomes,
    vibronic_fidelity,
)
from .errors import (
    ConfigError,
    ConvergenceError,
    DegenerateOutcome,
    IonCatsError,
    TruncationError,
    UnsupportedOrder,
)
from .motional import (
    FockSpace,
    MotionalDensity,
    MotionalState,
    WignerGrid,
    coherent_state,
    displacement_matrix,
    required_n_max,
    wigner,
)
from .spin import RotationMatrix, SpinOperators, build_spin_operators, wigner_small_d

__version__ = "0.1.0"

__all__ = [
    "PROTOCOLS",
    "TARGETS",
    "PhysicalParams",
    "ProtocolResult",
    "PulseSpec",
    "VibronicState",
    "apply_carrier",
    "apply_dispersive",
    "apply_pulse",
    "apply_resonant",
    "dispersive_rate",
    "ground_state",
    "lamb_dicke",
    "lamb_dicke_si",
    "postselect",
    "resonant_alpha",
    "run_protocol",
    "sample_outcomes",
    "vibronic_fidelity",
    "ConfigError",
    "ConvergenceError",
    "DegenerateOutcome",
    "IonCatsError",
    "TruncationError",
    "UnsupportedOrder",
    "FockSpace",
    "MotionalDensity",
    "MotionalState",
    "WignerGrid",
    "coherent_state",
    "displacement_matrix",
    "required_n_max",
    "wigner",
    "RotationMatrix",
    "SpinOperators",
    "build_spin_operators",
    "wigner_small_d",
    "__version__",
]
