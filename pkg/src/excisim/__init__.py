"""Exciton transport simulator and circuit parameter compiler.

The scientific core re-exports here; the circuit compiler and the
command-line front end stay behind their submodules (``excisim.compiler``,
``excisim.cli``) since their names are task-specific.
"""

from .chainmap import BathChain, BathStar, chain_spectral_check, to_chain
from .dynamics import (
    EnsembleResult,
    NoiseSeries,
    RateMatrix,
    SinkSpec,
    Trajectory,
    WhiteNoise,
    efficiency,
    enaqt_sweep,
    ensemble_average,
    hsr_trajectory,
    lindblad_dephasing_propagate,
    redfield_propagate,
    redfield_rates,
    validate_density_matrix,
)
from .model import (
    EigenSystem,
    ExcitonModel,
    ParameterRangeWarning,
    Pathway,
    build_model,
    eigendecompose,
    pathways,
    sample_disorder,
)
from .spectral import (
    FitOptions,
    Oscillator,
    OscillatorSet,
    OscillatorSum,
    SuperOhmic,
    Tabulated,
    TemperatureSD,
    eval_C_osc,
    eval_J,
    fit_oscillators,
    relative_rms,
    reorganization_energy,
    temperature_transform,
)
from .units import (
    Quantity,
    ScaleMap,
    Unit,
    apply_scale,
    bose_occupation,
    convert,
    kelvin,
    parse_quantity,
    picoseconds,
    scale_map_from_beats,
    thermal_wavenumber,
    wavenumber,
)

__version__ = "0.1.0"
