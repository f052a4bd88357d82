"""slitlab: a numerical two-slit laboratory.

Branch-resolved wave propagation, interaction-free fringe probing with wire
masks, thin-lens imaging onto paired detectors, and quantitative which-way
metrics, plus an exact two-state (spin) model and a randomized check of the
no-orthogonal-survivors argument.
"""

from .metrics import (
    ConditionalStats,
    VisibilityUndefinedError,
    distinguishability,
    duality_budget,
    mutual_information,
    visibility,
)
from .optics import (
    DegenerateModesError,
    DetectorReport,
    FringeMap,
    ImagingError,
    LensLoss,
    LensSpec,
    ModeDecomposition,
    NoInterferenceError,
    WireGrid,
    WireLoss,
    apply_wires,
    detect,
    find_dark_fringes,
    image_through_lens,
    mode_contributions,
)
from .scenarios import (
    DEFAULTS,
    PipelineError,
    RunReport,
    ScenarioConfig,
    SweepResult,
    ValidationError,
    parse_config,
    run_scenario,
    sweep,
    write_run_outputs,
)
from .spin import (
    BranchedSpinState,
    SpinEvolver,
    SpinState,
    equal_superposition,
    evolve,
    evolve_branches,
    make_interference_state,
    project_dark_port,
    spin_down,
    spin_up,
    trace_distance,
    which_initial_state_info,
)
from .theorem import (
    FrameInstance,
    TheoremReport,
    UnsatisfiableFrameError,
    build_instance,
    check_theorem,
    predicted_overlap,
    sample_instance,
    surviving_overlap,
)
from .wavepacket import (
    BranchedField,
    CoshSinhParts,
    Grid,
    GridCoverageError,
    SlitConfig,
    WaveField,
    cosh_sinh_decompose,
    gaussian_mode,
    initial_state,
    initial_state_with_momentum,
    intensity_profile_to_csv,
    omega,
    packet_prefactor,
    propagate_analytic,
    propagate_spectral,
    wavefield_from_csv,
    wavefield_to_csv,
)

__version__ = "0.1.0"
