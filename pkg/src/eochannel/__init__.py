"""NLOS channel simulation combining a deterministic wall reflection with stochastic clusters."""

from .cir import Cir, Tap, cluster_taps, combine_nlos, eo_coefficient
from .clusters import ClusterSet, LspSet, ScenarioParams, draw_lsps, generate_clusters, load_scenario
from .config import SimConfig, load_config
from .errors import (
    ChannelModelError,
    ConfigError,
    DegenerateInput,
    DomainError,
    EmptyInput,
    InfeasibleGeometry,
    ParseError,
)
from .geometry import (
    SPEED_OF_LIGHT,
    EoOffsets,
    EoPathGeometry,
    EoPlane,
    LinkGeometry,
    SphericalAngles,
    closed_form_path_length,
    eo_path_geometry,
    image_point,
    resolve_plane,
)
from .materials import Material, complex_permittivity, fresnel
from .metrics import compute_pdp, empirical_cdf, power_proportion, rms_delay_spread
from .experiment import monte_carlo, run_drop, run_sweep
