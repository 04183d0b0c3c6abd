"""Ray antenna array (RAA) simulation toolkit.

Geometry design, beam responses, multipath channels, ray selection with
digital beamforming, and hardware cost accounting, plus a DFT-codebook
hybrid beamforming baseline for comparison.
"""

from .errors import (
    CapExceededError,
    ConstraintViolationError,
    EmptySelectionError,
    InvalidArgumentError,
    ZeroBeamformerError,
)
from .geometry import (
    HbfCodebook,
    RaaGeometry,
    build_hbf_codebook,
    build_raa,
    design_orientations,
    min_ray_spacing,
)
from .response import (
    AntennaPattern,
    BeamResponse,
    beam_pattern_sweep,
    dirichlet_kernel,
    element_gain,
    hbf_output,
    raa_output,
    ray_reference_gain,
    sula_response,
)
from .channel import (
    MultipathChannel,
    ScenarioConfig,
    effective_channel_hbf,
    effective_channel_raa,
    generate_multi_user,
    generate_single_user,
)
from .selection import (
    LinkBudget,
    SelectionSet,
    exhaustive_selection,
    greedy_selection,
    mmse_beamformer,
    select_rays_single_user,
    sinr,
    snr_single_user,
    sum_rate,
)
from .cost import PriceList, cost_hbf, cost_raa

__version__ = "0.1.0"
