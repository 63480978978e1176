"""Compound-rate bounds for polar codes under successive-cancellation decoding."""

from .bms import (
    ChannelSpec,
    DDensity,
    Functionals,
    bhattacharyya,
    binary_entropy,
    bsc_with_capacity,
    capacity,
    entropy,
    functionals,
    is_degraded_bsc_wrt_bec,
    make_bec,
    make_bsc,
    parse_channel_spec,
)
from .bounds import (
    BoundRow,
    bound_table,
    degradation_shortcut,
    pairwise_bounds,
    select_compound_good_indices,
    set_bounds,
    trivial_bounds,
)
from .codec import PolarCode, build_compound_code, encode, sc_decode, simulate
from .density import (
    EXACT,
    QuantizerMode,
    chk_conv,
    degrade,
    entropy_matching_mix,
    min_grid_size,
    quantization_delta,
    quantize_down,
    quantize_up,
    upgrade,
    var_conv,
)
from .trees import (
    TreeProfile,
    bec_tree_profile,
    evaluate_all,
    evaluate_tree_channel,
    polarization_fraction,
)
from .universal import (
    build_polytope,
    improved_lower_bound,
    solve_kkt,
    var_conv_max,
)

__version__ = "0.1.0"

__all__ = [
    "PolarCode",
    "build_compound_code",
    "encode",
    "sc_decode",
    "simulate",
    "ChannelSpec",
    "DDensity",
    "Functionals",
    "bhattacharyya",
    "binary_entropy",
    "bsc_with_capacity",
    "capacity",
    "entropy",
    "functionals",
    "is_degraded_bsc_wrt_bec",
    "make_bec",
    "make_bsc",
    "parse_channel_spec",
    "BoundRow",
    "bound_table",
    "degradation_shortcut",
    "pairwise_bounds",
    "select_compound_good_indices",
    "set_bounds",
    "trivial_bounds",
    "EXACT",
    "QuantizerMode",
    "chk_conv",
    "degrade",
    "entropy_matching_mix",
    "min_grid_size",
    "quantization_delta",
    "quantize_down",
    "quantize_up",
    "upgrade",
    "var_conv",
    "TreeProfile",
    "bec_tree_profile",
    "evaluate_all",
    "evaluate_tree_channel",
    "polarization_fraction",
    "build_polytope",
    "improved_lower_bound",
    "solve_kkt",
    "var_conv_max",
]
