"""Truthful prediction-augmented mechanisms for approximate maximin-share
allocation of indivisible goods: two-agent plant-and-steal instantiations,
an n-agent recursive mechanism, exact and heuristic maximin-share oracles,
prediction noise models, a verification harness, and the synthetic
experiment pipeline.
"""

from .core import (
    Allocation,
    Instance,
    as_fraction,
    bundle_value,
    favorite,
    induced_ordering,
    ordering_from_values,
    rank_of,
)
from .mms import (
    CapExceededError,
    MmsResult,
    approx_ratio,
    mms_exact,
    mms_for_agent,
    mms_heuristic,
)
from .predictions import (
    CbEncoding,
    DecodeError,
    EncodingError,
    NoiseSpec,
    OrderingPrediction,
    ValuesPrediction,
    WfEncoding,
    decode_cb,
    encode_cb,
    encode_wf,
    kendall_tau,
    kt_profile_distance,
    permute_values_to_distance,
    perturb_to_distance,
)
from .rng import SplitMix64
from .two_agent import (
    MECHANISM_NAMES,
    MechanismReport,
    PlantStealTrace,
    UnknownMechanismError,
    UnsupportedInstanceError,
    balanced_round_robin,
    cut_and_balance,
    cut_and_choose,
    one_two_round_robin,
    plant_and_steal,
    run_named_mechanism,
    water_filling,
)

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
