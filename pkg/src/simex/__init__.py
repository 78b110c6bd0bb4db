"""simex: exact channel-simulation distortions and their exponents.

Library layout:
  core       pmfs, channels, protocol evaluators, non-signaling checks
  renyi      Renyi divergences, Sibson inner infimum, channel capacity solver
  types      method-of-types combinatorics and continuity-bound validators
  nsdist     exact simulation distortion (one-shot LP, brute-force oracle,
             symmetry-reduced n-fold solver)
  exponents  error / strong-converse exponents and finite-n bound curves
  srbounds   shared-randomness sandwich bounds
  lp         in-repo dense simplex (compiled kernel + numpy fallback)
  cli        command-line front end (`simex ...`)
"""

from .core import (
    AlphabetMismatchError,
    Channel,
    InfeasibleError,
    InvalidDistributionError,
    NSMap,
    Pmf,
    SizeCapError,
    SRProtocol,
    channel_tvd,
    check_non_signaling,
    induced_channel_ns,
    induced_channel_sr,
    load_channel,
    positive_part_gap,
    save_channel,
    sr_as_nsmap,
    tensor_power,
    tvd,
)
from .exponents import (
    CorrectionSequences,
    ExponentResult,
    ValidityError,
    correction_sequences,
    ee_ach_bound,
    ee_conv_bound,
    error_exponent,
    sc_exponent,
    sce_ach_bound,
    sce_conv_bound,
)
from .nsdist import (
    ReducedInstance,
    SolveReport,
    eps_ns_iid,
    eps_ns_iid_bruteforce,
    eps_ns_oneshot,
    message_size_for_rate,
)
from .renyi import (
    CapacityResult,
    RenyiOrder,
    kl_divergence,
    max_information,
    mutual_information,
    renyi_capacity,
    renyi_divergence,
    sibson_inner_inf,
    sibson_reference,
)
from .srbounds import SrSandwich, sr_exponents, sr_sandwich, sr_success_sandwich

__version__ = "0.1.0"
