"""Secret key agreement toolkit for tree sources with a linear eavesdropper.

Computes wiretap secret key capacity and minimum omniscience leakage,
synthesises optimal linear non-interactive communication schemes, verifies
them by exact rank accounting, simulates the protocols, and cross-checks
everything against brute-force information-theoretic oracles.
"""

from .gfield import ExtFieldCtx, FieldElem, embed_base, make_ext_field
from .falinalg import FMatrix
from .model import (
    EdgeSpec,
    InstanceError,
    NodeView,
    TreePinSource,
    Wiretapper,
    load_instance,
    random_instance,
    save_instance,
)
from .mcf import LinearMcf, mcf_edge_wiretap, mcf_linear
from .capacity import CapacityReport, capacity_report, cs, cw, rco, rl
from .reduce import (
    ReductionError,
    ReductionStep,
    ReductionTrace,
    is_irreducible,
    reduce_full,
    reduce_once,
)
from .scheme import (
    CommScheme,
    KeyExtractor,
    SchemeError,
    choose_extension_degree,
    extract_key,
    load_scheme,
    sample_alignment_certificate,
    save_scheme,
    synth_explicit_unit,
    synth_random,
)
from .verify import (
    VerifyReport,
    check_key_secrecy,
    check_perfect_alignment,
    check_perfect_omniscience,
    leakage_bits_per_realization,
    leakage_symbol_dims,
    verify_scheme,
)
from .simulate import SimReport, SimulationError, run_protocol, sample_block
from .oracle import (
    BudgetError,
    McfExhaustive,
    cond_mutual_info_exhaustive,
    detform_property_check,
    entropy_exhaustive,
    split_source_property_check,
    mcf_exhaustive,
)

__version__ = "0.1.0"

__all__ = [
    "ExtFieldCtx",
    "FieldElem",
    "embed_base",
    "make_ext_field",
    "FMatrix",
    "EdgeSpec",
    "InstanceError",
    "NodeView",
    "TreePinSource",
    "Wiretapper",
    "load_instance",
    "random_instance",
    "save_instance",
    "LinearMcf",
    "mcf_edge_wiretap",
    "mcf_linear",
    "CapacityReport",
    "capacity_report",
    "cs",
    "cw",
    "rco",
    "rl",
    "ReductionError",
    "ReductionStep",
    "ReductionTrace",
    "is_irreducible",
    "reduce_full",
    "reduce_once",
    "CommScheme",
    "KeyExtractor",
    "SchemeError",
    "choose_extension_degree",
    "extract_key",
    "load_scheme",
    "sample_alignment_certificate",
    "save_scheme",
    "synth_explicit_unit",
    "synth_random",
    "VerifyReport",
    "check_key_secrecy",
    "check_perfect_alignment",
    "check_perfect_omniscience",
    "leakage_bits_per_realization",
    "leakage_symbol_dims",
    "verify_scheme",
    "SimReport",
    "SimulationError",
    "run_protocol",
    "sample_block",
    "BudgetError",
    "McfExhaustive",
    "cond_mutual_info_exhaustive",
    "detform_property_check",
    "entropy_exhaustive",
    "split_source_property_check",
    "mcf_exhaustive",
    "__version__",
]
