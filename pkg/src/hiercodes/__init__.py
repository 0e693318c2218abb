"""Regenerating codes for clustered storage.

Exact constructions (product-matrix repair code, zero-bandwidth layered
code), exact-rational analysis engines (storage/bandwidth tradeoff,
opportunistic repair, mean time to data loss), and a bandwidth-aware
repair simulator, each paired with an independent oracle in the test
suite.
"""

__version__ = "0.1.0"

from .field import (
    DuplicatePoints,
    FieldMatrix,
    InverseOfZero,
    PrimeField,
    ShapeMismatch,
    Singular,
    vandermonde,
)
from .mds import MdsCode, decode_erasures, encode, make_systematic_mds
from .params import HierParams
from .pm import (
    ClusterState,
    ExplicitPsi,
    Exhaustive,
    PmCode,
    RandomPsi,
    RepairAccounting,
    Sampled,
    VandermondePsi,
    build_pm_code,
    encode_clusters,
    fail_disks,
    reconstruct,
    repair_cluster,
    validate_conditions,
)
from .mbr import MbrCode, make_mbr_code, mbr_encode, mbr_reconstruct, mbr_repair
from .tradeoff import (
    TradeoffPoint,
    alpha_star,
    alpha_star_oracle,
    ambr_point,
    chao_params,
    dimakis_beta_star,
    extremal_points,
    fgh,
    mincut,
)
from .opportunistic import (
    UNBOUNDED,
    OppSystem,
    alpha_o,
    beta_tilde,
    beta_tilde_oracle,
    feasible,
    flowgraph_mincut,
)
from .mttdl import (
    MarkovSpec,
    improvement_factor,
    mttdl_asymptotic,
    mttdl_chain_oracle,
    mttdl_closed_form,
    repair_rate,
    tridiag_det,
)
from .repair_sim import (
    DatacenterGrid,
    NetworkScenario,
    RandomGaussian,
    RepairDecision,
    choose_d,
    gaussian_bandwidth,
    multi_failure_profile,
    one_failure_ratio,
)
