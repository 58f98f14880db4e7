"""Entanglement distribution, capacity and topology analysis for quantum
networks built from EPR, GHZ, W and Schmidt-decomposed links."""

from .classify import (
    LuDecision,
    OutcomeDistribution,
    characteristic_vector,
    doubled_entropy,
    dual_total_correlation,
    lu_equivalent,
    mutual_information_literal,
    outcome_distribution,
)
from .entropy import (
    EntropyFunctional,
    VON_NEUMANN,
    binary_entropy,
    entropy,
    link_marginal_spectrum,
    product_spectrum,
)
from .flow import (
    CutResult,
    FlowResult,
    VerifyResult,
    capacity,
    flow_constraint_violations,
    max_flow,
    min_cut_enumerate,
    replay_augmenting_paths,
    verify_maxflow_mincut,
)
from .measures import (
    CutValue,
    W_PAIR_EOF,
    marginal_entanglement,
    pairwise_entanglement,
    w_pair_density,
    wootters_eof,
)
from .monogamy import (
    MonogamyReport,
    exact_slack,
    monogamy_report,
    monogamy_sweep,
    qkd_leakage_bound,
)
from .netmodel import (
    Hypergraph,
    Link,
    NetworkFormatError,
    NetworkSpec,
    associated_hypergraph,
    load_network,
    parse_network,
    serialize_network,
    validate,
)
from .oracle import (
    DenseState,
    apply_local_unitaries,
    build_global_state,
    dense_marginal_spectrum,
    dense_outcome_probs,
    double_and_trace,
    reduced_density,
    spectrum_of,
)

__version__ = "0.1.0"
