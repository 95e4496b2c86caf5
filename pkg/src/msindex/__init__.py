"""MS-index (hypergraph Lagrangian) optimization with certified first-order
stationarity, plus an empirical verification harness for elementary
symmetric function bounds on the simplex and the edge-count bound
mu(G) <= m t^{-r}."""

__version__ = "0.1.0"

from .bounds import (
    BOUND_IDS,
    BoundReport,
    check_maclaurin,
    check_proof_claims,
    check_prop1_chain,
    check_recurrences,
    check_thm1_upper,
    check_thm2_lower,
    check_thm3_partial,
)
from .conjecture import (
    ConjectureVerdict,
    SearchBudgetError,
    SearchLimits,
    check_conjecture,
    check_tsin,
    classify_branch,
    conjecture_bound,
    search,
)
from .hypergraph import (
    Hypergraph,
    HypergraphParseError,
    colex_segment,
    complete_graph,
    parse_hypergraph,
    serialize_hypergraph,
)
from .optimize import (
    DegeneratePointError,
    OptimizationResult,
    OptimizerOptions,
    baum_eagon_step,
    evaluate_form,
    form_gradient,
    kkt_residual,
    ms_index,
)
from .sampling import (
    InfeasibleCapError,
    SweepConfig,
    SweepReport,
    run_bound_sweep,
    sample_capped,
    sample_simplex,
    stream,
)
from .symfun import (
    SimplexVector,
    StatBundle,
    elementary_symmetric_all,
    esp_gradient,
    generalized_binomial,
    invert_binomial,
    phi,
    power_sums,
    sigma,
    stat_bundle,
)

__all__ = [
    "__version__",
    "BOUND_IDS",
    "BoundReport",
    "ConjectureVerdict",
    "DegeneratePointError",
    "Hypergraph",
    "HypergraphParseError",
    "InfeasibleCapError",
    "OptimizationResult",
    "OptimizerOptions",
    "SearchBudgetError",
    "SearchLimits",
    "SimplexVector",
    "StatBundle",
    "SweepConfig",
    "SweepReport",
    "baum_eagon_step",
    "check_conjecture",
    "check_maclaurin",
    "check_proof_claims",
    "check_prop1_chain",
    "check_recurrences",
    "check_thm1_upper",
    "check_thm2_lower",
    "check_thm3_partial",
    "check_tsin",
    "classify_branch",
    "colex_segment",
    "complete_graph",
    "conjecture_bound",
    "elementary_symmetric_all",
    "esp_gradient",
    "evaluate_form",
    "form_gradient",
    "generalized_binomial",
    "invert_binomial",
    "kkt_residual",
    "ms_index",
    "parse_hypergraph",
    "phi",
    "power_sums",
    "run_bound_sweep",
    "sample_capped",
    "sample_simplex",
    "search",
    "serialize_hypergraph",
    "sigma",
    "stat_bundle",
    "stream",
]
