"""Principal-case verification of the edge-count bound mu(G) <= m t^{-r}.

For an r-graph with m edges, t >= r-1 is the unique real with C(t, r) = m;
the bound m t^{-r} is proved for r <= 5 and for t >= 4(r-1)(r-2), with
equality exactly at complete r-graphs (integer t).  A verdict records which
proof hypothesis covers the instance; outside both, results are evidence
only.  Any optimizer value exceeding the bound beyond tolerance on a covered
instance is a falsification alarm, i.e. an implementation-bug tripwire.
"""

import itertools
import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace

import numpy as np

from .bounds import BoundReport
from .hypergraph import Hypergraph, colex_rank, colex_segment, colex_unrank
from .optimize import (
    OptimizationResult,
    OptimizerOptions,
    evaluate_form,
    kkt_residual,
    ms_index,
)
from .sampling import stream
from .symfun import SimplexVector, generalized_binomial, invert_binomial, power_sums, sigma

__all__ = [
    "ConjectureVerdict",
    "SearchLimits",
    "SearchBudgetError",
    "conjecture_bound",
    "classify_branch",
    "check_tsin",
    "check_conjecture",
    "search",
]

log = logging.getLogger(__name__)

SLACK_ALARM = -1e-9
TIGHT_TOL = 1e-9
KKT_PRECONDITION = 1e-6


@dataclass(frozen=True)
class ConjectureVerdict:
    r: int
    m: int
    t: float
    bound: float
    mu_estimate: float
    slack: float
    tight: bool
    theorem_branch: str  # r_le_5 | t_large | outside
    alarm: bool
    graph: Hypergraph | None = None


@dataclass(frozen=True)
class SearchLimits:
    n_max: int
    count: int = 100
    budget: int = 1_000_000


class SearchBudgetError(ValueError):
    """Exhaustive enumeration would exceed the configured budget."""

    def __init__(self, total, budget):
        super().__init__(
            f"exhaustive search over {total} graphs exceeds budget {budget}"
        )
        self.total = total
        self.budget = budget


def conjecture_bound(m: int, r: int):
    """(t, m t^{-r}) for an r-graph with m edges.

    The bound is computed both as m t^{-r} and as the expanded product
    (1/r!)(1 - 1/t)...(1 - (r-1)/t); the two must agree to 1e-12 relative,
    which checks the binomial inversion.
    """
    if r < 3:
        raise ValueError("the edge-count bound is stated for r >= 3")
    if m < 0:
        raise ValueError("m must be >= 0")
    if m == 0:
        return float(r - 1), 0.0
    t = invert_binomial(m, r)
    bound = m * t**-r
    product = math.prod(1.0 - j / t for j in range(1, r)) / math.factorial(r)
    if abs(bound - product) > 1e-12 * max(bound, product):
        raise ArithmeticError(
            f"bound forms disagree: {bound} vs {product} (t={t}, m={m}, r={r})"
        )
    return t, float(bound)


def classify_branch(r: int, t: float) -> str:
    """Which proof hypothesis covers (r, t)."""
    if r <= 5:
        return "r_le_5"
    if t >= 4 * (r - 1) * (r - 2):
        return "t_large"
    return "outside"


def check_tsin(g: Hypergraph, x) -> list:
    """Stationary-point bounds P_G(x) <= m sigma(x)^r and <= m q(x)^r.

    Valid at (approximate) maximizers; the reports are flagged inapplicable
    unless kkt_residual(g, x) <= 1e-6.
    """
    res = kkt_residual(g, x)
    ok = res <= KKT_PRECONDITION
    val = evaluate_form(g, x)
    s = sigma(x)
    q, _, _ = power_sums(x)
    m = g.m
    reports = []
    for bound_id, base in (("tsin_sigma", s), ("tsin_q", q)):
        rhs = m * base**g.r
        reports.append(
            BoundReport(
                bound_id=bound_id,
                applicable=ok,
                lhs=val,
                rhs=float(rhs),
                margin=float(rhs - val),
                equality_case=abs(rhs - val) <= 1e-10,
                constraint_slack=KKT_PRECONDITION - res,
            )
        )
    return reports


def _reduce_to_support(g: Hypergraph, result: OptimizationResult, opts):
    """Drop zero-weight vertices at the optimum and re-optimize the induced
    subgraph; its maximum equals mu(G), so keep whichever estimate is larger.
    """
    x = result.best_x
    if x is None:
        return result
    support = np.flatnonzero(x.entries > 0.0)
    if support.size == 0 or support.size == g.n:
        return result
    sub = g.subgraph(support)
    if sub.m == 0:
        return result
    sub_opts = replace(opts, seed=opts.seed + 1)
    sub_result = ms_index(sub, sub_opts)
    if sub_result.mu > result.mu:
        # report the subgraph optimum lifted back to the full vertex set
        lifted = np.zeros(g.n)
        lifted[support] = sub_result.best_x.entries
        best = SimplexVector(lifted, sort=False)
        return OptimizationResult(
            best_x=best,
            mu=evaluate_form(g, best),
            kkt_residual=kkt_residual(g, best),
            support_size=best.support_size,
            restarts_used=result.restarts_used + sub_result.restarts_used,
            iterations_total=result.iterations_total + sub_result.iterations_total,
            converged=sub_result.converged,
        )
    return result


def check_conjecture(g: Hypergraph, opts: OptimizerOptions | None = None) -> ConjectureVerdict:
    """Optimize mu(G), compare with the edge-count bound, classify."""
    if g.r < 3:
        raise ValueError("the edge-count bound is stated for r >= 3")
    opts = opts or OptimizerOptions()
    result = ms_index(g, opts)
    result = _reduce_to_support(g, result, opts)
    t, bound = conjecture_bound(g.m, g.r)
    slack = bound - result.mu
    alarm = slack < SLACK_ALARM
    if alarm:
        log.warning(
            "bound violated: r=%d m=%d mu=%.17g bound=%.17g slack=%.3g seed=%d",
            g.r, g.m, result.mu, bound, slack, opts.seed,
        )
    return ConjectureVerdict(
        r=g.r,
        m=g.m,
        t=t,
        bound=bound,
        mu_estimate=result.mu,
        slack=float(slack),
        tight=abs(slack) <= TIGHT_TOL,
        theorem_branch=classify_branch(g.r, t),
        alarm=alarm,
        graph=g,
    )


def _graph_from_ranks(r: int, ranks) -> Hypergraph:
    edges = [colex_unrank(int(rk), r) for rk in ranks]
    n = max(v for e in edges for v in e) + 1 if edges else 0
    return Hypergraph(r, n, edges)


def _verdict_sort_key(v: ConjectureVerdict):
    ranks = tuple(colex_rank(e) for e in v.graph.edges) if v.graph else ()
    return (-v.mu_estimate, ranks)


def search(
    r: int,
    m: int,
    mode: str,
    limits: SearchLimits,
    opts: OptimizerOptions | None = None,
    threads: int = 1,
) -> list:
    """Verdicts over a family of r-graphs with m edges.

    mode "colex": the single colex-initial-segment graph (the conjectured
    extremal family).  mode "random": `count` graphs drawn as uniform
    m-subsets of the r-sets on n_max vertices.  mode "exhaustive": every
    such m-subset, refused outright if there are more than `budget`.
    Verdicts are sorted by descending mu, then colex rank, so the result is
    deterministic regardless of thread scheduling.
    """
    if r < 3:
        raise ValueError("the edge-count bound is stated for r >= 3")
    if m < 0:
        raise ValueError("m must be >= 0")
    opts = opts or OptimizerOptions()

    if mode == "colex":
        return [check_conjecture(colex_segment(r, m), opts)]

    total = math.comb(limits.n_max, r)
    if m > total:
        raise ValueError(f"m={m} exceeds the {total} r-sets on {limits.n_max} vertices")

    if mode == "random":
        graphs = []
        for i in range(limits.count):
            rng = stream(opts.seed, 2, i)
            ranks = np.sort(rng.choice(total, size=m, replace=False))
            graphs.append(_graph_from_ranks(r, ranks))
    elif mode == "exhaustive":
        n_graphs = math.comb(total, m)
        if n_graphs > limits.budget:
            raise SearchBudgetError(n_graphs, limits.budget)
        graphs = [
            _graph_from_ranks(r, ranks)
            for ranks in itertools.combinations(range(total), m)
        ]
    else:
        raise ValueError(f"unknown search mode {mode!r}")

    def one(item):
        i, g = item
        return check_conjecture(g, replace(opts, seed=opts.seed + 1000003 * (i + 1)))

    items = list(enumerate(graphs))
    if threads > 1 and len(items) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            verdicts = list(pool.map(one, items))
    else:
        verdicts = [one(it) for it in items]
    verdicts.sort(key=_verdict_sort_key)
    return verdicts
