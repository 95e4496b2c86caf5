"""Inequality checkers for symmetric functions on the simplex.

Each checker reports both sides, an applicability verdict, and a signed
margin.  The margin is always "the amount by which the inequality holds"
(rhs - lhs for upper bounds, lhs - rhs for lower bounds), so a violation is
uniformly margin < 0 regardless of direction.  Strict inequalities cannot be
certified in floating point; instead the equality flag carries each bound's
exact equality condition (all nonzero entries equal, except for the
n-dependent Maclaurin bound, whose equality needs all entries equal).

The bound identifiers double as the CLI vocabulary:

    maclaurin       S_k <= C(n,k)/n^k
    thm1_upper      S_k <= sigma^k C(1/sigma, k)       [x_max <= 1/(4(k-2))]
    thm1_remark     S_k <= (1-q)(1-2s)...(1-(k-1)s)/k! [same restriction]
    thm2_lower      S_k >= q^k C(1/q, k)               [x_max <  1/(k-1)]
    thm3_partial    dS_k/dx_max <= k sigma^k C(1/sigma, k)  [x_max <= 1/k]
    prop2_rec       k S_k >= (1-(k-1)q) S_{k-1}
    prop3_rec       k S_k <= S_{k-1} - (q-(k-2)p) S_{k-2}
    prop1_chain     1/n' <= sigma <= q <= p^(1/2) <= t4^(1/3) <= x_max
    claim_moment    q - (i-2)p >= sigma - (i-2)sigma^2, i = 3..k
    claim_sigma_rec i S_i <= (1-(i-1)sigma) S_{i-1},     i = 3..k
    claim_insig     degree-5 moment comparison in (q, p, t4) vs sigma
"""

import math
from dataclasses import dataclass

import numpy as np

from .symfun import (
    as_weights,
    elementary_symmetric_all,
    esp_gradient,
    power_sums,
    sigma,
)

__all__ = [
    "BoundReport",
    "BOUND_IDS",
    "bound_threshold",
    "check_maclaurin",
    "check_thm1_upper",
    "check_thm2_lower",
    "check_thm3_partial",
    "check_recurrences",
    "check_prop1_chain",
    "check_proof_claims",
    "sweep_margins",
]

VIOLATION_TOL = 1e-12
EQUALITY_ENTRY_TOL = 1e-12

BOUND_IDS = (
    "maclaurin",
    "thm1_upper",
    "thm1_remark",
    "thm2_lower",
    "thm3_partial",
    "prop2_rec",
    "prop3_rec",
    "prop1_chain",
    "claim_moment",
    "claim_sigma_rec",
    "claim_insig",
)


@dataclass(frozen=True)
class BoundReport:
    """Outcome of one inequality check.

    margin is meaningful only when applicable; constraint_slack is the
    distance of x_max below the bound's precondition threshold (+inf for
    unconditional bounds) and is reported even when inapplicable so sweeps
    can sample near thresholds.
    """

    bound_id: str
    applicable: bool
    lhs: float
    rhs: float
    margin: float
    equality_case: bool
    constraint_slack: float
    detail: str = ""

    @property
    def violated(self) -> bool:
        return self.applicable and self.margin < -VIOLATION_TOL


def _nonzero_equal(arr) -> bool:
    nz = arr[arr > 0.0]
    return nz.size > 0 and float(nz.max() - nz.min()) <= EQUALITY_ENTRY_TOL


def _all_equal(arr) -> bool:
    return float(arr.max() - arr.min()) <= EQUALITY_ENTRY_TOL


def _binomial_product(s, k: int, first_factor=None):
    """(1 - s)(1 - 2s)...(1 - (k-1)s) / k!, i.e. s^k C(1/s, k).

    Optionally replaces the leading (1 - s) factor (the remark variant swaps
    in 1 - q).  Works elementwise on arrays.
    """
    out = first_factor if first_factor is not None else 1.0 - s
    for j in range(2, k):
        out = out * (1.0 - j * s)
    return out / math.factorial(k)


def bound_threshold(bound_id: str, k: int):
    """Precondition threshold on x_max, or None for unconditional bounds."""
    if bound_id in ("thm1_upper", "thm1_remark", "claim_moment", "claim_sigma_rec"):
        return 1.0 / (4 * (k - 2))
    if bound_id == "thm2_lower":
        return (1.0 - 1e-6) / (k - 1)
    if bound_id == "thm3_partial":
        return 1.0 / k
    if bound_id == "claim_insig":
        return 0.2
    return None


def check_maclaurin(x, k: int) -> BoundReport:
    """S_k <= C(n,k)/n^k on the simplex, equality iff all entries equal."""
    if k < 2:
        raise ValueError("maclaurin requires k >= 2")
    arr = as_weights(x)
    n = arr.size
    lhs = float(elementary_symmetric_all(arr, k)[k])
    rhs = math.comb(n, k) / n**k
    return BoundReport(
        bound_id="maclaurin",
        applicable=n >= k,
        lhs=lhs,
        rhs=rhs,
        margin=rhs - lhs,
        equality_case=_all_equal(arr),
        constraint_slack=math.inf,
    )


def check_thm1_upper(x, k: int, variant: str = "standard") -> BoundReport:
    """Upper bound S_k <= sigma^k C(1/sigma, k) under a max-entry restriction.

    variant "remark" strengthens the leading factor to (1 - q); variant
    "relaxed" keeps the standard bound but widens the restriction to the
    experimentally asserted thresholds 3/8 (k=3) and 11/48 (k=4).
    """
    if k < 3:
        raise ValueError("this bound requires k >= 3")
    if variant not in ("standard", "remark", "relaxed"):
        raise ValueError(f"unknown variant {variant!r}")
    if variant == "relaxed" and k not in (3, 4):
        raise ValueError("relaxed thresholds are known only for k in {3, 4}")
    arr = as_weights(x)
    s = sigma(arr)
    lhs = float(elementary_symmetric_all(arr, k)[k])
    if variant == "remark":
        q, _, _ = power_sums(arr)
        rhs = float(_binomial_product(s, k, first_factor=1.0 - q))
        bound_id = "thm1_remark"
        threshold = bound_threshold("thm1_remark", k)
    else:
        rhs = float(_binomial_product(s, k))
        bound_id = "thm1_upper"
        threshold = 0.375 if (variant == "relaxed" and k == 3) else (
            11.0 / 48.0 if variant == "relaxed" else bound_threshold("thm1_upper", k)
        )
    x_max = float(arr.max())
    return BoundReport(
        bound_id=bound_id,
        applicable=x_max <= threshold,
        lhs=lhs,
        rhs=rhs,
        margin=rhs - lhs,
        equality_case=_nonzero_equal(arr),
        constraint_slack=threshold - x_max,
    )


def check_thm2_lower(x, k: int) -> BoundReport:
    """Lower bound S_k >= q^k C(1/q, k) when x_max < 1/(k-1)."""
    if k < 3:
        raise ValueError("this bound requires k >= 3")
    arr = as_weights(x)
    q, _, _ = power_sums(arr)
    lhs = float(elementary_symmetric_all(arr, k)[k])
    rhs = float(_binomial_product(q, k))
    threshold = 1.0 / (k - 1)
    x_max = float(arr.max())
    return BoundReport(
        bound_id="thm2_lower",
        applicable=x_max < threshold,
        lhs=lhs,
        rhs=rhs,
        margin=lhs - rhs,
        equality_case=_nonzero_equal(arr),
        constraint_slack=threshold - x_max,
    )


def check_thm3_partial(x, k: int, experimental: bool = False) -> BoundReport:
    """Partial-derivative bound dS_k/dx_1 <= k sigma^k C(1/sigma, k), where
    x_1 is the largest entry, valid for k in {3,4,5} when x_max <= 1/k.

    k = 6 is speculative and only allowed with experimental=True; treat any
    violation there as evidence, not as an implementation failure.
    """
    if k not in (3, 4, 5) and not (experimental and k == 6):
        raise ValueError("supported k are 3, 4, 5 (6 only with experimental=True)")
    arr = as_weights(x)
    i_max = int(np.argmax(arr))
    lhs = float(esp_gradient(arr, k)[i_max])
    s = sigma(arr)
    rhs = float(k * _binomial_product(s, k))
    threshold = 1.0 / k
    x_max = float(arr.max())
    return BoundReport(
        bound_id="thm3_partial",
        applicable=x_max <= threshold,
        lhs=lhs,
        rhs=rhs,
        margin=rhs - lhs,
        equality_case=_nonzero_equal(arr),
        constraint_slack=threshold - x_max,
    )


def check_recurrences(x, k: int):
    """The two unconditional recurrences tying S_k to S_{k-1}, S_{k-2}:

        k S_k >= (1 - (k-1) q) S_{k-1}            (k >= 2, lower)
        k S_k <= S_{k-1} - (q - (k-2) p) S_{k-2}  (k >= 3, upper)

    Returns (lower_report, upper_report); the upper one is flagged
    inapplicable at k = 2.
    """
    if k < 2:
        raise ValueError("recurrences require k >= 2")
    arr = as_weights(x)
    q, p, _ = power_sums(arr)
    S = elementary_symmetric_all(arr, k)
    eq = _nonzero_equal(arr)

    lhs2 = float(k * S[k])
    rhs2 = float((1.0 - (k - 1) * q) * S[k - 1])
    prop2 = BoundReport(
        bound_id="prop2_rec",
        applicable=True,
        lhs=lhs2,
        rhs=rhs2,
        margin=lhs2 - rhs2,
        equality_case=eq,
        constraint_slack=math.inf,
    )

    if k >= 3:
        lhs3 = float(k * S[k])
        rhs3 = float(S[k - 1] - (q - (k - 2) * p) * S[k - 2])
        prop3 = BoundReport(
            bound_id="prop3_rec",
            applicable=True,
            lhs=lhs3,
            rhs=rhs3,
            margin=rhs3 - lhs3,
            equality_case=eq,
            constraint_slack=math.inf,
        )
    else:
        prop3 = BoundReport(
            bound_id="prop3_rec",
            applicable=False,
            lhs=math.nan,
            rhs=math.nan,
            margin=math.nan,
            equality_case=eq,
            constraint_slack=math.inf,
        )
    return prop2, prop3


def check_prop1_chain(x) -> BoundReport:
    """The moment chain 1/n' <= sigma <= q <= p^(1/2) <= t4^(1/3) <= x_max.

    The margin is the smallest of the five consecutive gaps; it is 0 exactly
    when the nonzero entries are equal (then the chain is all equalities).
    """
    arr = as_weights(x)
    q, p, t4 = power_sums(arr)
    n_prime = int(np.count_nonzero(arr))
    vals = [1.0 / n_prime, sigma(arr), q, math.sqrt(p), t4 ** (1.0 / 3.0), float(arr.max())]
    margin = min(b - a for a, b in zip(vals, vals[1:]))
    return BoundReport(
        bound_id="prop1_chain",
        applicable=True,
        lhs=vals[0],
        rhs=vals[-1],
        margin=float(margin),
        equality_case=_nonzero_equal(arr),
        constraint_slack=math.inf,
    )


def check_proof_claims(x, k: int) -> list:
    """Per-degree claims used to chain the recurrences into closed bounds.

    For i = 3..k, under x_max <= 1/(4(k-2)):

        claim_moment:    q - (i-2) p >= sigma - (i-2) sigma^2
        claim_sigma_rec: i S_i <= (1 - (i-1) sigma) S_{i-1}

    and for k = 5 the degree-5 moment comparison (claim_insig, under
    x_max <= 1/5), with x short for x_max:

        -(106-160x)/25 q + 8(1-x) p - 6 t4
            <= -(106-160x)/25 s + 8(1-x) s^2 - 6 s^3
    """
    if k < 3:
        raise ValueError("proof claims require k >= 3")
    arr = as_weights(x)
    s = sigma(arr)
    q, p, t4 = power_sums(arr)
    S = elementary_symmetric_all(arr, k)
    x_max = float(arr.max())
    eq = _nonzero_equal(arr)
    chain_thr = bound_threshold("claim_moment", k)
    chain_ok = x_max <= chain_thr

    reports = []
    for i in range(3, k + 1):
        lhs = q - (i - 2) * p
        rhs = s - (i - 2) * s * s
        reports.append(
            BoundReport(
                bound_id="claim_moment",
                applicable=chain_ok,
                lhs=float(lhs),
                rhs=float(rhs),
                margin=float(lhs - rhs),
                equality_case=eq,
                constraint_slack=chain_thr - x_max,
                detail=f"i={i}",
            )
        )
    for i in range(3, k + 1):
        lhs = i * S[i]
        rhs = (1.0 - (i - 1) * s) * S[i - 1]
        reports.append(
            BoundReport(
                bound_id="claim_sigma_rec",
                applicable=chain_ok,
                lhs=float(lhs),
                rhs=float(rhs),
                margin=float(rhs - lhs),
                equality_case=eq,
                constraint_slack=chain_thr - x_max,
                detail=f"i={i}",
            )
        )
    if k == 5:
        c = (106.0 - 160.0 * x_max) / 25.0
        lhs = -c * q + 8.0 * (1.0 - x_max) * p - 6.0 * t4
        rhs = -c * s + 8.0 * (1.0 - x_max) * s * s - 6.0 * s**3
        thr = bound_threshold("claim_insig", k)
        reports.append(
            BoundReport(
                bound_id="claim_insig",
                applicable=x_max <= thr,
                lhs=float(lhs),
                rhs=float(rhs),
                margin=float(rhs - lhs),
                equality_case=eq,
                constraint_slack=thr - x_max,
            )
        )
    return reports


# ---------------------------------------------------------------------------
# Batched margin evaluation for sweeps.  Rows of X are simplex vectors; the
# arithmetic per row matches the scalar checkers above so that re-checking a
# sweep's argmin with the scalar API reproduces the same values.
# ---------------------------------------------------------------------------


def _batch_esp(X: np.ndarray, K: int) -> np.ndarray:
    B, n = X.shape
    S = np.zeros((B, K + 1))
    S[:, 0] = 1.0
    for i in range(n):
        S[:, 1:] += X[:, i : i + 1] * S[:, :-1]
    return S


def _batch_sigma(X: np.ndarray) -> np.ndarray:
    safe = np.where(X > 0.0, X, 1.0)
    return np.exp((X * np.log(safe)).sum(axis=1))


def sweep_margins(bound_id: str, k: int, X: np.ndarray, experimental: bool = False):
    """Margins and applicability for every row of X under one bound.

    For the claim families the margin is the per-row minimum over the
    sub-claims.  Raises for invalid (bound_id, k) combinations.
    """
    B, n = X.shape
    x_max = X.max(axis=1)

    if bound_id == "maclaurin":
        if k < 2:
            raise ValueError("maclaurin requires k >= 2")
        if n < k:
            raise ValueError("maclaurin sweep needs n >= k")
        S = _batch_esp(X, k)
        margins = math.comb(n, k) / n**k - S[:, k]
        return margins, np.ones(B, dtype=bool)

    if bound_id in ("thm1_upper", "thm1_remark"):
        if k < 3:
            raise ValueError("this bound requires k >= 3")
        s = _batch_sigma(X)
        S = _batch_esp(X, k)
        if bound_id == "thm1_remark":
            q = (X * X).sum(axis=1)
            rhs = _binomial_product(s, k, first_factor=1.0 - q)
        else:
            rhs = _binomial_product(s, k)
        app = x_max <= bound_threshold(bound_id, k)
        return rhs - S[:, k], app

    if bound_id == "thm2_lower":
        if k < 3:
            raise ValueError("this bound requires k >= 3")
        q = (X * X).sum(axis=1)
        S = _batch_esp(X, k)
        rhs = _binomial_product(q, k)
        app = x_max < 1.0 / (k - 1)
        return S[:, k] - rhs, app

    if bound_id == "thm3_partial":
        if k not in (3, 4, 5) and not (experimental and k == 6):
            raise ValueError("supported k are 3, 4, 5 (6 only with experimental=True)")
        # leave-one-out of the max entry: sort rows descending, drop column 0
        Xs = np.sort(X, axis=1)[:, ::-1]
        grad_max = _batch_esp(Xs[:, 1:], k - 1)[:, k - 1]
        s = _batch_sigma(X)
        rhs = k * _binomial_product(s, k)
        app = x_max <= 1.0 / k
        return rhs - grad_max, app

    if bound_id == "prop2_rec":
        if k < 2:
            raise ValueError("prop2_rec requires k >= 2")
        q = (X * X).sum(axis=1)
        S = _batch_esp(X, k)
        margins = k * S[:, k] - (1.0 - (k - 1) * q) * S[:, k - 1]
        return margins, np.ones(B, dtype=bool)

    if bound_id == "prop3_rec":
        if k < 3:
            raise ValueError("prop3_rec requires k >= 3")
        q = (X * X).sum(axis=1)
        p = (X * X * X).sum(axis=1)
        S = _batch_esp(X, k)
        margins = S[:, k - 1] - (q - (k - 2) * p) * S[:, k - 2] - k * S[:, k]
        return margins, np.ones(B, dtype=bool)

    if bound_id == "prop1_chain":
        sq = X * X
        q = sq.sum(axis=1)
        p = (sq * X).sum(axis=1)
        t4 = (sq * sq).sum(axis=1)
        n_prime = (X > 0.0).sum(axis=1)
        s = _batch_sigma(X)
        levels = np.stack(
            [1.0 / n_prime, s, q, np.sqrt(p), np.cbrt(t4), x_max], axis=1
        )
        margins = np.diff(levels, axis=1).min(axis=1)
        return margins, np.ones(B, dtype=bool)

    if bound_id in ("claim_moment", "claim_sigma_rec"):
        if k < 3:
            raise ValueError("proof claims require k >= 3")
        s = _batch_sigma(X)
        app = x_max <= bound_threshold(bound_id, k)
        if bound_id == "claim_moment":
            q = (X * X).sum(axis=1)
            p = (X * X * X).sum(axis=1)
            margins = np.full(B, np.inf)
            for i in range(3, k + 1):
                margins = np.minimum(margins, q - (i - 2) * p - (s - (i - 2) * s * s))
        else:
            S = _batch_esp(X, k)
            margins = np.full(B, np.inf)
            for i in range(3, k + 1):
                margins = np.minimum(
                    margins, (1.0 - (i - 1) * s) * S[:, i - 1] - i * S[:, i]
                )
        return margins, app

    if bound_id == "claim_insig":
        if k != 5:
            raise ValueError("claim_insig is the k = 5 moment claim")
        sq = X * X
        q = sq.sum(axis=1)
        p = (sq * X).sum(axis=1)
        t4 = (sq * sq).sum(axis=1)
        s = _batch_sigma(X)
        c = (106.0 - 160.0 * x_max) / 25.0
        lhs = -c * q + 8.0 * (1.0 - x_max) * p - 6.0 * t4
        rhs = -c * s + 8.0 * (1.0 - x_max) * s * s - 6.0 * s**3
        app = x_max <= 0.2
        return rhs - lhs, app

    raise ValueError(f"unknown bound id {bound_id!r}")
