import math

import numpy as np
import pytest

from msindex import (
    SimplexVector,
    check_maclaurin,
    check_proof_claims,
    check_prop1_chain,
    check_recurrences,
    check_thm1_upper,
    check_thm2_lower,
    check_thm3_partial,
    elementary_symmetric_all,
    sigma,
)
from msindex.bounds import sweep_margins

from oracles import esp_bruteforce


def uniform_support(s, n):
    """Uniform weight on the first s of n coordinates."""
    return SimplexVector([1.0 / s] * s + [0.0] * (n - s))


ALL_SCALAR_CHECKS = [
    ("maclaurin", lambda x, k: [check_maclaurin(x, k)], range(2, 7)),
    ("thm1_upper", lambda x, k: [check_thm1_upper(x, k)], range(3, 6)),
    ("thm1_remark", lambda x, k: [check_thm1_upper(x, k, "remark")], range(3, 6)),
    ("thm2_lower", lambda x, k: [check_thm2_lower(x, k)], range(3, 6)),
    ("thm3_partial", lambda x, k: [check_thm3_partial(x, k)], range(3, 6)),
    ("recurrences", lambda x, k: list(check_recurrences(x, k)), range(2, 7)),
    ("prop1_chain", lambda x, k: [check_prop1_chain(x)], [2]),
    ("claims", check_proof_claims, range(3, 6)),
]


# --- Maclaurin ---------------------------------------------------------------


def test_maclaurin_uniform_equality():
    r = check_maclaurin(SimplexVector([0.2] * 5), 3)
    assert r.applicable and r.equality_case
    assert abs(r.margin) <= 1e-10


def test_maclaurin_explicit_margin():
    r = check_maclaurin(SimplexVector([0.5, 0.3, 0.2]), 2)
    assert r.lhs == pytest.approx(0.31, abs=1e-15)
    assert r.rhs == pytest.approx(1 / 3, abs=1e-15)
    assert r.margin == pytest.approx(1 / 3 - 0.31, abs=1e-12)


def test_maclaurin_zero_padding_not_equality():
    # nonzero entries equal, but the n-dependent bound is strict here
    r = check_maclaurin(SimplexVector([0.5, 0.5, 0.0]), 2)
    assert r.lhs == pytest.approx(0.25, abs=1e-15)
    assert r.rhs == pytest.approx(1 / 3, abs=1e-15)
    assert r.margin > 0
    assert not r.equality_case


def test_maclaurin_requires_k_at_least_2():
    with pytest.raises(ValueError):
        check_maclaurin(SimplexVector([1.0]), 1)


# --- upper bound (sigma form) -------------------------------------------------


def test_thm1_uniform_equality():
    r = check_thm1_upper(SimplexVector([1 / 8] * 8), 3)
    assert r.applicable and r.equality_case
    assert abs(r.margin) <= 1e-10


def test_thm1_threshold_applicability():
    # k=5 threshold is 1/(4(k-2)) = 1/12; uniform on 10 has x_max = 0.1 > 1/12,
    # so the restriction fails there (the bound itself still holds with margin 0)
    r = check_thm1_upper(SimplexVector([0.1] * 10), 5)
    assert not r.applicable
    assert abs(r.margin) <= 1e-10
    r = check_thm1_upper(SimplexVector([1 / 12] * 12), 5)
    assert r.applicable and abs(r.margin) <= 1e-10


def test_thm1_perturbed_uniform_positive_margin():
    # 0.9*uniform(10) + 0.1*e1: max entry 0.19 is inside the k=3 threshold 1/4
    x = np.full(10, 0.9 * 0.1)
    x[0] += 0.1
    r = check_thm1_upper(SimplexVector(x), 3)
    assert r.applicable
    assert r.margin > 0
    assert not r.equality_case
    # ... but outside the k=4 threshold 1/8
    assert not check_thm1_upper(SimplexVector(x), 4).applicable


def test_thm1_remark_dominates_standard():
    # within the threshold all product factors are positive and 1-q <= 1-s,
    # so the strengthened rhs can only be smaller
    rng = np.random.default_rng(11)
    seen = 0
    for _ in range(500):
        n = int(rng.integers(8, 40))
        x = SimplexVector(rng.standard_exponential(n), normalize=True)
        for k in (3, 4, 5):
            std = check_thm1_upper(x, k)
            if not std.applicable:
                continue
            seen += 1
            rem = check_thm1_upper(x, k, "remark")
            assert rem.rhs <= std.rhs + 1e-15
            assert rem.margin >= -1e-12
    assert seen > 100


def test_thm1_uniform_rhs_equals_maclaurin_rhs():
    for n, k in [(8, 3), (12, 4), (16, 5), (20, 3)]:
        x = SimplexVector([1 / n] * n)
        t1 = check_thm1_upper(x, k)
        mac = check_maclaurin(x, k)
        assert abs(t1.rhs - mac.rhs) <= 1e-13 * mac.rhs


def test_thm1_relaxed_variant():
    # wider threshold: 3/8 for k=3
    x = SimplexVector([0.3, 0.25, 0.25, 0.2])
    std = check_thm1_upper(x, 3)
    rel = check_thm1_upper(x, 3, "relaxed")
    assert not std.applicable  # 0.3 > 1/4
    assert rel.applicable      # 0.3 <= 3/8
    assert rel.margin > 0
    with pytest.raises(ValueError):
        check_thm1_upper(x, 5, "relaxed")


def test_thm1_requires_k_at_least_3():
    with pytest.raises(ValueError):
        check_thm1_upper(SimplexVector([0.5, 0.5]), 2)


# --- lower bound (q form) ------------------------------------------------------


def test_thm2_uniform_equality():
    r = check_thm2_lower(SimplexVector([1 / 6] * 6), 3)
    assert r.applicable and r.equality_case
    assert abs(r.margin) <= 1e-10


def test_thm2_explicit_example():
    r = check_thm2_lower(SimplexVector([0.3, 0.25, 0.25, 0.2]), 3)
    assert r.applicable  # 0.3 < 1/2
    assert r.margin > 0
    # recompute both sides independently
    q = 0.3**2 + 2 * 0.25**2 + 0.2**2
    rhs = (1 - q) * (1 - 2 * q) / 6
    lhs = esp_bruteforce([0.3, 0.25, 0.25, 0.2], 3)
    assert r.margin == pytest.approx(lhs - rhs, abs=1e-15)


def test_thm2_precondition_violation():
    r = check_thm2_lower(SimplexVector([0.6, 0.4]), 3)
    assert not r.applicable
    assert r.constraint_slack < 0


# --- partial-derivative bound ---------------------------------------------------


def test_thm3_uniform_equality():
    r = check_thm3_partial(SimplexVector([0.1] * 10), 5)
    assert r.applicable and r.equality_case
    assert abs(r.margin) <= 1e-10


def test_thm3_explicit_example():
    r = check_thm3_partial(SimplexVector([0.2, 0.2, 0.2, 0.2, 0.1, 0.1]), 4)
    assert r.applicable  # 0.2 <= 0.25
    assert r.margin > 0


def test_thm3_precondition_violation():
    r = check_thm3_partial(SimplexVector([0.5, 0.5]), 3)
    assert not r.applicable  # 0.5 > 1/3


def test_thm3_k_range():
    with pytest.raises(ValueError):
        check_thm3_partial(SimplexVector([0.25] * 4), 6)
    # experimental flag unlocks k=6
    r = check_thm3_partial(SimplexVector([1 / 8] * 8), 6, experimental=True)
    assert r.applicable and abs(r.margin) <= 1e-10
    with pytest.raises(ValueError):
        check_thm3_partial(SimplexVector([0.25] * 4), 7, experimental=True)


def test_thm3_k3_closed_form_on_uniform():
    # k=3 rhs collapses to (1 - s - 2s(1-s))/2 with s = sigma
    for n in (4, 7, 11):
        x = SimplexVector([1 / n] * n)
        r = check_thm3_partial(x, 3)
        s = sigma(x)
        assert abs(r.rhs - (1 - s - 2 * s * (1 - s)) / 2) <= 1e-12


def test_thm3_lhs_is_gradient_at_largest_entry():
    x = SimplexVector([0.22, 0.2, 0.2, 0.19, 0.19])
    r = check_thm3_partial(x, 3)
    assert r.lhs == pytest.approx(esp_bruteforce([0.2, 0.2, 0.19, 0.19], 2), abs=1e-15)


# --- recurrences -----------------------------------------------------------------


def test_recurrences_uniform_equality():
    p2, p3 = check_recurrences(SimplexVector([1 / 7] * 7), 4)
    assert abs(p2.margin) <= 1e-10 and p2.equality_case
    assert abs(p3.margin) <= 1e-10 and p3.equality_case


def test_recurrences_generic_positive_margins():
    p2, p3 = check_recurrences(SimplexVector([0.4, 0.3, 0.2, 0.1]), 3)
    assert p2.margin > 0
    # at k=3 the upper recurrence is Newton's identity 3*S_3 = S_2 - q + p,
    # an exact equality for every x; the gap only opens at k >= 4
    assert abs(p3.margin) <= 1e-15
    _, p3 = check_recurrences(SimplexVector([0.4, 0.3, 0.2, 0.1]), 4)
    assert p3.margin > 0


def test_recurrences_single_vertex():
    p2, p3 = check_recurrences(SimplexVector([1.0]), 2)
    assert p2.margin == 0.0
    assert p2.equality_case
    assert not p3.applicable  # the upper recurrence starts at k=3


def test_recurrences_reject_small_k():
    with pytest.raises(ValueError):
        check_recurrences(SimplexVector([1.0]), 1)


# --- moment chain ------------------------------------------------------------------


def test_prop1_chain_uniform():
    r = check_prop1_chain(SimplexVector([1 / 9] * 9))
    assert abs(r.margin) <= 1e-10 and r.equality_case


def test_prop1_chain_two_point():
    r = check_prop1_chain(SimplexVector([0.7, 0.3]))
    assert r.margin > 0 and not r.equality_case


def test_prop1_chain_zero_padding():
    r = check_prop1_chain(SimplexVector([0.5, 0.5, 0.0, 0.0]))
    assert abs(r.margin) <= 1e-10 and r.equality_case


# --- proof claims --------------------------------------------------------------------


def test_claims_uniform_equalities():
    for rep in check_proof_claims(SimplexVector([1 / 12] * 12), 4):
        assert rep.applicable
        assert abs(rep.margin) <= 1e-10
        assert rep.equality_case


def test_claims_near_uniform_nonnegative():
    x = np.full(14, 1 / 14)
    x[0] += 0.005
    x[-1] -= 0.005
    for rep in check_proof_claims(SimplexVector(x), 5):
        assert rep.applicable
        assert rep.margin >= -1e-12


def test_claims_inapplicable_above_threshold():
    x = SimplexVector([0.3, 0.3, 0.2, 0.2])
    for rep in check_proof_claims(x, 5):
        assert not rep.applicable  # 0.3 > 1/12 and 0.3 > 1/5


def test_claims_insig_only_at_k5():
    ids4 = {r.bound_id for r in check_proof_claims(SimplexVector([1 / 16] * 16), 4)}
    ids5 = {r.bound_id for r in check_proof_claims(SimplexVector([1 / 16] * 16), 5)}
    assert "claim_insig" not in ids4
    assert "claim_insig" in ids5


def test_claims_reject_small_k():
    with pytest.raises(ValueError):
        check_proof_claims(SimplexVector([0.5, 0.5]), 2)


# --- cross-cutting properties ----------------------------------------------------------


def test_equality_detection_on_uniform_supports():
    # uniform on a support of size s, zero-padded to n: every applicable
    # checker reports |margin| <= 1e-10 (all but maclaurin also equality)
    for n in (4, 8, 13):
        for s in range(1, n + 1):
            x = uniform_support(s, n)
            reports = []
            reports.append(check_maclaurin(x, 2))
            for k in (3, 4, 5):
                reports.append(check_thm1_upper(x, k))
                reports.append(check_thm1_upper(x, k, "remark"))
                reports.append(check_thm2_lower(x, k))
                reports.append(check_thm3_partial(x, k))
                reports.extend(check_recurrences(x, k))
                reports.extend(check_proof_claims(x, k))
            reports.append(check_prop1_chain(x))
            for rep in reports:
                if rep.applicable and rep.bound_id != "maclaurin":
                    assert abs(rep.margin) <= 1e-10, (n, s, rep)
                if rep.applicable and rep.bound_id == "maclaurin" and s == n:
                    assert abs(rep.margin) <= 1e-10


def test_no_violations_on_random_applicable_inputs():
    rng = np.random.default_rng(12)
    for _ in range(300):
        n = int(rng.integers(2, 16))
        x = SimplexVector(rng.standard_exponential(n), normalize=True)
        reports = [check_maclaurin(x, 2), check_prop1_chain(x)]
        for k in (3, 4, 5):
            reports.append(check_thm1_upper(x, k))
            reports.append(check_thm1_upper(x, k, "remark"))
            reports.append(check_thm2_lower(x, k))
            reports.append(check_thm3_partial(x, k))
            reports.extend(check_recurrences(x, k))
            reports.extend(check_proof_claims(x, k))
        for rep in reports:
            if rep.applicable:
                assert rep.margin >= -1e-12, rep


def test_sweep_margins_agree_with_scalar_checkers():
    rng = np.random.default_rng(13)
    X = rng.standard_exponential((64, 9))
    X /= X.sum(axis=1, keepdims=True)
    cases = {
        "maclaurin": lambda x, k: check_maclaurin(x, k),
        "thm1_upper": lambda x, k: check_thm1_upper(x, k),
        "thm1_remark": lambda x, k: check_thm1_upper(x, k, "remark"),
        "thm2_lower": lambda x, k: check_thm2_lower(x, k),
        "thm3_partial": lambda x, k: check_thm3_partial(x, k),
        "prop2_rec": lambda x, k: check_recurrences(x, k)[0],
        "prop3_rec": lambda x, k: check_recurrences(x, k)[1],
        "prop1_chain": lambda x, k: check_prop1_chain(x),
    }
    for bound_id, scalar in cases.items():
        k = 4
        margins, app = sweep_margins(bound_id, k, X)
        for i in range(X.shape[0]):
            rep = scalar(X[i], k)
            assert app[i] == rep.applicable
            if rep.applicable:
                assert margins[i] == pytest.approx(rep.margin, abs=1e-14)
    # claim families aggregate the per-degree minimum
    for bound_id in ("claim_moment", "claim_sigma_rec"):
        margins, app = sweep_margins(bound_id, 5, X)
        for i in range(X.shape[0]):
            reps = [r for r in check_proof_claims(X[i], 5) if r.bound_id == bound_id]
            assert app[i] == reps[0].applicable
            if app[i]:
                assert margins[i] == pytest.approx(
                    min(r.margin for r in reps), abs=1e-14
                )
    margins, app = sweep_margins("claim_insig", 5, X)
    for i in range(X.shape[0]):
        rep = [r for r in check_proof_claims(X[i], 5) if r.bound_id == "claim_insig"][0]
        assert app[i] == rep.applicable
        if app[i]:
            assert margins[i] == pytest.approx(rep.margin, abs=1e-14)
