"""Elementary symmetric polynomials and power-sum statistics on the simplex.

Everything here operates on nonnegative weight vectors.  The elementary
symmetric values S_0..S_K are computed by the ascending prefix recurrence
S_k <- S_k + x_i * S_{k-1}; every intermediate term is nonnegative, so the
recurrence is forward-stable (no cancellation), unlike Newton-identity
conversions from power sums.
"""

import math

import numpy as np
from scipy.special import logsumexp

__all__ = [
    "SimplexVector",
    "StatBundle",
    "elementary_symmetric_all",
    "esp_gradient",
    "power_sums",
    "sigma",
    "phi",
    "generalized_binomial",
    "invert_binomial",
    "stat_bundle",
]

SUM_TOL = 1e-9


def as_weights(x):
    """Coerce a SimplexVector or array-like to a float ndarray."""
    if isinstance(x, SimplexVector):
        return x.entries
    return np.asarray(x, dtype=float)


class SimplexVector:
    """Nonnegative weight vector summing to 1 (within 1e-9).

    Entries are sorted into non-increasing order on construction by default,
    the standing normalization for symmetric-function work.  Pass
    ``sort=False`` to keep the given order when entries are tied to labeled
    vertices (polynomial forms of hypergraphs are not symmetric) or when the
    sampling distribution of raw coordinates matters.
    """

    __slots__ = ("_entries",)

    def __init__(self, entries, normalize=False, sort=True):
        arr = np.array(entries, dtype=float)
        if arr.ndim != 1 or arr.size == 0:
            raise ValueError("entries must form a non-empty 1-d vector")
        if np.any(arr < 0.0):
            raise ValueError("entries must be nonnegative")
        if normalize:
            total = arr.sum()
            if total <= 0.0:
                raise ValueError("cannot normalize a zero vector")
            arr = arr / total
        total = arr.sum()
        if abs(total - 1.0) > SUM_TOL:
            raise ValueError(f"entries sum to {total}, expected 1 within {SUM_TOL}")
        if sort:
            arr = np.sort(arr)[::-1].copy()
        arr.setflags(write=False)
        self._entries = arr

    @property
    def entries(self) -> np.ndarray:
        return self._entries

    @property
    def n(self) -> int:
        return self._entries.size

    @property
    def support_size(self) -> int:
        """Number of entries that are not exactly 0.0."""
        return int(np.count_nonzero(self._entries))

    @property
    def x_max(self) -> float:
        return float(self._entries.max())

    def __len__(self):
        return self._entries.size

    def __getitem__(self, i):
        return self._entries[i]

    def __iter__(self):
        return iter(self._entries)

    def __repr__(self):
        return f"SimplexVector({self._entries.tolist()!r})"

    def __eq__(self, other):
        if not isinstance(other, SimplexVector):
            return NotImplemented
        return np.array_equal(self._entries, other._entries)

    def __hash__(self):
        return hash(self._entries.tobytes())


def elementary_symmetric_all(x, K: int) -> np.ndarray:
    """All elementary symmetric values S_0..S_K of the entries of x.

    O(n*K) prefix recurrence.  S_k is exactly 0.0 whenever k exceeds the
    number of nonzero entries, and K > n simply yields trailing zeros.
    """
    if K < 0:
        raise ValueError("K must be >= 0")
    arr = as_weights(x)
    S = np.zeros(K + 1)
    S[0] = 1.0
    if K == 0:
        return S
    for xi in arr:
        S[1:] += xi * S[:-1]
    return S


def esp_gradient(x, k: int) -> np.ndarray:
    """Partial derivatives dS_k/dx_i, i.e. S_{k-1} of x with entry i removed.

    Prefix/suffix split: with P_i the ESP table of x[:i] and Q_i that of
    x[i+1:], the leave-one-out value is the degree-(k-1) convolution of the
    two, so the whole gradient costs O(n*k).  For non-increasing x the output
    is non-decreasing, with ties exactly where entries tie.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    arr = as_weights(x)
    n = arr.size
    D = k - 1
    pre = np.zeros((n + 1, D + 1))
    pre[0, 0] = 1.0
    for i in range(n):
        pre[i + 1] = pre[i]
        pre[i + 1, 1:] += arr[i] * pre[i, :-1]
    suf = np.zeros((n + 1, D + 1))
    suf[n, 0] = 1.0
    for i in range(n - 1, -1, -1):
        suf[i] = suf[i + 1]
        suf[i, 1:] += arr[i] * suf[i + 1, :-1]
    # grad[i] = sum_a pre[i, a] * suf[i+1, D-a]
    return np.einsum("ij,ij->i", pre[:n], suf[1:, ::-1])


def power_sums(x):
    """Power sums (q, p, t4) = (sum x^2, sum x^3, sum x^4)."""
    arr = as_weights(x)
    sq = arr * arr
    return float(sq.sum()), float((sq * arr).sum()), float((sq * sq).sum())


def sigma(x) -> float:
    """Self-weighted geometric mean prod x_i^{x_i}, with 0^0 = 1.

    Computed in log space; zero entries contribute nothing to the sum.
    """
    arr = as_weights(x)
    pos = arr[arr > 0.0]
    return float(np.exp(np.dot(pos, np.log(pos))))


def phi(x, t: float) -> float:
    """Power-mean family (sum x_i^{1+t})^{1/t}, with the t = 0 gap filled
    by sigma(x), its continuous limit.

    Nondecreasing and continuous in t on [-1, inf) for positive x, with
    phi_1 = q, phi_{-1} = 1/n and phi_t -> max entry as t -> inf.  Evaluated
    in log space so large t does not underflow.
    """
    if t < -1.0:
        raise ValueError("t must be >= -1")
    if t == 0.0:
        return sigma(x)
    arr = as_weights(x)
    if t == -1.0:
        # exponent 1+t = 0: every entry contributes 0^0 = 1
        return 1.0 / arr.size
    pos = arr[arr > 0.0]
    return float(np.exp(logsumexp((1.0 + t) * np.log(pos)) / t))


def generalized_binomial(t: float, k: int) -> float:
    """Binomial coefficient C(t, k) = t(t-1)...(t-k+1)/k! for real t.

    Returns exactly 0.0 when some factor t - j vanishes (nonnegative
    integer t below k).
    """
    if k < 0:
        raise ValueError("k must be >= 0")
    num = 1.0
    for j in range(k):
        f = t - j
        if f == 0.0:
            return 0.0
        num *= f
    return num / math.factorial(k)


def invert_binomial(m: float, r: int) -> float:
    """The unique t >= r-1 with C(t, r) = m.

    C(., r) is strictly increasing on [r-1, inf) with C(r-1, r) = 0 and
    C(r+m, r) >= m, so [r-1, r+m] brackets the root.  Bisection narrows the
    bracket, then a few Newton steps polish to |C(t,r) - m| <~ 1e-10*max(1,m).
    """
    if r < 2:
        raise ValueError("r must be >= 2")
    if m < 0:
        raise ValueError("m must be >= 0")
    if m == 0:
        return float(r - 1)
    lo, hi = float(r - 1), float(r) + m
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        if generalized_binomial(mid, r) < m:
            lo = mid
        else:
            hi = mid
        if hi - lo <= 1e-9 * max(1.0, hi):
            break
    t = 0.5 * (lo + hi)
    for _ in range(5):
        c = generalized_binomial(t, r)
        if c <= 0.0:
            break
        # d/dt C(t, r) = C(t, r) * sum_j 1/(t - j)
        deriv = c * sum(1.0 / (t - j) for j in range(r))
        step = (c - m) / deriv
        t = min(max(t - step, lo), hi)
    return float(t)


class StatBundle:
    """Scalar statistics of a weight vector, computed once and shared.

    Holds sigma, the power sums q, p, t4, the max entry, the nonzero count
    n_prime (entries are "zero" only if exactly 0.0), and the elementary
    symmetric values S_0..S_K.
    """

    __slots__ = ("sigma", "q", "p", "t4", "x_max", "n_prime", "esp")

    def __init__(self, sigma, q, p, t4, x_max, n_prime, esp):
        self.sigma = sigma
        self.q = q
        self.p = p
        self.t4 = t4
        self.x_max = x_max
        self.n_prime = n_prime
        self.esp = esp

    def __repr__(self):
        return (
            f"StatBundle(sigma={self.sigma}, q={self.q}, p={self.p}, "
            f"t4={self.t4}, x_max={self.x_max}, n_prime={self.n_prime}, "
            f"esp={self.esp.tolist()})"
        )


def stat_bundle(x, K: int) -> StatBundle:
    """Compute the full StatBundle of x with ESP values up to degree K."""
    arr = as_weights(x)
    q, p, t4 = power_sums(arr)
    return StatBundle(
        sigma=sigma(arr),
        q=q,
        p=p,
        t4=t4,
        x_max=float(arr.max()),
        n_prime=int(np.count_nonzero(arr)),
        esp=elementary_symmetric_all(arr, K),
    )
