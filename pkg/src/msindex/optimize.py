"""Polynomial form of a hypergraph, its maximum over the simplex, and the
first-order (KKT) certificate.

The maximizer mu(G) of the edge-monomial form P_G over the simplex is found
by a multiplicative growth transform,

    x_i <- x_i * (dP/dx_i) / (r P),

which never decreases P for a homogeneous polynomial with nonnegative
coefficients, needs no step size, and preserves the simplex exactly.  At a
maximizer every support coordinate satisfies dP/dx_i = r mu, which is what
the KKT residual measures.  The transform cannot grow a zero coordinate, so
restarts mix jittered full-support starts with random-support starts.
"""

import math
from dataclasses import dataclass

import numpy as np

from .hypergraph import Hypergraph
from .sampling import stream
from .symfun import SimplexVector, as_weights

__all__ = [
    "DegeneratePointError",
    "OptimizerOptions",
    "OptimizationResult",
    "evaluate_form",
    "form_gradient",
    "baum_eagon_step",
    "kkt_residual",
    "ms_index",
]

_STALL_LIMIT = 40  # consecutive stalled iterations before giving up on a start


class DegeneratePointError(ValueError):
    """The growth transform is undefined where P_G vanishes."""


@dataclass(frozen=True)
class OptimizerOptions:
    restarts: int = 64
    max_iters: int = 100_000
    tol: float = 1e-14
    kkt_tol: float = 1e-8
    seed: int = 0


@dataclass(frozen=True)
class OptimizationResult:
    best_x: SimplexVector | None
    mu: float
    kkt_residual: float
    support_size: int
    restarts_used: int
    iterations_total: int
    converged: bool


def _coerce(g: Hypergraph, x) -> np.ndarray:
    arr = as_weights(x)
    if arr.size != g.n:
        raise ValueError(f"vector has {arr.size} entries, graph has {g.n} vertices")
    return arr


def evaluate_form(g: Hypergraph, x) -> float:
    """P_G(x): the sum of the edge monomials of G at x (vertex-aligned)."""
    arr = _coerce(g, x)
    if g.m == 0:
        return 0.0
    return float(np.prod(arr[g.edge_array], axis=1).sum())


def _grad_value_batch(E: np.ndarray, n: int, X: np.ndarray):
    """Gradients and values of the form for every row of X.

    Leave-one-out products per edge via prefix/suffix running products (no
    division, so zero coordinates are handled exactly).
    """
    A = X.shape[0]
    m, r = E.shape
    W = X[:, E]  # (A, m, r)
    pref = np.ones_like(W)
    suf = np.ones_like(W)
    for j in range(1, r):
        pref[..., j] = pref[..., j - 1] * W[..., j - 1]
    for j in range(r - 2, -1, -1):
        suf[..., j] = suf[..., j + 1] * W[..., j + 1]
    P = (pref[..., r - 1] * W[..., r - 1]).sum(axis=1)
    contrib = (pref * suf).reshape(A, m * r)
    offsets = (np.arange(A)[:, None] * n + E.ravel()[None, :]).ravel()
    G = np.bincount(offsets, weights=contrib.ravel(), minlength=A * n).reshape(A, n)
    return G, P


def form_gradient(g: Hypergraph, x) -> np.ndarray:
    """dP_G/dx_i: for each vertex, the sum over incident edges of the
    product of the other r-1 coordinates."""
    arr = _coerce(g, x)
    if g.m == 0:
        return np.zeros(g.n)
    grad, _ = _grad_value_batch(g.edge_array, g.n, arr[None, :])
    return grad[0]


def kkt_residual(g: Hypergraph, x) -> float:
    """Max deviation from the stationarity conditions at x:

    |dP/dx_i - r P| on the support, and the positive part of dP/dx_i - r P
    off it.  Zero exactly at first-order stationary points.
    """
    arr = _coerce(g, x)
    grad = form_gradient(g, arr)
    rp = g.r * evaluate_form(g, arr)
    diff = grad - rp
    on = arr > 0.0
    res = 0.0
    if on.any():
        res = float(np.abs(diff[on]).max())
    if (~on).any():
        res = max(res, float(np.maximum(diff[~on], 0.0).max()))
    return res


def baum_eagon_step(g: Hypergraph, x) -> SimplexVector:
    """One growth-transform update; raises DegeneratePointError at P = 0.

    The output stays on the simplex, keeps zero coordinates at zero, and
    satisfies P(x') >= P(x), strictly unless x is a fixed point.
    """
    arr = _coerce(g, x)
    grad = form_gradient(g, arr)
    denom = float(arr @ grad)  # equals r * P by Euler's identity
    if denom <= 0.0:
        raise DegeneratePointError("P_G(x) = 0: growth transform undefined")
    out = arr * grad / denom
    out /= out.sum()
    return SimplexVector(out, sort=False)


def _kkt_batch(X: np.ndarray, G: np.ndarray, P: np.ndarray, r: int) -> np.ndarray:
    diff = G - r * P[:, None]
    on = X > 0.0
    res_on = np.where(on, np.abs(diff), 0.0).max(axis=1)
    res_off = np.where(on, 0.0, np.maximum(diff, 0.0)).max(axis=1)
    return np.maximum(res_on, res_off)


def _starting_points(g: Hypergraph, restarts: int, seed: int) -> np.ndarray:
    """Start 0 is exact uniform; odd starts are jittered-uniform with full
    support; even starts put uniform weight on a random vertex subset
    (redrawn if it misses every edge)."""
    n, r = g.n, g.r
    E = g.edge_array
    X = np.empty((restarts, n))
    X[0] = 1.0 / n
    for i in range(1, restarts):
        rng = stream(seed, 1, i)
        if i % 2 == 1:
            w = rng.uniform(0.5, 1.5, n)
            X[i] = w / w.sum()
            continue
        x = None
        for _ in range(16):
            s = int(rng.integers(r, n + 1))
            support = rng.choice(n, size=s, replace=False)
            cand = np.zeros(n)
            cand[support] = 1.0 / s
            if np.prod(cand[E], axis=1).sum() > 0.0:
                x = cand
                break
        if x is None:
            w = rng.uniform(0.5, 1.5, n)
            x = w / w.sum()
        X[i] = x
    return X


def ms_index(g: Hypergraph, opts: OptimizerOptions | None = None) -> OptimizationResult:
    """The MS-index mu(G): best growth-transform ascent over restarts.

    Each restart runs until its KKT residual certifies stationarity, its
    objective stalls (relative increase <= tol for a stretch -- a fixed
    point that is not first-order optimal, e.g. a symmetric saddle), or the
    iteration budget runs out.  Non-certified restarts still provide valid
    lower bounds on mu and compete for the best result.
    """
    opts = opts or OptimizerOptions()
    n, r = g.n, g.r
    if g.m == 0:
        best = SimplexVector(np.full(n, 1.0 / n), sort=False) if n else None
        return OptimizationResult(
            best_x=best,
            mu=0.0,
            kkt_residual=0.0,
            support_size=0,
            restarts_used=0,
            iterations_total=0,
            converged=True,
        )

    R = max(1, opts.restarts)
    E = g.edge_array
    X = _starting_points(g, R, opts.seed)
    resid = np.full(R, np.inf)
    P_prev = np.full(R, -np.inf)
    stall = np.zeros(R, dtype=int)
    active = np.ones(R, dtype=bool)
    iterations_total = 0

    for _ in range(opts.max_iters):
        idx = np.flatnonzero(active)
        if idx.size == 0:
            break
        Xa = X[idx]
        Ga, Pa = _grad_value_batch(E, n, Xa)
        iterations_total += idx.size
        resid[idx] = _kkt_batch(Xa, Ga, Pa, r)

        done = resid[idx] <= opts.kkt_tol
        rel = (Pa - P_prev[idx]) / np.maximum(P_prev[idx], 1e-300)
        stalled = rel <= opts.tol
        stall[idx] = np.where(stalled, stall[idx] + 1, 0)
        done |= stall[idx] >= _STALL_LIMIT
        P_prev[idx] = Pa
        active[idx[done]] = False

        go = idx[~done]
        if go.size == 0:
            continue
        Xg, Gg = X[go], Ga[~done]
        denom = (Xg * Gg).sum(axis=1)
        Xn = Xg * Gg / denom[:, None]
        Xn /= Xn.sum(axis=1)[:, None]
        X[go] = Xn

    mus = np.array([evaluate_form(g, X[i]) for i in range(R)])
    order = sorted(range(R), key=lambda i: (-mus[i], resid[i], i))
    best_i = order[0]
    best_x = SimplexVector(X[best_i], sort=False)
    best_resid = kkt_residual(g, best_x)
    return OptimizationResult(
        best_x=best_x,
        mu=float(evaluate_form(g, best_x)),
        kkt_residual=best_resid,
        support_size=best_x.support_size,
        restarts_used=R,
        iterations_total=iterations_total,
        converged=best_resid <= opts.kkt_tol,
    )
