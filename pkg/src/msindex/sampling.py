"""Seeded simplex sampling and the bulk bound-sweep driver.

Reproducibility model: all randomness flows from a 64-bit master seed
through counter-based Philox streams, split with SeedSequence spawn keys.
A sweep draws its samples in fixed chunks of CHUNK, one child stream per
chunk, and always generates full chunks even when only a prefix is used, so
sample i is a pure function of (seed, i) -- independent of the total sample
count, of evaluation order, and of any thread-level parallelism.
"""

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import bounds
from .symfun import SimplexVector

__all__ = [
    "InfeasibleCapError",
    "SweepConfig",
    "SweepReport",
    "stream",
    "sample_simplex",
    "sample_capped",
    "run_bound_sweep",
]

CHUNK = 4096
MAX_REJECTIONS = 64
BOUNDARY_BAND = 0.05


class InfeasibleCapError(ValueError):
    """No point of the simplex satisfies the requested max-entry cap."""


def stream(seed: int, *path: int) -> np.random.Generator:
    """Deterministic child generator for (seed, path).

    Philox keyed through SeedSequence spawn keys: children are independent,
    and the mapping is stable across runs, platforms, and thread counts.
    """
    ss = np.random.SeedSequence(seed, spawn_key=tuple(int(p) for p in path))
    return np.random.Generator(np.random.Philox(ss))


def sample_simplex(n: int, rng: np.random.Generator) -> SimplexVector:
    """One draw from the uniform distribution on the simplex: n standard
    exponentials normalized by their sum (entry order preserved)."""
    if n < 1:
        raise ValueError("n must be >= 1")
    e = rng.standard_exponential(n)
    return SimplexVector(e / e.sum(), sort=False)


def _check_cap_feasible(n: int, cap: float):
    if n * cap < 1.0 - 1e-12:
        raise InfeasibleCapError(
            f"cap {cap} infeasible for n={n}: max entry of a simplex vector "
            f"is at least 1/n"
        )


def _shrink_rows(V: np.ndarray, cap: float) -> np.ndarray:
    """Move rows toward uniform, x <- lam*x + (1-lam)*u, with the least
    shrink (largest lam in [0,1]) that enforces max <= cap exactly."""
    n = V.shape[1]
    u = 1.0 / n
    vmax = V.max(axis=1)
    over = vmax > cap
    if not np.any(over):
        return V
    lam = np.ones(V.shape[0])
    lam[over] = np.clip((cap - u) / (vmax[over] - u), 0.0, 1.0)
    for _ in range(4):
        X = lam[:, None] * V + (1.0 - lam[:, None]) * u
        bad = X.max(axis=1) > cap
        if not np.any(bad):
            return X
        lam[bad] *= 1.0 - 4e-16
    X[bad] = u  # pathological rounding corner: exact uniform always obeys
    return X


def sample_capped(n: int, cap: float, rng: np.random.Generator) -> SimplexVector:
    """A simplex vector with max entry <= cap (exactly).

    Rejection sampling from the uniform simplex for up to 64 attempts, then
    shrink the last draw toward uniform.  The shrink skews the distribution
    near tight caps, which is acceptable for a harness hunting violations.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    _check_cap_feasible(n, cap)
    v = None
    for _ in range(MAX_REJECTIONS):
        e = rng.standard_exponential(n)
        v = e / e.sum()
        if v.max() <= cap:
            return SimplexVector(v, sort=False)
    return SimplexVector(_shrink_rows(v[None, :], cap)[0], sort=False)


@dataclass(frozen=True)
class SweepConfig:
    """One sweep: `samples` draws on the (n-1)-simplex checked against one
    bound at degree k.

    cap_policy:
      * "none"     -- unconstrained uniform draws;
      * "cap"      -- rejection (then shrink) under the bound's threshold;
      * "boundary" -- biased so x_max lands within 5% below the threshold.
    Bounds without a threshold, and caps infeasible at this n, fall back to
    unconstrained draws; the checker's applicability flag does the rest.
    """

    bound_id: str
    k: int
    n: int
    samples: int
    seed: int
    cap_policy: str = "cap"
    experimental: bool = False

    def resolved_cap(self):
        if self.cap_policy == "none":
            return None
        cap = bounds.bound_threshold(self.bound_id, self.k)
        if cap is None or self.n * cap < 1.0 - 1e-12:
            return None
        return cap


@dataclass(frozen=True)
class SweepReport:
    """Aggregate of one sweep; only the argmin sample is retained."""

    bound_id: str
    k: int
    n: int
    samples_total: int
    samples_applicable: int
    min_margin: float
    argmin_vector: SimplexVector | None
    violations: int
    seed: int
    cap: float | None
    cap_policy: str


def _sample_chunk(cfg: SweepConfig, chunk_index: int, cap) -> np.ndarray:
    """Full chunk of CHUNK simplex rows for this (seed, chunk)."""
    rng = stream(cfg.seed, chunk_index)
    n = cfg.n
    E = rng.standard_exponential((CHUNK, n))
    V = E / E.sum(axis=1, keepdims=True)
    if cap is None:
        return V
    if cfg.cap_policy == "boundary":
        # shrink each row so its max lands in [(1-band)*cap, cap]
        targets = cap * (1.0 - BOUNDARY_BAND * rng.random(CHUNK))
        targets = np.maximum(targets, 1.0 / n)
        u = 1.0 / n
        vmax = V.max(axis=1)
        lam = np.ones(CHUNK)
        movable = vmax > u
        lam[movable] = np.clip((targets[movable] - u) / (vmax[movable] - u), 0.0, 1.0)
        X = lam[:, None] * V + (1.0 - lam[:, None]) * u
        return _shrink_rows(X, cap)
    # rejection with per-round redraw of the still-violating rows
    active = np.flatnonzero(V.max(axis=1) > cap)
    for _ in range(MAX_REJECTIONS - 1):
        if active.size == 0:
            break
        E = rng.standard_exponential((active.size, n))
        W = E / E.sum(axis=1, keepdims=True)
        V[active] = W
        active = active[W.max(axis=1) > cap]
    if active.size:
        V[active] = _shrink_rows(V[active], cap)
    return V


def _sweep_one(cfg: SweepConfig) -> SweepReport:
    if cfg.samples < 1:
        raise ValueError("samples must be >= 1")
    if cfg.cap_policy not in ("none", "cap", "boundary"):
        raise ValueError(f"unknown cap policy {cfg.cap_policy!r}")
    cap = cfg.resolved_cap()
    n_chunks = (cfg.samples + CHUNK - 1) // CHUNK

    applicable_total = 0
    violations = 0
    best_margin = math.inf
    best_row = None
    for ci in range(n_chunks):
        X = _sample_chunk(cfg, ci, cap)
        take = min(CHUNK, cfg.samples - ci * CHUNK)
        X = X[:take]
        margins, app = bounds.sweep_margins(
            cfg.bound_id, cfg.k, X, experimental=cfg.experimental
        )
        applicable_total += int(app.sum())
        if app.any():
            m = np.where(app, margins, np.inf)
            violations += int((m < -bounds.VIOLATION_TOL).sum())
            j = int(np.argmin(m))
            if m[j] < best_margin:
                best_margin = float(m[j])
                best_row = X[j].copy()
    return SweepReport(
        bound_id=cfg.bound_id,
        k=cfg.k,
        n=cfg.n,
        samples_total=cfg.samples,
        samples_applicable=applicable_total,
        min_margin=best_margin if applicable_total else math.nan,
        argmin_vector=SimplexVector(best_row, sort=False) if best_row is not None else None,
        violations=violations,
        seed=cfg.seed,
        cap=cap,
        cap_policy=cfg.cap_policy,
    )


def run_bound_sweep(configs, threads: int = 1) -> list:
    """Run each SweepConfig and return the reports in config order.

    Thread-count only affects scheduling across configs; every report is
    bit-identical regardless of `threads`.
    """
    configs = list(configs)
    if threads <= 1 or len(configs) <= 1:
        return [_sweep_one(c) for c in configs]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(_sweep_one, configs))
