"""Independent slow oracles the tests check the fast paths against."""

import itertools
import math

import numpy as np


def esp_bruteforce(x, k):
    """S_k by explicit summation over all k-subsets (O(2^n))."""
    x = np.asarray(x, dtype=float)
    if k == 0:
        return 1.0
    if k > x.size:
        return 0.0
    return float(
        sum(math.prod(x[list(c)]) for c in itertools.combinations(range(x.size), k))
    )


def esp_gradient_bruteforce(x, k):
    """dS_k/dx_i as the leave-one-out brute-force S_{k-1}."""
    x = np.asarray(x, dtype=float)
    return np.array(
        [esp_bruteforce(np.delete(x, i), k - 1) for i in range(x.size)]
    )


def central_fd(f, x, h=1e-6):
    """Central finite-difference gradient, perturbing raw entries."""
    x = np.asarray(x, dtype=float)
    g = np.zeros(x.size)
    for i in range(x.size):
        up = x.copy()
        dn = x.copy()
        up[i] += h
        dn[i] -= h
        g[i] = (f(up) - f(dn)) / (2 * h)
    return g


def motzkin_straus(omega):
    """Max of the edge form of the complete 2-graph on omega vertices."""
    return 0.5 * (1.0 - 1.0 / omega)


def rel_err(a, b, floor=1e-9):
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    scale = max(float(np.abs(a).max(initial=0.0)), float(np.abs(b).max(initial=0.0)), floor)
    return float(np.abs(a - b).max()) / scale


def random_simplex(rng, n):
    e = rng.standard_exponential(n)
    return e / e.sum()


def random_graph(rng, r, n, m):
    """Uniform m-subset of the r-sets on n vertices, as 0-based tuples."""
    all_edges = list(itertools.combinations(range(n), r))
    idx = rng.choice(len(all_edges), size=m, replace=False)
    return [all_edges[i] for i in sorted(idx)]
