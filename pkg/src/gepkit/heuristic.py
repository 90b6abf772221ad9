"""Floating-point feasibility search for small decompositions on a tiny box.

Everything here is HEURISTIC: a failure to fit is not a proof that no
decomposition exists, and a fit only shows decomposability of the sampled
tensor, not of the function on the whole group.  Results never feed the
exact contracts.
"""

from __future__ import annotations

from itertools import combinations_with_replacement, product

import numpy as np

from .algebra import ExpPoly
from .decompose import bipartitions

TOLERANCE = 1e-9
RESTARTS = 20
MAX_SWEEPS = 60


def sum_tensor(f: ExpPoly, n: int, box) -> np.ndarray:
    pts = list(box.points())
    V = len(pts)
    cache = {}
    T = np.empty((V,) * n, dtype=complex)
    for idx in product(range(V), repeat=n):
        z = tuple(sum(c) for c in zip(*(pts[i] for i in idx)))
        if z not in cache:
            cache[z] = f.evaluate(z).to_complex()
        T[idx] = cache[z]
    return T


class _Layout:
    """Index bookkeeping for sum_i u_i(x_E) v_i(x_rest) against a flattened tensor."""

    def __init__(self, n: int, V: int, sides: tuple[frozenset[int], ...]):
        self.sides = sides
        entries = list(product(range(V), repeat=n))
        self.rows = len(entries)
        self.u_idx = []
        self.v_idx = []
        self.u_size = []
        self.v_size = []
        for E in sides:
            ein = [b - 1 for b in sorted(E)]
            eout = [b for b in range(n) if b + 1 not in E]
            self.u_size.append(V ** len(ein))
            self.v_size.append(V ** len(eout))
            self.u_idx.append(np.array([np.ravel_multi_index([x[b] for b in ein], (V,) * len(ein)) for x in entries]))
            self.v_idx.append(np.array([np.ravel_multi_index([x[b] for b in eout], (V,) * len(eout)) for x in entries]))

    def design(self, fixed: list[np.ndarray], which: str) -> np.ndarray:
        sizes = self.u_size if which == "u" else self.v_size
        own = self.u_idx if which == "u" else self.v_idx
        other = self.v_idx if which == "u" else self.u_idx
        A = np.zeros((self.rows, sum(sizes)), dtype=complex)
        offset = 0
        rows = np.arange(self.rows)
        for i, size in enumerate(sizes):
            A[rows, offset + own[i]] = fixed[i][other[i]]
            offset += size
        return A

    def split(self, x: np.ndarray, which: str) -> list[np.ndarray]:
        sizes = self.u_size if which == "u" else self.v_size
        out, offset = [], 0
        for size in sizes:
            out.append(x[offset : offset + size])
            offset += size
        return out


def fit(T: np.ndarray, sides, rng: np.random.Generator) -> float:
    """Best relative residual found by alternating least squares over restarts."""
    n = T.ndim
    V = T.shape[0]
    lay = _Layout(n, V, tuple(sides))
    target = T.reshape(-1)
    scale = max(1.0, float(np.linalg.norm(target)))
    best = np.inf
    for _ in range(RESTARTS):
        vs = [rng.standard_normal(s) + 1j * rng.standard_normal(s) for s in lay.v_size]
        res = np.inf
        for _ in range(MAX_SWEEPS):
            A = lay.design(vs, "u")
            x, *_ = np.linalg.lstsq(A, target, rcond=None)
            us = lay.split(x, "u")
            A = lay.design(us, "v")
            y, *_ = np.linalg.lstsq(A, target, rcond=None)
            vs = lay.split(y, "v")
            res = float(np.linalg.norm(A @ y - target)) / scale
            if res < TOLERANCE:
                return res
        best = min(best, res)
    return best


def search_orders(f: ExpPoly, n: int, box, ks, seed: int = 0) -> dict:
    """For each k, look for a multiset of k bipartitions the sampled tensor fits."""
    rng = np.random.default_rng(seed)
    T = sum_tensor(f, n, box)
    parts = bipartitions(n)
    report = {"label": "HEURISTIC", "tolerance": TOLERANCE, "restarts": RESTARTS, "orders": []}
    for k in ks:
        entry = {"k": k, "feasible": False, "best_residual": None, "sides": None}
        best = np.inf
        for sides in combinations_with_replacement(parts, k):
            r = fit(T, sides, rng)
            if r < best:
                best = r
            if r < TOLERANCE:
                entry["feasible"] = True
                entry["sides"] = [sorted(E) for E in sides]
                break
        entry["best_residual"] = float(f"{best:.3e}")
        report["orders"].append(entry)
    return report
