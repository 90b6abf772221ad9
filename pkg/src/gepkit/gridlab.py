"""Finite-window analytics on Z^d: rank oracles, span tests, order bounds, reconstruction."""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product
from typing import Sequence

from .algebra import Exponential, ExpPoly, GenPoly, add_points
from .decompose import PreconditionError, bipartitions, decompose_first_block, decompose_sum, find_separated_pair
from .linalg import RankCertificate, rank, rank_certificate, solve
from .recurrence import (
    berlekamp_massey,
    characteristic_polynomial,
    gaussian_rational_roots,
    hankel_rank,
    root_multiplicity,
    upoly_divmod,
    _trim,
)
from .scalar import ONE, ZERO, Scalar


@dataclass(frozen=True)
class GridBox:
    lo: tuple[int, ...]
    hi: tuple[int, ...]

    def __post_init__(self):
        lo, hi = tuple(int(v) for v in self.lo), tuple(int(v) for v in self.hi)
        if len(lo) != len(hi) or not lo:
            raise ValueError("lo and hi must have the same positive length")
        if any(a > b for a, b in zip(lo, hi)):
            raise ValueError(f"empty box {lo}..{hi}")
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)

    @classmethod
    def cube(cls, d: int, lo: int, hi: int) -> "GridBox":
        return cls((lo,) * d, (hi,) * d)

    @classmethod
    def parse(cls, text: str, d: int | None = None) -> "GridBox":
        """``lo..hi[,lo..hi...]``; a single range is repeated up to ``d`` axes."""
        ranges = []
        for part in text.split(","):
            a, sep, b = part.strip().partition("..")
            if not sep:
                raise ValueError(f"bad range {part!r}; expected lo..hi")
            ranges.append((int(a), int(b)))
        if d is not None and len(ranges) == 1 and d > 1:
            ranges = ranges * d
        if d is not None and len(ranges) != d:
            raise ValueError(f"box has {len(ranges)} axes, expected {d}")
        return cls(tuple(r[0] for r in ranges), tuple(r[1] for r in ranges))

    @property
    def d(self) -> int:
        return len(self.lo)

    @property
    def volume(self) -> int:
        v = 1
        for a, b in zip(self.lo, self.hi):
            v *= b - a + 1
        return v

    def points(self):
        """Row-major: the last axis varies fastest."""
        return product(*(range(a, b + 1) for a, b in zip(self.lo, self.hi)))

    def __str__(self):
        return ",".join(f"{a}..{b}" for a, b in zip(self.lo, self.hi))


@dataclass(frozen=True)
class GridFunction:
    box: GridBox
    values: tuple[Scalar, ...]

    def __post_init__(self):
        if len(self.values) != self.box.volume:
            raise ValueError(f"{len(self.values)} values for a box of volume {self.box.volume}")


def _check_dim(f: ExpPoly, box: GridBox):
    if f.d != box.d:
        raise ValueError(f"dimension mismatch: function on Z^{f.d}, box in Z^{box.d}")


def sample(f: ExpPoly, box: GridBox) -> GridFunction:
    _check_dim(f, box)
    return GridFunction(box, tuple(f.evaluate(x) for x in box.points()))


def sum_matrix(f: ExpPoly, box: GridBox) -> list[list[Scalar]]:
    """M[x][y] = f(x + y) for x, y in the box."""
    _check_dim(f, box)
    pts = list(box.points())
    cache: dict = {}

    def val(z):
        v = cache.get(z)
        if v is None:
            v = cache[z] = f.evaluate(z)
        return v

    return [[val(add_points(x, y)) for y in pts] for x in pts]


def sum_rank(f: ExpPoly, box: GridBox) -> RankCertificate:
    """Exact rank of [f(x+y)]; lower bound for the order of f(x1 + x2)."""
    return rank_certificate(sum_matrix(f, box))


def exponentials_in_span(basis: Sequence[GridFunction], candidates: Sequence[Exponential], box: GridBox) -> list[Exponential]:
    """Candidates whose samples on the box lie in the span of the basis vectors."""
    if not basis:
        return []
    for g in basis:
        if g.box != box:
            raise ValueError("basis grid functions must live on the given box")
    cols = [list(g.values) for g in basis]
    base_rank = rank([list(r) for r in zip(*cols)])
    pts = list(box.points())
    out = []
    for m in candidates:
        if m.d != box.d:
            raise ValueError("candidate dimension mismatch")
        vec = [m.evaluate(x) for x in pts]
        if rank([list(r) for r in zip(*cols, vec)]) == base_rank:
            out.append(m)
    return out


# -- order bounds ------------------------------------------------------------


@dataclass
class Refutation:
    """Order <= 2 refuted: every bipartition pair forces a rank <= 2 that fails."""

    n: int
    box: GridBox
    pairs: list[dict]

    def to_json(self) -> dict:
        return {"refuted": True, "n": self.n, "box": str(self.box), "pairs": self.pairs}


@dataclass
class Inconclusive:
    n: int
    box: GridBox
    pairs: list[dict]

    def to_json(self) -> dict:
        return {"refuted": False, "n": self.n, "box": str(self.box), "pairs": self.pairs}


def refute_order2(f: ExpPoly, n: int, box: GridBox) -> Refutation | Inconclusive:
    """Try to show f(x_1+...+x_n) is not decomposable of order 2.

    For an order-2 decomposition with sets E1, E2 there is a pair (j, k)
    split by both; zeroing the other variables leaves f(x_j + x_k) as a sum of
    two separated products, forcing its sum-rank to be at most 2.
    """
    if n < 3:
        raise PreconditionError("refute_order2 needs n >= 3")
    parts = bipartitions(n)
    rank_cache: dict = {}
    pairs = []
    refuted = True
    for a in range(len(parts)):
        for b in range(a, len(parts)):
            E1, E2 = parts[a], parts[b]
            j, k = find_separated_pair(E1, E2, n)
            # after zeroing every other variable the function is f(x_j + x_k)
            if "r" not in rank_cache:
                rank_cache["r"] = sum_rank(f, box).rank
            r = rank_cache["r"]
            pairs.append({"E1": sorted(E1), "E2": sorted(E2), "pair": [j, k], "restricted_rank": r})
            if r <= 2:
                refuted = False
    if refuted:
        return Refutation(n, box, pairs)
    return Inconclusive(n, box, pairs)


@dataclass
class OrderBounds:
    lower: int
    upper: int
    flags: list[str]
    certificates: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {"lower": self.lower, "upper": self.upper, "flags": self.flags, "certificates": self.certificates}


def min_order_bounds(f: ExpPoly, n: int, box: GridBox, k_max: int = 4, seed: int = 0) -> OrderBounds:
    """Bracket the least k such that f(x_1 + ... + x_n) is decomposable of order k."""
    if n < 2:
        raise PreconditionError("min_order_bounds needs n >= 2")
    _check_dim(f, box)
    certs: dict = {}
    flags: list[str] = []
    if f.is_zero():
        return OrderBounds(0, 0, ["EXACT"], {"zero": True})
    # two exact constructions; keep the shorter witness
    routes = {"first_block": decompose_first_block(f, n).order}
    try:
        routes["constructive"] = decompose_sum(f, n).order
    except PreconditionError:
        pass
    route = min(routes, key=lambda r: (routes[r], r))
    upper = routes[route]
    certs["upper"] = {"route": route, "order": upper, "routes": routes}
    if n == 2:
        cert = sum_rank(f, box)
        lower = cert.rank
        certs["lower"] = {"route": "sum_rank", **cert.to_json()}
    else:
        res = refute_order2(f, n, box)
        if isinstance(res, Refutation):
            lower = 3
            certs["lower"] = {"route": "refute_order2", "restricted_rank": res.pairs[0]["restricted_rank"]}
        else:
            lower = 1
            certs["lower"] = {"route": "trivial"}
    exact = lower == upper
    flags.append("EXACT" if exact else "OPEN")
    if not exact and box.volume <= 4:
        from .heuristic import search_orders

        top = min(k_max, upper - 1)
        if lower <= top:
            certs["heuristic"] = search_orders(f, n, box, range(lower, top + 1), seed=seed)
            flags.append("HEURISTIC")
    if not exact and upper - 1 > k_max:
        flags.append("KMAX_EXCEEDED")
    return OrderBounds(lower, upper, flags, certs)


# -- reconstruction ------------------------------------------------------------


class ReconstructionError(ValueError):
    def __init__(self, reason: str, detail: str = ""):
        super().__init__(f"{reason}: {detail}" if detail else reason)
        self.reason = reason
        self.detail = detail


@dataclass
class Reconstruction:
    f: ExpPoly
    order: int
    hankel_rank: int
    charpoly: list[Scalar]
    roots: list[tuple[Scalar, int]]

    def to_json(self) -> dict:
        from .textio import expoly_to_json, format_expoly

        return {
            "expr": format_expoly(self.f),
            "f": expoly_to_json(self.f),
            "order": self.order,
            "hankel_rank": self.hankel_rank,
            "charpoly": [c.to_json() for c in self.charpoly],
            "roots": [{"lambda": r.to_json(), "multiplicity": k} for r, k in self.roots],
            "degree": self.f.degree(),
        }


def reconstruct_gep(g: GridFunction) -> Reconstruction:
    """Recover the exponential polynomial behind samples on a 1-d window.

    Finds the minimal recurrence, checks that its order already settled on the
    first half of the window and equals the Hankel rank, factors the
    characteristic polynomial over Q(i), solves for the polynomial parts and
    re-checks every sample exactly.
    """
    if g.box.d != 1:
        raise ValueError("reconstruct_gep works on one-dimensional windows only")
    seq = list(g.values)
    lo = g.box.lo[0]
    N = len(seq)
    order, conn = berlekamp_massey(seq)
    if order == 0:
        return Reconstruction(ExpPoly.zero(1), 0, 0, [ONE], [])
    half = (N + 1) // 2
    half_order, _ = berlekamp_massey(seq[:half])
    if half_order != order or 2 * order > half:
        raise ReconstructionError(
            "window too small", f"recurrence order {half_order} on {half} samples vs {order} on {N}"
        )
    hr = hankel_rank(seq)
    if hr != order:
        raise ReconstructionError("window too small", f"Hankel rank {hr} differs from recurrence order {order}")
    chi = characteristic_polynomial(conn)
    if not chi[0]:
        raise ReconstructionError("not an exponential polynomial", "characteristic polynomial has the root 0")
    try:
        roots = gaussian_rational_roots(chi)
    except ArithmeticError as exc:
        raise ReconstructionError("root isolation failed", str(exc)) from None
    mults = [(r, root_multiplicity(chi, r)) for r in roots]
    covered = sum(k for _, k in mults)
    if covered != order:
        rest = list(chi)
        for r, k in mults:
            for _ in range(k):
                rest = upoly_divmod(rest, [-r, ONE])[0]
        from .recurrence import format_upoly

        raise ReconstructionError("spectrum outside scalar field", f"irreducible factor {format_upoly(_trim(rest), 'lambda')}")
    mults.sort(key=lambda rk: rk[0].sort_key())
    unknowns = [(r, s) for r, k in mults for s in range(k)]
    xs = [lo + t for t in range(N)]

    def basis_value(r: Scalar, s: int, x: int) -> Scalar:
        return r**x * (x**s)

    A = [[basis_value(r, s, xs[t]) for r, s in unknowns] for t in range(order)]
    coeffs = solve(A, seq[:order])
    raw = {}
    for (r, s), c in zip(unknowns, coeffs):
        raw.setdefault(r, {})[(s,)] = c
    f = ExpPoly(1, [(Exponential((r,)), GenPoly(1, terms)) for r, terms in raw.items()])
    for x, v in zip(xs, seq):
        if f.evaluate((x,)) != v:
            raise ReconstructionError("verification failed", f"sample at x={x} does not match")
    return Reconstruction(f, order, hr, chi, mults)
