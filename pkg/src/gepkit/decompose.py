"""Decomposition witnesses for f(x_1 + ... + x_n).

A witness is a list of terms ``(E, u, v)`` with ``u`` depending only on the
blocks in ``E`` and ``v`` only on the rest, such that
``f(x_1 + ... + x_n) = sum u * v``.  Variable indices are 1-based.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations

from .algebra import Exponential, ExpPoly, GenPoly, MultiExpPoly, as_point
from .linalg import rank_factorization
from .scalar import ONE, Scalar
from .textio import expoly_from_json, expoly_to_json


class PreconditionError(ValueError):
    pass


@dataclass(frozen=True)
class WitnessTerm:
    E: frozenset[int]
    u: MultiExpPoly
    v: MultiExpPoly

    def product(self) -> MultiExpPoly:
        return self.u * self.v


@dataclass(frozen=True)
class DecompWitness:
    n: int
    d: int
    terms: tuple[WitnessTerm, ...] = ()
    flags: tuple[str, ...] = field(default=(), compare=False)

    @property
    def order(self) -> int:
        return len(self.terms)

    def total(self) -> MultiExpPoly:
        out = MultiExpPoly.zero(self.n, self.d)
        for t in self.terms:
            out = out + t.product()
        return out

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "d": self.d,
            "order": self.order,
            "terms": [
                {"E": sorted(t.E), "u": expoly_to_json(t.u.f), "v": expoly_to_json(t.v.f)} for t in self.terms
            ],
        }

    @classmethod
    def from_json(cls, obj: dict) -> "DecompWitness":
        n, d = int(obj["n"]), int(obj["d"])
        terms = []
        for t in obj["terms"]:
            u = MultiExpPoly(expoly_from_json(t["u"]), n, d)
            v = MultiExpPoly(expoly_from_json(t["v"]), n, d)
            terms.append(WitnessTerm(frozenset(int(e) for e in t["E"]), u, v))
        return cls(n, d, tuple(terms))


def monom_split(p: GenPoly) -> list[GenPoly]:
    """Homogeneous components of p; entry i is the degree-i part (possibly zero)."""
    return [p.homogeneous_part(i) for i in range(p.degree() + 1)]


def _blocks_of(mono: tuple[int, ...], d: int) -> set[int]:
    return {k // d + 1 for k, e in enumerate(mono) if e}


def _term_witness(m: Exponential, p: GenPoly, n: int) -> list[WitnessTerm]:
    """Witness for (p*m)(x_1+...+x_n) with deg p + 1 terms."""
    d = m.d
    nd = n * d
    k = p.degree()
    lifted = MultiExpPoly.of_sum(ExpPoly.polynomial(p), n).f.component(Exponential.identity(nd))
    buckets: dict[int, dict] = {j: {} for j in range(1, k + 2)}
    const = lifted.constant_term()
    for mono, c in lifted.items():
        if not any(mono):
            continue
        used = _blocks_of(mono, d)
        j = next(b for b in range(1, n + 1) if b not in used)
        buckets[j][mono] = c
    if const:
        share = const / (k + 1)
        zero = (0,) * nd
        for j in buckets:
            buckets[j][zero] = share
    out = []
    for j, mono_map in buckets.items():
        if not mono_map:
            continue
        # u = m(x_j); v = bucket_j * prod_{i != j} m(x_i)
        u_lam = [ONE] * nd
        u_lam[(j - 1) * d : j * d] = m.lam
        v_lam = list(m.lam) * n
        v_lam[(j - 1) * d : j * d] = [ONE] * d
        u = MultiExpPoly(ExpPoly.exponential(Exponential(tuple(u_lam))), n, d)
        v = MultiExpPoly(ExpPoly.exponential(Exponential(tuple(v_lam)), GenPoly(nd, mono_map)), n, d)
        out.append(WitnessTerm(frozenset({j}), u, v))
    return out


def decompose_sum(f: ExpPoly, n: int) -> DecompWitness:
    """Constructive decomposition of f(x_1 + ... + x_n).

    Each term p*m contributes deg p + 1 products: the expansion of
    p(x_1 + ... + x_n) is routed monomial by monomial to the bucket of the
    smallest variable it misses, the constant is shared evenly, and the
    exponential factor splits across blocks.
    """
    if n < 2:
        raise PreconditionError("decompose_sum needs n >= 2")
    n0 = f.max_poly_degree()
    if n <= n0:
        raise PreconditionError(f"decompose_sum needs n > max deg p_i = {n0}, got n = {n}")
    terms: list[WitnessTerm] = []
    for m, p in f.terms:
        terms.extend(_term_witness(m, p, n))
    return DecompWitness(n, f.d, tuple(terms))


def decompose_first_block(f: ExpPoly, n: int) -> DecompWitness:
    """Witness splitting off x_1 alone; valid for every n >= 2.

    The expansion of p(x_1 + ... + x_n) is grouped by its x_1-monomial, so
    each term p*m costs one product per monomial of degree <= deg p in d
    variables.  For d = 1 this matches decompose_sum's count without its
    bound on n.
    """
    if n < 2:
        raise PreconditionError("decompose_first_block needs n >= 2")
    d = f.d
    nd = n * d
    terms: list[WitnessTerm] = []
    for m, p in f.terms:
        lifted = MultiExpPoly.of_sum(ExpPoly.polynomial(p), n).f.component(Exponential.identity(nd))
        groups: dict[tuple[int, ...], dict] = {}
        for mono, c in lifted.items():
            head = mono[:d]
            groups.setdefault(head, {})[(0,) * d + mono[d:]] = c
        u_lam = list(m.lam) + [ONE] * (nd - d)
        v_lam = [ONE] * d + list(m.lam) * (n - 1)
        for head in sorted(groups, key=lambda h: (-sum(h), tuple(-e for e in h))):
            u_poly = GenPoly(nd, [(head + (0,) * (nd - d), ONE)])
            u = MultiExpPoly(ExpPoly.exponential(Exponential(tuple(u_lam)), u_poly), n, d)
            v = MultiExpPoly(ExpPoly.exponential(Exponential(tuple(v_lam)), GenPoly(nd, groups[head])), n, d)
            terms.append(WitnessTerm(frozenset({1}), u, v))
    return DecompWitness(n, d, tuple(terms))


@dataclass
class WitnessReport:
    ok: bool
    identity_ok: bool
    residual: MultiExpPoly
    violations: list[str]

    def to_json(self) -> dict:
        return {
            "ok": self.ok,
            "identity_ok": self.identity_ok,
            "residual": expoly_to_json(self.residual.f),
            "violations": self.violations,
        }


def dependence_violations(w: DecompWitness) -> list[str]:
    problems = []
    full = set(range(1, w.n + 1))
    for idx, t in enumerate(w.terms):
        if not t.E or not t.E < full:
            problems.append(f"term {idx}: E={sorted(t.E)} is not a nonempty proper subset of 1..{w.n}")
            continue
        if (t.u.n, t.u.d, t.v.n, t.v.d) != (w.n, w.d, w.n, w.d):
            problems.append(f"term {idx}: block structure differs from the witness")
            continue
        bad_u = t.u.support() - t.E
        bad_v = t.v.support() & t.E
        if bad_u:
            problems.append(f"term {idx}: u depends on {sorted(bad_u)} outside E={sorted(t.E)}")
        if bad_v:
            problems.append(f"term {idx}: v depends on {sorted(bad_v)} inside E={sorted(t.E)}")
    return problems


def verify_witness(f: ExpPoly, w: DecompWitness) -> WitnessReport:
    if f.d != w.d:
        raise ValueError(f"dimension mismatch: f on Z^{f.d}, witness blocks of size {w.d}")
    violations = dependence_violations(w)
    residual = MultiExpPoly.of_sum(f, w.n)
    for t in w.terms:
        if (t.u.n, t.u.d, t.v.n, t.v.d) == (w.n, w.d, w.n, w.d):
            residual = residual - t.product()
    identity_ok = residual.is_zero() and not any("block structure" in v for v in violations)
    return WitnessReport(identity_ok and not violations, identity_ok, residual, violations)


def separated_refactor(g: MultiExpPoly, E: frozenset[int]) -> list[WitnessTerm]:
    """Exact minimal-length split ``g = sum u_r v_r`` across the bipartition (E, rest)."""
    n, d = g.n, g.d
    in_E = [False] * (n * d)
    for b in E:
        for j in range(d):
            in_E[(b - 1) * d + j] = True

    def split(seq, fill):
        a = tuple(x if in_E[k] else fill for k, x in enumerate(seq))
        b = tuple(fill if in_E[k] else x for k, x in enumerate(seq))
        return a, b

    rows: dict = {}
    cols: dict = {}
    entries: dict = {}
    for m, p in g.f.terms:
        lam_a, lam_b = split(m.lam, ONE)
        for mono, c in p.items():
            mono_a, mono_b = split(mono, 0)
            ra = rows.setdefault((lam_a, mono_a), len(rows))
            cb = cols.setdefault((lam_b, mono_b), len(cols))
            entries[(ra, cb)] = entries.get((ra, cb), Scalar(0)) + c
    if not rows:
        return []
    matrix = [[entries.get((i, j), Scalar(0)) for j in range(len(cols))] for i in range(len(rows))]
    left, right = rank_factorization(matrix)
    row_keys = sorted(rows, key=rows.get)
    col_keys = sorted(cols, key=cols.get)
    nd = n * d

    def build(keys, coeffs) -> MultiExpPoly:
        acc: dict[Exponential, dict] = {}
        for (lam, mono), c in zip(keys, coeffs):
            if c:
                slot = acc.setdefault(Exponential(lam), {})
                slot[mono] = slot.get(mono, Scalar(0)) + c
        return MultiExpPoly(ExpPoly(nd, [(mm, GenPoly(nd, pm)) for mm, pm in acc.items()]), n, d)

    out = []
    for r in range(len(right)):
        u = build(row_keys, [row[r] for row in left])
        v = build(col_keys, right[r])
        out.append(WitnessTerm(frozenset(E), u, v))
    return out


def restrict_witness(w: DecompWitness, fixed: dict[int, object]) -> DecompWitness:
    """Substitute fixed values for some variables and re-index the free ones.

    Terms keeping variables on both sides survive as they are.  A term whose
    u (or v) loses all its variables turns constant and is absorbed into the
    other factor; such leftovers are folded into the bipartition class of an
    existing term and that class is re-split exactly.  If that still costs
    more terms than ``w`` had, the restricted function (a translate of the
    original one, evaluated at the sum of the free variables) is decomposed
    afresh.  Flags: ``ABSORBED`` when leftovers were folded, ``REBUILT`` when
    the fresh construction was used, ``ORDER_GREW`` if the order still rose.
    """
    fixed = {int(k): as_point(v, w.d) for k, v in fixed.items()}
    free = [b for b in range(1, w.n + 1) if b not in fixed]
    if len(free) < 2:
        raise PreconditionError("restriction must leave at least two free variables")
    new_index = {b: i + 1 for i, b in enumerate(free)}
    n2 = len(free)
    kept: list[WitnessTerm] = []
    leftover = MultiExpPoly.zero(n2, w.d)
    for t in w.terms:
        u = t.u.restrict(fixed)
        v = t.v.restrict(fixed)
        E2 = frozenset(new_index[b] for b in t.E if b in new_index)
        if 0 < len(E2) < n2:
            if not (u.is_zero() or v.is_zero()):
                kept.append(WitnessTerm(E2, u, v))
        else:
            leftover = leftover + u * v
    flags: list[str] = []
    if not leftover.is_zero():
        flags.append("ABSORBED")
        kept = _absorb(kept, leftover)
        if len(kept) > w.order:
            rebuilt = _rebuild(kept, n2, w.d)
            if rebuilt is not None and len(rebuilt) < len(kept):
                flags.append("REBUILT")
                kept = rebuilt
        if len(kept) > w.order:
            flags.append("ORDER_GREW")
    return DecompWitness(n2, w.d, tuple(kept), tuple(flags))


def _rebuild(terms: list[WitnessTerm], n: int, d: int) -> list[WitnessTerm] | None:
    """A fresh constructive witness when the terms sum to some g(x_1 + ... + x_n)."""
    total = MultiExpPoly.zero(n, d)
    for t in terms:
        total = total + t.product()
    g = total.restrict({b: (0,) * d for b in range(2, n + 1)}).f
    if MultiExpPoly.of_sum(g, n) != total:
        return None
    options = [list(decompose_first_block(g, n).terms)]
    if n > g.max_poly_degree():
        options.append(list(decompose_sum(g, n).terms))
    return min(options, key=len)


def _canonical_side(E: frozenset[int], n: int) -> frozenset[int]:
    # a bipartition class is named by the side containing variable 1
    return E if 1 in E else frozenset(range(1, n + 1)) - E


def _absorb(kept: list[WitnessTerm], leftover: MultiExpPoly) -> list[WitnessTerm]:
    n = leftover.n
    classes: dict[frozenset[int], list[WitnessTerm]] = {}
    for t in kept:
        classes.setdefault(_canonical_side(t.E, n), []).append(t)
    candidates = list(classes) or [frozenset({1})]
    best = None
    for side in candidates:
        group = classes.get(side, [])
        total = leftover
        for t in group:
            total = total + t.product()
        resplit = separated_refactor(total, side)
        others = [t for t in kept if _canonical_side(t.E, n) != side]
        trial = others + resplit
        if best is None or len(trial) < len(best):
            best = trial
    return best


def pad_witness(w: DecompWitness) -> DecompWitness:
    """Witness for f(x_1 + ... + x_{n+1}) obtained by replacing x_n with x_n + x_{n+1}."""
    n2 = w.n + 1
    images = [[b] for b in range(1, w.n)] + [[w.n, n2]]
    terms = []
    for t in w.terms:
        u = t.u.substitute_blocks(images, n2)
        v = t.v.substitute_blocks(images, n2)
        E = set(t.E)
        if w.n in E:
            E.add(n2)
        terms.append(WitnessTerm(frozenset(E), u, v))
    return DecompWitness(n2, w.d, tuple(terms))


def separates(E: frozenset[int] | set[int], j: int, k: int) -> bool:
    return (j in E) != (k in E)


def find_separated_pair(E1, E2, n: int) -> tuple[int, int]:
    """The lexicographically first pair j < k split by both E1 and E2."""
    E1, E2 = frozenset(E1), frozenset(E2)
    full = frozenset(range(1, n + 1))
    if n < 2:
        raise PreconditionError("need n >= 2")
    for E in (E1, E2):
        if not E or not E < full:
            raise PreconditionError(f"{sorted(E)} is not a nonempty proper subset of 1..{n}")
    for j, k in combinations(range(1, n + 1), 2):
        if separates(E1, j, k) and separates(E2, j, k):
            return j, k
    raise AssertionError("no separated pair; this cannot happen for valid inputs")


def bipartitions(n: int) -> list[frozenset[int]]:
    """Each unordered bipartition of 1..n once, named by the side containing 1."""
    rest = range(2, n + 1)
    out = []
    for r in range(0, n - 1):
        for extra in combinations(rest, r):
            out.append(frozenset({1, *extra}))
    return out
