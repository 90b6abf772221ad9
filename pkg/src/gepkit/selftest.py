"""The acceptance battery: seeded, exact, and byte-deterministic in its report."""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from itertools import combinations

from .algebra import Exponential, ExpPoly
from .battery import RATIONAL_LAMBDAS, random_exponential, random_exppoly, random_poly, random_steps
from .decompose import decompose_sum, find_separated_pair, separates, verify_witness
from .diffops import annihilator_for, apply_word, delta, mdelta
from .gridlab import GridBox, GridFunction, Refutation, exponentials_in_span, reconstruct_gep, refute_order2, sample, sum_rank
from .poly import GenPoly
from .scalar import Scalar

BATTERY_SIZE = 50
STEP_ASSIGNMENTS = 5
MAX_N = 5
RECON_WINDOW = GridBox((0,), (49,))


@dataclass
class CriterionResult:
    key: str
    title: str
    passed: bool
    detail: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {"key": self.key, "title": self.title, "passed": self.passed, "detail": self.detail}


def main_battery(seed: int) -> list[ExpPoly]:
    rng = random.Random(f"battery-{seed}")
    return [random_exppoly(rng, d=1 + (i % 2)) for i in range(BATTERY_SIZE)]


def rational_battery(seed: int, size: int = 30) -> list[ExpPoly]:
    rng = random.Random(f"rational-{seed}")
    return [random_exppoly(rng, d=1, pool=RATIONAL_LAMBDAS) for _ in range(size)]


def valid_ns(f: ExpPoly, top: int = MAX_N) -> list[int]:
    return list(range(max(2, f.max_poly_degree() + 1), top + 1))


def expected_order(f: ExpPoly) -> int:
    return f.degree() + (1 if f.has_identity() else 0)


def check_annihilation(seed: int) -> CriterionResult:
    rng = random.Random(f"steps-{seed}")
    cases = failures = 0
    for f in main_battery(seed):
        for _ in range(STEP_ASSIGNMENTS):
            steps = random_steps(rng, f.d, len(f.terms))
            cases += 1
            if not apply_word(f, annihilator_for(f, steps)).is_zero():
                failures += 1
    return CriterionResult("1", "annihilator kills every battery function", failures == 0 and cases >= 250,
                           {"cases": cases, "failures": failures})


def check_order_law(seed: int) -> CriterionResult:
    cases = failures = 0
    bad = []
    for idx, f in enumerate(main_battery(seed)):
        for n in valid_ns(f):
            w = decompose_sum(f, n)
            cases += 1
            ok = w.order == expected_order(f) and verify_witness(f, w).ok
            if not ok:
                failures += 1
                bad.append([idx, n])
    return CriterionResult("2", "decompose_sum order law and symbolic verification", failures == 0,
                           {"cases": cases, "failures": failures, "bad": bad[:5]})


def _rank_profile(f: ExpPoly) -> tuple[int, int, int]:
    dim = expected_order(f)  # dim V_f on Z for a one-variable GEP
    r1 = sum_rank(f, GridBox((0,), (dim,))).rank
    r2 = sum_rank(f, GridBox((0,), (dim + 1,))).rank
    return dim, r1, r2


def check_rank_and_reconstruction(seed: int) -> CriterionResult:
    failures = 0
    rows = []
    for f in rational_battery(seed):
        dim, r1, r2 = _rank_profile(f)
        rec = reconstruct_gep(sample(f, RECON_WINDOW))
        ok = f.degree() <= r1 and r1 == r2 and rec.f == f and rec.f.degree() <= r1
        failures += not ok
        rows.append([f.degree(), r1, r2, rec.order])
    return CriterionResult("3", "deg f <= sum_rank, rank stabilizes, reconstruction exact", failures == 0,
                           {"cases": len(rows), "failures": failures})


def check_round_trip(seed: int) -> CriterionResult:
    fs = rational_battery(seed) + [f for f in main_battery(seed) if f.d == 1]
    failures = 0
    for f in fs:
        n = valid_ns(f)[0]
        k = decompose_sum(f, n).order
        rec = reconstruct_gep(sample(f, RECON_WINDOW))
        if not (rec.f == f and k >= rec.f.degree()):
            failures += 1
    return CriterionResult("4", "witness order bounds the reconstructed degree", failures == 0,
                           {"cases": len(fs), "failures": failures})


def q_N(N: int) -> ExpPoly:
    p = GenPoly(N, [(tuple(2 if i == j else 0 for i in range(N)), Scalar(1)) for j in range(N)])
    return ExpPoly.polynomial(p)


def check_counterexample(seed: int) -> CriterionResult:
    ranks = {N: sum_rank(q_N(N), GridBox.cube(N, 0, 2)).rank for N in range(2, 6)}
    ranks_ok = all(r == N + 2 for N, r in ranks.items())
    ref = refute_order2(q_N(2), 3, GridBox.cube(2, 0, 2))
    ref_ok = isinstance(ref, Refutation) and all(p["restricted_rank"] == 4 for p in ref.pairs)
    pairs_checked = 0
    pairs_ok = True
    for n in range(2, 8):
        subsets = [frozenset(c) for r in range(1, n) for c in combinations(range(1, n + 1), r)]
        for E1 in subsets:
            for E2 in subsets:
                j, k = find_separated_pair(E1, E2, n)
                pairs_checked += 1
                if not (1 <= j < k <= n and separates(E1, j, k) and separates(E2, j, k)):
                    pairs_ok = False
    return CriterionResult("5", "q_N rank growth, order-2 refutation, separated pairs",
                           ranks_ok and ref_ok and pairs_ok,
                           {"ranks": {str(k): v for k, v in ranks.items()}, "refuted": ref_ok,
                            "separated_pairs_checked": pairs_checked, "separation_ok": pairs_ok})


def check_modified_difference_identities(seed: int) -> CriterionResult:
    rng = random.Random(f"e2-{seed}")
    cases = failures = 0
    for i in range(100):
        d = 1 + (i % 2)
        g = random_poly(rng, d, rng.randint(0, 4))
        m = random_exponential(rng, d, p_identity=0.2)
        h = random_steps(rng, d, 1)[0]
        n = rng.randint(1, 3)
        f = ExpPoly.exponential(m, g)
        lhs = f
        rhs = ExpPoly.polynomial(g)
        for _ in range(n):
            lhs = mdelta(lhs, m, h)
            rhs = delta(rhs, h)
        rhs = (rhs * ExpPoly.exponential(m)).scale(m.evaluate(h) ** n)
        cases += 1
        failures += lhs != rhs
    for i in range(100):
        d = 1 + (i % 2)
        p = random_poly(rng, d, rng.randint(0, 4))
        mi = random_exponential(rng, d, p_identity=0.2)
        m = mi if rng.random() < 0.5 else random_exponential(rng, d, p_identity=0.2)
        h = random_steps(rng, d, 1)[0]
        out = mdelta(ExpPoly.exponential(mi, p), m, h)
        cases += 1
        if out.spectrum() - {mi}:
            failures += 1
            continue
        q = out.component(mi)
        ok = q.degree() <= p.degree() and (m != mi or q.degree() < p.degree())
        failures += not ok
    return CriterionResult("6", "modified-difference identity and degree-drop bounds", failures == 0,
                           {"cases": cases, "failures": failures})


SPAN_POOL = [
    Exponential((Scalar(re, im),))
    for re, im in (
        (1, 0), (2, 0), (3, 0), (4, 0), (5, 0), (6, 0), (-1, 0), (-2, 0), (-3, 0), (-5, 0),
        ("1/2", 0), ("1/3", 0), ("2/3", 0), ("3/2", 0), ("-1/2", 0),
        (0, 1), (0, -1), (1, 1), (1, -1), (0, 2),
    )
]


def span_count_instance(rng: random.Random, box: GridBox):
    """A space V of bounded degree, a small space W of grid vectors, and the bound."""
    k = rng.randint(1, 3)
    exps = rng.sample(SPAN_POOL, k)
    mults = [rng.randint(1, 2) for _ in exps]
    total = sum(mults)
    N = total - 1 if any(m.is_identity() for m in exps) else total
    N = max(N, 1)
    v_basis = []
    for m, nm in zip(exps, mults):
        for s in range(nm):
            v_basis.append(ExpPoly.exponential(m, GenPoly(1, [((s,), 1)])))
    n_w = rng.randint(1, 3)
    pts = list(box.points())
    w_basis = []
    outside = [m for m in SPAN_POOL if m not in exps]
    for _ in range(n_w):
        if rng.random() < 0.5:
            # an exponential planted in W pushes the count toward the bound
            w_basis.append(sample(ExpPoly.exponential(rng.choice(outside)), box))
        else:
            w_basis.append(GridFunction(box, tuple(Scalar(rng.randint(-5, 5)) for _ in pts)))
    return v_basis, w_basis, n_w, N


def check_span_count(seed: int) -> CriterionResult:
    rng = random.Random(f"span-count-{seed}")
    box = GridBox((0,), (39,))
    worst = 0
    failures = 0
    for _ in range(20):
        v_basis, w_basis, n_w, N = span_count_instance(rng, box)
        basis = [sample(v, box) for v in v_basis] + w_basis
        count = len(exponentials_in_span(basis, SPAN_POOL, box))
        worst = max(worst, count - (n_w + N + 1))
        failures += count > n_w + N + 1
    return CriterionResult("7", "exponentials in W + V never exceed n + N + 1", failures == 0,
                           {"instances": 20, "failures": failures, "max_excess": worst})


CHECKS = [
    check_annihilation,
    check_order_law,
    check_rank_and_reconstruction,
    check_round_trip,
    check_counterexample,
    check_modified_difference_identities,
    check_span_count,
]


def run_selftest(seed: int = 0) -> list[CriterionResult]:
    return [check(seed) for check in CHECKS]


def format_table(results: list[CriterionResult], seed: int) -> str:
    lines = [f"selftest seed={seed}"]
    for r in results:
        lines.append(f"[{'PASS' if r.passed else 'FAIL'}] {r.key}. {r.title}")
    passed = sum(r.passed for r in results)
    lines.append(f"{passed}/{len(results)} criteria passed")
    return "\n".join(lines) + "\n"
