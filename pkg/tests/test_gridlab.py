import random

import pytest
import sympy
from hypothesis import given, settings, strategies as st

from gepkit import Exponential, ExpPoly, GenPoly, Scalar
from gepkit.battery import RATIONAL_LAMBDAS, random_exppoly
from gepkit.decompose import PreconditionError, decompose_sum
from gepkit.gridlab import (
    GridBox,
    GridFunction,
    Inconclusive,
    ReconstructionError,
    Refutation,
    exponentials_in_span,
    min_order_bounds,
    reconstruct_gep,
    refute_order2,
    sample,
    sum_matrix,
    sum_rank,
)
from gepkit.selftest import SPAN_POOL, span_count_instance, q_N
from strategies import E


def box(*ranges):
    return GridBox(tuple(a for a, _ in ranges), tuple(b for _, b in ranges))


def values(g):
    return [v for v in g.values]


# -- boxes and samples ------------------------------------------------------


def test_box_parse():
    assert GridBox.parse("0..2", 3) == GridBox.cube(3, 0, 2)
    assert GridBox.parse("-1..1,0..4") == box((-1, 1), (0, 4))
    with pytest.raises(ValueError):
        GridBox.parse("0..2,0..3", 3)
    with pytest.raises(ValueError):
        GridBox.parse("3")
    with pytest.raises(ValueError):
        GridBox((2,), (1,))


def test_sample_examples():
    assert values(sample(E("exp(2)"), box((0, 2)))) == [1, 2, 4]
    assert values(sample(ExpPoly.zero(1), box((0, 3)))) == [0] * 4
    assert values(sample(E("t1^2 + t2^2"), GridBox.cube(2, 0, 1))) == [0, 1, 1, 2]


def test_grid_function_volume_check():
    with pytest.raises(ValueError):
        GridFunction(box((0, 2)), (Scalar(1),))


# -- sum_rank ------------------------------------------------------------------


def sympy_sum_rank(f, b):
    M = sum_matrix(f, b)
    return sympy.Matrix([[sympy.nsimplify(str(v.re)) + sympy.I * sympy.nsimplify(str(v.im)) for v in row] for row in M]).rank()


def test_sum_rank_exponential():
    assert sum_rank(E("exp(2)"), box((0, 4))).rank == 1


def test_sum_rank_square():
    f, b = E("t1^2"), box((0, 3))
    assert sum_rank(f, b).rank == 3 == sympy_sum_rank(f, b)


@pytest.mark.parametrize("N", [2, 3, 4])
def test_sum_rank_q_n(N):
    f, b = q_N(N), GridBox.cube(N, 0, 2)
    cert = sum_rank(f, b)
    assert cert.rank == N + 2
    assert cert.check(sum_matrix(f, b))


@pytest.mark.parametrize("N", [2, 3])
def test_sum_rank_q_n_oracle(N):
    # q(x+y) = q(x) + q(y) + 2<x,y>: an explicit rank-(N+2) factorization
    x = sympy.symbols(f"x:{N}")
    y = sympy.symbols(f"y:{N}")
    q = lambda v: sum(t**2 for t in v)
    expr = sympy.expand(q([a + b for a, b in zip(x, y)]))
    rhs = q(x) * 1 + 1 * q(y) + sum(2 * a * b for a, b in zip(x, y))
    assert sympy.expand(expr - rhs) == 0
    assert sympy_sum_rank(q_N(N), GridBox.cube(N, 0, 2)) == N + 2


@given(st.integers(0, 10**6))
@settings(max_examples=25)
def test_degree_bounded_by_sum_rank(seed):
    f = random_exppoly(random.Random(seed), d=1, pool=RATIONAL_LAMBDAS)
    dim = f.degree() + (1 if f.has_identity() else 0)
    r1 = sum_rank(f, box((0, dim))).rank
    r2 = sum_rank(f, box((0, dim + 1))).rank
    assert f.degree() <= r1 == r2


def test_dimension_mismatch():
    with pytest.raises(ValueError):
        sum_rank(E("t1"), GridBox.cube(2, 0, 1))


# -- exponentials in span -------------------------------------------------------


def m(*lam):
    return Exponential.of(*lam)


def test_span_membership():
    b = box((0, 4))
    basis = [sample(E("exp(2)"), b), sample(E("exp(3)"), b)]
    assert exponentials_in_span(basis, [m(2), m(3), m(5)], b) == [m(2), m(3)]


def test_span_of_sum_contains_neither():
    b = box((0, 4))
    assert exponentials_in_span([sample(E("exp(2) + exp(3)"), b)], [m(2), m(3)], b) == []


def test_span_empty_basis():
    assert exponentials_in_span([], [m(2)], box((0, 3))) == []


@pytest.mark.parametrize("seed", range(20))
def test_span_count_bound(seed):
    rng = random.Random(seed)
    b = box((0, 39))
    v_basis, w_basis, n_w, N = span_count_instance(rng, b)
    basis = [sample(v, b) for v in v_basis] + w_basis
    assert len(exponentials_in_span(basis, SPAN_POOL, b)) <= n_w + N + 1


# -- order-2 refutation and bounds -----------------------------------------------------


def test_refute_q2():
    res = refute_order2(q_N(2), 3, GridBox.cube(2, 0, 2))
    assert isinstance(res, Refutation)
    assert {p["restricted_rank"] for p in res.pairs} == {4}
    assert len(res.pairs) == 3 * 4 // 2  # unordered pairs of the 3 bipartitions


@pytest.mark.parametrize("text, rank", [("exp(2)", 1), ("t1", 2)])
def test_refute_inconclusive(text, rank):
    res = refute_order2(E(text), 3, box((0, 3)))
    assert isinstance(res, Inconclusive)
    assert {p["restricted_rank"] for p in res.pairs} == {rank}


def test_refute_needs_three_variables():
    with pytest.raises(PreconditionError):
        refute_order2(E("t1"), 2, box((0, 2)))


def test_bounds_exponential():
    b = min_order_bounds(E("exp(2)"), 2, box((0, 2)))
    assert (b.lower, b.upper) == (1, 1) and b.flags == ["EXACT"]


def test_bounds_square():
    b = min_order_bounds(E("t1^2"), 2, box((0, 3)))
    assert (b.lower, b.upper) == (3, 3)


def test_bounds_q2_three_variables():
    b = min_order_bounds(q_N(2), 3, GridBox.cube(2, 0, 2))
    assert b.lower >= 3 and b.upper == 3 and "EXACT" in b.flags


def test_bounds_open_case_runs_heuristic():
    # n = 3 with x: refutation is inconclusive, the construction gives 2
    b = min_order_bounds(E("t1"), 3, box((0, 1)), k_max=2)
    assert (b.lower, b.upper) == (1, 2)
    assert "OPEN" in b.flags and "HEURISTIC" in b.flags
    report = b.certificates["heuristic"]
    assert report["label"] == "HEURISTIC"
    assert [o["k"] for o in report["orders"]] == [1]
    assert not report["orders"][0]["feasible"]


def test_bounds_first_block_route_for_small_n():
    b = min_order_bounds(E("t1^3*exp(2) + t1"), 2, box((0, 6)))
    assert b.certificates["upper"]["route"] == "first_block"
    assert (b.lower, b.upper) == (6, 6)


def test_bounds_seeded_reproducible():
    a = min_order_bounds(E("t1"), 3, box((0, 1)), k_max=2, seed=3)
    b = min_order_bounds(E("t1"), 3, box((0, 1)), k_max=2, seed=3)
    assert a.to_json() == b.to_json()


def test_bounds_zero():
    b = min_order_bounds(ExpPoly.zero(1), 3, box((0, 2)))
    assert (b.lower, b.upper) == (0, 0)


# -- reconstruction --------------------------------------------------------------------


@pytest.mark.parametrize(
    "text, hi, order, roots",
    [
        ("exp(2)", 9, 1, {2: 1}),
        ("t1", 9, 2, {1: 2}),
        ("t1*exp(2) + 1", 11, 3, {2: 2, 1: 1}),
        ("t1^3*exp(-3/2) + 5*t1", 29, 6, {Scalar("-3/2"): 4, 1: 2}),
        ("(2-i)*exp(1+i) + t1*exp(i)", 19, 3, {Scalar(1, 1): 1, Scalar(0, 1): 2}),
    ],
)
def test_reconstruct(text, hi, order, roots):
    f = E(text)
    rec = reconstruct_gep(sample(f, box((0, hi))))
    assert rec.f == f
    assert rec.order == order == rec.hankel_rank
    assert {r: k for r, k in rec.roots} == {Scalar.of(r): k for r, k in roots.items()}


def test_reconstruct_offset_window():
    f = E("t1^2*exp(1/3) - 2")
    assert reconstruct_gep(sample(f, box((-7, 8)))).f == f


def test_reconstruct_zero():
    assert reconstruct_gep(sample(ExpPoly.zero(1), box((0, 5)))).f.is_zero()


def test_window_too_small():
    f = E("exp(2) + exp(3) + exp(5) + exp(7)")
    with pytest.raises(ReconstructionError) as info:
        reconstruct_gep(sample(f, box((0, 5))))
    assert info.value.reason == "window too small"


def test_irrational_spectrum_reported():
    # s(t) = 2 s(t-2): sqrt(2)^t + (-sqrt(2))^t
    seq = [Scalar(2 ** (t // 2)) for t in range(12)]
    with pytest.raises(ReconstructionError) as info:
        reconstruct_gep(GridFunction(box((0, 11)), tuple(seq)))
    assert info.value.reason == "spectrum outside scalar field"
    assert "lambda^2 - 2" in info.value.detail


def test_root_zero_rejected():
    seq = [Scalar(1)] + [Scalar(0)] * 9
    with pytest.raises(ReconstructionError) as info:
        reconstruct_gep(GridFunction(box((0, 9)), tuple(seq)))
    assert info.value.reason == "not an exponential polynomial"


def test_two_dimensional_windows_rejected():
    with pytest.raises(ValueError):
        reconstruct_gep(sample(E("t1*t2"), GridBox.cube(2, 0, 3)))


@given(st.integers(0, 10**6))
@settings(max_examples=25)
def test_reconstruction_round_trip(seed):
    f = random_exppoly(random.Random(seed), d=1, pool=RATIONAL_LAMBDAS)
    rec = reconstruct_gep(sample(f, box((0, 49))))
    assert rec.f == f
    n = max(2, f.max_poly_degree() + 1)
    assert decompose_sum(f, n).order >= rec.f.degree()
