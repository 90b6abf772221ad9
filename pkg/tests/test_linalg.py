import pytest
import sympy
from hypothesis import given, strategies as st

from gepkit import kernels
from gepkit.linalg import SingularSystem, det, in_span, rank, rank_certificate, rank_factorization, rref, solve
from gepkit.scalar import Scalar
from strategies import scalars


def sympy_rank(M):
    return sympy.Matrix([[sympy.Rational(v.re.numerator, v.re.denominator)
                          + sympy.I * sympy.Rational(v.im.numerator, v.im.denominator) for v in row]
                         for row in M]).rank(simplify=True)


@st.composite
def low_rank_matrices(draw, gaussian=True):
    """Products A*B with a small inner dimension, so ranks are interesting."""
    elem = scalars if gaussian else st.builds(Scalar, st.integers(-4, 4))
    r = draw(st.integers(1, 5))
    c = draw(st.integers(1, 5))
    k = draw(st.integers(0, 4))
    A = [[draw(elem) for _ in range(k)] for _ in range(r)]
    B = [[draw(elem) for _ in range(c)] for _ in range(k)]
    return [[sum((A[i][t] * B[t][j] for t in range(k)), Scalar(0)) for j in range(c)] for i in range(r)]


@given(low_rank_matrices())
def test_rank_matches_sympy(M):
    assert rank(M) == sympy_rank(M)


@given(low_rank_matrices())
def test_certificate_is_sound(M):
    cert = rank_certificate(M)
    assert cert.check(M)
    assert cert.rank <= min(len(M), len(M[0]))


def test_certificate_check_rejects_forgery():
    M = [[Scalar(1), Scalar(2)], [Scalar(2), Scalar(4)]]
    cert = rank_certificate(M)
    assert cert.rank == 1
    forged = type(cert)(2, (0, 1), (0, 1), cert.shape)
    assert not forged.check(M)


@pytest.mark.skipif(len(kernels.available_backends()) < 2, reason="compiled kernel not built")
@given(low_rank_matrices())
def test_backends_agree(M):
    a = rank_certificate(M, backend="python")
    b = rank_certificate(M, backend="cython")
    assert a == b


def test_backend_selection():
    assert kernels.BACKEND in kernels.available_backends()
    assert "python" in kernels.available_backends()


def test_kernels_direct_integer_case():
    rows = [[2, 4, 6], [1, 2, 3], [0, 1, 1]]
    for name in kernels.available_backends():
        r, pr, pc = kernels.get_backend(name).echelon_int([list(x) for x in rows])
        assert (r, list(pr), list(pc)) == (2, [0, 2], [0, 1])


def test_gaussian_kernel_exact_division():
    # rows differ by a factor of i: rank 1
    re = [[1, 0], [0, -1]]
    im = [[0, 1], [1, 0]]
    for name in kernels.available_backends():
        r, _, _ = kernels.get_backend(name).echelon_gauss(re, im)
        assert r == 1


@given(low_rank_matrices())
def test_rref_and_det_consistent(M):
    R, piv = rref(M)
    assert len(piv) == rank(M)
    if len(M) == len(M[0]):
        assert bool(det(M)) == (rank(M) == len(M))


@given(low_rank_matrices())
def test_rank_factorization_reproduces(M):
    C, F = rank_factorization(M)
    k = len(F)
    assert k == rank(M)
    for i, row in enumerate(M):
        for j, v in enumerate(row):
            assert sum((C[i][t] * F[t][j] for t in range(k)), Scalar(0)) == v


def test_solve_and_singular():
    A = [[Scalar(2), Scalar(1)], [Scalar(1), Scalar(0, 1)]]
    b = [Scalar(3), Scalar(1, 1)]
    x = solve(A, b)
    assert [sum((A[i][j] * x[j] for j in range(2)), Scalar(0)) for i in range(2)] == b
    with pytest.raises(SingularSystem):
        solve([[Scalar(1), Scalar(2)], [Scalar(2), Scalar(4)]], [Scalar(1), Scalar(1)])


def test_in_span():
    basis = [[Scalar(1), Scalar(0), Scalar(1)], [Scalar(0), Scalar(1), Scalar(1)]]
    assert in_span(basis, [Scalar(2), Scalar(3), Scalar(5)])
    assert not in_span(basis, [Scalar(1), Scalar(1), Scalar(0)])


def test_empty_matrix_rank():
    assert rank([]) == 0


needs_ext = pytest.mark.skipif(len(kernels.available_backends()) < 2, reason="compiled kernel not built")


@needs_ext
@given(st.integers(0, 2**20), st.sampled_from([2**30, 2**39, 2**61, 2**62, 2**70]))
def test_backends_agree_near_overflow(seed, scale):
    # large entries force the machine-integer path to bail out mid-elimination
    import random

    rng = random.Random(seed)
    n = rng.randint(2, 6)
    rows = [[rng.randint(-scale, scale) for _ in range(n)] for _ in range(n)]
    rows.append([a + b for a, b in zip(rows[0], rows[1])])
    ims = [[rng.randint(-scale, scale) for _ in range(n)] for _ in range(n + 1)]
    py, cy = kernels.get_backend("python"), kernels.get_backend("cython")
    assert py.echelon_int(rows) == cy.echelon_int(rows)
    assert py.echelon_gauss(rows, ims) == cy.echelon_gauss(rows, ims)
    M = sympy.Matrix(rows)
    assert cy.echelon_int(rows)[0] == M.rank()


def test_pure_fallback_selected_by_environment():
    import os
    import subprocess
    import sys

    env = dict(os.environ, GEPKIT_PURE="1")
    out = subprocess.run([sys.executable, "-c", "import gepkit.kernels as k; print(k.BACKEND)"],
                         env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "python"
