"""Exact linear algebra over Q(i).

Rank goes through the fraction-free kernel after clearing denominators;
solving, determinants and rank factorizations use plain Gauss-Jordan on
Scalars, which also serves as the independent route for checking ranks.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import lcm
from typing import Sequence

from . import kernels
from .scalar import ONE, ZERO, Scalar

Matrix = Sequence[Sequence[Scalar]]


@dataclass(frozen=True)
class RankCertificate:
    """Rank plus the rows/columns of a nonsingular pivot minor."""

    rank: int
    pivot_rows: tuple[int, ...]
    pivot_cols: tuple[int, ...]
    shape: tuple[int, int] = (0, 0)
    flags: tuple[str, ...] = field(default=("EXACT",))

    def check(self, matrix: Matrix) -> bool:
        """Recompute the pivot minor's determinant independently."""
        if self.rank > min(self.shape):
            return False
        if len(self.pivot_rows) != self.rank or len(self.pivot_cols) != self.rank:
            return False
        minor = [[matrix[i][j] for j in self.pivot_cols] for i in self.pivot_rows]
        return self.rank == 0 or bool(det(minor))

    def to_json(self) -> dict:
        return {
            "rank": self.rank,
            "pivot_rows": list(self.pivot_rows),
            "pivot_cols": list(self.pivot_cols),
            "shape": list(self.shape),
            "flags": list(self.flags),
        }


def to_gaussian_integers(matrix: Matrix) -> tuple[list[list[int]], list[list[int]] | None]:
    """Scale by the lcm of all denominators; returns ``(re, im)`` with im None when real."""
    dens = set()
    real = True
    for row in matrix:
        for v in row:
            dens.add(v.re.denominator)
            if v.im:
                real = False
                dens.add(v.im.denominator)
    den = lcm(*dens) if dens else 1
    re_rows = [[v.re.numerator * (den // v.re.denominator) for v in row] for row in matrix]
    if real:
        return re_rows, None
    return re_rows, [[v.im.numerator * (den // v.im.denominator) for v in row] for row in matrix]


def rank_certificate(matrix: Matrix, backend: str | None = None) -> RankCertificate:
    nr = len(matrix)
    nc = len(matrix[0]) if nr else 0
    if not nr or not nc:
        return RankCertificate(0, (), (), (nr, nc))
    mod = kernels if backend is None else kernels.get_backend(backend)
    re_rows, im_rows = to_gaussian_integers(matrix)
    if im_rows is None:
        r, pr, pc = mod.echelon_int(re_rows)
    else:
        r, pr, pc = mod.echelon_gauss(re_rows, im_rows)
    return RankCertificate(r, tuple(pr), tuple(pc), (nr, nc))


def rank(matrix: Matrix) -> int:
    return rank_certificate(matrix).rank


def rref(matrix: Matrix) -> tuple[list[list[Scalar]], list[int]]:
    """Reduced row echelon form over Q(i) and the pivot columns."""
    M = [list(row) for row in matrix]
    nr = len(M)
    nc = len(M[0]) if nr else 0
    pivots = []
    r = 0
    for c in range(nc):
        if r == nr:
            break
        k = next((i for i in range(r, nr) if M[i][c]), None)
        if k is None:
            continue
        M[r], M[k] = M[k], M[r]
        inv = M[r][c].inverse()
        M[r] = [v * inv for v in M[r]]
        for i in range(nr):
            if i != r and M[i][c]:
                a = M[i][c]
                M[i] = [x - a * y for x, y in zip(M[i], M[r])]
        pivots.append(c)
        r += 1
    return M[:r], pivots


def det(matrix: Matrix) -> Scalar:
    M = [list(row) for row in matrix]
    n = len(M)
    if any(len(row) != n for row in M):
        raise ValueError("determinant of a non-square matrix")
    out = ONE
    for c in range(n):
        k = next((i for i in range(c, n) if M[i][c]), None)
        if k is None:
            return ZERO
        if k != c:
            M[c], M[k] = M[k], M[c]
            out = -out
        p = M[c][c]
        out = out * p
        inv = p.inverse()
        for i in range(c + 1, n):
            if M[i][c]:
                a = M[i][c] * inv
                M[i] = [x - a * y for x, y in zip(M[i], M[c])]
    return out


class SingularSystem(ValueError):
    pass


def solve(A: Matrix, b: Sequence[Scalar]) -> list[Scalar]:
    """The unique solution of A x = b, or SingularSystem."""
    nr = len(A)
    nc = len(A[0]) if nr else 0
    aug = [list(row) + [b[i]] for i, row in enumerate(A)]
    R, piv = rref(aug)
    if nc in piv:
        raise SingularSystem("inconsistent system")
    if len(piv) < nc:
        raise SingularSystem("underdetermined system")
    return [R[i][nc] for i in range(nc)]


def rank_factorization(matrix: Matrix) -> tuple[list[list[Scalar]], list[list[Scalar]]]:
    """``matrix = left @ right`` with inner dimension equal to the rank.

    ``left`` holds the pivot columns of ``matrix``; ``right`` is its RREF.
    """
    R, piv = rref(matrix)
    left = [[row[c] for c in piv] for row in matrix]
    return left, R


def in_span(basis: Sequence[Sequence[Scalar]], v: Sequence[Scalar]) -> bool:
    if not basis:
        return not any(v)
    cols = [list(b) for b in basis]
    r0 = rank([list(row) for row in zip(*cols)])
    r1 = rank([list(row) for row in zip(*cols, v)])
    return r0 == r1
