"""Linear recurrences over Q(i): Berlekamp-Massey, Hankel ranks, Gaussian-rational roots.

Univariate polynomials here are coefficient lists, lowest degree first.
"""

from __future__ import annotations

from math import lcm
from typing import Sequence

import mpmath

from .linalg import rank
from .scalar import ONE, ZERO, Scalar

UPoly = list[Scalar]


def _trim(p: UPoly) -> UPoly:
    p = list(p)
    while p and not p[-1]:
        p.pop()
    return p


def upoly_eval(p: UPoly, x: Scalar) -> Scalar:
    out = ZERO
    for c in reversed(p):
        out = out * x + c
    return out


def upoly_divmod(a: UPoly, b: UPoly) -> tuple[UPoly, UPoly]:
    a, b = _trim(a), _trim(b)
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    if len(a) < len(b):
        return [], a
    inv = b[-1].inverse()
    q = [ZERO] * (len(a) - len(b) + 1)
    r = list(a)
    for k in range(len(q) - 1, -1, -1):
        c = r[k + len(b) - 1] * inv
        q[k] = c
        if c:
            for i, bc in enumerate(b):
                r[k + i] = r[k + i] - c * bc
    return _trim(q), _trim(r[: len(b) - 1])


def upoly_monic(p: UPoly) -> UPoly:
    p = _trim(p)
    inv = p[-1].inverse()
    return [c * inv for c in p]


def upoly_gcd(a: UPoly, b: UPoly) -> UPoly:
    a, b = _trim(a), _trim(b)
    while b:
        a, b = b, upoly_divmod(a, b)[1]
    return upoly_monic(a) if a else []


def upoly_derivative(p: UPoly) -> UPoly:
    return _trim([c * k for k, c in enumerate(p)][1:])


def berlekamp_massey(seq: Sequence[Scalar]) -> tuple[int, UPoly]:
    """Shortest recurrence ``s[t] + c1 s[t-1] + ... + cL s[t-L] = 0``.

    Returns ``(L, [1, c1, ..., cL])`` (the connection polynomial, padded to L+1).
    """
    C: UPoly = [ONE]
    B: UPoly = [ONE]
    L = 0
    shift = 1
    b = ONE
    for t, s in enumerate(seq):
        disc = s
        for i in range(1, L + 1):
            if i < len(C) and C[i]:
                disc = disc + C[i] * seq[t - i]
        if not disc:
            shift += 1
            continue
        coef = disc / b
        T = list(C)
        need = len(B) + shift
        if len(C) < need:
            C = C + [ZERO] * (need - len(C))
        for i, bc in enumerate(B):
            C[i + shift] = C[i + shift] - coef * bc
        if 2 * L <= t:
            L = t + 1 - L
            B = T
            b = disc
            shift = 1
        else:
            shift += 1
    C = C[: L + 1] + [ZERO] * max(0, L + 1 - len(C))
    return L, C


def characteristic_polynomial(connection: UPoly) -> UPoly:
    """lambda^L + c1 lambda^(L-1) + ... + cL, lowest degree first."""
    return list(reversed(connection))


def hankel_rank(seq: Sequence[Scalar]) -> int:
    """Rank of the largest square Hankel matrix [s[i+j]] fitting in the sequence."""
    h = (len(seq) + 1) // 2
    if h == 0:
        return 0
    return rank([[seq[i + j] for j in range(h)] for i in range(h)])


def _gaussian_integer_poly(p: UPoly) -> list[tuple[int, int]]:
    den = 1
    for c in p:
        den = lcm(den, c.re.denominator, c.im.denominator)
    return [(int(c.re * den), int(c.im * den)) for c in p]


def gaussian_rational_roots(p: UPoly) -> list[Scalar]:
    """All distinct roots of p lying in Q(i).

    Candidates come from high-precision numerical roots of the square-free
    part: with integer coefficients and leading coefficient a, every root r in
    Q(i) has a*r in Z[i], so each candidate is rounded there and then confirmed
    by exact evaluation.  Nothing is accepted without the exact check.
    """
    p = _trim(p)
    if len(p) <= 1:
        return []
    sqf = upoly_divmod(p, upoly_gcd(p, upoly_derivative(p)))[0] if len(p) > 2 else p
    ints = _gaussian_integer_poly(sqf)
    lead = Scalar(*ints[-1])
    bits = max(abs(a).bit_length() + abs(b).bit_length() for a, b in ints)
    found: list[Scalar] = []
    deg = len(ints) - 1
    if deg == 1:
        return [-sqf[0] / sqf[1]]
    with mpmath.workdps(max(50, bits // 2 + 30)):
        coeffs = [mpmath.mpc(a, b) for a, b in reversed(ints)]
        approx = None
        for steps in (400, 4000):
            try:
                approx = mpmath.polyroots(coeffs, maxsteps=steps, extraprec=4 * bits + 100)
                break
            except mpmath.libmp.NoConvergence:
                continue
        if approx is None:
            raise ArithmeticError("root isolation did not converge")
        for z in approx:
            w = z * mpmath.mpc(*ints[-1])
            cand = Scalar(int(mpmath.nint(w.real)), int(mpmath.nint(w.imag))) / lead
            if cand not in found and not upoly_eval(sqf, cand):
                found.append(cand)
    return found


def root_multiplicity(p: UPoly, r: Scalar) -> int:
    lin = [-r, ONE]
    k = 0
    q = _trim(p)
    while q:
        quo, rem = upoly_divmod(q, lin)
        if rem:
            break
        k += 1
        q = quo
    return k


def format_upoly(p: UPoly, var: str = "x") -> str:
    from .poly import GenPoly
    from .textio import format_poly

    g = GenPoly(1, [((k,), c) for k, c in enumerate(p) if c])
    return format_poly(g).replace("t1", var)
