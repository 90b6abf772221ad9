"""Seeded random generators for property checks and the self-test battery."""

from __future__ import annotations

import random
from fractions import Fraction

from .algebra import Exponential, ExpPoly
from .poly import GenPoly
from .scalar import Scalar

RATIONAL_LAMBDAS = [Scalar(v) for v in (2, 3, -1, -2, Fraction(1, 2), Fraction(3, 2), Fraction(-1, 3), 4)]
GAUSSIAN_LAMBDAS = RATIONAL_LAMBDAS + [Scalar(0, 1), Scalar(1, 1), Scalar(2, -1), Scalar(Fraction(1, 2), Fraction(1, 2))]


def random_poly(rng: random.Random, nvars: int, degree: int, max_terms: int = 4) -> GenPoly:
    """A polynomial of exactly the given total degree with small integer coefficients."""
    if degree < 0:
        return GenPoly.zero(nvars)

    def mono(k):
        e = [0] * nvars
        for _ in range(k):
            e[rng.randrange(nvars)] += 1
        return tuple(e)

    def coef():
        return Scalar(rng.choice([-3, -2, -1, 1, 2, 3]))

    while True:
        terms = [(mono(degree), coef())]
        for _ in range(rng.randrange(max_terms)):
            terms.append((mono(rng.randrange(degree + 1)), coef()))
        p = GenPoly(nvars, terms)
        if p.degree() == degree:
            return p


def random_exponential(rng: random.Random, d: int, pool=GAUSSIAN_LAMBDAS, p_identity: float = 0.35) -> Exponential:
    if rng.random() < p_identity:
        return Exponential.identity(d)
    while True:
        m = Exponential(tuple(rng.choice(pool + [Scalar(1)]) for _ in range(d)))
        if not m.is_identity():
            return m


def random_exppoly(
    rng: random.Random,
    d: int,
    max_terms: int = 3,
    max_deg: int = 3,
    pool=GAUSSIAN_LAMBDAS,
    min_terms: int = 1,
) -> ExpPoly:
    """Distinct exponentials, each with a polynomial of random degree <= max_deg."""
    k = rng.randint(min_terms, max_terms)
    exps: list[Exponential] = []
    while len(exps) < k:
        m = random_exponential(rng, d, pool)
        if m not in exps:
            exps.append(m)
    return ExpPoly(d, [(m, random_poly(rng, d, rng.randint(0, max_deg))) for m in exps])


def step_pool(d: int) -> list[tuple[int, ...]]:
    """The deterministic step pool {+-e_j, e_j + e_k}."""
    def e(j):
        return tuple(1 if i == j else 0 for i in range(d))

    pool = []
    for j in range(d):
        pool.append(e(j))
        pool.append(tuple(-v for v in e(j)))
    for j in range(d):
        for k in range(j, d):
            pool.append(tuple(a + b for a, b in zip(e(j), e(k))))
    return pool


def random_steps(rng: random.Random, d: int, count: int) -> list[tuple[int, ...]]:
    pool = step_pool(d)
    return [rng.choice(pool) for _ in range(count)]
