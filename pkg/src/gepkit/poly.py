"""Sparse multivariate polynomials over Q(i) in coordinates t1..td."""

from __future__ import annotations

from itertools import product
from math import comb
from typing import Iterable, Mapping, Sequence

from .scalar import ONE, ZERO, Scalar

Monomial = tuple[int, ...]


class GenPoly:
    """A generalized polynomial on Z^d, i.e. an ordinary polynomial in the coordinates.

    Stored as ``{exponent tuple: nonzero Scalar}``. Treat instances as immutable.
    """

    __slots__ = ("nvars", "_terms", "_hash")

    def __init__(self, nvars: int, terms: Mapping[Monomial, Scalar] | Iterable[tuple[Monomial, Scalar]] = ()):
        if nvars < 0:
            raise ValueError("nvars must be nonnegative")
        self.nvars = nvars
        items = terms.items() if isinstance(terms, Mapping) else terms
        acc: dict[Monomial, Scalar] = {}
        for mono, coef in items:
            mono = tuple(mono)
            if len(mono) != nvars or any(e < 0 for e in mono):
                raise ValueError(f"bad monomial {mono} for {nvars} variables")
            coef = Scalar.of(coef)
            prev = acc.get(mono)
            acc[mono] = coef if prev is None else prev + coef
        self._terms = {m: c for m, c in acc.items() if c}
        self._hash = None

    @classmethod
    def _wrap(cls, nvars: int, terms: dict[Monomial, Scalar]) -> "GenPoly":
        # terms must already be free of zeros
        obj = object.__new__(cls)
        obj.nvars = nvars
        obj._terms = terms
        obj._hash = None
        return obj

    @classmethod
    def zero(cls, nvars: int) -> "GenPoly":
        return cls._wrap(nvars, {})

    @classmethod
    def constant(cls, nvars: int, c) -> "GenPoly":
        c = Scalar.of(c)
        return cls._wrap(nvars, {(0,) * nvars: c} if c else {})

    @classmethod
    def variable(cls, nvars: int, j: int) -> "GenPoly":
        """The coordinate t_{j+1} (``j`` is 0-based)."""
        mono = tuple(1 if k == j else 0 for k in range(nvars))
        return cls._wrap(nvars, {mono: ONE})

    # -- inspection -------------------------------------------------------

    def items(self):
        return self._terms.items()

    def coeff(self, mono: Monomial) -> Scalar:
        return self._terms.get(tuple(mono), ZERO)

    def __len__(self):
        return len(self._terms)

    def __bool__(self):
        return bool(self._terms)

    def degree(self) -> int:
        if not self._terms:
            return -1
        return max(sum(m) for m in self._terms)

    def is_constant(self) -> bool:
        return all(not any(m) for m in self._terms)

    def constant_term(self) -> Scalar:
        return self._terms.get((0,) * self.nvars, ZERO)

    def used_vars(self) -> set[int]:
        used = set()
        for mono in self._terms:
            used.update(k for k, e in enumerate(mono) if e)
        return used

    def sorted_items(self) -> list[tuple[Monomial, Scalar]]:
        """Highest total degree first, then reverse-lex on exponents."""
        return sorted(self._terms.items(), key=lambda mc: (sum(mc[0]), mc[0]), reverse=True)

    # -- arithmetic -------------------------------------------------------

    def _check(self, other: "GenPoly"):
        if self.nvars != other.nvars:
            raise ValueError(f"variable count mismatch: {self.nvars} vs {other.nvars}")

    def __add__(self, other: "GenPoly") -> "GenPoly":
        self._check(other)
        out = dict(self._terms)
        for m, c in other._terms.items():
            prev = out.get(m)
            if prev is None:
                out[m] = c
            else:
                s = prev + c
                if s:
                    out[m] = s
                else:
                    del out[m]
        return GenPoly._wrap(self.nvars, out)

    def __neg__(self) -> "GenPoly":
        return GenPoly._wrap(self.nvars, {m: -c for m, c in self._terms.items()})

    def __sub__(self, other: "GenPoly") -> "GenPoly":
        return self + (-other)

    def scale(self, c) -> "GenPoly":
        c = Scalar.of(c)
        if not c:
            return GenPoly.zero(self.nvars)
        if c.is_one():
            return self
        return GenPoly._wrap(self.nvars, {m: v * c for m, v in self._terms.items()})

    def __mul__(self, other):
        if not isinstance(other, GenPoly):
            return self.scale(other)
        self._check(other)
        out: dict[Monomial, Scalar] = {}
        for m1, c1 in self._terms.items():
            for m2, c2 in other._terms.items():
                m = tuple(a + b for a, b in zip(m1, m2))
                v = c1 * c2
                prev = out.get(m)
                out[m] = v if prev is None else prev + v
        return GenPoly._wrap(self.nvars, {m: c for m, c in out.items() if c})

    __rmul__ = scale

    def __pow__(self, k: int) -> "GenPoly":
        if k < 0:
            raise ValueError("negative power of a polynomial")
        result = GenPoly.constant(self.nvars, 1)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    # -- evaluation and substitution --------------------------------------

    def evaluate(self, x: Sequence[int]) -> Scalar:
        if len(x) != self.nvars:
            raise ValueError(f"point of dimension {len(x)} for {self.nvars} variables")
        total = ZERO
        for mono, c in self._terms.items():
            v = 1
            for xi, e in zip(x, mono):
                if e:
                    v *= xi**e
            total = total + c * v
        return total

    def shift(self, h: Sequence[int]) -> "GenPoly":
        """Return the polynomial x -> p(x + h)."""
        if len(h) != self.nvars:
            raise ValueError(f"step of dimension {len(h)} for {self.nvars} variables")
        if not any(h):
            return self
        out: dict[Monomial, Scalar] = {}
        for mono, c in self._terms.items():
            # (t_j + h_j)^e_j = sum_a C(e_j, a) h_j^(e_j - a) t_j^a
            factors = [
                [(a, comb(e, a) * hj ** (e - a)) for a in range(e + 1)] if hj else [(e, 1)]
                for e, hj in zip(mono, h)
            ]
            for combo in product(*factors):
                w = 1
                for _, k in combo:
                    w *= k
                if not w:
                    continue
                m = tuple(a for a, _ in combo)
                v = c * w
                prev = out.get(m)
                out[m] = v if prev is None else prev + v
        return GenPoly._wrap(self.nvars, {m: c for m, c in out.items() if c})

    def substitute(self, images: Sequence["GenPoly"], nvars: int) -> "GenPoly":
        """Compose with t_j -> images[j]; every image lives in ``nvars`` variables."""
        if len(images) != self.nvars:
            raise ValueError("need one image per variable")
        powers: list[list[GenPoly]] = [[GenPoly.constant(nvars, 1)] for _ in images]
        result = GenPoly.zero(nvars)
        for mono, c in self._terms.items():
            term = GenPoly.constant(nvars, c)
            for j, e in enumerate(mono):
                if not e:
                    continue
                cache = powers[j]
                while len(cache) <= e:
                    cache.append(cache[-1] * images[j])
                term = term * cache[e]
            result = result + term
        return result

    def homogeneous_part(self, k: int) -> "GenPoly":
        return GenPoly._wrap(self.nvars, {m: c for m, c in self._terms.items() if sum(m) == k})

    # -- equality ---------------------------------------------------------

    def __eq__(self, other):
        if isinstance(other, GenPoly):
            return self.nvars == other.nvars and self._terms == other._terms
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.nvars, frozenset(self._terms.items())))
        return self._hash

    def __repr__(self):
        from .textio import format_poly

        return f"GenPoly({format_poly(self)!r}, nvars={self.nvars})"
