"""Exponentials, generalized exponential polynomials and their canonical form.

Everything lives on the group Z^d.  An :class:`ExpPoly` is a finite sum
``sum_i p_i * m_i`` with distinct exponentials ``m_i`` and nonzero polynomials
``p_i``; instances are always canonical, so structural equality is equality
of functions.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Iterable, Sequence

from .poly import GenPoly
from .scalar import ONE, ZERO, Scalar

GroupElem = tuple[int, ...]


class MalformedExponential(ValueError):
    pass


def as_point(x, d: int | None = None) -> GroupElem:
    if isinstance(x, int):
        x = (x,)
    x = tuple(int(v) for v in x)
    if d is not None and len(x) != d:
        raise ValueError(f"dimension mismatch: expected {d} coordinates, got {len(x)}")
    return x


def add_points(x: Sequence[int], y: Sequence[int]) -> GroupElem:
    if len(x) != len(y):
        raise ValueError("dimension mismatch")
    return tuple(a + b for a, b in zip(x, y))


@dataclass(frozen=True)
class Exponential:
    """The multiplicative function x -> prod_j lam[j] ** x[j] on Z^d."""

    lam: tuple[Scalar, ...]

    def __post_init__(self):
        lam = tuple(Scalar.of(v) for v in self.lam)
        if not lam:
            raise MalformedExponential("exponential needs at least one coordinate")
        for j, v in enumerate(lam):
            if not v:
                raise MalformedExponential(f"zero lambda in coordinate {j + 1}")
        object.__setattr__(self, "lam", lam)

    @classmethod
    def of(cls, *values) -> "Exponential":
        if len(values) == 1 and isinstance(values[0], (list, tuple)):
            values = tuple(values[0])
        return cls(tuple(values))

    @classmethod
    def identity(cls, d: int) -> "Exponential":
        return cls((ONE,) * d)

    @property
    def d(self) -> int:
        return len(self.lam)

    def is_identity(self) -> bool:
        return all(v.is_one() for v in self.lam)

    def evaluate(self, x) -> Scalar:
        x = as_point(x, self.d)
        out = ONE
        for v, k in zip(self.lam, x):
            if k:
                out = out * v**k
        return out

    def __mul__(self, other: "Exponential") -> "Exponential":
        if self.d != other.d:
            raise ValueError("dimension mismatch")
        return Exponential(tuple(a * b for a, b in zip(self.lam, other.lam)))

    def sort_key(self):
        return tuple(v.sort_key() for v in self.lam)

    def __str__(self):
        return "exp(" + ", ".join(str(v) for v in self.lam) + ")"


def _sorted_terms(acc: dict[Exponential, GenPoly]) -> tuple[tuple[Exponential, GenPoly], ...]:
    return tuple(sorted(((m, p) for m, p in acc.items() if p), key=lambda mp: mp[0].sort_key()))


class ExpPoly:
    """Canonical generalized exponential polynomial on Z^d."""

    __slots__ = ("d", "terms", "_index", "_hash")

    def __init__(self, d: int, terms: Iterable[tuple[Exponential, GenPoly]] = ()):
        f = canonicalize(terms, d=d)
        self.d = f.d
        self.terms = f.terms
        self._index = f._index
        self._hash = None

    @classmethod
    def _from_dict(cls, d: int, acc: dict[Exponential, GenPoly]) -> "ExpPoly":
        obj = object.__new__(cls)
        obj.d = d
        obj.terms = _sorted_terms(acc)
        obj._index = dict(obj.terms)
        obj._hash = None
        return obj

    # -- constructors -----------------------------------------------------

    @classmethod
    def zero(cls, d: int) -> "ExpPoly":
        return cls._from_dict(d, {})

    @classmethod
    def constant(cls, d: int, c) -> "ExpPoly":
        return cls._from_dict(d, {Exponential.identity(d): GenPoly.constant(d, c)})

    @classmethod
    def exponential(cls, m: Exponential, p: GenPoly | None = None) -> "ExpPoly":
        p = GenPoly.constant(m.d, 1) if p is None else p
        return cls._from_dict(m.d, {m: p})

    @classmethod
    def polynomial(cls, p: GenPoly) -> "ExpPoly":
        return cls._from_dict(p.nvars, {Exponential.identity(p.nvars): p})

    # -- inspection -------------------------------------------------------

    def component(self, m: Exponential) -> GenPoly:
        return self._index.get(m) or GenPoly.zero(self.d)

    def spectrum(self) -> frozenset[Exponential]:
        return frozenset(self._index)

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def degree(self) -> int:
        if not self.terms:
            return -1
        total = sum(1 + p.degree() for _, p in self.terms)
        if any(m.is_identity() for m, _ in self.terms):
            total -= 1
        return total

    def max_poly_degree(self) -> int:
        return max((p.degree() for _, p in self.terms), default=-1)

    def has_identity(self) -> bool:
        return any(m.is_identity() for m, _ in self.terms)

    def is_constant(self) -> bool:
        return all(m.is_identity() and p.is_constant() for m, p in self.terms)

    # -- arithmetic -------------------------------------------------------

    def _check(self, other: "ExpPoly"):
        if self.d != other.d:
            raise ValueError(f"dimension mismatch: {self.d} vs {other.d}")

    def __add__(self, other: "ExpPoly") -> "ExpPoly":
        self._check(other)
        acc = dict(self._index)
        for m, p in other.terms:
            prev = acc.get(m)
            acc[m] = p if prev is None else prev + p
        return ExpPoly._from_dict(self.d, acc)

    def __neg__(self) -> "ExpPoly":
        return ExpPoly._from_dict(self.d, {m: -p for m, p in self.terms})

    def __sub__(self, other: "ExpPoly") -> "ExpPoly":
        return self + (-other)

    def scale(self, c) -> "ExpPoly":
        c = Scalar.of(c)
        return ExpPoly._from_dict(self.d, {m: p.scale(c) for m, p in self.terms})

    def __mul__(self, other):
        if not isinstance(other, ExpPoly):
            return self.scale(other)
        self._check(other)
        acc: dict[Exponential, GenPoly] = {}
        for m1, p1 in self.terms:
            for m2, p2 in other.terms:
                m = m1 * m2
                p = p1 * p2
                prev = acc.get(m)
                acc[m] = p if prev is None else prev + p
        return ExpPoly._from_dict(self.d, acc)

    def __rmul__(self, c):
        return self.scale(c)

    # -- function view ----------------------------------------------------

    def evaluate(self, x) -> Scalar:
        x = as_point(x, self.d)
        total = ZERO
        for m, p in self.terms:
            total = total + p.evaluate(x) * m.evaluate(x)
        return total

    __call__ = evaluate

    def translate(self, h) -> "ExpPoly":
        """The function x -> f(x + h)."""
        h = as_point(h, self.d)
        return ExpPoly._from_dict(self.d, {m: p.shift(h).scale(m.evaluate(h)) for m, p in self.terms})

    # -- equality ---------------------------------------------------------

    def __eq__(self, other):
        if isinstance(other, ExpPoly):
            return self.d == other.d and self.terms == other.terms
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.d, self.terms))
        return self._hash

    def __str__(self):
        from .textio import format_expoly

        return format_expoly(self)

    def __repr__(self):
        return f"ExpPoly({self}, d={self.d})"


def canonicalize(raw: Iterable[tuple[Exponential, GenPoly]], d: int | None = None) -> ExpPoly:
    """Merge duplicate exponentials, drop zero polynomials, sort deterministically.

    Exponentials with a zero lambda component are rejected when constructed;
    raw tuples of scalars are accepted and validated here as well.
    """
    acc: dict[Exponential, GenPoly] = {}
    for m, p in raw:
        if not isinstance(m, Exponential):
            m = Exponential(tuple(m))
        if d is None:
            d = m.d
        if m.d != d or p.nvars != d:
            raise ValueError(f"dimension mismatch in term: exponential d={m.d}, poly nvars={p.nvars}, expected {d}")
        prev = acc.get(m)
        acc[m] = p if prev is None else prev + p
    if d is None:
        raise ValueError("cannot infer dimension of an empty term list; pass d")
    return ExpPoly._from_dict(d, acc)


def degree(f: ExpPoly) -> int:
    return f.degree()


def evaluate(f: ExpPoly, x) -> Scalar:
    return f.evaluate(x)


def translate(f: ExpPoly, h) -> ExpPoly:
    return f.translate(h)


def spectrum(f: ExpPoly) -> frozenset[Exponential]:
    return f.spectrum()


def linear_combination(coeffs: Sequence, fs: Sequence[ExpPoly]) -> ExpPoly:
    if not fs:
        raise ValueError("empty combination")
    out = ExpPoly.zero(fs[0].d)
    for c, f in zip(coeffs, fs):
        out = out + f.scale(c)
    return out


def generic_combination(fs: Sequence[ExpPoly], rng_seed: int = 0) -> tuple[list[Scalar], ExpPoly]:
    """A combination of ``fs`` keeping the whole spectrum and every top degree.

    For each exponential m in the union of spectra, the m-component of the
    result reaches the largest degree seen among the inputs.  Coefficients are
    drawn from {-B..B} minus 0, with B doubling after each failed batch.
    """
    fs = list(fs)
    if not fs or all(f.is_zero() for f in fs):
        raise ValueError("generic_combination needs at least one nonzero function")
    d = fs[0].d
    for f in fs:
        if f.d != d:
            raise ValueError("dimension mismatch")
    target: dict[Exponential, int] = {}
    for f in fs:
        for m, p in f.terms:
            target[m] = max(target.get(m, -1), p.degree())

    def good(combo: ExpPoly) -> bool:
        return all(combo.component(m).degree() == k for m, k in target.items())

    if len(fs) == 1:
        return [ONE], fs[0]
    rng = random.Random(rng_seed)
    bound = 2
    while True:
        for _ in range(8):
            coeffs = [Scalar(rng.choice([k for k in range(-bound, bound + 1) if k])) for _ in fs]
            combo = linear_combination(coeffs, fs)
            if good(combo):
                return coeffs, combo
        bound *= 2


class MultiExpPoly:
    """An ExpPoly on Z^(n*d) read as a function of n block variables x_1..x_n in Z^d.

    Block indices in the public API are 1-based.
    """

    __slots__ = ("f", "n", "d")

    def __init__(self, f: ExpPoly, n: int, d: int):
        if f.d != n * d:
            raise ValueError(f"ExpPoly over Z^{f.d} does not have {n} blocks of size {d}")
        self.f = f
        self.n = n
        self.d = d

    @classmethod
    def zero(cls, n: int, d: int) -> "MultiExpPoly":
        return cls(ExpPoly.zero(n * d), n, d)

    @classmethod
    def constant(cls, n: int, d: int, c) -> "MultiExpPoly":
        return cls(ExpPoly.constant(n * d, c), n, d)

    @classmethod
    def embed(cls, g: ExpPoly, block: int, n: int) -> "MultiExpPoly":
        """The function (x_1..x_n) -> g(x_block)."""
        d = g.d
        lo = (block - 1) * d
        acc = {}
        for m, p in g.terms:
            lam = [ONE] * (n * d)
            lam[lo : lo + d] = m.lam
            images = [GenPoly.variable(n * d, lo + j) for j in range(d)]
            acc[Exponential(tuple(lam))] = p.substitute(images, n * d)
        return cls(ExpPoly._from_dict(n * d, acc), n, d)

    @classmethod
    def of_sum(cls, g: ExpPoly, n: int) -> "MultiExpPoly":
        """The function (x_1..x_n) -> g(x_1 + ... + x_n)."""
        d = g.d
        nd = n * d
        images = []
        for j in range(d):
            img = GenPoly.zero(nd)
            for b in range(n):
                img = img + GenPoly.variable(nd, b * d + j)
            images.append(img)
        acc = {}
        for m, p in g.terms:
            acc[Exponential(m.lam * n)] = p.substitute(images, nd)
        return cls(ExpPoly._from_dict(nd, acc), n, d)

    def _block_slice(self, b: int) -> slice:
        return slice((b - 1) * self.d, b * self.d)

    def depends_on(self, j: int) -> bool:
        if not 1 <= j <= self.n:
            raise ValueError(f"block {j} out of range 1..{self.n}")
        sl = self._block_slice(j)
        for m, p in self.f.terms:
            if not all(v.is_one() for v in m.lam[sl]):
                return True
            for mono in (mono for mono, _ in p.items()):
                if any(mono[sl]):
                    return True
        return False

    def support(self) -> frozenset[int]:
        return frozenset(j for j in range(1, self.n + 1) if self.depends_on(j))

    def is_zero(self) -> bool:
        return self.f.is_zero()

    def evaluate(self, xs: Sequence) -> Scalar:
        if len(xs) != self.n:
            raise ValueError(f"expected {self.n} block values")
        flat = []
        for x in xs:
            flat.extend(as_point(x, self.d))
        return self.f.evaluate(flat)

    def _same(self, other: "MultiExpPoly"):
        if (self.n, self.d) != (other.n, other.d):
            raise ValueError("block structure mismatch")

    def __add__(self, other):
        self._same(other)
        return MultiExpPoly(self.f + other.f, self.n, self.d)

    def __sub__(self, other):
        self._same(other)
        return MultiExpPoly(self.f - other.f, self.n, self.d)

    def __neg__(self):
        return MultiExpPoly(-self.f, self.n, self.d)

    def __mul__(self, other):
        if isinstance(other, MultiExpPoly):
            self._same(other)
            return MultiExpPoly(self.f * other.f, self.n, self.d)
        return MultiExpPoly(self.f.scale(other), self.n, self.d)

    def restrict(self, fixed: dict[int, GroupElem]) -> "MultiExpPoly":
        """Substitute fixed values for some blocks; the rest keep their order."""
        d = self.d
        fixed = {int(b): as_point(v, d) for b, v in fixed.items()}
        for b in fixed:
            if not 1 <= b <= self.n:
                raise ValueError(f"block {b} out of range 1..{self.n}")
        free = [b for b in range(1, self.n + 1) if b not in fixed]
        n2 = len(free)
        nd2 = n2 * d
        images: list[GenPoly] = []
        new_pos = {b: i for i, b in enumerate(free)}
        for b in range(1, self.n + 1):
            for j in range(d):
                if b in fixed:
                    images.append(GenPoly.constant(nd2, fixed[b][j]))
                else:
                    images.append(GenPoly.variable(nd2, new_pos[b] * d + j))
        acc: dict[Exponential, GenPoly] = {}
        for m, p in self.f.terms:
            factor = ONE
            lam = []
            for b in range(1, self.n + 1):
                part = m.lam[(b - 1) * d : b * d]
                if b in fixed:
                    for v, k in zip(part, fixed[b]):
                        if k:
                            factor = factor * v**k
                else:
                    lam.extend(part)
            q = p.substitute(images, nd2).scale(factor)
            key = Exponential(tuple(lam)) if lam else None
            if key is None:
                raise ValueError("restriction must leave at least one free block")
            prev = acc.get(key)
            acc[key] = q if prev is None else prev + q
        return MultiExpPoly(ExpPoly._from_dict(nd2, acc), n2, d)

    def substitute_blocks(self, images: Sequence[Sequence[int]], n_new: int) -> "MultiExpPoly":
        """Replace each block x_b by a sum of new blocks ``sum_{c in images[b]} y_c``.

        ``images`` is indexed by old block (0-based list); entries are 1-based new
        block indices.  Used for padding witnesses to more variables.
        """
        d = self.d
        nd2 = n_new * d
        poly_images = []
        for blocks in images:
            for j in range(d):
                img = GenPoly.zero(nd2)
                for c in blocks:
                    img = img + GenPoly.variable(nd2, (c - 1) * d + j)
                poly_images.append(img)
        acc: dict[Exponential, GenPoly] = {}
        for m, p in self.f.terms:
            lam = [ONE] * nd2
            for b, blocks in enumerate(images):
                part = m.lam[b * d : (b + 1) * d]
                for c in blocks:
                    for j in range(d):
                        lam[(c - 1) * d + j] = lam[(c - 1) * d + j] * part[j]
            key = Exponential(tuple(lam))
            q = p.substitute(poly_images, nd2)
            prev = acc.get(key)
            acc[key] = q if prev is None else prev + q
        return MultiExpPoly(ExpPoly._from_dict(nd2, acc), n_new, d)

    def __eq__(self, other):
        if isinstance(other, MultiExpPoly):
            return (self.n, self.d) == (other.n, other.d) and self.f == other.f
        return NotImplemented

    def __hash__(self):
        return hash((self.n, self.d, self.f))

    def __str__(self):
        from .textio import format_expoly

        return format_expoly(self.f, block=self.d if self.n > 1 else None)

    def __repr__(self):
        return f"MultiExpPoly({self}, n={self.n}, d={self.d})"
