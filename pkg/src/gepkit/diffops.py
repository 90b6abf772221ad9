"""Plain and modified difference operators and annihilating operator words."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .algebra import Exponential, ExpPoly, GroupElem, as_point


def delta(f: ExpPoly, h) -> ExpPoly:
    """x -> f(x + h) - f(x)."""
    return f.translate(h) - f


def mdelta(f: ExpPoly, m: Exponential, h) -> ExpPoly:
    """x -> f(x + h) - m(h) f(x)."""
    if m.d != f.d:
        raise ValueError(f"dimension mismatch: exponential d={m.d}, function d={f.d}")
    h = as_point(h, f.d)
    return f.translate(h) - f.scale(m.evaluate(h))


@dataclass(frozen=True)
class OpFactor:
    """One factor ``D^power`` where D is plain (``exp is None``) or modified by ``exp``."""

    step: GroupElem
    power: int = 1
    exp: Exponential | None = None

    def __post_init__(self):
        object.__setattr__(self, "step", as_point(self.step))
        if self.power < 1:
            raise ValueError("operator powers must be positive")
        if self.exp is not None and self.exp.d != len(self.step):
            raise ValueError("step and exponential dimensions differ")

    def apply(self, f: ExpPoly) -> ExpPoly:
        if len(self.step) != f.d:
            raise ValueError(f"dimension mismatch: step d={len(self.step)}, function d={f.d}")
        for _ in range(self.power):
            if f.is_zero():
                break
            f = delta(f, self.step) if self.exp is None else mdelta(f, self.exp, self.step)
        return f

    def to_json(self) -> dict:
        out = {"mode": "plain" if self.exp is None else "modified", "step": list(self.step), "power": self.power}
        if self.exp is not None:
            out["lambda"] = [v.to_json() for v in self.exp.lam]
        return out


@dataclass(frozen=True)
class DiffOpWord:
    factors: tuple[OpFactor, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "factors", tuple(self.factors))
        dims = {len(fa.step) for fa in self.factors}
        if len(dims) > 1:
            raise ValueError("operator word mixes dimensions")

    def __len__(self):
        return len(self.factors)

    def to_json(self) -> list[dict]:
        return [fa.to_json() for fa in self.factors]

    def __str__(self):
        # D_(h)^k for plain factors, D[lambda]_(h)^k for modified ones
        parts = []
        for fa in self.factors:
            h = ",".join(str(v) for v in fa.step)
            op = "D" if fa.exp is None else "D[" + ", ".join(str(v) for v in fa.exp.lam) + "]"
            parts.append(f"{op}_({h})^{fa.power}")
        return " ".join(parts) if parts else "identity"


def apply_word(f: ExpPoly, w: DiffOpWord) -> ExpPoly:
    for fa in w.factors:
        f = fa.apply(f)
    return f


def annihilator_for(f: ExpPoly, steps: Sequence) -> DiffOpWord:
    """One modified factor (m_i, h_i, 1 + deg p_i) per term of f; kills f for any steps."""
    if len(steps) < len(f.terms):
        raise ValueError(f"need one step per spectrum element ({len(f.terms)}), got {len(steps)}")
    return DiffOpWord(
        tuple(OpFactor(as_point(h, f.d), 1 + p.degree(), m) for (m, p), h in zip(f.terms, steps))
    )
