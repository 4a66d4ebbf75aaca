"""Closed-form bounds on keys and transformed programs, and checks against them.

All arithmetic is on Python ints and Fractions.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .automorphism import AutomorphismPair
from .intmath import ceil_log2
from .poly import Metrics, PolyMap, metrics
from .program import StraightLineProgram


@dataclass(frozen=True)
class TransformBounds:
    degree: int
    coeff_norm: int
    max_monomials: int


def transform_bounds(mp: Metrics, mphi: Metrics, mpsi: Metrics) -> TransformBounds:
    """Bounds on ``d``, ``|.|`` and ``m`` of ``φ∘f∘ψ`` for steps ``f`` with metrics ``mp``."""
    dp, dphi, dpsi = mp.degree, mphi.degree, mpsi.degree
    return TransformBounds(
        degree=dphi * dp * dpsi,
        coeff_norm=mphi.coeff_norm * mphi.max_monomials * mp.max_monomials**dphi
        * mp.coeff_norm**dphi * mpsi.coeff_norm ** (dp * dphi),
        max_monomials=mphi.max_monomials * mp.max_monomials**dphi * mpsi.max_monomials ** (dp * dphi),
    )


def program_metrics(p: StraightLineProgram | Sequence[PolyMap]) -> Metrics:
    """Largest ``d``, ``|.|`` and ``m`` over the program's steps."""
    steps = p.steps if isinstance(p, StraightLineProgram) else tuple(p)
    if not steps:
        return Metrics(0, 0, 0, Fraction(0))
    ms = [metrics(s) for s in steps]
    return Metrics(
        max(m.degree for m in ms),
        max(m.coeff_norm for m in ms),
        max(m.max_monomials for m in ms),
        max(m.avg_monomials for m in ms),
    )


def bit_width_estimate(b: int, key_metrics: Metrics) -> int:
    """``B = d(φ) b + ceil(log2(|φ| m(φ)))``."""
    if b < 1:
        raise ValueError("b must be >= 1")
    return key_metrics.degree * b + ceil_log2(key_metrics.coeff_norm * key_metrics.max_monomials)


def k1_specialization(beta_t: int, mu_t: int, beta_a: int, mu_a: int, delta: int,
                      mu_bar_t=1, mu_bar_a=1) -> dict:
    """Keygen bounds for a single stage ``A0∘T∘A1`` of degree ``δ``."""
    return {
        "degree": delta,
        "coeff_norm": beta_t * mu_t * (beta_a * mu_a) ** (delta + 1),
        "max_monomials": mu_t * mu_a ** (delta + 1),
        "avg_monomials": Fraction(mu_bar_t) * Fraction(mu_bar_a) ** (delta + 1),
    }


@dataclass(frozen=True)
class BoundRow:
    subject: str
    field: str
    actual: int | Fraction
    bound: int | Fraction
    gated: bool = True

    @property
    def satisfied(self) -> bool:
        return self.actual <= self.bound


@dataclass(frozen=True)
class BoundsReport:
    rows: tuple[BoundRow, ...]
    bit_width_B: int | None = None

    @property
    def ok(self) -> bool:
        return all(r.satisfied for r in self.rows if r.gated)

    @property
    def satisfied(self) -> dict[str, bool]:
        return {f"{r.subject}.{r.field}": r.satisfied for r in self.rows}

    def __bool__(self) -> bool:
        return self.ok

    def as_table(self) -> str:
        lines = []
        for r in self.rows:
            mark = "ok" if r.satisfied else ("VIOLATED" if r.gated else "over")
            lines.append(f"{r.subject}.{r.field:<14} actual={r.actual}  bound={r.bound}  {mark}")
        if self.bit_width_B is not None:
            lines.append(f"bit_width_B        {self.bit_width_B}")
        lines.append(f"result             {'PASS' if self.ok else 'FAIL'}")
        return "\n".join(lines)

    def to_json(self) -> dict:
        return {
            "ok": self.ok,
            "bit_width_B": self.bit_width_B,
            "rows": [
                {"subject": r.subject, "field": r.field, "actual": str(r.actual), "bound": str(r.bound),
                 "satisfied": r.satisfied, "gated": r.gated}
                for r in self.rows
            ],
        }


def _metric_rows(subject: str, actual: Metrics, degree, coeff, mono, avg=None) -> list[BoundRow]:
    rows = [
        BoundRow(subject, "degree", actual.degree, degree),
        BoundRow(subject, "coeff_norm", actual.coeff_norm, coeff),
        BoundRow(subject, "max_monomials", actual.max_monomials, mono),
    ]
    if avg is not None:
        rows.append(BoundRow(subject, "avg_monomials", actual.avg_monomials, Fraction(avg), gated=False))
    return rows


def keygen_bound_check(pair: AutomorphismPair, d: int, b: int, m: int, m_bar=None, *, bits: int | None = None) -> BoundsReport:
    """Degree, coefficient and monomial bounds on both φ and ψ.

    m̄ rows are recorded but not gated: the average bound is a statement about
    the mean over many keys, not about each key.
    """
    rows = []
    for name, mp in (("phi", pair.phi), ("psi", pair.psi)):
        rows += _metric_rows(name, metrics(mp), d, b, m, m_bar)
    bw = bit_width_estimate(bits, metrics(pair.phi)) if bits else None
    return BoundsReport(tuple(rows), bw)


def transform_bound_check(
    original_steps: Iterable[PolyMap],
    rewritten_steps: Iterable[PolyMap],
    pair: AutomorphismPair,
) -> BoundsReport:
    """Each rewritten step against the bounds computed from the original program."""
    original_steps = tuple(original_steps)
    bound = transform_bounds(program_metrics(original_steps), metrics(pair.phi), metrics(pair.psi))
    rows = []
    for i, step in enumerate(rewritten_steps, 1):
        rows += _metric_rows(f"step{i}", metrics(step), bound.degree, bound.coeff_norm, bound.max_monomials)
    return BoundsReport(tuple(rows))
