"""Tame automorphism keys ``φ = A_0 ∘ T_1 ∘ A_1 ∘ ... ∘ T_k ∘ A_k``.

:func:`plan_tame` turns the requested bounds ``(d, b, m, m̄)`` into stage
degrees and per-factor budgets; :func:`gen_tame` draws the factors and returns
a pair ``(φ, ψ)`` that has been checked symbolically before it is returned.

The coefficient and monomial bounds follow from ``N(S∘R) <= N(S) N(R)^d(S)``
where ``N`` is the largest per-component sum of absolute coefficients, and
``m(S∘R) <= m(S) m(R)^d(S)``.  Unrolling the chain for ψ visits the stage
degrees in reverse order, so the planner enforces both orders.
"""

from __future__ import annotations

import hashlib
import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations_with_replacement
from typing import Sequence

from ..intmath import iroot
from ..poly import PolyMap, Polynomial, compose, metrics, polymap_to_json
from ..rng import Rng
from .matrices import gen_affine
from .triangular import (
    TriangularParams,
    gen_segmented_triangular,
    invert_segmented_triangular,
    invert_triangular,
)


class PlanInfeasible(ValueError):
    """No integer budgets satisfy one of the planning inequalities."""

    def __init__(self, inequality: str, detail: str = ""):
        self.inequality = inequality
        super().__init__(f"infeasible: {inequality}" + (f" ({detail})" if detail else ""))


class GenerationError(RuntimeError):
    pass


def _cumulative(degrees: Sequence[int]) -> tuple[int, ...]:
    out, acc = [], 1
    for dg in degrees:
        acc *= dg
        out.append(acc)
    return tuple(out)


def _sigma(degrees: Sequence[int]) -> int:
    return 1 + sum(_cumulative(degrees)[:-1])


@dataclass(frozen=True)
class TamePlan:
    n: int
    k: int
    stage_degrees: tuple[int, ...]
    beta_t: int
    beta_a: int
    mu_t: int
    mu_a: int
    mu_bar_t: Fraction
    mu_bar_a: Fraction
    requested: dict = field(default_factory=dict, compare=False)
    affine_offsets: bool = True

    @property
    def cumulative(self) -> tuple[int, ...]:
        return _cumulative(self.stage_degrees)

    @property
    def sigma(self) -> int:
        """Σ = 1 + Δ(1) + ... + Δ(k-1)."""
        return _sigma(self.stage_degrees)

    @property
    def sigma_inverse(self) -> int:
        return _sigma(tuple(reversed(self.stage_degrees)))

    @property
    def pi(self) -> int:
        return self.cumulative[-1]

    def monomial_bound(self, sigma: int | None = None) -> int:
        s = self.sigma if sigma is None else sigma
        return (self.mu_a * self.mu_t) ** s * self.mu_a**self.pi

    def coeff_bound(self, sigma: int | None = None) -> int:
        s = self.sigma if sigma is None else sigma
        return (self.beta_a * self.mu_a * self.beta_t * self.mu_t) ** s * (self.beta_a * self.mu_a) ** self.pi

    def avg_bound(self, sigma: int | None = None) -> Fraction:
        s = self.sigma if sigma is None else sigma
        return (self.mu_bar_a * self.mu_bar_t) ** s * self.mu_bar_a**self.pi

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "k": self.k,
            "stage_degrees": list(self.stage_degrees),
            "cumulative": list(self.cumulative),
            "sigma": self.sigma,
            "pi": self.pi,
            "budgets": {
                "beta_t": str(self.beta_t),
                "beta_a": str(self.beta_a),
                "mu_t": self.mu_t,
                "mu_a": self.mu_a,
                "mu_bar_t": str(self.mu_bar_t),
                "mu_bar_a": str(self.mu_bar_a),
            },
            "requested": {key: str(v) for key, v in self.requested.items()},
            "affine_offsets": self.affine_offsets,
        }

    @classmethod
    def from_json(cls, data: dict) -> TamePlan:
        b = data["budgets"]
        return cls(
            n=data["n"],
            k=data["k"],
            stage_degrees=tuple(data["stage_degrees"]),
            beta_t=int(b["beta_t"]),
            beta_a=int(b["beta_a"]),
            mu_t=int(b["mu_t"]),
            mu_a=int(b["mu_a"]),
            mu_bar_t=Fraction(b["mu_bar_t"]),
            mu_bar_a=Fraction(b["mu_bar_a"]),
            requested={key: Fraction(v) for key, v in data.get("requested", {}).items()},
            affine_offsets=data.get("affine_offsets", True),
        )


def choose_stage_degrees(d: int, k: int) -> tuple[int, ...]:
    """Largest product ``<= d`` of ``k`` degrees ``>= 2``, as equal as possible."""
    if k < 1 or 2**k > d:
        raise PlanInfeasible("Π = δ(1)···δ(k) <= d", f"k={k} stages need d >= {2**k}, got d={d}")
    best = None
    for combo in combinations_with_replacement(range(2, d + 1), k):
        prod = math.prod(combo)
        if prod > d:
            continue
        key = (prod, -(combo[-1] - combo[0]))
        if best is None or key > best[0]:
            best = (key, combo)
    return best[1]


def _floor_frac(x: float, den: int = 100) -> Fraction:
    return Fraction(math.floor(x * den), den)


def _avg_budgets(m_bar: Fraction, mu_t: int, mu_a: int, s: int, pi: int) -> tuple[Fraction, Fraction]:
    if (mu_a * mu_t) ** s * mu_a**pi <= m_bar:
        return Fraction(mu_t), Fraction(mu_a)

    def ok(t, a):
        return (a * t) ** s * a**pi <= m_bar

    r = float(m_bar) ** (1.0 / (2 * s + pi))
    a = max(Fraction(1), min(Fraction(mu_a), _floor_frac(r)))
    t = max(Fraction(1), min(Fraction(mu_t), _floor_frac((float(m_bar) / float(a) ** (s + pi)) ** (1.0 / s))))
    step = Fraction(1, 100)
    while not ok(t, a) and t > 1:
        t = max(Fraction(1), t - step)
    while not ok(t, a) and a > 1:
        a = max(Fraction(1), a - step)
    return t, a


def plan_tame(n: int, d: int, b: int, m: int, m_bar=None, k: int = 1, *, affine_offsets: bool = True) -> TamePlan:
    """Choose stage degrees and factor budgets meeting the requested bounds.

    Among monomial budgets ``μ_t >= 2, μ_a >= 1`` the planner keeps the pair
    whose monomial product comes closest to ``m`` (ties: larger ``μ_a``), as
    long as some coefficient budget ``β >= 1`` still fits under ``b``.  The
    coefficient slack ``R`` is then split: ``β_a^(Σ+Π) ≈ sqrt(R)`` and
    ``β_t`` takes the rest.  With ``μ_a = 1`` the affine factors are signed
    permutations, so ``β_a`` is pinned to 1.  Deterministic for fixed inputs.
    """
    if n < 2:
        raise PlanInfeasible("n >= 2", "triangular factors need two variables")
    m_bar = Fraction(m if m_bar is None else m_bar)
    degrees = choose_stage_degrees(d, k)
    s = max(_sigma(degrees), _sigma(tuple(reversed(degrees))))
    pi = math.prod(degrees)

    best = None
    for mu_a in range(1, m + 1):
        if mu_a ** (s + pi) * 2**s > m:
            break
        for mu_t in range(2, m + 1):
            mono = (mu_a * mu_t) ** s * mu_a**pi
            if mono > m:
                break
            if mu_a ** (s + pi) * mu_t**s > b:
                continue
            key = (mono, mu_a)
            if best is None or key > best[0]:
                best = (key, mu_t, mu_a)
    if best is None:
        if 2**s > m:
            raise PlanInfeasible("(μ_a μ_t)^Σ (μ_a)^Δ(k) <= m", f"needs m >= {2**s} with μ_t >= 2")
        raise PlanInfeasible("(β_a μ_a β_t μ_t)^Σ (β_a μ_a)^Δ(k) <= b", f"needs b >= {2**s}")
    _, mu_t, mu_a = best

    slack = b // (mu_a ** (s + pi) * mu_t**s)
    beta_a = 1 if mu_a == 1 else max(1, iroot(math.isqrt(slack), s + pi))
    beta_t = iroot(slack // beta_a ** (s + pi), s)

    if m_bar < 1:
        raise PlanInfeasible("(μ̄_a μ̄_t)^Σ (μ̄_a)^Δ(k) <= m̄", "m̄ must be >= 1")
    mu_bar_t, mu_bar_a = _avg_budgets(m_bar, mu_t, mu_a, s, pi)

    plan = TamePlan(
        n=n, k=k, stage_degrees=degrees,
        beta_t=beta_t, beta_a=beta_a, mu_t=mu_t, mu_a=mu_a,
        mu_bar_t=mu_bar_t, mu_bar_a=mu_bar_a,
        requested={"d": d, "b": b, "m": m, "m_bar": m_bar},
        affine_offsets=affine_offsets,
    )
    assert plan.pi <= d
    assert plan.monomial_bound(s) <= m and plan.coeff_bound(s) <= b
    assert plan.avg_bound(s) <= m_bar
    return plan


# -- pairs -----------------------------------------------------------------------

@dataclass(frozen=True)
class Factor:
    kind: str  # "affine" | "triangular"
    forward: PolyMap
    inverse: PolyMap


def fingerprint(phi: PolyMap) -> str:
    """SHA-256 of the canonical JSON form of φ."""
    blob = json.dumps(polymap_to_json(phi), sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(blob.encode()).hexdigest()


@dataclass(frozen=True)
class InverseReport:
    ok: bool
    failures: tuple[tuple[str, int, Polynomial], ...] = ()

    def __bool__(self) -> bool:
        return self.ok

    def describe(self) -> str:
        if self.ok:
            return "PASS: ψ∘φ and φ∘ψ are both the identity"
        lines = ["FAIL:"]
        for which, idx, residual in self.failures:
            lines.append(f"  {which} component {idx}: residual {residual}")
        return "\n".join(lines)


def check_inverse(phi: PolyMap, psi: PolyMap) -> InverseReport:
    if not (phi.domain_dim == phi.codomain_dim == psi.domain_dim == psi.codomain_dim):
        raise ValueError("φ and ψ must both be maps Z^n -> Z^n of the same n")
    n = phi.domain_dim
    failures = []
    for which, comp in (("ψ∘φ", compose(psi, phi)), ("φ∘ψ", compose(phi, psi))):
        for i, c in enumerate(comp.components):
            residual = c - Polynomial.var(n, i)
            if not residual.is_zero():
                failures.append((which, i + 1, residual))
    return InverseReport(not failures, tuple(failures))


@dataclass(frozen=True)
class AutomorphismPair:
    n: int
    phi: PolyMap
    psi: PolyMap
    factorization: tuple[Factor, ...] = ()
    verified: bool = False
    seed: int | None = None
    plan: TamePlan | None = None

    @classmethod
    def from_maps(cls, phi: PolyMap, psi: PolyMap, factorization: Sequence[Factor] = (), **kw) -> AutomorphismPair:
        """Wrap explicit maps; ``verified`` records whether they really are inverse."""
        ok = check_inverse(phi, psi).ok
        return cls(phi.domain_dim, phi, psi, tuple(factorization), ok, **kw)

    @classmethod
    def identity(cls, n: int) -> AutomorphismPair:
        ident = PolyMap.identity(n)
        return cls(n, ident, ident, (), True)

    @property
    def fingerprint(self) -> str:
        return fingerprint(self.phi)

    def inverse_pair(self) -> AutomorphismPair:
        return AutomorphismPair(
            self.n, self.psi, self.phi,
            tuple(Factor(f.kind, f.inverse, f.forward) for f in reversed(self.factorization)),
            self.verified,
        )


def verify_inverse_pair(pair: AutomorphismPair) -> InverseReport:
    return check_inverse(pair.phi, pair.psi)


def compose_chain(factors: Sequence[Factor]) -> AutomorphismPair:
    """``φ = F_0 ∘ F_1 ∘ ... ∘ F_r`` and ``ψ = F_r⁻¹ ∘ ... ∘ F_0⁻¹`` (unverified)."""
    phi = factors[-1].forward
    for f in reversed(factors[:-1]):
        phi = compose(f.forward, phi)
    psi = factors[0].inverse
    for f in factors[1:]:
        psi = compose(f.inverse, psi)
    return AutomorphismPair(phi.domain_dim, phi, psi, tuple(factors), False)


def gen_tame(
    plan: TamePlan,
    rng: Rng,
    *,
    constant_e2: bool = False,
    mixed_monomial: bool = False,
) -> AutomorphismPair:
    """Draw ``A_0, T_1, A_1, ..., T_k, A_k`` under ``plan`` and verify the result.

    Raises :class:`GenerationError` rather than return a pair that fails the
    symbolic inverse check, or (with no variation flags) any of the requested
    degree, coefficient and monomial bounds.
    """
    n = plan.n
    factors: list[Factor] = []
    for i in range(plan.k + 1):
        a = gen_affine(n, plan.beta_a, plan.mu_a, plan.mu_bar_a, rng.split(f"A{i}"),
                       offset=plan.affine_offsets)
        factors.append(Factor("affine", a.forward, a.inverse))
        if i == plan.k:
            break
        params = TriangularParams(n, plan.beta_t, plan.stage_degrees[i], plan.mu_t,
                                  min(plan.mu_bar_t, Fraction(plan.mu_t)))
        t = gen_segmented_triangular(params, rng.split(f"T{i + 1}"),
                                     constant_e2=constant_e2, mixed_monomial=mixed_monomial)
        inv = invert_segmented_triangular(t) if t.is_segmented() else invert_triangular(t)
        factors.append(Factor("triangular", t.forward, inv))

    chained = compose_chain(factors)
    report = check_inverse(chained.phi, chained.psi)
    if not report.ok:
        raise GenerationError("generated pair failed the inverse check:\n" + report.describe())
    pair = AutomorphismPair(n, chained.phi, chained.psi, chained.factorization, True, rng.seed, plan)
    if not (constant_e2 or mixed_monomial):
        req = plan.requested
        for name, mp in (("φ", pair.phi), ("ψ", pair.psi)):
            mt = metrics(mp)
            if mt.degree > req.get("d", plan.pi) or mt.coeff_norm > req.get("b", mt.coeff_norm) \
                    or mt.max_monomials > req.get("m", mt.max_monomials):
                raise GenerationError(f"{name} metrics {mt} exceed requested bounds {req}")
    return pair
