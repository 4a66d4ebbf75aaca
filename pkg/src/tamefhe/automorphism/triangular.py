"""Triangular automorphisms ``x_i -> x_i + f_i(x_{i+1}, ..., x_n)``.

Indices here are 0-based.  A map is *segmented* by a partition ``(E1, E2)``
when ``f_i = 0`` for ``i`` in ``E2`` and ``f_i`` only reads ``E2`` variables
for ``i`` in ``E1``.  Its inverse is then just ``y_i - f_i(y)``, with exactly
the same degree, coefficient size and monomial counts as the forward map.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import comb
from typing import Sequence

from ..poly import PolyMap, Polynomial
from ..rng import Rng


class ContractViolation(ValueError):
    pass


@dataclass(frozen=True)
class TriangularParams:
    n: int
    beta: int
    d: int
    mu: int
    mu_bar: Fraction = Fraction(2)
    partition: tuple[tuple[int, ...], tuple[int, ...]] | None = None

    def __post_init__(self):
        object.__setattr__(self, "mu_bar", Fraction(self.mu_bar))
        if self.n < 2:
            raise ContractViolation("segmented triangular maps need n >= 2")
        if self.mu < 2:
            raise ContractViolation("mu must be >= 2 to leave room for a nonlinear f_i")
        if self.beta < 1 or self.d < 2:
            raise ContractViolation("need beta >= 1 and d >= 2")
        if not 1 <= self.mu_bar <= self.mu:
            raise ContractViolation(f"mu_bar must lie in [1, mu], got {self.mu_bar}")
        if self.partition is None:
            half = self.n // 2
            object.__setattr__(
                self, "partition", (tuple(range(half)), tuple(range(half, self.n)))
            )
        e1, e2 = (tuple(sorted(s)) for s in self.partition)
        if set(e1) & set(e2) or set(e1) | set(e2) != set(range(self.n)) or not e1 or not e2:
            raise ContractViolation(f"{self.partition} is not a partition of 0..{self.n - 1}")
        object.__setattr__(self, "partition", (e1, e2))


@dataclass(frozen=True)
class TriangularMap:
    n: int
    offsets: tuple[Polynomial, ...]
    partition: tuple[tuple[int, ...], tuple[int, ...]] | None = None
    forward: PolyMap = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "offsets", tuple(self.offsets))
        if len(self.offsets) != self.n:
            raise ContractViolation(f"{len(self.offsets)} offsets for n={self.n}")
        for i, f in enumerate(self.offsets):
            if f.num_vars != self.n:
                raise ContractViolation(f"offset {i + 1} has {f.num_vars} vars")
        upper = all(j > i for i, f in enumerate(self.offsets) for j in f.variables())
        if not upper and not self.is_segmented():
            raise ContractViolation("offsets are neither upper-triangular nor segmented")
        comps = tuple(Polynomial.var(self.n, i) + f for i, f in enumerate(self.offsets))
        object.__setattr__(self, "forward", PolyMap(self.n, self.n, comps))

    @classmethod
    def from_offsets(cls, offsets: Sequence[Polynomial], partition=None) -> TriangularMap:
        return cls(len(offsets), tuple(offsets), partition)

    def segmentation(self) -> tuple[tuple[int, ...], tuple[int, ...]] | None:
        """The partition this map is segmented by, or None.

        Uses the declared partition when there is one; otherwise takes E2 to be
        the indices with ``f_i = 0``.
        """
        if self.partition is not None:
            e1, e2 = self.partition
        else:
            e2 = tuple(i for i, f in enumerate(self.offsets) if f.is_zero())
            e1 = tuple(i for i in range(self.n) if i not in e2)
        ok = all(self.offsets[i].is_zero() for i in e2) and all(
            self.offsets[i].variables() <= set(e2) for i in e1
        )
        return (tuple(e1), tuple(e2)) if ok else None

    def is_segmented(self) -> bool:
        return self.segmentation() is not None


def _monomial_of_degree(n: int, variables: Sequence[int], degree: int, rng: Rng) -> tuple[int, ...]:
    exps = [0] * n
    for _ in range(degree):
        exps[rng.choice(variables)] += 1
    return tuple(exps)


def _random_offset(params: TriangularParams, target: int, rng: Rng, variables: Sequence[int]) -> Polynomial:
    """Nonlinear polynomial in ``variables`` with exactly ``target`` terms.

    With ``target >= 2`` it is also nonhomogeneous.  Coefficients are nonzero
    and bounded by ``beta``.
    """
    n, d, beta = params.n, params.d, params.beta
    target = min(target, comb(len(variables) + d, d))
    while True:
        top = rng.randint(2, d)
        monos = {_monomial_of_degree(n, variables, top, rng)}
        if target >= 2:
            other = rng.choice([t for t in range(d + 1) if t != top])
            monos.add(_monomial_of_degree(n, variables, other, rng))
        for _ in range(50 * target):
            if len(monos) >= target:
                break
            monos.add(_monomial_of_degree(n, variables, rng.randint(0, d), rng))
        if len(monos) == target:
            break
    return Polynomial(n, [(m, rng.sign() * rng.randint(1, beta)) for m in sorted(monos)])


def gen_segmented_triangular(
    params: TriangularParams,
    rng: Rng,
    *,
    constant_e2: bool = False,
    mixed_monomial: bool = False,
) -> TriangularMap:
    """Random sparse segmented triangular map.

    For ``i`` in E1 a size ``μ_i`` is drawn uniformly from
    ``[1, min(μ-1, floor(2μ̄-1))]`` and ``f_i`` gets ``max(μ_i, 2)`` terms
    (one term only when ``μ = 2``), so every component has at most ``μ``
    terms.  ``constant_e2`` and ``mixed_monomial`` enable the two
    generalisations: constant shifts on E2, and one E1 term in ``f_i`` reading
    a later E1 variable.  Both break the equal-metrics property of the inverse.
    """
    e1, e2 = params.partition
    n = params.n
    cap = max(1, min(params.mu - 1, int(2 * params.mu_bar - 1)))
    offsets = [Polynomial.zero(n) for _ in range(n)]
    for i in e1:
        mu_i = rng.randint(1, cap)
        target = max(mu_i, 2) if params.mu - 1 >= 2 else 1
        f = _random_offset(params, target, rng, e2)
        later_e1 = [j for j in e1 if j > i]
        if mixed_monomial and later_e1 and f.terms:
            mono, c = f.terms[-1]
            extra = list(mono)
            extra[rng.choice(later_e1)] += 1
            if sum(extra) <= params.d:
                f = f - Polynomial(n, [(mono, c)]) + Polynomial(n, [(tuple(extra), c)])
        offsets[i] = f
    if constant_e2:
        for j in e2:
            offsets[j] = Polynomial.constant(n, rng.sign() * rng.randint(1, params.beta))
    return TriangularMap(n, tuple(offsets), params.partition)


def gen_generic_triangular(n: int, beta: int, d: int, rng: Rng) -> TriangularMap:
    """Unsegmented map: each ``f_i`` (i < n-1) is a nonlinear polynomial in all later variables.

    The leading term of ``f_i`` is a power of ``x_{i+1}`` so inverse degrees
    compound down the chain.
    """
    offsets = []
    for i in range(n):
        later = list(range(i + 1, n))
        if not later:
            offsets.append(Polynomial.zero(n))
            continue
        lead = [0] * n
        lead[i + 1] = d
        terms = {tuple(lead): rng.sign() * rng.randint(1, beta)}
        terms.setdefault(_monomial_of_degree(n, later, rng.randint(1, d), rng), rng.sign())
        offsets.append(Polynomial(n, terms.items()))
    return TriangularMap(n, tuple(offsets))


def invert_triangular(t: TriangularMap) -> PolyMap:
    """Back-substitution ``g_i = y_i - f_i(g_{i+1}, ..., g_n)`` for any triangular map."""
    n = t.n
    g = [Polynomial.var(n, i) for i in range(n)]
    for i in reversed(range(n)):
        f = t.offsets[i]
        if not f.is_zero():
            g[i] = Polynomial.var(n, i) - f.substitute(g)
    return PolyMap(n, n, tuple(g))


def invert_segmented_triangular(t: TriangularMap) -> PolyMap:
    """``y_i - f_i(y)``; valid only for segmented maps."""
    if not t.is_segmented():
        raise ContractViolation("map is not segmented: some f_i reads an E1 variable")
    n = t.n
    return PolyMap(n, n, tuple(Polynomial.var(n, i) - f for i, f in enumerate(t.offsets)))
