"""Exact sparse multivariate polynomials over the integers.

A :class:`Polynomial` stores its terms as a tuple of ``(exponents, coeff)``
pairs in descending graded-lexicographic order with no zero coefficients, so
two equal polynomials always have identical term tuples.  A :class:`PolyMap`
is a tuple of polynomials in a common variable set and represents a map
``Z^a -> Z^b``.

Example (2 variables)::

    x0^2*x1 - 3  ->  terms ((2, 1), 1), ((0, 0), -3)
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Mapping, Sequence

Monomial = tuple[int, ...]


class StructuralError(ValueError):
    """Raised when polynomial dimensions do not line up."""


def _grlex_key(item: tuple[Monomial, int]) -> tuple[int, Monomial]:
    return (sum(item[0]), item[0])


class Polynomial:
    __slots__ = ("num_vars", "terms", "_hash")

    def __init__(self, num_vars: int, terms: Iterable[tuple[Monomial, int]] = ()):
        self.num_vars = num_vars
        acc: dict[Monomial, int] = {}
        for mono, coeff in terms:
            mono = tuple(mono)
            if len(mono) != num_vars:
                raise StructuralError(
                    f"monomial {mono} has {len(mono)} exponents, expected {num_vars}"
                )
            if any(e < 0 for e in mono):
                raise StructuralError(f"negative exponent in {mono}")
            acc[mono] = acc.get(mono, 0) + int(coeff)
        self.terms = _sorted_terms(acc)
        self._hash = None

    @classmethod
    def _from_dict(cls, num_vars: int, acc: Mapping[Monomial, int]) -> Polynomial:
        # trusted fast path: keys already have the right length
        p = object.__new__(cls)
        p.num_vars = num_vars
        p.terms = _sorted_terms(acc)
        p._hash = None
        return p

    @classmethod
    def zero(cls, num_vars: int) -> Polynomial:
        return cls._from_dict(num_vars, {})

    @classmethod
    def constant(cls, num_vars: int, value: int) -> Polynomial:
        return cls._from_dict(num_vars, {(0,) * num_vars: int(value)})

    @classmethod
    def var(cls, num_vars: int, index: int) -> Polynomial:
        """The polynomial ``x_index`` (0-based)."""
        if not 0 <= index < num_vars:
            raise StructuralError(f"variable index {index} out of range for {num_vars} vars")
        mono = tuple(1 if j == index else 0 for j in range(num_vars))
        return cls._from_dict(num_vars, {mono: 1})

    # -- inspection -------------------------------------------------------

    def as_dict(self) -> dict[Monomial, int]:
        return dict(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def __len__(self) -> int:
        return len(self.terms)

    def __iter__(self) -> Iterator[tuple[Monomial, int]]:
        return iter(self.terms)

    @property
    def degree(self) -> int:
        # degree of the zero polynomial is 0 by convention
        return sum(self.terms[0][0]) if self.terms else 0

    def coefficient(self, mono: Sequence[int]) -> int:
        return self.as_dict().get(tuple(mono), 0)

    def constant_term(self) -> int:
        return self.coefficient((0,) * self.num_vars)

    def coeff_norm(self) -> int:
        return max((abs(c) for _, c in self.terms), default=0)

    def l1_norm(self) -> int:
        return sum(abs(c) for _, c in self.terms)

    def variables(self) -> frozenset[int]:
        """0-based indices of the variables that actually occur."""
        used = set()
        for mono, _ in self.terms:
            used.update(i for i, e in enumerate(mono) if e)
        return frozenset(used)

    def homogeneous_part(self, degree: int) -> Polynomial:
        return Polynomial._from_dict(
            self.num_vars, {m: c for m, c in self.terms if sum(m) == degree}
        )

    def degrees(self) -> set[int]:
        return {sum(m) for m, _ in self.terms}

    # -- ring operations --------------------------------------------------

    def _check(self, other: Polynomial) -> None:
        if self.num_vars != other.num_vars:
            raise StructuralError(
                f"variable count mismatch: {self.num_vars} vs {other.num_vars}"
            )

    def _coerce(self, other) -> Polynomial:
        if isinstance(other, Polynomial):
            self._check(other)
            return other
        if isinstance(other, int):
            return Polynomial.constant(self.num_vars, other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        acc = dict(self.terms)
        for mono, c in other.terms:
            acc[mono] = acc.get(mono, 0) + c
        return Polynomial._from_dict(self.num_vars, acc)

    __radd__ = __add__

    def __neg__(self) -> Polynomial:
        return Polynomial._from_dict(self.num_vars, {m: -c for m, c in self.terms})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, int):
            return Polynomial._from_dict(self.num_vars, {m: c * other for m, c in self.terms})
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        acc: dict[Monomial, int] = {}
        get = acc.get
        for ma, ca in self.terms:
            for mb, cb in other.terms:
                mono = tuple([x + y for x, y in zip(ma, mb)])
                acc[mono] = get(mono, 0) + ca * cb
        return Polynomial._from_dict(self.num_vars, acc)

    __rmul__ = __mul__

    def __pow__(self, exponent: int) -> Polynomial:
        if exponent < 0:
            raise ValueError("negative powers are not polynomials")
        result = Polynomial.constant(self.num_vars, 1)
        base = self
        while exponent:
            if exponent & 1:
                result = result * base
            exponent >>= 1
            if exponent:
                base = base * base
        return result

    # -- evaluation / substitution -------------------------------------------

    def __call__(self, *point: int) -> int:
        return self.evaluate(point)

    def evaluate(self, point: Sequence[int]) -> int:
        if len(point) != self.num_vars:
            raise StructuralError(
                f"point has length {len(point)}, polynomial has {self.num_vars} vars"
            )
        total = 0
        for mono, c in self.terms:
            value = c
            for x, e in zip(point, mono):
                if e:
                    value *= x**e
            total += value
        return total

    def substitute(self, inner: Sequence[Polynomial]) -> Polynomial:
        """Replace variable ``i`` with ``inner[i]`` and expand."""
        return compose(PolyMap.from_components([self]), PolyMap.from_components(inner)).components[0]

    # -- misc -------------------------------------------------------------

    def __eq__(self, other) -> bool:
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.num_vars == other.num_vars and self.terms == other.terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.num_vars, self.terms))
        return self._hash

    def __repr__(self) -> str:
        return f"Polynomial({self.num_vars}, {format_polynomial(self)!r})"

    def __str__(self) -> str:
        return format_polynomial(self)


def _sorted_terms(acc: Mapping[Monomial, int]) -> tuple[tuple[Monomial, int], ...]:
    return tuple(sorted(((m, c) for m, c in acc.items() if c), key=_grlex_key, reverse=True))


def canonicalize(raw_terms: Iterable[tuple[Sequence[int], int]], num_vars: int | None = None) -> Polynomial:
    """Merge like terms, drop zeros and sort into graded-lex order."""
    raw_terms = [(tuple(m), c) for m, c in raw_terms]
    if num_vars is None:
        if not raw_terms:
            raise StructuralError("num_vars is required for an empty term list")
        num_vars = len(raw_terms[0][0])
    return Polynomial(num_vars, raw_terms)


def add(p: Polynomial, q: Polynomial) -> Polynomial:
    p._check(q)
    return p + q


def mul(p: Polynomial, q: Polynomial) -> Polynomial:
    p._check(q)
    return p * q


def format_polynomial(p: Polynomial, names: Sequence[str] | None = None) -> str:
    """Render as ``3*x1^2*x2 - x2 + 7``; variables default to ``x1..xn``."""
    if names is None:
        names = [f"x{i + 1}" for i in range(p.num_vars)]
    if not p.terms:
        return "0"
    parts = []
    for mono, c in p.terms:
        factors = []
        for name, e in zip(names, mono):
            if e == 1:
                factors.append(name)
            elif e > 1:
                factors.append(f"{name}^{e}")
        mag = abs(c)
        if not factors:
            body = str(mag)
        elif mag == 1:
            body = "*".join(factors)
        else:
            body = "*".join([str(mag)] + factors)
        sign = "-" if c < 0 else "+"
        parts.append((sign, body))
    first_sign, first_body = parts[0]
    out = ("-" if first_sign == "-" else "") + first_body
    for sign, body in parts[1:]:
        out += f" {sign} {body}"
    return out


@dataclass(frozen=True)
class Metrics:
    """d(S), |S|, m(S) and m̄(S) of a polynomial map in canonical form."""

    degree: int
    coeff_norm: int
    max_monomials: int
    avg_monomials: Fraction

    def as_dict(self) -> dict:
        return {
            "degree": self.degree,
            "coeff_norm": str(self.coeff_norm),
            "max_monomials": self.max_monomials,
            "avg_monomials": str(self.avg_monomials),
        }


@dataclass(frozen=True)
class PolyMap:
    domain_dim: int
    codomain_dim: int
    components: tuple[Polynomial, ...]

    def __post_init__(self):
        comps = tuple(self.components)
        object.__setattr__(self, "components", comps)
        if len(comps) != self.codomain_dim:
            raise StructuralError(
                f"{len(comps)} components for codomain dimension {self.codomain_dim}"
            )
        for i, c in enumerate(comps):
            if not isinstance(c, Polynomial):
                raise StructuralError(f"component {i + 1} is not a Polynomial")
            if c.num_vars != self.domain_dim:
                raise StructuralError(
                    f"component {i + 1} has {c.num_vars} vars, domain is {self.domain_dim}"
                )

    @classmethod
    def from_components(cls, components: Sequence[Polynomial], domain_dim: int | None = None) -> PolyMap:
        components = tuple(components)
        if domain_dim is None:
            if not components:
                raise StructuralError("domain_dim is required for an empty map")
            domain_dim = components[0].num_vars
        return cls(domain_dim, len(components), components)

    @classmethod
    def identity(cls, n: int) -> PolyMap:
        return cls(n, n, tuple(Polynomial.var(n, i) for i in range(n)))

    @classmethod
    def projection(cls, n: int, indices: Sequence[int]) -> PolyMap:
        """``x -> (x[i] for i in indices)`` with 0-based indices."""
        return cls(n, len(indices), tuple(Polynomial.var(n, i) for i in indices))

    @classmethod
    def linear(cls, matrix: Sequence[Sequence[int]], offset: Sequence[int] | None = None) -> PolyMap:
        """The affine map ``x -> matrix @ x + offset``."""
        rows = len(matrix)
        cols = len(matrix[0]) if rows else 0
        offset = offset if offset is not None else [0] * rows
        comps = []
        for r in range(rows):
            acc = {}
            for j in range(cols):
                if matrix[r][j]:
                    acc[tuple(1 if t == j else 0 for t in range(cols))] = int(matrix[r][j])
            if offset[r]:
                acc[(0,) * cols] = int(offset[r])
            comps.append(Polynomial._from_dict(cols, acc))
        return cls(cols, rows, tuple(comps))

    def __len__(self) -> int:
        return self.codomain_dim

    def __getitem__(self, i: int) -> Polynomial:
        return self.components[i]

    def __call__(self, point: Sequence[int]) -> tuple[int, ...]:
        return evaluate(self, point)

    def is_identity(self) -> bool:
        return self.domain_dim == self.codomain_dim and self == PolyMap.identity(self.domain_dim)

    def metrics(self) -> Metrics:
        return metrics(self)

    def concat(self, other: PolyMap) -> PolyMap:
        """Stack the components of two maps sharing a domain."""
        if self.domain_dim != other.domain_dim:
            raise StructuralError("cannot stack maps with different domains")
        return PolyMap(self.domain_dim, self.codomain_dim + other.codomain_dim,
                       self.components + other.components)

    def __str__(self) -> str:
        return "(" + ", ".join(format_polynomial(c) for c in self.components) + ")"


def _power_table(inner: PolyMap):
    cache: dict[tuple[int, int], Polynomial] = {}
    one = Polynomial.constant(inner.domain_dim, 1)

    def power(var: int, e: int) -> Polynomial:
        if e == 0:
            return one
        if e == 1:
            return inner.components[var]
        key = (var, e)
        hit = cache.get(key)
        if hit is None:
            half = power(var, e // 2)
            hit = half * half
            if e & 1:
                hit = hit * inner.components[var]
            cache[key] = hit
        return hit

    return power


def compose(outer: PolyMap, inner: PolyMap) -> PolyMap:
    """The canonical expansion of ``outer ∘ inner`` (apply ``inner`` first)."""
    if outer.domain_dim != inner.codomain_dim:
        raise StructuralError(
            f"cannot compose: outer takes {outer.domain_dim} inputs, inner yields {inner.codomain_dim}"
        )
    nv = inner.domain_dim
    power = _power_table(inner)
    # memoized partial products keyed by exponent prefix; shared by all components
    prefix_cache: dict[Monomial, Polynomial] = {(): Polynomial.constant(nv, 1)}

    def monomial_image(mono: Monomial) -> Polynomial:
        # strip trailing zeros so that x1*x2 and x1*x2*x3^0 share a cache slot
        end = len(mono)
        while end and mono[end - 1] == 0:
            end -= 1
        key = mono[:end]
        hit = prefix_cache.get(key)
        if hit is None:
            head = monomial_image(key[:-1])
            hit = head * power(end - 1, key[-1]) if key[-1] else head
            prefix_cache[key] = hit
        return hit

    comps = []
    for comp in outer.components:
        acc: dict[Monomial, int] = {}
        get = acc.get
        for mono, c in comp.terms:
            for m, v in monomial_image(mono).terms:
                acc[m] = get(m, 0) + c * v
        comps.append(Polynomial._from_dict(nv, acc))
    return PolyMap(nv, outer.codomain_dim, tuple(comps))


def evaluate(f: PolyMap, point: Sequence[int]) -> tuple[int, ...]:
    point = tuple(int(x) for x in point)
    if len(point) != f.domain_dim:
        raise StructuralError(f"point has length {len(point)}, map expects {f.domain_dim}")
    return tuple(c.evaluate(point) for c in f.components)


def metrics(f: PolyMap) -> Metrics:
    counts = [len(c) for c in f.components]
    return Metrics(
        degree=max((c.degree for c in f.components), default=0),
        coeff_norm=max((c.coeff_norm() for c in f.components), default=0),
        max_monomials=max(counts, default=0),
        avg_monomials=Fraction(sum(counts), len(counts)) if counts else Fraction(0),
    )


# -- serialization -----------------------------------------------------------

def polynomial_to_json(p: Polynomial) -> list[dict]:
    return [{"c": str(c), "e": list(m)} for m, c in p.terms]


def polynomial_from_json(data: Sequence[Mapping], num_vars: int) -> Polynomial:
    terms = []
    for rec in data:
        if not isinstance(rec.get("c"), str):
            raise StructuralError("coefficient must be a decimal string")
        terms.append((tuple(int(e) for e in rec["e"]), int(rec["c"])))
    return Polynomial(num_vars, terms)


def polymap_to_json(f: PolyMap) -> dict:
    return {
        "domain": f.domain_dim,
        "codomain": f.codomain_dim,
        "components": [polynomial_to_json(c) for c in f.components],
    }


def polymap_from_json(data: Mapping) -> PolyMap:
    a, b = int(data["domain"]), int(data["codomain"])
    comps = [polynomial_from_json(c, a) for c in data["components"]]
    return PolyMap(a, b, tuple(comps))
