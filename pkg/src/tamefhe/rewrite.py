"""Program conjugation ``E_φ(P)`` and the ciphertext pipelines ``F_φ(P)``.

Every step ``f`` becomes ``φ∘f∘ψ``: if ``y = φ(x)`` then the new state is
``φ(f(x)) = φ(f(ψ(y)))``.  ``build_fhe`` then strips the input and output maps
so the result reads and writes ciphertexts directly.

Versions 1 and 2 pad the plaintext state ``x'`` (``m`` slots) with random
slots ``x''`` (``n - m`` slots).  Version 2 also masks ``x'`` with ``h(g)``,
stores ``H(g)`` in the padding, and starts with a step that removes the mask
and overwrites the padding with ``K(x)``, so intermediate ciphertexts depend
on ``g`` while the decrypted output does not.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from typing import Mapping

from .automorphism import (
    AffineMap,
    AutomorphismPair,
    check_inverse,
    gen_tame,
    plan_tame,
)
from .frontend import _join
from .poly import PolyMap, Polynomial, compose, polymap_from_json, polymap_to_json
from .program import StraightLineProgram, program_from_json, program_to_json
from .rng import Rng


class SchemeError(ValueError):
    pass


class MixingWarning(UserWarning):
    pass


@dataclass(frozen=True)
class SchemeConfig:
    version: int
    m: int
    n: int
    h: PolyMap | None = None
    H: AutomorphismPair | None = None
    K: PolyMap | None = None
    rng_bound: int = 0

    def __post_init__(self):
        if self.version not in (0, 1, 2):
            raise SchemeError(f"unknown scheme version {self.version}")
        if self.version == 0 and self.n != self.m:
            raise SchemeError("version 0 has no randomness slots: need n = m")
        if self.version > 0 and self.n <= self.m:
            raise SchemeError(f"version {self.version} needs n > m (got n={self.n}, m={self.m})")
        if self.rng_bound < 0:
            raise SchemeError("rng_bound must be >= 0")
        if self.version == 2:
            r = self.n - self.m
            if self.h is None or self.H is None or self.K is None:
                raise SchemeError("version 2 needs h, H and K")
            if (self.h.domain_dim, self.h.codomain_dim) != (r, self.m):
                raise SchemeError(f"h must map Z^{r} -> Z^{self.m}")
            if self.H.n != r:
                raise SchemeError(f"H must be an automorphism of Z^{r}")
            if not check_inverse(self.H.phi, self.H.psi).ok:
                raise SchemeError("H is not a verified automorphism pair")
            if (self.K.domain_dim, self.K.codomain_dim) != (self.n, r):
                raise SchemeError(f"K must map Z^{self.n} -> Z^{r}")

    @property
    def r(self) -> int:
        return self.n - self.m

    @classmethod
    def generate(cls, version: int, m: int, n: int, rng: Rng, *, rng_bound: int = 100, beta: int = 4) -> SchemeConfig:
        """Config with default h, H, K for version 2 (ignored for 0 and 1)."""
        if version != 2:
            return cls(version, m, n, rng_bound=rng_bound)
        r = n - m
        if r < 1:
            raise SchemeError("version 2 needs n > m")
        return cls(2, m, n, default_h(r, m), default_H(r, rng.split("H"), beta),
                   default_K(n, r, rng.split("K"), beta), rng_bound)

    def public_json(self) -> dict:
        """The part of the config that the encrypting party needs; no H⁻¹, no K."""
        out = {"version": self.version, "m": self.m, "n": self.n, "rng_bound": self.rng_bound}
        if self.version == 2:
            out["h"] = polymap_to_json(self.h)
            out["H"] = polymap_to_json(self.H.phi)
        return out

    def private_json(self) -> dict:
        out = self.public_json()
        out["kind"] = "scheme"
        if self.version == 2:
            out["H_inverse"] = polymap_to_json(self.H.psi)
            out["K"] = polymap_to_json(self.K)
        return out

    @classmethod
    def from_json(cls, data: Mapping) -> SchemeConfig:
        version, m, n = int(data["version"]), int(data["m"]), int(data["n"])
        h = H = K = None
        if version == 2:
            h = polymap_from_json(data["h"])
            if "H_inverse" not in data:
                raise SchemeError("version 2 scheme file lacks H_inverse (public scheme block given?)")
            H = AutomorphismPair.from_maps(polymap_from_json(data["H"]), polymap_from_json(data["H_inverse"]))
            K = polymap_from_json(data["K"])
        return cls(version, m, n, h, H, K, int(data.get("rng_bound", 0)))


@dataclass(frozen=True)
class PublicScheme:
    """Encryption-side view of a SchemeConfig: H without its inverse."""

    version: int
    m: int
    n: int
    rng_bound: int
    h: PolyMap | None = None
    H: PolyMap | None = None

    @classmethod
    def of(cls, cfg: SchemeConfig) -> PublicScheme:
        return cls(cfg.version, cfg.m, cfg.n, cfg.rng_bound, cfg.h, cfg.H.phi if cfg.H else None)

    @classmethod
    def from_json(cls, data: Mapping) -> PublicScheme:
        h = polymap_from_json(data["h"]) if "h" in data else None
        H = polymap_from_json(data["H"]) if "H" in data else None
        return cls(int(data["version"]), int(data["m"]), int(data["n"]), int(data.get("rng_bound", 0)), h, H)


def default_h(r: int, m: int) -> PolyMap:
    """``h_i = g_1 g_2 ... g_{(i mod r) + 1}``; for ``r = m = 2`` this is ``(g1, g1 g2)``."""
    comps = []
    for i in range(m):
        p = Polynomial.constant(r, 1)
        for j in range(i % r + 1):
            p = p * Polynomial.var(r, j)
        comps.append(p)
    return PolyMap.from_components(comps, r)


def default_H(r: int, rng: Rng, beta: int = 4) -> AutomorphismPair:
    if r == 1:
        c = rng.randint(1, beta)
        a = AffineMap.from_matrix([[rng.sign()]], [c])
        return AutomorphismPair.from_maps(a.forward, a.inverse)
    plan = plan_tame(r, 2, max(16, beta), 6, k=1)
    return gen_tame(plan, rng)


def default_K(n: int, r: int, rng: Rng, beta: int = 4) -> PolyMap:
    matrix = [[rng.randint(-beta, beta) for _ in range(n)] for _ in range(r)]
    offset = [rng.randint(-beta, beta) for _ in range(r)]
    return PolyMap.linear(matrix, offset)


@dataclass(frozen=True)
class TransformedProgram:
    program: StraightLineProgram
    version: int
    m: int
    n: int
    key_fingerprint: str
    scheme: Mapping | None = None  # public scheme block

    def to_json(self) -> dict:
        out = program_to_json(self.program)
        block = {"version": self.version, "m": self.m, "n": self.n, "key_fingerprint": self.key_fingerprint}
        if self.scheme:
            block.update({k: v for k, v in self.scheme.items() if k not in block})
        out["scheme"] = block
        return out

    @classmethod
    def from_json(cls, data: Mapping) -> TransformedProgram:
        s = data["scheme"]
        extra = {k: v for k, v in s.items() if k not in ("key_fingerprint",)}
        return cls(program_from_json(data), int(s["version"]), int(s["m"]), int(s["n"]),
                   s["key_fingerprint"], extra)

    def public_scheme(self) -> PublicScheme:
        return PublicScheme.from_json({"version": self.version, "m": self.m, "n": self.n, **(self.scheme or {})})


def _check_dims(f: PolyMap, pair: AutomorphismPair) -> None:
    if f.domain_dim != pair.n or f.codomain_dim != pair.n:
        raise SchemeError(f"step maps Z^{f.domain_dim} -> Z^{f.codomain_dim}, key acts on Z^{pair.n}")


def rewrite_step(f: PolyMap, pair: AutomorphismPair) -> PolyMap:
    """``φ∘f∘ψ``, the step ``f`` expressed in encrypted coordinates."""
    _check_dims(f, pair)
    return compose(pair.phi, compose(f, pair.psi))


def encrypt_program(p: StraightLineProgram, pair: AutomorphismPair) -> StraightLineProgram:
    """``E_φ(P)``: same input and output values as ``p``, state held as ``φ(x)``."""
    if p.n != pair.n:
        raise SchemeError(f"program state has {p.n} slots, key acts on Z^{pair.n}")
    return StraightLineProgram(
        p.k, p.n, p.l,
        compose(pair.phi, p.f_in),
        tuple(rewrite_step(s, pair) for s in p.steps),
        compose(p.f_out, pair.psi),
    )


def _pad(f: PolyMap, n: int) -> PolyMap:
    """``(x', x'') -> (f(x'), x'')`` for ``f`` on the first ``m`` slots."""
    m = f.domain_dim
    head = compose(f, PolyMap.projection(n, range(m)))
    return head.concat(PolyMap.projection(n, range(m, n)))


def unmask_step(cfg: SchemeConfig) -> PolyMap:
    """``x -> (x' - h(H⁻¹(x'')), K(x))``."""
    n, m = cfg.n, cfg.m
    xpp = PolyMap.projection(n, range(m, n))
    mask = compose(cfg.h, compose(cfg.H.psi, xpp))
    head = [Polynomial.var(n, i) - mask[i] for i in range(m)]
    return PolyMap.from_components(head, n).concat(cfg.K)


def augment_program(p: StraightLineProgram, cfg: SchemeConfig) -> StraightLineProgram:
    """``P'``: ``P`` with its state expanded to ``n`` slots and the input randomised.

    The new program reads ``(u', u'')`` with ``u''`` the randomness, so its
    input arity is ``k + n - m``.
    """
    if cfg.m != p.n:
        raise SchemeError(f"scheme has m={cfg.m} plaintext slots, program state has {p.n}")
    if cfg.version == 0:
        return p
    n, m, r, k = cfg.n, cfg.m, cfg.r, p.k
    u1 = PolyMap.projection(k + r, range(k))
    u2 = PolyMap.projection(k + r, range(k, k + r))
    base = compose(p.f_in, u1)
    steps = [_pad(s, n) for s in p.steps]
    if cfg.version == 1:
        f_in = base.concat(u2)
    else:
        masked = compose(cfg.h, u2)
        f_in = PolyMap.from_components([base[i] + masked[i] for i in range(m)], k + r).concat(
            compose(cfg.H.phi, u2))
        steps.insert(0, unmask_step(cfg))
    f_out = compose(p.f_out, PolyMap.projection(n, range(m)))
    return StraightLineProgram(k + r, n, p.l, f_in, tuple(steps), f_out)


def unmixed_components(phi: PolyMap, m: int) -> list[int]:
    """0-based indices of components of φ that ignore every randomness slot."""
    rand = set(range(m, phi.domain_dim))
    return [i for i, c in enumerate(phi.components) if not (c.variables() & rand)]


def build_fhe(p: StraightLineProgram, pair: AutomorphismPair, cfg: SchemeConfig) -> TransformedProgram:
    """``F_φ(P)``: the conjugated steps of ``P'`` with input ``y <- w`` and output ``z <- y``."""
    if cfg.n != pair.n:
        raise SchemeError(f"scheme has n={cfg.n}, key acts on Z^{pair.n}")
    if not pair.verified and not check_inverse(pair.phi, pair.psi).ok:
        raise SchemeError("key pair is not a verified automorphism pair")
    if cfg.version == 1:
        loose = unmixed_components(pair.phi, cfg.m)
        if loose:
            warnings.warn(
                f"φ components {[i + 1 for i in loose]} do not depend on any randomness slot; "
                "version 1 relies on φ mixing the random padding into every coordinate",
                MixingWarning, stacklevel=2)
    augmented = augment_program(p, cfg)
    steps = tuple(rewrite_step(s, pair) for s in augmented.steps)
    ident = PolyMap.identity(cfg.n)
    inner = StraightLineProgram(cfg.n, cfg.n, cfg.n, ident, steps, ident)
    return TransformedProgram(inner, cfg.version, cfg.m, cfg.n, pair.fingerprint, cfg.public_json())


def emit_pseudocode(tp: TransformedProgram) -> str:
    """Listing in the frontend's text format, one ``{ ... }`` block per step.

    Each block computes ``Y1new, Y2new, ...`` from the old state and then
    copies them back, mirroring how a C listing would spell a simultaneous
    update.
    """
    p = tp.program
    ys = [f"Y{i + 1}" for i in range(p.n)]
    ws = [f"W{i + 1}" for i in range(p.k)]
    lines = [
        f"# F(P): scheme version {tp.version}, m={tp.m}, n={tp.n}",
        f"# key {tp.key_fingerprint}",
        f"state {', '.join(ys)}",
        f"input {', '.join(ws)} -> {_join(p.f_in.components, ws)}",
    ]
    for idx, step in enumerate(p.steps, 1):
        lines.append(f"# step {idx}")
        lines.append("{")
        for i, comp in enumerate(step.components):
            lines.append(f"  {ys[i]}new = {_join([comp], ys)}")
        for y in ys:
            lines.append(f"  {y} = {y}new")
        lines.append("}")
    lines.append(f"output {_join(p.f_out.components, ys)}")
    return "\n".join(lines) + "\n"


def identity_program(n: int) -> StraightLineProgram:
    return StraightLineProgram.from_steps((), n)


__all__ = [
    "MixingWarning", "PublicScheme", "SchemeConfig", "SchemeError", "TransformedProgram",
    "augment_program", "build_fhe", "emit_pseudocode", "encrypt_program", "identity_program",
    "rewrite_step", "unmask_step", "unmixed_components",
]
