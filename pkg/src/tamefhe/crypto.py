"""Encryption ``E_φ`` and decryption ``D_φ`` of integer state vectors.

* version 0: ``c = φ(u)``
* version 1: ``c = φ(u, g)``
* version 2: ``c = φ(u + h(g), H(g))``

with ``g`` drawn uniformly from ``[0, rng_bound]^(n-m)``.  :func:`decrypt`
inverts a fresh ciphertext, including the version 2 unmasking.
:func:`decrypt_result` handles the output of a transformed program, whose
first step already removed the mask, so only ``ψ`` and truncation remain.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Sequence

from .automorphism import AutomorphismPair
from .keys import PublicKey
from .poly import Metrics, evaluate, metrics
from .rewrite import PublicScheme, SchemeConfig
from .rng import Rng


class CryptoError(ValueError):
    pass


@dataclass(frozen=True)
class Plaintext:
    values: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "values", tuple(int(v) for v in self.values))


@dataclass(frozen=True)
class Ciphertext:
    values: tuple[int, ...]
    version: int
    key_fingerprint: str

    def __post_init__(self):
        object.__setattr__(self, "values", tuple(int(v) for v in self.values))

    def to_json(self) -> dict:
        return {"version": self.version, "key_fingerprint": self.key_fingerprint,
                "values": [str(v) for v in self.values]}

    @classmethod
    def from_json(cls, data: Mapping) -> Ciphertext:
        return cls(tuple(int(v) for v in data["values"]), int(data["version"]), data["key_fingerprint"])


def _scheme(cfg) -> PublicScheme:
    return PublicScheme.of(cfg) if isinstance(cfg, SchemeConfig) else cfg


def draw_randomness(cfg, rng: Rng) -> tuple[int, ...]:
    cfg = _scheme(cfg)
    return tuple(rng.randint(0, cfg.rng_bound) for _ in range(cfg.n - cfg.m))


def encryption_point(u: Sequence[int], cfg, g: Sequence[int]) -> tuple[int, ...]:
    """The vector that φ is applied to."""
    cfg = _scheme(cfg)
    u = tuple(int(x) for x in u)
    if len(u) != cfg.m:
        raise CryptoError(f"plaintext has {len(u)} values, scheme expects m={cfg.m}")
    g = tuple(int(x) for x in g)
    if len(g) != cfg.n - cfg.m:
        raise CryptoError(f"need {cfg.n - cfg.m} random values, got {len(g)}")
    if cfg.version == 0:
        return u
    if cfg.version == 1:
        return u + g
    if cfg.h is None or cfg.H is None:
        raise CryptoError("version 2 encryption needs h and H")
    mask = evaluate(cfg.h, g)
    return tuple(a + b for a, b in zip(u, mask)) + evaluate(cfg.H, g)


def encrypt(
    u: Sequence[int] | Plaintext,
    key: PublicKey | AutomorphismPair,
    cfg: SchemeConfig | PublicScheme,
    rng: Rng | None = None,
    *,
    randomness: Sequence[int] | None = None,
) -> Ciphertext:
    """Encrypt ``u``; randomness comes from ``rng`` unless given explicitly."""
    cfg = _scheme(cfg)
    if key.n != cfg.n:
        raise CryptoError(f"key acts on Z^{key.n}, scheme has n={cfg.n}")
    if isinstance(u, Plaintext):
        u = u.values
    if randomness is None:
        if cfg.n > cfg.m and rng is None:
            raise CryptoError("versions 1 and 2 need an rng or explicit randomness")
        randomness = draw_randomness(cfg, rng) if cfg.n > cfg.m else ()
    point = encryption_point(u, cfg, randomness)
    return Ciphertext(evaluate(key.phi, point), cfg.version, key.fingerprint)


def _check(c: Ciphertext, pair: AutomorphismPair, cfg) -> None:
    if c.key_fingerprint != pair.fingerprint:
        raise CryptoError("ciphertext was produced under a different key (fingerprint mismatch)")
    if c.version != cfg.version:
        raise CryptoError(f"ciphertext is version {c.version}, scheme is version {cfg.version}")
    if len(c.values) != pair.n:
        raise CryptoError(f"ciphertext has {len(c.values)} values, key acts on Z^{pair.n}")


def decrypt(c: Ciphertext, pair: AutomorphismPair, cfg: SchemeConfig | PublicScheme) -> Plaintext:
    """Invert :func:`encrypt` on a fresh ciphertext."""
    _check(c, pair, cfg)
    v = evaluate(pair.psi, c.values)
    head, tail = v[: cfg.m], v[cfg.m:]
    if cfg.version == 2:
        mask = evaluate(cfg.h, evaluate(cfg.H.psi, tail))
        head = tuple(a - b for a, b in zip(head, mask))
    return Plaintext(head)


def decrypt_result(c: Ciphertext, pair: AutomorphismPair, cfg: SchemeConfig | PublicScheme) -> Plaintext:
    """Decrypt the output state of a transformed program: ψ, then truncation."""
    _check(c, pair, cfg)
    return Plaintext(evaluate(pair.psi, c.values)[: cfg.m])


def ciphertext_size_bound(key_metrics: Metrics, rng_bound: int, u_abs: int) -> int:
    """``|φ| m(φ) max(|RG|, |u|)^d(φ)`` with ``|u|`` the largest input magnitude.

    The base is taken to be at least 1 so the constant terms of φ are
    covered when ``u`` and the randomness are both zero.
    """
    base = max(1, abs(rng_bound), abs(u_abs))
    return key_metrics.coeff_norm * key_metrics.max_monomials * base**key_metrics.degree


def input_magnitude(u: Sequence[int], cfg, g: Sequence[int] | None = None) -> int:
    """Largest entry of the vector φ is actually applied to.

    For versions 0 and 1 this is ``max(|u|, |g|)``.  Version 2 feeds φ
    ``u + h(g)`` and ``H(g)``, which can exceed ``|RG|``; when ``g`` is known
    the exact point is measured, otherwise ``h`` and ``H`` are bounded by
    their own metrics at ``|RG|``.
    """
    cfg = _scheme(cfg)
    u_abs = max((abs(int(x)) for x in u), default=0)
    if cfg.version < 2:
        return max(u_abs, cfg.rng_bound)
    if g is not None:
        return max((abs(x) for x in encryption_point(u, cfg, g)), default=0)
    base = max(1, cfg.rng_bound)
    hm, Hm = metrics(cfg.h), metrics(cfg.H)
    h_abs = hm.coeff_norm * hm.max_monomials * base**hm.degree
    H_abs = Hm.coeff_norm * Hm.max_monomials * base**Hm.degree
    return max(u_abs + h_abs, H_abs)
