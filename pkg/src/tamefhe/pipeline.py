"""End-to-end helpers: encrypt a program input, run ``F_φ(P)``, decrypt the output."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .automorphism import AutomorphismPair
from .bounds import BoundsReport, transform_bound_check
from .crypto import (
    Ciphertext,
    CryptoError,
    ciphertext_size_bound,
    decrypt_result,
    draw_randomness,
    encrypt,
    input_magnitude,
)
from .keys import PublicKey
from .poly import evaluate, metrics
from .program import StraightLineProgram, run
from .rewrite import PublicScheme, SchemeConfig, TransformedProgram, augment_program
from .rng import Rng


def encrypt_input(p: StraightLineProgram, u: Sequence[int], key: PublicKey | AutomorphismPair,
                  cfg: SchemeConfig | PublicScheme, rng: Rng | None = None,
                  *, randomness: Sequence[int] | None = None) -> Ciphertext:
    """Apply the program's input map, then encrypt the resulting state."""
    return encrypt(evaluate(p.f_in, u), key, cfg, rng, randomness=randomness)


def run_transformed(tp: TransformedProgram, c: Ciphertext) -> Ciphertext:
    if c.key_fingerprint != tp.key_fingerprint:
        raise CryptoError("ciphertext and transformed program use different keys")
    if c.version != tp.version:
        raise CryptoError(f"ciphertext is version {c.version}, program expects {tp.version}")
    return Ciphertext(run(tp.program, c.values), c.version, c.key_fingerprint)


def decrypt_output(p: StraightLineProgram, c: Ciphertext, pair: AutomorphismPair, cfg: SchemeConfig) -> tuple[int, ...]:
    """Decrypt a result state, then apply the program's output map."""
    return evaluate(p.f_out, decrypt_result(c, pair, cfg).values)


@dataclass(frozen=True)
class Trial:
    u: tuple[int, ...]
    g: tuple[int, ...]
    expected: tuple[int, ...]
    got: tuple[int, ...] | None
    size_ok: bool
    error: str | None = None

    @property
    def ok(self) -> bool:
        return self.error is None and self.got == self.expected and self.size_ok


@dataclass
class VerifyReport:
    trials: list[Trial] = field(default_factory=list)
    bounds: BoundsReport | None = None

    @property
    def failures(self) -> list[Trial]:
        return [t for t in self.trials if not t.ok]

    @property
    def ok(self) -> bool:
        return not self.failures and (self.bounds is None or self.bounds.ok)

    def summary(self) -> str:
        lines = [f"trials       {len(self.trials)}", f"failures     {len(self.failures)}"]
        if self.bounds is not None:
            lines.append(f"bounds       {'ok' if self.bounds.ok else 'VIOLATED'}")
        for t in self.failures[:5]:
            why = t.error or ("size bound exceeded" if not t.size_ok else f"expected {t.expected}, got {t.got}")
            lines.append(f"counterexample u={t.u} g={t.g}: {why}")
        lines.append(f"result       {'PASS' if self.ok else 'FAIL'}")
        return "\n".join(lines)

    def to_json(self) -> dict:
        return {
            "ok": self.ok,
            "trials": len(self.trials),
            "failures": [
                {"u": [str(x) for x in t.u], "g": [str(x) for x in t.g],
                 "expected": [str(x) for x in t.expected],
                 "got": None if t.got is None else [str(x) for x in t.got],
                 "size_ok": t.size_ok, "error": t.error}
                for t in self.failures
            ],
            "bounds": self.bounds.to_json() if self.bounds else None,
        }


def run_trial(p: StraightLineProgram, tp: TransformedProgram, pair: AutomorphismPair, cfg: SchemeConfig,
              u: Sequence[int], g: Sequence[int]) -> Trial:
    u, g = tuple(u), tuple(g)
    expected = run(p, u)
    try:
        c = encrypt_input(p, u, pair, cfg, randomness=g)
        bound = ciphertext_size_bound(metrics(pair.phi), 0, input_magnitude(evaluate(p.f_in, u), cfg, g))
        size_ok = all(abs(v) <= bound for v in c.values)
        got = decrypt_output(p, run_transformed(tp, c), pair, cfg)
    except (CryptoError, ValueError) as exc:
        return Trial(u, g, expected, None, False, str(exc))
    return Trial(u, g, expected, got, size_ok)


def verify_pipeline(
    p: StraightLineProgram,
    tp: TransformedProgram,
    pair: AutomorphismPair,
    cfg: SchemeConfig,
    inputs: Iterable[Sequence[int]],
    rng: Rng,
    *,
    check_bounds: bool = True,
) -> VerifyReport:
    """Compare ``decrypt(run(F(P), encrypt(u, g)))`` with ``P(u)`` on every input.

    Each trial draws its randomness from its own split of ``rng``.
    """
    report = VerifyReport()
    for i, u in enumerate(inputs):
        g = draw_randomness(cfg, rng.split(f"trial{i}"))
        report.trials.append(run_trial(p, tp, pair, cfg, u, g))
    if check_bounds:
        report.bounds = transform_bound_check(augment_program(p, cfg).steps, tp.program.steps, pair)
    return report
