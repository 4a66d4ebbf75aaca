"""Straight-line programs over integer state vectors.

A program reads ``u ∈ Z^k``, sets the state ``x = f_in(u) ∈ Z^n``, applies
its steps (each a polynomial map ``Z^n -> Z^n``) in order and returns
``f_out(x) ∈ Z^l``.  The computation graph is a simple chain; every step is a
simultaneous update of the full state.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Sequence

from .poly import PolyMap, evaluate, polymap_from_json, polymap_to_json


class ProgramError(ValueError):
    pass


@dataclass(frozen=True)
class StraightLineProgram:
    k: int
    n: int
    l: int  # noqa: E741
    f_in: PolyMap
    steps: tuple[PolyMap, ...]
    f_out: PolyMap

    def __post_init__(self):
        object.__setattr__(self, "steps", tuple(self.steps))

    @classmethod
    def from_steps(cls, steps: Sequence[PolyMap], n: int | None = None) -> StraightLineProgram:
        """Program with identity input and output maps."""
        if n is None:
            n = steps[0].domain_dim
        ident = PolyMap.identity(n)
        return cls(n, n, n, ident, tuple(steps), ident)

    def __call__(self, u: Sequence[int]) -> tuple[int, ...]:
        return run(self, u)


@dataclass(frozen=True)
class ExecutionTrace:
    input: tuple[int, ...]
    states: tuple[tuple[int, ...], ...]
    output: tuple[int, ...]


@dataclass(frozen=True)
class ValidationReport:
    ok: bool
    diagnostics: tuple[str, ...] = field(default_factory=tuple)

    def __bool__(self) -> bool:
        return self.ok


def validate(p: StraightLineProgram) -> ValidationReport:
    """Dimensional checks; never raises."""
    diags = []
    try:
        if p.f_in.domain_dim != p.k:
            diags.append(f"input map takes {p.f_in.domain_dim} values, program declares k={p.k}")
        if p.f_in.codomain_dim != p.n:
            diags.append(f"state dimension mismatch: input map yields {p.f_in.codomain_dim}, n={p.n}")
        for i, step in enumerate(p.steps, 1):
            if not isinstance(step, PolyMap):
                diags.append(f"step {i} is not a polynomial map")
                continue
            if step.domain_dim != p.n or step.codomain_dim != p.n:
                diags.append(
                    f"state dimension mismatch: step {i} maps Z^{step.domain_dim} -> "
                    f"Z^{step.codomain_dim}, state is Z^{p.n}"
                )
        if p.f_out.domain_dim != p.n:
            diags.append(f"state dimension mismatch: output map reads {p.f_out.domain_dim}, n={p.n}")
        if p.f_out.codomain_dim != p.l:
            diags.append(f"output map yields {p.f_out.codomain_dim} values, program declares l={p.l}")
    except AttributeError as exc:  # malformed object handed in
        diags.append(f"malformed program: {exc}")
    return ValidationReport(not diags, tuple(diags))


def run(p: StraightLineProgram, u: Sequence[int], *, trace: bool = False):
    """Run ``p`` on ``u``; with ``trace=True`` return ``(output, ExecutionTrace)``."""
    report = validate(p)
    if not report.ok:
        raise ProgramError("; ".join(report.diagnostics))
    u = tuple(int(x) for x in u)
    if len(u) != p.k:
        raise ProgramError(f"program takes {p.k} inputs, got {len(u)}")
    x = evaluate(p.f_in, u)
    states = [x]
    for step in p.steps:
        x = evaluate(step, x)
        states.append(x)
    out = evaluate(p.f_out, x)
    if trace:
        return out, ExecutionTrace(u, tuple(states), out)
    return out


def program_to_json(p: StraightLineProgram) -> dict:
    return {
        "k": p.k,
        "n": p.n,
        "l": p.l,
        "f_in": polymap_to_json(p.f_in),
        "steps": [polymap_to_json(s) for s in p.steps],
        "f_out": polymap_to_json(p.f_out),
    }


def program_from_json(data: Mapping) -> StraightLineProgram:
    return StraightLineProgram(
        k=int(data["k"]),
        n=int(data["n"]),
        l=int(data["l"]),
        f_in=polymap_from_json(data["f_in"]),
        steps=tuple(polymap_from_json(s) for s in data["steps"]),
        f_out=polymap_from_json(data["f_out"]),
    )
