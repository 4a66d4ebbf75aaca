"""Text format for straight-line programs.

    # adds and multiplies two numbers
    state x1, x2
    input u1, u2 -> u1, u2
    x1, x2 = x1 + x2, x1 * x2
    output x1, x2

A line ``a, b = e1, e2`` is one simultaneous step.  A ``{ ... }`` block is
also one step: its lines run in order, and any target that is not a state
variable is a temporary local to the block.  ``:=`` may replace ``=``,
``^`` and ``Power(a, n)`` mean exponentiation, and trailing ``;`` is ignored.
Expressions are parsed with :mod:`ast`, so integer literals have no size limit.
"""

from __future__ import annotations

import ast
import re
from typing import Mapping, Sequence

from .poly import PolyMap, Polynomial, format_polynomial
from .program import StraightLineProgram


class ParseError(ValueError):
    def __init__(self, message: str, line: int | None = None, col: int | None = None):
        self.line, self.col = line, col
        where = ""
        if line is not None:
            where = f"line {line}" + (f", col {col}" if col is not None else "") + ": "
        super().__init__(where + message)


class NotStraightLine(ParseError):
    pass


CONTROL_KEYWORDS = ("while", "for", "if", "else", "elif", "then", "do", "goto",
                    "until", "loop", "break", "continue", "repeat")
_CONTROL_RE = re.compile(r"\b(" + "|".join(CONTROL_KEYWORDS) + r")\b")
_NAME_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*$")

LEAK_RATIONALE = (
    "not straight-line: a loop or branch condition would have to be rewritten "
    "in the encrypted coordinates, and evaluating it on the host reveals part "
    "of the inverse map ψ, so only straight-line programs can be encrypted"
)


def _strip(line: str) -> str:
    line = line.split("#", 1)[0].split("//", 1)[0].strip()
    while line.endswith(";"):
        line = line[:-1].rstrip()
    return line


def reject_control_flow(text: str) -> None:
    """Raise :class:`NotStraightLine` at the first loop or branch keyword."""
    for lineno, raw in enumerate(text.splitlines(), 1):
        code = raw.split("#", 1)[0].split("//", 1)[0]
        m = _CONTROL_RE.search(code)
        if m:
            raise NotStraightLine(f"'{m.group(1)}' found; program is {LEAK_RATIONALE}",
                                  lineno, m.start() + 1)


def _names(text: str, lineno: int) -> list[str]:
    text = text.strip()
    if not text:
        return []
    names = [t.strip() for t in text.split(",")]
    for name in names:
        if not _NAME_RE.match(name):
            raise ParseError(f"invalid variable name {name!r}", lineno)
    return names


class _ExprBuilder:
    """Turns a Python AST expression into a Polynomial over a fixed variable set."""

    def __init__(self, env: Mapping[str, Polynomial], num_vars: int, lineno: int):
        self.env, self.num_vars, self.lineno = env, num_vars, lineno

    def fail(self, node, msg):
        raise ParseError(msg, self.lineno, getattr(node, "col_offset", None))

    def build(self, node) -> Polynomial:
        if isinstance(node, ast.Constant):
            if isinstance(node.value, bool) or not isinstance(node.value, int):
                self.fail(node, f"only integer literals are allowed, got {node.value!r}")
            return Polynomial.constant(self.num_vars, node.value)
        if isinstance(node, ast.Name):
            if node.id not in self.env:
                self.fail(node, f"unknown variable {node.id!r}")
            return self.env[node.id]
        if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
            v = self.build(node.operand)
            return -v if isinstance(node.op, ast.USub) else v
        if isinstance(node, ast.BinOp):
            if isinstance(node.op, ast.Pow):
                return self.build(node.left) ** self.exponent(node.right)
            left, right = self.build(node.left), self.build(node.right)
            if isinstance(node.op, ast.Add):
                return left + right
            if isinstance(node.op, ast.Sub):
                return left - right
            if isinstance(node.op, ast.Mult):
                return left * right
            self.fail(node, f"operator {type(node.op).__name__} is not allowed in a polynomial program")
        if isinstance(node, ast.Call) and isinstance(node.func, ast.Name) and node.func.id == "Power":
            if len(node.args) != 2:
                self.fail(node, "Power takes two arguments")
            return self.build(node.args[0]) ** self.exponent(node.args[1])
        self.fail(node, f"unsupported expression ({type(node).__name__})")

    def exponent(self, node) -> int:
        if isinstance(node, ast.Constant) and isinstance(node.value, int) and node.value >= 0:
            return node.value
        self.fail(node, "exponents must be non-negative integer literals")


def parse_expressions(text: str, env: Mapping[str, Polynomial], num_vars: int, lineno: int = 1) -> list[Polynomial]:
    """Parse a comma-separated list of polynomial expressions."""
    src = text.replace("^", "**")
    try:
        tree = ast.parse(f"({src},)", mode="eval")
    except SyntaxError as exc:
        raise ParseError(f"syntax error: {exc.msg}", lineno, max(1, (exc.offset or 2) - 1)) from None
    builder = _ExprBuilder(env, num_vars, lineno)
    return [builder.build(e) for e in tree.body.elts]


def parse_polynomial(text: str, names: Sequence[str]) -> Polynomial:
    """Parse one expression over the variables ``names``."""
    env = {name: Polynomial.var(len(names), i) for i, name in enumerate(names)}
    polys = parse_expressions(text, env, len(names))
    if len(polys) != 1:
        raise ParseError(f"expected one expression, got {len(polys)}")
    return polys[0]


def parse_polymap(texts: Sequence[str], names: Sequence[str]) -> PolyMap:
    return PolyMap.from_components([parse_polynomial(t, names) for t in texts], len(names))


def _split_assignment(line: str, lineno: int) -> tuple[list[str], str]:
    m = re.match(r"^([^=:]*?)\s*(:=|=)\s*(.*)$", line)
    if not m or "==" in line:
        raise ParseError(f"expected an assignment, got {line!r}", lineno)
    return _names(m.group(1), lineno), m.group(3)


def parse_program(text: str) -> StraightLineProgram:
    reject_control_flow(text)
    state: list[str] | None = None
    inputs: list[str] | None = None
    f_in = f_out = None
    steps: list[PolyMap] = []
    block: dict[str, Polynomial] | None = None
    block_start = 0

    def state_env() -> dict[str, Polynomial]:
        return {name: Polynomial.var(len(state), i) for i, name in enumerate(state)}

    def assign(env, line, lineno, allow_temps):
        targets, rhs = _split_assignment(line, lineno)
        values = parse_expressions(rhs, env, len(state), lineno)
        if len(values) != len(targets):
            raise ParseError(f"{len(targets)} targets but {len(values)} expressions", lineno)
        for t, v in zip(targets, values):
            if t not in state and not allow_temps:
                raise ParseError(f"{t!r} is not a state variable", lineno)
            if inputs and t in inputs:
                raise ParseError(f"cannot assign to input {t!r}", lineno)
            env[t] = v

    for lineno, raw in enumerate(text.splitlines(), 1):
        line = _strip(raw)
        if not line:
            continue
        word = line.split(None, 1)[0]
        rest = line[len(word):].strip()
        if block is not None:
            if line == "}":
                steps.append(PolyMap.from_components([block[s] for s in state], len(state)))
                block = None
                continue
            assign(block, line, lineno, allow_temps=True)
            continue
        if word == "program":
            continue
        if word == "state":
            if state is not None:
                raise ParseError("duplicate state declaration", lineno)
            state = _names(rest, lineno)
            if len(set(state)) != len(state):
                raise ParseError("duplicate state variable", lineno)
            continue
        if state is None:
            raise ParseError("the first statement must declare the state variables", lineno)
        if word == "input":
            if inputs is not None:
                raise ParseError("a program has exactly one input clause", lineno)
            names_part, arrow, exprs = rest.partition("->")
            inputs = _names(names_part, lineno)
            if set(inputs) & set(state):
                raise ParseError("input and state variables must have distinct names", lineno)
            env = {name: Polynomial.var(len(inputs), i) for i, name in enumerate(inputs)}
            if arrow:
                comps = parse_expressions(exprs, env, len(inputs), lineno) if exprs.strip() else []
            elif len(inputs) == len(state):
                comps = [env[name] for name in inputs]
            else:
                raise ParseError("input clause needs '-> expressions' when arity differs from state", lineno)
            if len(comps) != len(state):
                raise ParseError(
                    f"state dimension mismatch: input yields {len(comps)} values for {len(state)} state variables",
                    lineno)
            f_in = PolyMap.from_components(comps, len(inputs))
            continue
        if word == "output":
            if f_out is not None:
                raise ParseError("a program has exactly one output clause", lineno)
            f_out = PolyMap.from_components(parse_expressions(rest, state_env(), len(state), lineno), len(state))
            continue
        if f_out is not None:
            raise ParseError("statements after the output clause", lineno)
        if line == "{":
            block, block_start = state_env(), lineno
            continue
        env = state_env()
        assign(env, line, lineno, allow_temps=False)
        steps.append(PolyMap.from_components([env[s] for s in state], len(state)))

    if block is not None:
        raise ParseError("unclosed '{' block", block_start)
    if state is None:
        raise ParseError("empty program")
    if f_in is None:
        f_in = PolyMap.identity(len(state))
        inputs = list(state)
    if f_out is None:
        f_out = PolyMap.identity(len(state))
    return StraightLineProgram(f_in.domain_dim, len(state), f_out.codomain_dim, f_in, tuple(steps), f_out)


def _join(polys, names) -> str:
    return ", ".join(format_polynomial(p, names) for p in polys)


def serialize_program(
    p: StraightLineProgram,
    state_names: Sequence[str] | None = None,
    input_names: Sequence[str] | None = None,
) -> str:
    xs = list(state_names or [f"x{i + 1}" for i in range(p.n)])
    us = list(input_names or [f"u{i + 1}" for i in range(p.k)])
    lines = [f"state {', '.join(xs)}", f"input {', '.join(us)} -> {_join(p.f_in.components, us)}"]
    for step in p.steps:
        lines.append(f"{', '.join(xs)} = {_join(step.components, xs)}")
    lines.append(f"output {_join(p.f_out.components, xs)}")
    return "\n".join(lines) + "\n"
