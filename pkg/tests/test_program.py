import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import goldens
from tamefhe.frontend import NotStraightLine, ParseError, parse_program, serialize_program
from tamefhe.poly import PolyMap, Polynomial
from tamefhe.program import (
    ProgramError,
    StraightLineProgram,
    program_from_json,
    program_to_json,
    run,
    validate,
)


def test_fun1_runs():
    p = goldens.fun1()
    assert run(p, (2, 3)) == (5, 6)
    assert run(p, (0, 0)) == (0, 0)
    assert p(( -4, 7)) == (3, -28)


def test_three_step_program():
    p = parse_program("state x1\nx1 = x1^2\nx1 = x1 + 1\nx1 = 2*x1\n")
    assert len(p.steps) == 3
    assert run(p, (2,)) == (10,)


def test_trace_matches_run():
    p = parse_program(goldens.P_PRIME)
    out, trace = run(p, (2, 3, 1, 2), trace=True)
    assert out == run(p, (2, 3, 1, 2)) == (5, 6)
    assert trace.states[0] == (3, 5, 3, 2)
    assert trace.states[1][:2] == (2, 3)
    assert len(trace.states) == len(p.steps) + 1


def test_p_prime_ignores_randomness():
    p = parse_program(goldens.P_PRIME)
    outs = {run(p, (2, 3, g1, g2)) for g1 in range(-5, 6) for g2 in range(-5, 6)}
    assert outs == {(5, 6)}


def test_arity_mismatch():
    with pytest.raises(ProgramError):
        run(goldens.fun1(), (1, 2, 3))


def test_validate_reports_dimension_mismatch():
    x = [Polynomial.var(2, i) for i in range(2)]
    bad = PolyMap.from_components([x[0] + x[1]], 2)
    p = StraightLineProgram(2, 2, 2, PolyMap.identity(2), (bad,), PolyMap.identity(2))
    report = validate(p)
    assert not report.ok
    assert any("state dimension mismatch" in d for d in report.diagnostics)
    with pytest.raises(ProgramError):
        run(p, (1, 1))
    assert validate(goldens.fun1()).ok


def test_validate_never_raises_on_garbage():
    p = StraightLineProgram(1, 1, 1, None, (), None)
    assert not validate(p).ok


def test_loop_rejected_with_rationale():
    with pytest.raises(NotStraightLine) as exc:
        parse_program(goldens.FUN5)
    msg = str(exc.value)
    assert "not straight-line" in msg and "ψ" in msg
    assert exc.value.line == 7


@pytest.mark.parametrize("text,needle", [
    ("state x1, x2, x3, x4\nx1 = x5\n", "unknown variable 'x5'"),
    ("state x1\nx1 = x1 / 2\n", "Div"),
    ("state x1\nx1 = x1 +\n", "syntax error"),
    ("x1 = 1\n", "state"),
    ("state x1\n{\nx1 = 2\n", "unclosed"),
    ("state x1, x2\ninput u1 -> u1\n", "state dimension mismatch"),
    ("state x1\nx1 = x1^x1\n", "exponent"),
    ("state x1\nif x1 then\n", "not straight-line"),
])
def test_parse_errors(text, needle):
    with pytest.raises(ParseError) as exc:
        parse_program(text)
    assert needle in str(exc.value)
    assert exc.value.line is not None


def test_block_temporaries_and_sequential_semantics():
    p = parse_program("state a, b\n{\n t := a\n a := b\n b := t\n}\n")
    assert run(p, (1, 2)) == (2, 1)
    q = parse_program("state a, b\na, b = b, a\n")
    assert q.steps == p.steps


def test_power_and_caret_agree():
    p = parse_program("state x\nx = Power(x, 3) - x^3 + x**2\n")
    assert run(p, (5,)) == (25,)


def test_comments_semicolons_and_big_literals():
    big = 10**50
    p = parse_program(f"# c\nstate x ; \nx := x + {big}; # trailing\n")
    assert run(p, (1,)) == (big + 1,)


def test_round_trips():
    p = goldens.fun1()
    assert parse_program(serialize_program(p)) == p
    assert program_from_json(program_to_json(p)) == p
    q = parse_program(goldens.P_PRIME)
    assert parse_program(serialize_program(q)) == q


@st.composite
def programs(draw):
    n = draw(st.integers(1, 3))
    k = draw(st.integers(0, 3))

    def pmap(dom, cod):
        comps = [Polynomial(dom, draw(st.lists(
            st.tuples(st.tuples(*[st.integers(0, 2)] * dom), st.integers(-9, 9)), max_size=3)))
            for _ in range(cod)]
        return PolyMap.from_components(comps, dom)

    steps = tuple(pmap(n, n) for _ in range(draw(st.integers(0, 3))))
    l = draw(st.integers(1, 3))  # noqa: E741
    return StraightLineProgram(k, n, l, pmap(k, n), steps, pmap(n, l))


@settings(max_examples=200, deadline=None)
@given(programs(), st.lists(st.integers(-20, 20), min_size=3, max_size=3))
def test_program_round_trips_and_trace(p, u):
    assert parse_program(serialize_program(p)) == p
    assert program_from_json(program_to_json(p)) == p
    u = u[: p.k]
    out, trace = run(p, u, trace=True)
    assert out == run(p, u) == trace.output
