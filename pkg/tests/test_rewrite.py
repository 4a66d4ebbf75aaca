import warnings

import pytest

import goldens
from tamefhe.automorphism import AutomorphismPair, gen_tame, plan_tame
from tamefhe.frontend import parse_polymap, parse_program
from tamefhe.pipeline import decrypt_output, encrypt_input, run_transformed, verify_pipeline
from tamefhe.poly import compose, evaluate
from tamefhe.program import run
from tamefhe.rewrite import (
    MixingWarning,
    SchemeConfig,
    SchemeError,
    TransformedProgram,
    augment_program,
    build_fhe,
    emit_pseudocode,
    encrypt_program,
    identity_program,
    rewrite_step,
)
from tamefhe.rng import Rng

XY = ["Y1", "Y2"]


def test_rewrite_step_reproduces_listing():
    f = goldens.fun1().steps[0]
    F = rewrite_step(f, goldens.first_pair())
    assert F[0] == parse_polymap([goldens.TEMP1], XY)[0]
    assert F[1] == parse_polymap([goldens.TEMP2], XY)[0]
    assert F[0].coefficient((4, 1)) == 1664 and F[1].coefficient((4, 1)) == -3328
    assert F[0].coefficient((4, 2)) == 1920
    assert F[0].homogeneous_part(1) == parse_polymap(["-3*Y1 - 2*Y2"], XY)[0]
    assert F[0].constant_term() == 0


def test_rewrite_with_identity_and_swap():
    f = goldens.fun1().steps[0]
    assert rewrite_step(f, AutomorphismPair.identity(2)) == f
    swap = parse_polymap(["X2", "X1"], goldens.XS2)
    F = rewrite_step(f, AutomorphismPair.from_maps(swap, swap))
    assert F == parse_polymap(["X1*X2", "X1 + X2"], goldens.XS2)


def test_rewrite_dimension_mismatch():
    with pytest.raises(SchemeError):
        rewrite_step(goldens.fun1().steps[0], AutomorphismPair.identity(3))


def test_conjugation_law():
    pair = gen_tame(plan_tame(3, 2, 100, 12), Rng(1))
    p = goldens.random_program(Rng(2), 3, steps=2)
    f, g = p.steps
    assert rewrite_step(compose(f, g), pair) == compose(rewrite_step(f, pair), rewrite_step(g, pair))


def test_encrypt_program_printed_key():
    ep = encrypt_program(goldens.fun1(), goldens.first_pair())
    assert run(ep, (2, 3)) == (5, 6)
    assert encrypt_program(goldens.fun1(), AutomorphismPair.identity(2)) == goldens.fun1()


@pytest.mark.parametrize("seed", range(100))
def test_encrypt_program_random(seed):
    rng = Rng(seed)
    n = rng.randint(2, 4)
    p = goldens.random_program(rng.split("p"), n, steps=rng.randint(1, 2))
    pair = gen_tame(plan_tame(n, 2, 50, 8), rng.split("key"))
    u = tuple(rng.randint(-5, 5) for _ in range(n))
    assert run(encrypt_program(p, pair), u) == run(p, u)


def test_version0_single_step_matches_rewrite():
    pair = goldens.first_pair()
    tp = build_fhe(goldens.fun1(), pair, SchemeConfig(0, 2, 2))
    assert tp.program.steps == (rewrite_step(goldens.fun1().steps[0], pair),)
    assert tp.program.f_in.is_identity() and tp.program.f_out.is_identity()
    assert tp.key_fingerprint == pair.fingerprint


def test_version2_listed_scheme_sweep():
    key = gen_tame(plan_tame(4, 4, 10**6, 40, k=2), Rng(3))
    cfg = goldens.listed_scheme()
    p = goldens.fun1()
    tp = build_fhe(p, key, cfg)
    report = verify_pipeline(p, tp, key, cfg, [(2, 3)] * 100, Rng(9))
    assert report.ok, report.summary()
    assert len({t.g for t in report.trials}) > 1


def test_version2_states_depend_on_randomness():
    key = goldens.first_pair_4()
    cfg = goldens.listed_scheme()
    p = goldens.fun1()
    tp = build_fhe(p, key, cfg)
    traces = []
    for g in [(1, 2), (7, 3)]:
        c = encrypt_input(p, (2, 3), key, cfg, randomness=g)
        _, trace = run(tp.program, c.values, trace=True)
        traces.append(trace.states)
        assert decrypt_output(p, run_transformed(tp, c), key, cfg) == (5, 6)
    assert traces[0] != traces[1]


def test_version1_identity_program():
    key = gen_tame(plan_tame(4, 2, 10**4, 30), Rng(6))
    cfg = SchemeConfig(1, 2, 4, rng_bound=50)
    p = identity_program(2)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", MixingWarning)
        tp = build_fhe(p, key, cfg)
    rng = Rng(1)
    for i in range(50):
        u = (rng.randint(-99, 99), rng.randint(-99, 99))
        c = encrypt_input(p, u, key, cfg, rng.split(i))
        assert decrypt_output(p, run_transformed(tp, c), key, cfg) == u


def test_version1_mixing_warning():
    lo = parse_polymap(goldens.FIRST_PHI + ["X3", "X4"], goldens.XS4)
    hi = parse_polymap(goldens.FIRST_PSI + ["X3", "X4"], goldens.XS4)
    pair = AutomorphismPair.from_maps(lo, hi)
    with pytest.warns(MixingWarning):
        build_fhe(goldens.fun1(), pair, SchemeConfig(1, 2, 4, rng_bound=5))
    with warnings.catch_warnings():
        warnings.simplefilter("error", MixingWarning)
        build_fhe(goldens.fun1(), goldens.first_pair_4(), SchemeConfig(1, 2, 4, rng_bound=5))


def test_augmented_program_matches_listing():
    p_prime = augment_program(goldens.fun1(), goldens.listed_scheme())
    listing = parse_program(goldens.P_PRIME)
    assert p_prime.f_in == listing.f_in
    for g in [(1, 2), (0, 0), (-3, 5)]:
        assert run(p_prime, (2, 3) + g) == (5, 6)


@pytest.mark.parametrize("kwargs", [
    dict(version=0, m=2, n=3),
    dict(version=1, m=2, n=2),
    dict(version=2, m=2, n=4),
    dict(version=3, m=2, n=2),
])
def test_scheme_contract(kwargs):
    with pytest.raises(SchemeError):
        SchemeConfig(**kwargs)


def test_scheme_rejects_unverified_H():
    cfg = goldens.listed_scheme()
    G = ["g1", "g2"]
    bad = AutomorphismPair.from_maps(parse_polymap(goldens.H_FWD, G), parse_polymap(goldens.H_FWD, G))
    with pytest.raises(SchemeError):
        SchemeConfig(2, 2, 4, cfg.h, bad, cfg.K, 10)


def test_generated_scheme_defaults():
    cfg = SchemeConfig.generate(2, 2, 4, Rng(0))
    assert cfg.h == parse_polymap(goldens.H_MASK, ["g1", "g2"])
    assert cfg.H.verified and cfg.K.codomain_dim == 2
    one = SchemeConfig.generate(2, 3, 4, Rng(0))
    assert one.H.n == 1 and one.H.verified


def test_transformed_json_round_trip_hides_psi():
    key = goldens.first_pair_4()
    cfg = goldens.listed_scheme()
    tp = build_fhe(goldens.fun1(), key, cfg)
    data = tp.to_json()
    assert TransformedProgram.from_json(data).program == tp.program
    assert set(data["scheme"]) >= {"version", "m", "n", "key_fingerprint"}
    assert "H_inverse" not in data["scheme"] and "K" not in data["scheme"]
    assert SchemeConfig.from_json(cfg.private_json()) == cfg


def test_emit_pseudocode_round_trip():
    pair = goldens.first_pair()
    tp = build_fhe(goldens.fun1(), pair, SchemeConfig(0, 2, 2))
    text = emit_pseudocode(tp)
    assert "Y1new" in text and text.count("{") == 1
    back = parse_program(text)
    rng = Rng(4)
    for _ in range(50):
        y = (rng.randint(-10**6, 10**6), rng.randint(-10**6, 10**6))
        assert run(back, y) == run(tp.program, y)


def test_emit_identity_program():
    tp = build_fhe(identity_program(2), AutomorphismPair.identity(2), SchemeConfig(0, 2, 2))
    text = emit_pseudocode(tp)
    assert text.startswith("# F(P)") and "input W1, W2 -> W1, W2" in text and "output Y1, Y2" in text


def test_emit_parallels_encrypted_listing():
    key = goldens.first_pair_4()
    tp = build_fhe(goldens.fun1(), key, goldens.listed_scheme())
    back = parse_program(emit_pseudocode(tp))
    assert len(back.steps) == len(tp.program.steps) == 2
    assert back.steps == tp.program.steps


def test_pipeline_identity_key_is_behaviourally_plain():
    p = goldens.fun1()
    tp = build_fhe(p, AutomorphismPair.identity(2), SchemeConfig(0, 2, 2))
    for u in [(1, 2), (-3, 4)]:
        assert evaluate(tp.program.steps[0], u) == run(p, u)
