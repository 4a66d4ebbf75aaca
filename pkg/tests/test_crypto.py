import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import goldens
from tamefhe.automorphism import AutomorphismPair, gen_tame, plan_tame
from tamefhe.crypto import (
    Ciphertext,
    CryptoError,
    Plaintext,
    ciphertext_size_bound,
    decrypt,
    encrypt,
    input_magnitude,
)
from tamefhe.keys import PublicKey
from tamefhe.poly import Metrics, metrics
from tamefhe.rewrite import PublicScheme, SchemeConfig
from tamefhe.rng import Rng


def identity_v2():
    cfg = goldens.listed_scheme(rng_bound=10)
    return AutomorphismPair.identity(4), cfg


def test_v0_printed_key():
    pair = goldens.first_pair()
    cfg = SchemeConfig(0, 2, 2)
    c = encrypt((1, 1), pair, cfg)
    assert c.values == (-2, 3)
    assert decrypt(c, pair, cfg) == Plaintext((1, 1))


def test_v0_identity_key():
    pair = AutomorphismPair.identity(3)
    assert encrypt((4, -5, 6), pair, SchemeConfig(0, 3, 3)).values == (4, -5, 6)


def test_v2_identity_key_hand_values():
    pair, cfg = identity_v2()
    c = encrypt((2, 3), pair, cfg, randomness=(1, 2))
    assert c.values == (3, 5, 3, 2)
    assert decrypt(c, pair, cfg).values == (2, 3)


def test_public_key_encrypts_like_pair():
    pair = goldens.first_pair_4()
    cfg = goldens.listed_scheme()
    pub = PublicKey.from_pair(pair)
    a = encrypt((2, 3), pub, PublicScheme.of(cfg), randomness=(4, 5))
    b = encrypt((2, 3), pair, cfg, randomness=(4, 5))
    assert a == b


@pytest.mark.parametrize("version", [0, 1, 2])
def test_exhaustive_round_trip_small_keys(version):
    n = 2 if version == 0 else 4
    pair = gen_tame(plan_tame(n, 2, 100, 12), Rng(version))
    cfg = SchemeConfig.generate(version, 2, n, Rng(7), rng_bound=20)
    rng = Rng(1)
    bound_src = metrics(pair.phi)
    for u in itertools.product(range(-5, 6), repeat=2):
        c = encrypt(u, pair, cfg, rng.split(u))
        assert decrypt(c, pair, cfg).values == u
        g_free_bound = ciphertext_size_bound(bound_src, 0, input_magnitude(u, cfg))
        assert all(abs(v) <= g_free_bound for v in c.values)


@settings(max_examples=1000, deadline=None)
@given(st.tuples(st.integers(-10**9, 10**9), st.integers(-10**9, 10**9)),
       st.tuples(st.integers(0, 10**6), st.integers(0, 10**6)))
def test_v1_round_trip(u, g):
    pair = goldens.first_pair_4()
    cfg = SchemeConfig(1, 2, 4, rng_bound=10**6)
    c = encrypt(u, pair, cfg, randomness=g)
    assert decrypt(c, pair, cfg).values == u
    bound = ciphertext_size_bound(metrics(pair.phi), cfg.rng_bound, max(map(abs, u)))
    assert all(abs(v) <= bound for v in c.values)


def test_v2_masking_changes_ciphertext():
    pair, cfg = identity_v2()
    c1 = encrypt((2, 3), pair, cfg, randomness=(1, 2))
    c2 = encrypt((2, 3), pair, cfg, randomness=(2, 2))
    assert c1 != c2
    assert decrypt(c1, pair, cfg) == decrypt(c2, pair, cfg)


def test_size_bound_examples():
    assert ciphertext_size_bound(Metrics(2, 5, 3, 0), 0, 10) == 1500
    assert ciphertext_size_bound(Metrics(1, 1, 1, 1), 0, 7) == 7
    first = metrics(goldens.first_pair().phi)
    assert ciphertext_size_bound(first, 0, 1) == 15


def test_fingerprint_and_version_checks():
    pair = goldens.first_pair()
    cfg = SchemeConfig(0, 2, 2)
    c = encrypt((1, 1), pair, cfg)
    with pytest.raises(CryptoError):
        decrypt(Ciphertext(c.values, 0, "0" * 64), pair, cfg)
    with pytest.raises(CryptoError):
        decrypt(Ciphertext(c.values, 1, c.key_fingerprint), pair, cfg)
    with pytest.raises(CryptoError):
        encrypt((1, 1, 1), pair, cfg)


def test_randomness_required_for_padded_versions():
    pair = goldens.first_pair_4()
    with pytest.raises(CryptoError):
        encrypt((1, 1), pair, SchemeConfig(1, 2, 4, rng_bound=3))


def test_randomness_is_in_range_and_seeded():
    pair = AutomorphismPair.identity(4)
    cfg = SchemeConfig(1, 2, 4, rng_bound=3)
    tails = [encrypt((0, 0), pair, cfg, Rng(s)).values[2:] for s in range(200)]
    assert all(0 <= v <= 3 for t in tails for v in t)
    assert len(set(tails)) == 16
    assert encrypt((0, 0), pair, cfg, Rng(5)) == encrypt((0, 0), pair, cfg, Rng(5))


@settings(max_examples=200, deadline=None)
@given(st.integers(0, 10**6))
def test_ciphertext_json_round_trip(seed):
    rng = Rng(seed)
    c = Ciphertext(tuple(rng.randint(-10**30, 10**30) for _ in range(4)), rng.randint(0, 2), f"{seed:064x}")
    assert Ciphertext.from_json(c.to_json()) == c
