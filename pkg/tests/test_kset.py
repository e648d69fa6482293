import numpy as np
import pytest

from l1diff import _kernels
from l1diff.gf import FieldCtx, find_prime
from l1diff.hashing import PolyHash, SeedStream, sample_poly_hash
from l1diff.kset import EstimateFailure, KSetParams, KSetSketch, ctx_for_budget, sigma

SEED = bytes(range(32))
N = 10_000


def make_sketch(k=16, seed=SEED, n=N):
    params = KSetParams(k)
    ctx = ctx_for_budget(k)
    h1 = sample_poly_hash(params.t, n, params.buckets, SeedStream(seed, b"h1"))
    h2 = sample_poly_hash(2, n, ctx.p - 1, SeedStream(seed, b"h2"))
    return KSetSketch.new(k, ctx, h1, h2)


def test_params_k16_paper_values():
    p = KSetParams(16)
    assert (p.t, p.s, p.buckets, p.c) == (20, 44, 4, 30977)


def test_params_k256():
    p = KSetParams(256)
    assert (p.t, p.s, p.buckets) == (28, 64, 32)
    assert p.c == 4 * 64**2 * 32 + 1


def test_params_reject_small_k():
    with pytest.raises(ValueError):
        KSetParams(3)


def test_new_shape_and_zero_estimate():
    sk = make_sketch(16)
    assert sk.x.shape == (4, 88)
    assert sk.estimate() == 0


def test_equal_seeds_identical():
    a, b = make_sketch(), make_sketch()
    assert (a.x == b.x).all() and a.h1 == b.h1 and a.h2 == b.h2


def test_new_rejects_mismatches():
    params = KSetParams(16)
    ctx = ctx_for_budget(16)
    h1 = sample_poly_hash(params.t, N, params.buckets, SeedStream(SEED, b"h1"))
    h2 = sample_poly_hash(2, N, ctx.p - 1, SeedStream(SEED, b"h2"))
    small_ctx = FieldCtx.for_prime(11)
    with pytest.raises(ValueError):
        KSetSketch.new(16, small_ctx, h1, h2)
    bad_h1 = sample_poly_hash(params.t, N, 5, SeedStream(SEED, b"h1"))
    with pytest.raises(ValueError):
        KSetSketch.new(16, ctx, bad_h1, h2)
    bad_h2 = sample_poly_hash(2, N, 99, SeedStream(SEED, b"h2"))
    with pytest.raises(ValueError):
        KSetSketch.new(16, ctx, h1, bad_h2)


def test_larger_shared_prime_accepted():
    # a context sized for a bigger budget is valid for a smaller k
    ctx = ctx_for_budget(64)
    params = KSetParams(16)
    h1 = sample_poly_hash(params.t, N, params.buckets, SeedStream(SEED, b"h1"))
    h2 = sample_poly_hash(2, N, ctx.p - 1, SeedStream(SEED, b"h2"))
    sk = KSetSketch.new(16, ctx, h1, h2)
    sk.update(5, 3)
    sk.update(9, -2)
    assert sk.estimate() == 5


def test_update_cancellation():
    sk = make_sketch()
    sk.update(7, 3)
    sk.update(7, -3)
    assert not sk.x.any()


def test_update_rejects_bad_index():
    sk = make_sketch()
    with pytest.raises(ValueError):
        sk.update(0, 1)
    with pytest.raises(ValueError):
        sk.update(N + 1, 1)


def test_update_order_permutation_invariant():
    rng = np.random.default_rng(7)
    idxs = rng.integers(1, N + 1, 60)
    vals = rng.integers(-5, 6, 60)
    a, b = make_sketch(), make_sketch()
    a.update_many(idxs, vals)
    perm = rng.permutation(60)
    b.update_many(idxs[perm], vals[perm])
    assert (a.x == b.x).all()


def test_scalar_and_batch_update_agree():
    rng = np.random.default_rng(8)
    idxs = rng.integers(1, N + 1, 40)
    vals = rng.integers(-9, 10, 40)
    a, b = make_sketch(), make_sketch()
    a.update_many(idxs, vals)
    for i, v in zip(idxs.tolist(), vals.tolist()):
        b.update(i, v)
    assert (a.x == b.x).all()


def test_toy_counter_rule_powers_of_h2():
    # non-paper toy field: one update of +1 must add [e^1, e^2, ...] mod p
    p = 11
    t1, _ = _kernels.build_exp_tables(p, 2)
    x = np.zeros((1, 8), dtype=np.int64)
    dlog_of_3 = 8  # 2^8 mod 11 = 3
    _kernels.kset_apply(
        x,
        np.zeros(1, dtype=np.int64),
        np.asarray([dlog_of_3], dtype=np.int64),
        np.ones(1, dtype=np.int64),
        t1,
        p,
    )
    assert x[0].tolist() == [pow(3, z, p) for z in range(1, 9)]


def test_sigma_examples():
    assert sigma(8, 11) == -3
    assert sigma(3, 11) == 3
    assert sigma(5, 11) == 5
    assert sigma(6, 11) == -5


def test_collision_free_hashes_give_deterministic_exactness():
    # identity-polynomial hashes: distinct buckets/positions by construction
    k = 16
    params = KSetParams(k)
    ctx = ctx_for_budget(k)
    domain = 64
    h1 = PolyHash(find_prime(2 * domain), (0, 1), domain, params.buckets)
    h2 = PolyHash(find_prime(2 * (ctx.p - 1)), (0, 1), domain, ctx.p - 1)
    rng = np.random.default_rng(9)
    for _ in range(10):
        sk = KSetSketch.new(k, ctx, h1, h2)
        idxs = rng.choice(np.arange(1, domain + 1), size=8, replace=False)
        vals = rng.integers(-2, 3, 8)
        sk.update_many(idxs, vals)
        assert sk.estimate() == int(np.abs(vals).sum())


def test_estimate_monte_carlo_small_stream():
    hits = 0
    trials = 400
    for t in range(trials):
        sk = make_sketch(seed=t.to_bytes(4, "big") + bytes(28))
        sk.update(1, 5)
        sk.update(2, -3)
        try:
            hits += sk.estimate() == 8
        except EstimateFailure:
            pass
    assert hits >= 0.75 * trials


def test_combine_self_is_zero():
    sk = make_sketch()
    sk.update(3, 4)
    combined = sk.combine(sk)
    assert not combined.x.any()
    assert combined.estimate() == 0


def test_combine_matches_sign_flipped_replay():
    rng = np.random.default_rng(10)
    x = rng.integers(0, 8, 50)
    y = rng.integers(0, 8, 50)
    idxs = np.arange(1, 51)
    a, b, replay = make_sketch(), make_sketch(), make_sketch()
    a.update_many(idxs, x)
    b.update_many(idxs, y)
    replay.update_many(idxs, x)
    replay.update_many(idxs, -y)
    assert (a.combine(b).x == replay.x).all()


def test_combine_with_fresh_is_identity():
    sk = make_sketch()
    sk.update(5, 2)
    assert (sk.combine(make_sketch()).x == sk.x).all()


def test_combine_rejects_different_seeds():
    a = make_sketch(seed=bytes(32))
    b = make_sketch(seed=bytes(31) + b"\x01")
    with pytest.raises(ValueError):
        a.combine(b)


def test_split_streams_combine_like_one():
    # combine(a, b) sketches (stream_a) + (-stream_b); splitting a stream
    # as positives into a and sign-flipped into b reproduces the whole
    rng = np.random.default_rng(11)
    idxs = rng.integers(1, N + 1, 80)
    vals = rng.integers(-6, 7, 80)
    whole = make_sketch()
    whole.update_many(idxs, vals)
    a, b = make_sketch(), make_sketch()
    a.update_many(idxs[:50], vals[:50])
    b.update_many(idxs[50:], -vals[50:])
    assert (a.combine(b).x == whole.x).all()


def test_state_bits_formula():
    sk = make_sketch(16)
    assert sk.state_bits() == 4 * 88 * 15  # ceil(log2 30983) = 15
    assert sk.state_bits() <= 34 * 16 * 15
