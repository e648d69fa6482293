import itertools

import numpy as np
import pytest

from l1diff import BACKEND
from l1diff.gf import FieldCtx, find_prime
from l1diff.syndrome import DecodeFailure, SparseVector, decode, power_sums

from oracles import brute_power_sums

CTX11 = FieldCtx.for_prime(11)


def test_power_sums_empty():
    assert power_sums(SparseVector([]), 3, CTX11).tolist() == [0] * 6


def test_power_sums_single_spike_example():
    v = SparseVector([(3, 5)], p=11)
    assert power_sums(v, 1, CTX11).tolist() == [4, 1]


def test_power_sums_two_spikes_example():
    v = SparseVector([(2, 1), (5, 10)], p=11)
    got = power_sums(v, 2, CTX11).tolist()
    want = [(2**z + 10 * 5**z) % 11 for z in range(1, 5)]
    assert got == want == brute_power_sums(v.entries, 2, 11)


def test_power_sums_rejects_oversparse():
    v = SparseVector([(1, 1), (2, 1)], p=11)
    with pytest.raises(ValueError):
        power_sums(v, 1, CTX11)


def test_decode_all_zero():
    assert decode(np.zeros(8, dtype=np.int64), CTX11, 4) == SparseVector([])


def test_decode_single_spike_example():
    assert decode([4, 1], CTX11, 1) == SparseVector([(3, 5)])


def test_decode_validates_input():
    with pytest.raises(ValueError):
        decode([1, 2, 3], CTX11)  # odd length
    with pytest.raises(ValueError):
        decode([1, 11], CTX11, 1)  # out of field


def test_decode_deterministic():
    ctx = FieldCtx.for_prime(find_prime(30977))
    rng = np.random.default_rng(3)
    sup = rng.choice(np.arange(1, ctx.p), size=20, replace=False)
    v = SparseVector(((int(x), int(rng.integers(1, ctx.p))) for x in sup), p=ctx.p)
    sums = power_sums(v, 44, ctx)
    assert decode(sums, ctx, 44) == decode(sums, ctx, 44) == v


def test_exhaustive_small_field_round_trip():
    # literally all <= 2-sparse vectors over F_11
    locs = range(1, 11)
    vals = range(1, 11)
    for x in locs:
        for r in vals:
            v = SparseVector([(x, r)], p=11)
            assert decode(power_sums(v, 2, CTX11), CTX11, 2) == v
    for x1, x2 in itertools.combinations(locs, 2):
        for r1 in vals:
            for r2 in vals:
                v = SparseVector([(x1, r1), (x2, r2)], p=11)
                assert decode(power_sums(v, 2, CTX11), CTX11, 2) == v


@pytest.mark.skipif(BACKEND != "compiled", reason="slow on the pure backend")
def test_exhaustive_three_sparse_f11():
    locs = range(1, 11)
    vals = range(1, 11)
    for sup in itertools.combinations(locs, 3):
        for assign in itertools.product(vals, repeat=3):
            v = SparseVector(zip(sup, assign), p=11)
            assert decode(power_sums(v, 3, CTX11), CTX11, 3) == v


def test_randomized_round_trip_f31():
    ctx = FieldCtx.for_prime(31)
    rng = np.random.default_rng(4)
    for _ in range(1500):
        size = int(rng.integers(0, 4))
        sup = rng.choice(np.arange(1, 31), size=size, replace=False)
        v = SparseVector(((int(x), int(rng.integers(1, 31))) for x in sup), p=31)
        assert decode(power_sums(v, 3, ctx), ctx, 3) == v


def test_round_trip_at_k16_prime():
    # spec-scale round trip: s = 44 at the k = 16 prime (subset of acceptance)
    ctx = FieldCtx.for_prime(find_prime(30977))
    rng = np.random.default_rng(5)
    trials = 200 if BACKEND == "compiled" else 25
    for _ in range(trials):
        size = int(rng.integers(0, 45))
        sup = rng.choice(np.arange(1, ctx.p), size=size, replace=False)
        v = SparseVector(((int(x), int(rng.integers(1, ctx.p))) for x in sup), p=ctx.p)
        assert decode(power_sums(v, 44, ctx), ctx, 44) == v


def test_overloaded_support_fails():
    ctx = FieldCtx.for_prime(find_prime(30977))
    rng = np.random.default_rng(6)
    smax = 4
    sup = rng.choice(np.arange(1, ctx.p), size=smax + 1, replace=False)
    sums = brute_power_sums([(int(x), 1) for x in sup], smax, ctx.p)
    with pytest.raises(DecodeFailure):
        decode(np.asarray(sums), ctx, smax)


def test_sparse_vector_validation():
    with pytest.raises(ValueError):
        SparseVector([(1, 1), (1, 2)])  # duplicate location
    with pytest.raises(ValueError):
        SparseVector([(0, 1)], p=11)  # zero location
    with pytest.raises(ValueError):
        SparseVector([(3, 11)], p=11)  # zero value mod p
