from fractions import Fraction

import numpy as np
import pytest

from l1diff import _kernels
from l1diff.estimator import (
    IncompatibleSketches,
    L1DiffParams,
    L1DiffSketch,
    estimate_median,
)
from l1diff.gf import is_prime
from l1diff.kset import EstimateFailure, KSetSketch

SEED = bytes(range(32))


def test_mode_selection():
    assert not L1DiffParams(1.0, 4, 1).exact  # 1/sqrt(4) = 0.5 <= 1
    assert L1DiffParams(0.01, 100, 1).exact  # 0.01 < 0.1


def test_params_example_eps_08():
    p = L1DiffParams(0.8, 10_000, 50)
    assert p.eps_p == 0.1
    assert p.k_level == 400 and p.k_small == 100


def test_q_is_prime_in_range():
    p = L1DiffParams(0.5, 1000, 30)
    assert is_prime(p.q)
    assert 2 * 1000 * 60 <= p.q <= 4 * 1000 * 60


def test_params_validation():
    for bad in (0, -0.1, 1.5):
        with pytest.raises(ValueError):
            L1DiffParams(bad, 10, 5)
    with pytest.raises(ValueError):
        L1DiffParams(0.5, 0, 5)
    with pytest.raises(ValueError):
        L1DiffParams(0.5, 10, 0)


def test_level_shares_field_and_hashes():
    sk = L1DiffSketch.new(0.8, 500, 10, SEED)
    assert len(sk.tles) == sk.params.levels
    for tle in sk.tles:
        assert tle.ctx is sk.ctx and tle.h1 is sk.h1_level and tle.h2 is sk.h2
    assert sk.tle_small.ctx is sk.ctx and sk.tle_small.h2 is sk.h2
    assert sk.tle_small.h1.range_b == sk.tle_small.params.buckets


def test_level_counts_match_brute_expansion():
    # nM small enough to expand every update literally
    n, m_raw, eps = 50, 20, 1.0
    sk = L1DiffSketch.new(eps, n, m_raw, SEED)
    pr = sk.params
    rng = np.random.default_rng(30)
    w = pr.q.bit_length() - 1
    for _ in range(200):
        i = int(rng.integers(1, n + 1))
        v = int(rng.integers(1, pr.m + 1))
        items = (i - 1) * pr.m + 1 + np.arange(v)
        h = (sk.h.a * items + sk.h.b) % pr.q
        counts = _kernels.level_counts(
            sk.h.a, sk.h.b, pr.q, pr.m, pr.levels,
            np.asarray([i]), np.asarray([v]),
        )[0][0]
        below = int(np.count_nonzero(h < 1 << (w - pr.levels)))
        above = int(np.count_nonzero(h >= 1 << w))
        for j in range(1, pr.levels + 1):
            c_j, d_j = 1 << (w - j), (1 << (w - j + 1)) - 1
            assert counts[j - 1] == int(
                np.count_nonzero((h >= c_j) & (h <= d_j))
            )
        # partition of the expanded block's hash values
        assert counts.sum() + below + above == v


def test_update_end_to_end_cancellation():
    n = 40
    a = L1DiffSketch.new(1.0, n, 10, SEED)
    b = L1DiffSketch.new(1.0, n, 10, SEED)
    vec = np.arange(n) % 7 - 3
    a.ingest_vector(vec)
    b.ingest_vector(vec)
    c = a.combine(b)
    for tle in c.tles + [c.tle_small]:
        assert not tle.x.any()
    assert np.abs(c.rough.acc).max() < 1e-9
    assert c.estimate() == 0


def test_scaling_identity():
    pr = L1DiffParams(0.5, 1000, 30)
    for j in range(1, pr.levels + 1):
        p_j = Fraction(2 ** (pr.w - j), pr.q)
        assert Fraction(pr.q, 2 ** (pr.w - j)) == 1 / p_j


def test_order_independence():
    n = 60
    rng = np.random.default_rng(31)
    idxs = np.tile(np.arange(1, n + 1), 2)
    vals = rng.integers(-15, 16, 2 * n)
    a = L1DiffSketch.new(1.0, n, 10, SEED)
    b = L1DiffSketch.new(1.0, n, 10, SEED)
    a.update_many(idxs, vals)
    perm = rng.permutation(2 * n)
    b.update_many(idxs[perm], vals[perm])
    for ta, tb in zip(a.tles + [a.tle_small], b.tles + [b.tle_small]):
        assert (ta.x == tb.x).all()
    assert np.allclose(a.rough.acc, b.rough.acc, rtol=1e-9)


def test_combine_matches_replay_bytes():
    n, m_raw = 80, 12
    rng = np.random.default_rng(32)
    x = rng.integers(-m_raw, m_raw + 1, n)
    y = rng.integers(-m_raw, m_raw + 1, n)
    a = L1DiffSketch.new(1.0, n, m_raw, SEED)
    b = L1DiffSketch.new(1.0, n, m_raw, SEED)
    replay = L1DiffSketch.new(1.0, n, m_raw, SEED)
    a.ingest_vector(x)
    b.ingest_vector(y)
    idxs = np.arange(1, n + 1)
    replay.update_many(idxs, x + m_raw)
    replay.update_many(idxs, -(y + m_raw))
    combined = a.combine(b)
    for tc, tr in zip(combined.tles + [combined.tle_small],
                      replay.tles + [replay.tle_small]):
        assert (tc.x == tr.x).all()
    ref = np.abs(replay.rough.acc)
    diff = np.abs(combined.rough.acc - replay.rough.acc)
    assert (diff <= 1e-9 * np.maximum(ref, 1.0)).all()


def test_update_validation():
    sk = L1DiffSketch.new(1.0, 10, 5, SEED)
    with pytest.raises(ValueError):
        sk.update(0, 1)
    with pytest.raises(ValueError):
        sk.update(11, 1)
    with pytest.raises(ValueError):
        sk.update(3, 11)  # beyond internal bound M = 10
    before = [t.x.copy() for t in sk.tles]
    sk.update(3, 0)  # no-op
    for prev, t in zip(before, sk.tles):
        assert (prev == t.x).all()


def test_ingest_rejects_out_of_range_vector():
    sk = L1DiffSketch.new(1.0, 10, 5, SEED)
    bad = np.zeros(10, dtype=np.int64)
    bad[4] = 6
    with pytest.raises(ValueError):
        sk.ingest_vector(bad)
    with pytest.raises(ValueError):
        sk.ingest_vector(np.zeros(9, dtype=np.int64))


def test_exact_mode_matches_direct_sum():
    n = 100
    rng = np.random.default_rng(33)
    x = rng.integers(-50, 51, n)
    y = rng.integers(-50, 51, n)
    a = L1DiffSketch.new(0.05, n, 50, SEED)  # 0.05 < 0.1 = 1/sqrt(n)
    b = L1DiffSketch.new(0.05, n, 50, SEED)
    assert a.params.exact
    a.ingest_vector(x)
    b.ingest_vector(y)
    assert a.combine(b).estimate() == int(np.abs(x - y).sum())


def test_incompatible_sketches_rejected():
    a = L1DiffSketch.new(1.0, 10, 5, SEED)
    b = L1DiffSketch.new(1.0, 10, 5, bytes(32))
    with pytest.raises(IncompatibleSketches):
        a.combine(b)
    c = L1DiffSketch.new(1.0, 11, 5, SEED)
    with pytest.raises(IncompatibleSketches):
        a.combine(c)


def test_estimate_median_basics():
    n, m_raw = 60, 8
    rng = np.random.default_rng(34)
    x = rng.integers(-m_raw, m_raw + 1, n)
    y = rng.integers(-m_raw, m_raw + 1, n)
    pairs = []
    for rep in range(3):
        seed = bytes([rep]) + bytes(31)
        a = L1DiffSketch.new(1.0, n, m_raw, seed)
        b = L1DiffSketch.new(1.0, n, m_raw, seed)
        a.ingest_vector(x)
        b.ingest_vector(y)
        pairs.append((a, b))
    single = pairs[0][0].combine(pairs[0][1]).estimate()
    assert estimate_median(pairs[:1]) == single
    med = estimate_median(pairs)
    assert med in sorted(a.combine(b).estimate() for a, b in pairs)
    with pytest.raises(ValueError):
        estimate_median(pairs[:2])  # even count


def test_estimate_median_majority_failure(monkeypatch):
    n, m_raw = 60, 8
    pairs = []
    for rep in range(3):
        seed = bytes([rep]) + bytes(31)
        a = L1DiffSketch.new(1.0, n, m_raw, seed)
        b = L1DiffSketch.new(1.0, n, m_raw, seed)
        pairs.append((a, b))

    def boom(self):
        raise EstimateFailure("forced")

    monkeypatch.setattr(KSetSketch, "estimate", boom)
    with pytest.raises(EstimateFailure):
        estimate_median(pairs)


def test_small_l1_branch_returns_exact_int():
    n, m_raw = 200, 10
    rng = np.random.default_rng(35)
    x = rng.integers(-m_raw, m_raw + 1, n)
    y = x.copy()
    flips = rng.choice(n, size=10, replace=False)
    y[flips] = rng.integers(-m_raw, m_raw + 1, 10)
    true = int(np.abs(x - y).sum())
    a = L1DiffSketch.new(0.8, n, m_raw, SEED)
    b = L1DiffSketch.new(0.8, n, m_raw, SEED)
    assert true <= a.params.k_small
    a.ingest_vector(x)
    b.ingest_vector(y)
    est = a.combine(b).estimate()
    assert isinstance(est, int) and est == true
