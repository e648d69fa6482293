"""Built-in oracle checks for the CLI's selftest command.

Each suite replays a scaled-down version of the library's correctness
arguments against an independent oracle: direct loops for range counting,
direct modular evaluation for syndromes, and exact L1 for the sketches.
Suites report an empirical success rate against a fixed threshold.
"""

from __future__ import annotations

import numpy as np

from . import kset as kset_mod
from . import rangecount, syndrome
from .estimator import L1DiffSketch
from .hashing import SeedStream, sample_poly_hash
from .kset import EstimateFailure, KSetParams, KSetSketch


class SuiteResult:
    __slots__ = ("name", "trials", "rate", "threshold")

    def __init__(self, name, trials, rate, threshold):
        self.name = name
        self.trials = trials
        self.rate = rate
        self.threshold = threshold

    @property
    def passed(self) -> bool:
        return self.trials == 0 or self.rate >= self.threshold


def _brute_count(q: rangecount.RangeQuery) -> int:
    i = np.arange(q.r + 1, dtype=np.int64)
    h = (q.a * (q.x + i) + q.b) % q.m
    return int(np.count_nonzero((h >= q.c) & (h <= q.d)))


def suite_rangecount(trials: int, rng: np.random.Generator) -> SuiteResult:
    good = 0
    for _ in range(trials):
        m = int(rng.integers(1, 10_000))
        a, b = int(rng.integers(m)), int(rng.integers(m))
        c = int(rng.integers(m))
        d = int(rng.integers(c, m))
        q = rangecount.RangeQuery(
            a, b, c, d, int(rng.integers(0, 1 << 40)), int(rng.integers(0, 1000)), m
        )
        good += rangecount.count_hits(q) == _brute_count(q)
    return SuiteResult("rangecount-oracle", trials, good / max(trials, 1), 1.0)


def suite_syndrome(trials: int, rng: np.random.Generator) -> SuiteResult:
    params = KSetParams(16)
    ctx = kset_mod.ctx_for_budget(16)
    s = params.s
    good = 0
    for _ in range(trials):
        support = rng.choice(np.arange(1, ctx.p), size=int(rng.integers(0, s + 1)),
                             replace=False)
        vec = syndrome.SparseVector(
            ((int(x), int(rng.integers(1, ctx.p))) for x in support), p=ctx.p
        )
        sums = syndrome.power_sums(vec, s, ctx)
        try:
            good += syndrome.decode(sums, ctx, s) == vec
        except syndrome.DecodeFailure:
            pass
    return SuiteResult("syndrome-roundtrip", trials, good / max(trials, 1), 1.0)


def suite_kset(trials: int, rng: np.random.Generator) -> SuiteResult:
    k, n = 16, 10_000
    params = KSetParams(k)
    ctx = kset_mod.ctx_for_budget(k)
    good = 0
    for _ in range(trials):
        seed = rng.bytes(32)
        h1 = sample_poly_hash(params.t, n, params.buckets, SeedStream(seed, b"h1"))
        h2 = sample_poly_hash(2, n, ctx.p - 1, SeedStream(seed, b"h2"))
        sk = KSetSketch.new(k, ctx, h1, h2)
        # adversarial load: k coordinates, half of them negative
        idxs = rng.choice(np.arange(1, n + 1), size=k, replace=False)
        vals = np.where(np.arange(k) % 2 == 0, 1, -1).astype(np.int64)
        sk.update_many(idxs, vals)
        try:
            good += sk.estimate() == k
        except EstimateFailure:
            pass
    return SuiteResult("kset-exactness", trials, good / max(trials, 1), 0.70)


def suite_end_to_end(trials: int, rng: np.random.Generator) -> SuiteResult:
    n, m_raw, eps = 512, 10, 0.5
    good = 0
    for _ in range(trials):
        seed = rng.bytes(32)
        x = rng.integers(-m_raw, m_raw + 1, n)
        y = rng.integers(-m_raw, m_raw + 1, n)
        exact = int(np.abs(x - y).sum())
        a = L1DiffSketch.new(eps, n, m_raw, seed)
        b = L1DiffSketch.new(eps, n, m_raw, seed)
        a.ingest_vector(x)
        b.ingest_vector(y)
        try:
            est = a.combine(b).estimate()
        except EstimateFailure:
            continue
        good += abs(est - exact) <= eps * exact
    return SuiteResult("end-to-end-accuracy", trials, good / max(trials, 1), 0.55)


def run_all(trials: int, seed: bytes) -> list[SuiteResult]:
    """All suites at the given per-suite trial count (0 = vacuous)."""
    rng = np.random.default_rng(np.frombuffer(seed[:16], dtype=np.uint64))
    return [
        suite_rangecount(trials, rng),
        suite_syndrome(trials, rng),
        suite_kset(trials, rng),
        suite_end_to_end(max(1, trials // 20) if trials else 0, rng),
    ]
