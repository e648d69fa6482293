"""Level-subsampled L1-difference sketch.

Each update (i, v) implicitly inserts the |v| items (i-1)M+1 .. (i-1)M+|v|
of a universe of size nM (signed by sgn v), turning the L1 of the net
frequency vector into the number of distinct surviving items. A pairwise
hash over GF(q) subsamples that universe at L dyadic levels; each level
feeds a k-set sketch, and at query time only the level whose expected
survivor count is about 1/eps'^2 gets decoded, scaled back up by the
sampling probability. A side k-set sketch answers small-L1 streams
exactly, and a rough estimator picks between the two paths.

Inputs are vectors over {-M_raw..M_raw}; ingestion shifts coordinates up
by M_raw so all sketched values are nonnegative (the shift cancels in
differences), making the internal magnitude bound M = 2*M_raw.

For eps below 1/sqrt(n) the sketch degenerates to an exact buffer, which
is smaller than any sketch would be.
"""

from __future__ import annotations

import math
import statistics

import numpy as np

from . import _kernels, kset
from .gf import find_prime
from .hashing import SeedStream, sample_affine, sample_poly_hash
from .kset import EstimateFailure, KSetParams, KSetSketch
from .rough import ROWS, RoughSketch


class IncompatibleSketches(ValueError):
    """Sketches disagree on parameters or seed and cannot be combined."""


class L1DiffParams:
    __slots__ = (
        "eps", "n", "m_raw", "m", "exact", "eps_p", "q", "w",
        "levels", "k_level", "k_small",
    )

    def __init__(self, eps: float, n: int, m_raw: int):
        if not 0 < eps <= 1:
            raise ValueError("eps must lie in (0, 1]")
        if n < 1 or m_raw < 1:
            raise ValueError("n and max magnitude must be positive")
        self.eps = float(eps)
        self.n = int(n)
        self.m_raw = int(m_raw)
        self.m = 2 * self.m_raw
        self.exact = self.eps < 1 / math.sqrt(self.n)
        self.eps_p = self.eps / 8
        if self.exact:
            self.q = self.w = self.levels = 0
            self.k_level = self.k_small = 0
            return
        self.q = find_prime(2 * self.n * self.m)
        if self.q > 4 * self.n * self.m:
            raise AssertionError("no prime in [2nM, 4nM]")
        self.w = self.q.bit_length() - 1
        self.levels = max(1, math.ceil(math.log2(self.eps_p**2 * self.n * self.m)))
        self.k_level = math.ceil(4 / self.eps_p**2)
        self.k_small = math.ceil(1 / self.eps_p**2)

    def _key(self):
        return (self.eps, self.n, self.m_raw)

    def __eq__(self, other):
        return isinstance(other, L1DiffParams) and self._key() == other._key()

    def __repr__(self):
        if self.exact:
            return f"L1DiffParams(eps={self.eps}, n={self.n}, m_raw={self.m_raw}, exact)"
        return (
            f"L1DiffParams(eps={self.eps}, n={self.n}, m_raw={self.m_raw}, "
            f"q={self.q}, levels={self.levels}, k_level={self.k_level}, "
            f"k_small={self.k_small})"
        )


class L1DiffSketch:
    __slots__ = (
        "params", "seed", "h", "ctx", "h1_level", "h1_small", "h2",
        "tles", "tle_small", "rough", "exact_buf",
    )

    def __init__(self, params: L1DiffParams, seed: bytes):
        if len(seed) != 32:
            raise ValueError("seed must be 32 bytes")
        self.params = params
        self.seed = seed
        if params.exact:
            self.h = self.ctx = None
            self.h1_level = self.h1_small = self.h2 = None
            self.tles = None
            self.tle_small = None
            self.rough = None
            self.exact_buf = np.zeros(params.n, dtype=np.int64)
            return
        self.exact_buf = None
        self.ctx = kset.ctx_for_budget(params.k_level)
        self.h = sample_affine(params.q, SeedStream(seed, b"affine"))
        kp_level = KSetParams(params.k_level)
        kp_small = KSetParams(params.k_small)
        # every level shares one field context and one (h1, h2); the
        # small-L1 sketch shares the field and h2 but needs its own h1
        # because its bucket count comes from its own k
        self.h1_level = sample_poly_hash(
            kp_level.t, params.n, kp_level.buckets, SeedStream(seed, b"h1-level")
        )
        self.h2 = sample_poly_hash(
            2, params.n, self.ctx.p - 1, SeedStream(seed, b"h2")
        )
        self.h1_small = sample_poly_hash(
            kp_small.t, params.n, kp_small.buckets, SeedStream(seed, b"h1-small")
        )
        self.tles = [
            KSetSketch.new(params.k_level, self.ctx, self.h1_level, self.h2)
            for _ in range(params.levels)
        ]
        self.tle_small = KSetSketch.new(
            params.k_small, self.ctx, self.h1_small, self.h2
        )
        self.rough = RoughSketch(SeedStream(seed, b"rough").u64(), params.n)

    @classmethod
    def new(cls, eps: float, n: int, m_raw: int, seed: bytes) -> "L1DiffSketch":
        return cls(L1DiffParams(eps, n, m_raw), seed)

    # -- ingestion ------------------------------------------------------

    def ingest_vector(self, values) -> None:
        """Feed a whole party vector (entries in {-M_raw..M_raw})."""
        values = np.asarray(values, dtype=np.int64)
        if values.shape != (self.params.n,):
            raise ValueError(f"expected {self.params.n} coordinates")
        if len(values) and int(np.abs(values).max()) > self.params.m_raw:
            raise ValueError(f"coordinate magnitude exceeds {self.params.m_raw}")
        idxs = np.arange(1, self.params.n + 1, dtype=np.int64)
        self.update_many(idxs, values + self.params.m_raw)

    def update(self, i: int, v: int) -> None:
        """One stream token in the shifted domain (|v| <= M)."""
        self.update_many(
            np.asarray([i], dtype=np.int64), np.asarray([v], dtype=np.int64)
        )

    def update_many(self, idxs, vals, stats: dict | None = None) -> None:
        """Batched stream tokens; optionally tallies per-op work in `stats`."""
        idxs = np.asarray(idxs, dtype=np.int64)
        vals = np.asarray(vals, dtype=np.int64)
        if len(idxs) != len(vals):
            raise ValueError("index/value length mismatch")
        if len(idxs) == 0:
            return
        if idxs.min() < 1 or idxs.max() > self.params.n:
            raise ValueError("index outside [1, n]")
        if int(np.abs(vals).max()) > self.params.m:
            raise ValueError(f"update magnitude exceeds internal bound {self.params.m}")
        if self.params.exact:
            np.add.at(self.exact_buf, idxs - 1, vals)
            return
        live = vals != 0
        if not live.all():
            idxs, vals = idxs[live], vals[live]
        if len(idxs) == 0:
            return
        pr = self.params
        p = self.ctx.p
        counts, fs_iters = _kernels.level_counts(
            self.h.a, self.h.b, pr.q, pr.m, pr.levels, idxs, vals
        )
        sg = np.where(vals < 0, -1, 1).astype(np.int64)
        rows_level = self.h1_level.eval_batch(idxs) - 1
        rows_small = self.h1_small.eval_batch(idxs) - 1
        dlogs = self.ctx.t2[self.h2.eval_batch(idxs)].astype(np.int64)
        for j in range(pr.levels):
            hit = counts[:, j] > 0
            if hit.any():
                self.tles[j]._apply(
                    rows_level[hit], dlogs[hit], (sg[hit] * counts[hit, j]) % p
                )
        self.tle_small._apply(rows_small, dlogs, vals % p)
        self.rough.update_many(idxs, vals)
        if stats is not None:
            u = len(idxs)
            two_s_level = 2 * self.tles[0].params.s
            two_s_small = 2 * self.tle_small.params.s
            counter_ops = int((counts > 0).sum()) * two_s_level + u * two_s_small
            hash_ops = u * (
                self.h1_level.independence + self.h1_small.independence
                + self.h2.independence + 1
            )
            stats["tokens"] = stats.get("tokens", 0) + u
            stats["floor_iters"] = stats.get("floor_iters", 0) + fs_iters
            stats["counter_ops"] = stats.get("counter_ops", 0) + counter_ops
            stats["hash_ops"] = stats.get("hash_ops", 0) + hash_ops
            stats["rough_rows"] = stats.get("rough_rows", 0) + u * ROWS

    # -- combination and queries ----------------------------------------

    def combine(self, other: "L1DiffSketch") -> "L1DiffSketch":
        """Sketch of (my stream) + (other's stream, negated)."""
        if self.params != other.params:
            raise IncompatibleSketches("parameters differ")
        if self.seed != other.seed:
            raise IncompatibleSketches("seeds differ")
        out = L1DiffSketch(self.params, self.seed)
        if self.params.exact:
            out.exact_buf = self.exact_buf - other.exact_buf
            return out
        out.tles = [a.combine(b) for a, b in zip(self.tles, other.tles)]
        out.tle_small = self.tle_small.combine(other.tle_small)
        out.rough = self.rough.combine(other.rough)
        return out

    def estimate(self):
        """(1 +/- eps)-approximation of the stream's L1, or EstimateFailure.

        Success probability >= 2/3 over the seed; the small-L1 path
        returns exactly. Only the selected k-set instance is decoded.
        """
        pr = self.params
        if pr.exact:
            return int(np.abs(self.exact_buf).sum())
        r_prime = self.rough.estimate()
        if r_prime <= pr.k_small:
            return self.tle_small.estimate()
        j = math.ceil(math.log2(pr.eps_p**2 * r_prime))
        if j < 1:
            raise AssertionError("rough estimate above k_small implies level >= 1")
        j = min(j, pr.levels)
        # q * 2^(j-w) is exactly 1 / Pr[item survives at level j]
        scale = pr.q / (1 << (pr.w - j))
        return scale * self.tles[j - 1].estimate()


def estimate_median(pairs) -> float:
    """Median estimate over independent sketch pairs (odd count).

    Failed repetitions are dropped; raises EstimateFailure when a
    majority fail.
    """
    pairs = list(pairs)
    if len(pairs) % 2 != 1:
        raise ValueError("need an odd number of repetitions")
    estimates = []
    failures = 0
    for a, b in pairs:
        try:
            estimates.append(a.combine(b).estimate())
        except EstimateFailure:
            failures += 1
    if 2 * failures > len(pairs):
        raise EstimateFailure(f"{failures} of {len(pairs)} repetitions failed")
    return statistics.median(estimates)
