"""Turnstile k-set sketch: recovers ||f||_1 exactly when ||f||_1 <= k.

Coordinates hash into B = ceil(k / ceil(log2 k)) buckets with a t-wise
independent h1; inside a bucket, a pairwise h2 places each coordinate at
a nonzero field element, and 2s counters per bucket accumulate the power
sums of the bucket's frequency vector mod p. With the prescribed t, s and
prime bound, every bucket is s-sparse and collision-free with probability
at least 3/4, in which case syndrome decoding returns each coordinate's
net frequency and the L1 falls out exactly.

Counters are linear in the stream, so two sketches built from the same
seed subtract counter-wise to form the sketch of the difference stream.
"""

from __future__ import annotations

import math
from functools import lru_cache

import numpy as np

from . import _kernels, syndrome
from .gf import FieldCtx, find_prime
from .hashing import PolyHash


class EstimateFailure(Exception):
    """A bucket failed to decode; the caller absorbs this in its error budget."""


class KSetParams:
    """All derived quantities for a sparsity budget k >= 4."""

    __slots__ = ("k", "t", "s", "buckets", "c")

    def __init__(self, k: int):
        if k < 4:
            raise ValueError("need k >= 4")
        lg = math.ceil(math.log2(k))
        self.k = k
        self.t = 2 * lg + 12
        self.s = 2 * self.t + lg
        self.buckets = -(-k // lg)
        self.c = 4 * (5 * lg + 24) ** 2 * self.buckets + 1

    def __eq__(self, other):
        return isinstance(other, KSetParams) and self.k == other.k

    def __repr__(self):
        return (
            f"KSetParams(k={self.k}, t={self.t}, s={self.s}, "
            f"buckets={self.buckets}, c={self.c})"
        )


@lru_cache(maxsize=4)
def ctx_for_budget(k: int) -> FieldCtx:
    """Shared field context for sparsity budget k (deterministic in k)."""
    return FieldCtx.for_prime(find_prime(KSetParams(k).c))


def sigma(alpha: int, p: int) -> int:
    """Interpret a residue as a signed frequency: alpha, or alpha - p above p/2."""
    return alpha if alpha <= p // 2 else alpha - p


class KSetSketch:
    """Counter state plus the hash functions that define its layout."""

    __slots__ = ("params", "ctx", "h1", "h2", "x")

    def __init__(self, params: KSetParams, ctx: FieldCtx, h1: PolyHash, h2: PolyHash):
        self.params = params
        self.ctx = ctx
        self.h1 = h1
        self.h2 = h2
        self.x = np.zeros((params.buckets, 2 * params.s), dtype=np.int64)

    @classmethod
    def new(cls, k: int, ctx: FieldCtx, h1: PolyHash, h2: PolyHash) -> "KSetSketch":
        """Fresh all-zero sketch; validates that ctx and hashes fit k.

        The context may carry a larger prime than k alone requires (level
        structures share one field), so the check is p >= C(k), not
        p in [C, 2C].
        """
        params = KSetParams(k)
        if ctx.p < params.c:
            raise ValueError(f"prime {ctx.p} below the k = {k} bound {params.c}")
        if 2 * params.s + 1 >= ctx.p:
            raise ValueError("prime too small for the syndrome length")
        if h1.range_b != params.buckets:
            raise ValueError(f"h1 range {h1.range_b} != bucket count {params.buckets}")
        if h2.range_b != ctx.p - 1:
            raise ValueError(f"h2 range {h2.range_b} != p - 1")
        if h1.domain != h2.domain:
            raise ValueError("h1 and h2 must share a domain")
        return cls(params, ctx, h1, h2)

    # -- updates -------------------------------------------------------

    def update(self, i: int, v: int) -> None:
        """Apply one stream token (i, v); v = 0 is a no-op."""
        if not 1 <= i <= self.h1.domain:
            raise ValueError(f"index {i} outside [1, {self.h1.domain}]")
        v %= self.ctx.p
        if v == 0:
            return
        row = self.h1.eval(i) - 1
        dlog = int(self.ctx.t2[self.h2.eval(i)])
        self._apply(
            np.asarray([row], dtype=np.int64),
            np.asarray([dlog], dtype=np.int64),
            np.asarray([v], dtype=np.int64),
        )

    def update_many(self, idxs: np.ndarray, vals: np.ndarray) -> None:
        """Batched tokens; evaluates h1/h2 vectorized then applies."""
        idxs = np.asarray(idxs, dtype=np.int64)
        vals = np.asarray(vals, dtype=np.int64) % self.ctx.p
        live = vals != 0
        if not live.all():
            idxs, vals = idxs[live], vals[live]
        if len(idxs) == 0:
            return
        rows = self.h1.eval_batch(idxs) - 1
        dlogs = self.ctx.t2[self.h2.eval_batch(idxs)].astype(np.int64)
        self._apply(rows, dlogs, vals)

    def _apply(self, rows: np.ndarray, dlogs: np.ndarray, vals: np.ndarray) -> None:
        """Counter core; vals already reduced mod p and nonzero."""
        _kernels.kset_apply(self.x, rows, dlogs, vals, self.ctx.t1, self.ctx.p)

    # -- queries -------------------------------------------------------

    def estimate(self) -> int:
        """Sum of |net frequency| over all buckets, via syndrome decoding.

        Exact (probability >= 3/4 over the hash draw) whenever the true
        ||f||_1 is at most k. Raises EstimateFailure if any bucket fails
        to decode or a decoded magnitude exceeds k, which cannot happen
        within the promise.
        """
        p = self.ctx.p
        total = 0
        for j in range(self.params.buckets):
            row = self.x[j]
            if not row.any():
                continue
            try:
                vec = syndrome.decode(row, self.ctx, self.params.s)
            except syndrome.DecodeFailure as exc:
                raise EstimateFailure(f"bucket {j}: {exc}") from exc
            for _, val in vec:
                signed = sigma(val, p)
                if abs(signed) > self.params.k:
                    raise EstimateFailure(
                        f"bucket {j}: magnitude {signed} exceeds budget {self.params.k}"
                    )
                total += abs(signed)
        return total

    def combine(self, other: "KSetSketch") -> "KSetSketch":
        """Counter-wise difference: the sketch of (my stream) + (other's, negated)."""
        if self.params != other.params or self.ctx != other.ctx:
            raise ValueError("sketch parameters differ")
        if self.h1 != other.h1 or self.h2 != other.h2:
            raise ValueError("sketches built from different hash functions")
        out = KSetSketch(self.params, self.ctx, self.h1, self.h2)
        out.x = (self.x - other.x) % self.ctx.p
        return out

    def copy(self) -> "KSetSketch":
        out = KSetSketch(self.params, self.ctx, self.h1, self.h2)
        out.x = self.x.copy()
        return out

    def state_bits(self) -> int:
        """Counter storage: buckets * 2s * ceil(log2 p) bits."""
        return self.params.buckets * 2 * self.params.s * math.ceil(
            math.log2(self.ctx.p)
        )
