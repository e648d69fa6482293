"""Count hits of an arithmetic progression mod m inside an interval.

count_hits answers |{ i in [0, r] : (a*(x+i) + b) mod m in [c, d] }| in
O(log min(a, r)) word operations instead of iterating the range. It is
the per-update workhorse of the level-subsampled sketch, where the range
is one coordinate's expanded item block and [c, d] is a dyadic slice of
the hash range.

The reduction: hits below a threshold t form a prefix count expressible
with two floor sums, and an interval is the difference of two prefixes,
which telescopes to exactly two floor-sum evaluations (see _kernels).
"""

from __future__ import annotations

from dataclasses import dataclass

from . import _kernels


@dataclass(frozen=True)
class RangeQuery:
    """One progression-vs-interval counting problem.

    a, b, c, d lie in {0..m-1}, the interval is [c, d] with c <= d, the
    progression visits (a*(x+i) + b) mod m for i = 0..r.
    """

    a: int
    b: int
    c: int
    d: int
    x: int
    r: int
    m: int

    def __post_init__(self):
        if self.m <= 0:
            raise ValueError("modulus must be positive")
        for name in ("a", "b", "c", "d"):
            v = getattr(self, name)
            if not 0 <= v < self.m:
                raise ValueError(f"{name} = {v} outside [0, {self.m})")
        if self.c > self.d:
            raise ValueError("need c <= d")
        if self.r < 0:
            raise ValueError("need r >= 0")
        if self.x < 0:
            raise ValueError("need x >= 0")


def count_hits(q: RangeQuery) -> int:
    """Exact number of progression points landing in [c, d]."""
    return _kernels.count_range(q.a, q.b, q.m, q.x, q.r, q.c, q.d)


def count_hits_ops(q: RangeQuery) -> tuple[int, int]:
    """(count, floor-sum loop iterations) for work-growth instrumentation."""
    return _kernels.count_range_ops(q.a, q.b, q.m, q.x, q.r, q.c, q.d)
