"""Sparse recovery over GF(p) from power sums.

An s-sparse vector r indexed by the nonzero field elements is pinned down
by its first 2s power sums S_z = sum_x r_x * x^z. power_sums computes
them directly (it doubles as the test oracle); decode inverts the map or
reports DecodeFailure when no sparse explanation exists. Decoding is
deterministic, so equal syndromes always produce equal outputs.
"""

from __future__ import annotations

import numpy as np

from . import _kernels
from .gf import FieldCtx


class DecodeFailure(Exception):
    """No <= s-sparse vector explains the given power sums."""


class SparseVector:
    """Entries (location in F_p^*, nonzero value mod p), distinct locations."""

    __slots__ = ("entries",)

    def __init__(self, entries, p: int | None = None):
        pairs = sorted((int(x), int(v)) for x, v in entries)
        locs = [x for x, _ in pairs]
        if len(set(locs)) != len(locs):
            raise ValueError("duplicate locations")
        if p is not None:
            for x, v in pairs:
                if not 1 <= x <= p - 1:
                    raise ValueError(f"location {x} outside F_p^*")
                if not 1 <= v <= p - 1:
                    raise ValueError(f"value {v} is zero mod p")
        self.entries = tuple(pairs)

    def __len__(self):
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)

    def __eq__(self, other):
        return isinstance(other, SparseVector) and self.entries == other.entries

    def __repr__(self):
        return f"SparseVector({list(self.entries)!r})"


def power_sums(v: SparseVector, s: int, ctx: FieldCtx) -> np.ndarray:
    """S_z = sum_x v_x * x^z mod p for z = 1..2s.

    Evaluated with built-in modular exponentiation, independent of the
    table-driven path it is used to check.
    """
    p = ctx.p
    if len(v) > s:
        raise ValueError(f"{len(v)} entries exceed sparsity bound {s}")
    if 2 * s + 1 >= p:
        raise ValueError("need 2s + 1 < p")
    out = np.zeros(2 * s, dtype=np.int64)
    for z in range(1, 2 * s + 1):
        acc = 0
        for x, r in v:
            acc = (acc + r * pow(x, z, p)) % p
        out[z - 1] = acc
    return out


def decode(syndrome, ctx: FieldCtx, smax: int | None = None) -> SparseVector:
    """Recover the sparse vector whose power sums equal `syndrome`.

    syndrome holds 2s entries in [0, p); sparsity defaults to s. Raises
    DecodeFailure when the locator polynomial does not split into enough
    distinct roots in F_p^* or the recovered values are inconsistent.
    """
    arr = np.asarray(syndrome, dtype=np.int64)
    if arr.ndim != 1 or len(arr) == 0 or len(arr) % 2 != 0:
        raise ValueError("syndrome must be a nonempty even-length vector")
    p = ctx.p
    if arr.min() < 0 or arr.max() >= p:
        raise ValueError("syndrome entries must lie in [0, p)")
    if smax is None:
        smax = len(arr) // 2
    if 2 * smax + 1 >= p:
        raise ValueError("need 2s + 1 < p")
    out = _kernels.decode_power_sums(arr, p, ctx.g, smax)
    if out is None:
        raise DecodeFailure(f"no <= {smax}-sparse explanation")
    locs, vals = out
    return SparseVector(zip(locs, vals), p=p)
