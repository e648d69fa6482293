"""Prime-field context: prime search, generator search, exp/dlog tables.

The sketch does all counter arithmetic in GF(p) for a prime p chosen from
the sparsity budget. Exponentiation x^z is turned into two table lookups,
T1[(z * T2[x]) mod (p-1)], which is what makes each counter update O(1).

Every derivation here is deterministic, so two parties that agree on the
sparsity budget agree on p, g and the tables without communicating.
"""

from __future__ import annotations

import numpy as np

from . import _kernels

# Deterministic Miller-Rabin witness set, valid for all n < 3.3e24
# (covers every 64-bit input).
_MR_WITNESSES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)

_TABLE_LIMIT = 1 << 31  # table entries are stored as 32-bit words


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin primality test for n < 3.3e24."""
    if n < 2:
        return False
    for small in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % small == 0:
            return n == small
    d = n - 1
    r = 0
    while d % 2 == 0:
        d //= 2
        r += 1
    for a in _MR_WITNESSES:
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def find_prime(c: int) -> int:
    """Least prime p >= c. Always lands in [c, 2c] by Bertrand's postulate."""
    if c < 2:
        raise ValueError("need c >= 2")
    p = c
    while not is_prime(p):
        p += 1
    if p > 2 * c:  # cannot happen; guards a broken primality test
        raise AssertionError(f"no prime in [{c}, {2 * c}]")
    return p


def _prime_factors(n: int) -> list[int]:
    """Distinct prime factors by trial division (n stays small here)."""
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1 if d == 2 else 2
    if n > 1:
        out.append(n)
    return out

def find_generator(p: int) -> int:
    """Smallest generator of the multiplicative group mod p (p prime, p >= 3).

    g generates iff g^((p-1)/f) != 1 for every prime factor f of p-1.
    """
    if p < 3 or not is_prime(p):
        raise ValueError("need an odd prime")
    factors = _prime_factors(p - 1)
    for g in range(2, p):
        if all(pow(g, (p - 1) // f, p) != 1 for f in factors):
            return g
    raise AssertionError("unreachable: every prime has a generator")


def build_tables(p: int, g: int) -> tuple[np.ndarray, np.ndarray]:
    """Exp and dlog tables for GF(p) with generator g.

    Returns (t1, t2): t1[i] = g^i mod p for i in [0, p-2], and t2 indexed
    directly by field element with t2[x] = dlog_g(x) for x in [1, p-1]
    (t2[0] is unused padding so lookups skip an index shift).
    """
    if p >= _TABLE_LIMIT:
        raise ValueError(f"p = {p} too large for 32-bit table entries")
    return _kernels.build_exp_tables(p, g)


class FieldCtx:
    """Immutable GF(p) context shared by all sketches built from one budget.

    Tables are built lazily: combining and decoding sketches only needs
    (p, g), so a process that never feeds updates never pays the O(p)
    table construction.
    """

    __slots__ = ("p", "g", "_t1", "_t2")

    def __init__(self, p: int, g: int):
        self.p = p
        self.g = g
        self._t1 = None
        self._t2 = None

    @classmethod
    def for_prime(cls, p: int) -> "FieldCtx":
        return cls(p, find_generator(p))

    @classmethod
    def for_bound(cls, c: int) -> "FieldCtx":
        """Context for the least prime in [c, 2c]."""
        return cls.for_prime(find_prime(c))

    def _build(self) -> None:
        t1, t2 = build_tables(self.p, self.g)
        t1.flags.writeable = False
        t2.flags.writeable = False
        self._t1 = t1
        self._t2 = t2

    @property
    def t1(self) -> np.ndarray:
        if self._t1 is None:
            self._build()
        return self._t1

    @property
    def t2(self) -> np.ndarray:
        if self._t2 is None:
            self._build()
        return self._t2

    def __eq__(self, other):
        return isinstance(other, FieldCtx) and self.p == other.p and self.g == other.g

    def __hash__(self):
        return hash((self.p, self.g))

    def __repr__(self):
        return f"FieldCtx(p={self.p}, g={self.g})"


def pow_tbl(ctx: FieldCtx, x: int, z: int) -> int:
    """x^z mod p via the log tables; rejects x = 0 (no dlog)."""
    if x % ctx.p == 0:
        raise ValueError("0 has no discrete log")
    return int(ctx.t1[(z * int(ctx.t2[x % ctx.p])) % (ctx.p - 1)])
