"""Seeded hash families over prime fields.

Two parties can only combine sketches if they used bit-identical hash
functions, so every random draw comes from a deterministic BLAKE2b
counter stream keyed by a shared 32-byte seed. Equal seeds and labels
imply equal functions.

The t-wise family is a random degree-(t-1) polynomial over GF(ell) with
ell the least prime >= 2*max(domain, range); outputs fold into the target
range as (h'(x) mod b) + 1, which costs at most a factor two in
per-value uniformity and keeps every output nonzero.
"""

from __future__ import annotations

from hashlib import blake2b

import numpy as np

from . import _kernels, gf


class SeedStream:
    """Deterministic byte stream: BLAKE2b(counter, key=seed, person=label)."""

    __slots__ = ("_seed", "_label", "_ctr", "_buf", "_pos")

    def __init__(self, seed: bytes, label: bytes):
        if len(seed) != 32:
            raise ValueError("seed must be exactly 32 bytes")
        if not 1 <= len(label) <= 16:
            raise ValueError("label must be 1..16 bytes")
        self._seed = seed
        self._label = label
        self._ctr = 0
        self._buf = b""
        self._pos = 0

    def take(self, nbytes: int) -> bytes:
        out = bytearray()
        while len(out) < nbytes:
            if self._pos == len(self._buf):
                h = blake2b(
                    self._ctr.to_bytes(8, "little"),
                    key=self._seed,
                    person=self._label.ljust(16, b"\x00"),
                    digest_size=64,
                )
                self._buf = h.digest()
                self._pos = 0
                self._ctr += 1
            want = nbytes - len(out)
            out += self._buf[self._pos : self._pos + want]
            self._pos += min(want, len(self._buf) - self._pos)
        return bytes(out)

    def u64(self) -> int:
        return int.from_bytes(self.take(8), "little")

    def below(self, bound: int) -> int:
        """Uniform draw from [0, bound) by rejection on 64-bit words."""
        if not 0 < bound <= 1 << 63:
            raise ValueError("bound out of range")
        limit = ((1 << 64) // bound) * bound
        while True:
            u = self.u64()
            if u < limit:
                return u % bound


def derive_seed(seed: bytes, label: bytes, index: int = 0) -> bytes:
    """A fresh 32-byte seed for an independent sub-purpose."""
    return blake2b(
        index.to_bytes(8, "little"),
        key=seed,
        person=label.ljust(16, b"\x00"),
        digest_size=32,
    ).digest()


class PolyHash:
    """m-wise independent hash [domain] -> {1..range_b} via a random
    polynomial over GF(ell)."""

    __slots__ = ("ell", "coeffs", "domain", "range_b")

    def __init__(self, ell: int, coeffs: tuple[int, ...], domain: int, range_b: int):
        if ell < 2 * max(domain, range_b) or not gf.is_prime(ell):
            raise ValueError("ell must be a prime >= 2*max(domain, range)")
        if not coeffs or any(not 0 <= c < ell for c in coeffs):
            raise ValueError("coefficients must lie in GF(ell)")
        self.ell = ell
        self.coeffs = tuple(int(c) for c in coeffs)
        self.domain = domain
        self.range_b = range_b

    @property
    def independence(self) -> int:
        return len(self.coeffs)

    def eval_raw(self, x: int) -> int:
        """Polynomial value before the range fold (for distribution tests)."""
        acc = 0
        for c in reversed(self.coeffs):
            acc = (acc * x + c) % self.ell
        return acc

    def eval(self, x: int) -> int:
        if not 1 <= x <= self.domain:
            raise ValueError(f"x = {x} outside domain [1, {self.domain}]")
        return (self.eval_raw(x) % self.range_b) + 1

    def eval_batch(self, xs: np.ndarray) -> np.ndarray:
        xs = np.asarray(xs, dtype=np.int64)
        if len(xs) and (xs.min() < 1 or xs.max() > self.domain):
            raise ValueError("index outside domain")
        if self.ell >= 1 << 62:  # beyond the kernels' integer width
            return np.asarray([self.eval(int(x)) for x in xs], dtype=np.int64)
        arr = np.asarray(self.coeffs, dtype=np.int64)
        return _kernels.poly_eval_fold(arr, xs, self.ell, self.range_b)

    def __eq__(self, other):
        return (
            isinstance(other, PolyHash)
            and self.ell == other.ell
            and self.coeffs == other.coeffs
            and self.domain == other.domain
            and self.range_b == other.range_b
        )

    def __repr__(self):
        return (
            f"PolyHash(ell={self.ell}, m={len(self.coeffs)}, "
            f"domain={self.domain}, range_b={self.range_b})"
        )


def sample_poly_hash(m: int, domain: int, range_b: int, stream: SeedStream) -> PolyHash:
    """Draw an m-wise independent PolyHash from the seeded stream."""
    if m < 1 or domain < 1 or range_b < 1:
        raise ValueError("m, domain and range must be positive")
    ell = gf.find_prime(2 * max(domain, range_b))
    coeffs = tuple(stream.below(ell) for _ in range(m))
    return PolyHash(ell, coeffs, domain, range_b)


class AffineHash:
    """Pairwise independent h(x) = (a*x + b) mod q on {0..q-1}."""

    __slots__ = ("q", "a", "b")

    def __init__(self, q: int, a: int, b: int):
        if not (0 <= a < q and 0 <= b < q):
            raise ValueError("a, b must lie in GF(q)")
        self.q = q
        self.a = a
        self.b = b

    def eval(self, x: int) -> int:
        if not 0 <= x < self.q:
            raise ValueError("x outside [0, q)")
        return (self.a * x + self.b) % self.q

    def __eq__(self, other):
        return (
            isinstance(other, AffineHash)
            and (self.q, self.a, self.b) == (other.q, other.a, other.b)
        )

    def __repr__(self):
        return f"AffineHash(q={self.q}, a={self.a}, b={self.b})"


def sample_affine(q: int, stream: SeedStream) -> AffineHash:
    if not gf.is_prime(q):
        raise ValueError("q must be prime")
    return AffineHash(q, stream.below(q), stream.below(q))
