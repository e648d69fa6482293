"""Bit-exact, versioned sketch serialization.

Layout (all little-endian, fixed width):

  magic  "L1DF" | version u16 | mode u8 (0 sketch, 1 exact)
  eps f64 | n u64 | m_raw u64 | seed 32 bytes
  q u64 | p u64 | levels u16 | k_level u64 | k_small u64
  payload

Sketch payload: level counters in level order, then the small-L1
counters (u32 each when p < 2^32, else u64), then the rough-estimator
rows as f64. Exact payload: the n-entry buffer as i64.

Hash functions are never stored; the seed in the params block determines
them, so a combiner can rebuild everything and verify compatibility.
The derived parameters are stored anyway and checked against the values
the header implies, which catches corruption and version drift.
"""

from __future__ import annotations

import struct

import numpy as np

from .estimator import L1DiffParams, L1DiffSketch
from .rough import ROWS

MAGIC = b"L1DF"
VERSION = 1

_HEADER = struct.Struct("<4sHBdQQ32sQQHQQ")


class BadMagic(Exception):
    """Not a sketch file."""


class UnsupportedVersion(Exception):
    """Format version this build does not understand."""


class CorruptParams(Exception):
    """Truncated payload or self-inconsistent parameter block."""


def _counter_dtype(p: int):
    return np.dtype("<u4") if p < 1 << 32 else np.dtype("<u8")


def serialize(sk: L1DiffSketch) -> bytes:
    pr = sk.params
    mode = 1 if pr.exact else 0
    p = 0 if pr.exact else sk.ctx.p
    head = _HEADER.pack(
        MAGIC, VERSION, mode, pr.eps, pr.n, pr.m_raw, sk.seed,
        pr.q, p, pr.levels, pr.k_level, pr.k_small,
    )
    if pr.exact:
        return head + sk.exact_buf.astype("<i8").tobytes()
    dt = _counter_dtype(p)
    chunks = [head]
    for tle in sk.tles:
        chunks.append(tle.x.astype(dt).tobytes())
    chunks.append(sk.tle_small.x.astype(dt).tobytes())
    chunks.append(sk.rough.acc.astype("<f8").tobytes())
    return b"".join(chunks)


def deserialize(data: bytes) -> L1DiffSketch:
    if len(data) < 4:
        raise CorruptParams("file shorter than the magic number")
    if data[:4] != MAGIC:
        raise BadMagic(f"magic {data[:4]!r}")
    if len(data) < _HEADER.size:
        raise CorruptParams("truncated header")
    (_, version, mode, eps, n, m_raw, seed, q, p, levels, k_level, k_small
     ) = _HEADER.unpack_from(data)
    if version != VERSION:
        raise UnsupportedVersion(f"version {version}, expected {VERSION}")
    if mode not in (0, 1):
        raise CorruptParams(f"unknown mode byte {mode}")
    try:
        params = L1DiffParams(eps, n, m_raw)
    except ValueError as exc:
        raise CorruptParams(str(exc)) from exc
    if params.exact != (mode == 1):
        raise CorruptParams("mode byte contradicts eps and n")
    sk = L1DiffSketch(params, seed)
    body = data[_HEADER.size:]
    if params.exact:
        if (q, p, levels, k_level, k_small) != (0, 0, 0, 0, 0):
            raise CorruptParams("nonzero sketch parameters in exact mode")
        if len(body) != 8 * n:
            raise CorruptParams("exact buffer length mismatch")
        sk.exact_buf = np.frombuffer(body, dtype="<i8").astype(np.int64)
        return sk
    derived = (params.q, sk.ctx.p, params.levels, params.k_level, params.k_small)
    if (q, p, levels, k_level, k_small) != derived:
        raise CorruptParams(
            f"stored parameters {(q, p, levels, k_level, k_small)} "
            f"disagree with derived {derived}"
        )
    dt = _counter_dtype(p)
    shapes = [t.x.shape for t in sk.tles] + [sk.tle_small.x.shape]
    need = sum(a * b for a, b in shapes) * dt.itemsize + ROWS * 8
    if len(body) != need:
        raise CorruptParams(f"payload is {len(body)} bytes, expected {need}")
    pos = 0
    targets = list(sk.tles) + [sk.tle_small]
    for tle, (rows, cols) in zip(targets, shapes):
        nbytes = rows * cols * dt.itemsize
        block = np.frombuffer(body, dtype=dt, count=rows * cols, offset=pos)
        arr = block.astype(np.int64).reshape(rows, cols)
        if arr.max(initial=0) >= p:
            raise CorruptParams("counter value outside [0, p)")
        tle.x = arr
        pos += nbytes
    sk.rough.acc = np.frombuffer(body, dtype="<f8", offset=pos).astype(np.float64)
    return sk


def write_file(path, sk: L1DiffSketch) -> int:
    blob = serialize(sk)
    with open(path, "wb") as fh:
        fh.write(blob)
    return len(blob)


def read_file(path) -> L1DiffSketch:
    with open(path, "rb") as fh:
        return deserialize(fh.read())
