"""Linear, mergeable sketches for the L1-distance between integer vectors.

Two parties holding x, y in {-M..M}^n and a shared 32-byte seed each build
a short sketch of their own vector; anyone holding both sketches can
subtract them and recover a (1 +/- eps)-approximation of ||x - y||_1 with
probability at least 2/3 (amplifiable by independent repetitions and a
median). Sketching time per update does not depend on eps.

>>> import numpy as np
>>> from l1diff import L1DiffSketch
>>> seed = bytes(32)
>>> a = L1DiffSketch.new(0.25, 1000, 50, seed)
>>> b = L1DiffSketch.new(0.25, 1000, 50, seed)
>>> x = np.zeros(1000, dtype=np.int64); x[7] = 50
>>> a.ingest_vector(x)
>>> b.ingest_vector(np.zeros(1000, dtype=np.int64))
>>> a.combine(b).estimate()
50
"""

from ._kernels import BACKEND
from .estimator import (
    IncompatibleSketches,
    L1DiffParams,
    L1DiffSketch,
    estimate_median,
)
from .gf import FieldCtx, build_tables, find_generator, find_prime, pow_tbl
from .hashing import AffineHash, PolyHash, SeedStream, sample_affine, sample_poly_hash
from .kset import EstimateFailure, KSetParams, KSetSketch
from .rangecount import RangeQuery, count_hits
from .rough import RoughSketch
from .sketchio import (
    BadMagic,
    CorruptParams,
    UnsupportedVersion,
    deserialize,
    serialize,
)
from .syndrome import DecodeFailure, SparseVector, decode, power_sums

__version__ = "0.1.0"

__all__ = [
    "AffineHash",
    "BACKEND",
    "BadMagic",
    "CorruptParams",
    "DecodeFailure",
    "EstimateFailure",
    "FieldCtx",
    "IncompatibleSketches",
    "KSetParams",
    "KSetSketch",
    "L1DiffParams",
    "L1DiffSketch",
    "PolyHash",
    "RangeQuery",
    "RoughSketch",
    "SeedStream",
    "SparseVector",
    "UnsupportedVersion",
    "build_tables",
    "count_hits",
    "decode",
    "deserialize",
    "estimate_median",
    "find_generator",
    "find_prime",
    "pow_tbl",
    "power_sums",
    "sample_affine",
    "sample_poly_hash",
    "serialize",
    "sigma",
]

from .kset import sigma  # noqa: E402  (re-export after __all__ for clarity)
