"""Hot-loop kernels with a compiled core and a pure-Python fallback.

The compiled Cython module is selected at import when available; setting
L1DIFF_PURE_KERNELS=1 forces the fallback. Both backends implement the
same functions with identical integer semantics, so sketches built by one
combine with sketches built by the other (floating-point rough-estimator
rows may differ in the last ulp because numpy's tan and libm's tan are
distinct implementations).

Kernels:
  floor_sum(n, m, a, b)            sum of floor((a*i+b)/m) for i in [0, n)
  floor_sum_ops(...)               same, plus loop-iteration count
  count_range(a, b, m, x, r, c, d) hits of an arithmetic progression in [c, d]
  count_range_ops(...)             same, plus iteration count
  level_counts(...)                per-update hits in every dyadic level
  poly_eval_fold(...)              batched polynomial hash evaluation
  kset_apply(...)                  batched power-sum counter updates
  rough_apply(...)                 batched Cauchy-row accumulator updates
  decode_power_sums(...)           sparse recovery from 2s power sums
  build_exp_tables(p, g)           exp/dlog tables for GF(p)
"""

import os

if os.environ.get("L1DIFF_PURE_KERNELS", "0") not in ("", "0"):
    from . import _pure as _impl

    BACKEND = "pure"
else:
    try:
        from . import _core as _impl  # type: ignore[attr-defined]

        BACKEND = "compiled"
    except ImportError:
        from . import _pure as _impl

        BACKEND = "pure"

floor_sum = _impl.floor_sum
floor_sum_ops = _impl.floor_sum_ops
count_range = _impl.count_range
count_range_ops = _impl.count_range_ops
level_counts = _impl.level_counts
poly_eval_fold = _impl.poly_eval_fold
kset_apply = _impl.kset_apply
rough_apply = _impl.rough_apply
decode_power_sums = _impl.decode_power_sums
build_exp_tables = _impl.build_exp_tables
