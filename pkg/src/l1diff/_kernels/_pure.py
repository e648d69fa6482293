"""Pure-Python kernel implementations.

These are the reference semantics for the compiled core: plain integer
arithmetic (arbitrary precision, so no overflow concerns) plus numpy for
the batch loops. Slow on large streams, but correct everywhere; the
compiled backend restricts itself to moduli below 2^31 and is checked
against this module in the test suite.
"""

from __future__ import annotations

import math

import numpy as np

# splitmix64 constants, shared with the compiled backend
_PHI = 0x9E3779B97F4A7C15
_MIX1 = 0xBF58476D1CE4E5B9
_MIX2 = 0x94D049BB133111EB
_M64 = (1 << 64) - 1


# ----------------------------------------------------------------------
# floor sums and range counting


def _floor_sum_core(n: int, m: int, a: int, b: int) -> tuple[int, int]:
    """(sum_{i=0}^{n-1} floor((a*i + b) / m), loop iterations).

    Euclid-like descent with a reflection step that keeps a <= m/2, so the
    remaining range length at least halves per round: the iteration count
    is O(min(log a, log n)).
    """
    if n <= 0:
        return 0, 0
    total = 0
    sign = 1
    iters = 0
    if a < 0:
        q = (-a + m - 1) // m
        total -= q * (n * (n - 1) // 2)
        a += q * m
    if b < 0:
        q = (-b + m - 1) // m
        total -= q * n
        b += q * m
    while True:
        iters += 1
        if a >= m:
            total += sign * (n * (n - 1) // 2) * (a // m)
            a %= m
        if b >= m:
            total += sign * n * (b // m)
            b %= m
        if 2 * a > m:
            # sum = n(n-1)/2 - sum with (a, b) -> (m - a, m - 1 - b)
            total += sign * (n * (n - 1) // 2)
            sign = -sign
            a = m - a
            b = m - 1 - b
        y = a * n + b
        if y < m:
            return total, iters
        n, b, m, a = y // m, y % m, a, m


def floor_sum(n: int, m: int, a: int, b: int) -> int:
    if m <= 0:
        raise ValueError("modulus must be positive")
    return _floor_sum_core(n, m, a, b)[0]


def floor_sum_ops(n: int, m: int, a: int, b: int) -> tuple[int, int]:
    if m <= 0:
        raise ValueError("modulus must be positive")
    return _floor_sum_core(n, m, a, b)


def count_range_ops(
    a: int, b: int, m: int, x: int, r: int, c: int, d: int
) -> tuple[int, int]:
    """Hits of (a*(x+i) + b) mod m in [c, d] over i in [0, r], plus op count.

    Uses #{residue < t} = fs(n,m,a,b') - fs(n,m,a,b'-t); the interval count
    is the difference of two such prefix counts, which telescopes to two
    floor-sum evaluations.
    """
    a %= m
    bp = (a * (x % m) + b) % m
    n = r + 1
    s1, i1 = _floor_sum_core(n, m, a, bp - c)
    s2, i2 = _floor_sum_core(n, m, a, bp - d - 1)
    return s1 - s2, i1 + i2


def count_range(a: int, b: int, m: int, x: int, r: int, c: int, d: int) -> int:
    return count_range_ops(a, b, m, x, r, c, d)[0]


def level_counts(
    a: int,
    b: int,
    q: int,
    m_bound: int,
    levels: int,
    idxs: np.ndarray,
    vals: np.ndarray,
) -> tuple[np.ndarray, int]:
    """Per-update dyadic level counts for the subsampled structures.

    Update (i, v) stands for the item range starting at (i-1)*m_bound + 1 of
    length |v|; level j collects items whose hash lands in
    [2^(w-j), 2^(w-j+1) - 1] with w = floor(log2 q). Returns the counts
    matrix (len(idxs) x levels) and the total floor-sum iteration count.
    """
    w = q.bit_length() - 1
    out = np.zeros((len(idxs), levels), dtype=np.int64)
    iters = 0
    for u in range(len(idxs)):
        v = int(vals[u])
        if v == 0:
            continue
        n = abs(v)
        x = (int(idxs[u]) - 1) * m_bound + 1
        bp = (a * (x % q) + b) % q
        hi, it = _floor_sum_core(n, q, a, bp - (1 << w))
        iters += it
        for j in range(1, levels + 1):
            lo, it = _floor_sum_core(n, q, a, bp - (1 << (w - j)))
            iters += it
            out[u, j - 1] = lo - hi
            hi = lo
    return out, iters


# ----------------------------------------------------------------------
# batched hash evaluation


def poly_eval_fold(
    coeffs: np.ndarray, xs: np.ndarray, ell: int, fold: int
) -> np.ndarray:
    """((c_0 + c_1 x + ... ) mod ell mod fold) + 1 for every x, as int64."""
    cs = [int(c) for c in coeffs]
    xs = np.asarray(xs, dtype=np.int64)
    xmax = int(xs.max(initial=0))
    if (ell - 1) * xmax + ell < (1 << 63):
        acc = np.full(xs.shape, cs[-1], dtype=np.int64)
        for c in cs[-2::-1]:
            acc = (acc * xs + c) % ell
        return (acc % fold) + 1
    out = np.empty(xs.shape, dtype=np.int64)
    for i, x in enumerate(xs.tolist()):
        acc = cs[-1]
        for c in cs[-2::-1]:
            acc = (acc * x + c) % ell
        out[i] = (acc % fold) + 1
    return out


# ----------------------------------------------------------------------
# counter updates


def kset_apply(
    X: np.ndarray,
    rows: np.ndarray,
    dlogs: np.ndarray,
    vals: np.ndarray,
    t1: np.ndarray,
    p: int,
) -> None:
    """X[row, z-1] += v * g^(z * dlog) mod p for z in [1, 2s], per update."""
    two_s = X.shape[1]
    pm1 = p - 1
    zs = np.arange(1, two_s + 1, dtype=np.int64)
    for u in range(len(rows)):
        v = int(vals[u])
        if v == 0:
            continue
        row = X[int(rows[u])]
        idx = (zs * int(dlogs[u])) % pm1
        row += v * t1[idx].astype(np.int64)
        row %= p


# ----------------------------------------------------------------------
# rough-estimator rows


def _mix64(z: np.ndarray) -> np.ndarray:
    z = z.copy()
    z ^= z >> np.uint64(30)
    z *= np.uint64(_MIX1)
    z ^= z >> np.uint64(27)
    z *= np.uint64(_MIX2)
    z ^= z >> np.uint64(31)
    return z


def cauchy_rows(key: int, i: int, w_count: int) -> np.ndarray:
    """The w_count unit-Cauchy variates attached to coordinate i."""
    base = np.uint64((i - 1) * w_count)
    ctr = base + np.arange(1, w_count + 1, dtype=np.uint64)
    z = _mix64((np.uint64(key) + ctr * np.uint64(_PHI)))
    u = (z >> np.uint64(11)).astype(np.float64) * 2.0**-53
    return np.tan(np.pi * (u - 0.5))


def rough_apply(
    acc: np.ndarray, idxs: np.ndarray, vals: np.ndarray, key: int
) -> None:
    w_count = acc.shape[0]
    for u in range(len(idxs)):
        v = int(vals[u])
        if v == 0:
            continue
        acc += v * cauchy_rows(key, int(idxs[u]), w_count)


# ----------------------------------------------------------------------
# exp/dlog tables


def build_exp_tables(p: int, g: int) -> tuple[np.ndarray, np.ndarray]:
    pm1 = p - 1
    t1 = np.empty(pm1, dtype=np.uint32)
    blk = min(1 << 16, pm1)
    base = np.empty(blk, dtype=np.int64)
    acc = 1
    for i in range(blk):
        base[i] = acc
        acc = acc * g % p
    g_blk = pow(g, blk, p)
    start = 1
    pos = 0
    while pos < pm1:
        end = min(pos + blk, pm1)
        t1[pos:end] = (start * base[: end - pos]) % p
        start = start * g_blk % p
        pos = end
    t2 = np.zeros(p, dtype=np.uint32)
    t2[t1] = np.arange(pm1, dtype=np.uint32)
    return t1, t2

# ----------------------------------------------------------------------
# sparse recovery from power sums
#
# The sequence S_z = sum_x r_x * x^z (z = 1..2s) obeys a linear recurrence
# whose characteristic polynomial has the locations x as its roots.
# Berlekamp-Massey finds the minimal such polynomial; its roots are found
# by repeated quadratic-residue splitting with a deterministic shift
# sequence, and the values fall out of a small linear solve.


def _berlekamp_massey(s: list[int], p: int) -> tuple[list[int], int]:
    """Minimal LFSR (connection polynomial C, degree L) generating s over F_p."""
    n = len(s)
    C = [0] * (n + 1)
    B = [0] * (n + 1)
    C[0] = B[0] = 1
    L, m, b = 0, 1, 1
    for i in range(n):
        d = s[i] % p
        for j in range(1, L + 1):
            d = (d + C[j] * s[i - j]) % p
        if d == 0:
            m += 1
            continue
        coef = d * pow(b, p - 2, p) % p
        if 2 * L <= i:
            T = C[:]
            for j in range(n + 1 - m):
                if B[j]:
                    C[j + m] = (C[j + m] - coef * B[j]) % p
            L, B, b, m = i + 1 - L, T, d, 1
        else:
            for j in range(n + 1 - m):
                if B[j]:
                    C[j + m] = (C[j + m] - coef * B[j]) % p
            m += 1
    return C[: L + 1], L


def _poly_trim(f: list[int]) -> list[int]:
    while len(f) > 1 and f[-1] == 0:
        f.pop()
    return f or [0]


def _poly_eval(f: list[int], x: int, p: int) -> int:
    acc = 0
    for c in reversed(f):
        acc = (acc * x + c) % p
    return acc


def _poly_mod(f: list[int], g: list[int], p: int) -> list[int]:
    """f mod g for monic g, coefficients ascending."""
    dg = len(g) - 1
    if len(f) - 1 < dg:
        return _poly_trim(f[:])
    f = f[:]
    for i in range(len(f) - 1, dg - 1, -1):
        c = f[i]
        if c:
            f[i] = 0
            base = i - dg
            for j in range(dg):
                if g[j]:
                    f[base + j] = (f[base + j] - c * g[j]) % p
    return _poly_trim(f[:dg])


def _poly_divmod_monic(f: list[int], g: list[int], p: int) -> tuple[list[int], list[int]]:
    dg = len(g) - 1
    if len(f) - 1 < dg:
        return [0], _poly_trim(f[:])
    f = f[:]
    q = [0] * (len(f) - dg)
    for i in range(len(f) - 1, dg - 1, -1):
        c = f[i]
        if c:
            q[i - dg] = c
            f[i] = 0
            base = i - dg
            for j in range(dg):
                if g[j]:
                    f[base + j] = (f[base + j] - c * g[j]) % p
    return _poly_trim(q), _poly_trim(f[:dg])


def _poly_mulmod(f: list[int], g: list[int], mod: list[int], p: int) -> list[int]:
    res = [0] * (len(f) + len(g) - 1)
    for i, fi in enumerate(f):
        if fi:
            for j, gj in enumerate(g):
                if gj:
                    res[i + j] = (res[i + j] + fi * gj) % p
    return _poly_mod(res, mod, p)


def _poly_powmod(base: list[int], e: int, mod: list[int], p: int) -> list[int]:
    result = [1]
    base = _poly_mod(base, mod, p)
    while e:
        if e & 1:
            result = _poly_mulmod(result, base, mod, p)
        e >>= 1
        if e:
            base = _poly_mulmod(base, base, mod, p)
    return result


def _poly_gcd(f: list[int], g: list[int], p: int) -> list[int]:
    a = _poly_trim(f[:])
    b = _poly_trim(g[:])
    while not (len(b) == 1 and b[0] == 0):
        inv = pow(b[-1], p - 2, p)
        b = [c * inv % p for c in b]
        a, b = b, _poly_mod(a, b, p)
    if a[-1] != 1:
        inv = pow(a[-1], p - 2, p)
        a = [c * inv % p for c in a]
    return a


def _synth_div(f: list[int], root: int, p: int) -> list[int]:
    """Divide monic f by (X - root); remainder is known to vanish."""
    d = len(f) - 1
    q = [0] * d
    q[d - 1] = f[d]
    for i in range(d - 1, 0, -1):
        q[i - 1] = (f[i] + root * q[i]) % p
    return q


def _distinct_roots(P: list[int], p: int) -> list[int] | None:
    """All roots of monic P when it splits into distinct linear factors
    over F_p; None otherwise. Deterministic (fixed shift sequence)."""
    d = len(P) - 1
    if d == 0:
        return []
    if d >= 2:
        # P splits squarefree over F_p iff P divides X^p - X
        xp = _poly_powmod([0, 1], p, P, p)
        if xp != [0, 1]:
            return None
    roots: list[int] = []
    stack = [P]
    shift = 0
    budget = 512
    while stack:
        f = stack.pop()
        while True:
            df = len(f) - 1
            if df == 0:
                break
            if df == 1:
                roots.append((-f[0]) % p)
                break
            budget -= 1
            if budget < 0:
                return None
            aa = shift
            shift += 1
            if _poly_eval(f, (-aa) % p, p) == 0:
                roots.append((-aa) % p)
                f = _synth_div(f, (-aa) % p, p)
                continue
            h = _poly_powmod([aa, 1], (p - 1) // 2, f, p)
            h = h[:]
            h[0] = (h[0] - 1) % p
            g = _poly_gcd(h, f, p)
            dg = len(g) - 1
            if 0 < dg < df:
                q, _ = _poly_divmod_monic(f, g, p)
                stack.append(g)
                f = q
    return roots


def _solve_transposed_vandermonde(
    roots: list[int], rhs: list[int], p: int
) -> list[int] | None:
    """Solve sum_m r_m * roots[m]^z = rhs[z-1] for z = 1..d (Gaussian)."""
    d = len(roots)
    M = []
    pw = [1] * d
    for z in range(d):
        pw = [pw[m] * roots[m] % p for m in range(d)]
        M.append(pw[:] + [rhs[z] % p])
    for col in range(d):
        piv = None
        for rr in range(col, d):
            if M[rr][col]:
                piv = rr
                break
        if piv is None:
            return None
        M[col], M[piv] = M[piv], M[col]
        inv = pow(M[col][col], p - 2, p)
        M[col] = [v * inv % p for v in M[col]]
        for rr in range(d):
            if rr != col and M[rr][col]:
                c = M[rr][col]
                M[rr] = [(vr - c * vc) % p for vr, vc in zip(M[rr], M[col])]
    return [M[i][d] for i in range(d)]


def decode_power_sums(S, p: int, g: int, smax: int):
    """Recover the <= smax-sparse vector behind power sums S_1..S_2s.

    Returns (locations, values) sorted by location, both plain int lists,
    or None when no such vector explains S.
    """
    s_seq = [int(v) % p for v in S]
    n = len(s_seq)
    C, L = _berlekamp_massey(s_seq, p)
    if L > smax:
        return None
    if L == 0:
        return ([], []) if not any(s_seq) else None
    # characteristic polynomial, ascending: X^L + C[1] X^(L-1) + ... + C[L]
    P = [C[L - i] for i in range(L + 1)]
    if P[0] == 0:
        return None  # 0 is not a valid location
    roots = _distinct_roots(P, p)
    if roots is None or len(roots) != L:
        return None
    vals = _solve_transposed_vandermonde(roots, s_seq[:L], p)
    if vals is None or any(v == 0 for v in vals):
        return None
    # verify the full window
    pw = roots[:]
    for z in range(n):
        acc = 0
        for m in range(L):
            acc += vals[m] * pw[m]
            pw[m] = pw[m] * roots[m] % p
        if acc % p != s_seq[z]:
            return None
    order = sorted(range(L), key=lambda m: roots[m])
    return [roots[m] for m in order], [vals[m] for m in order]
