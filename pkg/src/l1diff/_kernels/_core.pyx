# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled kernels; _pure.py holds the reference semantics.

Integer kernels assume moduli below 2^31 so that products fit in int64
(128-bit intermediates cover the few places that need more); inputs
outside that window are delegated to the pure backend, which computes
with arbitrary-precision Python ints.
"""

from libc.math cimport tan
from libc.stdint cimport int64_t, uint32_t, uint64_t

import numpy as np

cimport numpy as cnp

cnp.import_array()

from . import _pure as _fallback

cdef extern from *:
    ctypedef long long i128 "__int128"

cdef double PI = 3.141592653589793
cdef int64_t LIM31 = <int64_t>1 << 31
cdef int64_t LIM62 = <int64_t>1 << 62


# ----------------------------------------------------------------------
# floor sums and range counting

cdef int64_t _floor_sum_c(int64_t n, int64_t m, int64_t a, int64_t b,
                          int64_t* iters) noexcept:
    cdef i128 total = 0
    cdef int64_t sign = 1, q, it = 0, t
    cdef i128 y
    if n <= 0:
        iters[0] = 0
        return 0
    if a < 0:
        q = (-a + m - 1) // m
        total -= <i128>q * ((<i128>n * (n - 1)) // 2)
        a += q * m
    if b < 0:
        q = (-b + m - 1) // m
        total -= <i128>q * n
        b += q * m
    while True:
        it += 1
        if a >= m:
            total += sign * ((<i128>n * (n - 1)) // 2) * (a // m)
            a %= m
        if b >= m:
            total += sign * (<i128>n) * (b // m)
            b %= m
        if 2 * a > m:
            total += sign * ((<i128>n * (n - 1)) // 2)
            sign = -sign
            a = m - a
            b = m - 1 - b
        y = <i128>a * n + b
        if y < m:
            iters[0] = it
            return <int64_t>total
        n = <int64_t>(y // m)
        b = <int64_t>(y % m)
        t = m
        m = a
        a = t


def floor_sum(n, m, a, b):
    if m <= 0:
        raise ValueError("modulus must be positive")
    cdef int64_t it = 0
    if 0 <= n < LIM31 and m < LIM31 and -LIM31 < a < LIM31 and -LIM62 < b < LIM62:
        return _floor_sum_c(n, m, a, b, &it)
    return _fallback.floor_sum(n, m, a, b)


def floor_sum_ops(n, m, a, b):
    if m <= 0:
        raise ValueError("modulus must be positive")
    cdef int64_t it = 0
    cdef int64_t s
    if 0 <= n < LIM31 and m < LIM31 and -LIM31 < a < LIM31 and -LIM62 < b < LIM62:
        s = _floor_sum_c(n, m, a, b, &it)
        return s, it
    return _fallback.floor_sum_ops(n, m, a, b)


def count_range_ops(a, b, m, x, r, c, d):
    cdef int64_t it1 = 0, it2 = 0, aa, bp, s1, s2
    if not (0 < m < LIM31 and 0 <= r < LIM31 and 0 <= x < LIM62):
        return _fallback.count_range_ops(a, b, m, x, r, c, d)
    aa = a % m
    bp = (aa * (x % m) + b) % m
    s1 = _floor_sum_c(r + 1, m, aa, bp - c, &it1)
    s2 = _floor_sum_c(r + 1, m, aa, bp - d - 1, &it2)
    return s1 - s2, it1 + it2


def count_range(a, b, m, x, r, c, d):
    return count_range_ops(a, b, m, x, r, c, d)[0]


def level_counts(a, b, q, m_bound, levels, idxs, vals):
    cdef cnp.ndarray idx_arr = np.ascontiguousarray(idxs, dtype=np.int64)
    cdef cnp.ndarray val_arr = np.ascontiguousarray(vals, dtype=np.int64)
    cdef Py_ssize_t u_count = idx_arr.shape[0]
    if not (0 < q < LIM31):
        return _fallback.level_counts(a, b, q, m_bound, levels, idxs, vals)
    if u_count and (
        int(idx_arr.max()) * m_bound >= int(LIM62)
        or abs(int(val_arr.max(initial=0))) >= int(LIM31)
        or abs(int(val_arr.min(initial=0))) >= int(LIM31)
    ):
        return _fallback.level_counts(a, b, q, m_bound, levels, idxs, vals)
    cdef cnp.ndarray out = np.zeros((u_count, levels), dtype=np.int64)
    cdef int64_t[:, ::1] o = out
    cdef const int64_t[::1] iv = idx_arr
    cdef const int64_t[::1] vv = val_arr
    cdef int64_t qa = a, qb = b, qq = q, mb = m_bound, L = levels
    cdef int64_t w = 0, tmp = qq
    while tmp > 1:
        tmp >>= 1
        w += 1
    cdef int64_t iters = 0, it = 0, v, n, x, bp, hi, lo
    cdef Py_ssize_t u, j
    for u in range(u_count):
        v = vv[u]
        if v == 0:
            continue
        n = v if v > 0 else -v
        x = (iv[u] - 1) * mb + 1
        bp = (qa * (x % qq) + qb) % qq
        hi = _floor_sum_c(n, qq, qa, bp - (<int64_t>1 << w), &it)
        iters += it
        for j in range(L):
            lo = _floor_sum_c(n, qq, qa, bp - (<int64_t>1 << (w - j - 1)), &it)
            iters += it
            o[u, j] = lo - hi
            hi = lo
    return out, iters


# ----------------------------------------------------------------------
# batched hash evaluation

def poly_eval_fold(coeffs, xs, ell, fold):
    if ell >= LIM62:
        return _fallback.poly_eval_fold(coeffs, xs, ell, fold)
    cdef cnp.ndarray cs_arr = np.ascontiguousarray(coeffs, dtype=np.int64)
    cdef cnp.ndarray xs_arr = np.ascontiguousarray(xs, dtype=np.int64)
    cdef cnp.ndarray out = np.empty(xs_arr.shape[0], dtype=np.int64)
    cdef const int64_t[::1] cv = cs_arr
    cdef const int64_t[::1] xv = xs_arr
    cdef int64_t[::1] ov = out
    cdef int64_t el = ell, fo = fold, acc, x
    cdef Py_ssize_t i, k, m = cv.shape[0]
    for i in range(xv.shape[0]):
        x = xv[i]
        acc = cv[m - 1] % el
        for k in range(m - 2, -1, -1):
            acc = <int64_t>((<i128>acc * x + cv[k]) % el)
        ov[i] = (acc % fo) + 1
    return out


# ----------------------------------------------------------------------
# counter updates

def kset_apply(X, rows, dlogs, vals, t1, p):
    cdef int64_t[:, ::1] x = X
    cdef cnp.ndarray r_arr = np.ascontiguousarray(rows, dtype=np.int64)
    cdef cnp.ndarray d_arr = np.ascontiguousarray(dlogs, dtype=np.int64)
    cdef cnp.ndarray v_arr = np.ascontiguousarray(vals, dtype=np.int64)
    cdef const int64_t[::1] rv = r_arr
    cdef const int64_t[::1] dv = d_arr
    cdef const int64_t[::1] vv = v_arr
    cdef const uint32_t[::1] tt = t1
    cdef int64_t pp = p, pm1 = p - 1, v, step, cur
    cdef Py_ssize_t u, z, two_s = x.shape[1]
    if pp >= LIM31:
        raise ValueError("modulus too large for compiled counter updates")
    for u in range(rv.shape[0]):
        v = vv[u]
        if v == 0:
            continue
        step = dv[u] % pm1
        cur = step
        for z in range(two_s):
            x[rv[u], z] = (x[rv[u], z] + v * <int64_t>tt[cur]) % pp
            cur += step
            if cur >= pm1:
                cur -= pm1


# ----------------------------------------------------------------------
# rough-estimator rows

cdef inline double _cauchy(uint64_t key, uint64_t ctr_plus1) noexcept:
    cdef uint64_t z = key + ctr_plus1 * <uint64_t>0x9E3779B97F4A7C15UL
    z ^= z >> 30
    z *= <uint64_t>0xBF58476D1CE4E5B9UL
    z ^= z >> 27
    z *= <uint64_t>0x94D049BB133111EBUL
    z ^= z >> 31
    cdef double u = <double>(z >> 11) * (1.0 / 9007199254740992.0)
    return tan(PI * (u - 0.5))


def rough_apply(acc, idxs, vals, key):
    cdef double[::1] a = acc
    cdef cnp.ndarray i_arr = np.ascontiguousarray(idxs, dtype=np.int64)
    cdef cnp.ndarray v_arr = np.ascontiguousarray(vals, dtype=np.int64)
    cdef const int64_t[::1] iv = i_arr
    cdef const int64_t[::1] vv = v_arr
    cdef uint64_t kk = <uint64_t>(key & 0xFFFFFFFFFFFFFFFF)
    cdef uint64_t base
    cdef int64_t v
    cdef Py_ssize_t u, w, rows = a.shape[0]
    for u in range(iv.shape[0]):
        v = vv[u]
        if v == 0:
            continue
        base = <uint64_t>(iv[u] - 1) * <uint64_t>rows
        for w in range(rows):
            a[w] += v * _cauchy(kk, base + w + 1)


# ----------------------------------------------------------------------
# exp/dlog tables

def build_exp_tables(p, g):
    if not p < LIM31:
        raise ValueError("p too large for 32-bit tables")
    cdef cnp.ndarray t1 = np.empty(p - 1, dtype=np.uint32)
    cdef cnp.ndarray t2 = np.zeros(p, dtype=np.uint32)
    cdef uint32_t[::1] v1 = t1, v2 = t2
    cdef int64_t acc = 1, pp = p, gg = g
    cdef Py_ssize_t i
    for i in range(pp - 1):
        v1[i] = <uint32_t>acc
        v2[acc] = <uint32_t>i
        acc = acc * gg % pp
    return t1, t2


# ----------------------------------------------------------------------
# sparse recovery from power sums

cdef int64_t _powmod_i(int64_t b, int64_t e, int64_t p) noexcept:
    cdef int64_t r = 1
    b %= p
    while e > 0:
        if e & 1:
            r = r * b % p
        b = b * b % p
        e >>= 1
    return r


cdef Py_ssize_t _ptrim(int64_t[::1] f, Py_ssize_t lf) noexcept:
    while lf > 1 and f[lf - 1] == 0:
        lf -= 1
    return lf


cdef int64_t _peval(int64_t[::1] f, Py_ssize_t lf, int64_t x, int64_t p) noexcept:
    cdef int64_t acc = 0
    cdef Py_ssize_t i
    for i in range(lf - 1, -1, -1):
        acc = (acc * x + f[i]) % p
    return acc


cdef Py_ssize_t _pmod_inplace(int64_t[::1] f, Py_ssize_t lf,
                              int64_t[::1] g, Py_ssize_t lg, int64_t p) noexcept:
    """f mod monic g, in place; returns the trimmed length."""
    cdef Py_ssize_t dg = lg - 1, i, j, base
    cdef int64_t c
    if lf - 1 < dg:
        return _ptrim(f, lf)
    for i in range(lf - 1, dg - 1, -1):
        c = f[i]
        if c:
            f[i] = 0
            base = i - dg
            for j in range(dg):
                if g[j]:
                    f[base + j] = (f[base + j] - c * g[j]) % p
                    if f[base + j] < 0:
                        f[base + j] += p
    return _ptrim(f, dg if dg > 0 else 1)


cdef Py_ssize_t _pmulmod(int64_t[::1] out, int64_t[::1] f, Py_ssize_t lf,
                         int64_t[::1] g, Py_ssize_t lg,
                         int64_t[::1] mod, Py_ssize_t lmod, int64_t p) noexcept:
    cdef Py_ssize_t i, j, lo = lf + lg - 1
    cdef int64_t fi
    for i in range(lo):
        out[i] = 0
    for i in range(lf):
        fi = f[i]
        if fi:
            for j in range(lg):
                if g[j]:
                    out[i + j] = (out[i + j] + fi * g[j]) % p
    return _pmod_inplace(out, lo, mod, lmod, p)


cdef Py_ssize_t _ppowmod(int64_t[::1] out, int64_t[::1] base, Py_ssize_t lbase,
                         int64_t e, int64_t[::1] mod, Py_ssize_t lmod, int64_t p,
                         int64_t[::1] w1, int64_t[::1] w2) noexcept:
    """out = base^e mod `mod` (monic); w1/w2 scratch of capacity >= 2*lmod."""
    cdef Py_ssize_t lb, lr, lt, i
    for i in range(lbase):
        w1[i] = base[i]
    lb = _pmod_inplace(w1, lbase, mod, lmod, p)
    out[0] = 1
    lr = 1
    while e:
        if e & 1:
            lt = _pmulmod(w2, out, lr, w1, lb, mod, lmod, p)
            for i in range(lt):
                out[i] = w2[i]
            lr = lt
        e >>= 1
        if e:
            lt = _pmulmod(w2, w1, lb, w1, lb, mod, lmod, p)
            for i in range(lt):
                w1[i] = w2[i]
            lb = lt
    return lr


cdef Py_ssize_t _psynthdiv(int64_t[::1] f, Py_ssize_t lf, int64_t root,
                           int64_t p) noexcept:
    """Divide monic f by (X - root) in place; remainder known to vanish.

    Returns the quotient length lf - 1.
    """
    cdef Py_ssize_t d = lf - 1, i
    cdef int64_t carry = f[d], orig
    for i in range(d - 1, -1, -1):
        orig = f[i]
        f[i] = carry
        carry = (orig + root * carry) % p
    return d


def _bm_c(cnp.ndarray s_arr, int64_t p):
    """Berlekamp-Massey; returns (connection coefficients ndarray, L)."""
    cdef int64_t[::1] s = s_arr
    cdef Py_ssize_t n = s.shape[0]
    cdef cnp.ndarray C_arr = np.zeros(n + 1, dtype=np.int64)
    cdef cnp.ndarray B_arr = np.zeros(n + 1, dtype=np.int64)
    cdef cnp.ndarray T_arr = np.zeros(n + 1, dtype=np.int64)
    cdef int64_t[::1] C = C_arr, B = B_arr, T = T_arr
    cdef Py_ssize_t L = 0, m = 1, i, j
    cdef int64_t b = 1, d, coef
    C[0] = 1
    B[0] = 1
    for i in range(n):
        d = s[i] % p
        for j in range(1, L + 1):
            d = (d + C[j] * s[i - j]) % p
        if d == 0:
            m += 1
            continue
        coef = d * _powmod_i(b, p - 2, p) % p
        if 2 * L <= i:
            for j in range(n + 1):
                T[j] = C[j]
            for j in range(n + 1 - m):
                if B[j]:
                    C[j + m] = (C[j + m] - coef * B[j]) % p
                    if C[j + m] < 0:
                        C[j + m] += p
            L = i + 1 - L
            for j in range(n + 1):
                B[j] = T[j]
            b = d
            m = 1
        else:
            for j in range(n + 1 - m):
                if B[j]:
                    C[j + m] = (C[j + m] - coef * B[j]) % p
                    if C[j + m] < 0:
                        C[j + m] += p
            m += 1
    return C_arr, L


cdef Py_ssize_t _pgcd(int64_t[::1] a, Py_ssize_t la, int64_t[::1] b, Py_ssize_t lb,
                      int64_t p, int64_t[::1] tmp) noexcept:
    """Monic gcd left in a; destroys b; tmp capacity >= max(la, lb)."""
    cdef Py_ssize_t i, lt
    cdef int64_t inv
    la = _ptrim(a, la)
    lb = _ptrim(b, lb)
    while not (lb == 1 and b[0] == 0):
        inv = _powmod_i(b[lb - 1], p - 2, p)
        for i in range(lb):
            b[i] = b[i] * inv % p
        la = _pmod_inplace(a, la, b, lb, p)
        for i in range(la):
            tmp[i] = a[i]
        for i in range(lb):
            a[i] = b[i]
        for i in range(la):
            b[i] = tmp[i]
        lt = la
        la = lb
        lb = lt
    if a[la - 1] != 1:
        inv = _powmod_i(a[la - 1], p - 2, p)
        for i in range(la):
            a[i] = a[i] * inv % p
    return la


cdef Py_ssize_t _pdivq(int64_t[::1] f, Py_ssize_t lf, int64_t[::1] g, Py_ssize_t lg,
                       int64_t p, int64_t[::1] q) noexcept:
    """Quotient of f by monic g into q; f becomes the remainder."""
    cdef Py_ssize_t dg = lg - 1, i, j, base, lq = lf - dg
    cdef int64_t c
    if lq <= 0:
        return 0
    for i in range(lq):
        q[i] = 0
    for i in range(lf - 1, dg - 1, -1):
        c = f[i]
        if c:
            q[i - dg] = c
            f[i] = 0
            base = i - dg
            for j in range(dg):
                if g[j]:
                    f[base + j] = (f[base + j] - c * g[j]) % p
                    if f[base + j] < 0:
                        f[base + j] += p
    return _ptrim(q, lq)


def _roots_c(cnp.ndarray P_arr, int64_t p):
    """Roots of monic P when it splits squarefree over F_p, else None."""
    cdef Py_ssize_t d = P_arr.shape[0] - 1
    if d == 0:
        return []
    cdef Py_ssize_t cap = 2 * (d + 1) + 4
    cdef cnp.ndarray xp_a = np.zeros(cap, dtype=np.int64)
    cdef cnp.ndarray w1_a = np.zeros(cap, dtype=np.int64)
    cdef cnp.ndarray w2_a = np.zeros(cap, dtype=np.int64)
    cdef cnp.ndarray h_a = np.zeros(cap, dtype=np.int64)
    cdef cnp.ndarray ga_a = np.zeros(cap, dtype=np.int64)
    cdef cnp.ndarray gb_a = np.zeros(cap, dtype=np.int64)
    cdef cnp.ndarray tmp_a = np.zeros(cap, dtype=np.int64)
    cdef cnp.ndarray base_a = np.zeros(2, dtype=np.int64)
    cdef int64_t[::1] xp = xp_a, w1 = w1_a, w2 = w2_a, h = h_a
    cdef int64_t[::1] ga = ga_a, gb = gb_a, tmp = tmp_a, basev = base_a
    cdef int64_t[::1] Pv = P_arr, fv
    cdef Py_ssize_t lr, lf, df, lh, lg, lq, i
    cdef int64_t aa, root
    cdef int budget = 512
    if d >= 2:
        basev[0] = 0
        basev[1] = 1
        lr = _ppowmod(xp, basev, 2, p, Pv, d + 1, p, w1, w2)
        if not (lr == 2 and xp[0] == 0 and xp[1] == 1):
            return None
    roots = []
    shift = 0
    stack = [(P_arr.copy(), d + 1)]
    while stack:
        f_arr, lf = stack.pop()
        fv = f_arr
        while True:
            df = lf - 1
            if df <= 0:
                break
            if df == 1:
                roots.append(int((p - fv[0]) % p))
                break
            budget -= 1
            if budget < 0:
                return None
            aa = shift
            shift += 1
            root = (p - aa % p) % p
            if _peval(fv, lf, root, p) == 0:
                lf = _psynthdiv(fv, lf, root, p)
                roots.append(int(root))
                continue
            basev[0] = aa % p
            basev[1] = 1
            lh = _ppowmod(h, basev, 2, (p - 1) // 2, fv, lf, p, w1, w2)
            h[0] = (h[0] - 1) % p
            if h[0] < 0:
                h[0] += p
            lh = _ptrim(h, lh)
            for i in range(lh):
                ga[i] = h[i]
            for i in range(lf):
                gb[i] = fv[i]
            lg = _pgcd(ga, lh, gb, lf, p, tmp)
            if 0 < lg - 1 < df:
                lq = _pdivq(fv, lf, ga, lg, p, w1)
                g_push = np.empty(lg, dtype=np.int64)
                for i in range(lg):
                    g_push[i] = ga[i]
                stack.append((g_push, lg))
                for i in range(lq):
                    fv[i] = w1[i]
                lf = lq
    return roots


def _solve_and_verify_c(roots_list, cnp.ndarray s_arr, int64_t p):
    """Values for the located spikes, checked against the full window."""
    cdef Py_ssize_t d = len(roots_list), n = s_arr.shape[0], z, m, col, piv, rr
    cdef cnp.ndarray M_arr = np.zeros((d, d + 1), dtype=np.int64)
    cdef cnp.ndarray r_arr = np.asarray(roots_list, dtype=np.int64)
    cdef cnp.ndarray pw_arr = np.ones(d, dtype=np.int64)
    cdef int64_t[:, ::1] M = M_arr
    cdef int64_t[::1] rt = r_arr, pw = pw_arr, s = s_arr
    cdef int64_t inv, c, acc
    for m in range(d):
        pw[m] = rt[m]
    for z in range(d):
        for m in range(d):
            M[z, m] = pw[m]
        M[z, d] = s[z] % p
        if z + 1 < d:
            for m in range(d):
                pw[m] = pw[m] * rt[m] % p
    for col in range(d):
        piv = -1
        for rr in range(col, d):
            if M[rr, col]:
                piv = rr
                break
        if piv < 0:
            return None
        if piv != col:
            for m in range(d + 1):
                M[col, m], M[piv, m] = M[piv, m], M[col, m]
        inv = _powmod_i(M[col, col], p - 2, p)
        for m in range(d + 1):
            M[col, m] = M[col, m] * inv % p
        for rr in range(d):
            if rr != col and M[rr, col]:
                c = M[rr, col]
                for m in range(d + 1):
                    M[rr, m] = (M[rr, m] - c * M[col, m]) % p
                    if M[rr, m] < 0:
                        M[rr, m] += p
    vals = [int(M[m, d]) for m in range(d)]
    if any(v == 0 for v in vals):
        return None
    cdef cnp.ndarray v_arr = np.asarray(vals, dtype=np.int64)
    cdef int64_t[::1] vv = v_arr
    for m in range(d):
        pw[m] = rt[m]
    for z in range(n):
        acc = 0
        for m in range(d):
            acc = (acc + vv[m] * pw[m]) % p
            pw[m] = pw[m] * rt[m] % p
        if acc != s[z] % p:
            return None
    return vals


def decode_power_sums(S, p, g, smax):
    if p >= LIM31:
        return _fallback.decode_power_sums(S, p, g, smax)
    cdef cnp.ndarray s_arr = np.ascontiguousarray(
        np.asarray(S, dtype=np.int64) % p
    )
    C_arr, L = _bm_c(s_arr, p)
    if L > smax:
        return None
    if L == 0:
        return ([], []) if not s_arr.any() else None
    cdef cnp.ndarray P_arr = np.empty(L + 1, dtype=np.int64)
    cdef Py_ssize_t i
    for i in range(L + 1):
        P_arr[i] = C_arr[L - i]
    if P_arr[0] == 0:
        return None
    roots = _roots_c(P_arr, p)
    if roots is None or len(roots) != L:
        return None
    vals = _solve_and_verify_c(roots, s_arr, p)
    if vals is None:
        return None
    order = sorted(range(L), key=lambda m: roots[m])
    return [roots[m] for m in order], [vals[m] for m in order]
