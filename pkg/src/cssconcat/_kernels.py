"""Hot inner loops.

Every kernel comes in two flavours: a loop version decorated with ``njit``
(suffix ``_nb``) and a vectorised numpy version (suffix ``_np``).  The
dispatching wrappers at the bottom pick one according to ``USE_NUMBA``.
Both flavours must return identical results; the test-suite checks this.

Field elements of GF(q^k) are plain ints whose base-q digits are the
coordinates in the power basis (1, alpha, ..., alpha^(k-1)).  ``exp`` and
``log`` are the antilog/log tables of the tower, ``order = q^k - 1``.
"""
import numpy as np

from ._accel import USE_NUMBA, njit

# ---------------------------------------------------------------------------
# counter-based random numbers (SplitMix64)
#
# trial key  = mix(seed + GAMMA * (trial + 1))
# draw j     = mix(key + GAMMA * (j + 1)) >> 11, scaled to [0, 1)
# ---------------------------------------------------------------------------

_GAMMA = np.uint64(0x9E3779B97F4A7C15)
_M1 = np.uint64(0xBF58476D1CE4E5B9)
_M2 = np.uint64(0x94D049BB133111EB)
_S30 = np.uint64(30)
_S27 = np.uint64(27)
_S31 = np.uint64(31)
_S11 = np.uint64(11)
_ONE = np.uint64(1)
_INV53 = 1.0 / 9007199254740992.0


@njit
def _mix64(z):
    z = (z ^ (z >> _S30)) * _M1
    z = (z ^ (z >> _S27)) * _M2
    return z ^ (z >> _S31)


@njit
def _trial_key(seed, trial):
    return _mix64(np.uint64(seed) + _GAMMA * (np.uint64(trial) + _ONE))


@njit
def _draw(key, j):
    # the cast matters: numba would type a small Python int as int64 and
    # promote int64 + uint64 to float64
    x = _mix64(np.uint64(key) + _GAMMA * (np.uint64(j) + _ONE))
    return float(x >> _S11) * _INV53


def _mix64_np(z):
    z = (z ^ (z >> _S30)) * _M1
    z = (z ^ (z >> _S27)) * _M2
    return z ^ (z >> _S31)


def uniforms(seed, trials, ndraws):
    """Array ``(len(trials), ndraws)`` of uniforms in [0, 1) for the given trial indices."""
    t = np.atleast_1d(np.asarray(trials, dtype=np.uint64))
    s = np.full(t.shape, seed, dtype=np.uint64)
    key = _mix64_np(s + _GAMMA * (t + _ONE))
    j = np.arange(1, ndraws + 1, dtype=np.uint64)
    x = _mix64_np(key[:, None] + _GAMMA * j[None, :])
    return (x >> _S11).astype(np.float64) * _INV53


# ---------------------------------------------------------------------------
# scalar GF(q^k) arithmetic
# ---------------------------------------------------------------------------


@njit
def gf_add(x, y, q, k):
    if q == 2:
        return x ^ y
    r = 0
    m = 1
    for _ in range(k):
        r += ((x % q + y % q) % q) * m
        x //= q
        y //= q
        m *= q
    return r


@njit
def gf_neg(x, q, k):
    if q == 2:
        return x
    r = 0
    m = 1
    for _ in range(k):
        r += ((q - x % q) % q) * m
        x //= q
        m *= q
    return r


@njit
def gf_sub(x, y, q, k):
    return gf_add(x, gf_neg(y, q, k), q, k)


@njit
def gf_mul(x, y, exp, log, order):
    if x == 0 or y == 0:
        return 0
    return exp[(log[x] + log[y]) % order]


@njit
def gf_inv(x, exp, log, order):
    return exp[(order - log[x]) % order]


@njit
def gf_pow(x, e, exp, log, order):
    if e == 0:
        return 1
    if x == 0:
        return 0
    return exp[(log[x] * e) % order]


@njit
def gf_smul(c, x, q, k):
    """Prime-field scalar ``c`` times element ``x``."""
    c = c % q
    if c == 0:
        return 0
    if c == 1:
        return x
    r = 0
    m = 1
    for _ in range(k):
        r += (((x % q) * c) % q) * m
        x //= q
        m *= q
    return r


# ---------------------------------------------------------------------------
# vectorised GF(q^k) arithmetic (numpy)
# ---------------------------------------------------------------------------


def v_add(x, y, q, k):
    x = np.asarray(x, dtype=np.int64)
    y = np.asarray(y, dtype=np.int64)
    if q == 2:
        return x ^ y
    r = np.zeros(np.broadcast(x, y).shape, dtype=np.int64)
    m = 1
    for _ in range(k):
        r += ((x % q + y % q) % q) * m
        x = x // q
        y = y // q
        m *= q
    return r


def v_neg(x, q, k):
    x = np.asarray(x, dtype=np.int64)
    if q == 2:
        return x.copy()
    r = np.zeros(x.shape, dtype=np.int64)
    m = 1
    for _ in range(k):
        r += ((q - x % q) % q) * m
        x = x // q
        m *= q
    return r


def v_sub(x, y, q, k):
    return v_add(x, v_neg(y, q, k), q, k)


def v_mul(x, y, exp, log, order):
    x = np.asarray(x, dtype=np.int64)
    y = np.asarray(y, dtype=np.int64)
    zero = (x == 0) | (y == 0)
    r = exp[(log[x] + log[y]) % order]
    return np.where(zero, 0, r)


def v_digits(x, q, k):
    x = np.asarray(x, dtype=np.int64)
    return (x[..., None] // (q ** np.arange(k, dtype=np.int64))) % q


def v_undigits(d, q):
    d = np.asarray(d, dtype=np.int64)
    k = d.shape[-1]
    return d @ (q ** np.arange(k, dtype=np.int64))


# ---------------------------------------------------------------------------
# bounded-distance decoding of GRS codes from syndromes
#
# syndromes S_j = sum_i E_i w_i a_i^j,  j = 0 .. r-1
# ---------------------------------------------------------------------------


@njit
def _berlekamp_massey(s, q, k, exp, log, order):
    n = s.shape[0]
    C = np.zeros(n + 1, np.int64)
    B = np.zeros(n + 1, np.int64)
    C[0] = 1
    B[0] = 1
    L = 0
    m = 1
    b = 1
    for i in range(n):
        d = s[i]
        for j in range(1, L + 1):
            d = gf_add(d, gf_mul(C[j], s[i - j], exp, log, order), q, k)
        if d == 0:
            m += 1
            continue
        coef = gf_mul(d, gf_inv(b, exp, log, order), exp, log, order)
        T = C.copy()
        for j in range(n + 1 - m):
            if B[j] != 0:
                C[j + m] = gf_sub(C[j + m], gf_mul(coef, B[j], exp, log, order), q, k)
        if 2 * L <= i:
            L = i + 1 - L
            B = T
            b = d
            m = 1
        else:
            m += 1
    return C, L


@njit
def _poly_eval(p, deg, x, q, k, exp, log, order):
    r = 0
    for j in range(deg, -1, -1):
        r = gf_add(gf_mul(r, x, exp, log, order), p[j], q, k)
    return r


@njit
def _bdd_attempt(seq, a, w, shift, tmax, E, q, k, exp, log, order):
    """Locate/evaluate errors at nonzero points; writes into E.  Returns sum of
    the un-weighted values Y (needed for the zero-point fix-up) and ok."""
    N = a.shape[0]
    r = seq.shape[0]
    C, L = _berlekamp_massey(seq, q, k, exp, log, order)
    if L > tmax:
        return 0, False
    pos = np.empty(L + 1, np.int64)
    cnt = 0
    for i in range(N):
        if a[i] == 0:
            continue
        xinv = gf_inv(a[i], exp, log, order)
        if _poly_eval(C, L, xinv, q, k, exp, log, order) == 0:
            if cnt == L:
                return 0, False
            pos[cnt] = i
            cnt += 1
    if cnt != L:
        return 0, False
    omega = np.zeros(max(r, 1), np.int64)
    for i in range(r):
        acc = 0
        for j in range(min(i, L) + 1):
            acc = gf_add(acc, gf_mul(C[j], seq[i - j], exp, log, order), q, k)
        omega[i] = acc
    dC = np.zeros(max(L, 1), np.int64)
    for j in range(1, L + 1):
        dC[j - 1] = gf_smul(j, C[j], q, k)
    ysum = 0
    for l in range(L):
        i = pos[l]
        X = a[i]
        xinv = gf_inv(X, exp, log, order)
        num = _poly_eval(omega, r - 1, xinv, q, k, exp, log, order)
        den = _poly_eval(dC, L - 1, xinv, q, k, exp, log, order)
        if den == 0:
            return 0, False
        Y = gf_neg(
            gf_mul(X, gf_mul(num, gf_inv(den, exp, log, order), exp, log, order), exp, log, order),
            q,
            k,
        )
        if shift == 1:
            Y = gf_mul(Y, xinv, exp, log, order)
        ysum = gf_add(ysum, Y, q, k)
        E[i] = gf_mul(Y, gf_inv(w[i], exp, log, order), exp, log, order)
    return ysum, True


@njit
def _bdd_consistent(E, S, a, w, t, q, k, exp, log, order):
    wt = 0
    for i in range(E.shape[0]):
        if E[i] != 0:
            wt += 1
    if wt > t:
        return False
    for j in range(S.shape[0]):
        acc = 0
        for i in range(E.shape[0]):
            if E[i] != 0:
                acc = gf_add(
                    acc,
                    gf_mul(gf_mul(E[i], w[i], exp, log, order), gf_pow(a[i], j, exp, log, order), exp, log, order),
                    q,
                    k,
                )
        if acc != S[j]:
            return False
    return True


@njit
def grs_bdd(S, a, w, q, k, exp, log, order):
    """Berlekamp-Massey + Chien search + Forney.  Returns (E, ok)."""
    N = a.shape[0]
    r = S.shape[0]
    E = np.zeros(N, np.int64)
    nz = False
    for j in range(r):
        if S[j] != 0:
            nz = True
            break
    if not nz:
        return E, True
    t = r // 2
    _, ok = _bdd_attempt(S, a, w, 0, t, E, q, k, exp, log, order)
    if ok and _bdd_consistent(E, S, a, w, t, q, k, exp, log, order):
        return E, True
    # an error at the evaluation point 0 is invisible to the locator; retry on
    # the shifted sequence S_1.. and recover that symbol from S_0
    z = -1
    for i in range(N):
        if a[i] == 0:
            z = i
    if z >= 0 and t >= 1:
        E[:] = 0
        ysum, ok = _bdd_attempt(S[1:], a, w, 1, t - 1, E, q, k, exp, log, order)
        if ok:
            Y0 = gf_sub(S[0], ysum, q, k)
            E[z] = gf_mul(Y0, gf_inv(w[z], exp, log, order), exp, log, order)
            if _bdd_consistent(E, S, a, w, t, q, k, exp, log, order):
                return E, True
    E[:] = 0
    return E, False


# ---------------------------------------------------------------------------
# reduced row echelon form over a prime field
# ---------------------------------------------------------------------------


@njit
def rref_nb(M, q, invtab):
    R = M.copy() % q
    rows, cols = R.shape
    piv = np.empty(min(rows, cols), np.int64)
    r = 0
    for c in range(cols):
        if r == rows:
            break
        p = -1
        for i in range(r, rows):
            if R[i, c] != 0:
                p = i
                break
        if p < 0:
            continue
        if p != r:
            for j in range(cols):
                tmp = R[r, j]
                R[r, j] = R[p, j]
                R[p, j] = tmp
        iv = invtab[R[r, c]]
        for j in range(cols):
            R[r, j] = (R[r, j] * iv) % q
        for i in range(rows):
            if i != r and R[i, c] != 0:
                f = R[i, c]
                for j in range(cols):
                    R[i, j] = (R[i, j] - f * R[r, j]) % q
        piv[r] = c
        r += 1
    return R, r, piv[:r].copy()


def rref_np(M, q, invtab):
    R = np.array(M, dtype=np.int64) % q
    rows, cols = R.shape
    piv = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.flatnonzero(R[r:, c])
        if nz.size == 0:
            continue
        p = r + int(nz[0])
        if p != r:
            R[[r, p]] = R[[p, r]]
        R[r] = (R[r] * invtab[R[r, c]]) % q
        others = np.flatnonzero(R[:, c])
        others = others[others != r]
        if others.size:
            R[others] = (R[others] - np.outer(R[others, c], R[r])) % q
        piv.append(c)
        r += 1
    return R, r, np.array(piv, dtype=np.int64)


# ---------------------------------------------------------------------------
# exact inner failure enumeration: histogram (by error weight) of error
# patterns e for which  e - leader(H e)  is not in the dual of C2
# ---------------------------------------------------------------------------


@njit
def failure_hist_nb(n, q, H, qpow_r, leaders, G2):
    hist = np.zeros(n + 1, np.int64)
    total = q**n
    e = np.zeros(n, np.int64)
    res = np.zeros(n, np.int64)
    for v in range(total):
        x = v
        wt = 0
        for i in range(n):
            e[i] = x % q
            x //= q
            if e[i] != 0:
                wt += 1
        idx = 0
        for s in range(H.shape[0]):
            acc = 0
            for i in range(n):
                acc += H[s, i] * e[i]
            idx += (acc % q) * qpow_r[s]
        for i in range(n):
            res[i] = (e[i] - leaders[idx, i]) % q
        bad = False
        for s in range(G2.shape[0]):
            acc = 0
            for i in range(n):
                acc += G2[s, i] * res[i]
            if acc % q != 0:
                bad = True
                break
        if bad:
            hist[wt] += 1
    return hist


def failure_hist_np(n, q, H, qpow_r, leaders, G2, chunk=1 << 16):
    hist = np.zeros(n + 1, np.int64)
    total = q**n
    pw = q ** np.arange(n, dtype=np.int64)
    for start in range(0, total, chunk):
        v = np.arange(start, min(total, start + chunk), dtype=np.int64)
        e = (v[:, None] // pw) % q
        idx = ((e @ H.T) % q) @ qpow_r if H.shape[0] else np.zeros(len(v), np.int64)
        res = (e - leaders[idx]) % q
        if G2.shape[0]:
            bad = np.any((res @ G2.T) % q != 0, axis=1)
        else:
            bad = np.zeros(len(v), dtype=bool)
        wt = np.count_nonzero(e, axis=1)
        hist += np.bincount(wt[bad], minlength=n + 1)
    return hist


# ---------------------------------------------------------------------------
# Monte Carlo of the two-stage decoder
#
# Per trial, draws are consumed in this fixed layout:
#   [0, K)                    message symbols over GF(q^k)
#   [K, K + nR)               outer randomness (dual of the other outer code)
#   next sum(rrlen)           inner randomness, block by block
#   next n_o                  channel: symbol in error iff u < p
#   next n_o (q > 2 only)     channel: error value 1 + floor(u (q - 1))
#
# counts = [coset failures, outer BDD failures, inner block failures]
# hist[f] = number of trials with exactly f failed inner blocks
# ---------------------------------------------------------------------------


def _layout(K, nR, rrlen, n_o, q):
    base_inner = K + nR
    base_chan = base_inner + int(np.sum(rrlen))
    base_val = base_chan + n_o
    total = base_val + (n_o if q > 2 else 0)
    return base_inner, base_chan, base_val, total


@njit
def mc_nb(
    seed, t0, ntrials, p, q, k, exp, log, order,
    offs, nlen, rlen, Hs, tab_off, leaders, qpow_r,
    pair_vecs, enc_vecs, rand_vecs, rrlen,
    to_basis, from_basis, a, hmul, Hext, Gmsg, Grand, Gchk,
):
    N = nlen.shape[0]
    n_o = offs[N]
    K = Gmsg.shape[0]
    nR = Grand.shape[0]
    Q = q**k
    base_inner = K + nR
    tot_rr = 0
    for i in range(N):
        tot_rr += rrlen[i]
    base_chan = base_inner + tot_rr
    base_val = base_chan + n_o
    t = Hext.shape[0] // 2
    counts = np.zeros(3, np.int64)
    hist = np.zeros(N + 1, np.int64)
    d = np.zeros(N, np.int64)
    z = np.zeros(N, np.int64)
    x = np.zeros(n_o, np.int64)
    e = np.zeros(n_o, np.int64)
    y = np.zeros(n_o, np.int64)
    dig = np.zeros(k, np.int64)
    c = np.zeros(k, np.int64)
    S = np.zeros(Hext.shape[0], np.int64)
    qpk = np.zeros(k, np.int64)
    qpk[0] = 1
    for m in range(1, k):
        qpk[m] = qpk[m - 1] * q
    for tt in range(ntrials):
        key = _trial_key(seed, t0 + tt)
        # outer word
        for i in range(N):
            d[i] = 0
        for l in range(K):
            s = int(_draw(key, l) * Q)
            for i in range(N):
                d[i] = gf_add(d[i], gf_mul(s, Gmsg[l, i], exp, log, order), q, k)
        for l in range(nR):
            s = int(_draw(key, K + l) * Q)
            for i in range(N):
                d[i] = gf_add(d[i], gf_mul(s, Grand[l, i], exp, log, order), q, k)
        # inner encoding
        jr = base_inner
        for i in range(N):
            xx = d[i]
            for m in range(k):
                dig[m] = xx % q
                xx //= q
            for m in range(k):
                acc = 0
                for mm in range(k):
                    acc += to_basis[m, mm] * dig[mm]
                c[m] = acc % q
            o = offs[i]
            for u in range(nlen[i]):
                acc = 0
                for m in range(k):
                    acc += c[m] * enc_vecs[i, m, u]
                x[o + u] = acc
            for l in range(rrlen[i]):
                s = int(_draw(key, jr) * q)
                jr += 1
                for u in range(nlen[i]):
                    x[o + u] += s * rand_vecs[i, l, u]
            for u in range(nlen[i]):
                x[o + u] %= q
        # channel
        for u in range(n_o):
            if _draw(key, base_chan + u) < p:
                if q == 2:
                    e[u] = 1
                else:
                    e[u] = 1 + int(_draw(key, base_val + u) * (q - 1))
            else:
                e[u] = 0
            y[u] = (x[u] + e[u]) % q
        # stage 1 and extraction
        nfail = 0
        for i in range(N):
            o = offs[i]
            idx = 0
            for s in range(rlen[i]):
                acc = 0
                for u in range(nlen[i]):
                    acc += Hs[i, s, u] * y[o + u]
                idx += (acc % q) * qpow_r[s]
            row = tab_off[i] + idx
            for u in range(nlen[i]):
                y[o + u] = (y[o + u] - leaders[row, u]) % q
            for m in range(k):
                acc = 0
                for u in range(nlen[i]):
                    acc += pair_vecs[i, m, u] * y[o + u]
                c[m] = acc % q
            zz = 0
            for m in range(k):
                acc = 0
                for mm in range(k):
                    acc += from_basis[m, mm] * c[mm]
                zz += (acc % q) * qpk[m]
            z[i] = zz
            if zz != d[i]:
                nfail += 1
        counts[2] += nfail
        hist[nfail] += 1
        # stage 2
        for j in range(Hext.shape[0]):
            acc = 0
            for i in range(N):
                acc = gf_add(acc, gf_mul(z[i], Hext[j, i], exp, log, order), q, k)
            S[j] = acc
        E, ok = grs_bdd(S, a, hmul, q, k, exp, log, order)
        if not ok:
            counts[1] += 1
        good = True
        for r in range(Gchk.shape[0]):
            acc = 0
            for i in range(N):
                diff = gf_sub(gf_sub(z[i], E[i], q, k), d[i], q, k)
                acc = gf_add(acc, gf_mul(diff, Gchk[r, i], exp, log, order), q, k)
            if acc != 0:
                good = False
                break
        if not good:
            counts[0] += 1
    return counts, hist


def mc_np(
    seed, t0, ntrials, p, q, k, exp, log, order,
    offs, nlen, rlen, Hs, tab_off, leaders, qpow_r,
    pair_vecs, enc_vecs, rand_vecs, rrlen,
    to_basis, from_basis, a, hmul, Hext, Gmsg, Grand, Gchk,
    chunk=8192,
):
    N = nlen.shape[0]
    n_o = int(offs[N])
    K = Gmsg.shape[0]
    nR = Grand.shape[0]
    Q = q**k
    base_inner, base_chan, base_val, ndraw = _layout(K, nR, rrlen, n_o, q)
    counts = np.zeros(3, np.int64)
    hist = np.zeros(N + 1, np.int64)
    qpk = q ** np.arange(k, dtype=np.int64)
    for start in range(0, ntrials, chunk):
        T = min(chunk, ntrials - start)
        U = uniforms(seed, np.arange(t0 + start, t0 + start + T), ndraw)
        d = np.zeros((T, N), np.int64)
        for l in range(K):
            s = (U[:, l] * Q).astype(np.int64)
            d = v_add(d, v_mul(s[:, None], Gmsg[l][None, :], exp, log, order), q, k)
        for l in range(nR):
            s = (U[:, K + l] * Q).astype(np.int64)
            d = v_add(d, v_mul(s[:, None], Grand[l][None, :], exp, log, order), q, k)
        coords = (v_digits(d, q, k) @ to_basis.T) % q  # (T, N, k)
        x = np.zeros((T, n_o), np.int64)
        jr = base_inner
        for i in range(N):
            o, ni = offs[i], nlen[i]
            xi = coords[:, i, :] @ enc_vecs[i, :, :ni]
            rr = rrlen[i]
            if rr:
                s = (U[:, jr:jr + rr] * q).astype(np.int64)
                xi = xi + s @ rand_vecs[i, :rr, :ni]
                jr += rr
            x[:, o:o + ni] = xi % q
        err = U[:, base_chan:base_chan + n_o] < p
        if q == 2:
            e = err.astype(np.int64)
        else:
            e = np.where(err, 1 + (U[:, base_val:base_val + n_o] * (q - 1)).astype(np.int64), 0)
        y = (x + e) % q
        z = np.zeros((T, N), np.int64)
        for i in range(N):
            o, ni, ri = offs[i], nlen[i], rlen[i]
            yi = y[:, o:o + ni]
            if ri:
                idx = ((yi @ Hs[i, :ri, :ni].T) % q) @ qpow_r[:ri]
            else:
                idx = np.zeros(T, np.int64)
            yi = (yi - leaders[tab_off[i] + idx, :ni]) % q
            c = (yi @ pair_vecs[i, :, :ni].T) % q
            z[:, i] = ((c @ from_basis.T) % q) @ qpk
        failed = z != d
        nfail = failed.sum(axis=1)
        counts[2] += int(nfail.sum())
        hist += np.bincount(nfail, minlength=N + 1)
        S = np.zeros((T, Hext.shape[0]), np.int64)
        for j in range(Hext.shape[0]):
            for i in range(N):
                S[:, j] = v_add(S[:, j], v_mul(z[:, i], Hext[j, i], exp, log, order), q, k)
        E = np.zeros((T, N), np.int64)
        for row in np.flatnonzero(np.any(S != 0, axis=1)):
            Er, ok = grs_bdd(S[row], a, hmul, q, k, exp, log, order)
            E[row] = Er
            if not ok:
                counts[1] += 1
        diff = v_sub(v_sub(z, E, q, k), d, q, k)
        bad = np.zeros(T, dtype=bool)
        for r in range(Gchk.shape[0]):
            acc = np.zeros(T, np.int64)
            for i in range(N):
                acc = v_add(acc, v_mul(diff[:, i], Gchk[r, i], exp, log, order), q, k)
            bad |= acc != 0
        counts[0] += int(bad.sum())
    return counts, hist


# ---------------------------------------------------------------------------
# dispatch
# ---------------------------------------------------------------------------

rref = rref_nb if USE_NUMBA else rref_np
failure_hist = failure_hist_nb if USE_NUMBA else failure_hist_np
monte_carlo = mc_nb if USE_NUMBA else mc_np
