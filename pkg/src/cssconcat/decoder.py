"""Two-stage decoding of a concatenated pair.

Stage 1 runs each inner syndrome decoder and removes its error estimate.
Stage 2 reads one GF(q^k) symbol per block through the pairing vectors and
hands the result to the bounded-distance GRS decoder.  The decoded coset of
the outer quotient is the output.

Inner decoders are pluggable: any object with an ``H`` attribute (the parity
check whose syndromes it consumes) and a ``leader(s)`` method returning an
error estimate works.  ``SyndromeTable`` is the default.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .codes import grs_bdd_decode
from .concat import ConcatenatedPair, _pi, canonical_coset, message_of, outer_quotient
from .conjugate import SyndromeTable, build_syndrome_table
from .errors import CodeError


@dataclass
class DecodeReport:
    side: int
    inner_estimate: np.ndarray      # stage-1 error estimate, length n_o
    inner_flags: np.ndarray         # blocks with a nonzero inner syndrome
    extracted: np.ndarray           # outer word read after stage 1
    outer_syndromes: np.ndarray
    outer_errors: np.ndarray        # symbol errors found by the BDD decoder
    decoded: np.ndarray             # outer codeword estimate
    coset: np.ndarray               # canonical coset representative
    message: np.ndarray             # message symbols over GF(q^k)
    ok: bool                        # BDD decoder found a consistent error

    @property
    def corrected_blocks(self) -> np.ndarray:
        return np.flatnonzero(self.outer_errors)


def build_tables(cp: ConcatenatedPair, side: int = 1) -> list:
    """One syndrome table per block; identical inner codes share a table."""
    out, seen = [], {}
    for C in cp.side(side).codes:
        key = (C.q, C.n, C.G.tobytes(), C.G.shape)
        if key not in seen:
            seen[key] = build_syndrome_table(C)
        out.append(seen[key])
    return out


def _check_tables(cp, tables, side):
    if tables is None:
        return build_tables(cp, side)
    if len(tables) != cp.N:
        raise CodeError(f"need {cp.N} inner decoders, got {len(tables)}")
    for i, (T, C) in enumerate(zip(tables, cp.side(side).codes)):
        if T.H.shape != C.H.shape or np.any((C.G @ np.asarray(T.H).T) % cp.q):
            raise CodeError(f"inner decoder {i} does not match the side-{side} inner code")
    return tables


def extract_outer_word(cp: ConcatenatedPair, y, side: int = 1) -> np.ndarray:
    """Symbol i = element with basis coordinates (pairing_m . y_i)_m."""
    sd = cp.side(side)
    y = np.asarray(y, dtype=np.int64)
    if y.shape[-1] != cp.n_o:
        raise CodeError(f"word must have length {cp.n_o}, got {y.shape[-1]}")
    c = np.stack([(blk @ P.T) % cp.q for blk, P in zip(cp.blocks(y), sd.pairing)], axis=-2)
    return cp.from_coords(c, dual=(side == 2))


def _inner_stage(cp, tables, y):
    est = np.zeros(cp.n_o, dtype=np.int64)
    flags = np.zeros(cp.N, dtype=bool)
    o = cp.offsets
    for i, T in enumerate(tables):
        s = (y[o[i]:o[i + 1]] @ np.asarray(T.H).T) % cp.q
        flags[i] = bool(np.any(s))
        est[o[i]:o[i + 1]] = T.leader(s)
    return est, flags


def _outer_stage(cp, z, side):
    D = cp.side(side).outer
    S = D.syndromes(z)
    if S.size:
        E, ok = grs_bdd_decode(D, S)
    else:
        E, ok = np.zeros(cp.N, dtype=np.int64), True
    return S, E, ok


def two_stage_decode(cp: ConcatenatedPair, y, tables=None, side: int = 1) -> DecodeReport:
    """Decode a received word of length n_o."""
    y = np.asarray(y, dtype=np.int64).reshape(-1)
    if y.shape[0] != cp.n_o:
        raise CodeError(f"received word must have length {cp.n_o}, got {y.shape[0]}")
    if np.any((y < 0) | (y >= cp.q)):
        raise CodeError(f"symbols must lie in [0, {cp.q})")
    tables = _check_tables(cp, tables, side)
    est, flags = _inner_stage(cp, tables, y)
    z = extract_outer_word(cp, (y - est) % cp.q, side)
    S, E, ok = _outer_stage(cp, z, side)
    t = cp.tower
    d = t.sub(z, E)
    return DecodeReport(
        side=side,
        inner_estimate=est,
        inner_flags=flags,
        extracted=z,
        outer_syndromes=S,
        outer_errors=E,
        decoded=d,
        coset=canonical_coset(cp, d, side),
        message=message_of(cp, d, side),
        ok=ok,
    )


@dataclass
class SyndromeDecodeResult:
    side: int
    error: np.ndarray        # total error estimate e_hat, length n_o
    inner_estimate: np.ndarray
    outer_errors: np.ndarray
    delta: np.ndarray        # canonical coset of the outer symbols of e_hat
    ok: bool


def split_syndrome(cp: ConcatenatedPair, s, side: int = 1):
    """Split a full syndrome into per-block inner parts and the outer part."""
    sd = cp.side(side)
    s = np.asarray(s, dtype=np.int64).reshape(-1)
    if s.shape[0] != sd.H.shape[0]:
        raise CodeError(f"syndrome must have length {sd.H.shape[0]}, got {s.shape[0]}")
    parts, pos = [], 0
    for C in sd.codes:
        r = C.H.shape[0]
        parts.append(s[pos:pos + r])
        pos += r
    return parts, s[pos:]


def syndrome_only_decode(cp: ConcatenatedPair, s, tables=None, side: int = 1) -> SyndromeDecodeResult:
    """Decode from the syndrome ``H s`` alone (no received word).

    Inner syndromes pick coset leaders; their contribution is removed from the
    outer part, which then regroups into k-digit outer syndromes.
    """
    sd = cp.side(side)
    tables = _check_tables(cp, tables, side)
    parts, s2 = split_syndrome(cp, s, side)
    if np.any((s2 < 0) | (s2 >= cp.q)) or any(np.any((p < 0) | (p >= cp.q)) for p in parts):
        raise CodeError(f"syndrome digits must lie in [0, {cp.q})")
    est = np.concatenate([T.leader(p) for T, p in zip(tables, parts)]) if cp.N else np.zeros(0, np.int64)
    top = sum(p.shape[0] for p in parts)
    lower = sd.H[top:]
    s2 = (s2 - est @ lower.T) % cp.q
    k = cp.k
    S = cp.from_coords(s2.reshape(-1, k), dual=(side == 2)) if s2.size else np.zeros(0, np.int64)
    if S.size:
        E, ok = grs_bdd_decode(sd.outer, S)
    else:
        E, ok = np.zeros(cp.N, dtype=np.int64), True
    err = (est + _pi(cp, E, side)) % cp.q
    delta = canonical_coset(cp, extract_outer_word(cp, err, side), side)
    return SyndromeDecodeResult(side, err, est, E, delta, ok)


# -- flat arrays for the Monte Carlo kernels -----------------------------------


@dataclass
class DecodePlan:
    side: int
    args: tuple

    @property
    def draws(self) -> int:
        """Uniforms consumed per trial."""
        q, offs, rrlen = self.args[0], self.args[5], self.args[15]
        K, nR = self.args[21].shape[0], self.args[22].shape[0]
        n_o = int(offs[-1])
        return K + nR + int(rrlen.sum()) + n_o + (n_o if q > 2 else 0)


def compile_plan(cp: ConcatenatedPair, side: int = 1, tables=None) -> DecodePlan:
    """Pack everything the kernels need; per-trial arguments are filled in later.

    ``args`` lines up with the kernel signature after ``(seed, t0, ntrials, p)``.
    """
    t = cp.tower
    sd = cp.side(side)
    tables = _check_tables(cp, tables, side)
    if not all(isinstance(T, SyndromeTable) for T in tables):
        raise CodeError("Monte Carlo needs table-based inner decoders")
    N, k, q = cp.N, cp.k, cp.q
    nlen = cp.lengths
    nmax = int(nlen.max())
    rlen = np.array([T.H.shape[0] for T in tables], dtype=np.int64)
    rmax = max(int(rlen.max()), 1)
    Hs = np.zeros((N, rmax, nmax), np.int64)
    pair_vecs = np.zeros((N, k, nmax), np.int64)
    enc_vecs = np.zeros((N, k, nmax), np.int64)
    rrlen = np.array([G.shape[0] for G in sd.rand], dtype=np.int64)
    rand_vecs = np.zeros((N, max(int(rrlen.max()), 1), nmax), np.int64)
    uniq, tab_off, blocks, off = {}, np.zeros(N, np.int64), [], 0
    for i, T in enumerate(tables):
        ni, ri = nlen[i], rlen[i]
        Hs[i, :ri, :ni] = T.H
        pair_vecs[i, :, :ni] = sd.pairing[i]
        enc_vecs[i, :, :ni] = sd.enc[i]
        rand_vecs[i, :rrlen[i], :ni] = sd.rand[i]
        if id(T) not in uniq:
            L = np.zeros((T.leaders.shape[0], nmax), np.int64)
            L[:, :ni] = T.leaders
            uniq[id(T)] = off
            blocks.append(L)
            off += L.shape[0]
        tab_off[i] = uniq[id(T)]
    leaders = np.vstack(blocks)
    qpow_r = q ** np.arange(rmax, dtype=np.int64)
    b = cp.basis_dual if side == 2 else cp.basis
    from_basis = t.digits(b).T.copy()
    to_basis = cp._dual_lam_inv if side == 2 else cp._lam[1]
    oq = outer_quotient(cp, side)
    D = sd.outer
    Hext = D.parity_check if D.N > D.K else np.zeros((0, N), np.int64)
    args = (
        q, k, t.exp, t.log, t.order,
        cp.offsets, nlen, rlen, Hs, tab_off, leaders, qpow_r,
        pair_vecs, enc_vecs, rand_vecs, rrlen,
        np.ascontiguousarray(to_basis), from_basis, D.a, D.w,
        np.ascontiguousarray(Hext), np.ascontiguousarray(oq.M.reshape(-1, N)),
        np.ascontiguousarray(oq.rand_rows.reshape(-1, N)),
        np.ascontiguousarray(sd.other.generator_matrix.reshape(-1, N)),
    )
    return DecodePlan(side, tuple(np.ascontiguousarray(a) if isinstance(a, np.ndarray) else a for a in args))
