"""Concatenation of N inner conjugate pairs over GF(q) with an outer GRS pair
over GF(q^k).

With dual bases (b, b') of GF(q^k) over GF(q), block i of

    pi1(x) = sum_j coords_b(x_i)_j  g_j^(i)
    pi2(y) = sum_j coords_b'(y_i)_j g'_j^(i)

and Tr(x . y) = <pi1(x), pi2(y)>.  The concatenated pair is

    L1 = pi1(D1) + (+) dual(C2^(i)),   L2 = pi2(D2) + (+) dual(C1^(i)).
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .codes import GrsCode, LinearCode, grs_new
from .conjugate import ConjugateCodePair, pair_new
from .errors import CodeError, CSSViolationError
from .galois import FieldTower, _phi_a, change_of_basis, dual_basis, trace
from .matrix import ext_rref, invert, null_space, rank, row_space_equal, solve_left


@dataclass(frozen=True)
class Side:
    """Everything the decoder needs for one of the two quotient codes.

    Side 1 decodes L1/dual(L2): inner codes C1, words built from g, symbols
    read back through g', outer code D1 modulo dual(D2).  Side 2 mirrors it.
    """

    index: int
    codes: tuple        # inner code whose syndromes stage 1 uses
    enc: tuple          # vectors carrying outer symbols into blocks
    pairing: tuple      # vectors that read outer symbols back
    rand: tuple         # generators of the inner randomness space
    basis: np.ndarray   # GF(q^k) basis matching ``enc``
    outer: GrsCode      # code decoded in stage 2
    other: GrsCode      # the partner outer code
    H: np.ndarray       # full parity-check matrix, block layout


@dataclass(frozen=True, eq=False)
class ConcatenatedPair:
    tower: FieldTower
    inners: tuple
    D1: GrsCode
    D2: GrsCode
    basis: np.ndarray
    basis_dual: np.ndarray
    H_L1: np.ndarray = field(repr=False, default=None)
    H_L2: np.ndarray = field(repr=False, default=None)

    @property
    def q(self) -> int:
        return self.tower.q

    @property
    def k(self) -> int:
        return self.tower.k

    @property
    def N(self) -> int:
        return len(self.inners)

    @property
    def lengths(self) -> np.ndarray:
        return np.array([p.n for p in self.inners], dtype=np.int64)

    @property
    def offsets(self) -> np.ndarray:
        return np.concatenate([[0], np.cumsum(self.lengths)]).astype(np.int64)

    @property
    def n_o(self) -> int:
        return int(self.lengths.sum())

    @property
    def K(self) -> int:
        return self.D1.K + self.D2.K - self.N

    @property
    def k_o(self) -> int:
        return self.k * self.K

    def block(self, v, i):
        o = self.offsets
        return np.asarray(v)[..., o[i]:o[i + 1]]

    def blocks(self, v):
        return [self.block(v, i) for i in range(self.N)]

    @cached_property
    def _lam(self):
        lam, _ = change_of_basis(self.tower, self.basis)
        return lam, invert(lam, self.q)

    def phi(self, h) -> np.ndarray:
        """Phi_b(h) = Lam^-1 Phi_a(h) Lam."""
        lam, lam_inv = self._lam
        return (lam_inv @ _phi_a(self.tower, h) @ lam) % self.q

    def coords(self, x, dual=False) -> np.ndarray:
        """Coordinates in b (or b' when ``dual``), shape ``x.shape + (k,)``."""
        lam, lam_inv = self._lam
        d = self.tower.digits(x)
        if dual:
            return (d @ self._dual_lam_inv.T) % self.q
        return (d @ lam_inv.T) % self.q

    @cached_property
    def _dual_lam_inv(self):
        B = self.tower.digits(self.basis_dual).T
        return invert(B, self.q)

    def from_coords(self, c, dual=False) -> np.ndarray:
        b = self.basis_dual if dual else self.basis
        B = self.tower.digits(b).T
        return self.tower.from_digits((np.asarray(c, dtype=np.int64) @ B.T) % self.q)

    def side(self, s: int) -> Side:
        if s == 1:
            return Side(
                1,
                tuple(p.C1 for p in self.inners),
                tuple(p.g for p in self.inners),
                tuple(p.g_dual for p in self.inners),
                tuple(p.C2.H for p in self.inners),
                self.basis,
                self.D1,
                self.D2,
                self.H_L1,
            )
        if s == 2:
            return Side(
                2,
                tuple(p.C2 for p in self.inners),
                tuple(p.g_dual for p in self.inners),
                tuple(p.g for p in self.inners),
                tuple(p.C1.H for p in self.inners),
                self.basis_dual,
                self.D2,
                self.D1,
                self.H_L2,
            )
        raise CodeError("side must be 1 or 2")

    def __repr__(self):
        return f"ConcatenatedPair([[{self.n_o},{self.k_o}]] over GF({self.q}), outer over {self.tower})"


def _pi(cp: ConcatenatedPair, x, side: int) -> np.ndarray:
    x = np.asarray(x, dtype=np.int64)
    if x.shape[-1] != cp.N:
        raise CodeError(f"outer word must have length {cp.N}, got {x.shape[-1]}")
    vecs = [p.g for p in cp.inners] if side == 1 else [p.g_dual for p in cp.inners]
    c = cp.coords(x, dual=(side == 2))
    out = [(c[..., i, :] @ vecs[i]) % cp.q for i in range(cp.N)]
    return np.concatenate(out, axis=-1)


def pi1(cp: ConcatenatedPair, x) -> np.ndarray:
    """GF(q)-linear map GF(q^k)^N -> sum of span(g^(i)), via coordinates in b."""
    return _pi(cp, x, 1)


def pi2(cp: ConcatenatedPair, y) -> np.ndarray:
    """As ``pi1`` with the dual basis b' and the vectors g'."""
    return _pi(cp, y, 2)


def block_diag(mats, widths) -> np.ndarray:
    rows = sum(m.shape[0] for m in mats)
    out = np.zeros((rows, int(sum(widths))), dtype=np.int64)
    r = c = 0
    for m, w in zip(mats, widths):
        out[r:r + m.shape[0], c:c + w] = m
        r += m.shape[0]
        c += w
    return out


def outer_pair(t: FieldTower, a, v, K1: int, K2: int):
    """D1 = GRS_K1(a, v), D2 = GRS_K2(a, w) with w the dual multipliers of (a, v).

    Needs K2 >= N - K1 so that dual(D2) = GRS_{N-K2}(a, v) sits inside D1.
    """
    N = len(a)
    D1 = grs_new(t, N, K1, a, v)
    if K2 < N - K1:
        raise CodeError(f"K2={K2} < N-K1={N - K1}: outer pair would violate the CSS condition")
    D2 = grs_new(t, N, K2, a, D1.w)
    return D1, D2


def check_outer_css(D1: GrsCode, D2: GrsCode):
    """Raise unless every generator of dual(D2) lies in D1 (plain dot product over GF(q^k))."""
    if D1.N != D2.N or D1.field != D2.field:
        raise CodeError("outer codes must share length and field")
    for row in D2.dual().generator_matrix:
        if not D1.contains(row):
            raise CSSViolationError("dual(D2) is not contained in D1", witness=row.copy())


def concatenate(inners, D1: GrsCode, D2: GrsCode, tower: FieldTower | None = None, basis=None) -> ConcatenatedPair:
    """Assemble the concatenated pair and both block parity-check matrices.

    ``basis`` defaults to the power basis; its trace-dual is used for pi2.
    """
    inners = tuple(inners)
    if not inners:
        raise CodeError("need at least one inner pair")
    tower = tower or D1.field
    if D1.field != tower or D2.field != tower:
        raise CodeError("outer codes are not over the given tower")
    ks = {p.k for p in inners}
    if len(ks) != 1:
        raise CodeError(f"inner pairs disagree on k: {sorted(ks)}")
    k = ks.pop()
    if k != tower.k:
        raise CodeError(f"inner k={k} does not match the extension degree {tower.k}")
    if any(p.q != tower.q for p in inners):
        raise CodeError("inner pairs are not over the tower's prime field")
    if D1.N != len(inners) or D2.N != len(inners):
        raise CodeError(f"outer length must equal the number of inner pairs ({len(inners)})")
    check_outer_css(D1, D2)
    basis = tower.basis_a.copy() if basis is None else np.asarray(basis, dtype=np.int64)
    bdual = dual_basis(tower, basis)
    cp = ConcatenatedPair(tower, inners, D1, D2, basis, bdual)
    H1 = build_parity_check(cp, 1)
    H2 = build_parity_check(cp, 2)
    return ConcatenatedPair(tower, inners, D1, D2, basis, bdual, H1, H2)


def build_parity_check(cp: ConcatenatedPair, side: int) -> np.ndarray:
    """Block parity-check matrix of L1 (side 1) or L2 (side 2).

    Top: block-diagonal inner parity checks.  Then, for each outer check row j,
    k rows whose block i is Phi(h_ji) (side 1) or Phi(h_ji)^t (side 2) with
    each row eta replaced by sum_m eta_m g'_m (side 1) or sum_m eta_m g_m.
    """
    q = cp.q
    if side == 1:
        tops = [p.C1.H for p in cp.inners]
        vecs = [p.g_dual for p in cp.inners]
        Hd = cp.D1.parity_check
    elif side == 2:
        tops = [p.C2.H for p in cp.inners]
        vecs = [p.g for p in cp.inners]
        Hd = cp.D2.parity_check
    else:
        raise CodeError("side must be 1 or 2")
    top = block_diag(tops, cp.lengths)
    rows = []
    for j in range(Hd.shape[0]):
        blocks = []
        for i in range(cp.N):
            P = cp.phi(Hd[j, i])
            if side == 2:
                P = P.T
            blocks.append((P @ vecs[i]) % q)
        rows.append(np.concatenate(blocks, axis=1))
    if rows:
        return np.vstack([top] + rows)
    return top


# -- generators of the codes in the duality statements -------------------------


def _span_over_prime(cp: ConcatenatedPair, ext_rows, side: int) -> np.ndarray:
    """GF(q)-generators of pi(span_{GF(q^k)} ext_rows)."""
    ext_rows = np.asarray(ext_rows, dtype=np.int64)
    if ext_rows.size == 0:
        return np.zeros((0, cp.n_o), dtype=np.int64)
    t = cp.tower
    scaled = t.mul(t.basis_a[:, None, None], ext_rows[None, :, :]).reshape(-1, cp.N)
    return _pi(cp, scaled, side)


def _dual_blocks(cp: ConcatenatedPair, which: int) -> np.ndarray:
    """(+) dual(C_which^(i)), generated by the inner parity checks."""
    mats = [p.C1.H if which == 1 else p.C2.H for p in cp.inners]
    return block_diag(mats, cp.lengths)


def _stack(*mats):
    mats = [m for m in mats if m.shape[0]]
    if not mats:
        return None
    return np.vstack(mats)


def generator_L1(cp: ConcatenatedPair) -> np.ndarray:
    """pi1(D1) + (+) dual(C2)."""
    return _stack(_span_over_prime(cp, cp.D1.generator_matrix, 1), _dual_blocks(cp, 2))


def generator_L2(cp: ConcatenatedPair) -> np.ndarray:
    """pi2(D2) + (+) dual(C1)."""
    return _stack(_span_over_prime(cp, cp.D2.generator_matrix, 2), _dual_blocks(cp, 1))


def _rank(M, q):
    return 0 if M is None else rank(M, q)


def _perp_equal(cp, A, B):
    """Check dual(rowspace A) == rowspace B; return (ok, witness)."""
    q, n = cp.q, cp.n_o
    if A is not None and B is not None:
        prod = (A @ B.T) % q
        bad = np.argwhere(prod)
        if bad.size:
            return False, B[bad[0][1]].copy()
    ra, rb = _rank(A, q), _rank(B, q)
    if ra + rb != n:
        ns = null_space(A, q) if A is not None else np.eye(n, dtype=np.int64)
        for v in ns:
            if B is None or solve_left(B, v, q) is None:
                return False, v.copy()
        return False, None
    return True, None


def verify_theorem1(cp: ConcatenatedPair):
    """Check both duality identities of the concatenated construction.

        dual(pi1(dual D2) + (+)dual C2) == pi2(D2) + (+)dual C1
        dual(pi2(dual D1) + (+)dual C1) == pi1(D1) + (+)dual C2

    as row-space equalities (perpendicularity plus a dimension count), and
    that the stored block parity-check matrices generate the left-hand
    duals.  Returns ``(ok, witness, message)``.
    """
    q = cp.q
    A1 = _stack(_span_over_prime(cp, cp.D2.dual().generator_matrix, 1), _dual_blocks(cp, 2))
    B1 = generator_L2(cp)
    ok, w = _perp_equal(cp, A1, B1)
    if not ok:
        return False, w, "dual(pi1(D2^perp) + C2^perp) != pi2(D2) + C1^perp"
    A2 = _stack(_span_over_prime(cp, cp.D1.dual().generator_matrix, 2), _dual_blocks(cp, 1))
    B2 = generator_L1(cp)
    ok, w = _perp_equal(cp, A2, B2)
    if not ok:
        return False, w, "dual(pi2(D1^perp) + C1^perp) != pi1(D1) + C2^perp"
    for name, H, A in (("H_L1", cp.H_L1, A2), ("H_L2", cp.H_L2, A1)):
        if H is None:
            continue
        if H.shape[0] and rank(H, q) != H.shape[0]:
            return False, None, f"{name} is not full rank"
        if not _same_rows(H, A, q):
            return False, None, f"{name} does not generate the expected dual code"
    return True, None, "ok"


def _same_rows(H, A, q):
    if A is None:
        return H.shape[0] == 0 or not np.any(H)
    if H.shape[0] == 0:
        return False
    return row_space_equal(H, A, q)


def check_invariants(cp: ConcatenatedPair) -> list:
    """List of violated structural invariants (empty when all hold)."""
    q = cp.q
    problems = []
    if cp.H_L1 is not None and cp.H_L2 is not None and cp.H_L1.size and cp.H_L2.size:
        if np.any((cp.H_L1 @ cp.H_L2.T) % q):
            problems.append("dual(L2) is not contained in L1")
    d1 = _rank(generator_L1(cp), q)
    d2 = _rank(generator_L2(cp), q)
    if d1 + d2 != cp.n_o + cp.k_o:
        problems.append(f"dim L1 + dim L2 = {d1 + d2} != {cp.n_o + cp.k_o}")
    if cp.H_L1 is not None and cp.H_L1.shape[0] != cp.n_o - d1:
        problems.append(f"H_L1 has {cp.H_L1.shape[0]} rows, expected {cp.n_o - d1}")
    for i, p in enumerate(cp.inners):
        if p.k and not np.array_equal((p.g @ p.g_dual.T) % q, np.eye(p.k, dtype=np.int64)):
            problems.append(f"inner pair {i}: paired generators are not delta-orthogonal")
    if np.any(trace(cp.tower, cp.tower.mul(cp.basis[:, None], cp.basis_dual[None, :])) != np.eye(cp.k, dtype=np.int64)):
        problems.append("bases are not trace-dual")
    return problems


def as_conjugate_pair(cp: ConcatenatedPair) -> ConjugateCodePair:
    """(L1, L2) as an ordinary conjugate pair over GF(q)."""
    L1 = LinearCode.from_generator(generator_L1(cp), cp.q, cp.n_o)
    L2 = LinearCode.from_generator(generator_L2(cp), cp.q, cp.n_o)
    return pair_new(L1, L2)


def outer_rref(t: FieldTower, M):
    """RREF rows and pivots of an extension-field matrix (empty-safe)."""
    M = np.asarray(M, dtype=np.int64)
    if M.shape[0] == 0:
        return M.reshape(0, M.shape[1] if M.ndim == 2 else 0), np.zeros(0, dtype=np.int64)
    R, r, piv = ext_rref(t, M)
    return R[:r].copy(), piv


# -- encoding -------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class OuterQuotient:
    """Coordinates for D / dual(D_other) on one side.

    ``R`` is the RREF basis of dual(D_other) with pivot columns ``piv``; a word
    is made canonical by clearing those columns.  ``M`` (K x N) spans a
    complement, and ``msg_cols``/``msg_inv`` recover message coefficients
    from a canonical word.
    """

    side: int
    R: np.ndarray
    piv: np.ndarray
    M: np.ndarray
    Mc: np.ndarray
    msg_cols: np.ndarray
    msg_inv: np.ndarray
    rand_rows: np.ndarray


def _canon(t: FieldTower, R, piv, d):
    d = np.array(d, dtype=np.int64)
    for r, c in enumerate(piv):
        f = d[..., c].copy()
        d = t.sub(d, t.mul(f[..., None], R[r]))
    return d


def outer_quotient(cp: ConcatenatedPair, side: int = 1) -> OuterQuotient:
    cache = cp.__dict__.setdefault("_quotients", {})
    if side in cache:
        return cache[side]
    from .matrix import ext_invert, ext_rank

    t = cp.tower
    sd = cp.side(side)
    rand_rows = sd.other.dual().generator_matrix
    R, piv = outer_rref(t, rand_rows)
    rows, cur = [], R
    r = R.shape[0]
    for g in sd.outer.generator_matrix:
        trial = np.vstack([cur, g[None, :]]) if cur.size else g[None, :]
        if ext_rank(t, trial) > r:
            cur, r = trial, r + 1
            rows.append(g)
    M = np.array(rows, dtype=np.int64).reshape(len(rows), cp.N)
    if M.shape[0] != cp.K:
        raise CodeError(f"internal: found {M.shape[0]} message rows, expected {cp.K}")
    Mc = _canon(t, R, piv, M)
    if cp.K:
        _, _, mpiv = ext_rref(t, Mc)
        cols = mpiv[: cp.K]
        minv = ext_invert(t, Mc[:, cols])
    else:
        cols = np.zeros(0, dtype=np.int64)
        minv = np.zeros((0, 0), dtype=np.int64)
    oq = OuterQuotient(side, R, piv, M, Mc, cols, minv, rand_rows)
    cache[side] = oq
    return oq


def canonical_coset(cp: ConcatenatedPair, d, side: int = 1) -> np.ndarray:
    """Canonical representative of d + dual(D_other)."""
    oq = outer_quotient(cp, side)
    return _canon(cp.tower, oq.R, oq.piv, d)


def message_of(cp: ConcatenatedPair, d, side: int = 1) -> np.ndarray:
    """Message symbols (length K over GF(q^k)) of an outer codeword."""
    from .matrix import ext_matmul

    oq = outer_quotient(cp, side)
    if cp.K == 0:
        return np.zeros(0, dtype=np.int64)
    c = _canon(cp.tower, oq.R, oq.piv, d)
    return ext_matmul(cp.tower, c[oq.msg_cols][None, :], oq.msg_inv)[0]


def outer_encode(cp: ConcatenatedPair, msg, side: int = 1, outer_rand=None) -> np.ndarray:
    """msg . M + outer_rand . G(dual D_other) over GF(q^k)."""
    from .matrix import ext_matmul

    t = cp.tower
    oq = outer_quotient(cp, side)
    msg = np.asarray(msg, dtype=np.int64).reshape(-1)
    if msg.shape[0] != cp.K:
        raise CodeError(f"message needs {cp.K} symbols over {t}, got {msg.shape[0]}")
    if np.any((msg < 0) | (msg >= t.size)):
        raise CodeError("message symbol out of range")
    d = np.zeros(cp.N, dtype=np.int64)
    if cp.K:
        d = ext_matmul(t, msg[None, :], oq.M)[0]
    nr = oq.rand_rows.shape[0]
    if outer_rand is not None and nr:
        rr = np.asarray(outer_rand, dtype=np.int64).reshape(-1)
        if rr.shape[0] != nr:
            raise CodeError(f"outer randomness needs {nr} symbols")
        d = t.add(d, ext_matmul(t, rr[None, :], oq.rand_rows)[0])
    return d


def encode(cp: ConcatenatedPair, msg, side: int = 1, outer_rand=None, inner_rand=None) -> np.ndarray:
    """Word of L1 (side 1) or L2 (side 2) in the coset of ``msg``.

    ``inner_rand`` is a list of per-block coefficient vectors over the rows of
    dual(C2^(i)) (side 1) or dual(C1^(i)) (side 2).
    """
    sd = cp.side(side)
    d = outer_encode(cp, msg, side, outer_rand)
    x = _pi(cp, d, side)
    if inner_rand is not None:
        if len(inner_rand) != cp.N:
            raise CodeError(f"inner randomness needs {cp.N} blocks")
        o = cp.offsets
        for i, (rr, G) in enumerate(zip(inner_rand, sd.rand)):
            rr = np.asarray(rr, dtype=np.int64).reshape(-1)
            if rr.shape[0] != G.shape[0]:
                raise CodeError(f"block {i}: inner randomness needs {G.shape[0]} symbols")
            if G.shape[0]:
                x[o[i]:o[i + 1]] = (x[o[i]:o[i + 1]] + rr @ G) % cp.q
    return x
