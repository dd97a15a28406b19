"""Conjugate (CSS) code pairs, paired generators, coset encoding and the
coset-leader syndrome decoder used for the inner codes."""
from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from ._kernels import uniforms
from .codes import LinearCode
from .errors import CodeError, CSSViolationError, TableTooLargeError
from .matrix import as_matrix, invert, rank, row_space_equal

MAX_SYNDROME_BITS = 24


@dataclass(frozen=True, eq=False)
class ConjugateCodePair:
    """(C1, C2) with dual(C2) <= C1.

    ``g`` (k x n) completes a basis of dual(C2) to one of C1; ``g_dual`` (k x n)
    completes dual(C1) to C2, and <g_l, g_dual_m> = delta_lm.
    """

    C1: LinearCode
    C2: LinearCode
    g: np.ndarray
    g_dual: np.ndarray

    @property
    def n(self) -> int:
        return self.C1.n

    @property
    def q(self) -> int:
        return self.C1.q

    @property
    def k(self) -> int:
        return self.C1.dim + self.C2.dim - self.n

    def swapped(self) -> "ConjugateCodePair":
        return ConjugateCodePair(self.C2, self.C1, self.g_dual.copy(), self.g.copy())

    def __repr__(self):
        return f"ConjugateCodePair([[{self.n},{self.k}]] over GF({self.q}))"


def check_css(C1: LinearCode, C2: LinearCode):
    """Raise ``CSSViolationError`` unless dual(C2) <= C1."""
    if C1.n != C2.n or C1.q != C2.q:
        raise CodeError("conjugate pair codes must share length and field")
    for row in C2.H:
        if not C1.contains(row):
            raise CSSViolationError(
                "dual(C2) is not contained in C1", witness=row.copy()
            )


def derive_g(C1: LinearCode, C2: LinearCode) -> np.ndarray:
    """Rows of C1's RREF generator that extend a basis of dual(C2) to C1."""
    q, n = C1.q, C1.n
    basis = C2.H.copy()
    r = basis.shape[0]
    chosen = []
    for row in C1.G:
        trial = np.vstack([basis, row[None, :]]) if basis.size else row[None, :]
        if rank(trial, q) > r:
            basis, r = trial, r + 1
            chosen.append(row)
    return np.array(chosen, dtype=np.int64).reshape(len(chosen), n)


def complete_dual_generators(C1: LinearCode, C2: LinearCode, g) -> np.ndarray:
    """g' with <g_l, g'_m> = delta_lm, g'_m in C2 and C2 = dual(C1) + span(g').

    Stacks A = [H2; g; e_i ...] (greedy standard-basis completion), inverts it
    and reads the g' off the columns of A^-1 that sit opposite the g rows.
    """
    q, n = C1.q, C1.n
    k = C1.dim + C2.dim - n
    g = as_matrix(g, cols=n) % q
    if g.shape != (k, n):
        raise CodeError(f"expected {k} generator vectors of length {n}, got {g.shape}")
    top = np.vstack([C2.H, g]) if k else C2.H
    if rank(top, q) != top.shape[0]:
        raise CodeError("g is linearly dependent modulo dual(C2)")
    for row in g:
        if not C1.contains(row):
            raise CodeError(f"g vector {row.tolist()} is not in C1")
    A = top
    r = rank(A, q) if A.size else 0
    for i in range(n):
        if A.shape[0] == n:
            break
        e = np.zeros((1, n), dtype=np.int64)
        e[0, i] = 1
        trial = np.vstack([A, e]) if A.size else e
        if rank(trial, q) > r:
            A, r = trial, r + 1
    if A.shape[0] != n:
        raise CodeError("internal: could not complete A to an invertible matrix")
    Ainv = invert(A, q)
    off = C2.H.shape[0]
    g_dual = Ainv[:, off:off + k].T.copy()
    _check_pairing(C1, C2, g, g_dual)
    return g_dual


def _check_pairing(C1, C2, g, g_dual):
    q = C1.q
    k = g.shape[0]
    if k and not np.array_equal((g @ g_dual.T) % q, np.eye(k, dtype=np.int64)):
        raise CodeError("paired generators are not delta-orthogonal")
    for row in g_dual:
        if not C2.contains(row):
            raise CodeError(f"g' vector {row.tolist()} is not in C2")
    span = np.vstack([C1.H, g_dual]) if k else C1.H
    if not row_space_equal(span, C2.G, q) and not (span.size == 0 and C2.dim == 0):
        raise CodeError("dual(C1) + span(g') does not reproduce C2")


def pair_new(C1: LinearCode, C2: LinearCode, g=None, g_dual=None) -> ConjugateCodePair:
    """Validate dual(C2) <= C1 and attach paired generators (derived when absent)."""
    check_css(C1, C2)
    if g is None:
        g = derive_g(C1, C2)
    g = as_matrix(g, cols=C1.n) % C1.q
    if g_dual is None:
        g_dual = complete_dual_generators(C1, C2, g)
    else:
        g_dual = as_matrix(g_dual, cols=C1.n) % C1.q
        if g.shape != g_dual.shape:
            raise CodeError("g and g_dual must have the same shape")
        if rank(np.vstack([C2.H, g]), C1.q) != C2.H.shape[0] + g.shape[0]:
            raise CodeError("g is linearly dependent modulo dual(C2)")
        _check_pairing(C1, C2, g, g_dual)
    return ConjugateCodePair(C1, C2, g, g_dual)


def coset_encode(p: ConjugateCodePair, msg, rand=None, seed=None) -> np.ndarray:
    """sum_l msg_l g_l + b with b in dual(C2).

    ``rand`` gives b's coefficients over the rows of C2.H; alternatively
    ``seed`` draws them uniformly from the counter-based generator.
    """
    q = p.q
    msg = np.asarray(msg, dtype=np.int64).reshape(-1)
    if msg.shape[0] != p.k:
        raise CodeError(f"message needs {p.k} symbols, got {msg.shape[0]}")
    nr = p.C2.H.shape[0]
    if rand is None:
        if seed is None:
            rand = np.zeros(nr, dtype=np.int64)
        else:
            rand = (uniforms(seed, [0], nr)[0] * q).astype(np.int64)
    rand = np.asarray(rand, dtype=np.int64).reshape(-1)
    if rand.shape[0] != nr:
        raise CodeError(f"randomness needs {nr} symbols, got {rand.shape[0]}")
    word = np.zeros(p.n, dtype=np.int64)
    if p.k:
        word += msg @ p.g
    if nr:
        word += rand @ p.C2.H
    return word % q


def coset_message(p: ConjugateCodePair, word) -> np.ndarray:
    """Message of a C1 word: its pairings with g'."""
    return (np.asarray(word, dtype=np.int64) @ p.g_dual.T) % p.q


@dataclass(frozen=True, eq=False)
class SyndromeTable:
    """Minimum-weight coset leaders of a parity-check matrix ``H``.

    ``leaders[s]`` is the leader whose syndrome has index ``s = sum s_i q^i``;
    among leaders of equal weight the lexicographically smallest tuple wins.
    """

    q: int
    H: np.ndarray
    leaders: np.ndarray

    @property
    def qpow(self) -> np.ndarray:
        return self.q ** np.arange(self.H.shape[0], dtype=np.int64)

    def index(self, s) -> int:
        return int(np.asarray(s, dtype=np.int64) @ self.qpow)

    def syndrome(self, e) -> np.ndarray:
        return (np.asarray(e, dtype=np.int64) @ self.H.T) % self.q

    def leader(self, s) -> np.ndarray:
        return self.leaders[self.index(s)]

    @property
    def J(self) -> np.ndarray:
        """The correctable set: all coset leaders."""
        return self.leaders


def build_syndrome_table(C1: LinearCode) -> SyndromeTable:
    q, n = C1.q, C1.n
    H = C1.H
    r = H.shape[0]
    if r > MAX_SYNDROME_BITS or q**r > 1 << MAX_SYNDROME_BITS:
        raise TableTooLargeError(
            f"syndrome table needs {q}^{r} entries; plug in a custom inner decoder"
        )
    size = q**r
    qpow = q ** np.arange(r, dtype=np.int64)
    leaders = np.zeros((size, n), dtype=np.int64)
    filled = np.zeros(size, dtype=bool)
    filled[0] = True
    remaining = size - 1
    w = 0
    while remaining:
        w += 1
        if w > n:
            raise CodeError("internal: syndrome space not covered")
        vecs = []
        for pos in itertools.combinations(range(n), w):
            for vals in itertools.product(range(1, q), repeat=w):
                v = np.zeros(n, dtype=np.int64)
                v[list(pos)] = vals
                vecs.append(v)
        V = np.array(vecs)
        V = V[np.lexsort(V.T[::-1])]
        idx = ((V @ H.T) % q) @ qpow
        _, first = np.unique(idx, return_index=True)
        for j in first:
            s = idx[j]
            if not filled[s]:
                filled[s] = True
                leaders[s] = V[j]
                remaining -= 1
    return SyndromeTable(q=q, H=H, leaders=leaders)


def inner_decode(p: ConjugateCodePair, tbl: SyndromeTable, s) -> np.ndarray:
    """Error estimate for syndrome ``s`` (length n - dim C1)."""
    s = np.asarray(s, dtype=np.int64).reshape(-1)
    if s.shape[0] != tbl.H.shape[0]:
        raise CodeError(f"syndrome must have length {tbl.H.shape[0]}")
    return tbl.leader(s).copy()


def inner_success(p: ConjugateCodePair, e, e_hat) -> bool:
    """The estimate is good enough: e - e_hat lies in dual(C2)."""
    return in_dual(p.C2, np.asarray(e, dtype=np.int64) - np.asarray(e_hat, dtype=np.int64))


def in_dual(C: LinearCode, v) -> bool:
    """v lies in dual(C)."""
    return not np.any((np.asarray(v, dtype=np.int64) @ C.G.T) % C.q)


__all__ = [
    "ConjugateCodePair",
    "SyndromeTable",
    "pair_new",
    "derive_g",
    "complete_dual_generators",
    "coset_encode",
    "coset_message",
    "build_syndrome_table",
    "inner_decode",
    "in_dual",
    "inner_success",
    "check_css",
]
