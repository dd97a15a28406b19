"""Linear codes over GF(q), quotient codes, and generalized Reed-Solomon codes."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import _kernels
from .errors import CodeError
from .galois import FieldTower
from .matrix import as_matrix, ext_matmul, null_space, row_basis, row_space_equal


@dataclass(frozen=True, eq=False)
class LinearCode:
    """An [n, dim] code.  ``G`` is the RREF generator, ``H`` the RREF parity check."""

    q: int
    n: int
    G: np.ndarray
    H: np.ndarray

    @property
    def dim(self) -> int:
        return self.G.shape[0]

    @classmethod
    def from_generator(cls, G, q: int, n: int | None = None) -> "LinearCode":
        G = as_matrix(G, cols=n)
        n = G.shape[1] if n is None else n
        G = row_basis(G, q) if G.shape[0] else np.zeros((0, n), dtype=np.int64)
        H = null_space(G, q) if G.shape[0] else np.eye(n, dtype=np.int64)
        H = row_basis(H, q) if H.shape[0] else np.zeros((0, n), dtype=np.int64)
        return cls(q=q, n=n, G=G, H=H)

    @classmethod
    def from_parity_check(cls, H, q: int, n: int | None = None) -> "LinearCode":
        return dual(cls.from_generator(H, q, n))

    def syndrome(self, v) -> np.ndarray:
        return (np.asarray(v, dtype=np.int64) @ self.H.T) % self.q

    def contains(self, v) -> bool:
        return not np.any(self.syndrome(v))

    def contains_code(self, other: "LinearCode") -> bool:
        return other.G.shape[0] == 0 or not np.any((other.G @ self.H.T) % self.q)

    def __eq__(self, other):
        return (
            isinstance(other, LinearCode)
            and self.q == other.q
            and self.n == other.n
            and np.array_equal(self.G, other.G)
        )

    __hash__ = None

    def __repr__(self):
        return f"LinearCode([{self.n},{self.dim}] over GF({self.q}))"


def dual(C: LinearCode) -> LinearCode:
    return LinearCode(q=C.q, n=C.n, G=C.H.copy(), H=C.G.copy())


def is_perpendicular(C: LinearCode, D: LinearCode) -> bool:
    """True iff every codeword of C is orthogonal to every codeword of D."""
    if C.n != D.n:
        raise CodeError(f"length mismatch: {C.n} vs {D.n}")
    if C.dim == 0 or D.dim == 0:
        return True
    return not np.any((C.G @ D.G.T) % C.q)


@dataclass(frozen=True, eq=False)
class QuotientCode:
    C: LinearCode
    B: LinearCode

    def __post_init__(self):
        if self.C.n != self.B.n:
            raise CodeError("quotient of codes with different lengths")
        if not self.C.contains_code(self.B):
            bad = next(r for r in self.B.G if not self.C.contains(r))
            raise CodeError(f"B is not contained in C; witness {bad.tolist()}")


def quotient_rate(Q: QuotientCode) -> Fraction:
    return Fraction(Q.C.dim - Q.B.dim, Q.C.n)


def same_code(A: LinearCode, B: LinearCode) -> bool:
    return A.n == B.n and row_space_equal(A.G, B.G, A.q)


# -- GRS ---------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class GrsCode:
    """GRS_K(a, v) = {(v_j f(a_j))_j : deg f < K} over the tower's extension field.

    ``w`` holds the multipliers of the dual code, GRS_{N-K}(a, w).
    """

    field: FieldTower
    K: int
    a: np.ndarray
    v: np.ndarray
    w: np.ndarray

    @property
    def N(self) -> int:
        return len(self.a)

    @property
    def radius(self) -> int:
        return (self.N - self.K) // 2

    def _rows(self, mult, count):
        t = self.field
        j = np.arange(count, dtype=np.int64)[:, None]
        return t.mul(mult[None, :], t.power(self.a[None, :], j))

    @property
    def generator_matrix(self) -> np.ndarray:
        return self._rows(self.v, self.K)

    @property
    def parity_check(self) -> np.ndarray:
        """Row j is (w_i a_i^j)_i, j < N - K."""
        return self._rows(self.w, self.N - self.K)

    def dual(self) -> "GrsCode":
        return GrsCode(self.field, self.N - self.K, self.a, self.w, self.v)

    def encode(self, msg) -> np.ndarray:
        msg = np.asarray(msg, dtype=np.int64)
        if self.K == 0:
            return np.zeros(self.N, dtype=np.int64)
        return ext_matmul(self.field, msg[None, :], self.generator_matrix)[0]

    def syndromes(self, word) -> np.ndarray:
        word = np.asarray(word, dtype=np.int64)
        if self.N == self.K:
            return np.zeros(0, dtype=np.int64)
        return self.field.dot(self.parity_check, word[None, :])

    def contains(self, word) -> bool:
        return not np.any(self.syndromes(word))

    def __repr__(self):
        return f"GrsCode(N={self.N}, K={self.K}, over {self.field})"


def dual_multipliers(t: FieldTower, a, v) -> np.ndarray:
    """w_j = (v_j prod_{i != j} (a_j - a_i))^-1."""
    a = np.asarray(a, dtype=np.int64)
    v = np.asarray(v, dtype=np.int64)
    w = np.zeros(len(a), dtype=np.int64)
    for j in range(len(a)):
        prod = int(v[j])
        for i in range(len(a)):
            if i != j:
                prod = int(t.mul(prod, t.sub(a[j], a[i])))
        w[j] = int(t.inv(prod))
    return w


def grs_new(t: FieldTower, N: int, K: int, a, v) -> GrsCode:
    a = np.asarray(a, dtype=np.int64)
    v = np.asarray(v, dtype=np.int64)
    if len(a) != N or len(v) != N:
        raise CodeError(f"need {N} evaluation points and multipliers")
    if N > t.size:
        raise CodeError(f"N={N} exceeds the field size {t.size}")
    if not 0 <= K <= N:
        raise CodeError(f"dimension K={K} outside [0, {N}]")
    if np.any((a < 0) | (a >= t.size)) or np.any((v < 0) | (v >= t.size)):
        raise CodeError("element out of range")
    if len(set(a.tolist())) != N:
        raise CodeError("evaluation points must be distinct")
    if np.any(v == 0):
        raise CodeError("column multipliers must be nonzero")
    w = dual_multipliers(t, a, v)
    D = GrsCode(t, K, a, v, w)
    if K and N - K:
        if np.any(ext_matmul(t, D.generator_matrix, D.parity_check.T)):
            raise CodeError("internal: GRS dual multipliers failed the orthogonality check")
    return D


def grs_bdd_decode(D: GrsCode, syndromes):
    """Error vector E with the given syndromes and weight <= (N-K)//2, plus ok flag."""
    t = D.field
    S = np.ascontiguousarray(np.asarray(syndromes, dtype=np.int64))
    if S.shape != (D.N - D.K,):
        raise CodeError(f"expected {D.N - D.K} syndromes, got {S.shape}")
    E, ok = _kernels.grs_bdd(S, D.a, D.w, t.q, t.k, t.exp, t.log, t.order)
    return E, bool(ok)


__all__ = [
    "LinearCode",
    "QuotientCode",
    "GrsCode",
    "dual",
    "is_perpendicular",
    "quotient_rate",
    "same_code",
    "grs_new",
    "grs_bdd_decode",
    "dual_multipliers",
]
