"""Exact dense linear algebra over GF(q) and GF(q^k).

Matrices are plain 2-D ``int64`` numpy arrays with entries reduced mod q;
the modulus (or the tower, for extension-field entries) is passed alongside.
Pivoting is deterministic: leftmost column first, topmost nonzero row.
"""
from __future__ import annotations

from functools import lru_cache

import numpy as np

from . import _kernels
from .errors import SingularMatrixError


@lru_cache(maxsize=None)
def _inv_table(q: int) -> np.ndarray:
    from .galois import prime_inverse_table

    return prime_inverse_table(q)


def as_matrix(M, cols=None) -> np.ndarray:
    M = np.asarray(M, dtype=np.int64)
    if M.ndim == 1:
        M = M.reshape(1, -1) if M.size else np.zeros((0, cols or 0), dtype=np.int64)
    return M


def rref(M, q: int):
    """Return ``(R, rank, pivots)`` with R the reduced row echelon form of M."""
    M = as_matrix(M)
    if M.shape[0] == 0 or M.shape[1] == 0:
        return M.copy() % q, 0, np.zeros(0, dtype=np.int64)
    R, r, piv = _kernels.rref(np.ascontiguousarray(M), q, _inv_table(q))
    return R, int(r), piv


def rank(M, q: int) -> int:
    return rref(M, q)[1]


def row_basis(M, q: int) -> np.ndarray:
    """Nonzero rows of the RREF: a canonical basis of the row space."""
    R, r, _ = rref(M, q)
    return R[:r].copy()


def matmul(A, B, q: int) -> np.ndarray:
    return (as_matrix(A) @ as_matrix(B)) % q


def null_space(M, q: int) -> np.ndarray:
    """Rows spanning {y : M y^t = 0}; exactly ``cols - rank`` of them."""
    M = as_matrix(M)
    n = M.shape[1]
    R, r, piv = rref(M, q)
    free = [c for c in range(n) if c not in set(piv.tolist())]
    N = np.zeros((len(free), n), dtype=np.int64)
    for i, f in enumerate(free):
        N[i, f] = 1
        for row, p in enumerate(piv):
            N[i, p] = (-R[row, f]) % q
    return N


def invert(M, q: int) -> np.ndarray:
    """Exact inverse; raises ``SingularMatrixError`` carrying a null vector."""
    M = as_matrix(M)
    n, m = M.shape
    if n != m:
        raise ValueError(f"cannot invert a {n}x{m} matrix")
    aug = np.concatenate([M % q, np.eye(n, dtype=np.int64)], axis=1)
    R, r, piv = rref(aug, q)
    if r < n or (n and piv[n - 1] >= n):
        ns = null_space(M, q)
        raise SingularMatrixError(f"matrix is singular (rank {rank(M, q)} < {n})", ns[0])
    return R[:, n:].copy()


def in_row_space(v, M, q: int) -> bool:
    M = as_matrix(M, cols=len(v))
    if M.shape[0] == 0:
        return not np.any(np.asarray(v) % q)
    return rank(np.vstack([M, np.asarray(v, dtype=np.int64)]), q) == rank(M, q)


def solve_left(M, v, q: int):
    """Coefficients c with c M = v, or None when v is outside the row space."""
    M = as_matrix(M)
    v = np.asarray(v, dtype=np.int64) % q
    m, n = M.shape
    aug = np.concatenate([M.T, v[:, None]], axis=1)
    R, r, piv = rref(aug, q)
    if r and piv[-1] == m:
        return None
    c = np.zeros(m, dtype=np.int64)
    for row, p in enumerate(piv):
        c[p] = R[row, m]
    return c


def row_space_equal(A, B, q: int) -> bool:
    A, B = as_matrix(A), as_matrix(B)
    ra = rank(A, q) if A.size else 0
    rb = rank(B, q) if B.size else 0
    if ra != rb:
        return False
    if ra == 0:
        return True
    return rank(np.vstack([A, B]), q) == ra


# -- extension-field versions (small sizes, vectorised row operations) --------


def ext_rref(t, M):
    """RREF over GF(q^k) for a tower ``t``; returns ``(R, rank, pivots)``."""
    R = np.array(as_matrix(M), dtype=np.int64)
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
        R[r] = t.mul(R[r], t.inv(R[r, c]))
        for i in np.flatnonzero(R[:, c]):
            if i != r:
                R[i] = t.sub(R[i], t.mul(R[i, c], R[r]))
        piv.append(c)
        r += 1
    return R, r, np.array(piv, dtype=np.int64)


def ext_matmul(t, A, B) -> np.ndarray:
    A, B = as_matrix(A), as_matrix(B)
    return t.sum(t.mul(A[:, :, None], B[None, :, :]), axis=1)


def ext_null_space(t, M) -> np.ndarray:
    M = as_matrix(M)
    n = M.shape[1]
    R, r, piv = ext_rref(t, M)
    free = [c for c in range(n) if c not in set(piv.tolist())]
    N = np.zeros((len(free), n), dtype=np.int64)
    for i, f in enumerate(free):
        N[i, f] = 1
        for row, p in enumerate(piv):
            N[i, p] = t.neg(R[row, f])
    return N


def ext_invert(t, M) -> np.ndarray:
    M = as_matrix(M)
    n = M.shape[0]
    aug = np.concatenate([M, np.eye(n, dtype=np.int64)], axis=1)
    R, r, piv = ext_rref(t, aug)
    if r < n or (n and piv[n - 1] >= n):
        raise SingularMatrixError("matrix over the extension field is singular", ext_null_space(t, M)[0])
    return R[:, n:].copy()


def ext_rank(t, M) -> int:
    return ext_rref(t, M)[1]
