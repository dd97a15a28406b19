"""Prime and extension field arithmetic, trace-dual bases and the matrix
representation of GF(q^k) over GF(q).

Elements of GF(q^k) are ints in ``[0, q^k)``: the base-q digits of an element
are its coordinates in the power basis ``(1, alpha, ..., alpha^(k-1))``.
All arithmetic methods accept scalars or numpy arrays.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from . import _kernels as K
from .errors import (
    CodeError,
    DependentBasisError,
    NotPrimeError,
    NotPrimitiveError,
    ReduciblePolynomialError,
)

MAX_FIELD_SIZE = 1 << 20

# ascending coefficients, checked primitive at construction
DEFAULT_BINARY_POLYS = {
    1: (1, 1),
    2: (1, 1, 1),
    3: (1, 1, 0, 1),
    4: (1, 1, 0, 0, 1),
    5: (1, 0, 1, 0, 0, 1),
    6: (1, 1, 0, 0, 0, 0, 1),
    7: (1, 1, 0, 0, 0, 0, 0, 1),
    8: (1, 0, 1, 1, 1, 0, 0, 0, 1),
    9: (1, 0, 0, 0, 1, 0, 0, 0, 0, 1),
    10: (1, 0, 0, 1, 0, 0, 0, 0, 0, 0, 1),
    11: (1, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0, 1),
    12: (1, 1, 0, 0, 1, 0, 1, 0, 0, 0, 0, 0, 1),
    13: (1, 1, 0, 1, 1, 0, 0, 0, 0, 0, 0, 0, 0, 1),
    14: (1, 1, 0, 0, 0, 0, 1, 0, 0, 0, 1, 0, 0, 0, 1),
    15: (1, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1),
    16: (1, 1, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0, 1, 0, 0, 0, 1),
}


def is_prime(q: int) -> bool:
    if q < 2:
        return False
    i = 2
    while i * i <= q:
        if q % i == 0:
            return False
        i += 1
    return True


def prime_inverse_table(q: int) -> np.ndarray:
    """``inv[x] = x^-1 mod q`` (``inv[0] = 0``)."""
    x = np.arange(q, dtype=np.int64)
    r = np.ones(q, dtype=np.int64)
    e = q - 2
    b = x.copy()
    while e > 0:
        if e & 1:
            r = (r * b) % q
        b = (b * b) % q
        e >>= 1
    r[0] = 0
    return r


# -- tiny polynomial helpers over GF(q), ascending coefficient lists ---------


def _ptrim(a):
    a = list(a)
    while a and a[-1] == 0:
        a.pop()
    return a


def _pmod(a, b, q):
    a = _ptrim(a)
    b = _ptrim(b)
    inv = pow(b[-1], q - 2, q)
    while len(a) >= len(b):
        f = a[-1] * inv % q
        shift = len(a) - len(b)
        for i, c in enumerate(b):
            a[shift + i] = (a[shift + i] - f * c) % q
        a = _ptrim(a)
    return a


def _pmulmod(a, b, m, q):
    r = [0] * (len(a) + len(b) - 1) if a and b else []
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                r[i + j] = (r[i + j] + x * y) % q
    return _pmod(r, m, q)


def _pgcd(a, b, q):
    a, b = _ptrim(a), _ptrim(b)
    while b:
        a, b = b, _pmod(a, b, q)
    return a


def _find_factor(g, q):
    """A nontrivial factor (gcd) of monic g, or None if g is irreducible (Ben-Or)."""
    k = len(g) - 1
    xq = [0, 1]
    for i in range(1, k // 2 + 1):
        # xq <- xq^q mod g
        base, e, acc = xq, q, [1]
        while e:
            if e & 1:
                acc = _pmulmod(acc, base, g, q)
            base = _pmulmod(base, base, g, q)
            e >>= 1
        xq = acc
        diff = list(xq) + [0] * max(0, 2 - len(xq))
        diff[1] = (diff[1] - 1) % q
        h = _pgcd(g, diff, q)
        if len(h) > 1:
            return h
    return None


@dataclass(frozen=True, eq=False)
class FieldTower:
    """GF(q) together with GF(q^k) = GF(q)[x]/(g), alpha = class of x."""

    q: int
    k: int
    poly: tuple
    alpha: int
    exp: np.ndarray = field(repr=False)
    log: np.ndarray = field(repr=False)

    @property
    def size(self) -> int:
        return self.q**self.k

    @property
    def order(self) -> int:
        return self.size - 1

    def __eq__(self, other):
        return (
            isinstance(other, FieldTower)
            and (self.q, self.k, self.poly) == (other.q, other.k, other.poly)
        )

    def __hash__(self):
        return hash((self.q, self.k, self.poly))

    def __str__(self):
        return f"GF({self.q}^{self.k})" if self.k > 1 else f"GF({self.q})"

    # -- arithmetic ---------------------------------------------------------

    def add(self, x, y):
        return K.v_add(x, y, self.q, self.k)

    def sub(self, x, y):
        return K.v_sub(x, y, self.q, self.k)

    def neg(self, x):
        return K.v_neg(x, self.q, self.k)

    def mul(self, x, y):
        return K.v_mul(x, y, self.exp, self.log, self.order)

    def inv(self, x):
        x = np.asarray(x, dtype=np.int64)
        if np.any(x == 0):
            raise ZeroDivisionError("inverse of 0")
        return self.exp[(self.order - self.log[x]) % self.order]

    def div(self, x, y):
        return self.mul(x, self.inv(y))

    def power(self, x, e):
        x = np.asarray(x, dtype=np.int64)
        e = np.asarray(e, dtype=np.int64)
        r = self.exp[(self.log[x] * e) % self.order]
        return np.where(e == 0, 1, np.where(x == 0, 0, r))

    def smul(self, c, x):
        """Prime-field scalar times element."""
        d = self.digits(x)
        return self.from_digits((d * np.asarray(c, dtype=np.int64)[..., None]) % self.q)

    def alpha_pow(self, i):
        """Power of the generator used for the log tables (alpha itself when k > 1)."""
        return self.exp[np.asarray(i, dtype=np.int64) % self.order]

    def digits(self, x):
        """Power-basis coordinates, shape ``x.shape + (k,)``."""
        return K.v_digits(x, self.q, self.k)

    def from_digits(self, d):
        return K.v_undigits(d, self.q)

    def sum(self, x, axis=-1):
        """Field sum along an axis."""
        d = self.digits(x)
        return self.from_digits(np.sum(d, axis=axis - 1 if axis < 0 else axis) % self.q)

    def dot(self, x, y):
        """Extension-field dot product along the last axis."""
        return self.sum(self.mul(x, y), axis=-1)

    @property
    def elements(self) -> np.ndarray:
        return np.arange(self.size, dtype=np.int64)

    # -- bases ----------------------------------------------------------------

    @property
    def basis_a(self) -> np.ndarray:
        """Power basis (1, alpha, ..., alpha^(k-1))."""
        return self.q ** np.arange(self.k, dtype=np.int64)

    @cached_property
    def trace_of_power_basis(self) -> np.ndarray:
        out = np.zeros(self.k, dtype=np.int64)
        for i, b in enumerate(self.basis_a):
            acc, cur = 0, int(b)
            for _ in range(self.k):
                acc = int(self.add(acc, cur))
                cur = int(self.power(cur, self.q))
            if acc >= self.q:
                raise CodeError(f"trace of basis element {b} fell outside GF({self.q})")
            out[i] = acc
        return out

    @cached_property
    def basis_a_dual(self) -> np.ndarray:
        return dual_basis(self, self.basis_a)

    @cached_property
    def inv_table(self) -> np.ndarray:
        return prime_inverse_table(self.q)


def make_tower(q: int, k: int, poly=None) -> FieldTower:
    """Build GF(q^k) from ascending monic coefficients of g(x).

    Without ``poly`` a tabulated binary polynomial is used, or else the first
    primitive one in base-q counting order of (c_0, ..., c_{k-1}).  Raises when q is not prime,
    g is reducible, or (for k > 1) the class of x is not primitive.
    """
    if not is_prime(q):
        raise NotPrimeError(f"q={q} is not prime")
    if k < 1:
        raise CodeError("extension degree must be >= 1")
    if q**k > MAX_FIELD_SIZE:
        raise CodeError(f"field size {q}^{k} exceeds 2^20")
    if poly is None:
        if q == 2 and k in DEFAULT_BINARY_POLYS:
            poly = DEFAULT_BINARY_POLYS[k]
        else:
            poly = first_primitive_poly(q, k)
    poly = tuple(int(c) for c in poly)
    if len(poly) != k + 1 or poly[-1] != 1:
        raise CodeError(f"polynomial {list(poly)} is not monic of degree {k}")
    if any(c < 0 or c >= q for c in poly):
        raise CodeError(f"polynomial coefficients must lie in [0, {q})")
    size = q**k
    order = size - 1
    # x^k = -(c_0 + ... + c_{k-1} x^{k-1})
    red = [(-c) % q for c in poly[:k]]
    pw = q ** np.arange(k, dtype=np.int64)

    if k == 1:
        alpha = red[0]
        # the prime field is its own extension; tables use any primitive root
        gen = next(g for g in range(1, q) if _mult_order_mod(g, q) == q - 1)
        exp = np.array([pow(gen, i, q) for i in range(order)], dtype=np.int64)
    else:
        alpha = q
        exp = np.zeros(order, dtype=np.int64)
        cur = [1] + [0] * (k - 1)
        mult_order = None
        if q == 2:
            mask = int(np.dot(red, pw))
            val = 1
            for i in range(order):
                if i > 0 and val == 1:
                    mult_order = i
                    break
                exp[i] = val
                val <<= 1
                if val >> k:
                    val = (val ^ (1 << k)) ^ mask
            else:
                if val != 1:
                    mult_order = -1
        else:
            for i in range(order):
                val = int(np.dot(cur, pw))
                if i > 0 and val == 1:
                    mult_order = i
                    break
                exp[i] = val
                top = cur[-1]
                cur = [0] + cur[:-1]
                if top:
                    cur = [(c + top * r) % q for c, r in zip(cur, red)]
            else:
                if int(np.dot(cur, pw)) != 1:
                    mult_order = -1
        if mult_order is not None:
            factor = _find_factor(list(poly), q)
            if factor is not None or mult_order == -1:
                raise ReduciblePolynomialError(
                    f"polynomial {list(poly)} is reducible over GF({q})", factor=factor
                )
            raise NotPrimitiveError(
                f"x has multiplicative order {mult_order} != {order} modulo {list(poly)}",
                order=mult_order,
            )
    log = np.zeros(size, dtype=np.int64)
    log[exp] = np.arange(order, dtype=np.int64)
    return FieldTower(q=q, k=k, poly=poly, alpha=alpha, exp=exp, log=log)


def first_primitive_poly(q: int, k: int) -> tuple:
    """Smallest monic primitive polynomial of degree k, counting c_0 fastest."""
    if k == 1:
        return (0, 1) if q == 2 else ((-next(g for g in range(2, q) if _mult_order_mod(g, q) == q - 1)) % q, 1)
    for code in range(1, q**k):
        poly = tuple((code // q**i) % q for i in range(k)) + (1,)
        if poly[0] == 0:
            continue
        try:
            make_tower(q, k, poly)
        except CodeError:
            continue
        return poly
    raise CodeError(f"no primitive polynomial of degree {k} over GF({q})")


def _mult_order_mod(g, q):
    x, i = g % q, 1
    while x != 1:
        x = x * g % q
        i += 1
        if i > q:
            return 0
    return i


def trace(t: FieldTower, xi):
    """Tr(xi) = xi + xi^q + ... + xi^(q^(k-1)), returned as an int in [0, q)."""
    return (t.digits(xi) @ t.trace_of_power_basis) % t.q


def _basis_matrix(t: FieldTower, b) -> np.ndarray:
    """Columns are power-basis coordinates of the basis elements."""
    b = np.asarray(b, dtype=np.int64)
    if b.shape != (t.k,):
        raise DependentBasisError(f"a basis needs exactly {t.k} elements")
    return t.digits(b).T.copy()


def _invert_mod(M, q, what):
    from .matrix import invert

    from .errors import SingularMatrixError

    try:
        return invert(M, q)
    except SingularMatrixError as exc:
        raise DependentBasisError(f"{what} is not a basis") from exc


def coords(t: FieldTower, b, xi) -> np.ndarray:
    """Coordinates of xi in basis b, shape ``xi.shape + (k,)``."""
    B = _basis_matrix(t, b)
    Binv = _invert_mod(B, t.q, "b")
    return (t.digits(xi) @ Binv.T) % t.q


def from_coords(t: FieldTower, b, c) -> np.ndarray:
    """Inverse of ``coords``."""
    B = _basis_matrix(t, b)
    return t.from_digits((np.asarray(c, dtype=np.int64) @ B.T) % t.q)


def dual_basis(t: FieldTower, b) -> np.ndarray:
    """The unique b' with Tr(b_l b'_m) = delta_lm, via the inverse Gram matrix."""
    b = np.asarray(b, dtype=np.int64)
    _basis_matrix(t, b)
    gram = trace(t, t.mul(b[:, None], b[None, :]))
    ginv = _invert_mod(gram, t.q, "b (singular trace Gram matrix)")
    # b'_m = sum_j ginv[j, m] b_j
    return t.sum(t.smul(ginv, b[:, None]), axis=0)


def companion_matrix(t: FieldTower) -> np.ndarray:
    """Matrix of multiplication by alpha in the power basis.

    Row 0 is (0, ..., 0, g_0); below it the identity block, with the last
    column (g_1, ..., g_{k-1}), where x^k = g_0 + g_1 x + ... + g_{k-1} x^{k-1}.
    """
    k, q = t.k, t.q
    g = [(-c) % q for c in t.poly[:k]]
    T = np.zeros((k, k), dtype=np.int64)
    T[1:, :-1] = np.eye(k - 1, dtype=np.int64)
    T[:, -1] = g
    return T


def _phi_a(t: FieldTower, xi) -> np.ndarray:
    """Multiplication-by-xi matrix in the power basis: column j = coords(xi alpha^j)."""
    return t.digits(t.mul(int(xi), t.basis_a)).T.copy()


def change_of_basis(t: FieldTower, b):
    """(Lam, Lam_dual) with coords_a = Lam coords_b and coords_a' = Lam_dual coords_b'."""
    lam = _basis_matrix(t, b)
    lam_inv = _invert_mod(lam, t.q, "b")
    return lam, lam_inv.T.copy()


def phi_map(t: FieldTower, b, xi) -> np.ndarray:
    """k x k matrix Phi_b(xi) = Lam^-1 Phi_a(xi) Lam over GF(q)."""
    lam = _basis_matrix(t, b)
    lam_inv = _invert_mod(lam, t.q, "b")
    return (lam_inv @ _phi_a(t, xi) @ lam) % t.q


def random_basis(t: FieldTower, rng: np.random.Generator) -> np.ndarray:
    """Uniformly random ordered basis of GF(q^k) over GF(q)."""
    from .matrix import rank

    while True:
        b = rng.integers(1, t.size, size=t.k)
        if rank(t.digits(b), t.q) == t.k:
            return b.astype(np.int64)
