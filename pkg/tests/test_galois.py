import itertools

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from cssconcat.errors import CodeError, DependentBasisError, NotPrimeError, NotPrimitiveError, ReduciblePolynomialError
from cssconcat.galois import (
    DEFAULT_BINARY_POLYS,
    _phi_a,
    change_of_basis,
    companion_matrix,
    coords,
    dual_basis,
    first_primitive_poly,
    from_coords,
    make_tower,
    phi_map,
    random_basis,
    trace,
)

from . import oracles

TOWERS = [(2, 2, (1, 1, 1)), (2, 3, (1, 1, 0, 1)), (3, 2, (2, 1, 1)), (2, 4, (1, 1, 0, 0, 1)), (5, 2, (2, 1, 1))]


def test_gf4_tables(gf4):
    assert gf4.exp.tolist() == [1, 2, 3]
    assert trace(gf4, np.arange(4)).tolist() == [0, 0, 1, 1]
    assert companion_matrix(gf4).tolist() == [[0, 1], [1, 1]]
    assert dual_basis(gf4, gf4.basis_a).tolist() == [3, 1]
    # coordinates of alpha in the dual basis (alpha^2, 1)
    assert coords(gf4, gf4.basis_a_dual, 2).tolist() == [1, 1]


def test_gf8_tables(gf8):
    assert gf8.exp.tolist() == [1, 2, 4, 3, 6, 7, 5]
    assert trace(gf8, np.arange(8)).tolist() == [0, 1, 0, 1, 0, 1, 0, 1]
    assert dual_basis(gf8, gf8.basis_a).tolist() == [1, 4, 2]
    assert companion_matrix(gf8).tolist() == [[0, 0, 1], [1, 0, 1], [0, 1, 0]]


def test_gf9_tables(gf9):
    assert gf9.exp.tolist() == [1, 3, 7, 8, 2, 6, 5, 4]
    assert trace(gf9, np.arange(9)).tolist() == [0, 2, 1, 2, 1, 0, 1, 0, 2]


@pytest.mark.parametrize("q,k,poly", TOWERS)
def test_multiplication_matches_schoolbook(q, k, poly):
    t = make_tower(q, k, poly)
    xs = np.arange(t.size)
    X, Y = np.meshgrid(xs, xs, indexing="ij")
    got = t.mul(X, Y)
    want = np.array([[oracles.poly_mulmod(int(x), int(y), q, k, poly) for y in xs] for x in xs])
    assert np.array_equal(got, want)
    assert np.array_equal(t.add(X, Y), [[oracles.poly_add(int(x), int(y), q, k) for y in xs] for x in xs])


@pytest.mark.parametrize("q,k,poly", TOWERS)
def test_trace_matches_frobenius_sum(q, k, poly):
    t = make_tower(q, k, poly)
    want = [oracles.trace(x, q, k, poly) for x in range(t.size)]
    assert trace(t, np.arange(t.size)).tolist() == want


@pytest.mark.parametrize("k", sorted(DEFAULT_BINARY_POLYS))
def test_default_binary_polys_are_primitive(k):
    t = make_tower(2, k)
    assert len(set(t.exp.tolist())) == t.order
    assert t.log[t.exp].tolist() == list(range(t.order))


def test_first_primitive_poly_search():
    assert first_primitive_poly(3, 2) == (2, 1, 1)
    assert make_tower(3, 3).poly == (1, 2, 0, 1)
    assert make_tower(7, 1).exp.tolist() == [1, 3, 2, 6, 4, 5]


def test_prime_field_with_non_primitive_root_accepted():
    t = make_tower(2, 1, [0, 1])
    assert t.size == 2 and int(t.mul(1, 1)) == 1


def test_rejections():
    with pytest.raises(NotPrimeError):
        make_tower(4, 2)
    with pytest.raises(ReduciblePolynomialError) as exc:
        make_tower(2, 2, [1, 0, 1])
    assert exc.value.factor is not None
    assert list(exc.value.factor) == [1, 1]
    with pytest.raises(NotPrimitiveError) as exc:
        make_tower(2, 4, [1, 1, 1, 1, 1])
    assert exc.value.order == 5
    with pytest.raises(CodeError):
        make_tower(2, 3, [1, 1, 0, 2])
    with pytest.raises(CodeError):
        make_tower(2, 21)
    with pytest.raises(ZeroDivisionError):
        make_tower(2, 3).inv(0)


@pytest.mark.parametrize("q,k,poly", TOWERS[:3])
def test_field_axioms_exhaustive(q, k, poly):
    t = make_tower(q, k, poly)
    xs = np.arange(t.size)
    X, Y, Z = np.meshgrid(xs, xs, xs, indexing="ij")
    assert np.array_equal(t.mul(X, t.add(Y, Z)), t.add(t.mul(X, Y), t.mul(X, Z)))
    assert np.array_equal(t.mul(t.mul(X, Y), Z), t.mul(X, t.mul(Y, Z)))
    nz = xs[1:]
    assert np.all(t.mul(nz, t.inv(nz)) == 1)
    assert np.all(t.add(xs, t.neg(xs)) == 0)


@given(st.sampled_from(TOWERS), st.data())
def test_trace_is_linear_and_frobenius_invariant(spec, data):
    q, k, poly = spec
    t = make_tower(q, k, poly)
    x = data.draw(st.integers(0, t.size - 1))
    y = data.draw(st.integers(0, t.size - 1))
    c = data.draw(st.integers(0, q - 1))
    assert trace(t, t.add(x, y)) == (trace(t, x) + trace(t, y)) % q
    assert trace(t, t.smul(c, x)) == (c * trace(t, x)) % q
    assert trace(t, t.power(x, q)) == trace(t, x)


# -- identities behind the expansion maps ---------------------------------------


def _identity_suite(t, b):
    """All (xi, xi') pairs: phi/phi' intertwine Phi, and Phi is a ring map."""
    q, k = t.q, t.k
    bd = dual_basis(t, b)
    xs = np.arange(t.size)
    Phi = np.stack([phi_map(t, b, x) for x in xs])
    phi = coords(t, b, xs)
    phid = coords(t, bd, xs)
    for x, y in itertools.product(xs, xs):
        xy = int(t.mul(x, y))
        assert np.array_equal((Phi[x] @ phi[y]) % q, phi[xy])
        assert np.array_equal((phid[x] @ Phi[y]) % q, phid[xy])
        assert np.array_equal((Phi[x] @ Phi[y]) % q, Phi[xy])
        assert np.array_equal((Phi[x] + Phi[y]) % q, Phi[int(t.add(x, y))])
        # trace form in coordinates
        assert int(trace(t, xy)) == int(phi[x] @ phid[y]) % q
    assert np.array_equal(Phi[0], np.zeros((k, k)))
    assert np.array_equal(Phi[1], np.eye(k))


@pytest.mark.parametrize("q,k,poly", TOWERS[:2])
def test_power_basis_identities_exhaustive(q, k, poly):
    t = make_tower(q, k, poly)
    T = companion_matrix(t)
    # columns of T are alpha^1..alpha^k; T^i has columns alpha^i..alpha^(i+k-1)
    assert np.array_equal(T, t.digits(t.alpha_pow(np.arange(1, k + 1))).T)
    Ti = np.eye(k, dtype=np.int64)
    for i in range(t.order):
        assert np.array_equal(Ti, t.digits(t.alpha_pow(np.arange(i, i + k))).T)
        assert np.array_equal(Ti, _phi_a(t, t.alpha_pow(i)))
        Ti = (Ti @ T) % q
    # dual coordinates of the power basis are traces of alpha^j xi
    xs = np.arange(t.size)
    want = np.stack([trace(t, t.mul(t.alpha_pow(j), xs)) for j in range(k)], axis=1)
    assert np.array_equal(coords(t, t.basis_a_dual, xs), want)
    _identity_suite(t, t.basis_a)


@pytest.mark.parametrize("q,k,poly", TOWERS[:2])
def test_random_bases_satisfy_the_same_identities(q, k, poly):
    t = make_tower(q, k, poly)
    rng = np.random.default_rng(q * 100 + k)
    for _ in range(20):
        b = random_basis(t, rng)
        lam, lam_d = change_of_basis(t, b)
        assert np.array_equal((lam.T @ lam_d) % q, np.eye(k, dtype=np.int64))
        bd = dual_basis(t, b)
        # Lam' maps b'-coordinates to a'-coordinates
        xs = np.arange(t.size)
        assert np.array_equal(coords(t, t.basis_a_dual, xs), (coords(t, bd, xs) @ lam_d.T) % q)
        _identity_suite(t, b)


def test_dependent_basis_rejected(gf8):
    with pytest.raises(DependentBasisError):
        dual_basis(gf8, [1, 2, 3])
    with pytest.raises(DependentBasisError):
        coords(gf8, [1, 2], 5)


@given(st.sampled_from(TOWERS), st.data())
def test_coords_round_trip(spec, data):
    q, k, poly = spec
    t = make_tower(q, k, poly)
    b = random_basis(t, np.random.default_rng(data.draw(st.integers(0, 2**32))))
    x = data.draw(st.integers(0, t.size - 1))
    assert int(from_coords(t, b, coords(t, b, x))) == x
