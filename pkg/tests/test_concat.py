import numpy as np
import pytest

from cssconcat.codes import grs_new
from cssconcat.concat import (
    as_conjugate_pair,
    build_parity_check,
    canonical_coset,
    check_invariants,
    concatenate,
    encode,
    generator_L1,
    generator_L2,
    message_of,
    outer_encode,
    outer_pair,
    pi1,
    pi2,
)
from cssconcat.concat import verify_theorem1
from cssconcat.conjugate import ConjugateCodePair, pair_new
from cssconcat.errors import CodeError, CSSViolationError
from cssconcat.galois import coords, make_tower, phi_map, random_basis, trace
from cssconcat.matrix import null_space, rank, row_space_equal
from cssconcat.presets import even, full_space, hamming7

CONFIGS = ["css49", "kasami_lin", "quantum_rs", "mixed_q3"]


@pytest.fixture(params=CONFIGS)
def cp(request):
    return request.getfixturevalue(request.param)


def _single(pair, t):
    D1, D2 = outer_pair(t, np.array([1]), np.array([1]), 1, 1)
    return concatenate([pair], D1, D2, t)


def test_pi_on_basis_vectors(hamming_even, gf8):
    c = _single(hamming_even, gf8)
    assert not pi1(c, [0]).any() and not pi2(c, [0]).any()
    for j in range(3):
        assert np.array_equal(pi1(c, [c.basis[j]]), hamming_even.g[j])
        assert np.array_equal(pi2(c, [c.basis_dual[j]]), hamming_even.g_dual[j])
    b = c.tower.add(c.basis[0], c.basis[1])
    assert np.array_equal(pi1(c, [b]), (hamming_even.g[0] + hamming_even.g[1]) % 2)
    with pytest.raises(CodeError):
        pi1(c, [1, 2])


def test_trace_form_preserved(cp):
    t = cp.tower
    rng = np.random.default_rng(5)
    X = rng.integers(0, t.size, (1000, cp.N))
    Y = rng.integers(0, t.size, (1000, cp.N))
    lhs = trace(t, t.dot(X, Y))
    rhs = np.einsum("ij,ij->i", pi1(cp, X), pi2(cp, Y)) % cp.q
    assert np.array_equal(lhs, rhs)


def test_pi_is_injective(cp):
    # the images of a basis of GF(q^k)^N over GF(q) are independent
    t = cp.tower
    E = np.zeros((cp.k * cp.N, cp.N), dtype=np.int64)
    for i in range(cp.N):
        for j in range(cp.k):
            E[i * cp.k + j, i] = t.basis_a[j]
    assert rank(pi1(cp, E), cp.q) == cp.k * cp.N
    assert rank(pi2(cp, E), cp.q) == cp.k * cp.N


def test_verification_and_invariants(cp):
    ok, wit, msg = verify_theorem1(cp)
    assert ok, (msg, wit)
    assert check_invariants(cp) == []


def test_css49_parity_check(css49):
    H = css49.H_L1
    assert H.shape == (27, 49)
    assert rank(H, 2) == 27
    assert css49.H_L2.shape == (13, 49) and rank(css49.H_L2, 2) == 13
    assert (css49.n_o, css49.k_o, css49.K) == (49, 9, 3)
    assert rank(generator_L1(css49), 2) + rank(generator_L2(css49), 2) == 49 + 9
    assert not ((css49.H_L1 @ css49.H_L2.T) % 2).any()


@pytest.mark.parametrize("side", [1, 2])
def test_parity_check_annihilates_encodings(cp, side):
    rng = np.random.default_rng(side)
    t = cp.tower
    sd = cp.side(side)
    nR = sd.other.N - sd.other.K
    for _ in range(200):
        msg = rng.integers(0, t.size, cp.K)
        x = encode(cp, msg, side, rng.integers(0, t.size, nR), [rng.integers(0, cp.q, G.shape[0]) for G in sd.rand])
        assert not ((sd.H @ x) % cp.q).any()


def test_parity_check_generates_dual(cp):
    for side, G in ((1, generator_L1(cp)), (2, generator_L2(cp))):
        H = build_parity_check(cp, side)
        assert row_space_equal(H, null_space(G, cp.q), cp.q)


def test_trivial_inners_give_expanded_outer(kasami_lin):
    cp = kasami_lin
    t = cp.tower
    H = cp.H_L1
    assert H.shape == (3 * 2, 21)  # empty top block, k (N - K1) rows
    Hd = cp.D1.parity_check
    want = np.block([[phi_map(t, cp.basis, h) for h in row] for row in Hd])
    assert np.array_equal(H, want)
    # the null space of the expanded matrix is the coordinate image of D1
    rng = np.random.default_rng(0)
    for _ in range(50):
        d = cp.D1.encode(rng.integers(0, 8, cp.D1.K))
        y = coords(t, cp.basis, d).reshape(-1)
        assert not ((H @ y) % 2).any()


def test_quantum_rs_outer_codes_coincide(quantum_rs):
    assert np.array_equal(quantum_rs.D1.v, quantum_rs.D2.v)
    assert np.array_equal(quantum_rs.D1.w, quantum_rs.D1.v)


def test_corrupted_pairing_detected(hamming_even, gf8):
    bad = hamming_even.g_dual.copy()
    bad[0, 2] ^= 1
    broken = ConjugateCodePair(hamming_even.C1, hamming_even.C2, hamming_even.g, bad)
    D1, D2 = outer_pair(gf8, gf8.exp[:7], np.ones(7, dtype=np.int64), 5, 5)
    cp = concatenate([broken] * 7, D1, D2)
    ok, wit, msg = verify_theorem1(cp)
    assert not ok
    assert wit is not None
    assert check_invariants(cp)


def test_random_dual_bases(hamming_even, gf8):
    rng = np.random.default_rng(11)
    D1, D2 = outer_pair(gf8, gf8.exp[:7], np.ones(7, dtype=np.int64), 5, 5)
    for _ in range(5):
        b = random_basis(gf8, rng)
        cp = concatenate([hamming_even] * 7, D1, D2, basis=b)
        assert verify_theorem1(cp)[0]
        X = rng.integers(0, 8, (200, 7))
        Y = rng.integers(0, 8, (200, 7))
        lhs = trace(gf8, gf8.dot(X, Y))
        assert np.array_equal(lhs, np.einsum("ij,ij->i", pi1(cp, X), pi2(cp, Y)) % 2)


def test_concatenate_errors(hamming_even, gf8):
    D1, D2 = outer_pair(gf8, gf8.exp[:7], np.ones(7, dtype=np.int64), 5, 5)
    with pytest.raises(CodeError):
        concatenate([hamming_even] * 6, D1, D2)
    other_k = pair_new(hamming7(), hamming7())
    with pytest.raises(CodeError):
        concatenate([hamming_even] * 6 + [other_k], D1, D2)
    t16 = make_tower(2, 4)
    with pytest.raises(CodeError):
        concatenate([hamming_even] * 7, D1, D2, t16)
    with pytest.raises(CodeError):
        outer_pair(gf8, gf8.exp[:7], np.ones(7, dtype=np.int64), 3, 3)
    a = gf8.exp[:7]
    E1 = grs_new(gf8, 7, 3, a, np.ones(7, dtype=np.int64))
    E2 = grs_new(gf8, 7, 3, a, E1.w)
    with pytest.raises(CSSViolationError) as exc:
        concatenate([hamming_even] * 7, E1, E2)
    assert not E1.contains(exc.value.witness)
    with pytest.raises(CodeError):
        concatenate([pair_new(full_space(3, 3), even(3, 3))] * 7, D1, D2)


def test_as_conjugate_pair(css49):
    p = as_conjugate_pair(css49)
    assert (p.n, p.k) == (49, 9)


def test_outer_message_coordinates(cp):
    rng = np.random.default_rng(3)
    t = cp.tower
    nR = cp.D2.N - cp.D2.K
    for _ in range(100):
        msg = rng.integers(0, t.size, cp.K)
        d = outer_encode(cp, msg, 1, rng.integers(0, t.size, nR))
        assert cp.D1.contains(d)
        assert np.array_equal(message_of(cp, d, 1), msg)
        c = canonical_coset(cp, d, 1)
        assert np.array_equal(c, canonical_coset(cp, outer_encode(cp, msg, 1), 1))
