"""Shared builders for decoder and acceptance tests."""
import numpy as np

from cssconcat.concat import canonical_coset, concatenate, encode, outer_pair
from cssconcat.conjugate import inner_success, pair_new
from cssconcat.decoder import extract_outer_word, syndrome_only_decode, two_stage_decode
from cssconcat.evaluate import threshold
from cssconcat.galois import make_tower
from cssconcat.presets import even


def random_codeword(cp, side, rng):
    t = cp.tower
    sd = cp.side(side)
    msg = rng.integers(0, t.size, cp.K)
    nR = sd.other.N - sd.other.K
    x = encode(cp, msg, side, rng.integers(0, t.size, nR), [rng.integers(0, cp.q, G.shape[0]) for G in sd.rand])
    return msg, x


def failed_blocks(cp, e, tables, side):
    pairs = cp.inners if side == 1 else [p.swapped() for p in cp.inners]
    out = []
    for i, (p, T) in enumerate(zip(pairs, tables)):
        blk = cp.block(e, i)
        if not inner_success(p, blk, T.leader(T.syndrome(blk))):
            out.append(i)
    return out


def block_error(cp, i, side, tables, fail, rng):
    """Random error on block i that the inner decoder does (fail=False) or does not handle."""
    p = cp.inners[i] if side == 1 else cp.inners[i].swapped()
    n = p.n
    for _ in range(10_000):
        w = int(rng.integers(0, n + 1))
        e = np.zeros(n, dtype=np.int64)
        pos = rng.choice(n, size=w, replace=False)
        e[pos] = rng.integers(1, cp.q, size=w)
        T = tables[i]
        if inner_success(p, e, T.leader(T.syndrome(e))) != fail:
            return e
    raise AssertionError("could not draw the requested block error")


def toy3():
    """N = 3 over GF(4): inner (even4, even4) pairs with k = 2; outer corrects one symbol."""
    t = make_tower(2, 2, [1, 1, 1])
    p = pair_new(even(4), even(4))
    D1, D2 = outer_pair(t, np.array([1, 2, 3]), np.array([1, 1, 1]), 1, 3)
    return concatenate([p] * 3, D1, D2)


def exhaustive_toy_check(cp, side, tables, seed=0):
    """Every error pattern on the toy: below threshold both decoders recover the
    coset, and the two decoders always reach the same conclusion.

    Returns (patterns, below_threshold, disagreements, misses)."""
    th = threshold(cp.N, cp.side(side).outer.K)
    rng = np.random.default_rng(seed)
    H = cp.side(side).H
    below = disagree = miss = 0
    for v in range(cp.q ** cp.n_o):
        e = np.array([(v // cp.q**i) % cp.q for i in range(cp.n_o)], dtype=np.int64)
        f = len(failed_blocks(cp, e, tables, side))
        msg, x = random_codeword(cp, side, rng)
        r = two_stage_decode(cp, (x + e) % cp.q, tables, side)
        so = syndrome_only_decode(cp, (H @ e) % cp.q, tables, side)
        shift = canonical_coset(cp, extract_outer_word(cp, e, side), side)
        a = r.ok and np.array_equal(r.message, msg)
        b = so.ok and np.array_equal(so.delta, shift)
        disagree += a != b
        if f < th:
            below += 1
            miss += not (a and b)
    return cp.q ** cp.n_o, below, disagree, miss
