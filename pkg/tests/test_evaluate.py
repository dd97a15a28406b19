import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from cssconcat.conjugate import pair_new
from cssconcat.decoder import build_tables, two_stage_decode
from cssconcat.errors import CodeError
from cssconcat.evaluate import (
    ChannelModel,
    binary_entropy,
    concat_exponent,
    entropy_form_bound,
    failure_profile,
    fidelity_lower_bound,
    inner_failure_prob,
    monte_carlo,
    outer_tail_bound,
    quantum_rate_from_classical,
    rate_convert,
    rate_convert_inverse,
    replay_trial,
    run_side,
    side_seed,
    simulate_inner,
    threshold,
    wilson_interval,
)
from cssconcat.presets import even, full_space, hamming7

from . import oracles


def closed_form_hamming_even(p):
    return 1 - ((1 - p) ** 7 + 7 * p * (1 - p) ** 6 + 7 * p**6 * (1 - p) + p**7)


def test_hamming_even_inner_failure(hamming_even):
    assert failure_profile(hamming_even).tolist() == [0, 0, 21, 35, 35, 21, 0, 0]
    for p in (0.0, 0.001, 0.01, 0.1, 0.3):
        r = inner_failure_prob(hamming_even, ChannelModel(2, p))
        assert r.exact
        assert r.P == pytest.approx(closed_form_hamming_even(p), rel=1e-12, abs=1e-15)
    P = inner_failure_prob(hamming_even, ChannelModel(2, 0.01)).P
    assert P == pytest.approx(2.031041628e-3, rel=1e-9)


def test_trivial_pair_fails_on_any_error():
    for n in (1, 3, 5):
        p = pair_new(full_space(n), full_space(n))
        for pr in (0.0, 0.01, 0.2):
            assert inner_failure_prob(p, ChannelModel(2, pr)).P == pytest.approx(1 - (1 - pr) ** n, abs=1e-15)


def test_inner_failure_side_two_uses_swapped_codes(hamming_even):
    ch = ChannelModel(2, 0.01)
    a = inner_failure_prob(hamming_even, ch, side=2).P
    b = inner_failure_prob(hamming_even.swapped(), ch, side=1).P
    assert a == b


def test_inner_failure_monotone_in_p(hamming_even, mixed_q3):
    ps = np.linspace(0.0, 0.5, 26)
    vals = [inner_failure_prob(hamming_even, ChannelModel(2, p)).P for p in ps]
    assert all(x <= y + 1e-15 for x, y in zip(vals, vals[1:]))
    pa = mixed_q3.inners[0]
    ps = np.linspace(0.0, 2 / 3, 21)
    vals = [inner_failure_prob(pa, ChannelModel(3, p)).P for p in ps]
    assert all(x <= y + 1e-15 for x, y in zip(vals, vals[1:]))


def test_inner_monte_carlo_agrees_with_enumeration(hamming_even):
    ch = ChannelModel(2, 0.01)
    P = inner_failure_prob(hamming_even, ch).P
    f, n = simulate_inner(hamming_even, ch, 200_000, seed=11)
    lo, hi = wilson_interval(f, n)
    assert lo <= P <= hi


def test_large_inner_code_falls_back_to_sampling():
    p = pair_new(even(24), even(24))
    r = inner_failure_prob(p, ChannelModel(2, 0.02), trials=20_000, seed=1)
    assert not r.exact and r.trials == 20_000
    assert r.interval[0] <= r.P <= r.interval[1]


def test_channel_rejections():
    with pytest.raises(CodeError):
        ChannelModel(4, 0.1)
    with pytest.raises(CodeError):
        ChannelModel(2, 1.5)
    with pytest.raises(CodeError):
        inner_failure_prob(pair_new(hamming7(), even(7)), ChannelModel(3, 0.1))


def test_channel_sample_is_q_symmetric():
    ch = ChannelModel(3, 0.3)
    e = np.concatenate([ch.sample(5, t, 50) for t in range(400)])
    hits = e[e != 0]
    assert abs(len(hits) / e.size - 0.3) < 0.02
    assert abs((hits == 1).mean() - 0.5) < 0.03
    assert np.array_equal(ch.sample(5, 3, 50), ch.sample(5, 3, 50))


# -- tail and entropy bounds ------------------------------------------------------


def test_tail_bound_example():
    th = threshold(7, 5)
    assert th == 2
    got = outer_tail_bound(7, 5, Fraction(2, 1000), exact=True)
    assert got == oracles.binomial_tail(7, 2, Fraction(2, 1000))
    assert float(got) == pytest.approx(8.3442e-5, rel=1e-4)
    assert outer_tail_bound(7, 5, 0.0) == 0.0
    assert outer_tail_bound(7, 5, 1.0) == 1.0
    with pytest.raises(CodeError):
        outer_tail_bound(7, 5, 1.2)


@given(st.integers(1, 30), st.data())
def test_tail_matches_oracle_and_is_monotone(N, data):
    K1 = data.draw(st.integers(0, N))
    P1 = Fraction(data.draw(st.integers(0, 1000)), 1000)
    P2 = Fraction(data.draw(st.integers(0, 1000)), 1000)
    lo, hi = sorted((P1, P2))
    t_lo = outer_tail_bound(N, K1, lo, exact=True)
    assert t_lo == oracles.binomial_tail(N, threshold(N, K1), lo)
    assert t_lo <= outer_tail_bound(N, K1, hi, exact=True)


def test_tail_does_not_underflow():
    # theta = 17: the tail is about C(255, 17) 1e-204, far below double-step cancellation
    exact = outer_tail_bound(255, 223, Fraction(1, 10**12), exact=True)
    assert exact == oracles.binomial_tail(255, 17, Fraction(1, 10**12))
    t = outer_tail_bound(255, 223, Fraction(1, 10**12))
    assert 0.0 < t < 1e-170
    assert t == pytest.approx(math.comb(255, 17) * 1e-204, rel=1e-9)


def test_entropy_example():
    assert binary_entropy(2 / 7) == pytest.approx(0.8631, abs=1e-4)
    val = entropy_form_bound(7, 5, 0.002, 7, 2)
    want = (2 * math.log2(0.002) + 5 * math.log2(0.998) + 7 * binary_entropy(2 / 7)) / 49
    assert val == pytest.approx(want, rel=1e-12)
    assert val == pytest.approx(-0.2430, abs=5e-4)


def test_entropy_theta_equals_n():
    for N, K1 in ((1, 0), (2, 0)):
        assert threshold(N, K1) == N
        assert entropy_form_bound(N, K1, 0.1, 4) == pytest.approx(N * math.log2(0.1) / (4 * N))


def test_entropy_degenerate_cases():
    assert entropy_form_bound(7, 5, 0.0, 7) == -math.inf
    assert entropy_form_bound(7, 5, 1.0, 7) == -math.inf
    assert entropy_form_bound(1, 0, 1.0, 7) == 0.0


def test_entropy_is_a_relaxation_of_the_tail():
    for N in range(1, 25):
        for K1 in range(0, N + 1):
            th = threshold(N, K1)
            for P in (1e-6, 1e-4, 1e-3, 0.01, 0.05, 0.1, 0.2, 0.3, 0.45):
                if th / N < P:
                    continue
                for q, n in ((2, 7), (3, 4)):
                    tail = outer_tail_bound(N, K1, Fraction(P), exact=True)
                    lhs = entropy_form_bound(N, K1, P, n, q)
                    rhs = (math.log(tail.numerator) - math.log(tail.denominator)) / math.log(q) / (n * N)
                    assert lhs >= rhs - 1e-12


# -- exponent, rates, fidelity, intervals ----------------------------------------


def test_concat_exponent():
    assert concat_exponent(lambda x: 0.0, 0.3)[0] == 0.0
    assert concat_exponent(np.zeros(1001), 0.3)[0] == 0.0
    assert concat_exponent(lambda x: 1.0, 1.0)[0] == 0.0
    val, r, R = concat_exponent(lambda x: 2.0, 0.5)
    assert val == pytest.approx(2.0 / 8) and r == pytest.approx(1.0) and R == pytest.approx(0.5)
    val, r, R = concat_exponent(np.full(1001, 2.0), 0.5)
    assert val == pytest.approx(0.25)
    # E decreasing: optimum moves inside (R_o, 1)
    E = np.linspace(1.0, 0.0, 2001) ** 2
    val, r, R = concat_exponent(E, 0.25)
    assert 0.25 < r < 1 and r * R == pytest.approx(0.25)
    brute = max(0.25 * (1 - 0.25 / x) * np.interp((1 + x) / 2, np.linspace(0, 1, 2001), E)
                for x in np.linspace(0.25, 1, 20001))
    assert val == pytest.approx(brute, rel=1e-3)
    with pytest.raises(CodeError):
        concat_exponent(lambda x: 1.0, 1.5)
    with pytest.raises(CodeError):
        concat_exponent(np.array([1.0, -1.0]), 0.5)


def test_rate_conversions():
    assert rate_convert(1) == 1
    assert rate_convert(Fraction(9, 49)) == Fraction(29, 49)
    assert rate_convert(9 / 49) == pytest.approx(0.5918, abs=1e-4)
    assert rate_convert_inverse(Fraction(29, 49)) == Fraction(9, 49)
    for p in (0.01, 0.05, 0.11):
        assert quantum_rate_from_classical(p) == pytest.approx(1 - 2 * binary_entropy(p))
    with pytest.raises(CodeError):
        rate_convert(1.5)
    with pytest.raises(CodeError):
        rate_convert_inverse(-0.1)


def test_fidelity_and_wilson():
    assert fidelity_lower_bound(0, 0) == 1
    assert fidelity_lower_bound(0.5, 0.5) == 0
    assert fidelity_lower_bound(0.7, 0.6) == pytest.approx(-0.3)
    lo, hi = wilson_interval(0, 100)
    assert lo == 0.0 and 0.03 < hi < 0.04
    lo, hi = wilson_interval(50, 100)
    assert lo == pytest.approx(0.4038, abs=1e-3) and hi == pytest.approx(0.5962, abs=1e-3)
    with pytest.raises(CodeError):
        wilson_interval(5, 0)


# -- Monte Carlo --------------------------------------------------------------------


def test_monte_carlo_noiseless(css49, mixed_q3):
    for cp in (css49, mixed_q3):
        rep = monte_carlo(cp, ChannelModel(cp.q, 0.0), 2000, seed=3, sides=(1, 2))
        for s in rep.sides:
            assert s.failures == 0 and s.inner_failures == 0 and s.bdd_failures == 0
            assert s.failed_block_hist[0] == 2000
        assert rep.fidelity == 1.0


def test_monte_carlo_is_deterministic(css49):
    ch = ChannelModel(2, 0.05)
    a = monte_carlo(css49, ch, 20_000, seed=99, sides=(1, 2))
    b = monte_carlo(css49, ch, 20_000, seed=99, sides=(1, 2))
    assert a.to_dict() == b.to_dict()
    c = monte_carlo(css49, ch, 20_000, seed=100)
    assert c.failures != a.failures or c.primary.inner_failures != a.primary.inner_failures


def test_chunking_does_not_change_results(css49):
    ch = ChannelModel(2, 0.05)
    whole, hw = run_side(css49, ch, 6000, 17)
    parts = [run_side(css49, ch, 2000, 17, start=s) for s in (0, 2000, 4000)]
    assert np.array_equal(whole, sum(p[0] for p in parts))
    assert np.array_equal(hw, sum(p[1] for p in parts))


@pytest.mark.parametrize("cfg", ["css49", "mixed_q3", "quantum_rs"])
@pytest.mark.parametrize("side", [1, 2])
def test_replay_matches_kernel(request, cfg, side):
    cp = request.getfixturevalue(cfg)
    ch = ChannelModel(cp.q, 0.08)
    seed = side_seed(5, side)
    tables = build_tables(cp, side)
    trials = 400
    counts, hist = run_side(cp, ch, trials, seed, side, tables)
    fails = 0
    for t in range(trials):
        msg, x, e = replay_trial(cp, ch, seed, t, side)
        r = two_stage_decode(cp, (x + e) % cp.q, tables, side)
        fails += not (r.ok and np.array_equal(r.message, msg))
    assert fails == counts[0]
    assert hist.sum() == trials


def test_side_seeds_differ():
    assert side_seed(7, 1) == 7
    assert side_seed(7, 2) != 7


def test_monte_carlo_report_fields(css49):
    rep = monte_carlo(css49, ChannelModel(2, 0.01), 50_000, seed=7)
    s = rep.primary
    assert s.P == pytest.approx(2.031041628e-3, rel=1e-9) and s.P_exact
    assert s.threshold == 2
    assert s.tail_bound == pytest.approx(outer_tail_bound(7, 5, s.P))
    assert s.entropy_bound == pytest.approx(entropy_form_bound(7, 5, s.P, 7))
    assert s.within_bound
    assert s.failures <= s.trials and sum(s.failed_block_hist) == s.trials
    d = rep.to_dict()
    assert d["seed"] == 7 and d["sides"][0]["failures"] == s.failures
    with pytest.raises(CodeError):
        monte_carlo(css49, ChannelModel(2, 0.01), 0)
    with pytest.raises(CodeError):
        monte_carlo(css49, ChannelModel(3, 0.01), 10)
