"""Channel simulation and analytic failure bounds for concatenated pairs."""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field
from fractions import Fraction

import numpy as np

from . import _kernels
from .concat import ConcatenatedPair, encode
from .conjugate import ConjugateCodePair, SyndromeTable, build_syndrome_table
from .decoder import build_tables, compile_plan
from .errors import CodeError
from .galois import is_prime

EXACT_LIMIT = 1 << 22
Z95 = 1.959963984540054
_SIDE_SALT = 0xD1B54A32D192ED03


@dataclass(frozen=True)
class ChannelModel:
    """q-ary symmetric channel: each symbol is hit with probability p and
    replaced by one of the q - 1 wrong values, uniformly."""

    q: int
    p: float

    def __post_init__(self):
        if not is_prime(self.q):
            raise CodeError(f"alphabet size {self.q} is not prime")
        if not 0.0 <= float(self.p) <= 1.0:
            raise CodeError(f"error probability {self.p} outside [0, 1]")

    def pattern_prob(self, n: int, w: int) -> float:
        """Probability of one specific error pattern of weight w on n symbols."""
        p = float(self.p)
        return (p / (self.q - 1)) ** w * (1.0 - p) ** (n - w)

    def sample(self, seed: int, trial: int, n: int) -> np.ndarray:
        """Error vector for one trial: n hit draws, then n value draws (q > 2)."""
        U = _kernels.uniforms(seed, [trial], 2 * n)[0]
        return _errors_from_uniforms(U[:n], U[n:], self.q, float(self.p))


def _errors_from_uniforms(u_hit, u_val, q, p):
    hit = u_hit < p
    if q == 2:
        return hit.astype(np.int64)
    return np.where(hit, 1 + (u_val * (q - 1)).astype(np.int64), 0)


# -- inner failure probability ---------------------------------------------------


def _side_codes(pair: ConjugateCodePair, side: int):
    """(code decoded by the table, code whose dual absorbs harmless residuals)."""
    if side == 1:
        return pair.C1, pair.C2
    if side == 2:
        return pair.C2, pair.C1
    raise CodeError("side must be 1 or 2")


def failure_profile(pair: ConjugateCodePair, table: SyndromeTable | None = None, side: int = 1) -> np.ndarray:
    """hist[w] = number of weight-w errors the inner decoder gets wrong.

    Wrong means e - leader(e) leaves the dual of the partner code.
    """
    C, other = _side_codes(pair, side)
    if pair.q ** pair.n > EXACT_LIMIT:
        raise CodeError(f"{pair.q}^{pair.n} error patterns exceed the enumeration limit")
    table = table or build_syndrome_table(C)
    r = table.H.shape[0]
    qpow = pair.q ** np.arange(max(r, 1), dtype=np.int64)
    H = table.H if r else np.zeros((0, pair.n), np.int64)
    return _kernels.failure_hist(
        pair.n, pair.q, np.ascontiguousarray(H), qpow, np.ascontiguousarray(table.leaders),
        np.ascontiguousarray(other.G),
    )


@dataclass
class InnerFailure:
    P: float
    exact: bool
    failures: int = 0
    trials: int = 0
    interval: tuple = (0.0, 0.0)


def inner_failure_prob(
    pair: ConjugateCodePair,
    ch: ChannelModel,
    table: SyndromeTable | None = None,
    side: int = 1,
    trials: int = 200_000,
    seed: int = 0,
) -> InnerFailure:
    """Probability that an inner block is decoded to the wrong symbol.

    Exact (by enumeration) when q^n <= 2^22, otherwise estimated.
    """
    if ch.q != pair.q:
        raise CodeError("channel alphabet does not match the code")
    if pair.q ** pair.n <= EXACT_LIMIT:
        hist = failure_profile(pair, table, side)
        terms = [int(c) * ch.pattern_prob(pair.n, w) for w, c in enumerate(hist) if c]
        P = min(1.0, math.fsum(terms))
        return InnerFailure(P, True, interval=(P, P))
    f, n = simulate_inner(pair, ch, trials, seed, table, side)
    return InnerFailure(f / n, False, f, n, wilson_interval(f, n))


def simulate_inner(pair, ch, trials, seed, table=None, side=1, chunk=1 << 15):
    """Monte Carlo count of inner failures: (failures, trials)."""
    C, other = _side_codes(pair, side)
    table = table or build_syndrome_table(C)
    n, q = pair.n, pair.q
    fails = 0
    for start in range(0, trials, chunk):
        T = min(chunk, trials - start)
        U = _kernels.uniforms(seed, np.arange(start, start + T), 2 * n)
        e = _errors_from_uniforms(U[:, :n], U[:, n:], q, float(ch.p))
        idx = ((e @ table.H.T) % q) @ table.qpow if table.H.shape[0] else np.zeros(T, np.int64)
        res = (e - table.leaders[idx]) % q
        if other.dim:
            fails += int(np.any((res @ other.G.T) % q, axis=1).sum())
    return fails, trials


# -- analytic bounds ------------------------------------------------------------


def threshold(N: int, K1: int) -> int:
    """Smallest number of failed blocks the outer decoder may not survive."""
    return (N - K1) // 2 + 1


def outer_tail_bound(N: int, K1: int, P, exact: bool = False):
    """sum_{i >= theta} C(N, i) P^i (1 - P)^(N - i), computed in exact arithmetic.

    ``P`` may be a float or a Fraction; with ``exact`` the Fraction is returned.
    """
    Pf = P if isinstance(P, Fraction) else Fraction(float(P))
    if not 0 <= Pf <= 1:
        raise CodeError(f"P={float(Pf)} outside [0, 1]")
    th = threshold(N, K1)
    tail = sum(
        (math.comb(N, i) * Pf**i * (1 - Pf) ** (N - i) for i in range(th, N + 1)),
        Fraction(0),
    )
    return tail if exact else float(tail)


def binary_entropy(x: float) -> float:
    if x <= 0.0 or x >= 1.0:
        return 0.0
    return -x * math.log2(x) - (1 - x) * math.log2(1 - x)


def entropy_form_bound(N: int, K1: int, P: float, n: int, q: int = 2) -> float:
    """Per-symbol log_q bound

        (1/(nN)) [theta log_q P + (N - theta) log_q(1 - P) + N h(theta/N) log_q 2]

    with h the binary entropy in bits.  It upper-bounds log_q(tail)/(nN)
    whenever theta/N >= P.  P = 0 gives -inf; P = 1 gives -inf unless theta = N.
    """
    P = float(P)
    if not 0.0 <= P <= 1.0:
        raise CodeError(f"P={P} outside [0, 1]")
    th = threshold(N, K1)
    th = min(th, N)

    def xlog(c, x):
        if c == 0:
            return 0.0
        return -math.inf if x == 0.0 else c * math.log(x, q)

    val = xlog(th, P) + xlog(N - th, 1.0 - P) + N * binary_entropy(th / N) * math.log(2, q)
    return val / (n * N)


def concat_exponent(E, R_o: float, points: int = 4001):
    """(1/4) max over r R = R_o of (1 - R) E((1 + r)/2).

    ``E`` is a callable on [0, 1] or an array of samples on a uniform grid
    over [0, 1] (linearly interpolated).  Returns ``(value, r*, R*)``.
    """
    R_o = float(R_o)
    if R_o > 1.0 or R_o < 0.0:
        raise CodeError(f"no rate pair with r R = {R_o}")
    if callable(E):
        f = np.vectorize(E, otypes=[float])
    else:
        samples = np.asarray(E, dtype=float)
        if samples.size < 2:
            raise CodeError("tabulated exponent needs at least two samples")
        if np.any(samples < 0):
            raise CodeError("exponent samples must be nonnegative")
        grid = np.linspace(0.0, 1.0, samples.size)
        f = lambda x: np.interp(x, grid, samples)  # noqa: E731
    r = np.linspace(max(R_o, 0.0), 1.0, max(points, 1001))
    R = np.where(r > 0, R_o / np.where(r > 0, r, 1.0), 0.0)
    vals = 0.25 * (1.0 - R) * f((1.0 + r) / 2.0)
    i = int(np.argmax(vals))
    return float(vals[i]), float(r[i]), float(R[i])


def rate_convert(r_q):
    """Rate of a quotient code viewed as a classical code: (r_q + 1)/2."""
    if not -1 <= r_q <= 1:
        raise CodeError(f"rate {r_q} outside [-1, 1]")
    return (r_q + 1) / 2


def rate_convert_inverse(r_cl):
    if not 0 <= r_cl <= 1:
        raise CodeError(f"rate {r_cl} outside [0, 1]")
    return 2 * r_cl - 1


def rate_convert_outer(R_q):
    """Same conversion for the outer pair with K1 = K2: K1/N = (R_q + 1)/2."""
    return rate_convert(R_q)


def quantum_rate_from_classical(p: float) -> float:
    """Classical rate 1 - h(p) maps to 1 - 2h(p)."""
    return rate_convert_inverse(1.0 - binary_entropy(p))


def fidelity_lower_bound(P1, P2):
    if not (0 <= P1 <= 1 and 0 <= P2 <= 1):
        raise CodeError("probabilities must lie in [0, 1]")
    return 1 - P1 - P2


def wilson_interval(failures: int, trials: int, z: float = Z95):
    """Wilson score interval for a binomial proportion."""
    if trials <= 0:
        raise CodeError("need at least one trial")
    if not 0 <= failures <= trials:
        raise CodeError("failures must lie in [0, trials]")
    ph = failures / trials
    den = 1 + z * z / trials
    centre = (ph + z * z / (2 * trials)) / den
    half = z * math.sqrt(ph * (1 - ph) / trials + z * z / (4 * trials * trials)) / den
    lo = 0.0 if failures == 0 else max(0.0, centre - half)
    hi = 1.0 if failures == trials else min(1.0, centre + half)
    return lo, hi


# -- Monte Carlo of the concatenated decoder ------------------------------------


@dataclass
class SideReport:
    side: int
    trials: int
    failures: int
    rate: float
    interval: tuple
    inner_failures: int
    inner_trials: int
    inner_rate: float
    inner_interval: tuple
    bdd_failures: int
    failed_block_hist: list
    P: float                 # analytic inner failure probability (worst block)
    P_exact: bool
    threshold: int
    tail_bound: float
    entropy_bound: float | None
    slack: float             # 3 sqrt(bound / trials)

    @property
    def within_bound(self) -> bool:
        return self.rate <= self.tail_bound + self.slack

    @property
    def inner_consistent(self) -> bool:
        lo, hi = self.inner_interval
        return lo <= self.P <= hi


@dataclass
class EvalReport:
    seed: int
    p: float
    q: int
    trials: int
    sides: list = field(default_factory=list)
    fidelity: float | None = None

    @property
    def primary(self) -> SideReport:
        return self.sides[0]

    @property
    def failures(self) -> int:
        return self.primary.failures

    @property
    def rate(self) -> float:
        return self.primary.rate

    def to_dict(self) -> dict:
        d = asdict(self)
        for s in d["sides"]:
            s["interval"] = list(s["interval"])
            s["inner_interval"] = list(s["inner_interval"])
        return d


def side_seed(seed: int, side: int) -> int:
    """Independent stream per side; side 1 uses the seed unchanged."""
    return (int(seed) ^ ((side - 1) * _SIDE_SALT)) & 0xFFFFFFFFFFFFFFFF


def analytic_inner(cp: ConcatenatedPair, ch: ChannelModel, side: int = 1, tables=None):
    """Worst-case inner failure probability over the blocks of one side."""
    tables = tables or build_tables(cp, side)
    seen, worst, exact = {}, 0.0, True
    for pair, T in zip(cp.inners, tables):
        key = (id(T), id(pair))
        if key not in seen:
            seen[key] = inner_failure_prob(pair, ch, T, side)
        r = seen[key]
        worst = max(worst, r.P)
        exact &= r.exact
    return worst, exact


def run_side(cp: ConcatenatedPair, ch: ChannelModel, trials: int, seed: int, side: int = 1, tables=None,
             start: int = 0):
    """Raw kernel counts: (counts[3], hist[N + 1])."""
    plan = compile_plan(cp, side, tables)
    return _kernels.monte_carlo(np.uint64(seed), start, trials, float(ch.p), *plan.args)


def monte_carlo(
    cp: ConcatenatedPair,
    ch: ChannelModel,
    trials: int,
    seed: int = 0,
    sides=(1,),
) -> EvalReport:
    """Encode random messages, pass them through the channel, decode, and
    compare message cosets; one independent run per requested side.

    Trial t of a side draws all its randomness from a stream keyed by
    (seed, t), so results do not depend on chunking or scheduling.
    """
    if trials < 1:
        raise CodeError("need at least one trial")
    if ch.q != cp.q:
        raise CodeError("channel alphabet does not match the code")
    seed = int(seed) & 0xFFFFFFFFFFFFFFFF
    rep = EvalReport(seed=seed, p=float(ch.p), q=cp.q, trials=trials)
    for side in sides:
        tables = build_tables(cp, side)
        counts, hist = run_side(cp, ch, trials, side_seed(seed, side), side, tables)
        counts = [int(c) for c in counts]
        P, exact = analytic_inner(cp, ch, side, tables)
        K_s = cp.side(side).outer.K
        tail = outer_tail_bound(cp.N, K_s, P)
        n_avg = cp.n_o / cp.N
        ent = entropy_form_bound(cp.N, K_s, P, n_avg, cp.q) if 0 < P < 1 else None
        blocks = trials * cp.N
        rep.sides.append(
            SideReport(
                side=side,
                trials=trials,
                failures=counts[0],
                rate=counts[0] / trials,
                interval=wilson_interval(counts[0], trials),
                inner_failures=counts[2],
                inner_trials=blocks,
                inner_rate=counts[2] / blocks,
                inner_interval=wilson_interval(counts[2], blocks),
                bdd_failures=counts[1],
                failed_block_hist=[int(h) for h in hist],
                P=P,
                P_exact=exact,
                threshold=threshold(cp.N, K_s),
                tail_bound=tail,
                entropy_bound=ent,
                slack=3.0 * math.sqrt(tail / trials),
            )
        )
    if len(rep.sides) == 2:
        rep.fidelity = fidelity_lower_bound(rep.sides[0].rate, rep.sides[1].rate)
    return rep


def replay_trial(cp: ConcatenatedPair, ch: ChannelModel, seed: int, trial: int, side: int = 1):
    """Rebuild one Monte Carlo trial with the high-level API.

    Returns ``(msg, x, e)``: the message drawn, the transmitted word and the
    channel error, using exactly the kernel's draw layout.
    """
    plan = compile_plan(cp, side)
    sd = cp.side(side)
    U = _kernels.uniforms(seed, [trial], plan.draws)[0]
    Q = cp.q ** cp.k
    K, nR = cp.K, plan.args[22].shape[0]
    msg = (U[:K] * Q).astype(np.int64)
    orr = (U[K:K + nR] * Q).astype(np.int64)
    pos = K + nR
    irr = []
    for G in sd.rand:
        irr.append((U[pos:pos + G.shape[0]] * cp.q).astype(np.int64))
        pos += G.shape[0]
    n_o = cp.n_o
    e = _errors_from_uniforms(U[pos:pos + n_o], U[pos + n_o:pos + 2 * n_o], cp.q, float(ch.p))
    x = encode(cp, msg, side, orr, irr)
    return msg, x, e
