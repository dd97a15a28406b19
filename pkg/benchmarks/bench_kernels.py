"""Time the numba kernels against the pure-numpy fallback.

The backend is fixed at import time by CSSCONCAT_DISABLE_NUMBA, so each
backend runs in its own subprocess.  Usage:

    python benchmarks/bench_kernels.py [--trials 200000]
"""
import argparse
import json
import os
import subprocess
import sys
import time


def _run_one(trials: int) -> dict:
    import numpy as np

    from cssconcat import USE_NUMBA, ChannelModel, load
    from cssconcat.evaluate import failure_profile, run_side
    from cssconcat.matrix import rref

    cp = load("css49_9")
    ch = ChannelModel(2, 0.01)
    rng = np.random.default_rng(0)
    M = rng.integers(0, 2, size=(200, 400))
    # warm-up also triggers compilation on the numba path
    run_side(cp, ch, 10, 1)
    rref(M[:5, :10], 2)
    failure_profile(cp.inners[0])

    out = {"backend": "numba" if USE_NUMBA else "numpy"}
    t0 = time.perf_counter()
    counts, _ = run_side(cp, ch, trials, 7)
    out["monte_carlo_s"] = time.perf_counter() - t0
    out["trials_per_s"] = trials / out["monte_carlo_s"]
    out["counts"] = [int(c) for c in counts]

    t0 = time.perf_counter()
    for _ in range(20):
        rref(M, 2)
    out["rref_200x400_ms"] = (time.perf_counter() - t0) / 20 * 1e3

    from cssconcat.conjugate import pair_new
    from cssconcat.presets import even

    big = pair_new(even(18, 2), even(18, 2))
    t0 = time.perf_counter()
    failure_profile(big)
    out["enumerate_2^18_s"] = time.perf_counter() - t0
    return out


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--trials", type=int, default=200_000)
    ap.add_argument("--child", action="store_true", help=argparse.SUPPRESS)
    args = ap.parse_args()
    if args.child:
        print(json.dumps(_run_one(args.trials)))
        return
    rows = []
    for flag in ("0", "1"):
        env = dict(os.environ, CSSCONCAT_DISABLE_NUMBA=flag)
        res = subprocess.run(
            [sys.executable, __file__, "--child", "--trials", str(args.trials)],
            env=env, capture_output=True, text=True, check=True,
        )
        rows.append(json.loads(res.stdout.strip().splitlines()[-1]))
    if rows[0]["counts"] != rows[1]["counts"]:
        print("WARNING: backends disagree on Monte Carlo counts")
    keys = ["monte_carlo_s", "trials_per_s", "rref_200x400_ms", "enumerate_2^18_s"]
    print(f"{'metric':<18}" + "".join(f"{r['backend']:>14}" for r in rows))
    for k in keys:
        print(f"{k:<18}" + "".join(f"{r[k]:>14.4g}" for r in rows))
    print(f"{'counts':<18}" + "".join(f"{str(r['counts']):>14}" for r in rows))


if __name__ == "__main__":
    main()
