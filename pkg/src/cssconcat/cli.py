"""Command-line front end.

    cssconcat build css49_9 -o pair.json
    cssconcat --seed 7 simulate css49_9 --p 0.01 --trials 100000
    cssconcat decode css49_9 --syndrome 000...0

Exit codes: 0 ok, 1 decoding failure flagged, 2 invalid input.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys

import numpy as np

from . import _kernels
from . import concat as cc
from . import decoder as dec
from . import evaluate as ev
from . import serialize as ser
from .conjugate import ConjugateCodePair, build_syndrome_table, coset_encode, coset_message, inner_decode
from .errors import CodeError

EXIT_OK, EXIT_DECODE_FAIL, EXIT_INVALID = 0, 1, 2


class _Out:
    """Collects rows and prints them as text, JSON or CSV."""

    def __init__(self, args):
        self.json = args.json
        self.csv = args.csv

    def emit(self, doc: dict, rows=None, text=None):
        if self.json:
            print(json.dumps(ser.jsonable(doc), indent=2, sort_keys=True))
        elif self.csv and rows:
            buf = io.StringIO()
            w = csv.writer(buf, lineterminator="\n")
            w.writerows(rows)
            sys.stdout.write(buf.getvalue())
        else:
            print(text if text is not None else _table(rows))


def _table(rows):
    if not rows:
        return ""
    widths = [max(len(str(r[i])) for r in rows) for i in range(len(rows[0]))]
    return "\n".join("  ".join(str(c).ljust(w) for c, w in zip(r, widths)).rstrip() for r in rows)


def _fmt(x):
    if x is None:
        return "-"
    if isinstance(x, float):
        return f"{x:.6g}"
    return str(x)


def _vec(v, q):
    s = ser.vec_to_str(v, q)
    return s if isinstance(s, str) else ",".join(map(str, s))


def _digits(v):
    v = np.asarray(v).reshape(-1)
    return "".join(map(str, v)) if v.size and v.max() < 10 else _ext(v)


def _ext(v):
    return ",".join(str(int(x)) for x in np.asarray(v).reshape(-1))


# -- subcommands -----------------------------------------------------------------


def _verify(obj):
    """(ok, lines) for a pair or concatenated pair."""
    if isinstance(obj, ConjugateCodePair):
        ok = bool(np.array_equal((obj.g @ obj.g_dual.T) % obj.q, np.eye(obj.k, dtype=np.int64)))
        return ok, [f"[[{obj.n},{obj.k}]] over GF({obj.q}), delta-orthogonality: {'OK' if ok else 'FAIL'}"], {}
    ok1, wit, msg = cc.verify_theorem1(obj)
    problems = cc.check_invariants(obj)
    delta = not any("delta" in p for p in problems)
    line = (
        f"[[{obj.n_o},{obj.k_o}]] over GF({obj.q}), theorem1: {'OK' if ok1 else 'FAIL'}, "
        f"delta-orthogonality: {'OK' if delta else 'FAIL'}"
    )
    lines = [line]
    if not ok1:
        lines.append(f"  {msg}" + (f"; witness {_vec(wit, obj.q)}" if wit is not None else ""))
    lines += [f"  {p}" for p in problems]
    info = {"theorem1": ok1, "invariants": problems, "witness": wit, "message": msg}
    return ok1 and not problems, lines, info


def cmd_build(args, out):
    obj = ser.load(args.spec)
    ok, lines, info = _verify(obj)
    doc = ser.to_json(obj)
    if args.output:
        with open(args.output, "w") as fh:
            json.dump(doc, fh, indent=1)
    out.emit({"ok": ok, "summary": lines[0], "verification": info, "pair": doc}, text="\n".join(lines))
    return EXIT_OK if ok else EXIT_INVALID


def cmd_verify(args, out):
    obj = ser.load(args.pair)
    ok, lines, info = _verify(obj)
    out.emit({"ok": ok, "summary": lines[0], "verification": info}, text="\n".join(lines))
    return EXIT_OK if ok else EXIT_INVALID


def _parse_message(obj, s):
    if isinstance(obj, ConjugateCodePair):
        return ser.parse_vec(s, obj.q, "message")
    t = obj.tower
    if "," in s or " " in s:
        m = ser.parse_vec(s, t.size, "message")
    else:
        d = ser.parse_vec(s, t.q, "message")
        if len(d) != obj.k_o:
            raise ser.SpecError("message", f"need {obj.K} comma-separated symbols or {obj.k_o} digits")
        m = t.from_digits(d.reshape(obj.K, obj.k))
    if len(m) != obj.K:
        raise ser.SpecError("message", f"need {obj.K} symbols over {t}, got {len(m)}")
    return m


def cmd_encode(args, out):
    obj = ser.load(args.pair)
    msg = _parse_message(obj, args.message)
    if isinstance(obj, ConjugateCodePair):
        x = coset_encode(obj, msg, seed=args.seed)
        out.emit({"word": _vec(x, obj.q)}, text=_vec(x, obj.q))
        return EXIT_OK
    sd = obj.side(args.side)
    orr = irr = None
    if args.seed is not None:
        oq = cc.outer_quotient(obj, args.side)
        nR = oq.rand_rows.shape[0]
        sizes = [G.shape[0] for G in sd.rand]
        U = _kernels.uniforms(args.seed, [0], nR + sum(sizes))[0]
        orr = (U[:nR] * obj.tower.size).astype(np.int64)
        pos, irr = nR, []
        for s in sizes:
            irr.append((U[pos:pos + s] * obj.q).astype(np.int64))
            pos += s
    x = cc.encode(obj, msg, args.side, orr, irr)
    out.emit({"word": _vec(x, obj.q), "message": msg}, text=_vec(x, obj.q))
    return EXIT_OK


def cmd_decode(args, out):
    obj = ser.load(args.pair)
    if (args.word is None) == (args.syndrome is None):
        raise ser.SpecError("decode", "give exactly one of --word or --syndrome")
    q = obj.q
    if isinstance(obj, ConjugateCodePair):
        C = obj.C1 if args.side == 1 else obj.C2
        tbl = build_syndrome_table(C)
        if args.word is not None:
            y = ser.parse_vec(args.word, q, "word")
            if len(y) != obj.n:
                raise ser.SpecError("word", f"need length {obj.n}")
            e = inner_decode(obj, tbl, tbl.syndrome(y))
            m = coset_message(obj, (y - e) % q) if args.side == 1 else ((y - e) % q @ obj.g.T) % q
            doc = {"estimate": _vec(e, q), "message": _vec(m, q), "ok": True}
        else:
            s = ser.parse_vec(args.syndrome, q, "syndrome")
            if len(s) != tbl.H.shape[0]:
                raise ser.SpecError("syndrome", f"need length {tbl.H.shape[0]}")
            e = inner_decode(obj, tbl, s)
            doc = {"estimate": _vec(e, q), "ok": True}
        out.emit(doc, text="\n".join(f"{k}: {v}" for k, v in doc.items()))
        return EXIT_OK
    tables = dec.build_tables(obj, args.side)
    if args.word is not None:
        y = ser.parse_vec(args.word, q, "word")
        if len(y) != obj.n_o:
            raise ser.SpecError("word", f"need length {obj.n_o}, got {len(y)}")
        r = dec.two_stage_decode(obj, y, tables, args.side)
        doc = {
            "ok": r.ok,
            "side": r.side,
            "inner_estimate": _vec(r.inner_estimate, q),
            "interim": _vec((y - r.inner_estimate) % q, q),
            "inner_flags": [int(f) for f in r.inner_flags],
            "extracted": _ext(r.extracted),
            "outer_symbol_errors": _ext(r.outer_errors),
            "decoded": _ext(r.decoded),
            "message_coset": _ext(r.coset),
            "message": _ext(r.message),
        }
    else:
        s = ser.parse_vec(args.syndrome, q, "syndrome")
        r = dec.syndrome_only_decode(obj, s, tables, args.side)
        doc = {
            "ok": r.ok,
            "side": r.side,
            "estimate": _vec(r.error, q),
            "inner_estimate": _vec(r.inner_estimate, q),
            "outer_symbol_errors": _ext(r.outer_errors),
            "coset_delta": _ext(r.delta),
        }
    out.emit(doc, text="\n".join(f"{k}: {v}" for k, v in doc.items()))
    return EXIT_OK if doc["ok"] else EXIT_DECODE_FAIL


def _require_concat(obj, what):
    if not isinstance(obj, cc.ConcatenatedPair):
        raise ser.SpecError(what, "needs a concatenated pair")


def cmd_simulate(args, out):
    obj = ser.load(args.pair)
    _require_concat(obj, "simulate")
    if args.trials < 1:
        raise ser.SpecError("--trials", "must be positive")
    seed = 0 if args.seed is None else args.seed
    sides = tuple(int(s) for s in args.sides.split(","))
    if any(s not in (1, 2) for s in sides):
        raise ser.SpecError("--sides", "sides are 1 and/or 2")
    rep = ev.monte_carlo(obj, ev.ChannelModel(obj.q, args.p), args.trials, seed, sides)
    head = ["side", "p", "trials", "failures", "rate", "wilson_lo", "wilson_hi", "inner_rate",
            "P_inner", "tail_bound", "bound+3sigma", "entropy_bound"]
    rows = [head]
    for s in rep.sides:
        rows.append([s.side, _fmt(rep.p), s.trials, s.failures, _fmt(s.rate), _fmt(s.interval[0]),
                     _fmt(s.interval[1]), _fmt(s.inner_rate), _fmt(s.P), _fmt(s.tail_bound),
                     _fmt(s.tail_bound + s.slack), _fmt(s.entropy_bound)])
    text = _table(rows) + f"\nseed: {rep.seed}"
    if rep.fidelity is not None:
        text += f"\nfidelity lower bound: {_fmt(rep.fidelity)}"
    out.emit(rep.to_dict(), rows=rows, text=text)
    return EXIT_OK


def cmd_bound(args, out):
    obj = ser.load(args.pair)
    _require_concat(obj, "bound")
    head = ["side", "p", "P_inner", "exact", "theta", "tail_bound", "entropy_bound"]
    rows, docs = [head], []
    for p in args.p:
        ch = ev.ChannelModel(obj.q, p)
        for side in (1, 2):
            P, exact = ev.analytic_inner(obj, ch, side)
            K_s = obj.side(side).outer.K
            tail = ev.outer_tail_bound(obj.N, K_s, P)
            ent = ev.entropy_form_bound(obj.N, K_s, P, obj.n_o / obj.N, obj.q) if 0 < P < 1 else None
            th = ev.threshold(obj.N, K_s)
            rows.append([side, _fmt(p), _fmt(P), exact, th, _fmt(tail), _fmt(ent)])
            docs.append({"side": side, "p": p, "P_inner": P, "exact": exact, "theta": th,
                         "tail_bound": tail, "entropy_bound": ent})
    out.emit({"bounds": docs}, rows=rows)
    return EXIT_OK


# -- parser ----------------------------------------------------------------------


def _global_flags(p, suppress):
    d = (lambda v: argparse.SUPPRESS) if suppress else (lambda v: v)
    p.add_argument("--seed", type=_u64, default=d(None), help="64-bit seed for all randomness")
    p.add_argument("--json", action="store_true", default=d(False), help="JSON output")
    p.add_argument("--csv", action="store_true", default=d(False), help="CSV output where tabular")


def _u64(s):
    v = int(s, 0)
    if not 0 <= v < 1 << 64:
        raise argparse.ArgumentTypeError("seed must fit in 64 bits")
    return v


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="cssconcat", description="Concatenated conjugate code pairs.")
    _global_flags(ap, suppress=False)
    common = argparse.ArgumentParser(add_help=False)
    _global_flags(common, suppress=True)
    sub = ap.add_subparsers(dest="cmd", required=True)

    b = sub.add_parser("build", parents=[common], help="build and verify a pair from a spec")
    b.add_argument("spec", help="spec file or bundled name (css49_9, kasami_lin, quantum_rs8)")
    b.add_argument("-o", "--output", help="write the pair JSON here")
    b.set_defaults(fn=cmd_build)

    v = sub.add_parser("verify", parents=[common], help="check the duality identities and invariants")
    v.add_argument("pair")
    v.set_defaults(fn=cmd_verify)

    e = sub.add_parser("encode", parents=[common], help="encode a message")
    e.add_argument("pair")
    e.add_argument("message", help="K comma-separated symbols, or k_o digits")
    e.add_argument("--side", type=int, choices=(1, 2), default=1)
    e.set_defaults(fn=cmd_encode)

    d = sub.add_parser("decode", parents=[common], help="decode a word or a syndrome")
    d.add_argument("pair")
    d.add_argument("--word")
    d.add_argument("--syndrome")
    d.add_argument("--side", type=int, choices=(1, 2), default=1)
    d.set_defaults(fn=cmd_decode)

    s = sub.add_parser("simulate", parents=[common], help="Monte Carlo over the q-ary symmetric channel")
    s.add_argument("pair")
    s.add_argument("--p", type=float, required=True)
    s.add_argument("--trials", type=int, default=100_000)
    s.add_argument("--sides", default="1", help="'1', '2' or '1,2'")
    s.set_defaults(fn=cmd_simulate)

    bd = sub.add_parser("bound", parents=[common], help="analytic bounds")
    bd.add_argument("pair")
    bd.add_argument("--p", type=float, nargs="+", required=True)
    bd.set_defaults(fn=cmd_bound)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INVALID if exc.code else EXIT_OK
    out = _Out(args)
    try:
        return args.fn(args, out)
    except (CodeError, ValueError, OSError) as exc:
        doc = {"error": type(exc).__name__, "message": str(exc)}
        wit = getattr(exc, "witness", None)
        if wit is not None:
            doc["witness"] = np.asarray(wit).tolist()
        msg = f"error: {exc}"
        if wit is not None:
            msg += f"\nwitness: {_digits(wit)}"
        if args.json:
            print(json.dumps(ser.jsonable(doc), indent=2, sort_keys=True))
        else:
            print(msg, file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
