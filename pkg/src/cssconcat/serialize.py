"""JSON documents for code specs, built pairs and reports.

GF(q) matrices are lists of digit strings when q <= 10 and lists of integer
lists otherwise.  Extension-field elements are integers whose base-q digits
are power-basis coordinates (least significant first).
"""
from __future__ import annotations

import json
from importlib import resources
from pathlib import Path

import numpy as np

from .codes import GrsCode, LinearCode, grs_new
from .concat import ConcatenatedPair, concatenate, outer_pair
from .conjugate import ConjugateCodePair, pair_new
from .errors import CodeError
from .galois import FieldTower, make_tower
from .presets import by_name


class SpecError(CodeError):
    """Malformed spec document; ``where`` names the offending location."""

    def __init__(self, where: str, msg: str):
        super().__init__(f"{where}: {msg}")
        self.where = where


# -- vectors and matrices -------------------------------------------------------


def vec_to_str(v, q: int):
    v = np.asarray(v, dtype=np.int64).reshape(-1)
    if q <= 10:
        return "".join(str(int(x)) for x in v)
    return [int(x) for x in v]


def parse_vec(s, q: int, where: str = "vector") -> np.ndarray:
    """Digit string, comma/space separated ints, or a list."""
    if isinstance(s, str):
        s = s.strip()
        if "," in s or " " in s:
            parts = [p for p in s.replace(",", " ").split() if p]
            v = [int(p) for p in parts]
        elif q <= 10:
            if not s.isdigit() and s:
                raise SpecError(where, f"not a digit string: {s!r}")
            v = [int(c) for c in s]
        else:
            v = [int(s)] if s else []
    elif isinstance(s, (list, tuple)):
        v = [int(x) for x in s]
    else:
        raise SpecError(where, f"cannot read a vector from {type(s).__name__}")
    v = np.array(v, dtype=np.int64)
    if np.any((v < 0) | (v >= q)):
        raise SpecError(where, f"entries must lie in [0, {q})")
    return v


def mat_to_json(M, q: int):
    return [vec_to_str(r, q) for r in np.asarray(M, dtype=np.int64)]


def parse_mat(rows, q: int, n: int | None = None, where: str = "matrix") -> np.ndarray:
    if not isinstance(rows, list):
        raise SpecError(where, "expected a list of rows")
    vecs = [parse_vec(r, q, f"{where}[{i}]") for i, r in enumerate(rows)]
    if not vecs:
        return np.zeros((0, n or 0), dtype=np.int64)
    lens = {len(v) for v in vecs}
    if len(lens) != 1 or (n is not None and lens != {n}):
        raise SpecError(where, f"rows have inconsistent lengths {sorted(lens)}")
    return np.vstack(vecs)


# -- fields, codes, pairs -------------------------------------------------------


def field_to_json(t: FieldTower) -> dict:
    return {"q": t.q, "k": t.k, "poly": [int(c) for c in t.poly]}


def parse_field(doc, where="field") -> FieldTower:
    if not isinstance(doc, dict) or "q" not in doc:
        raise SpecError(where, "needs at least 'q'")
    try:
        return make_tower(int(doc["q"]), int(doc.get("k", 1)), doc.get("poly"))
    except CodeError as exc:
        raise SpecError(where, str(exc)) from exc


def code_to_json(C: LinearCode) -> dict:
    return {"generator": mat_to_json(C.G, C.q), "n": C.n}


def parse_code(doc, q: int, where: str) -> LinearCode:
    if isinstance(doc, str):
        try:
            return by_name(doc, q)
        except CodeError as exc:
            raise SpecError(where, str(exc)) from exc
    if not isinstance(doc, dict):
        raise SpecError(where, "expected a preset name or an object")
    n = doc.get("n")
    if "generator" in doc:
        return LinearCode.from_generator(parse_mat(doc["generator"], q, n, f"{where}.generator"), q, n)
    if "parity_check" in doc:
        return LinearCode.from_parity_check(parse_mat(doc["parity_check"], q, n, f"{where}.parity_check"), q, n)
    raise SpecError(where, "needs 'generator' or 'parity_check'")


def pair_to_json(p: ConjugateCodePair) -> dict:
    return {
        "C1": code_to_json(p.C1),
        "C2": code_to_json(p.C2),
        "g": mat_to_json(p.g, p.q),
        "g_dual": mat_to_json(p.g_dual, p.q),
    }


def parse_pair(doc, q: int, where: str) -> ConjugateCodePair:
    if isinstance(doc, str):
        # "trivial:n" names the pair C1 = C2 = full space; "A/B" names C1 and C2
        if doc.startswith("trivial:"):
            C = parse_code(doc, q, where)
            return pair_new(C, C)
        if "/" in doc:
            a, b = doc.split("/", 1)
            doc = {"C1": a, "C2": b}
        else:
            raise SpecError(where, f"unknown pair preset {doc!r}")
    if not isinstance(doc, dict) or "C1" not in doc or "C2" not in doc:
        raise SpecError(where, "a pair needs 'C1' and 'C2'")
    C1 = parse_code(doc["C1"], q, f"{where}.C1")
    C2 = parse_code(doc["C2"], q, f"{where}.C2")
    g = parse_mat(doc["g"], q, C1.n, f"{where}.g") if "g" in doc else None
    gd = parse_mat(doc["g_dual"], q, C1.n, f"{where}.g_dual") if "g_dual" in doc else None
    return pair_new(C1, C2, g, gd)


def _ext_list(doc, t: FieldTower, N: int | None, where: str) -> np.ndarray:
    if doc == "powers":
        if N is None:
            raise SpecError(where, "'powers' needs the outer length N")
        return t.alpha_pow(np.arange(N))
    if doc == "ones":
        return np.ones(N, dtype=np.int64)
    if not isinstance(doc, list):
        raise SpecError(where, "expected a list of field elements")
    v = np.array([int(x) for x in doc], dtype=np.int64)
    if np.any((v < 0) | (v >= t.size)):
        raise SpecError(where, f"elements must lie in [0, {t.size})")
    return v


def grs_to_json(D: GrsCode) -> dict:
    return {"K": D.K, "a": D.a.tolist(), "v": D.v.tolist()}


def concat_to_json(cp: ConcatenatedPair, matrices: bool = True) -> dict:
    doc = {
        "type": "concatenated",
        "field": field_to_json(cp.tower),
        "inners": [pair_to_json(p) for p in cp.inners],
        "outer": {"D1": grs_to_json(cp.D1), "D2": grs_to_json(cp.D2)},
        "basis": cp.basis.tolist(),
        "basis_dual": cp.basis_dual.tolist(),
        "params": {"n": cp.n_o, "k": cp.k_o, "N": cp.N, "K": cp.K},
    }
    if matrices:
        doc["H_L1"] = mat_to_json(cp.H_L1, cp.q)
        doc["H_L2"] = mat_to_json(cp.H_L2, cp.q)
    return doc


def _parse_outer(doc, t, N, where):
    if not isinstance(doc, dict):
        raise SpecError(where, "expected an object")
    try:
        if "D1" in doc:
            D = []
            for name in ("D1", "D2"):
                d = doc[name]
                a = _ext_list(d.get("a", "powers"), t, N, f"{where}.{name}.a")
                v = _ext_list(d.get("v", "ones"), t, len(a), f"{where}.{name}.v")
                D.append(grs_new(t, len(a), int(d["K"]), a, v))
            return tuple(D)
        a = _ext_list(doc.get("a", "powers"), t, N, f"{where}.a")
        v = _ext_list(doc.get("v", "ones"), t, len(a), f"{where}.v")
        return outer_pair(t, a, v, int(doc["K1"]), int(doc["K2"]))
    except KeyError as exc:
        raise SpecError(where, f"missing key {exc}") from exc


def parse_spec(doc):
    """Build a ConjugateCodePair or ConcatenatedPair from a spec (or built) document."""
    if not isinstance(doc, dict):
        raise SpecError("<root>", "expected a JSON object")
    t = parse_field(doc.get("field", {"q": 2}))
    inner_doc = doc.get("inners", doc.get("pair"))
    if inner_doc is None:
        raise SpecError("<root>", "needs 'inners' (concatenated) or 'pair'")
    if "outer" not in doc:
        if not isinstance(inner_doc, (dict, str)):
            raise SpecError("pair", "a single pair spec must be an object or preset")
        return parse_pair(inner_doc, t.q, "pair")
    if isinstance(inner_doc, dict) and "repeat" in inner_doc:
        one = parse_pair(inner_doc["pair"], t.q, "inners.pair")
        inners = [one] * int(inner_doc["repeat"])
    elif isinstance(inner_doc, list):
        inners = [parse_pair(d, t.q, f"inners[{i}]") for i, d in enumerate(inner_doc)]
    else:
        raise SpecError("inners", "expected a list or {'pair': ..., 'repeat': N}")
    D1, D2 = _parse_outer(doc["outer"], t, len(inners), "outer")
    basis = None
    if "basis" in doc:
        basis = _ext_list(doc["basis"], t, t.k, "basis")
    cp = concatenate(inners, D1, D2, t, basis)
    for name in ("H_L1", "H_L2"):
        if name in doc:
            H = parse_mat(doc[name], t.q, cp.n_o, name)
            if not np.array_equal(H, getattr(cp, name)):
                raise SpecError(name, "stored matrix does not match the rebuilt one")
    return cp


def bundled(name: str) -> Path:
    """Path of a spec shipped with the package (``css49_9`` etc.)."""
    fname = name if name.endswith(".json") else name + ".json"
    return Path(str(resources.files("cssconcat") / "data" / fname))


def load(path_or_name):
    """Read a spec/pair file; bare names fall back to the bundled specs."""
    p = Path(path_or_name)
    if not p.exists():
        b = bundled(str(path_or_name))
        if not b.exists():
            raise SpecError(str(path_or_name), "no such file or bundled spec")
        p = b
    try:
        doc = json.loads(p.read_text())
    except json.JSONDecodeError as exc:
        raise SpecError(str(p), f"invalid JSON at line {exc.lineno}: {exc.msg}") from exc
    return parse_spec(doc)


def to_json(obj) -> dict:
    if isinstance(obj, ConcatenatedPair):
        return concat_to_json(obj)
    if isinstance(obj, ConjugateCodePair):
        return {"type": "pair", "field": {"q": obj.q, "k": 1}, "pair": pair_to_json(obj),
                "params": {"n": obj.n, "k": obj.k}}
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def jsonable(x):
    """Recursively convert numpy values for json.dumps."""
    if isinstance(x, dict):
        return {k: jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [jsonable(v) for v in x]
    if isinstance(x, np.ndarray):
        return x.tolist()
    if isinstance(x, np.integer):
        return int(x)
    if isinstance(x, (np.floating,)):
        return float(x)
    if isinstance(x, np.bool_):
        return bool(x)
    return x
