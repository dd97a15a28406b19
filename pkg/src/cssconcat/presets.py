"""Named inner codes accepted in code-spec files."""
import numpy as np

from .codes import LinearCode
from .errors import CodeError

# columns are the binary expansions of 1..7
HAMMING7_H = np.array(
    [[(j >> b) & 1 for j in range(1, 8)] for b in range(3)], dtype=np.int64
)


def hamming7() -> LinearCode:
    """[7,4] binary Hamming code."""
    return LinearCode.from_parity_check(HAMMING7_H, 2)


def even(n: int, q: int = 2) -> LinearCode:
    """[n, n-1] zero-sum code."""
    return LinearCode.from_parity_check(np.ones((1, n), dtype=np.int64), q)


def repetition(n: int, q: int = 2) -> LinearCode:
    return LinearCode.from_generator(np.ones((1, n), dtype=np.int64), q)


def full_space(n: int, q: int = 2) -> LinearCode:
    return LinearCode.from_generator(np.eye(n, dtype=np.int64), q)


def zero_code(n: int, q: int = 2) -> LinearCode:
    return LinearCode.from_generator(np.zeros((0, n), dtype=np.int64), q, n)


def simplex7() -> LinearCode:
    return LinearCode.from_generator(HAMMING7_H, 2)


def by_name(name: str, q: int = 2) -> LinearCode:
    """``hamming7``, ``even7`` (or ``even:n``), ``repetition:n``, ``full:n``/``trivial:n``."""
    name = name.strip().lower()
    if name == "hamming7":
        if q != 2:
            raise CodeError("hamming7 is binary")
        return hamming7()
    if name == "even7":
        return even(7, q)
    if name == "simplex7":
        return simplex7()
    head, _, arg = name.partition(":")
    if arg:
        n = int(arg)
        if head == "even":
            return even(n, q)
        if head == "repetition":
            return repetition(n, q)
        if head in ("full", "trivial"):
            return full_space(n, q)
    raise CodeError(f"unknown code preset {name!r}")
