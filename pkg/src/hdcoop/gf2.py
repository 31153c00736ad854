"""Dense linear algebra over GF(2).

Vectors and matrices are numpy ``uint8`` arrays holding 0/1 entries.  Bit
index 0 is the top (most significant) signal level.
"""

from __future__ import annotations

import numpy as np

__all__ = [
    "as_bits",
    "zeros",
    "identity",
    "shift_matrix",
    "matmul",
    "rank",
    "solve",
    "rref",
    "nullspace",
    "blockdiag",
    "to_hex",
]


def as_bits(a) -> np.ndarray:
    """Coerce to a uint8 array of 0/1 entries."""
    arr = np.asarray(a)
    if arr.dtype == np.bool_:
        return arr.astype(np.uint8)
    out = arr.astype(np.int64, copy=False)
    if np.any((out != 0) & (out != 1)):
        raise ValueError("entries must be 0 or 1")
    return out.astype(np.uint8)


def zeros(rows: int, cols: int | None = None) -> np.ndarray:
    if cols is None:
        return np.zeros(rows, dtype=np.uint8)
    return np.zeros((rows, cols), dtype=np.uint8)


def identity(n: int) -> np.ndarray:
    return np.eye(n, dtype=np.uint8)


def shift_matrix(n: int, k: int) -> np.ndarray:
    """k-th power of the n x n lower shift: drops the bottom k bits, zero-fills the top."""
    if n < 0 or k < 0:
        raise ValueError("n and k must be nonnegative")
    return np.eye(n, k=-k, dtype=np.uint8)


def matmul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Product over GF(2); dimensions are checked."""
    a = np.asarray(a, dtype=np.uint8)
    b = np.asarray(b, dtype=np.uint8)
    if a.ndim != 2:
        raise ValueError("left factor must be a matrix")
    if a.shape[1] != b.shape[0]:
        raise ValueError(f"dimension mismatch: {a.shape} x {b.shape}")
    return ((a.astype(np.int64) @ b.astype(np.int64)) & 1).astype(np.uint8)


def rref(a: np.ndarray) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form and pivot columns."""
    m = np.array(a, dtype=np.uint8, copy=True)
    if m.ndim != 2:
        raise ValueError("expected a matrix")
    rows, cols = m.shape
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        hits = np.nonzero(m[r:, c])[0]
        if hits.size == 0:
            continue
        p = r + int(hits[0])
        if p != r:
            m[[r, p]] = m[[p, r]]
        others = np.nonzero(m[:, c])[0]
        others = others[others != r]
        if others.size:
            m[others] ^= m[r]
        pivots.append(c)
        r += 1
    return m, pivots


def rank(a: np.ndarray) -> int:
    a = np.asarray(a)
    if a.size == 0:
        return 0
    return len(rref(a)[1])


def solve(a: np.ndarray, b: np.ndarray) -> np.ndarray | None:
    """Some x with a @ x = b, or None.  Free variables are set to 0.

    ``b`` may also be a matrix of right-hand sides (one per column); then the
    result has one solution per column and None is returned if any column is
    inconsistent.
    """
    a = np.asarray(a, dtype=np.uint8)
    b = np.asarray(b, dtype=np.uint8)
    if a.ndim != 2 or a.shape[0] != b.shape[0]:
        raise ValueError(f"dimension mismatch: A {a.shape}, b {b.shape}")
    vec = b.ndim == 1
    rhs = b.reshape(b.shape[0], -1)
    rows, cols = a.shape
    red, piv = rref(np.concatenate([a, rhs], axis=1))
    piv_a = [c for c in piv if c < cols]
    r = len(piv_a)
    if red[r:, cols:].any():
        return None
    x = np.zeros((cols, rhs.shape[1]), dtype=np.uint8)
    for i, c in enumerate(piv_a):
        x[c] = red[i, cols:]
    return x[:, 0] if vec else x


def nullspace(a: np.ndarray) -> np.ndarray:
    """Basis of {x : a @ x = 0}, one vector per column."""
    a = np.asarray(a, dtype=np.uint8)
    cols = a.shape[1]
    red, piv = rref(a) if a.size else (a, [])
    free = [c for c in range(cols) if c not in set(piv)]
    basis = np.zeros((cols, len(free)), dtype=np.uint8)
    for j, f in enumerate(free):
        basis[f, j] = 1
        for i, c in enumerate(piv):
            basis[c, j] = red[i, f]
    return basis


def blockdiag(m: np.ndarray, copies: int) -> np.ndarray:
    """``copies`` copies of ``m`` along the diagonal."""
    m = np.asarray(m, dtype=np.uint8)
    r, c = m.shape
    out = np.zeros((r * copies, c * copies), dtype=np.uint8)
    for k in range(copies):
        out[k * r:(k + 1) * r, k * c:(k + 1) * c] = m
    return out


def to_hex(v: np.ndarray) -> str:
    """Hex string of a bit vector read top level first ('-' for width 0)."""
    bits = np.asarray(v, dtype=np.uint8).ravel()
    if bits.size == 0:
        return "-"
    value = 0
    for bit in bits:
        value = (value << 1) | int(bit)
    width = (bits.size + 3) // 4
    return format(value, f"0{width}x")
