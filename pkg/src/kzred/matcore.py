"""Dense real matrices: QR factorization, Givens rotations, condition numbers.

Real matrices are plain ``numpy.ndarray`` objects of dtype float64. The
helpers here validate shape and finiteness at the boundaries and otherwise
stay out of the way.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateInput, NonFinite, RankDeficient

EPS = np.finfo(float).eps


def as_real_matrix(a, *, copy: bool = True) -> np.ndarray:
    """Coerce ``a`` to a finite 2-D float64 array."""
    m = np.array(a, dtype=float, copy=copy)
    if m.ndim == 1:
        m = m.reshape(-1, 1)
    if m.ndim != 2 or m.shape[0] < 1 or m.shape[1] < 1:
        raise ValueError(f"expected a non-empty 2-D matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise NonFinite("matrix contains NaN or Inf")
    return m


def rank_tol(a: np.ndarray) -> float:
    """Scaled rank threshold ``n * eps * max|a_ij|``."""
    return a.shape[1] * EPS * float(np.max(np.abs(a)))


def is_upper_triangular(r: np.ndarray) -> bool:
    return r.shape[0] == r.shape[1] and not np.any(np.tril(r, -1))


def qr_factorize(a) -> tuple[np.ndarray, np.ndarray]:
    """Thin Householder QR of a full-column-rank ``m x n`` matrix.

    Returns ``(Q1, R)`` with ``Q1`` of shape ``(m, n)`` having orthonormal
    columns and ``R`` upper triangular. Diagonal signs of ``R`` are left as
    LAPACK produces them.
    """
    a = as_real_matrix(a)
    m, n = a.shape
    if m < n:
        raise RankDeficient(f"need m >= n for full column rank, got {m}x{n}")
    q1, r = np.linalg.qr(a, mode="reduced")
    r = np.triu(r)
    tol = rank_tol(a)
    if np.any(np.abs(np.diag(r)) <= tol):
        raise RankDeficient("matrix is numerically rank deficient")
    return q1, r


@dataclass(frozen=True)
class GivensRotation:
    """Plane rotation acting on rows ``i`` and ``j``.

    Applied as ``[x_i; x_j] <- [[c, s], [-s, c]] @ [x_i; x_j]``.
    """

    c: float
    s: float
    i: int = 0
    j: int = 1

    def __post_init__(self):
        if abs(self.c * self.c + self.s * self.s - 1.0) > 1e-14:
            raise ValueError("Givens rotation requires c^2 + s^2 = 1")


def givens(a: float, b: float, i: int = 0, j: int = 1) -> tuple[GivensRotation, float]:
    """Rotation ``g`` with ``g @ (a, b) = (r, 0)``."""
    if a == 0.0 and b == 0.0:
        raise DegenerateInput("cannot build a Givens rotation for (0, 0)")
    if b == 0.0:
        return GivensRotation(1.0, 0.0, i, j), a
    if a == 0.0:
        return GivensRotation(0.0, 1.0, i, j), b
    r = math.hypot(a, b)
    c, s = a / r, b / r
    # renormalise so the invariant check is robust to the last ulp
    h = math.hypot(c, s)
    return GivensRotation(c / h, s / h, i, j), r


def _rotate_rows(r: np.ndarray, c: float, s: float, i: int, j: int, col: int) -> None:
    ri = r[i, col:].copy()
    rj = r[j, col:]
    r[i, col:] = c * ri + s * rj
    r[j, col:] = -s * ri + c * rj


def apply_givens_rows(
    r: np.ndarray, g: GivensRotation, col_start: int = 0, *, zero: bool = False
) -> np.ndarray:
    """Return a copy of ``r`` with rows ``g.i, g.j`` rotated from ``col_start`` on.

    With ``zero=True`` the entry ``(g.j, col_start)``, which the rotation was
    built to annihilate, is stored as an exact 0.
    """
    rows, cols = r.shape
    if not (0 <= g.i < rows and 0 <= g.j < rows) or g.i == g.j:
        raise IndexError(f"rotation rows ({g.i}, {g.j}) invalid for {rows} rows")
    if not 0 <= col_start <= cols:
        raise IndexError(f"col_start {col_start} out of range for {cols} columns")
    out = np.array(r, dtype=float)
    _rotate_rows(out, g.c, g.s, g.i, g.j, col_start)
    if zero and col_start < cols:
        out[g.j, col_start] = 0.0
    return out


def retriangularize_pair(r: np.ndarray, row: int) -> None:
    """Zero ``r[row+1, row]`` in place with a Givens rotation on rows ``row, row+1``."""
    b = r[row + 1, row]
    if b == 0.0:
        return
    g, rr = givens(r[row, row], b)
    _rotate_rows(r, g.c, g.s, row, row + 1, row + 1)
    r[row, row] = rr
    r[row + 1, row] = 0.0


def singular_values(a) -> np.ndarray:
    a = np.asarray(a, dtype=float)
    return np.linalg.svd(a, compute_uv=False)


def cond2(a) -> float:
    """2-norm condition number ``sigma_max / sigma_min``."""
    a = np.asarray(a, dtype=float)
    if not np.all(np.isfinite(a)):
        raise NonFinite("matrix contains NaN or Inf")
    sv = singular_values(a)
    smax, smin = float(sv[0]), float(sv[-1])
    if a.shape[0] < a.shape[1] or smin <= np.finfo(float).tiny * max(smax, 1.0):
        raise RankDeficient("smallest singular value underflows")
    return smax / smin


def r_factor_matches(r_ref: np.ndarray, r_other: np.ndarray, tol: float) -> bool:
    """True if two R factors of the same matrix agree up to row signs.

    Two QR factorizations of one matrix differ by ``R' = D R`` with ``D`` a
    diagonal of signs, so rows of ``r_other`` are flipped to match the
    diagonal signs of ``r_ref`` before comparing.
    """
    d = np.where(np.sign(np.diag(r_ref)) == np.sign(np.diag(r_other)), 1.0, -1.0)
    return float(np.max(np.abs(r_ref - d[:, None] * r_other))) <= tol
