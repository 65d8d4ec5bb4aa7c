"""LLL reduction in QRZ form, size reduction, and the reduction predicates."""

from __future__ import annotations

import math
import time
from dataclasses import dataclass

import numpy as np

from . import intlat
from .errors import DeadlineExceeded, InvalidDelta, NonConvergence, RankDeficient, ZeroDiagonal
from .matcore import as_real_matrix, cond2, retriangularize_pair

# slack on the Lovasz test; stops swap cycling at delta = 1
LOVASZ_SLACK = 1e-12
# slack on the size-reduction trigger; keeps lll_reduce a fixed point of itself
SIZE_SLACK = 1e-12
PREDICATE_RTOL = 1e-10


@dataclass
class QrzFactorization:
    """``R_bar = Q_bar^T R Z`` with ``Q_bar`` left implicit."""

    R_bar: np.ndarray
    Z: np.ndarray
    delta: float
    swaps: int = 0


def round_half_away(v: float) -> int:
    """Nearest integer, ties away from zero."""
    r = math.floor(abs(v) + 0.5)
    return int(r) if v >= 0 else -int(r)


def check_delta(delta: float) -> float:
    delta = float(delta)
    if not 0.25 < delta <= 1.0:
        raise InvalidDelta(f"delta must lie in (1/4, 1], got {delta}")
    return delta


def _reduce_entry(r: np.ndarray, z: np.ndarray, i: int, k: int) -> bool:
    """Size-reduce ``r[i, k]`` against column ``i``; True if anything changed."""
    rii = r[i, i]
    rik = r[i, k]
    if abs(rik) <= 0.5 * abs(rii) * (1.0 + SIZE_SLACK):
        return False
    mu = round_half_away(rik / rii)
    r[: i + 1, k] -= float(mu) * r[: i + 1, i]
    z[:, k] = z[:, k] - mu * z[:, i]
    return True


def _size_reduce_inplace(r: np.ndarray, z: np.ndarray, lo: int = 0) -> None:
    n = r.shape[1]
    for k in range(lo + 1, n):
        for i in range(k - 1, lo - 1, -1):
            _reduce_entry(r, z, i, k)


def _swap_cap(r_block: np.ndarray) -> int:
    n = r_block.shape[0]
    try:
        c = cond2(r_block)
    except (RankDeficient, np.linalg.LinAlgError):
        c = 1e300
    c = min(c, 1e300)
    return int(10 * n * n * (1.0 + math.log2(max(c, 1.0))))


def lll_inplace(
    r: np.ndarray,
    z: np.ndarray,
    delta: float = 1.0,
    lo: int = 0,
    deadline: float | None = None,
) -> int:
    """LLL-reduce the trailing block ``r[lo:, lo:]`` in place.

    Column operations are applied to the full columns of ``r`` (so rows above
    ``lo`` follow along) and to ``z``; row rotations only touch the block.
    Returns the number of swaps.
    """
    n = r.shape[1]
    if n - lo < 2:
        return 0
    if np.any(np.diag(r)[lo:] == 0.0):
        raise RankDeficient("zero on the diagonal of R")
    cap = _swap_cap(r[lo:, lo:])
    swaps = 0
    k = lo + 1
    while k < n:
        if deadline is not None and time.monotonic() > deadline:
            raise DeadlineExceeded("LLL reduction ran past its deadline")
        _reduce_entry(r, z, k - 1, k)
        lhs = delta * r[k - 1, k - 1] ** 2
        rhs = r[k - 1, k] ** 2 + r[k, k] ** 2
        if lhs > rhs * (1.0 + LOVASZ_SLACK):
            r[:, [k - 1, k]] = r[:, [k, k - 1]]
            z[:, [k - 1, k]] = z[:, [k, k - 1]]
            retriangularize_pair(r, k - 1)
            swaps += 1
            if swaps > cap:
                raise NonConvergence(f"LLL exceeded {cap} swaps")
            if k > lo + 1:
                k -= 1
        else:
            for i in range(k - 2, lo - 1, -1):
                _reduce_entry(r, z, i, k)
            k += 1
    if not np.all(np.isfinite(r)):
        raise RankDeficient("LLL produced non-finite entries")
    return swaps


def _check_triangular(r: np.ndarray) -> np.ndarray:
    r = as_real_matrix(r)
    if r.shape[0] != r.shape[1]:
        raise ValueError("R must be square")
    return np.triu(r)


def size_reduce(r, z=None) -> tuple[np.ndarray, np.ndarray]:
    """Size-reduce all of ``r`` (and apply the same column ops to ``z``)."""
    r = _check_triangular(r)
    n = r.shape[0]
    z = intlat.identity(n) if z is None else intlat.int_matrix(z)
    if np.any(np.diag(r) == 0.0):
        raise ZeroDiagonal("size reduction needs a nonzero diagonal")
    _size_reduce_inplace(r, z)
    return r, z


def lll_reduce(r, delta: float = 1.0, *, deadline: float | None = None) -> QrzFactorization:
    """LLL reduction of an upper-triangular ``R`` producing ``R_bar`` and ``Z``."""
    delta = check_delta(delta)
    r = _check_triangular(r)
    n = r.shape[0]
    tol = n * np.finfo(float).eps * float(np.max(np.abs(r)))
    if np.any(np.abs(np.diag(r)) <= tol):
        raise RankDeficient("R is numerically rank deficient")
    z = intlat.identity(n)
    swaps = lll_inplace(r, z, delta, 0, deadline)
    return QrzFactorization(r, z, delta, swaps)


def is_size_reduced(r) -> bool:
    r = np.asarray(r, dtype=float)
    n = r.shape[0]
    for k in range(1, n):
        for i in range(k):
            if abs(r[i, k]) > 0.5 * abs(r[i, i]) * (1.0 + PREDICATE_RTOL):
                return False
    return True


def is_lll_reduced(r, delta: float = 1.0) -> bool:
    delta = check_delta(delta)
    r = np.asarray(r, dtype=float)
    if not is_size_reduced(r):
        return False
    for k in range(1, r.shape[0]):
        lhs = delta * r[k - 1, k - 1] ** 2
        rhs = r[k - 1, k] ** 2 + r[k, k] ** 2
        if lhs > rhs * (1.0 + PREDICATE_RTOL):
            return False
    return True
