"""Exact integer bookkeeping for unimodular transforms.

Integer matrices are numpy arrays of ``dtype=object`` holding Python ``int``
values, so entries never wrap no matter how large they grow.
"""

from __future__ import annotations

import math
from typing import NamedTuple, Sequence

import numpy as np

from .errors import BothZero, NotSquare


def int_matrix(a) -> np.ndarray:
    """Exact integer copy of ``a`` as an object array of Python ints."""
    arr = np.asarray(a, dtype=object)
    if arr.ndim == 1:
        arr = arr.reshape(-1, 1)
    out = np.empty(arr.shape, dtype=object)
    for idx, v in np.ndenumerate(arr):
        iv = int(v)
        if iv != v:
            raise ValueError(f"non-integer entry {v!r}")
        out[idx] = iv
    return out


def int_vector(v) -> np.ndarray:
    return int_matrix(np.asarray(v, dtype=object).reshape(-1)).reshape(-1)


def identity(n: int) -> np.ndarray:
    z = np.zeros((n, n), dtype=object)
    z[:] = 0
    for i in range(n):
        z[i, i] = 1
    return z


def to_float(a: np.ndarray) -> np.ndarray:
    return np.array([float(v) for v in np.ravel(a)], dtype=float).reshape(np.shape(a))


class ExtGcdResult(NamedTuple):
    d: int
    a: int
    b: int


def ext_gcd(p: int, q: int) -> ExtGcdResult:
    """Bezout triple ``(d, a, b)`` with ``a*p + b*q = d = gcd(p, q) > 0``.

    Among all valid pairs, ``a`` has the smallest magnitude (``|a| <= |q|/(2d)``,
    with a tie resolved towards the nonnegative value).
    """
    p, q = int(p), int(q)
    if p == 0 and q == 0:
        raise BothZero("gcd(0, 0) is undefined")
    old_r, r = p, q
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r:
        quo = old_r // r
        old_r, r = r, old_r - quo * r
        old_s, s = s, old_s - quo * s
        old_t, t = t, old_t - quo * t
    d, a, b = old_r, old_s, old_t
    if d < 0:
        d, a, b = -d, -a, -b
    step = abs(q) // d
    if step:
        # a + t*q/d, b - t*p/d is also a Bezout pair; pick a in (-step/2, step/2]
        a_min = a % step
        if 2 * a_min > step:
            a_min -= step
        t = (a_min - a) // (q // d)
        a, b = a_min, b - t * (p // d)
    return ExtGcdResult(d, a, b)


def unimodular_from_pair(p: int, q: int) -> np.ndarray:
    """2x2 matrix ``[[p/d, -b], [q/d, a]]`` with determinant +1.

    Its inverse maps ``(p, q)`` to ``(d, 0)``.
    """
    d, a, b = ext_gcd(p, q)
    return int_matrix([[int(p) // d, -b], [int(q) // d, a]])


def det_exact(z) -> int:
    """Determinant by fraction-free (Bareiss) elimination."""
    m = [[int(v) for v in row] for row in np.asarray(z, dtype=object)]
    n = len(m)
    if n == 0 or any(len(row) != n for row in m):
        raise NotSquare("determinant needs a square matrix")
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            for i in range(k + 1, n):
                if m[i][k] != 0:
                    m[k], m[i] = m[i], m[k]
                    sign = -sign
                    break
            else:
                return 0
        pivot = m[k][k]
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * pivot - m[i][k] * m[k][j]) // prev
        prev = pivot
    return sign * m[n - 1][n - 1]


def is_unimodular(z) -> bool:
    arr = np.asarray(z, dtype=object)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1] or arr.shape[0] == 0:
        return False
    try:
        ints = int_matrix(arr)
    except (TypeError, ValueError):
        return False
    return det_exact(ints) in (1, -1)


def vector_gcd(v: Sequence[int]) -> int:
    return math.gcd(*(int(x) for x in v))
