"""Plain-text matrix files.

Layout: a header line ``m n`` followed by ``m`` lines of ``n``
whitespace-separated numbers. Real entries are written with 17 significant
digits; integer entries are written as full decimal expansions.
"""

from __future__ import annotations

import io
import os
from typing import IO, Iterable

import numpy as np

from . import intlat
from .matcore import as_real_matrix


def _lines(src) -> list[list[str]]:
    if isinstance(src, (str, os.PathLike)):
        with open(src) as fh:
            text = fh.read()
    else:
        text = src.read()
    return [ln.split() for ln in text.splitlines() if ln.strip()]


def _parse(rows: list[list[str]], conv):
    if not rows or len(rows[0]) != 2:
        raise ValueError("matrix file must start with a 'm n' header")
    m, n = int(rows[0][0]), int(rows[0][1])
    body = rows[1:]
    if len(body) != m or any(len(r) != n for r in body):
        raise ValueError(f"matrix body does not match header {m} x {n}")
    return [[conv(t) for t in r] for r in body]


def read_matrix(src) -> np.ndarray:
    return as_real_matrix(_parse(_lines(src), float))


def _exact_int(tok: str) -> int:
    try:
        return int(tok)
    except ValueError:
        raise ValueError(f"not an exact integer: {tok!r}") from None


def read_int_matrix(src) -> np.ndarray:
    return intlat.int_matrix(_parse(_lines(src), _exact_int))


def _emit(rows: Iterable[Iterable[str]], shape, dst: IO[str] | str | os.PathLike) -> None:
    buf = io.StringIO()
    buf.write(f"{shape[0]} {shape[1]}\n")
    for r in rows:
        buf.write(" ".join(r) + "\n")
    if isinstance(dst, (str, os.PathLike)):
        with open(dst, "w") as fh:
            fh.write(buf.getvalue())
    else:
        dst.write(buf.getvalue())


def write_matrix(a, dst) -> None:
    a = np.asarray(a, dtype=float)
    _emit(([f"{v:.17g}" for v in row] for row in a), a.shape, dst)


def write_int_matrix(z, dst) -> None:
    z = np.asarray(z, dtype=object)
    if z.ndim == 1:
        z = z.reshape(-1, 1)
    _emit(([str(int(v)) for v in row] for row in z), z.shape, dst)
