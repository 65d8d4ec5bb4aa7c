"""Shortest-vector solvers on an upper-triangular factor ``R``.

``enumerate_shortest`` is a Schnorr-Euchner depth-first search,
``brute_force_svp`` is an exhaustive box search kept as an independent
oracle for small dimensions, and ``lll_aided_svp`` LLL-reduces first and
maps the solution back.
"""

from __future__ import annotations

import contextlib
import itertools
import math
import time
import warnings
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import intlat
from .errors import (
    BoxTooSmall,
    DeadlineExceeded,
    DimensionTooLarge,
    KzredError,
    RadiusUnderflow,
    SearchAborted,
    ZeroDiagonal,
)
from .lll import check_delta, lll_inplace

DEFAULT_NODE_CAP = 10**9
BRUTE_MAX_DIM = 8
_DEADLINE_EVERY = 1 << 14

_check_bounds = False


class BoundViolation(KzredError, AssertionError):
    """An LLL-aided SVP solution broke the entry bound on ``z``."""


@contextlib.contextmanager
def bound_checks(enabled: bool = True):
    """Assert the entry bound on every ``lll_aided_svp`` result while active."""
    global _check_bounds
    prev = _check_bounds
    _check_bounds = enabled
    try:
        yield
    finally:
        _check_bounds = prev


@dataclass
class SvpSolution:
    x: np.ndarray
    norm: float
    nodes: int = 0


@dataclass
class LllAidedSvp:
    """Solution of the SVP on ``R_block`` found through its LLL reduction.

    ``z`` solves the problem on ``Rhat``; ``x = Zhat @ z`` solves it on the
    original block.
    """

    x: np.ndarray
    z: np.ndarray
    Zhat: np.ndarray
    Rhat: np.ndarray
    norm: float
    nodes: int = 0
    swaps: int = 0


def lattice_norm(r: np.ndarray, x) -> float:
    """``||R x||_2`` with ``x`` converted exactly to float."""
    return float(np.linalg.norm(np.asarray(r, dtype=float) @ intlat.to_float(np.asarray(x))))


def normalize_sign(x: np.ndarray) -> np.ndarray:
    for v in x:
        if v != 0:
            return -x if v < 0 else x
    return x


def _validate_triangular(r) -> np.ndarray:
    r = np.asarray(r, dtype=float)
    if r.ndim != 2 or r.shape[0] != r.shape[1]:
        raise ValueError("R must be square upper triangular")
    if not np.all(np.isfinite(r)):
        raise ValueError("R contains NaN or Inf")
    if np.any(np.diag(r) == 0.0):
        raise ZeroDiagonal("R has a zero diagonal entry")
    return np.triu(r)


def _nearest(c: float) -> int:
    """Nearest integer; half-integers go to the smaller magnitude."""
    f = math.floor(c)
    frac = c - f
    if frac > 0.5:
        return f + 1
    if frac < 0.5:
        return f
    return f if abs(f) < abs(f + 1) else f + 1


def enumerate_shortest(
    r,
    *,
    node_cap: int = DEFAULT_NODE_CAP,
    deadline: float | None = None,
) -> SvpSolution:
    """Exact SVP on ``R`` by Schnorr-Euchner enumeration.

    The search starts from the shortest column of ``R`` as the radius and
    shrinks it on every improvement. Only half of the symmetric search tree
    is visited (the last nonzero coordinate is forced positive); the result
    is returned with its first nonzero entry positive.
    """
    r = _validate_triangular(r)
    n = r.shape[0]
    col_sq = np.sum(r * r, axis=0)
    j0 = int(np.argmin(col_sq))
    best_sq = float(col_sq[j0])
    if not best_sq > 0.0 or not math.isfinite(best_sq):
        raise RadiusUnderflow("initial search radius is not positive")
    best = [0] * n
    best[j0] = 1

    rows = r.tolist()
    diag = [rows[k][k] for k in range(n)]
    z = [0] * n
    c = [0.0] * n
    step = [0] * n
    top = [False] * n  # all coordinates above level k are zero
    dist = [0.0] * (n + 1)

    k = n - 1
    top[k] = True
    z[k] = 0
    step[k] = 1
    nodes = 0
    while True:
        nodes += 1
        if nodes > node_cap:
            raise SearchAborted(f"enumeration exceeded {node_cap} nodes")
        if deadline is not None and nodes % _DEADLINE_EVERY == 0 and time.monotonic() > deadline:
            raise DeadlineExceeded("enumeration ran past its deadline")
        t = diag[k] * (z[k] - c[k])
        nd = dist[k + 1] + t * t
        if nd < best_sq:
            if k > 0:
                dist[k] = nd
                child_top = top[k] and z[k] == 0
                k -= 1
                top[k] = child_top
                if child_top:
                    c[k] = 0.0
                    z[k] = 0
                    step[k] = 1
                else:
                    rk = rows[k]
                    s = 0.0
                    for j in range(k + 1, n):
                        s += rk[j] * z[j]
                    ck = -s / diag[k]
                    zk = _nearest(ck)
                    c[k] = ck
                    z[k] = zk
                    step[k] = 1 if ck >= zk else -1
                continue
            if not (top[0] and z[0] == 0):
                best_sq = nd
                best = z[:]
        else:
            # siblings come in nondecreasing distance, so the level is exhausted
            k += 1
            if k == n:
                break
        if top[k]:
            z[k] += 1
        else:
            z[k] += step[k]
            step[k] = -step[k] - (1 if step[k] > 0 else -1)
    x = normalize_sign(intlat.int_vector(best))
    return SvpSolution(x, lattice_norm(r, x), nodes)


def _radius_box(r: np.ndarray) -> np.ndarray:
    """Per-coordinate bound on any ``x`` with ``||R x|| <= min column norm``.

    ``x = R^{-1} (R x)`` gives ``|x_i| <= ||row_i(R^{-1})|| * ||R x||``.
    """
    beta = float(np.sqrt(np.min(np.sum(r * r, axis=0))))
    rinv = np.linalg.solve(r, np.eye(r.shape[0]))
    bound = beta * np.linalg.norm(rinv, axis=1) * (1.0 + 1e-9)
    return np.floor(bound).astype(np.int64)


def brute_force_svp(r, box: int | Sequence[int], *, clip_to_radius: bool = True) -> SvpSolution:
    """Exhaustive SVP over the integer box ``|x_i| <= box_i`` (vectorised).

    ``box`` is a single bound or one bound per coordinate. With
    ``clip_to_radius`` each bound is further intersected with the rigorous
    bound from ``R^{-1}`` and the shortest column, which never excludes a
    minimiser. A ``BoxTooSmall`` warning is issued when the minimiser lies
    on the boundary of the caller's box in a coordinate where that box is
    tighter than the rigorous bound.
    """
    r = _validate_triangular(r)
    n = r.shape[0]
    if n > BRUTE_MAX_DIM:
        raise DimensionTooLarge(f"brute force limited to n <= {BRUTE_MAX_DIM}, got {n}")
    boxes = np.full(n, box, dtype=np.int64) if np.isscalar(box) else np.asarray(box, dtype=np.int64)
    if boxes.shape != (n,) or np.any(boxes < 1):
        raise ValueError("box must be >= 1 in every coordinate")
    radius = _radius_box(r)
    eff = np.minimum(boxes, radius) if clip_to_radius else boxes.copy()
    eff = np.maximum(eff, 0)

    # vectorise over trailing coordinates, loop over the leading ones
    split = n
    size = 1
    while split > 0 and size * (2 * int(eff[split - 1]) + 1) <= 1 << 18:
        split -= 1
        size *= 2 * int(eff[split]) + 1
    tail_ranges = [np.arange(-b, b + 1) for b in eff[split:]]
    if tail_ranges:
        grid = np.stack([g.ravel() for g in np.meshgrid(*tail_ranges, indexing="ij")])
    else:
        grid = np.zeros((0, 1), dtype=np.int64)
    tail = r[:, split:] @ grid.astype(float)
    tail_zero = ~np.any(grid, axis=0)

    best_sq = math.inf
    best = None
    for lead in itertools.product(*(range(-b, b + 1) for b in eff[:split])):
        lead_vec = np.asarray(lead, dtype=float)
        y = tail + (r[:, :split] @ lead_vec)[:, None]
        sq = np.einsum("ij,ij->j", y, y)
        if not any(lead):
            sq[tail_zero] = math.inf
        j = int(np.argmin(sq))
        if sq[j] < best_sq:
            best_sq = float(sq[j])
            best = list(lead) + [int(v) for v in grid[:, j]]
    if best is None:
        raise ValueError("empty search box")
    x = normalize_sign(intlat.int_vector(best))
    binding = boxes < radius
    if np.any((np.abs(np.asarray(best)) >= boxes) & binding):
        warnings.warn("brute-force minimiser touches the search box", BoxTooSmall, stacklevel=2)
    return SvpSolution(x, lattice_norm(r, x), int(np.prod(2 * eff + 1)))


def theorem1_bound(n_sub: int, i: int, delta: float = 1.0) -> float:
    """Bound on ``|z_i|`` for the SVP solution on an LLL-reduced block.

    ``n_sub`` is the block dimension and ``i`` is 1-based.
    """
    delta = check_delta(delta)
    if n_sub < 1 or not 1 <= i <= n_sub:
        raise ValueError(f"need 1 <= i <= n_sub, got i={i}, n_sub={n_sub}")
    return (4.0 / (4.0 * delta - 1.0)) ** ((n_sub - 1) / 2.0) * 2.0 ** (n_sub - i)


def entry_bound_box(n_sub: int, delta: float = 1.0) -> list[int]:
    """Integer per-coordinate box implied by ``theorem1_bound``."""
    return [max(1, math.floor(theorem1_bound(n_sub, i, delta) * (1 + 1e-12))) for i in range(1, n_sub + 1)]


def check_entry_bound(z: Sequence[int], delta: float = 1.0) -> bool:
    m = len(z)
    return all(abs(int(v)) <= theorem1_bound(m, i, delta) * (1.0 + 1e-12) for i, v in enumerate(z, 1))


def lll_aided_svp(
    r_block,
    delta: float = 1.0,
    *,
    node_cap: int = DEFAULT_NODE_CAP,
    deadline: float | None = None,
) -> LllAidedSvp:
    """LLL-reduce ``r_block`` and enumerate on the reduced factor.

    Only an exactly zero diagonal is rejected up front, so badly conditioned
    blocks are still attempted.
    """
    delta = check_delta(delta)
    rhat = _validate_triangular(r_block).copy()
    zhat = intlat.identity(rhat.shape[0])
    swaps = lll_inplace(rhat, zhat, delta, 0, deadline)
    sol = enumerate_shortest(rhat, node_cap=node_cap, deadline=deadline)
    z = sol.x
    assert_bound(z, delta)
    return LllAidedSvp(zhat.dot(z), z, zhat, rhat, sol.norm, sol.nodes, swaps)


def assert_bound(z: Sequence[int], delta: float) -> None:
    """Raise ``BoundViolation`` if bound checking is on and ``z`` breaks it."""
    if _check_bounds and not check_entry_bound(z, delta):
        raise BoundViolation(f"z = {list(z)} breaks the entry bound at delta={delta}")
