"""KZ reduction: the baseline expansion algorithm and the modified one.

Both work on an upper-triangular ``R`` and keep ``Q`` implicit. After step
``k`` (0-based) the leading ``k + 1`` diagonal entries are final.

The baseline solves each SVP through LLL but expands the *original*
trailing block with ``x = Zhat z``. The modified algorithm commits the LLL
transform to ``R`` and ``Z`` first and expands the reduced block with ``z``,
skipping the expansion when ``z = +-e1`` and skipping 2x2 steps whose lower
entry is zero.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import intlat, svp
from .errors import DimensionTooLarge, NonPrimitiveVector, RankDeficient, ZeroVector
from .lll import _size_reduce_inplace, check_delta, is_size_reduced, lll_inplace
from .matcore import as_real_matrix, cond2, retriangularize_pair

KZ_RTOL = 1e-8
KZ_VERIFY_MAX_DIM = 10


@dataclass
class StepRecord:
    """What happened at one step of a KZ reduction.

    ``vector`` is the integer vector the expansion was driven by: ``x`` for
    the baseline, ``z`` for the modified algorithm.
    """

    k: int
    vector: np.ndarray
    skipped: bool
    norm: float
    nodes: int
    transforms: int = 0
    swaps: int = 0
    cond: float | None = None

    @property
    def max_entry(self) -> int:
        return max(abs(int(v)) for v in self.vector)


@dataclass
class KzResult:
    R_bar: np.ndarray
    Z: np.ndarray
    per_step: list[StepRecord] = field(default_factory=list)
    algorithm: str = ""

    @property
    def expansions(self) -> int:
        return sum(not s.skipped for s in self.per_step)

    @property
    def max_entry(self) -> int:
        return max((s.max_entry for s in self.per_step), default=0)


StepCallback = Callable[[StepRecord, np.ndarray, np.ndarray], None]


def is_pm_e1(v) -> bool:
    return abs(int(v[0])) == 1 and all(int(t) == 0 for t in v[1:])


def _expand_inplace(r: np.ndarray, z: np.ndarray, v, k: int, skip_zero: bool) -> int:
    """Make ``v`` the first column of the trailing block's transform.

    Eliminates ``v`` from the last entry up with 2x2 unimodular column
    transforms, re-triangularising ``r`` after each. Returns the number of
    transforms applied.
    """
    v = [int(t) for t in v]
    count = 0
    for i in range(len(v) - 2, -1, -1):
        p, q = v[i], v[i + 1]
        if q == 0 and (skip_zero or p == 0):
            continue
        u = intlat.unimodular_from_pair(p, q)
        c = k + i
        z[:, c : c + 2] = z[:, c : c + 2].dot(u)
        r[: c + 2, c : c + 2] = r[: c + 2, c : c + 2] @ intlat.to_float(u)
        retriangularize_pair(r, c)
        v[i] = math.gcd(p, q)
        count += 1
    return count


def _check_vector(v, length: int) -> list[int]:
    v = [int(t) for t in v]
    if len(v) != length:
        raise ValueError(f"vector has length {len(v)}, expected {length}")
    g = math.gcd(*v)
    if g == 0:
        raise ZeroVector("cannot expand the zero vector")
    if g != 1:
        raise NonPrimitiveVector(f"vector entries have gcd {g}")
    return v


def expand_basis(r, z, x, k: int, *, skip_zero: bool = False) -> tuple[np.ndarray, np.ndarray]:
    """Expand ``R[k:, k:] @ x`` to a basis of the trailing lattice (``k`` 0-based)."""
    r = np.triu(as_real_matrix(r))
    z = intlat.int_matrix(z)
    x = _check_vector(x, r.shape[0] - k)
    _expand_inplace(r, z, x, k, skip_zero)
    return r, z


def _prepare(r, delta: float) -> tuple[np.ndarray, np.ndarray, float]:
    delta = check_delta(delta)
    r = as_real_matrix(r)
    if r.shape[0] != r.shape[1]:
        raise ValueError("R must be square upper triangular")
    r = np.triu(r)
    n = r.shape[0]
    tol = n * np.finfo(float).eps * float(np.max(np.abs(r)))
    if np.any(np.abs(np.diag(r)) <= tol):
        raise RankDeficient("R is numerically rank deficient")
    return r, intlat.identity(n), delta


def _block_cond(r: np.ndarray, k: int) -> float:
    try:
        return cond2(r[k:, k:])
    except Exception:
        return math.inf


def kz_reduce_baseline(
    r,
    delta: float = 1.0,
    *,
    trace: bool = False,
    node_cap: int = svp.DEFAULT_NODE_CAP,
    deadline: float | None = None,
    on_step: StepCallback | None = None,
) -> KzResult:
    """KZ reduction expanding ``x`` on the original trailing block."""
    r, z, delta = _prepare(r, delta)
    n = r.shape[0]
    steps = []
    for k in range(n - 1):
        if np.any(np.diag(r)[k:] == 0.0) or not np.all(np.isfinite(r[k:, k:])):
            raise RankDeficient(f"trailing block at step {k + 1} is singular")
        sol = svp.lll_aided_svp(r[k:, k:], delta, node_cap=node_cap, deadline=deadline)
        x = sol.x
        skipped = is_pm_e1(x)
        transforms = 0 if skipped else _expand_inplace(r, z, x, k, skip_zero=False)
        rec = StepRecord(k, x, skipped, sol.norm, sol.nodes, transforms, sol.swaps)
        if trace:
            rec.cond = _block_cond(r, k)
        steps.append(rec)
        if on_step is not None:
            on_step(rec, r, z)
    _size_reduce_inplace(r, z)
    return KzResult(r, z, steps, "kz-baseline")


def kz_reduce_modified(
    r,
    delta: float = 1.0,
    *,
    trace: bool = False,
    node_cap: int = svp.DEFAULT_NODE_CAP,
    deadline: float | None = None,
    on_step: StepCallback | None = None,
) -> KzResult:
    """KZ reduction expanding ``z`` on the LLL-reduced trailing block."""
    r, z, delta = _prepare(r, delta)
    n = r.shape[0]
    steps = []
    for k in range(n - 1):
        swaps = lll_inplace(r, z, delta, lo=k, deadline=deadline)
        sol = svp.enumerate_shortest(r[k:, k:], node_cap=node_cap, deadline=deadline)
        v = sol.x
        svp.assert_bound(v, delta)
        skipped = is_pm_e1(v)
        transforms = 0 if skipped else _expand_inplace(r, z, v, k, skip_zero=True)
        rec = StepRecord(k, v, skipped, sol.norm, sol.nodes, transforms, swaps)
        if trace:
            rec.cond = _block_cond(r, k)
        steps.append(rec)
        if on_step is not None:
            on_step(rec, r, z)
    _size_reduce_inplace(r, z)
    return KzResult(r, z, steps, "kz-modified")


ALGORITHMS = {
    "kz-baseline": kz_reduce_baseline,
    "kz-modified": kz_reduce_modified,
}


def is_kz_reduced(r) -> bool:
    """Size-reduced and every ``|r_ii|`` is the shortest norm of ``R[i:, i:]``."""
    r = np.asarray(r, dtype=float)
    n = r.shape[0]
    if n > KZ_VERIFY_MAX_DIM:
        raise DimensionTooLarge(f"KZ verification limited to n <= {KZ_VERIFY_MAX_DIM}")
    if not is_size_reduced(r):
        return False
    for i in range(n):
        shortest = svp.enumerate_shortest(r[i:, i:]).norm
        if abs(r[i, i]) > (1.0 + KZ_RTOL) * shortest:
            return False
    return True
