"""Test-instance generators and the timing/quality benchmark harness.

Instances are drawn from numpy's ``PCG64`` bit generator with normal
variates from numpy's ziggurat sampler (``Generator.standard_normal``). A
trial's seed is ``instance_seed(base, case, n, trial)``: the first 8 bytes
(little endian) of ``blake2b("{base}:{case}:{n}:{trial}")``, so any single
trial can be regenerated on its own.
"""

from __future__ import annotations

import csv
import hashlib
import logging
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, fields
from typing import Iterable, Sequence

import numpy as np

from . import intlat
from .errors import ConfigInvalid, DeadlineExceeded, KzredError
from .kz import ALGORITHMS, is_kz_reduced
from .lll import is_lll_reduced
from .matcore import qr_factorize
from .textio import read_matrix

log = logging.getLogger(__name__)

CASES = ("case1", "case2", "example", "file")
STATUSES = ("ok", "timeout", "aborted")
CSV_HEADER = ["case", "n", "trial", "algorithm", "seconds", "status", "max_entry", "unimodular", "lll_ok", "kz_ok"]
KZ_CHECK_MAX_N = 10

PAPER_EXAMPLE = (
    (10.6347, -66.2715, 9.3046, 17.5349, 24.9625),
    (0.0, 8.6759, -4.7536, -3.9379, -2.3318),
    (0.0, 0.0, 0.3876, 0.1296, -0.2879),
    (0.0, 0.0, 0.0, 0.0133, -0.0082),
    (0.0, 0.0, 0.0, 0.0, 0.0015),
)


def paper_example() -> np.ndarray:
    """The 5x5 ill-conditioned upper-triangular test basis."""
    return np.array(PAPER_EXAMPLE, dtype=float)


def _rng(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(seed))


def gen_case1(n: int, seed: int) -> np.ndarray:
    """``n x n`` matrix of independent N(0, 1) entries."""
    if n < 2:
        raise ValueError("n must be >= 2")
    return _rng(seed).standard_normal((n, n))


def case2_diagonal(n: int) -> np.ndarray:
    i = np.arange(1, n + 1)
    return 10.0 ** (3.0 * (n / 2.0 - i) / (n - 1))


def gen_case2(n: int, seed: int) -> np.ndarray:
    """``U D V^T`` with random orthogonal ``U, V`` and condition number 1e3."""
    if n < 2:
        raise ValueError("n must be >= 2")
    rng = _rng(seed)
    u, _ = np.linalg.qr(rng.standard_normal((n, n)))
    v, _ = np.linalg.qr(rng.standard_normal((n, n)))
    return (u * case2_diagonal(n)) @ v.T


def instance_seed(base: int, case: str, n: int, trial: int) -> int:
    digest = hashlib.blake2b(f"{base}:{case}:{n}:{trial}".encode(), digest_size=8).digest()
    return int.from_bytes(digest, "little")


@dataclass
class BenchConfig:
    case: str
    n_values: Sequence[int] = (2,)
    trials: int = 1
    seed: int = 0
    timeout: float = 60.0
    delta: float = 1.0
    algorithms: Sequence[str] = ("kz-baseline", "kz-modified")
    jobs: int = 1
    path: str | None = None

    def validate(self) -> None:
        if self.case not in CASES:
            raise ConfigInvalid(f"unknown case {self.case!r}")
        if self.case == "file" and not self.path:
            raise ConfigInvalid("case 'file' needs a path")
        if self.trials < 1:
            raise ConfigInvalid("trials must be >= 1")
        if not self.timeout > 0:
            raise ConfigInvalid("timeout must be positive")
        if not self.n_values or any(n < 2 for n in self.n_values):
            raise ConfigInvalid("every n must be >= 2")
        if not 0.25 < self.delta <= 1.0:
            raise ConfigInvalid("delta must lie in (1/4, 1]")
        if not self.algorithms or any(a not in ALGORITHMS for a in self.algorithms):
            raise ConfigInvalid(f"algorithms must be a subset of {sorted(ALGORITHMS)}")
        if self.jobs < 1:
            raise ConfigInvalid("jobs must be >= 1")


@dataclass
class BenchRecord:
    case: str
    n: int
    trial: int
    algorithm: str
    seconds: float
    status: str
    max_entry: int
    unimodular: bool
    lll_ok: bool
    kz_ok: bool | None


def make_instance(case: str, n: int, seed: int, path: str | None = None) -> np.ndarray:
    if case == "case1":
        return gen_case1(n, seed)
    if case == "case2":
        return gen_case2(n, seed)
    if case == "example":
        return paper_example()
    if case == "file":
        return read_matrix(path)
    raise ConfigInvalid(f"unknown case {case!r}")


def _tasks(cfg: BenchConfig) -> list[tuple]:
    tasks = []
    if cfg.case in ("example", "file"):
        a = make_instance(cfg.case, 0, 0, cfg.path)
        for alg in sorted(cfg.algorithms):
            tasks.append((cfg.case, a.shape[1], 0, alg, cfg.seed, cfg.timeout, cfg.delta, cfg.path))
        return tasks
    for n in sorted(set(cfg.n_values)):
        for trial in range(cfg.trials):
            for alg in sorted(cfg.algorithms):
                tasks.append((cfg.case, n, trial, alg, cfg.seed, cfg.timeout, cfg.delta, cfg.path))
    return tasks


def run_trial(case: str, n: int, trial: int, algorithm: str, seed: int, timeout: float, delta: float, path=None) -> BenchRecord:
    """Run one algorithm on one generated instance and verify the result."""
    a = make_instance(case, n, instance_seed(seed, case, n, trial), path)
    _, r = qr_factorize(a)
    steps = []
    start = time.perf_counter()
    deadline = time.monotonic() + timeout
    try:
        res = ALGORITHMS[algorithm](r, delta, deadline=deadline, on_step=lambda rec, *_: steps.append(rec))
        status = "ok"
    except DeadlineExceeded:
        res, status = None, "timeout"
    except (KzredError, ArithmeticError, np.linalg.LinAlgError) as exc:
        log.warning("%s n=%d trial=%d %s aborted: %s", case, n, trial, algorithm, exc)
        res, status = None, "aborted"
    seconds = round(time.perf_counter() - start, 6)
    max_entry = max((s.max_entry for s in steps), default=0)
    if res is None:
        return BenchRecord(case, n, trial, algorithm, seconds, status, max_entry, False, False, None)

    unimodular = intlat.is_unimodular(res.Z)
    lll_ok = is_lll_reduced(res.R_bar, delta)
    kz_ok = _kz_check(res.R_bar) if n <= KZ_CHECK_MAX_N else None
    if not unimodular:
        status = "aborted"
    return BenchRecord(case, n, trial, algorithm, seconds, status, max_entry, unimodular, lll_ok, kz_ok)


def _kz_check(r: np.ndarray) -> bool:
    try:
        return is_kz_reduced(r)
    except (KzredError, ArithmeticError, np.linalg.LinAlgError):
        return False


def _run_task(task: tuple) -> BenchRecord:
    return run_trial(*task)


def run_benchmark(cfg: BenchConfig) -> list[BenchRecord]:
    """Run every (n, trial, algorithm) combination of ``cfg``.

    Timed-out and aborted runs are recorded, not resampled. With
    ``cfg.jobs > 1`` trials run in worker processes, which adds timing
    noise; ``jobs=1`` gives the cleanest timings.
    """
    cfg.validate()
    tasks = _tasks(cfg)
    if cfg.jobs == 1:
        records = [_run_task(t) for t in tasks]
    else:
        with ProcessPoolExecutor(max_workers=cfg.jobs) as pool:
            records = list(pool.map(_run_task, tasks))
    return sort_records(records)


def sort_records(records: Iterable[BenchRecord]) -> list[BenchRecord]:
    return sorted(records, key=lambda r: (r.case, r.n, r.trial, r.algorithm))


def mean_seconds(records: Iterable[BenchRecord], algorithm: str, cap: float) -> float:
    """Mean wall time of ``algorithm``, counting each timeout at ``cap``."""
    times = [cap if r.status == "timeout" else r.seconds for r in records if r.algorithm == algorithm]
    return math.fsum(times) / len(times) if times else math.nan


def _fmt(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if v is None:
        return ""
    if isinstance(v, float):
        return f"{v:.6f}"
    return str(v)


def write_csv(records: Iterable[BenchRecord], path) -> None:
    """Write records in stable order; ``path`` may also be an open text file."""
    if hasattr(path, "write"):
        _write_rows(records, path)
        return
    with open(path, "w", newline="") as fh:
        _write_rows(records, fh)


def _write_rows(records: Iterable[BenchRecord], fh) -> None:
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(CSV_HEADER)
    for rec in sort_records(records):
        w.writerow([_fmt(getattr(rec, f)) for f in CSV_HEADER])


def _parse_bool(s: str) -> bool | None:
    return {"true": True, "false": False, "": None}[s]


def read_csv(path) -> list[BenchRecord]:
    types = {f.name: f.type for f in fields(BenchRecord)}
    out = []
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames != CSV_HEADER:
            raise ValueError("unexpected CSV header")
        for row in reader:
            kw = {}
            for name in CSV_HEADER:
                s = row[name]
                t = types[name]
                if t in ("int",):
                    kw[name] = int(s)
                elif t == "float":
                    kw[name] = float(s)
                elif t.startswith("bool"):
                    kw[name] = _parse_bool(s)
                else:
                    kw[name] = s
            out.append(BenchRecord(**kw))
    return out
