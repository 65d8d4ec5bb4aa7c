import warnings

import numpy as np
import pytest
from conftest import case1_r, lll_r

from kzred.errors import BoxTooSmall, DimensionTooLarge, InvalidDelta, SearchAborted, ZeroDiagonal
from kzred.intlat import identity, int_matrix, to_float, unimodular_from_pair, vector_gcd
from kzred.svp import (
    brute_force_svp,
    check_entry_bound,
    enumerate_shortest,
    lattice_norm,
    lll_aided_svp,
    theorem1_bound,
    entry_bound_box,
)


def test_enumerate_unit_lattice():
    sol = enumerate_shortest(np.eye(3))
    assert sol.norm == 1.0
    assert sorted(abs(int(v)) for v in sol.x) == [0, 0, 1]


def test_enumerate_diagonal():
    sol = enumerate_shortest(np.diag([3.0, 1.0, 2.0]))
    assert sol.norm == 1.0
    assert sol.x.tolist() == [0, 1, 0]


def test_enumerate_sign_normalised(rng):
    for t in range(20):
        x = enumerate_shortest(lll_r(5, t)).x
        first = next(int(v) for v in x if v != 0)
        assert first > 0


def test_enumerate_errors():
    with pytest.raises(ZeroDiagonal):
        enumerate_shortest(np.array([[1.0, 2.0], [0.0, 0.0]]))
    r = np.triu(np.ones((6, 6)))
    r[np.diag_indices(6)] = 1e-3
    with pytest.raises(SearchAborted):
        enumerate_shortest(r, node_cap=5)


@pytest.mark.parametrize("n", range(2, 7))
def test_enumerate_matches_brute_force(n):
    for t in range(40):
        r = lll_r(n, 100 * n + t)
        e = enumerate_shortest(r)
        b = brute_force_svp(r, entry_bound_box(n))
        assert e.norm == pytest.approx(b.norm, rel=1e-12)
        assert e.norm == pytest.approx(lattice_norm(r, e.x), rel=1e-12)


def test_enumerate_unreduced_matches_brute_force(rng):
    for _ in range(30):
        r = np.triu(rng.standard_normal((4, 4)))
        r[np.diag_indices(4)] += np.sign(np.diag(r)) * 0.3
        with warnings.catch_warnings():
            warnings.simplefilter("error", BoxTooSmall)
            b = brute_force_svp(r, 40)
        assert enumerate_shortest(r).norm == pytest.approx(b.norm, rel=1e-12)


def test_shortest_norm_invariant_under_unimodular(rng):
    for t in range(20):
        r = case1_r(5, 300 + t)
        z = identity(5)
        for _ in range(6):
            i = int(rng.integers(0, 4))
            p, q = (int(v) for v in rng.integers(-3, 4, size=2))
            if p == q == 0:
                continue
            blk = identity(5)
            blk[i : i + 2, i : i + 2] = unimodular_from_pair(p, q)
            z = z.dot(blk)
        _, r2 = np.linalg.qr(r @ to_float(z))
        assert enumerate_shortest(r).norm == pytest.approx(enumerate_shortest(r2).norm, rel=1e-10)


def test_solution_is_primitive():
    for t in range(30):
        r = lll_r(4, 900 + t)
        assert vector_gcd(enumerate_shortest(r).x) == 1


def test_brute_force_examples():
    assert brute_force_svp(np.eye(2), 2).norm == 1.0
    sol = brute_force_svp(np.diag([5.0, 7.0]), 1)
    assert sol.norm == 5.0 and sol.x.tolist() == [1, 0]
    # a box of 1 hides the true minimiser (-1, 2) here
    skew = np.array([[1.0, 0.45], [0.0, 0.1]])
    with pytest.warns(BoxTooSmall):
        small = brute_force_svp(skew, 1)
    assert small.x.tolist() == [0, 1]
    assert brute_force_svp(skew, 4).x.tolist() == [1, -2]
    r = np.array([[1.0, 0.5], [0.0, 0.1]])
    b = brute_force_svp(r, 3)
    assert b.norm == pytest.approx(0.2) and b.x.tolist() == [1, -2]
    assert b.norm == pytest.approx(enumerate_shortest(r).norm, rel=1e-12)


def test_brute_force_limits():
    with pytest.raises(DimensionTooLarge):
        brute_force_svp(np.eye(9), 1)
    with pytest.raises(ValueError):
        brute_force_svp(np.eye(2), 0)


def test_brute_force_radius_clip_is_sound(rng):
    # clipping must never change the answer relative to the plain box
    for _ in range(20):
        r = np.triu(rng.standard_normal((3, 3)))
        r[np.diag_indices(3)] += np.sign(np.diag(r))
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", BoxTooSmall)
            a = brute_force_svp(r, 6, clip_to_radius=False)
        b = brute_force_svp(r, 6)
        assert a.norm == pytest.approx(b.norm, rel=1e-12)


def test_theorem1_bound_values():
    assert theorem1_bound(1, 1, 1.0) == 1.0
    assert theorem1_bound(3, 3, 1.0) == pytest.approx(4 / 3)
    assert theorem1_bound(3, 1, 1.0) == pytest.approx(16 / 3)
    assert entry_bound_box(3) == [5, 2, 1]
    with pytest.raises(InvalidDelta):
        theorem1_bound(2, 1, 0.2)
    with pytest.raises(ValueError):
        theorem1_bound(2, 3, 1.0)


def test_lll_aided_identity():
    res = lll_aided_svp(np.eye(4), 1.0)
    assert res.norm == 1.0
    assert res.x.tolist() == res.Zhat.dot(res.z).tolist()
    assert lattice_norm(np.eye(4), res.x) == 1.0


@pytest.mark.parametrize("delta", [0.75, 1.0])
def test_lll_aided_contract(delta):
    for t in range(30):
        r = case1_r(5, 40 + t)
        res = lll_aided_svp(r, delta)
        assert res.x.tolist() == res.Zhat.dot(res.z).tolist()
        assert lattice_norm(r, res.x) == pytest.approx(lattice_norm(res.Rhat, res.z), rel=1e-10)
        assert check_entry_bound(res.z, delta)
        assert vector_gcd(res.z) == 1 and vector_gcd(res.x) == 1
        b = brute_force_svp(res.Rhat, entry_bound_box(5, delta))
        assert lattice_norm(r, res.x) == pytest.approx(b.norm, rel=1e-10)


def test_lll_aided_on_case1_matches_brute_force_on_original():
    for t in range(10):
        r = case1_r(5, 60 + t)
        res = lll_aided_svp(r, 1.0)
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", BoxTooSmall)
            b = brute_force_svp(r, 60)
        assert lattice_norm(r, res.x) == pytest.approx(b.norm, rel=1e-10)
