import numpy as np
import pytest
from conftest import PRINTED_BASELINE_R, PRINTED_MODIFIED_R, case1_r

from kzred.errors import InvalidDelta, RankDeficient, ZeroDiagonal
from kzred.intlat import det_exact, identity, is_unimodular, to_float
from kzred.lll import is_lll_reduced, is_size_reduced, lll_reduce, round_half_away, size_reduce
from kzred.matcore import qr_factorize, r_factor_matches
from kzred.svp import brute_force_svp


def test_round_half_away():
    assert [round_half_away(v) for v in (0.5, -0.5, 1.5, -2.5, 0.49, 2.0)] == [1, -1, 2, -3, 0, 2]


def test_size_reduce_fixed_point():
    r = np.array([[1.0, 0.3, -0.2], [0.0, 1.0, 0.5], [0.0, 0.0, 2.0]])
    out, z = size_reduce(r)
    assert np.array_equal(out, r)
    assert z.tolist() == identity(3).tolist()


def test_size_reduce_single_step():
    r = np.array([[1.0, 0.6], [0.0, 1.0]])
    # the multiple of column 1 that minimises |r12 - mu * r11|
    best_mu = min(range(-2, 3), key=lambda mu: abs(0.6 - mu))
    out, z = size_reduce(r)
    assert out[0, 1] == pytest.approx(0.6 - best_mu) == pytest.approx(-0.4)
    assert z.tolist() == [[1, -best_mu], [0, 1]]


def test_size_reduce_keeps_lattice_and_diagonal(rng):
    r = np.triu(rng.standard_normal((6, 6)) * 5)
    out, z = size_reduce(r)
    assert is_size_reduced(out)
    assert np.array_equal(np.diag(out), np.diag(r))
    assert np.allclose(r @ to_float(z), out, atol=1e-12 * np.abs(r).max())
    zf = to_float(z)
    assert np.allclose(np.tril(zf, -1), 0) and np.allclose(np.diag(zf), 1)


def test_size_reduce_zero_diagonal():
    with pytest.raises(ZeroDiagonal):
        size_reduce([[0.0, 1.0], [0.0, 1.0]])


def test_lll_identity():
    for delta in (0.3, 0.75, 1.0):
        q = lll_reduce(np.eye(4), delta)
        assert np.array_equal(q.R_bar, np.eye(4))
        assert q.Z.tolist() == identity(4).tolist()


def test_lll_two_by_two_swap():
    r = np.array([[1.0, 0.0], [0.0, 0.1]])
    q = lll_reduce(r, 1.0)
    assert q.swaps >= 1
    assert abs(q.R_bar[0, 0]) == pytest.approx(0.1)
    assert sorted(np.abs(np.diag(q.R_bar))) == pytest.approx([0.1, 1.0])
    assert abs(q.R_bar[0, 0]) == pytest.approx(brute_force_svp(r, 5).norm)


def test_printed_outputs():
    assert not is_lll_reduced(PRINTED_BASELINE_R, 1.0)
    r = PRINTED_BASELINE_R
    assert r[2, 2] ** 2 > r[2, 3] ** 2 + r[3, 3] ** 2
    assert is_size_reduced(PRINTED_MODIFIED_R)
    assert is_lll_reduced(PRINTED_MODIFIED_R, 1.0)


def test_predicates():
    assert is_size_reduced(np.eye(3))
    assert not is_size_reduced(np.array([[1.0, 0.51], [0.0, 1.0]]))
    assert is_lll_reduced(np.eye(3), 1.0)
    assert not is_lll_reduced(np.array([[1.0, 0.0], [0.0, 0.1]]), 1.0)
    with pytest.raises(InvalidDelta):
        is_lll_reduced(np.eye(2), 0.25)


def test_lll_errors():
    with pytest.raises(InvalidDelta):
        lll_reduce(np.eye(2), 1.5)
    with pytest.raises(RankDeficient):
        lll_reduce(np.diag([1.0, 1e-300]), 1.0)


@pytest.mark.parametrize("delta", [0.51, 0.75, 0.99, 1.0])
def test_lll_randomized_suite(delta):
    # 125 instances per delta, 500 in total
    for t in range(125):
        n = 2 + t % 11
        r = case1_r(n, 700 + t)
        q = lll_reduce(r, delta)
        assert is_lll_reduced(q.R_bar, delta)
        assert det_exact(q.Z) in (1, -1)
        assert abs(np.prod(np.diag(q.R_bar))) == pytest.approx(abs(np.prod(np.diag(r))), rel=1e-9)
        _, fresh = qr_factorize(r @ to_float(q.Z))
        assert r_factor_matches(q.R_bar, fresh, 1e-9 * np.linalg.norm(r, 2))
        again = lll_reduce(q.R_bar, delta)
        assert again.Z.tolist() == identity(n).tolist()
        assert again.swaps == 0


def test_lll_output_is_unimodular_on_paper_example():
    from kzred.bench import paper_example

    q = lll_reduce(paper_example(), 1.0)
    assert is_unimodular(q.Z)
    assert is_lll_reduced(q.R_bar, 1.0)
