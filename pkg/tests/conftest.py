import numpy as np
import pytest

from kzred import svp
from kzred.bench import gen_case1
from kzred.lll import lll_reduce
from kzred.matcore import qr_factorize


@pytest.fixture(autouse=True)
def _entry_bound_checks():
    with svp.bound_checks():
        yield


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def case1_r(n, seed):
    _, r = qr_factorize(gen_case1(n, seed))
    return r


def lll_r(n, seed, delta=1.0):
    return lll_reduce(case1_r(n, seed), delta).R_bar


# printed outputs of the two KZ algorithms on the 5x5 example
PRINTED_BASELINE_R = np.array(
    [
        [-0.2256, -0.0792, 0.0125, 0, 0],
        [0, 0.2148, -0.0728, -0.0029, -0.0012],
        [0, 0, 0.2145, 0.0527, -0.0211],
        [0, 0, 0, -0.1103, 0.0306],
        [0, 0, 0, 0, 0.6221],
    ]
)
PRINTED_MODIFIED_R = np.array(
    [
        [-0.2256, 0.0792, -0.0126, 0.0028, -0.0621],
        [0, -0.2148, 0.0728, -0.0084, 0.0930],
        [0, 0, 0.2145, 0.0292, -0.0029],
        [0, 0, 0, -0.2320, 0.0731],
        [0, 0, 0, 0, -0.2959],
    ]
)
