"""KZ and LLL lattice reduction with exact unimodular bookkeeping."""

from .errors import *  # noqa: F401,F403
from .intlat import det_exact, ext_gcd, is_unimodular, unimodular_from_pair
from .kz import KzResult, StepRecord, expand_basis, is_kz_reduced, kz_reduce_baseline, kz_reduce_modified
from .lll import QrzFactorization, is_lll_reduced, is_size_reduced, lll_reduce, size_reduce
from .matcore import GivensRotation, apply_givens_rows, cond2, givens, qr_factorize
from .svp import SvpSolution, brute_force_svp, enumerate_shortest, lll_aided_svp, theorem1_bound

__version__ = "0.1.0"
