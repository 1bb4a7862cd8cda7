import numpy as np
import pytest

from tscarma import CarmaSpec, PCTSParams, PGTSParams, PTSSParams, make_pcts, make_pgts, make_ptss


@pytest.fixture
def paper_carma():
    return CarmaSpec(a=(3.0, 2.0), b=(3.0, 1.0))


@pytest.fixture
def ptss_half():
    return make_ptss(PTSSParams(alpha=0.5, p=1.0, delta=1.0, lam=1.0))


@pytest.fixture
def pcts_sym():
    return make_pcts(
        PCTSParams(alpha=1.4, p=1.0, delta_plus=1.0, delta_minus=1.0, lambda_plus=1.0, lambda_minus=1.0)
    )


@pytest.fixture
def pgts_std():
    return make_pgts(PGTSParams(alpha=0.5, p=1.0, beta=3.0, lam=1.0))


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)
