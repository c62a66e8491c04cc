import numpy as np
import pytest

from twinbeam.calibration import calibrated_convention
from twinbeam.grid import build_default_grid
from twinbeam.jsa import PdcModel, build_jsa
from twinbeam.schmidt import decompose


@pytest.fixture(scope="session")
def paper_model():
    return PdcModel.paper_defaults(units=calibrated_convention())


@pytest.fixture(scope="session")
def paper_grid(paper_model):
    return build_default_grid(paper_model.omega_p, paper_model.sigma_p, 1000)


@pytest.fixture(scope="session")
def paper_jsa(paper_model, paper_grid):
    return build_jsa(paper_model, paper_grid)


@pytest.fixture(scope="session")
def paper_spectrum(paper_jsa, paper_model):
    return decompose(paper_jsa, paper_model.zeta)


@pytest.fixture
def rng():
    return np.random.default_rng(20240917)
