"""Shared fixtures: the default low-loss medium, its lossless twin and a seeded generator"""

import numpy as np
import pytest

from dispersion.models import LorentzMedium
from utils.errors import SYSTEM_LOGS


@pytest.fixture
def medium() -> LorentzMedium:
    return LorentzMedium(eps_s=5.25, eps_inf=2.25, gamma_hat=0.01, omega_1=1.0)


@pytest.fixture
def lossless(medium) -> LorentzMedium:
    return medium.lossless()


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(1234)


@pytest.fixture(autouse=True)
def _clear_system_logs():
    SYSTEM_LOGS.clear()
    yield
    SYSTEM_LOGS.clear()
