import pathlib
import sys

import numpy as np
import pytest

sys.path.insert(0, str(pathlib.Path(__file__).resolve().parent))

from fridge_qpc.config import (  # noqa: E402
    FIG2_DOT,
    FIG2_GAMMA_M,
    FIG2_LEAD_L,
    FIG2_LEAD_R,
    fig3_qpc_params,
    preset_fig2_point,
)


@pytest.fixture(scope="session")
def fig2_dot():
    return FIG2_DOT


@pytest.fixture(scope="session")
def fig2_leads():
    return FIG2_LEAD_L, FIG2_LEAD_R


@pytest.fixture(scope="session")
def fig2_config():
    return preset_fig2_point(FIG2_GAMMA_M)


@pytest.fixture(scope="session")
def fig3_detector():
    """Calibrated detector at the reference operating point (cached: the
    calibration root-find hits the quadrature stack)."""
    return fig3_qpc_params()


@pytest.fixture()
def rng():
    return np.random.default_rng(20240817)
