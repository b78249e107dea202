import math
import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from trimode import (
    SystemParams,
    diffusion_matrix,
    drift_matrix,
    steady_state_covariance,
    steady_state_mean_fields,
)

TWO_PI = 2.0 * math.pi


def reference_params(**overrides) -> SystemParams:
    """Baseline device parameters (Q_m = 597000, Delta = -omega_m, 0.27 W)."""
    defaults = dict(
        omega_m=TWO_PI * 70e6,
        kappa_m=TWO_PI * 70e6 / (2.0 * 597000.0),
        kappa_F=TWO_PI * 7e6,
        kappa_S=TWO_PI * 7e6,
        g_F=TWO_PI * 1.2e3,
        chi=TWO_PI * 700.0,
        Delta=-TWO_PI * 70e6,
        T_env=0.8,
        lambda_F=1554e-9,
        P_in=0.27,
    )
    defaults.update(overrides)
    return SystemParams(**defaults)


@pytest.fixture(scope="session")
def table1_params() -> SystemParams:
    return reference_params()


@pytest.fixture(scope="session")
def table1_state(table1_params):
    """(fields, A, D, V) at the reference point."""
    fields = steady_state_mean_fields(table1_params)
    A = drift_matrix(table1_params, fields)
    D = diffusion_matrix(table1_params)
    V = steady_state_covariance(A, D)
    return fields, A, D, V


CONFIG_TABLE1 = """\
omega_m_hz = 70e6
q_m = 597000
kappa_f_hz = 7e6
kappa_s_hz = 7e6
g_f_hz = 1.2e3
chi_hz = 700.0
delta_hz = -70e6
t_env_k = 0.8
lambda_f_m = 1554e-9
p_in_w = 0.27
detector_bandwidth_hz = 500e6
"""


@pytest.fixture
def table1_config(tmp_path):
    path = tmp_path / "table1.toml"
    path.write_text(CONFIG_TABLE1)
    return str(path)
