import numpy as np
import pytest

from polariton_eit import (
    DeviceParams,
    LambdaConfig,
    PolaritonDrive,
    build_polaritons,
    to_angular,
)


@pytest.fixture(scope="session")
def device():
    # published operating point: zero-photon line at 5.648 GHz
    return DeviceParams.from_zero_photon_transition(
        to_angular(5.648e9),
        chi=to_angular(1.54e6),
        omega_r=to_angular(6.485e9),
        gamma_q=1.0 / 35e-6,
        gamma_c=to_angular(0.82e6),
        line_length_l=0.0103,
        coupling_g=to_angular(74e6),
        anharmonicity=to_angular(262.5e6),
    )


@pytest.fixture(scope="session")
def drive():
    return PolaritonDrive(omega_d=to_angular(5.6466e9), rabi=to_angular(1.46e6))


@pytest.fixture(scope="session")
def system(device, drive):
    return build_polaritons(device, drive)


@pytest.fixture(scope="session")
def lambda_measured():
    """Lambda config with the independently measured decay rates."""
    return LambdaConfig(
        omega_13=to_angular(6.4850e9),
        omega_23=to_angular(6.4828e9),
        gamma_31=to_angular(0.35e6),
        gamma_32=to_angular(0.47e6),
        gamma_21=to_angular(2.74e3),
        probe_rabi=to_angular(62e3),
        control_rabi=0.0,
        omega_p=to_angular(6.4850e9),
        omega_c=to_angular(6.4828e9),
    )


@pytest.fixture
def rng():
    return np.random.default_rng(1234)
