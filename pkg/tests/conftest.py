import pytest

from decohere.models.physical import PhysicalParams
from decohere.services.density import gaussian_packet


@pytest.fixture
def params():
    """Strong coupling so that decoherence is visible on short grids."""
    return PhysicalParams(alpha=1.0, omega_uv=1.0, omega_ir=0.1, kinetic_scale_chi=2.0)


@pytest.fixture
def packet16():
    return gaussian_packet(0.0, 0.03, 16, 3.0)


@pytest.fixture
def packet2():
    return gaussian_packet(0.0, 0.05, 2, 1.0)
