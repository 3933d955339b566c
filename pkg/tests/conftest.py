import pytest

from ringfwm import RingParams

# Reference device: R=5 um silicon ring, measured loaded Q 7900,
# gamma from the stimulated fit, pump on the 1558.5 nm resonance.
REFERENCE_RING = dict(radius_m=5e-6, q_factor=7900.0, n_eff=2.47,
                  pump_wavelength_m=1558.5e-9, gamma_per_w_per_m=190.0,
                  min_transmission=0.01)


@pytest.fixture
def ring():
    return RingParams(**REFERENCE_RING)
