"""Reference simulation parameters (28 GHz urban deployment defaults)."""

import math

from .analysis import ChannelParams, CoverageSpec, Linear, NetworkParams, Nonlinear

DEFAULT_THETA0 = math.pi / 12

# Spacing-to-wavelength ratio of the comparison array.  Recorded for
# completeness; the array-factor gain model is written directly in the
# spatial angle and does not consume it.
DEFAULT_KAPPA = 0.25


def reference_channel() -> ChannelParams:
    return ChannelParams(
        alpha_l=2.1,
        alpha_n=2.92,
        c_l=10.0 ** (-61.4 / 10.0),
        c_n=10.0 ** (-72.0 / 10.0),
        m_l=3,
        m_n=2,
        beta=0.0071,
    )


def reference_network(lambda_t: float = 5e-4) -> NetworkParams:
    return NetworkParams(lambda_t=lambda_t, r0=50.0, pt=10.0)


def reference_nonlinear() -> Nonlinear:
    return Nonlinear(pm=0.01, pa=1500.0, pb=0.0022)


def reference_linear() -> Linear:
    return Linear(zeta=1.0)


def reference_coverage_spec() -> CoverageSpec:
    return CoverageSpec(k_order=5)
