"""Directional antenna gain models.

Three patterns are supported: a Gaussian mainlobe with constant sidelobe
floor (the workhorse of the analytic results), a flat-top pattern matched to
the Gaussian one for comparison runs, and the exact array factor of a
uniform linear array.  All orientation angles live on [-pi, pi);
:func:`wrap_angle` performs the wraparound for callers.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Union

import numpy as np

# Empirical mainlobe constants for the Gaussian model: the mainlobe
# half-width is 2.6x the half-power half-width, which fixes the sidelobe
# level at 10**(-2.028) and the peak-gain denominator coefficient below.
WIDTH_RATIO = 2.6
SIDELOBE_EXP = 2.028
_GM_DENOM_COEF = 42.6443
_ULA_WIDTH_CONST = 5.64

# Recommended validity range of the empirical constants.
THETA0_MIN = math.pi / 24
THETA0_MAX = math.pi / 6


def wrap_angle(theta: float) -> float:
    """Map an angle to the canonical interval [-pi, pi)."""
    return (theta + math.pi) % (2.0 * math.pi) - math.pi


def _check_angle(theta: float) -> None:
    if not -math.pi <= theta < math.pi:
        raise ValueError(f"angle {theta!r} outside [-pi, pi); wrap it first")


@dataclass(frozen=True)
class GaussianPattern:
    """Gaussian mainlobe over a constant sidelobe floor.

    theta0     mainlobe half-width (rad)
    theta3db   half-power half-width (rad), theta0 / 2.6
    eta        mainlobe decay constant (1/rad^2)
    gm         peak mainlobe gain (linear)
    gs         sidelobe gain (linear), continuous with the mainlobe edge
    g          normalized sidelobe gain gs/gm
    """

    theta0: float
    theta3db: float
    eta: float
    gm: float
    gs: float
    g: float


@dataclass(frozen=True)
class FlatTopPattern:
    """Two-level pattern: ``gm`` inside the half-power width, ``gs`` outside."""

    gm: float
    gs: float
    theta3db: float

    def __post_init__(self):
        if not self.gm > self.gs > 0.0:
            raise ValueError("flat-top pattern requires gm > gs > 0")
        if self.theta3db <= 0.0:
            raise ValueError("theta3db must be positive")


@dataclass(frozen=True)
class UlaPattern:
    """Array factor of a uniform linear array with ``na`` elements."""

    na: int

    def __post_init__(self):
        if self.na < 2:
            raise ValueError("ULA needs at least two elements")


AntennaPattern = Union[GaussianPattern, FlatTopPattern, UlaPattern]


def gaussian_from_beamwidth(theta0: float) -> GaussianPattern:
    """Build the Gaussian pattern determined by its mainlobe half-width."""
    if theta0 <= 0.0:
        raise ValueError("theta0 must be positive")
    if not THETA0_MIN - 1e-12 <= theta0 <= THETA0_MAX + 1e-12:
        warnings.warn(
            f"theta0={theta0:.4f} rad outside the empirical fit range "
            f"[{THETA0_MIN:.4f}, {THETA0_MAX:.4f}]; derived constants extrapolate",
            stacklevel=2,
        )
    theta3db = theta0 / WIDTH_RATIO
    eta = 0.3 * math.log(10.0) / theta3db**2
    gm = math.pi * 10.0**SIDELOBE_EXP / (_GM_DENOM_COEF * theta0 + math.pi)
    gs = gm * math.exp(-eta * theta0**2)
    return GaussianPattern(theta0=theta0, theta3db=theta3db, eta=eta, gm=gm, gs=gs, g=gs / gm)


def flat_top_matching(pattern: GaussianPattern) -> FlatTopPattern:
    """Flat-top pattern with the same peak gain and half-power width."""
    return FlatTopPattern(gm=pattern.gm, gs=pattern.gs, theta3db=pattern.theta3db)


def ula_for_beamwidth(theta0: float) -> UlaPattern:
    """ULA whose mainlobe width matches a 2*theta0 beam (nearest element count)."""
    if theta0 <= 0.0:
        raise ValueError("theta0 must be positive")
    return UlaPattern(na=round(_ULA_WIDTH_CONST / theta0))


def _ula_gain(na: int, theta: float) -> float:
    half = 0.5 * theta
    s = math.sin(half)
    if abs(s) < 1e-8:
        # removable singularity at the array peak
        return float(na)
    num = math.sin(na * half)
    return num * num / (na * s * s)


def gain(pattern: AntennaPattern, theta: float) -> float:
    """Linear gain of ``pattern`` at orientation ``theta`` in [-pi, pi)."""
    _check_angle(theta)
    if isinstance(pattern, GaussianPattern):
        if abs(theta) <= pattern.theta0:
            return pattern.gm * math.exp(-pattern.eta * theta * theta)
        return pattern.gs
    if isinstance(pattern, FlatTopPattern):
        return pattern.gm if abs(theta) <= pattern.theta3db else pattern.gs
    if isinstance(pattern, UlaPattern):
        return _ula_gain(pattern.na, theta)
    raise TypeError(f"unsupported pattern type {type(pattern)!r}")


def normalized_gain(pattern: GaussianPattern, theta: float) -> float:
    """Gain divided by the peak; lies in [g, 1] for the Gaussian pattern."""
    if not isinstance(pattern, GaussianPattern):
        raise TypeError("normalized_gain is defined for the Gaussian pattern")
    return gain(pattern, theta) / pattern.gm


def gain_values(pattern: AntennaPattern, theta: np.ndarray) -> np.ndarray:
    """Vectorized :func:`gain` for pre-wrapped angle arrays."""
    theta = np.asarray(theta, dtype=float)
    if isinstance(pattern, GaussianPattern):
        inside = np.abs(theta) <= pattern.theta0
        return np.where(inside, pattern.gm * np.exp(-pattern.eta * theta * theta), pattern.gs)
    if isinstance(pattern, FlatTopPattern):
        return np.where(np.abs(theta) <= pattern.theta3db, pattern.gm, pattern.gs)
    if isinstance(pattern, UlaPattern):
        half = 0.5 * theta
        s = np.sin(half)
        tiny = np.abs(s) < 1e-8
        safe = np.where(tiny, 1.0, s)
        vals = np.sin(pattern.na * half) ** 2 / (pattern.na * safe * safe)
        return np.where(tiny, float(pattern.na), vals)
    raise TypeError(f"unsupported pattern type {type(pattern)!r}")


def peak_gain(pattern: AntennaPattern) -> float:
    """Boresight gain of any supported pattern."""
    if isinstance(pattern, (GaussianPattern, FlatTopPattern)):
        return pattern.gm
    return float(pattern.na)
