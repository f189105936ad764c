"""Beam-alignment error models.

The pointing error of an aligned link is a zero-mean truncated Gaussian on
[-pi, pi); non-associated links see a uniformly random orientation.  A
perfectly aligned beam is represented by its own variant rather than by a
zero-sigma Gaussian, so no formula ever divides by sigma.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Union

import numpy as np
import scipy.special

from . import specfun

_SQRT2 = math.sqrt(2.0)


@dataclass(frozen=True)
class Perfect:
    """Degenerate error law: the beam always points exactly on target."""


@dataclass(frozen=True)
class TruncatedGaussian:
    """Zero-mean Gaussian error truncated to [-pi, pi)."""

    sigma: float

    def __post_init__(self):
        if self.sigma <= 0.0:
            raise ValueError("sigma must be positive; use Perfect for sigma=0")


@dataclass(frozen=True)
class Uniform:
    """Orientation uniformly distributed over [-pi, pi)."""


BaeModel = Union[Perfect, TruncatedGaussian, Uniform]


def gaussian_bae(sigma: float) -> BaeModel:
    """Truncated-Gaussian error of the given spread; sigma=0 means Perfect."""
    if sigma < 0.0:
        raise ValueError("sigma must be non-negative")
    return Perfect() if sigma == 0.0 else TruncatedGaussian(sigma)


def _check_angle(psi: float) -> None:
    if not -math.pi <= psi < math.pi:
        raise ValueError(f"angle {psi!r} outside [-pi, pi)")


def bae_pdf(model: BaeModel, psi: float) -> float:
    """Density of the pointing error at ``psi`` (1/rad)."""
    _check_angle(psi)
    if isinstance(model, Uniform):
        return 1.0 / (2.0 * math.pi)
    if isinstance(model, TruncatedGaussian):
        s = model.sigma
        norm = math.sqrt(2.0 * math.pi) * s * specfun.erf(math.pi / (_SQRT2 * s))
        return math.exp(-psi * psi / (2.0 * s * s)) / norm
    if isinstance(model, Perfect):
        raise ValueError("perfect alignment is a point mass at 0; it has no density")
    raise TypeError(f"unsupported BAE model {type(model)!r}")


def sample_bae(model: BaeModel, rng: np.random.Generator, size: int | None = None):
    """Draw pointing errors from ``model``.

    Returns a scalar when ``size`` is None, else an ndarray of draws.  The
    truncated Gaussian uses the exact inverse CDF.
    """
    n = 1 if size is None else size
    if isinstance(model, Perfect):
        out = np.zeros(n)
    elif isinstance(model, Uniform):
        out = rng.uniform(-math.pi, math.pi, n)
    elif isinstance(model, TruncatedGaussian):
        s = model.sigma
        cap = scipy.special.erf(math.pi / (_SQRT2 * s))
        u = rng.random(n)
        out = _SQRT2 * s * scipy.special.erfinv((2.0 * u - 1.0) * cap)
        # guard the measure-zero endpoints against roundoff outside [-pi, pi)
        out = np.clip(out, -math.pi, np.nextafter(math.pi, 0.0))
    else:
        raise TypeError(f"unsupported BAE model {type(model)!r}")
    return float(out[0]) if size is None else out


def mainlobe_prob(model: BaeModel, theta0: float) -> float:
    """Probability that the error stays within the mainlobe half-width."""
    if not 0.0 < theta0 < math.pi:
        raise ValueError("theta0 must lie in (0, pi)")
    if isinstance(model, Perfect):
        return 1.0
    if isinstance(model, Uniform):
        return theta0 / math.pi
    if isinstance(model, TruncatedGaussian):
        s = model.sigma
        return specfun.erf(theta0 / (_SQRT2 * s)) / specfun.erf(math.pi / (_SQRT2 * s))
    raise TypeError(f"unsupported BAE model {type(model)!r}")
