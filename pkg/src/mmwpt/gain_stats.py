"""Distributions of normalized antenna gains under random pointing errors.

A single normalized gain is a mixed random variable: a continuous part from
pointing errors inside the mainlobe, plus a point mass at the sidelobe
level.  The product of two independent gains (one per link end) inherits
that structure with two continuous pieces and an atom at the squared
sidelobe level.  Atoms are kept symbolic as (location, mass) pairs so that
moments and Laplace transforms treat them exactly.

Densities with an integrable 1/sqrt(log) edge singularity carry a
``regular_at_hi`` factorization; all integrals against such segments use
the substitution u = sqrt(log(hi/x)), under which the integrand is smooth.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import mpmath as mp
import numpy as np
import scipy.integrate

from . import specfun
from .bae import BaeModel, Perfect, TruncatedGaussian, Uniform, mainlobe_prob, sample_bae
from .patterns import GaussianPattern

_SQRT2 = math.sqrt(2.0)
_MOMENT_DPS = 60


@dataclass(frozen=True)
class DensitySegment:
    """Continuous density piece on [lo, hi].

    ``density`` is the plain density, valid in the open interior.  When
    ``regular_at_hi`` is set, density(x) == regular_at_hi(x) / sqrt(log(hi/x))
    and integration switches to the singularity-free substitution.
    """

    lo: float
    hi: float
    density: Callable[[float], float]
    regular_at_hi: Optional[Callable[[float], float]] = None

    def integrate(self, fn: Callable[[float], float] | None = None,
                  rtol: float = 1e-10, atol: float = 1e-12) -> float:
        """Integral of fn(x) * density(x) over the segment (fn=1 if None)."""
        weight = (lambda x: 1.0) if fn is None else fn
        if self.regular_at_hi is None:
            return specfun.integrate(
                lambda x: weight(x) * self.density(x), self.lo, self.hi,
                rtol=rtol, atol=atol, limit=400,
            )
        hi, reg = self.hi, self.regular_at_hi
        u_max = math.sqrt(math.log(hi / self.lo))

        # the 1/sqrt(log(hi/x)) factor cancels against the Jacobian, leaving
        # dx -> 2*x du; no u factor remains
        def smooth(u: float) -> float:
            x = hi * math.exp(-u * u)
            return 2.0 * x * weight(x) * reg(x)

        return specfun.integrate(smooth, 0.0, u_max, rtol=rtol, atol=atol, limit=400)

    def cumulative_grid(self, n: int = 4096) -> tuple[np.ndarray, np.ndarray]:
        """Ascending knots and cumulative mass from ``lo``, for CDF building."""
        if self.regular_at_hi is None:
            ts = np.linspace(math.log(self.lo), math.log(self.hi), n)
            xs = np.exp(ts)
            vals = np.array([self.density(float(x)) for x in xs]) * xs
            cum = scipy.integrate.cumulative_trapezoid(vals, ts, initial=0.0)
            return xs, cum
        u_max = math.sqrt(math.log(self.hi / self.lo))
        us = np.linspace(u_max, 0.0, n)
        xs = self.hi * np.exp(-us * us)
        vals = 2.0 * xs * np.array([self.regular_at_hi(float(x)) for x in xs])
        cum = -scipy.integrate.cumulative_trapezoid(vals, us, initial=0.0)
        return xs, cum


@dataclass(frozen=True)
class GainDistribution:
    """Mixed law of a (possibly cascaded) normalized gain on (0, 1]."""

    segments: tuple[DensitySegment, ...]
    atoms: tuple[tuple[float, float], ...]
    label: str
    moment_closed_form: Optional[Callable[[float], float]] = None
    _cdf_cache: dict = field(default_factory=dict, compare=False, repr=False)

    def support(self) -> tuple[float, float]:
        los = [s.lo for s in self.segments] + [loc for loc, _ in self.atoms]
        his = [s.hi for s in self.segments] + [loc for loc, _ in self.atoms]
        return min(los), max(his)

    def total_mass(self) -> float:
        seg = sum(s.integrate() for s in self.segments)
        return seg + sum(m for _, m in self.atoms)

    def pdf(self, omega: float) -> float:
        """Continuous-part density at ``omega`` (atoms excluded)."""
        return sum(s.density(omega) for s in self.segments if s.lo <= omega < s.hi)

    def moment(self, z: float, method: str = "auto") -> float:
        """E[X**z]; uses the attached closed form when available."""
        if z <= 0.0:
            raise ValueError("moment exponent must be positive")
        if method not in ("auto", "closed", "quadrature"):
            raise ValueError(f"unknown method {method!r}")
        if method == "closed" and self.moment_closed_form is None:
            raise ValueError(f"{self.label} has no closed-form moment")
        if method in ("auto", "closed") and self.moment_closed_form is not None:
            return self.moment_closed_form(z)
        seg = sum(s.integrate(lambda x: x**z) for s in self.segments)
        return seg + sum(loc**z * m for loc, m in self.atoms)

    def cdf(self, x: np.ndarray | float) -> np.ndarray | float:
        """Right-continuous CDF, vectorized."""
        knots, cums = self._cdf_cache.setdefault("grid", self._build_cdf_grid())
        xs = np.asarray(x, dtype=float)
        cont = np.interp(xs, knots, cums, left=0.0, right=cums[-1])
        out = cont
        for loc, m in self.atoms:
            out = out + m * (xs >= loc)
        if np.isscalar(x) or xs.ndim == 0:
            return float(out)
        return out

    def atom_mass_at(self, x: float) -> float:
        return sum(m for loc, m in self.atoms if loc == x)

    def _build_cdf_grid(self, n: int = 4096) -> tuple[np.ndarray, np.ndarray]:
        knots = [0.0]
        cums = [0.0]
        base = 0.0
        for seg in sorted(self.segments, key=lambda s: s.lo):
            xs, cum = seg.cumulative_grid(n)
            knots.extend(xs.tolist())
            cums.extend((base + cum).tolist())
            base += cum[-1]
        return np.asarray(knots), np.asarray(cums)

    def quadrature_nodes(self, n: int = 96) -> tuple[np.ndarray, np.ndarray]:
        """Discrete (locations, weights) representation for smooth expectations.

        Atoms keep their exact mass; each segment contributes Gauss-Legendre
        nodes in its smooth integration variable.  The weights sum to the
        law's total mass, so E[f(X)] of a smooth f is the weighted node sum.
        Cached; the node count trades accuracy for speed of repeated
        Laplace-transform style expectations.
        """
        key = ("nodes", n)
        if key not in self._cdf_cache:
            gl_x, gl_w = np.polynomial.legendre.leggauss(n)
            locs = [np.array([loc for loc, _ in self.atoms])]
            wts = [np.array([m for _, m in self.atoms])]
            for seg in self.segments:
                if seg.regular_at_hi is None:
                    # integrate in t = log(x): dx -> x dt
                    a, b = math.log(seg.lo), math.log(seg.hi)
                    ts = 0.5 * (b - a) * (gl_x + 1.0) + a
                    xs = np.exp(ts)
                    dens = np.array([seg.density(float(x)) for x in xs])
                    ws = 0.5 * (b - a) * gl_w * dens * xs
                else:
                    u_max = math.sqrt(math.log(seg.hi / seg.lo))
                    us = 0.5 * u_max * (gl_x + 1.0)
                    xs = seg.hi * np.exp(-us * us)
                    reg = np.array([seg.regular_at_hi(float(x)) for x in xs])
                    ws = 0.5 * u_max * gl_w * 2.0 * xs * reg
                locs.append(xs)
                wts.append(ws)
            self._cdf_cache[key] = (np.concatenate(locs), np.concatenate(wts))
        return self._cdf_cache[key]


def ks_distance(samples: np.ndarray, dist: GainDistribution) -> float:
    """Kolmogorov-Smirnov distance of samples against a mixed law.

    Handles atoms exactly: samples falling on an atom location compare the
    empirical left and right limits against the theoretical ones.
    """
    xs, counts = np.unique(np.asarray(samples, dtype=float), return_counts=True)
    n = samples.size
    right = np.cumsum(counts) / n
    left = right - counts / n
    f_right = np.asarray(dist.cdf(xs))
    f_left = f_right.copy()
    for loc, m in dist.atoms:
        hit = xs == loc
        if hit.any():
            f_left[hit] -= m
    return float(max(np.max(np.abs(right - f_right)), np.max(np.abs(left - f_left))))


# ---------------------------------------------------------------------------
# law constructors


def _gauss_constants(pattern: GaussianPattern, sigma: float):
    eta, g = pattern.eta, pattern.g
    pw = 1.0 / (2.0 * eta * sigma * sigma)
    erf_pi = specfun.erf(math.pi / (_SQRT2 * sigma))
    return eta, g, pw, erf_pi


def single_gain_pdf(pattern: GaussianPattern, model: BaeModel) -> GainDistribution:
    """Law of one normalized gain when the pointing error follows ``model``."""
    g = pattern.g
    if isinstance(model, Perfect):
        return GainDistribution((), ((1.0, 1.0),), "single/perfect")
    if isinstance(model, TruncatedGaussian):
        eta, g, pw, erf_pi = _gauss_constants(pattern, model.sigma)
        c1 = math.sqrt(pw / math.pi) / erf_pi

        def density(y: float) -> float:
            return c1 * y ** (pw - 1.0) / math.sqrt(-math.log(y))

        def regular(y: float) -> float:
            return c1 * y ** (pw - 1.0)

        p0 = mainlobe_prob(model, pattern.theta0)
        seg = DensitySegment(g, 1.0, density, regular)
        return GainDistribution((seg,), ((g, 1.0 - p0),), "single/gaussian-bae")
    if isinstance(model, Uniform):
        eta = pattern.eta
        c1 = 1.0 / (2.0 * math.pi * math.sqrt(eta))

        def density(y: float) -> float:
            return c1 / (y * math.sqrt(-math.log(y)))

        def regular(y: float) -> float:
            return c1 / y

        p0 = mainlobe_prob(model, pattern.theta0)
        seg = DensitySegment(g, 1.0, density, regular)
        return GainDistribution((seg,), ((g, 1.0 - p0),), "single/uniform-bae")
    raise TypeError(f"unsupported BAE model {type(model)!r}")


def _arctan_factor(omega: float, g: float) -> float:
    """arctan term shared by both cascaded densities on [g^2, g)."""
    lg = math.log(g)
    num = math.log(omega) - 2.0 * lg
    rad = lg * (math.log(omega) - lg)
    if rad <= 0.0:
        # one-sided limit at the upper edge
        return 0.5 * math.pi
    return math.atan(num / (2.0 * math.sqrt(rad)))


def cascaded_pdf_exact(pattern: GaussianPattern, model: BaeModel) -> GainDistribution:
    """Exact law of the product of the two link-end normalized gains."""
    g = pattern.g
    g2 = g * g
    if isinstance(model, TruncatedGaussian):
        eta, g, pw, erf_pi = _gauss_constants(pattern, model.sigma)
        p0 = mainlobe_prob(model, pattern.theta0)
        c_main = pw / (erf_pi * erf_pi)
        c_arct = 2.0 * pw / (math.pi * erf_pi * erf_pi)
        c_cross = 2.0 * (1.0 - p0) * g ** (-pw) * math.sqrt(pw / math.pi) / erf_pi

        def density_hi(w: float) -> float:
            return c_main * w ** (pw - 1.0)

        def density_lo(w: float) -> float:
            a = c_arct * w ** (pw - 1.0) * _arctan_factor(w, g)
            b = c_cross * w ** (pw - 1.0) / math.sqrt(math.log(g / w))
            return a + b

        def regular_lo(w: float) -> float:
            root = math.sqrt(math.log(g / w))
            return c_arct * w ** (pw - 1.0) * _arctan_factor(w, g) * root + (
                c_cross * w ** (pw - 1.0)
            )

        segs = (
            DensitySegment(g2, g, density_lo, regular_lo),
            DensitySegment(g, 1.0, density_hi),
        )
        return GainDistribution(
            segs, ((g2, (1.0 - p0) ** 2),), "cascade-exact/gaussian-bae"
        )
    if isinstance(model, Uniform):
        eta = pattern.eta
        p0 = mainlobe_prob(model, pattern.theta0)
        c_main = 1.0 / (4.0 * math.pi * eta)
        c_arct = 1.0 / (2.0 * math.pi * math.pi * eta)
        c_cross = (1.0 - p0) / (math.pi * math.sqrt(eta))

        def density_hi(w: float) -> float:
            return c_main / w

        def density_lo(w: float) -> float:
            a = c_arct * _arctan_factor(w, g) / w
            b = c_cross / (w * math.sqrt(math.log(g / w)))
            return a + b

        def regular_lo(w: float) -> float:
            root = math.sqrt(math.log(g / w))
            return (c_arct * _arctan_factor(w, g) * root + c_cross) / w

        segs = (
            DensitySegment(g2, g, density_lo, regular_lo),
            DensitySegment(g, 1.0, density_hi),
        )
        return GainDistribution(
            segs, ((g2, (1.0 - p0) ** 2),), "cascade-exact/uniform-bae"
        )
    raise TypeError("exact cascaded law is defined for Gaussian and Uniform errors")


def cascaded_pdf_approx(pattern: GaussianPattern, model: BaeModel) -> GainDistribution:
    """Tractable approximations of the cascaded law.

    Gaussian errors: the sidelobe events are dropped entirely, leaving a
    single power-law segment on [g, 1] (the law is then slightly
    sub-normalized; callers must not renormalize it, the analytic results
    use it as is).  Uniform errors: the double-mainlobe term is dropped,
    which keeps the cross term, the mainlobe segment and the atom.
    """
    g = pattern.g
    g2 = g * g
    eta = pattern.eta
    if isinstance(model, Perfect):
        return GainDistribution((), ((1.0, 1.0),), "cascade-approx/perfect")
    if isinstance(model, TruncatedGaussian):
        _, _, pw, erf_pi = _gauss_constants(pattern, model.sigma)
        c_main = pw / (erf_pi * erf_pi)

        def density_hi(w: float) -> float:
            return c_main * w ** (pw - 1.0)

        def closed_moment(z: float) -> float:
            return pw * (1.0 - g ** (z + pw)) / ((z + pw) * erf_pi * erf_pi)

        seg = DensitySegment(g, 1.0, density_hi)
        return GainDistribution(
            (seg,), (), "cascade-approx/gaussian-bae", moment_closed_form=closed_moment
        )
    if isinstance(model, Uniform):
        p0 = mainlobe_prob(model, pattern.theta0)
        c_main = 1.0 / (4.0 * math.pi * eta)
        c_cross = (1.0 - p0) / (math.pi * math.sqrt(eta))

        def density_hi(w: float) -> float:
            return c_main / w

        def density_lo(w: float) -> float:
            return c_cross / (w * math.sqrt(math.log(g / w)))

        def regular_lo(w: float) -> float:
            return c_cross / w

        def closed_moment(z: float) -> float:
            return uniform_cascade_moment(pattern, z)

        segs = (
            DensitySegment(g2, g, density_lo, regular_lo),
            DensitySegment(g, 1.0, density_hi),
        )
        return GainDistribution(
            segs,
            ((g2, (1.0 - p0) ** 2),),
            "cascade-approx/uniform-bae",
            moment_closed_form=closed_moment,
        )
    raise TypeError(f"unsupported BAE model {type(model)!r}")


def sample_cascaded(
    pattern: GaussianPattern,
    model: BaeModel,
    rng: np.random.Generator,
    size: int | None = None,
):
    """Draw the product of two independent normalized gains."""
    n = 1 if size is None else size
    psi1 = sample_bae(model, rng, n)
    psi2 = sample_bae(model, rng, n)
    vals = _normalized_gain_values(pattern, psi1) * _normalized_gain_values(pattern, psi2)
    return float(vals[0]) if size is None else vals


def _normalized_gain_values(pattern: GaussianPattern, theta: np.ndarray) -> np.ndarray:
    theta = np.asarray(theta, dtype=float)
    inside = np.abs(theta) <= pattern.theta0
    return np.where(inside, np.exp(-pattern.eta * theta * theta), pattern.g)


# ---------------------------------------------------------------------------
# moments


def uniform_cascade_moment(pattern: GaussianPattern, z: float) -> float:
    """Closed-form fractional moment of the approximate uniform-error cascade."""
    if z <= 0.0:
        raise ValueError("moment exponent must be positive")
    eta, g = pattern.eta, pattern.g
    p0 = pattern.theta0 / math.pi
    neg_lng = -math.log(g)
    cross = (
        (1.0 - p0)
        / (math.pi * math.sqrt(eta))
        * g**z
        * math.sqrt(math.pi)
        * specfun.erf(math.sqrt(z * neg_lng))
        / math.sqrt(z)
    )
    main = (1.0 - g**z) / (4.0 * math.pi * eta * z)
    atom = (1.0 - p0) ** 2 * g ** (2.0 * z)
    return cross + main + atom


def fading_moment(m: int, z: float) -> float:
    """E[h**z] for a unit-mean Gamma power gain with shape m."""
    if m < 1 or m != int(m):
        raise ValueError("fading shape must be a positive integer")
    if z <= 0.0:
        raise ValueError("moment exponent must be positive")
    return math.exp(math.lgamma(m + z) - math.lgamma(m) - z * math.log(m))


class MomentTable:
    """Cached fractional moments E[omega**z] of the field link gain.

    omega is the product of the uniform-error cascaded gain and the Gamma
    fading power gain of the relevant propagation state.  Both double and
    extended-precision entries are memoized; the extended entries feed the
    alternating series, whose cancellation demands a mutually consistent
    high-precision moment function.
    """

    def __init__(self, pattern: GaussianPattern, m_los: int, m_nlos: int):
        self.pattern = pattern
        self.m = {"los": m_los, "nlos": m_nlos}
        self._mp_params = None
        self._cache_f: dict[tuple[str, float], float] = {}
        self._cache_mp: dict[tuple[str, float], mp.mpf] = {}

    def chi(self, branch: str, z: float) -> float:
        key = (branch, z)
        if key not in self._cache_f:
            self._cache_f[key] = uniform_cascade_moment(self.pattern, z) * fading_moment(
                self.m[branch], z
            )
        return self._cache_f[key]

    def _params_mp(self):
        if self._mp_params is None:
            with mp.workdps(_MOMENT_DPS):
                self._mp_params = (
                    mp.mpf(self.pattern.eta),
                    mp.mpf(self.pattern.g),
                    mp.mpf(self.pattern.theta0) / mp.pi,
                )
        return self._mp_params

    def chi_mp(self, branch: str, z: float) -> mp.mpf:
        key = (branch, z)
        if key not in self._cache_mp:
            eta, g, p0 = self._params_mp()
            m = self.m[branch]
            with mp.workdps(_MOMENT_DPS):
                zz = mp.mpf(z)
                neg_lng = -mp.log(g)
                cross = (
                    (1 - p0)
                    / (mp.pi * mp.sqrt(eta))
                    * g**zz
                    * mp.sqrt(mp.pi)
                    * mp.erf(mp.sqrt(zz * neg_lng))
                    / mp.sqrt(zz)
                )
                main = (1 - g**zz) / (4 * mp.pi * eta * zz)
                atom = (1 - p0) ** 2 * g ** (2 * zz)
                fad = mp.gamma(m + zz) / (mp.gamma(m) * mp.mpf(m) ** zz)
                self._cache_mp[key] = (cross + main + atom) * fad
        return self._cache_mp[key]

    def chi_mp_fn(self, branch: str) -> Callable[[float], mp.mpf]:
        return lambda z: self.chi_mp(branch, z)


_MOMENT_TABLES: dict[tuple, MomentTable] = {}


def moment_table(pattern: GaussianPattern, m_los: int, m_nlos: int) -> MomentTable:
    key = (pattern, m_los, m_nlos)
    if key not in _MOMENT_TABLES:
        _MOMENT_TABLES[key] = MomentTable(pattern, m_los, m_nlos)
    return _MOMENT_TABLES[key]


def gain_moment(dist: GainDistribution, z: float, method: str = "auto") -> float:
    """E[X**z] of a gain law; thin wrapper over :meth:`GainDistribution.moment`."""
    return dist.moment(z, method=method)
