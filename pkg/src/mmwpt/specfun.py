"""Special-function kernel backing the analytic models.

Every one-dimensional integral in the package funnels through
:func:`integrate`, a wrapper around adaptive Gauss-Kronrod quadrature that
turns the error estimate into a hard contract: if the estimate exceeds the
requested tolerance the value is rejected with :class:`QuadratureError`
instead of being returned silently.

On top of that sit the pieces the analytic expressions need:

* Gauss hypergeometric values of the form 2F1(a, b; 1+b; -z), evaluated
  through an Euler-type integral (a power-series evaluator with a Pfaff
  transformation is kept as an independent cross-check),
* a two-parameter Fox H family H25[z | (rho,1), (0,1/alpha)] evaluated by a
  real-axis integral, with a Mellin-Barnes contour evaluator used only for
  validation,
* the truncated far-field moment integral of r**(1-alpha)*exp(-beta*r),
* an argument-splitting series for the Fox H family, including the variant
  weighted by fractional moments of a link-gain random variable.  The inner
  alternating binomial sum of that series cancels twenty or more digits by
  the time the outer index reaches the cap, so it is evaluated in extended
  precision.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Callable, Sequence

import mpmath as mp
import scipy.integrate
import scipy.special

DEFAULT_ABS_TOL = 1e-10
DEFAULT_REL_TOL = 1e-8

# Working precision (decimal digits) for the extended-precision inner sums.
_SERIES_DPS = 60

# Fault-injection hook exercised by the self-test suite; leave at 0.0.
_erf_offset = 0.0


class QuadratureError(RuntimeError):
    """Quadrature error estimate exceeded the requested tolerance."""


class SeriesConvergenceError(RuntimeError):
    """Series did not satisfy its stopping rule within the term cap."""

    def __init__(self, message: str, diagnostics: "SeriesDiagnostics"):
        super().__init__(message)
        self.diagnostics = diagnostics


@dataclass(frozen=True)
class SeriesDiagnostics:
    """What a truncated series evaluation actually achieved."""

    terms_used: int
    last_term: float
    max_term: float
    achieved_tol: float
    converged: bool


def integrate(
    fn: Callable[[float], float],
    lo: float,
    hi: float,
    *,
    rtol: float = DEFAULT_REL_TOL,
    atol: float = DEFAULT_ABS_TOL,
    limit: int = 200,
    points: Sequence[float] | None = None,
) -> float:
    """Adaptive quadrature of ``fn`` on [lo, hi] with a rejection contract.

    Raises :class:`QuadratureError` when the estimated error exceeds
    ``atol + rtol * |result|``.  ``points`` marks known awkward interior
    locations (ignored for infinite intervals, as in QUADPACK).
    """
    kwargs = {}
    if points is not None and math.isfinite(lo) and math.isfinite(hi):
        interior = [p for p in points if lo < p < hi]
        if interior:
            kwargs["points"] = interior
            limit = max(limit, 10 * (len(interior) + 1))
    with warnings.catch_warnings():
        # accuracy complaints are superseded by the hard check below
        warnings.simplefilter("ignore", scipy.integrate.IntegrationWarning)
        value, err_est = scipy.integrate.quad(
            fn, lo, hi, epsabs=atol, epsrel=rtol, limit=limit, **kwargs
        )
    if err_est > atol + rtol * abs(value):
        raise QuadratureError(
            f"quadrature error estimate {err_est:.3e} exceeds tolerance "
            f"(atol={atol:.1e}, rtol={rtol:.1e}, value={value:.6e})"
        )
    return value


# ---------------------------------------------------------------------------
# elementary pieces


def erf(x: float) -> float:
    return math.erf(x) + _erf_offset


def gamma(x: float) -> float:
    if x <= 0.0 and x == math.floor(x):
        raise ValueError(f"gamma pole at non-positive integer {x}")
    return math.gamma(x)


def ln_gamma(x: float) -> float:
    if x <= 0.0:
        raise ValueError("ln_gamma requires a positive argument")
    return math.lgamma(x)


def binomial(t: int, q: int) -> int:
    if t < 0 or q < 0 or q > t:
        raise ValueError(f"binomial({t}, {q}) outside Pascal triangle")
    return math.comb(t, q)


# ---------------------------------------------------------------------------
# Gauss hypergeometric 2F1(a, b; 1+b; -z)


def hyp2f1_euler(a: float, b: float, z: float) -> float:
    """2F1(a, b; 1+b; -z) through its Euler-type integral.

    The defining integral of b*(1+z*t)**(-a)*t**(b-1) over t in (0,1) is
    taken after the substitution t = u**(1/b), which removes the endpoint
    singularity at t=0 for b < 1 and leaves a bounded integrand otherwise.
    """
    if a <= 0.0 or b <= 0.0:
        raise ValueError("hyp2f1_euler requires a > 0 and b > 0")
    if z < -1.0:
        raise ValueError("hyp2f1_euler requires z >= -1")
    if z == 0.0:
        return 1.0
    inv_b = 1.0 / b

    def f(u: float) -> float:
        if u <= 0.0:
            return 1.0
        return (1.0 + z * u**inv_b) ** (-a)

    return integrate(f, 0.0, 1.0, rtol=1e-12, atol=1e-14, limit=400)


def hyp2f1_series(a: float, b: float, z: float, *, tol: float = 1e-14) -> float:
    """Power-series cross-check of :func:`hyp2f1_euler` (same argument map).

    For z > 1/2 the series argument -z is first moved into the unit disk by
    the Pfaff transformation; with c = 1+b the transformed upper parameter
    becomes 1 and the series reduces to a ratio of Pochhammer symbols.
    """
    if a <= 0.0 or b <= 0.0:
        raise ValueError("series oracle requires a > 0 and b > 0")
    if z < -1.0:
        raise ValueError("series oracle requires z >= -1")
    c = 1.0 + b
    if z <= 0.5:
        arg = -z
        term = 1.0
        total = 1.0
        for n in range(1, 100_000):
            term *= (a + n - 1.0) * (b + n - 1.0) / ((c + n - 1.0) * n) * arg
            total += term
            if abs(term) < tol * abs(total):
                return total
        raise SeriesConvergenceError(
            "hypergeometric series stalled",
            SeriesDiagnostics(100_000, term, math.nan, abs(term / total), False),
        )
    w = z / (1.0 + z)
    term = 1.0
    total = 1.0
    for n in range(1, 500_000):
        # 2F1(a, 1; c; w): ratio of consecutive terms is (a+n-1)/(c+n-1)*w
        term *= (a + n - 1.0) / (c + n - 1.0) * w
        total += term
        if abs(term) < tol * abs(total):
            break
    else:
        raise SeriesConvergenceError(
            "Pfaff-transformed series stalled",
            SeriesDiagnostics(500_000, term, math.nan, abs(term / total), False),
        )
    return (1.0 + z) ** (-a) * total


# ---------------------------------------------------------------------------
# Fox H family H25[z | (rho, 1), (0, 1/alpha)]


@dataclass(frozen=True)
class FoxHSpec:
    """Parameters of the two-gamma Fox H family used by the field transforms.

    ``rho`` is the first parameter offset (unit scale), ``alpha_inv`` the
    scale of the second parameter pair, ``z`` the argument.  The family is
    characterised by the Mellin transform Gamma(rho+s) * Gamma(s/alpha).
    """

    rho: float
    alpha_inv: float
    z: float

    def __post_init__(self):
        if self.rho < 2.0:
            raise ValueError("rho must be >= 2")
        if not 0.0 < self.alpha_inv < 1.0:
            raise ValueError("alpha_inv must lie in (0, 1)")
        if self.z < 0.0:
            raise ValueError("argument must be non-negative")


def _gamma_weighted_suppressor_mean(rho: float, alpha: float, w: float) -> float:
    """E[exp(-w * U**(-alpha))] for U ~ Gamma(rho, 1).

    This is the Fox H value scaled by alpha*Gamma(rho); working with the
    normalized form keeps all magnitudes around unity even for large rho.
    """
    if w == 0.0:
        return 1.0
    lgr = math.lgamma(rho)

    def f(u: float) -> float:
        if u <= 0.0:
            return 0.0
        expo = (rho - 1.0) * math.log(u) - u - lgr - w * u ** (-alpha)
        if expo < -745.0:
            return 0.0
        return math.exp(expo)

    spread = math.sqrt(rho)
    hi = rho + 12.0 * spread + 25.0 + 4.0 * w ** (1.0 / alpha)
    hints = [max(rho - 1.0, 1e-3), w ** (1.0 / alpha)]
    value = integrate(f, 0.0, hi, rtol=1e-11, atol=1e-280, limit=400, points=hints)
    if value < 0.0:
        raise QuadratureError("suppressor mean came out negative")
    return value


def fox_h_20_02(spec: FoxHSpec) -> float:
    """H25[z | (rho,1), (0,1/alpha)] via its real-axis integral.

    The value equals alpha * integral over u in (0, inf) of
    u**(rho-1) * exp(-u - z**alpha * u**(-alpha)) du, which reproduces the
    Mellin transform Gamma(rho+s)*Gamma(s/alpha); the Mellin-Barnes route is
    available separately as a cross-check.
    """
    alpha = 1.0 / spec.alpha_inv
    w = spec.z**alpha
    return alpha * gamma(spec.rho) * _gamma_weighted_suppressor_mean(spec.rho, alpha, w)


def fox_h_20_02_mellin_barnes(spec: FoxHSpec, *, contour_re: float = 1.0) -> float:
    """Mellin-Barnes contour evaluation of the same Fox H value.

    Validation-only path: inverts the Mellin transform along Re(s) =
    ``contour_re`` (any positive abscissa separates the two pole sets).
    Not used by the production evaluators.
    """
    if spec.z <= 0.0:
        raise ValueError("contour evaluation needs z > 0")
    alpha = 1.0 / spec.alpha_inv
    ln_z = math.log(spec.z)
    c = contour_re

    def integrand(t: float) -> float:
        s = complex(c, t)
        expo = scipy.special.loggamma(spec.rho + s) + scipy.special.loggamma(s / alpha) - s * ln_z
        return math.exp(expo.real) * math.cos(expo.imag)

    value = integrate(integrand, 0.0, math.inf, rtol=1e-11, atol=1e-280, limit=400)
    return value / math.pi


def fox_h_shift_series(
    x: float,
    y: float,
    rho: float,
    alpha: float,
    *,
    tol: float = 1e-10,
    max_terms: int = 60,
    consecutive: int = 3,
) -> tuple[float, SeriesDiagnostics]:
    """Argument-splitting series: H(x*y) expanded over first-parameter shifts.

    H[x*y | (rho,1), (0,1/alpha)] = x**rho * sum over t of (1-x)**t / t!
    times H[y | (t+rho,1), (0,1/alpha)].  Truncation follows the stagnation
    rule used everywhere in this module: stop once ``consecutive`` terms in
    a row fall below ``tol`` in absolute value.
    """
    if x <= 0.0:
        raise ValueError("series expansion needs x > 0")
    w = y**alpha
    total = 0.0
    streak = 0
    max_term = 0.0
    last = math.inf
    for t in range(max_terms + 1):
        h_t = alpha * gamma(t + rho) * _gamma_weighted_suppressor_mean(t + rho, alpha, w)
        term = (1.0 - x) ** t / math.factorial(t) * h_t
        total += term
        last = abs(term)
        max_term = max(max_term, last)
        streak = streak + 1 if last < tol else 0
        if streak >= consecutive:
            return x**rho * total, SeriesDiagnostics(t + 1, last, max_term, last, True)
    diag = SeriesDiagnostics(max_terms + 1, last, max_term, last, False)
    raise SeriesConvergenceError("argument-splitting series did not settle", diag)


def gain_weighted_h_mean(
    chi_mp: Callable[[float], mp.mpf],
    y: float,
    alpha: float,
    *,
    tol: float = 1e-10,
    max_terms: int = 60,
    consecutive: int = 3,
) -> tuple[float, SeriesDiagnostics]:
    """E[H(y * omega**(1/alpha))] for a link gain omega with moments ``chi_mp``.

    Combines the argument-splitting series with a binomial expansion of
    (1 - omega**(1/alpha))**t, leaving only fractional moments
    chi((q+2)/alpha) = E[omega**((q+2)/alpha)] under the expectation.  The
    inner alternating sum is evaluated in extended precision: its binomial
    coefficients reach ~1e17 near the term cap while the result is orders of
    magnitude below one, which is far beyond double-precision cancellation.

    ``chi_mp`` must return ``mpmath.mpf`` values computed at the module's
    working precision for a consistent underlying moment function.
    """
    if y < 0.0:
        raise ValueError("argument must be non-negative")
    w = y**alpha
    total = 0.0
    streak = 0
    max_term = 0.0
    last = math.inf
    for t in range(max_terms + 1):
        with mp.workdps(_SERIES_DPS):
            inner = mp.fsum(
                (-1) ** q * mp.mpf(math.comb(t, q)) * chi_mp((q + 2.0) / alpha)
                for q in range(t + 1)
            )
        scaled_h = alpha * (t + 1.0) * _gamma_weighted_suppressor_mean(t + 2.0, alpha, w)
        term = float(inner) * scaled_h
        total += term
        last = abs(term)
        max_term = max(max_term, last)
        streak = streak + 1 if last < tol else 0
        if streak >= consecutive:
            return total, SeriesDiagnostics(t + 1, last, max_term, last, True)
    diag = SeriesDiagnostics(max_terms + 1, last, max_term, last, False)
    raise SeriesConvergenceError(
        f"moment-weighted series still at |term|={last:.3e} after "
        f"{max_terms + 1} terms (tol={tol:.1e})",
        diag,
    )


# ---------------------------------------------------------------------------
# far-field moment


def far_field_moment(alpha: float, beta: float) -> float:
    """Integral of r**(1-alpha) * exp(-beta*r) for r from 1 to infinity.

    Computed by adaptive quadrature; the equivalent confluent-hypergeometric
    (Whittaker) closed form serves as the validation oracle, not as the
    implementation.
    """
    if alpha <= 0.0 or beta <= 0.0:
        raise ValueError("far_field_moment requires alpha > 0 and beta > 0")

    def f(r: float) -> float:
        return r ** (1.0 - alpha) * math.exp(-beta * r)

    return integrate(f, 1.0, math.inf, rtol=1e-11, atol=1e-300, limit=400)


def far_field_moment_whittaker(alpha: float, beta: float) -> float:
    """Whittaker-function identity for the same far-field moment.

    Validation-only path evaluated in arbitrary precision.
    """
    if alpha <= 0.0 or beta <= 0.0:
        raise ValueError("whittaker identity requires alpha > 0 and beta > 0")
    with mp.workdps(40):
        b = mp.mpf(beta)
        k = -(alpha - 1.0) / 2.0
        mu = (2.0 - alpha) / 2.0
        value = b ** ((alpha - 1.0) / 2.0 - 1.0) * mp.e ** (-b / 2) * mp.whitw(k, mu, b)
    return float(value)
