"""Energy coverage and harvested energy of mmWave wireless power transfer
under imperfect beam alignment: analytic models, a stochastic-geometry
Monte-Carlo simulator validating them, and an experiment service with a CLI.
"""

__version__ = "0.1.0"

from .analysis import (
    ChannelParams,
    CoverageSpec,
    EhModel,
    Linear,
    NetworkParams,
    Nonlinear,
    avg_dc_energy,
    avg_rf_energy,
    eh_dc,
    energy_coverage,
    invert_threshold,
    laplace_e0,
    laplace_field,
    rel,
)
from .bae import Perfect, TruncatedGaussian, Uniform, bae_pdf, gaussian_bae, mainlobe_prob, sample_bae
from .gain_stats import (
    GainDistribution,
    cascaded_pdf_approx,
    cascaded_pdf_exact,
    fading_moment,
    gain_moment,
    sample_cascaded,
    single_gain_pdf,
)
from .montecarlo import McConfig, McEstimate, estimate_coverage, estimate_mean_energy, simulate_rf
from .patterns import (
    FlatTopPattern,
    GaussianPattern,
    UlaPattern,
    flat_top_matching,
    gain,
    gaussian_from_beamwidth,
    normalized_gain,
    ula_for_beamwidth,
    wrap_angle,
)

__all__ = [name for name in dir() if not name.startswith("_")]
