"""Sweep runners behind the service endpoints.

Each runner turns a validated request into an ordered list of result rows
plus a metadata block sufficient to reproduce the run bit for bit: the full
resolved configuration, the seed and the per-combination substream
derivation, resolved truncation radii, solver tolerances, and the package
and repository versions.  Rows are ordered by grid index, never by
completion time.
"""

from __future__ import annotations

import math
import subprocess
from typing import Callable

import numpy as np

from . import __version__
from .analysis import avg_rf_energy, energy_coverage, rel
from .bae import Uniform, gaussian_bae
from .montecarlo import (
    McConfig,
    coverage_curve,
    estimate_mean_energy,
    resolve_r_max,
)
from .patterns import (
    AntennaPattern,
    flat_top_matching,
    gaussian_from_beamwidth,
    ula_for_beamwidth,
)
from .gain_stats import cascaded_pdf_approx, cascaded_pdf_exact, single_gain_pdf
from .selftest import run_selftest
from .service.schemas import (
    AntennaModel,
    CoverageRow,
    CoverageSweepRequest,
    EnergyRow,
    EnergySweepRequest,
    EngineKind,
    PdfCheckRequest,
    PdfRow,
    RelRow,
    RelSweepRequest,
    SelftestCheck,
)
from .units import dbm_to_watt

RNG_DERIVATION_NOTE = (
    "per-combination seeds: SeedSequence(seed, spawn_key=(combo_index,)); "
    "within a run, block b of fixed size uses SeedSequence(combo_seed, spawn_key=(b,))"
)


def _git_describe() -> str:
    try:
        out = subprocess.run(
            ["git", "describe", "--always", "--dirty"],
            capture_output=True,
            text=True,
            timeout=5,
        )
        if out.returncode == 0:
            return out.stdout.strip()
    except OSError:
        pass
    return "unknown"


def _combo_seed(seed: int, index: int) -> int:
    return int(np.random.SeedSequence(seed, spawn_key=(index,)).generate_state(1, np.uint64)[0])


def _base_meta(request) -> dict:
    return {
        "config": request.model_dump(mode="json"),
        "package_version": __version__,
        "git_describe": _git_describe(),
        "rng": RNG_DERIVATION_NOTE,
        "dbm_convention": "p_dbm = 10*log10(p_w/1e-3)",
    }


def _build_pattern(kind: AntennaModel, theta0: float, ula_elements: int | None) -> AntennaPattern:
    gauss = gaussian_from_beamwidth(theta0)
    if kind == AntennaModel.gaussian:
        return gauss
    if kind == AntennaModel.flattop:
        return flat_top_matching(gauss)
    if ula_elements is not None:
        from .patterns import UlaPattern

        return UlaPattern(na=ula_elements)
    return ula_for_beamwidth(theta0)


def _wants(engine: EngineKind, which: str) -> bool:
    return engine == EngineKind.both or engine.value == which


def run_coverage_sweep(req: CoverageSweepRequest) -> tuple[dict, list[CoverageRow]]:
    net = req.network.to_params()
    chan = req.channel.to_params()
    eh = req.eh.to_model()
    cov = req.solver.to_spec()
    gauss = gaussian_from_beamwidth(req.theta0)
    thresholds_w = [dbm_to_watt(t) for t in req.threshold_dbm]

    meta = _base_meta(req)
    meta["r_max"] = {}
    rows: list[CoverageRow] = []
    combo = 0
    for ant in req.antennas:
        pattern = _build_pattern(ant, req.theta0, req.ula_elements)
        for sigma in req.sigmas:
            if _wants(req.engine, "analytic") and ant == AntennaModel.gaussian:
                for t_dbm, t_w in zip(req.threshold_dbm, thresholds_w):
                    p_ec = energy_coverage(
                        t_w, eh=eh, net=net, chan=chan, pattern=gauss, sigma=sigma, cov=cov
                    )
                    rows.append(
                        CoverageRow(
                            threshold_dbm=t_dbm,
                            engine="analytic",
                            antenna=ant.value,
                            sigma=sigma,
                            p_ec=p_ec,
                            ci=0.0,
                        )
                    )
            if _wants(req.engine, "mc"):
                cfg = McConfig(
                    antenna=pattern,
                    bae_assoc=gaussian_bae(sigma),
                    chan=chan,
                    net=net,
                    eh=eh,
                    trials=req.mc.trials,
                    seed=_combo_seed(req.mc.seed, combo),
                    r_min_field=0.0,
                    r_max=req.mc.r_max,
                    block_size=req.mc.block_size,
                )
                meta["r_max"][f"{ant.value}/sigma={sigma:.6g}"] = resolve_r_max(cfg)
                for t_dbm, est in zip(req.threshold_dbm, coverage_curve(cfg, thresholds_w)):
                    rows.append(
                        CoverageRow(
                            threshold_dbm=t_dbm,
                            engine="mc",
                            antenna=ant.value,
                            sigma=sigma,
                            p_ec=est.mean,
                            ci=est.ci_halfwidth,
                        )
                    )
            combo += 1
    return meta, rows


def run_energy_sweep(req: EnergySweepRequest) -> tuple[dict, list[EnergyRow]]:
    chan = req.channel.to_params()
    cov_gauss = gaussian_from_beamwidth(req.theta0)
    axis_values = req.sigma_grid if req.axis == "sigma" else req.lambda_grid

    meta = _base_meta(req)
    meta["r_max"] = {}
    meta["field_convention"] = "energy averages exclude field transmitters closer than 1 m"
    rows: list[EnergyRow] = []
    combo = 0
    for ant in req.antennas:
        pattern = _build_pattern(ant, req.theta0, req.ula_elements)
        for variant in req.eh_variants:
            eh = req.eh.to_model() if variant == "nonlinear" else _linear_eh(req)
            for value in axis_values:
                sigma = value if req.axis == "sigma" else req.sigma
                lam = req.network.lambda_t if req.axis == "sigma" else value
                net = req.network.to_params()
                if req.axis == "lambda":
                    from .analysis import NetworkParams

                    net = NetworkParams(lambda_t=lam, r0=net.r0, pt=net.pt)
                rel_value = rel(cov_gauss, sigma)
                if (
                    _wants(req.engine, "analytic")
                    and ant == AntennaModel.gaussian
                    and variant == "linear"
                ):
                    ana = avg_rf_energy(net, chan, cov_gauss, sigma)
                    rows.append(
                        EnergyRow(
                            axis=req.axis,
                            axis_value=value,
                            engine="analytic",
                            antenna=ant.value,
                            eh_variant=variant,
                            mean_energy_w=ana.total,
                            ci=0.0,
                            rel=rel_value,
                        )
                    )
                if _wants(req.engine, "mc"):
                    cfg = McConfig(
                        antenna=pattern,
                        bae_assoc=gaussian_bae(sigma),
                        chan=chan,
                        net=net,
                        eh=eh,
                        trials=req.mc.trials,
                        seed=_combo_seed(req.mc.seed, combo),
                        r_min_field=1.0,
                        r_max=req.mc.r_max,
                        block_size=req.mc.block_size,
                    )
                    key = f"{ant.value}/{variant}/{req.axis}={value:.6g}"
                    meta["r_max"][key] = resolve_r_max(cfg)
                    est = estimate_mean_energy(cfg)
                    rows.append(
                        EnergyRow(
                            axis=req.axis,
                            axis_value=value,
                            engine="mc",
                            antenna=ant.value,
                            eh_variant=variant,
                            mean_energy_w=est.mean,
                            ci=est.ci_halfwidth,
                            rel=rel_value,
                        )
                    )
                combo += 1
    return meta, rows


def _linear_eh(req: EnergySweepRequest):
    from .analysis import Linear

    return Linear(zeta=req.eh.zeta)


def run_rel_sweep(req: RelSweepRequest) -> tuple[dict, list[RelRow]]:
    """Relative serving-link energy loss versus misalignment spread.

    Analytic rows use the closed form (Gaussian pattern).  Monte-Carlo rows
    simulate the serving link alone with common random numbers against the
    aligned baseline, so the sigma=0 row is exactly zero for every antenna.
    """
    chan = req.channel.to_params()
    meta = _base_meta(req)
    rows: list[RelRow] = []
    combo = 0
    for theta0 in req.theta0s:
        gauss = gaussian_from_beamwidth(theta0)
        for ant in req.antennas:
            pattern = _build_pattern(ant, theta0, None)
            if _wants(req.engine, "analytic") and ant == AntennaModel.gaussian:
                for sigma in req.sigma_grid:
                    rows.append(
                        RelRow(
                            theta0=theta0,
                            sigma=sigma,
                            antenna=ant.value,
                            engine="analytic",
                            rel_value=rel(gauss, sigma),
                            ci=0.0,
                        )
                    )
            if _wants(req.engine, "mc"):
                from .analysis import NetworkParams, Linear

                net0 = NetworkParams(
                    lambda_t=0.0, r0=req.network.r0, pt=req.network.pt_w
                )
                seed = _combo_seed(req.mc.seed, combo)
                base_cfg = McConfig(
                    antenna=pattern,
                    bae_assoc=gaussian_bae(0.0),
                    chan=chan,
                    net=net0,
                    eh=Linear(1.0),
                    trials=req.mc.trials,
                    seed=seed,
                    r_min_field=1.0,
                    block_size=req.mc.block_size,
                )
                base = estimate_mean_energy(base_cfg)
                for sigma in req.sigma_grid:
                    cfg = McConfig(
                        antenna=pattern,
                        bae_assoc=gaussian_bae(sigma),
                        chan=chan,
                        net=net0,
                        eh=Linear(1.0),
                        trials=req.mc.trials,
                        seed=seed,
                        r_min_field=1.0,
                        block_size=req.mc.block_size,
                    )
                    est = estimate_mean_energy(cfg)
                    loss = 1.0 - est.mean / base.mean
                    ci = (est.ci_halfwidth + est.mean * base.ci_halfwidth / base.mean) / base.mean
                    rows.append(
                        RelRow(
                            theta0=theta0,
                            sigma=sigma,
                            antenna=ant.value,
                            engine="mc",
                            rel_value=loss,
                            ci=ci,
                        )
                    )
            combo += 1
    return meta, rows


def run_pdf_check(req: PdfCheckRequest) -> tuple[dict, list[PdfRow]]:
    """Density and atom dump of the gain laws for plotting."""
    pattern = gaussian_from_beamwidth(req.theta0)
    meta = _base_meta(req)
    rows: list[PdfRow] = []
    builders: dict[str, Callable] = {
        "single": single_gain_pdf,
        "cascade-exact": cascaded_pdf_exact,
        "cascade-approx": cascaded_pdf_approx,
    }
    sigmas = req.sigmas if req.bae == "gaussian" else [0.0]
    for law_name in req.laws:
        build = builders[law_name]
        for sigma in sigmas:
            model = Uniform() if req.bae == "uniform" else gaussian_bae(sigma)
            dist = build(pattern, model)
            for seg in sorted(dist.segments, key=lambda s: s.lo):
                # log-spaced interior grid; endpoints excluded where singular
                lo, hi = seg.lo, seg.hi
                omegas = np.exp(
                    np.linspace(math.log(lo), math.log(hi), req.points, endpoint=False)[1:]
                )
                for w in omegas:
                    rows.append(
                        PdfRow(
                            law=law_name,
                            sigma=sigma,
                            kind="density",
                            omega=float(w),
                            value=seg.density(float(w)),
                        )
                    )
            for loc, mass in dist.atoms:
                rows.append(
                    PdfRow(law=law_name, sigma=sigma, kind="atom", omega=loc, value=mass)
                )
    return meta, rows


def run_selftest_report() -> tuple[dict, bool, list[SelftestCheck]]:
    results = run_selftest()
    checks = [
        SelftestCheck(
            name=r.name, passed=r.passed, value=r.value, tolerance=r.tolerance, detail=r.detail
        )
        for r in results
    ]
    meta = {
        "package_version": __version__,
        "git_describe": _git_describe(),
    }
    return meta, all(c.passed for c in checks), checks
