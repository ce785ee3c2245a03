"""Batch verification suites: seeded test functions, pinned tolerances, reports.

All randomness in the package lives here.  Test functions are drawn label by
label in the spectrum's enumeration order, so the same seed extended to a
doubled cutoff reproduces the low-frequency coefficients exactly; stability
checks under cutoff doubling then measure genuine cutoff-independence and not
re-randomization.  Decaying profiles keep the randomized functions inside the
Sobolev class being tested.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import extension, frac_sobolev, hermite, segal_bargmann
from .group_spectra import (GridFunction, SpectralCoefficients, analyze,
                            enumerate_spectrum, l2_norm_sq, su2_grid,
                            synthesize, torus_grid)
from .reports import VerificationReport, sort_reports

__all__ = [
    "RunConfig",
    "SUITES",
    "run_suites",
    "random_coefficients",
    "random_expansion",
]


@dataclass(frozen=True)
class RunConfig:
    """Knobs shared by every suite; zeros mean per-suite defaults."""

    group: str = "torus-1"
    cutoff: int = 8
    grid_m: int = 0
    y_radius: float = 0.0
    t_values: tuple = ()
    s_values: tuple = ()
    gamma_values: tuple = ()
    tol: float = 0.0
    seed: int = 7
    scaling: str = "half"
    n_funcs: int = 20
    out_dir: str = "out"

    def __post_init__(self):
        if self.cutoff < 1 or self.n_funcs < 1 or self.seed < 0:
            raise ValueError("cutoff, n_funcs must be >= 1 and seed >= 0")
        if self.tol < 0:
            raise ValueError("tolerance must be nonnegative")
        if self.scaling not in ("unit", "half"):
            raise ValueError("scaling must be 'unit' or 'half'")

    def pick_tol(self, default: float) -> float:
        return self.tol if self.tol > 0 else default

    def pick(self, values: tuple, default: tuple) -> tuple:
        return tuple(values) if values else default


def _rng(cfg: RunConfig, stream: int, index: int | None = None) -> np.random.Generator:
    key = [cfg.seed, stream] if index is None else [cfg.seed, stream, index]
    return np.random.default_rng(key)


def _complex_draws(rng, count: int) -> np.ndarray:
    # interleaved re/im per label: extending the label list extends the draw
    # sequence without disturbing its prefix
    raw = rng.standard_normal(2 * count)
    return (raw[0::2] + 1j * raw[1::2]) / math.sqrt(2.0)


def random_coefficients(spectrum, rng, decay: float = 0.0) -> SpectralCoefficients:
    """Complex-normal amplitudes scaled by (1 + lambda^2)^(-decay/2) ~ lambda^-decay."""
    raw = _complex_draws(rng, len(spectrum))
    scale = (1.0 + spectrum.lambda2) ** (-0.5 * decay)
    return SpectralCoefficients(spectrum, raw * scale)


def random_expansion(rng, degree: int, n: int = 1, decay: float = 0.0) -> hermite.HermiteExpansion:
    """Level-graded random expansion with (2k+n)^(-decay) level scaling."""
    labels = hermite._multi_indices(n, degree)
    raw = _complex_draws(rng, len(labels))
    levels = np.array([sum(a) for a in labels], dtype=float)
    scale = (2.0 * levels + n) ** (-decay)
    return hermite.HermiteExpansion(n, raw * scale, degree)


def _torus_samples(c: SpectralCoefficients, m_points: int) -> GridFunction:
    """Sample the expansion on the real torus grid (exact band-limited synthesis)."""
    spec = c.spectrum
    n = spec.n
    grid = np.zeros((m_points,) * n, dtype=complex)
    for label, a in zip(spec.labels, c.values):
        grid[tuple(m % m_points for m in label)] = a
    values = np.fft.ifftn(grid) * m_points**n
    return GridFunction("torus", (2.0 * math.pi * np.arange(m_points) / m_points,) * n,
                        values, dim=n)


# --- suites -----------------------------------------------------------------

def suite_plancherel(cfg: RunConfig) -> list[VerificationReport]:
    """Quadrature L^2 norm against the spectral mass, all three groups."""
    tol = cfg.pick_tol(1e-10)
    rng = _rng(cfg, 1)
    reports = []
    jobs = [("torus-1", cfg.cutoff), ("torus-2", max(2, cfg.cutoff // 2)), ("su2", cfg.cutoff)]
    for group, cutoff in jobs:
        spectrum = enumerate_spectrum(group, cutoff)
        for i in range(cfg.n_funcs):
            c = random_coefficients(spectrum, rng)
            if group == "su2":
                grid = su2_grid(4 * cutoff + 48)
                grid.values = synthesize(c, grid.axes[0]).values
            else:
                grid = _torus_samples(c, cfg.grid_m or 4 * cutoff + 8)
            lhs = l2_norm_sq(grid)
            back = analyze(grid, spectrum)
            rhs = back.l2_sq()
            reports.append(VerificationReport(
                id=f"plancherel[{group},f={i:02d}]",
                lhs=lhs, rhs=rhs, tol=tol,
                params={"group": group, "cutoff": cutoff, "seed": cfg.seed, "f": i},
            ))
    return reports


def suite_isometry(cfg: RunConfig) -> list[VerificationReport]:
    """The two heat-kernel isometries plus the weight moment identity."""
    tol = cfg.pick_tol(1e-6)
    rng = _rng(cfg, 2)
    reports = []
    # defining moments of the torus weight
    for m in range(6):
        reports.append(segal_bargmann.nu_moment_report(0.7, m, tol=cfg.pick_tol(1e-8)))
    # torus isometry
    spectrum = enumerate_spectrum("torus-1", cfg.cutoff)
    funcs = [random_coefficients(spectrum, rng) for _ in range(cfg.n_funcs)]
    for t in cfg.pick(cfg.t_values, (0.25, 0.5, 1.0)):
        weight = segal_bargmann.nu_weight(t)
        for i, c in enumerate(funcs):
            b = segal_bargmann.bergman_norm(segal_bargmann.ct_transform(c, t), weight)
            reports.append(VerificationReport(
                id=f"isometry_torus[t={t},f={i:02d}]",
                lhs=b.value, rhs=c.l2_sq(), tol=tol,
                params={"t": t, "cutoff": cfg.cutoff, "seed": cfg.seed, "f": i},
                meta={"y_radius": b.y_radius, "tail": b.tail},
            ))
    # Hermite isometry: per level and for random expansions
    degree = 10
    for t in cfg.pick(cfg.t_values, (0.1, 0.25, 0.5)):
        gram = hermite.gram_matrix(degree, t)
        for k in range(9):
            lhs = float(gram[k, k].real) * math.exp(-2 * t * (2 * k + 1))
            reports.append(VerificationReport(
                id=f"isometry_hermite_level[t={t},k={k}]",
                lhs=lhs, rhs=1.0, tol=tol,
                params={"t": t, "k": k},
            ))
        for i in range(5):
            e = random_expansion(rng, degree)
            reports.append(hermite.hermite_isometry_report(
                e, t, tol=tol, gram=gram,
                rep_id=f"isometry_hermite[t={t},f={i:02d}]"))
    return reports


def suite_thm22(cfg: RunConfig) -> list[VerificationReport]:
    """Fractional Bergman norm equality plus the two-sided multiplier bound."""
    tol = cfg.pick_tol(1e-6)
    rng = _rng(cfg, 3)
    spectrum = enumerate_spectrum("torus-1", min(cfg.cutoff, 6))
    funcs = [random_coefficients(spectrum, rng) for _ in range(5)]
    funcs.append(SpectralCoefficients.from_dict(
        spectrum, {(1,): 0.5, (-1,): 0.5}))
    reports = []
    t = 0.5
    for gamma in cfg.pick(cfg.gamma_values, (0.25, 0.5, 1.0)):
        for i, c in enumerate(funcs):
            reports.append(segal_bargmann.verify_thm22(
                c, t, gamma, tol=tol,
                rep_id=f"thm22[t={t},gamma={gamma},f={i:02d}]"))
    # lambda^{4g} * truncated_gamma(t, 2g, lambda^2) must rise through (0, 1]
    from .specfun import truncated_gamma
    for gamma in cfg.pick(cfg.gamma_values, (0.25, 0.5, 1.0)):
        lams = np.arange(1, 21, dtype=float)
        vals = np.array([lam ** (4 * gamma) * truncated_gamma(1.0, 2 * gamma, lam**2)
                         for lam in lams])
        monotone = float(np.min(np.diff(vals)))
        reports.append(VerificationReport(
            id=f"multbound_monotone[gamma={gamma}]",
            lhs=monotone, rhs=0.0, tol=1e-12, check="ge",
            params={"gamma": gamma, "t": 1.0, "lambda2_max": 400},
            meta={"first": vals[0], "last": vals[-1]},
        ))
        reports.append(VerificationReport(
            id=f"multbound_range[gamma={gamma}]",
            lhs=float(vals.max()), rhs=1.0, tol=1e-12, check="le",
            params={"gamma": gamma, "t": 1.0},
            meta={"min": float(vals.min()), "limit_gap": float(1.0 - vals[-1])},
        ))
    return reports


def suite_sobolev(cfg: RunConfig) -> list[VerificationReport]:
    """Isometry form of the fractional holomorphic norm + equivalence stability."""
    tol = cfg.pick_tol(1e-5)
    rng = _rng(cfg, 4)
    t = 0.5
    reports = []
    spectrum = enumerate_spectrum("torus-1", cfg.cutoff)
    funcs = [random_coefficients(spectrum, rng) for _ in range(5)]
    for s in cfg.pick(cfg.s_values, (0.5, 1.0, 1.5, 3.0)):
        for i, c in enumerate(funcs):
            reports.append(frac_sobolev.verify_thm14(
                c, t, s, tol=tol, rep_id=f"thm14[t={t},s={s},f={i:02d}]"))
    # equivalence-constant stability of the generalized transform
    for s in cfg.pick(cfg.s_values, (0.5, 1.5)):
        if s >= 2 * frac_sobolev.sobolev_m(s):
            continue
        ratios = {}
        for cutoff in (cfg.cutoff, 2 * cfg.cutoff):
            spec_n = enumerate_spectrum("torus-1", cutoff)
            vals = []
            for i in range(cfg.n_funcs):
                # per-function child generators keep each f's low modes fixed
                # when the cutoff doubles; only genuine tail content moves
                c = random_coefficients(spec_n, _rng(cfg, 40 + int(10 * s), i),
                                        decay=s + 1.5)
                vals.append(frac_sobolev.remark25_ratio(c, t, s, cfg.scaling))
            ratios[cutoff] = max(vals) / min(vals)
        reports.append(VerificationReport(
            id=f"remark25_stability[s={s}]",
            lhs=ratios[2 * cfg.cutoff], rhs=ratios[cfg.cutoff],
            tol=cfg.pick_tol(0.05),
            params={"t": t, "s": s, "cutoffs": [cfg.cutoff, 2 * cfg.cutoff],
                    "n_funcs": cfg.n_funcs, "seed": cfg.seed,
                    "scaling": cfg.scaling},
            meta={"ratio_small": ratios[cfg.cutoff],
                  "ratio_big": ratios[2 * cfg.cutoff]},
        ))
    return reports


def suite_extension(cfg: RunConfig) -> list[VerificationReport]:
    """Mode-ODE convergence order, universality of c_s, and the lambda^s match."""
    reports = []
    for s, lam2 in ((0.6, 9.0), (0.35, 4.0)):
        orders = []
        res_prev = None
        for per_octave in (10, 20, 40):
            mode = extension.mode_profile(s, lam2, 0.1, 3.2, per_octave)
            res, _ = extension.ode_residual(mode)
            if res_prev is not None:
                orders.append(math.log2(res_prev / res))
            res_prev = res
        measured = float(np.mean(orders))
        reports.append(VerificationReport(
            id=f"ext_order[s={s},lam2={lam2}]",
            lhs=measured, rhs=2.0, tol=0.2, check="abs",
            params={"s": s, "lam2": lam2, "per_octave": [10, 20, 40]},
            meta={"orders": orders},
        ))
    lam2s = (1.0, 4.0, 9.0, 16.0)
    for s in (0.3, 0.5, 0.7):
        cs = {}
        for lam2 in lam2s:
            _, c_s = extension.boundary_limit(s, lam2)
            cs[lam2] = c_s
        vals = np.array(list(cs.values()))
        spread = float(np.std(vals) / abs(np.mean(vals)))
        reports.append(VerificationReport(
            id=f"ext_cs_spread[s={s}]",
            lhs=spread, rhs=0.0, tol=0.01, check="abs",
            params={"s": s, "lam2": list(lam2s)},
            meta={"c_s": {str(k): v for k, v in cs.items()}},
        ))
        c_ref = float(np.mean(vals))
        for lam2 in lam2s:
            est, _ = extension.boundary_limit(s, lam2)
            reports.append(VerificationReport(
                id=f"ext_spectral[s={s},lam2={lam2}]",
                lhs=abs(est / c_ref), rhs=lam2 ** (0.5 * s), tol=0.005,
                params={"s": s, "lam2": lam2},
                meta={"c_ref": c_ref},
            ))
    return reports


def suite_eq31(cfg: RunConfig) -> list[VerificationReport]:
    tol = cfg.pick_tol(1e-6)
    reports = []
    for t in cfg.pick(cfg.t_values, (0.2, 0.25)):
        for k in range(7):
            reports.append(hermite.verify_eq31(k, t, 1, tol=tol))
        for k in range(5):
            reports.append(hermite.verify_eq31(k, t, 2, tol=tol))
    return reports


def suite_eq32(cfg: RunConfig) -> list[VerificationReport]:
    tol = cfg.pick_tol(1e-8)
    reports = []
    for t in cfg.pick(cfg.t_values, (0.25,)):
        for xi in (0.0, 0.5, 1.0):
            for v in (0.0, 0.3, 0.6):
                reports.append(hermite.verify_eq32(t, xi, v, tol=tol))
    return reports


def suite_gutzmer(cfg: RunConfig) -> list[VerificationReport]:
    tol = cfg.pick_tol(1e-6)
    rng = _rng(cfg, 5)
    reports = []
    for i in range(5):
        e = random_expansion(rng, 10)
        for y in (0.0, 0.25, 0.5):
            for v in (0.0, 0.25, 0.5):
                reports.append(hermite.gutzmer(
                    e, y, v, tol=tol,
                    rep_id=f"gutzmer[f={i:02d},y={y},v={v}]"))
    return reports


def suite_hermite_sobolev(cfg: RunConfig) -> list[VerificationReport]:
    """Spectral-vs-quadrature norm equality and equivalence-ratio stability."""
    tol = cfg.pick_tol(1e-5)
    rng = _rng(cfg, 6)
    t = 0.25
    degree = 10
    reports = []
    svals = cfg.pick(cfg.s_values, (0.8, 1.2, 2.5))
    for s in svals:
        gamma = frac_sobolev.sobolev_m(s) - s / 2.0
        grams = {"u": hermite.gram_matrix(degree, t),
                 "ug": hermite.gram_matrix(degree, t, gamma=gamma)}
        for i in range(5):
            e = random_expansion(rng, degree)
            bundle = hermite.hermite_sobolev_norms(e, t, s, grams=grams)
            reports.append(VerificationReport(
                id=f"thm17[s={s},f={i:02d}]",
                lhs=bundle.hts, rhs=bundle.holo_s, tol=tol,
                params={"t": t, "s": s, "degree": degree, "seed": cfg.seed},
                meta={"norms": bundle.to_json()},
            ))
    for s in svals:
        ratios = {}
        for degree_n in (cfg.cutoff, 2 * cfg.cutoff):
            gram = hermite.gram_matrix(degree_n, t)
            vals = []
            for i in range(cfg.n_funcs):
                e = random_expansion(_rng(cfg, 60 + int(10 * s), i), degree_n,
                                     decay=(s + 3.0) / 2.0)
                cts = hermite.tts_transform(e, t, s).values
                num = float(np.real(cts.conj() @ gram @ cts))
                eigs = (2 * np.arange(degree_n + 1) + 1).astype(float)
                den = float(np.sum(e.level_masses() * eigs**s))
                vals.append(num / den)
            ratios[degree_n] = max(vals) / min(vals)
        reports.append(VerificationReport(
            id=f"thm16_stability[s={s}]",
            lhs=ratios[2 * cfg.cutoff], rhs=ratios[cfg.cutoff],
            tol=cfg.pick_tol(0.05),
            params={"t": t, "s": s, "cutoffs": [cfg.cutoff, 2 * cfg.cutoff],
                    "n_funcs": cfg.n_funcs, "seed": cfg.seed},
            meta={"ratio_small": ratios[cfg.cutoff],
                  "ratio_big": ratios[2 * cfg.cutoff]},
        ))
    return reports


SUITES = {
    "plancherel": suite_plancherel,
    "isometry": suite_isometry,
    "thm22": suite_thm22,
    "sobolev": suite_sobolev,
    "extension": suite_extension,
    "gutzmer": suite_gutzmer,
    "eq31": suite_eq31,
    "eq32": suite_eq32,
    "hermite-sobolev": suite_hermite_sobolev,
}


def run_suites(names, cfg: RunConfig) -> list[VerificationReport]:
    if isinstance(names, str):
        names = [names]
    expanded = []
    for name in names:
        if name == "all":
            expanded.extend(SUITES)
        elif name in SUITES:
            expanded.append(name)
        else:
            raise ValueError(f"unknown suite {name!r}; choose from "
                             f"{sorted(SUITES)} or 'all'")
    reports = []
    for name in dict.fromkeys(expanded):
        reports.extend(SUITES[name](cfg))
    return sort_reports(reports)
