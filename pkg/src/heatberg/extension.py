"""Per-mode solutions of the degenerate extension problem.

On a single frequency lambda the extension problem collapses to the scalar ODE

    b''(rho) + ((1-s)/rho) b'(rho) - lambda^2 b(rho) = 0,
    b(0+) = 1,  b decaying,

whose solution is the normalized mode of the subordinated heat integral

    b(rho) = rho^s int_0^inf exp(-rho^2/(4u)) exp(-u lambda^2) u^(-s/2-1) du
             / (2^s Gamma(s/2)).

The normalization makes the boundary value exactly 1 (the raw integral equals
2^s Gamma(s/2) at lambda = 0); the conventional 1/Gamma(s) prefactor does not
do that, and the boundary condition wins here.  The weighted boundary
derivative rho^(1-s) b'(rho) tends to c_s lambda^s, with c_s independent of
lambda; that limit is extracted by Richardson extrapolation with the known
error exponents {2-s, 2, 4-s}.

Integrals are evaluated in the log variable u = e^w, where the integrand
decays double-exponentially on both sides of its peak; the relevant interior
scales u = rho^2/4 and u = 1/lambda^2 sit inside the window by construction.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .specfun import integrate

__all__ = [
    "ExtensionMode",
    "extension_mode",
    "mode_profile",
    "ode_residual",
    "boundary_limit",
]

_RHO_FLOOR = 1e-8


def _log_integral(s_exp: float, lam2: float, rho: float) -> float:
    """int_0^inf exp(-rho^2/(4u) - lam2 u) u^(-s_exp/2 - 1) du via u = e^w."""
    a_left = 0.25 * rho * rho
    half_s = 0.5 * s_exp

    def neg_log(w):
        return a_left * math.exp(-w) + lam2 * math.exp(w) + half_s * w

    # peak of the integrand: lam2 X^2 + half_s X - a_left = 0 with X = e^w
    x_peak = (-half_s + math.sqrt(half_s * half_s + 4.0 * lam2 * a_left)) / (2.0 * lam2)
    w_peak = math.log(x_peak)
    floor = neg_log(w_peak) + 45.0
    w_lo = w_peak
    while neg_log(w_lo) < floor:
        w_lo -= 1.0
    w_hi = w_peak
    while neg_log(w_hi) < floor:
        w_hi += 1.0

    def integrand(w):
        return np.exp(-(a_left * np.exp(-w) + lam2 * np.exp(w) + half_s * w))

    val, _ = integrate(integrand, w_lo, w_hi,
                       panels=max(8, int(w_hi - w_lo)), rel_tol=1e-12)
    return float(val)


def _mode_and_derivative(s: float, lam2: float, rho: float) -> tuple[float, float]:
    norm = 2.0**s * math.gamma(0.5 * s)
    g_s = _log_integral(s, lam2, rho)
    g_s2 = _log_integral(s + 2.0, lam2, rho)
    b = rho**s * g_s / norm
    # d/drho of exp(-rho^2/4u) pulls down -(rho/2u); same integral at s+2
    bprime = (s / rho) * b - 0.5 * rho ** (s + 1) * g_s2 / norm
    return b, bprime


def extension_mode(s: float, lam2: float, rho: float) -> float:
    """Normalized mode value b(rho) with b(0+) = 1.

    lam2 = 0 is the constant solution.  Below rho ~ 1e-8 the evaluation is
    replaced by the boundary asymptote b = 1 + O(rho^s), whose error bound at
    that scale is far below quadrature noise.
    """
    if not 0.0 < s < 2.0:
        raise ValueError("fractional parameter s must lie in (0, 2)")
    if rho <= 0:
        raise ValueError("rho must be positive")
    if lam2 < 0:
        raise ValueError("lam2 must be nonnegative")
    if lam2 == 0.0:
        return 1.0
    if rho < _RHO_FLOOR:
        return 1.0
    return _mode_and_derivative(s, lam2, rho)[0]


@dataclass
class ExtensionMode:
    """Mode profile on a geometric rho grid, with ODE residuals attached."""

    s: float
    lam2: float
    rhos: np.ndarray
    b: np.ndarray
    residuals: np.ndarray = field(default=None)


def mode_profile(s: float, lam2: float, rho_min: float = 0.05,
                 rho_max: float = 4.0, per_octave: int = 20) -> ExtensionMode:
    if per_octave < 5:
        raise ValueError("need at least 5 points per octave")
    octaves = math.log2(rho_max / rho_min)
    count = int(math.ceil(octaves * per_octave)) + 1
    rhos = rho_min * 2.0 ** (np.arange(count) / per_octave)
    b = np.array([extension_mode(s, lam2, r) for r in rhos])
    return ExtensionMode(s, lam2, rhos, b)


def ode_residual(mode: ExtensionMode) -> tuple[float, float]:
    """Max |b'' + ((1-s)/rho) b' - lam2 b| by nonuniform central differences.

    Returns (max_residual, reference_scale) where the reference is the h^2
    magnitude the residual should track; refining the grid (more points per
    octave) should shrink the residual at second order.
    """
    rho, b, s, lam2 = mode.rhos, mode.b, mode.s, mode.lam2
    hp = rho[2:] - rho[1:-1]
    hm = rho[1:-1] - rho[:-2]
    denom = hp * hm * (hp + hm)
    b_m, b_0, b_p = b[:-2], b[1:-1], b[2:]
    d1 = (hm**2 * b_p + (hp**2 - hm**2) * b_0 - hp**2 * b_m) / denom
    d2 = 2.0 * (hm * b_p - (hp + hm) * b_0 + hp * b_m) / denom
    res = d2 + (1.0 - s) / rho[1:-1] * d1 - lam2 * b_0
    mode.residuals = res
    h_rel = float(np.mean(hp / rho[1:-1]))
    scale = h_rel**2 * max(lam2, 1.0) * float(np.max(np.abs(b)))
    return float(np.max(np.abs(res))), scale


def boundary_limit(s: float, lam2: float, rho0: float = 0.3,
                   levels: int = 7) -> tuple[float, float]:
    """Richardson-extrapolated limit of rho^(1-s) b'(rho) as rho -> 0.

    Returns (limit_estimate, c_s) with c_s = estimate / lambda^s; the contract
    is that c_s comes out independent of lambda.  Restricted to s in (0, 1),
    the regime where the weighted derivative has a classical limit.
    """
    if not 0.0 < s < 1.0:
        raise ValueError("boundary limit implemented for s in (0, 1)")
    if lam2 == 0.0:
        return 0.0, 0.0
    if levels < 5:
        raise ValueError("need at least 5 Richardson levels")
    rhos = rho0 * 2.0 ** (-np.arange(levels))
    d = np.empty(levels)
    for i, rho in enumerate(rhos):
        _, bp = _mode_and_derivative(s, lam2, rho)
        d[i] = rho ** (1.0 - s) * bp
    # the expansion of rho^(1-s) b' runs through rho^(2-s), rho^2, rho^(4-s), ...
    seq = d
    for expo in (2.0 - s, 2.0, 4.0 - s, 4.0):
        if len(seq) < 2:
            break
        factor = 2.0**expo
        seq = (factor * seq[1:] - seq[:-1]) / (factor - 1.0)
    estimate = float(seq[-1])
    spread = float(abs(seq[-1] - seq[-2])) if len(seq) >= 2 else math.inf
    if not math.isfinite(estimate) or spread > 1e-4 * max(1.0, abs(estimate)):
        raise RuntimeError(
            f"Richardson extrapolation did not settle (last delta {spread:.2e})")
    return estimate, estimate / lam2 ** (0.5 * s)
