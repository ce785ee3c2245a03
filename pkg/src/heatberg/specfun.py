"""Quadrature substrate and the small zoo of special functions everything rests on.

The recurring integrals here are truncated gamma integrals

    (1/Gamma(g)) * int_0^t r^(g-1) exp(-a r) dr

and Riemann-Liouville fractional integrals

    (1/Gamma(q)) * int_0^t (t-r)^(q-1) f(r) dr,

both with algebraic endpoint singularities.  Those are absorbed by a power
substitution (x - a = u**p with p = 1/(1+alpha)) before composite
Gauss-Legendre panels, which keeps the accuracy uniform as the exponent
approaches -1 and the weight concentrates at the endpoint.  Integrands may be
vector valued (last axis = quadrature nodes); convergence is then checked per
component, so columns spanning many orders of magnitude are all resolved to
relative accuracy.

The gamma function itself comes from libm (``math.gamma``/``math.lgamma``),
whose relative error is well below the 1e-13 budget the identity checks need.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from functools import lru_cache

import numpy as np

__all__ = [
    "QuadratureSpec",
    "QuadratureError",
    "RangeError",
    "integrate",
    "gauss_legendre_panels",
    "truncated_gamma",
    "riemann_liouville",
    "laguerre_poly",
    "hermite_fn",
    "hermite_design",
]

# Keeps exp() in the weighted-Hermite prefactor representable.
_EXP_LIMIT = 700.0


class QuadratureError(RuntimeError):
    """Raised when refinement stalls; carries the achieved error estimate."""

    def __init__(self, message: str, estimate: float):
        super().__init__(f"{message} (achieved error estimate {estimate:.3e})")
        self.estimate = estimate


class RangeError(ValueError):
    """Evaluation would overflow the representable floating-point range."""


@dataclass(frozen=True)
class QuadratureSpec:
    """Composite Gauss-Legendre scheme with endpoint-singularity exponents.

    ``alpha``/``beta`` describe the integrand behaviour (x-a)^alpha near the
    left endpoint and (b-x)^beta near the right one; both must exceed -1.
    """

    order: int = 12
    panels: int = 4
    alpha: float = 0.0
    beta: float = 0.0
    abs_tol: float = 1e-12
    rel_tol: float = 1e-10
    max_levels: int = 20

    def __post_init__(self):
        if self.order < 2:
            raise ValueError("Gauss-Legendre order must be >= 2")
        if self.panels < 1:
            raise ValueError("panel count must be >= 1")
        if self.abs_tol <= 0 or self.rel_tol <= 0:
            raise ValueError("tolerances must be positive")
        if self.alpha <= -1 or self.beta <= -1:
            raise ValueError("endpoint singularity exponents must exceed -1")


DEFAULT_SPEC = QuadratureSpec()


@lru_cache(maxsize=64)
def _gl_rule(order: int):
    x, w = np.polynomial.legendre.leggauss(order)
    return x, w


def gauss_legendre_panels(a: float, b: float, panels: int, order: int):
    """Nodes and weights of a composite Gauss-Legendre rule on [a, b]."""
    x, w = _gl_rule(order)
    edges = np.linspace(a, b, panels + 1)
    mid = 0.5 * (edges[:-1] + edges[1:])
    half = 0.5 * (edges[1:] - edges[:-1])
    nodes = (mid[:, None] + half[:, None] * x[None, :]).ravel()
    weights = (half[:, None] * w[None, :]).ravel()
    return nodes, weights


def _is_smooth_exponent(e: float) -> bool:
    return abs(e - round(e)) < 1e-12 and round(e) >= 0


def _adaptive(g, a: float, b: float, spec: QuadratureSpec):
    """Panel-doubling composite quadrature of a smooth (possibly vector) integrand."""
    prev = None
    err = math.inf
    for level in range(spec.max_levels + 1):
        nodes, weights = gauss_legendre_panels(a, b, spec.panels * 2**level, spec.order)
        vals = np.asarray(g(nodes))
        cur = vals @ weights
        if prev is not None:
            diff = np.abs(cur - prev)
            tol = spec.abs_tol + spec.rel_tol * np.abs(cur)
            err = float(np.max(diff)) if diff.size else 0.0
            if np.all(diff <= tol):
                return cur, err
        prev = cur
    raise QuadratureError("quadrature did not converge within max refinement", err)


def integrate(f, a: float, b: float, spec: QuadratureSpec | None = None, **overrides):
    """Integrate ``f`` over [a, b] with endpoint singularities per the spec.

    ``f`` receives an array of nodes and must return values whose *last* axis
    matches the nodes, so vector-valued integrands (e.g. a weight evaluated on
    a whole spatial grid) converge in a single pass.  Returns
    ``(value, error_estimate)``.
    """
    spec = spec or DEFAULT_SPEC
    if overrides:
        spec = replace(spec, **overrides)
    if not b > a:
        if b == a:
            return 0.0, 0.0
        raise ValueError("integration bounds must satisfy a < b")

    left_sub = not _is_smooth_exponent(spec.alpha)
    right_sub = not _is_smooth_exponent(spec.beta)

    if left_sub and right_sub:
        mid = 0.5 * (a + b)
        v1, e1 = integrate(f, a, mid, replace(spec, beta=0.0))
        v2, e2 = integrate(f, mid, b, replace(spec, alpha=0.0))
        return v1 + v2, e1 + e2

    if left_sub:
        p = 1.0 / (1.0 + spec.alpha)
        upper = (b - a) ** (1.0 / p)

        def g(u):
            return f(a + u**p) * (p * u ** (p - 1.0))

        val, err = _adaptive(g, 0.0, upper, spec)
    elif right_sub:
        p = 1.0 / (1.0 + spec.beta)
        upper = (b - a) ** (1.0 / p)

        def g(u):
            return f(b - u**p) * (p * u ** (p - 1.0))

        val, err = _adaptive(g, 0.0, upper, spec)
    else:
        val, err = _adaptive(f, a, b, spec)

    if val.ndim == 0:
        return float(val), err
    return val, err


@lru_cache(maxsize=8192)
def truncated_gamma(t: float, gamma_order: float, a: float,
                    spec: QuadratureSpec | None = None) -> float:
    """(1/Gamma(g)) * int_0^t r^(g-1) exp(-a r) dr.

    The decay rate ``a`` plays the spectral frequency (lambda^2, or 2k+n on
    the Hermite side).  Strictly decreasing in ``a``, strictly increasing in
    ``t``, and bounded by t^g/Gamma(g+1).
    """
    if t <= 0:
        raise ValueError("time horizon t must be positive")
    if gamma_order <= 0:
        raise ValueError("order must be positive")
    if a < 0:
        raise ValueError("decay rate must be nonnegative")
    g = gamma_order
    if a == 0.0:
        return t**g / math.gamma(g + 1.0)
    # exp(-a r) is dead beyond ~60/a; capping the domain keeps the panels on
    # the mass and avoids refining on pure underflow.
    upper = min(t, max(60.0, 10.0 * g) / a)
    val, _ = integrate(
        lambda r: r ** (g - 1.0) * np.exp(-a * r), 0.0, upper,
        spec, alpha=g - 1.0,
    )
    return val / math.gamma(g)


def riemann_liouville(f, t: float, order: float,
                      left_alpha: float = 0.0,
                      spec: QuadratureSpec | None = None):
    """(1/Gamma(q)) * int_0^t (t-r)^(q-1) f(r) dr with q = ``order``.

    The (t-r)^(q-1) endpoint singularity is absorbed by the scheme;
    ``left_alpha`` declares an additional algebraic behaviour of ``f`` itself
    at r -> 0 (the heat weights carry r^(-1/2) there).  ``f`` may be vector
    valued as in :func:`integrate`.
    """
    if t <= 0:
        raise ValueError("time horizon t must be positive")
    if order <= 0:
        raise ValueError("fractional order must be positive")
    q = order

    def integrand(r):
        return (t - r) ** (q - 1.0) * np.asarray(f(r))

    val, _ = integrate(integrand, 0.0, t, spec, alpha=left_alpha, beta=q - 1.0)
    if isinstance(val, np.ndarray):
        return val / math.gamma(q)
    return val / math.gamma(q)


def laguerre_poly(k: int, alpha: int, x):
    """Generalized Laguerre polynomial L_k^alpha(x) by the three-term recurrence."""
    if k < 0:
        raise ValueError("level k must be nonnegative")
    if alpha < 0:
        raise ValueError("type must be nonnegative")
    x = np.asarray(x, dtype=float)
    prev = np.ones_like(x)
    if k == 0:
        return prev if prev.ndim else float(prev)
    cur = 1.0 + alpha - x
    for j in range(1, k):
        prev, cur = cur, ((2 * j + 1 + alpha - x) * cur - (j + alpha) * prev) / (j + 1)
    return cur if cur.ndim else float(cur)


def _weighted_hermite_seed(z: np.ndarray) -> np.ndarray:
    """pi^(-1/4) exp(-z^2/2), guarded against overflow at large |Im z|."""
    expo = -0.5 * z * z
    if np.max(expo.real, initial=-math.inf) > _EXP_LIMIT:
        raise RangeError("exp(-z^2/2) exceeds the floating-point range; "
                         "|Im z| too large for this evaluation")
    return math.pi ** (-0.25) * np.exp(expo)


def hermite_fn(k: int, z):
    """Normalized Hermite function Phi_k at real or complex argument.

    Phi_k(z) = (2^k k! sqrt(pi))^(-1/2) H_k(z) exp(-z^2/2), computed with the
    normalized recurrence

        Phi_{k+1} = sqrt(2/(k+1)) z Phi_k - sqrt(k/(k+1)) Phi_{k-1},

    which avoids factorial overflow and is the holomorphic continuation for
    complex z (same polynomial recurrence under the common weight).
    """
    if k < 0:
        raise ValueError("level k must be nonnegative")
    z = np.asarray(z, dtype=complex)
    prev = _weighted_hermite_seed(z)
    if k == 0:
        return prev if prev.ndim else complex(prev)
    cur = math.sqrt(2.0) * z * prev
    for j in range(1, k):
        prev, cur = cur, math.sqrt(2.0 / (j + 1)) * z * cur - math.sqrt(j / (j + 1.0)) * prev
    return cur if cur.ndim else complex(cur)


def hermite_design(kmax: int, z) -> np.ndarray:
    """Matrix of Phi_0..Phi_kmax at the given points, shape (..., kmax+1).

    One recurrence sweep shared by all levels; this is the synthesis kernel
    for expansions and for design-matrix quadrature of Bergman Gram matrices.
    """
    z = np.asarray(z, dtype=complex)
    out = np.empty(z.shape + (kmax + 1,), dtype=complex)
    out[..., 0] = _weighted_hermite_seed(z)
    if kmax >= 1:
        out[..., 1] = math.sqrt(2.0) * z * out[..., 0]
    for j in range(1, kmax):
        out[..., j + 1] = (
            math.sqrt(2.0 / (j + 1)) * z * out[..., j]
            - math.sqrt(j / (j + 1.0)) * out[..., j - 1]
        )
    return out
