"""Spectral data and Fourier analysis on the torus T^n and on SU(2).

The torus side is complete (functions on the group, complexified
evaluations); SU(2) is restricted to class functions, which exercises
dimensions d > 1 in every spectral formula while the characters

    chi_l(theta) = sin((l+1) theta) / sin(theta) = U_l(cos theta)

do all the work.  Frequencies: lambda^2 = |m|^2 on the torus and
lambda_l^2 = l(l+2) on SU(2); the latter is validated numerically by the
radial-Laplacian test rather than asserted (see tests).

Coefficients are stored as character-expansion amplitudes a: for a class
function f = sum a_l chi_l the per-label Plancherel mass is |a_l|^2, and the
Fourier-transform scalar (pi(f) = c * Id) is recovered as c = a / d.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import product

import numpy as np

from .specfun import gauss_legendre_panels

__all__ = [
    "IrrepSpectrum",
    "SpectralCoefficients",
    "GridFunction",
    "SynthesisResult",
    "enumerate_spectrum",
    "analyze",
    "synthesize",
    "heat_kernel",
    "torus_grid",
    "su2_grid",
    "l2_norm_sq",
]

GROUPS = ("torus-1", "torus-2", "torus-3", "su2")


def _torus_dim(group: str) -> int:
    return int(group.split("-")[1])


@dataclass(frozen=True, eq=False)
class IrrepSpectrum:
    """Enumerated irreducible labels with dimensions and frequencies.

    Entries are sorted by (lambda^2, label) so enumerations at different
    cutoffs agree on their common prefix.
    """

    group: str
    cutoff: int
    labels: tuple
    dims: np.ndarray
    lambda2: np.ndarray

    @property
    def is_torus(self) -> bool:
        return self.group.startswith("torus")

    @property
    def n(self) -> int:
        if not self.is_torus:
            raise ValueError("dimension only defined for torus spectra")
        return _torus_dim(self.group)

    def __len__(self) -> int:
        return len(self.labels)

    def index(self, label) -> int:
        return _label_index(self)[label]


@lru_cache(maxsize=128)
def _cached_spectrum(group: str, cutoff: int) -> IrrepSpectrum:
    if group == "su2":
        labels = tuple(range(cutoff + 1))
        dims = np.arange(1, cutoff + 2, dtype=float)
        lam2 = np.array([l * (l + 2) for l in labels], dtype=float)
        return IrrepSpectrum(group, cutoff, labels, dims, lam2)
    if group in GROUPS:
        n = _torus_dim(group)
        raw = sorted(
            product(range(-cutoff, cutoff + 1), repeat=n),
            key=lambda m: (sum(x * x for x in m), m),
        )
        labels = tuple(raw)
        dims = np.ones(len(labels))
        lam2 = np.array([sum(x * x for x in m) for m in labels], dtype=float)
        return IrrepSpectrum(group, cutoff, labels, dims, lam2)
    raise ValueError(f"unknown group {group!r}; expected one of {GROUPS}")


def enumerate_spectrum(group: str, cutoff: int) -> IrrepSpectrum:
    if cutoff < 0:
        raise ValueError("cutoff must be nonnegative")
    return _cached_spectrum(group, cutoff)


def _label_index(spectrum: IrrepSpectrum) -> dict:
    # cached per spectrum instance (spectra themselves are lru-cached)
    if not hasattr(spectrum, "_index"):
        object.__setattr__(spectrum, "_index",
                           {lab: i for i, lab in enumerate(spectrum.labels)})
    return spectrum._index


@dataclass
class SpectralCoefficients:
    """Character-expansion amplitudes aligned with a spectrum's enumeration."""

    spectrum: IrrepSpectrum
    values: np.ndarray

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=complex)
        if self.values.shape != (len(self.spectrum),):
            raise ValueError("one coefficient per spectrum label required")

    @classmethod
    def zeros(cls, spectrum: IrrepSpectrum) -> "SpectralCoefficients":
        return cls(spectrum, np.zeros(len(spectrum), dtype=complex))

    @classmethod
    def from_dict(cls, spectrum: IrrepSpectrum, entries: dict) -> "SpectralCoefficients":
        c = cls.zeros(spectrum)
        for label, amp in entries.items():
            c.values[spectrum.index(label)] = amp
        return c

    def multiplied(self, multipliers) -> "SpectralCoefficients":
        return SpectralCoefficients(self.spectrum, self.values * np.asarray(multipliers))

    def plancherel_masses(self) -> np.ndarray:
        """Per-label mass d_pi * ||pi(f)||^2 = |a|^2."""
        return np.abs(self.values) ** 2

    def pi_scalars(self) -> np.ndarray:
        """The scalar c of pi(f) = c*Id, so that d_pi*||pi(f)||^2 = d^2 |c|^2."""
        return self.values / self.spectrum.dims

    def l2_sq(self) -> float:
        return float(np.sum(self.plancherel_masses()))

    def save_csv(self, path) -> None:
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh, quoting=csv.QUOTE_NONNUMERIC)
            w.writerow(["label", "re", "im"])
            for label, a in zip(self.spectrum.labels, self.values):
                key = str(label) if self.spectrum.group == "su2" \
                    else ",".join(str(x) for x in label)
                w.writerow([key, a.real, a.imag])

    @classmethod
    def load_csv(cls, path, group: str) -> "SpectralCoefficients":
        entries = {}
        with open(path, newline="") as fh:
            rows = csv.reader(fh)
            header = next(rows)
            if [h.strip() for h in header] != ["label", "re", "im"]:
                raise ValueError("coefficient CSV must have header label,re,im")
            for key, re_s, im_s in rows:
                if group == "su2":
                    label = int(key)
                else:
                    label = tuple(int(x) for x in key.split(","))
                entries[label] = float(re_s) + 1j * float(im_s)
        if group == "su2":
            cutoff = max(entries, default=0)
        else:
            cutoff = max((max(abs(x) for x in lab) for lab in entries), default=0)
        return cls.from_dict(enumerate_spectrum(group, cutoff), entries)


@dataclass
class GridFunction:
    """Sampled function: real torus grid, SU(2) angle grid, or complexified grid."""

    kind: str                      # 'torus' | 'su2' | 'torus-complex'
    axes: tuple
    values: np.ndarray
    weights: np.ndarray | None = None
    dim: int = 1

    def __post_init__(self):
        expected = tuple(len(a) for a in self.axes)
        if self.values.shape != expected:
            raise ValueError(f"sample shape {self.values.shape} != grid shape {expected}")
        if self.kind == "torus-complex":
            ys = self.axes[-1]
            if not np.max(np.abs(ys)) > 0:
                raise ValueError("complexified grid needs a nontrivial imaginary range")


def torus_grid(n: int, m_points: int, fn=None) -> GridFunction:
    """Uniform grid x_j = 2 pi j / M per axis; optionally sample ``fn`` on it."""
    xs = 2.0 * math.pi * np.arange(m_points) / m_points
    axes = (xs,) * n
    if fn is None:
        values = np.zeros((m_points,) * n, dtype=complex)
    else:
        mesh = np.meshgrid(*axes, indexing="ij")
        values = np.asarray(fn(*mesh), dtype=complex)
    return GridFunction("torus", axes, values, dim=n)


def su2_grid(n_nodes: int, fn=None) -> GridFunction:
    """Gauss-Legendre nodes on the maximal-torus angle theta in (0, pi)."""
    panels = max(2, n_nodes // 16)
    thetas, w = gauss_legendre_panels(0.0, math.pi, panels, 16)
    values = np.zeros_like(thetas, dtype=complex) if fn is None \
        else np.asarray(fn(thetas), dtype=complex)
    return GridFunction("su2", (thetas,), values, weights=w)


def l2_norm_sq(f: GridFunction) -> float:
    """||f||^2 on the group by quadrature, Haar measure of total mass 1."""
    if f.kind == "torus":
        return float(np.mean(np.abs(f.values) ** 2))
    if f.kind == "su2":
        integ = np.abs(f.values) ** 2 * np.sin(f.axes[0]) ** 2
        return float((2.0 / math.pi) * np.sum(f.weights * integ))
    raise ValueError("l2 norm defined for group-side grids only")


def analyze(f: GridFunction, spectrum: IrrepSpectrum) -> SpectralCoefficients:
    """Fourier-analyze a sampled function against the given spectrum.

    Torus grids go through the FFT (grid size must exceed 2*cutoff to rule
    out aliasing); SU(2) class functions are projected on characters with the
    Weyl-measure quadrature (2/pi) sin^2(theta) dtheta.
    """
    if spectrum.group == "su2":
        if f.kind != "su2":
            raise ValueError("su2 spectrum needs an su2 angle grid")
        thetas, w = f.axes[0], f.weights
        sin2 = np.sin(thetas) ** 2
        amps = np.empty(len(spectrum), dtype=complex)
        for i, l in enumerate(spectrum.labels):
            chi = np.sin((l + 1) * thetas) / np.sin(thetas)
            amps[i] = (2.0 / math.pi) * np.sum(w * f.values * chi * sin2)
        return SpectralCoefficients(spectrum, amps)

    if f.kind != "torus":
        raise ValueError("torus spectrum needs a real torus grid")
    n = spectrum.n
    m_points = len(f.axes[0])
    if m_points <= 2 * spectrum.cutoff:
        raise ValueError(
            f"grid size {m_points} aliases cutoff {spectrum.cutoff}; need M > 2N")
    chat = np.fft.fftn(f.values) / m_points**n
    amps = np.empty(len(spectrum), dtype=complex)
    for i, label in enumerate(spectrum.labels):
        idx = tuple(mm % m_points for mm in label)
        amps[i] = chat[idx]
    return SpectralCoefficients(spectrum, amps)


@dataclass
class SynthesisResult:
    values: np.ndarray
    tail_bound: float
    warning: bool = False


def _chebyshev_u(lmax: int, x: np.ndarray) -> np.ndarray:
    """U_0..U_lmax at (complex) x, shape (..., lmax+1)."""
    out = np.empty(x.shape + (lmax + 1,), dtype=complex)
    out[..., 0] = 1.0
    if lmax >= 1:
        out[..., 1] = 2.0 * x
    for l in range(1, lmax):
        out[..., l + 1] = 2.0 * x * out[..., l] - out[..., l - 1]
    return out


def synthesize(c: SpectralCoefficients, points, tol: float = 1e-9) -> SynthesisResult:
    """Evaluate the expansion at (complexified) points.

    Torus: F(z) = sum a_m exp(i m . z); SU(2): F(w) = sum a_l chi_l(w) with
    chi_l continued through U_l(cos w).  The reported tail bound is the
    absolute mass of the outermost frequency shell times the growth factor
    exp(N * max|Im|); a warning flags tail bounds above ``tol``.
    """
    spec = c.spectrum
    if spec.group == "su2":
        w = np.asarray(points, dtype=complex)
        u = _chebyshev_u(spec.cutoff, np.cos(w))
        values = u @ c.values
        shell = np.sum(np.abs(c.values[np.array(spec.labels) == spec.cutoff]))
        grow = math.exp((spec.cutoff + 1) * float(np.max(np.abs(w.imag), initial=0.0)))
        tail = float(shell * grow)
        return SynthesisResult(values, tail, tail > tol)

    z = np.asarray(points, dtype=complex)
    if spec.n == 1:
        mvec = np.array([m[0] for m in spec.labels], dtype=float)
        phases = np.exp(1j * z[..., None] * mvec)
        values = phases @ c.values
        ymax = float(np.max(np.abs(z.imag), initial=0.0))
    else:
        pts = np.atleast_2d(np.asarray(points, dtype=complex))
        mmat = np.array(spec.labels, dtype=float)        # (nlab, n)
        values = np.exp(1j * pts @ mmat.T) @ c.values
        ymax = float(np.max(np.abs(pts.imag), initial=0.0))
    infnorm = np.array([max(abs(x) for x in lab) for lab in spec.labels])
    shell = np.sum(np.abs(c.values[infnorm == spec.cutoff]))
    tail = float(shell * math.exp(spec.cutoff * ymax))
    return SynthesisResult(values, tail, tail > tol)


def heat_kernel(group: str, t: float, point, cutoff: int | None = None,
                tol: float = 1e-12):
    """Heat kernel q_t (generator Delta/2) as a truncated character sum.

    Returns ``(value, tail_bound)``; raises if no cutoff within the cap keeps
    the tail bound below ``tol``.
    """
    if t <= 0:
        raise ValueError("t must be positive")
    n_target = cutoff

    def torus_tail(n_cut):
        x = math.exp(-0.5 * t * n_cut)
        return 2.0 * x ** (n_cut + 1) / (1.0 - x)

    def su2_tail(n_cut):
        x = math.exp(-0.5 * t * n_cut)
        # (l+1)^2 <= 2(N+2)^2 + 2j^2 for l = N+1+j
        geo = x ** (n_cut + 1) / (1.0 - x)
        quad = 2.0 * x * (1.0 + x) / (1.0 - x) ** 3 * x ** (n_cut + 1)
        return 2.0 * (n_cut + 2) ** 2 * geo + 2.0 * quad

    if group == "torus-1":
        x = float(point)
        n_cut = n_target or 8
        while torus_tail(n_cut) > tol:
            n_cut *= 2
            if n_cut > 4096:
                raise ValueError("cutoff cap exceeded; enlarge N or loosen tol")
        m = np.arange(-n_cut, n_cut + 1)
        value = float(np.sum(np.exp(-0.5 * t * m**2) * np.cos(m * x)))
        return value, torus_tail(n_cut)
    if group == "su2":
        theta = float(point)
        n_cut = n_target or 8
        while su2_tail(n_cut) > tol:
            n_cut *= 2
            if n_cut > 4096:
                raise ValueError("cutoff cap exceeded; enlarge N or loosen tol")
        ls = np.arange(n_cut + 1)
        if abs(math.sin(theta)) < 1e-12:
            chi = ls + 1.0
        else:
            chi = np.sin((ls + 1) * theta) / math.sin(theta)
        value = float(np.sum((ls + 1) * np.exp(-0.5 * t * ls * (ls + 2)) * chi))
        return value, su2_tail(n_cut)
    raise ValueError("heat_kernel supports torus-1 and su2 point evaluation")
