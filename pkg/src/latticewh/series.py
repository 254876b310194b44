"""Circle sampling, Laurent coefficients, and scalar Wiener-Hopf splitting.

Transform convention (fixed package-wide): a row sequence u_x maps to
u(z) = sum_x u_x z^(-x), so the "plus" part (sum over x >= 0) carries
Laurent orders n <= 0 and is analytic outside the annulus, while the
"minus" part (x < 0) carries orders n >= 1 and is analytic inside and
vanishes at z = 0.  Additive splitting is therefore a lossless partition
of coefficients at n = 0 | n = 1.

Multiplicative factorization K = K_plus * K_minus is done through the
unwrapped logarithm: split log K additively and exponentiate each part.
This requires winding number 0 and no zeros on the contour, and fixes the
normalization K_minus(0) = 1 (the minus-type log part vanishes at 0).

Coefficients are computed with the FFT on grids z_k = rho * exp(2*pi*i*k/Nq);
stored coefficients are true Laurent coefficients (radius-independent).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (
    DivergentSeries,
    LengthMismatch,
    NonzeroWinding,
    PhaseStepTooLarge,
    ZeroOnContour,
)

__all__ = [
    "CircleGrid",
    "LaurentSeries",
    "SplitPair",
    "sample",
    "coefficients",
    "additive_split",
    "winding_number",
    "mult_factorize",
    "FactorizationReport",
    "half_transform_exp",
    "series_to_csv",
    "samples_to_csv",
]


@dataclass(frozen=True)
class CircleGrid:
    """Uniform sampling circle: nodes z_k = radius * exp(2*pi*i*k/count)."""

    radius: float = 1.0
    count: int = 4096

    def __post_init__(self):
        if self.radius <= 0:
            raise ValueError("grid radius must be positive")
        if self.count <= 0 or self.count % 2 != 0:
            raise ValueError("grid count must be a positive even integer")

    @property
    def nodes(self) -> np.ndarray:
        k = np.arange(self.count)
        return self.radius * np.exp(2j * np.pi * k / self.count)

    @property
    def orders(self) -> np.ndarray:
        """Laurent orders resolved by this grid: [-count/2, count/2)."""
        return np.arange(-self.count // 2, self.count // 2)


@dataclass(frozen=True)
class LaurentSeries:
    """Laurent coefficients a_n for n in [-Nq/2, Nq/2) on a defining radius.

    coeff[i] is the coefficient of z**n with n = i - len(coeff)//2.
    """

    coeff: np.ndarray
    radius: float = 1.0

    def __post_init__(self):
        c = np.asarray(self.coeff, dtype=complex)
        if c.ndim != 1 or c.size % 2 != 0:
            raise ValueError("coefficient array must be 1-D with even length")
        object.__setattr__(self, "coeff", c)

    @property
    def orders(self) -> np.ndarray:
        n = self.coeff.size
        return np.arange(-n // 2, n // 2)

    def coefficient(self, n: int) -> complex:
        i = n + self.coeff.size // 2
        if not 0 <= i < self.coeff.size:
            return 0j
        return complex(self.coeff[i])

    def values_on(self, grid: CircleGrid) -> np.ndarray:
        """Exact synthesis sum_n a_n z_k^n at the grid nodes (FFT)."""
        if grid.count != self.coeff.size:
            raise LengthMismatch("grid count does not match series length")
        scaled = self.coeff * grid.radius ** self.orders.astype(float)
        return self.coeff.size * np.fft.ifft(np.fft.ifftshift(scaled))

    def __call__(self, z):
        """Evaluate sum_n a_n z^n at arbitrary z (scalar or array)."""
        za = np.asarray(z, dtype=complex)
        half = self.coeff.size // 2
        # nonnegative orders 0..half-1, then negative orders -1..-half in 1/z
        pos = np.polyval(self.coeff[half:][::-1], za)
        neg = np.polyval(self.coeff[:half], za ** -1.0) * za ** -1.0 \
            if np.any(self.coeff[:half]) else np.zeros_like(za)
        out = pos + neg
        return complex(out) if za.ndim == 0 else out

    def __add__(self, other: "LaurentSeries") -> "LaurentSeries":
        if self.coeff.size != other.coeff.size:
            raise LengthMismatch("cannot add series of different lengths")
        return LaurentSeries(self.coeff + other.coeff, self.radius)

    def scaled(self, factor: complex) -> "LaurentSeries":
        return LaurentSeries(self.coeff * factor, self.radius)


@dataclass(frozen=True)
class SplitPair:
    """Additive split: plus holds orders n <= 0, minus holds n >= 1."""

    plus: LaurentSeries
    minus: LaurentSeries


def sample(func, grid: CircleGrid) -> np.ndarray:
    """Evaluate func at every grid node, preserving order.

    Tries one vectorized call first; falls back to a per-node loop, in
    which case any evaluation error is re-raised with the node index and
    location attached.
    """
    nodes = grid.nodes
    try:
        vals = np.asarray(func(nodes), dtype=complex)
        if vals.shape == nodes.shape:
            return vals
    except (TypeError, ValueError):
        pass
    out = np.empty(grid.count, dtype=complex)
    for k, z in enumerate(nodes):
        try:
            out[k] = func(z)
        except Exception as exc:
            exc.args = (f"node {k} (z={z!r}): {exc}",)
            raise
    return out


def coefficients(samples, grid: CircleGrid) -> LaurentSeries:
    """Laurent coefficients from samples on the grid (inverse DFT).

    The returned coefficients satisfy values_on(grid) == samples to
    rounding; they are exact when the sampled function is band-limited
    to orders [-Nq/2, Nq/2) on this circle.
    """
    vals = np.asarray(samples, dtype=complex)
    if vals.shape != (grid.count,):
        raise LengthMismatch(f"expected {grid.count} samples, got {vals.shape}")
    raw = np.fft.fftshift(np.fft.fft(vals)) / grid.count
    coeff = raw * grid.radius ** (-grid.orders.astype(float))
    return LaurentSeries(coeff, grid.radius)


def additive_split(series: LaurentSeries) -> SplitPair:
    """Lossless partition: plus gets n <= 0 (including a_0), minus gets n >= 1."""
    half = series.coeff.size // 2
    plus = np.zeros_like(series.coeff)
    minus = np.zeros_like(series.coeff)
    plus[: half + 1] = series.coeff[: half + 1]
    minus[half + 1:] = series.coeff[half + 1:]
    return SplitPair(
        plus=LaurentSeries(plus, series.radius),
        minus=LaurentSeries(minus, series.radius),
    )


def _phase_steps(samples: np.ndarray) -> np.ndarray:
    """Cyclic node-to-node phase increments wrapped into (-pi, pi]."""
    ph = np.angle(samples)
    d = np.diff(np.append(ph, ph[0]))
    return (d + np.pi) % (2.0 * np.pi) - np.pi


def winding_number(samples) -> int:
    """Net phase turns of the sample loop around the origin.

    Accumulates per-step unwrapped increments; the grid must resolve the
    function well enough that no step exceeds pi/2.
    """
    vals = np.asarray(samples, dtype=complex)
    if np.any(np.abs(vals) < 1e-14):
        raise ZeroOnContour("sample with modulus < 1e-14 on the contour")
    steps = _phase_steps(vals)
    worst = float(np.max(np.abs(steps)))
    if worst > np.pi / 2:
        raise PhaseStepTooLarge(f"max phase step {worst:.3f} rad exceeds pi/2")
    return int(round(float(np.sum(steps)) / (2.0 * np.pi)))


@dataclass(frozen=True)
class FactorizationReport:
    winding: int
    reconstruction_residual: float
    leakage_plus: float
    leakage_minus: float
    count: int
    radius: float

    def as_dict(self) -> dict:
        return {
            "winding": self.winding,
            "reconstruction_residual": self.reconstruction_residual,
            "leakage_plus": self.leakage_plus,
            "leakage_minus": self.leakage_minus,
            "count": self.count,
            "radius": self.radius,
        }


def mult_factorize(samples, grid: CircleGrid):
    """Multiplicative factorization K = K_plus * K_minus on the grid.

    K_plus is analytic and invertible outside the sampling circle
    (coefficients at n <= 0 only), K_minus inside with K_minus(0) = 1.
    Returns (K_plus, K_minus, report); the report carries the max relative
    reconstruction error of the truncated factor series against the input
    samples and the wrong-side coefficient leakage that was discarded.

    Raises NonzeroWinding if the index is not 0 (this factorization form
    does not exist then) and ZeroOnContour for vanishing samples.
    """
    vals = np.asarray(samples, dtype=complex)
    wn = winding_number(vals)
    if wn != 0:
        raise NonzeroWinding(wn)

    steps = _phase_steps(vals)
    phase = np.angle(vals[0]) + np.concatenate(([0.0], np.cumsum(steps[:-1])))
    log_samples = np.log(np.abs(vals)) + 1j * phase

    split = additive_split(coefficients(log_samples, grid))
    plus_vals = np.exp(split.plus.values_on(grid))
    minus_vals = np.exp(split.minus.values_on(grid))

    half = grid.count // 2
    plus_raw = coefficients(plus_vals, grid)
    minus_raw = coefficients(minus_vals, grid)

    def _enforce(series, keep_low: bool):
        coeff = series.coeff.copy()
        scale = float(np.max(np.abs(coeff)))
        if keep_low:  # plus factor: orders n <= 0
            leak = float(np.max(np.abs(coeff[half + 1:]))) / scale
            coeff[half + 1:] = 0.0
        else:  # minus factor: orders n >= 0 survive exponentiation
            leak = float(np.max(np.abs(coeff[:half]))) / scale
            coeff[:half] = 0.0
        return LaurentSeries(coeff, grid.radius), leak

    plus_factor, leak_plus = _enforce(plus_raw, keep_low=True)
    minus_factor, leak_minus = _enforce(minus_raw, keep_low=False)

    recon = plus_factor.values_on(grid) * minus_factor.values_on(grid)
    residual = float(np.max(np.abs(recon - vals) / np.abs(vals)))
    report = FactorizationReport(
        winding=wn,
        reconstruction_residual=residual,
        leakage_plus=leak_plus,
        leakage_minus=leak_minus,
        count=grid.count,
        radius=grid.radius,
    )
    return plus_factor, minus_factor, report


def half_transform_exp(amplitude: complex, phase: complex, side: str, strict: bool = True):
    """Closed-form half-range transform of the exponential A q^x.

    With q = exp(i*kx), the incident row A exp(-i*kx*x) transforms to

        minus (x <= -1):  A q z / (1 - q z),     valid for |q z| < 1,
        plus  (x >=  0):  A q z / (q z - 1),     valid for |q z| > 1.

    Returns a callable of z.  With strict=True (default) evaluation
    outside the stated region raises DivergentSeries; strict=False
    evaluates the analytic continuation (used for forcing assembly on
    contours where the defining sum diverges but the function continues).
    """
    if side not in ("plus", "minus"):
        raise ValueError("side must be 'plus' or 'minus'")
    a = complex(amplitude)
    q = complex(phase)

    def transform(z):
        za = np.asarray(z, dtype=complex)
        qz = q * za
        if strict:
            mod = np.abs(qz)
            if side == "minus" and np.any(mod >= 1.0):
                raise DivergentSeries("minus transform requires |q z| < 1")
            if side == "plus" and np.any(mod <= 1.0):
                raise DivergentSeries("plus transform requires |q z| > 1")
        if side == "minus":
            out = a * qz / (1.0 - qz)
        else:
            out = a * qz / (qz - 1.0)
        return complex(out) if za.ndim == 0 else out

    return transform


def series_to_csv(series: LaurentSeries, path, header_lines=()):
    """Write coefficients as CSV columns n, re, im."""
    with open(path, "w") as fh:
        for line in header_lines:
            fh.write(f"# {line}\n")
        fh.write("n,re,im\n")
        for n, c in zip(series.orders, series.coeff):
            fh.write(f"{n},{c.real:.17e},{c.imag:.17e}\n")


def samples_to_csv(grid: CircleGrid, samples, path, header_lines=()):
    """Write samples as CSV columns k, z_re, z_im, f_re, f_im."""
    vals = np.asarray(samples, dtype=complex)
    nodes = grid.nodes
    with open(path, "w") as fh:
        for line in header_lines:
            fh.write(f"# {line}\n")
        fh.write("k,z_re,z_im,f_re,f_im\n")
        for k in range(grid.count):
            z, f = nodes[k], vals[k]
            fh.write(f"{k},{z.real:.17e},{z.imag:.17e},{f.real:.17e},{f.imag:.17e}\n")
