"""Branch functions, dispersion solving and incident-wave parameterization.

Three lattice geometries are supported (square, triangular in slant
coordinates, honeycomb in the matching slant coordinates).  Everything in
the transform domain is driven by a per-row propagation multiplier:

* square:      lam(z), the root of  lam + 1/lam + z + 1/z - 4 + w^2 = 0
               with |lam| <= 1, realized as lam = (r - h)/(r + h) where
               h(z) = sqrt(2 - z - 1/z - w^2), r(z) = sqrt(h^2 + 4);
* triangular:  t(z), the root of  t^2 - F(z) t + z = 0 with |t| < 1,
               F(z) = (6 - z - 1/z - (3/2) w^2) / (1 + 1/z);
* honeycomb:   same quadratic with w^2 replaced by the reduced frequency
               wT^2 = (3/2) w^2 (2 - w^2/4).

All square roots use the principal branch (cut on the negative real
axis).  The quadratic roots are selected by modulus, which is robust
across the branch-cut geometry; the closed square-lattice form is kept
consistent by flipping the sign of h when the principal branches land on
the outer root.

Evaluation is vectorized: ``z`` may be a complex scalar or an ndarray.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import (
    DegeneratePoint,
    EmptyAnnulus,
    NoConvergence,
    OnBranchCut,
    OutsidePassBand,
    PoleAtMinusOne,
    RootSelectionAmbiguous,
)

__all__ = [
    "Lattice",
    "Frequency",
    "Incidence",
    "BranchValue",
    "principal_sqrt",
    "square_branches",
    "tri_branch",
    "hex_branch",
    "hex_reduced_omega_sq",
    "hex_coupling",
    "dispersion_solve",
    "dispersion_residual",
    "annulus_bounds",
]

_CUT_TOL = 1e-12
_POLE_TOL = 1e-13
_DEGENERATE_TOL = 1e-14


class Lattice(str, Enum):
    SQUARE = "square"
    TRIANGULAR = "triangular"
    HONEYCOMB = "honeycomb"


@dataclass(frozen=True)
class Frequency:
    """Nondimensional complex frequency w = w1 + i w2.

    Material constants are absorbed into w, so this is the only
    frequency-like quantity in the package.  Kernel evaluation tolerates
    w2 = 0 (off branch cuts); solver-grade operations require w2 > 0.
    """

    omega: complex

    def __post_init__(self):
        w = complex(self.omega)
        if w.real <= 0:
            raise ValueError(f"frequency real part must be positive, got {w}")
        if w.imag < 0:
            raise ValueError(f"frequency imaginary part must be >= 0, got {w}")
        object.__setattr__(self, "omega", w)

    @property
    def omega1(self) -> float:
        return self.omega.real

    @property
    def omega2(self) -> float:
        return self.omega.imag

    def require_solver_grade(self):
        if self.omega2 <= 0:
            raise ValueError("solver-grade operation requires Im(omega) > 0")
        return self


def _omega_value(omega) -> complex:
    """Accept a Frequency or a bare complex (closed-form point checks use w=0)."""
    if isinstance(omega, Frequency):
        return omega.omega
    return complex(omega)


@dataclass(frozen=True)
class Incidence:
    """Incident plane wave A exp(-i kx x - i ky y) in lattice indices.

    omega is the frequency the wavenumbers were solved at; it is
    redundant with the dispersion relation but kept for exact reuse.
    """

    amplitude: complex
    theta: float
    kappa_x: complex
    kappa_y: complex
    lattice: Lattice
    hex_ratio: complex | None = None
    omega: complex | None = None

    @property
    def kappa2(self) -> float:
        """Positive imaginary part of sqrt(kx^2 + ky^2) for damped waves."""
        return principal_sqrt(self.kappa_x**2 + self.kappa_y**2).imag

    def field(self, x, y, sublattice: str = "u"):
        """Incident value at site (x, y); honeycomb v-sites carry hex_ratio."""
        amp = self.amplitude
        if sublattice == "v":
            if self.hex_ratio is None:
                raise ValueError("v-sublattice requested for a non-honeycomb incidence")
            amp = amp * self.hex_ratio
        return amp * np.exp(-1j * (self.kappa_x * np.asarray(x) + self.kappa_y * np.asarray(y)))


@dataclass(frozen=True)
class BranchValue:
    """Square-lattice branch triple (h, r, lam) with r^2 - h^2 = 4."""

    h: complex
    r: complex
    lam: complex


def principal_sqrt(w):
    """Square root with branch cut on the negative real axis, Re >= 0.

    The cut-adjacent continuation follows the sign of Im(w): values
    approached from above the cut map to +i sqrt(|w|).
    """
    arr = np.asarray(w, dtype=complex)
    out = np.sqrt(arr)
    if arr.ndim == 0:
        return complex(out)
    return out


def _maybe_scalar(arr, scalar_input):
    if scalar_input:
        return complex(arr)
    return arr


def square_branches(z, omega, on_cut_check: bool = True):
    """Evaluate (h, r, lam) for the square lattice at z.

    h = sqrt(2 - z - 1/z - w^2), r = sqrt(h^2 + 4), lam = (r - h)/(r + h).
    The sign of h is flipped wherever the principal branches would give
    |lam| > 1, so the returned triple always satisfies both
    lam = (r - h)/(r + h) and |lam| <= 1.

    Raises OnBranchCut when |lam| is within 1e-12 of 1 (the two quadratic
    roots coincide in modulus there) and DegeneratePoint if r + h ~ 0.
    """
    w2 = _omega_value(omega) ** 2
    za = np.asarray(z, dtype=complex)
    scalar = za.ndim == 0
    za = np.atleast_1d(za)
    if np.any(za == 0):
        raise ValueError("square_branches requires z != 0")

    h = np.sqrt(2.0 - za - 1.0 / za - w2)
    r = np.sqrt(h * h + 4.0)
    if np.any(np.abs(r + h) < _DEGENERATE_TOL) or np.any(np.abs(r - h) < _DEGENERATE_TOL):
        raise DegeneratePoint("r + h (or r - h) vanished; lam undefined")
    lam = (r - h) / (r + h)
    outside = np.abs(lam) > 1.0
    lam = np.where(outside, 1.0 / lam, lam)
    h = np.where(outside, -h, h)
    if on_cut_check and np.any(np.abs(np.abs(lam) - 1.0) < _CUT_TOL):
        raise OnBranchCut("both propagation roots have unit modulus at this z")
    return BranchValue(
        h=_maybe_scalar(h if not scalar else h[0], scalar),
        r=_maybe_scalar(r if not scalar else r[0], scalar),
        lam=_maybe_scalar(lam if not scalar else lam[0], scalar),
    )


def _slant_root(z, omega_sq_eff, ambiguity_check: bool = True):
    """Modulus-selected root of (1 + 1/z) t^2 - G t + (1 + z) = 0.

    G = 6 - z - 1/z - (3/2) * omega_sq_eff.  This is the quadratic for the
    triangular/honeycomb row multiplier cleared of the pole of F at
    z = -1; there the small root degenerates smoothly to t = 0 (the other
    root escapes to infinity), so evaluation is stable on sampling grids
    that contain z = -1 exactly.
    """
    za = np.asarray(z, dtype=complex)
    scalar = za.ndim == 0
    za = np.atleast_1d(za)
    if np.any(za == 0):
        raise ValueError("slant-lattice root requires z != 0")

    a = 1.0 + 1.0 / za
    b = -(6.0 - za - 1.0 / za - 1.5 * omega_sq_eff)
    c = 1.0 + za
    disc = np.sqrt(b * b - 4.0 * a * c)
    # q-method: pick the sign that avoids cancellation in -b -/+ disc.
    plus = b + disc
    minus = b - disc
    q = np.where(np.abs(plus) >= np.abs(minus), -plus / 2.0, -minus / 2.0)

    at_pole = np.abs(a) < _POLE_TOL
    with np.errstate(divide="ignore", invalid="ignore"):
        root_big = np.where(at_pole, np.inf, q / np.where(at_pole, 1.0, a))
        root_small = np.where(np.abs(q) > 0, c / np.where(np.abs(q) > 0, q, 1.0), 0.0)
    # both roots ~0 can only happen when c ~ 0 and q ~ 0 simultaneously,
    # i.e. exactly the z = -1 degeneracy where the inside root is 0.
    m_big = np.abs(root_big)
    m_small = np.abs(root_small)
    swap = m_small > m_big
    inside = np.where(swap, root_big, root_small)
    outside_mod = np.where(swap, m_small, m_big)
    if ambiguity_check and np.any(np.abs(np.abs(inside) - outside_mod) < 1e-12):
        raise RootSelectionAmbiguous("both quadratic roots have the same modulus")
    return _maybe_scalar(inside if not scalar else inside[0], scalar)


def tri_branch(z, omega):
    """Triangular-lattice row multiplier t(z) with |t| < 1 on the annulus.

    Root of t^2 - F(z) t + z = 0, F = (6 - z - 1/z - 1.5 w^2)/(1 + 1/z).
    Raises PoleAtMinusOne within 1e-13 of z = -1 (F has a simple pole
    there; kernel evaluators use the cleared quadratic instead).
    """
    w2 = _omega_value(omega) ** 2
    za = np.asarray(z, dtype=complex)
    if np.any(np.abs(1.0 + 1.0 / np.atleast_1d(za)) < _POLE_TOL):
        raise PoleAtMinusOne("F(z) has a pole at z = -1")
    return _slant_root(z, w2)


def hex_reduced_omega_sq(omega) -> complex:
    """Reduced squared frequency wT^2 = (3/2) w^2 (2 - w^2/4)."""
    w2 = _omega_value(omega) ** 2
    return 1.5 * w2 * (2.0 - 0.25 * w2)


def hex_coupling(omega) -> complex:
    """Honeycomb sublattice coupling 3 (1 - w^2/4); must be nonzero."""
    w2 = _omega_value(omega) ** 2
    return 3.0 * (1.0 - 0.25 * w2)


def hex_branch(z, omega):
    """Honeycomb row multiplier: the triangular quadratic at wT^2.

    For w = 0 this coincides bit-for-bit with tri_branch since wT = 0.
    Requires w != 2 so the sublattice coupling stays invertible downstream.
    """
    if abs(hex_coupling(omega)) < 1e-14:
        raise ValueError("honeycomb requires omega != 2 (coupling 3(1 - w^2/4) vanishes)")
    za = np.asarray(z, dtype=complex)
    if np.any(np.abs(1.0 + 1.0 / np.atleast_1d(za)) < _POLE_TOL):
        raise PoleAtMinusOne("F(z) has a pole at z = -1")
    return _slant_root(z, hex_reduced_omega_sq(omega))


def _square_symbol(kx, ky, w):
    return 4.0 - 2.0 * cmath.cos(kx) - 2.0 * cmath.cos(ky) - w * w


def _tri_symbol(kx, ky, w):
    return 6.0 - 2.0 * cmath.cos(kx) - 2.0 * cmath.cos(ky) - 2.0 * cmath.cos(kx - ky) - 1.5 * w * w


def _hex_symbol(kx, ky, w):
    beta = 3.0 - 0.75 * w * w
    p = 1.0 + cmath.exp(1j * kx) + cmath.exp(1j * ky)
    m = 1.0 + cmath.exp(-1j * kx) + cmath.exp(-1j * ky)
    return p * m - beta * beta


def dispersion_residual(lattice, kappa_x, kappa_y, omega) -> float:
    """|plane-wave symbol| of the governing equation at (kx, ky, omega)."""
    w = _omega_value(omega)
    lattice = Lattice(lattice)
    if lattice is Lattice.SQUARE:
        return abs(_square_symbol(kappa_x, kappa_y, w))
    if lattice is Lattice.TRIANGULAR:
        return abs(_tri_symbol(kappa_x, kappa_y, w))
    return abs(_hex_symbol(kappa_x, kappa_y, w))


def dispersion_solve(lattice, omega, theta: float, amplitude: complex = 1.0) -> Incidence:
    """Solve the lattice dispersion for kx = k cos(theta), ky = k sin(theta).

    Newton iteration on the complex magnitude k from the long-wave initial
    guess; the returned incidence satisfies the plane-wave form of the
    governing equation to better than 1e-12.  For honeycomb the companion
    sublattice amplitude ratio is solved from the two coupled equations.

    Raises OutsidePassBand when a real frequency admits no propagating
    (real-k) root in this direction, NoConvergence after 100 iterations.
    """
    lattice = Lattice(lattice)
    freq = omega if isinstance(omega, Frequency) else Frequency(complex(omega))
    w = freq.omega
    if not (-math.pi / 2 < theta < math.pi / 2):
        raise ValueError("incidence angle must lie in (-pi/2, pi/2)")
    if lattice is Lattice.SQUARE and freq.omega1 >= 2.0 * math.sqrt(2.0):
        raise OutsidePassBand("square lattice pass band is 0 < Re(omega) < 2*sqrt(2)")

    c, s = math.cos(theta), math.sin(theta)
    sin2t = math.sin(2.0 * theta)

    if lattice is Lattice.SQUARE:
        def g(k):
            return _square_symbol(k * c, k * s, w)

        def dg(k):
            return 2.0 * c * cmath.sin(k * c) + 2.0 * s * cmath.sin(k * s)

        k = w
    elif lattice is Lattice.TRIANGULAR:
        def g(k):
            return _tri_symbol(k * c, k * s, w)

        def dg(k):
            return (2.0 * c * cmath.sin(k * c) + 2.0 * s * cmath.sin(k * s)
                    + 2.0 * (c - s) * cmath.sin(k * (c - s)))

        k = w * math.sqrt(1.5 / (2.0 - sin2t))
    else:
        def g(k):
            return _hex_symbol(k * c, k * s, w)

        def dg(k):
            ep_x, ep_y = cmath.exp(1j * k * c), cmath.exp(1j * k * s)
            em_x, em_y = cmath.exp(-1j * k * c), cmath.exp(-1j * k * s)
            p = 1.0 + ep_x + ep_y
            m = 1.0 + em_x + em_y
            return (1j * c * ep_x + 1j * s * ep_y) * m - p * (1j * c * em_x + 1j * s * em_y)

        k = w * math.sqrt(4.5 / (2.0 - sin2t))

    for _ in range(100):
        gval = g(k)
        if abs(gval) < 1e-13:
            break
        deriv = dg(k)
        if deriv == 0:
            raise NoConvergence("dispersion Newton hit a stationary point")
        k = k - gval / deriv
    else:
        if freq.omega2 == 0.0:
            # a real frequency with no real root keeps Newton on the real
            # axis forever: no propagating wave in this direction
            raise OutsidePassBand(f"no propagating root at omega={w} along theta={theta}")
        raise NoConvergence("dispersion Newton did not converge in 100 iterations")

    if freq.omega2 == 0.0:
        if abs(k.imag) > 1e-9:
            raise OutsidePassBand(f"no propagating root at omega={w} along theta={theta}")
        k = complex(k.real, 0.0)
    elif k.imag <= 0:
        raise OutsidePassBand("damped frequency produced a non-decaying wavenumber")

    kx, ky = k * c, k * s
    hex_ratio = None
    if lattice is Lattice.HONEYCOMB:
        beta = 3.0 - 0.75 * w * w
        hex_ratio = (1.0 + cmath.exp(-1j * kx) + cmath.exp(-1j * ky)) / beta
    return Incidence(
        amplitude=complex(amplitude),
        theta=theta,
        kappa_x=kx,
        kappa_y=ky,
        lattice=lattice,
        hex_ratio=hex_ratio,
        omega=w,
    )


def annulus_bounds(inc: Incidence) -> tuple[float, float]:
    """Containing annulus (e^(-k2), e^(k2 cos theta)) for the transforms.

    k2 is the positive imaginary part of sqrt(kx^2 + ky^2); both bounds
    approach 1 as the damping vanishes.
    """
    k2 = inc.kappa2
    if k2 <= 0:
        raise ValueError("annulus bounds require kappa2 > 0 (damped incidence)")
    lo = math.exp(-k2)
    hi = math.exp(k2 * math.cos(inc.theta))
    if lo >= hi:
        raise EmptyAnnulus(f"annulus collapsed: [{lo}, {hi}]")
    return lo, hi
