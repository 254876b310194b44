"""Catalog of scalar and matrix Wiener-Hopf kernels for lattice defects.

Scalar families (one semi-infinite defect, kernel is a scalar function
on the annulus):

===============  =========================================================
sq_crack         h/r = (1 - lam)/(1 + lam)
sq_constraint    (h^2 + 2)/(r h) = (1 + lam^2)/(1 - lam^2)
tri_dirichlet    F/(F - 2 t), evaluated stably as (z + t^2)/(z - t^2)
hex_crack        (Ns - 1)/(Ns + 1),  Ns = ((1 + z)/hh + 1)/(3(1 - w^2/4))
===============  =========================================================

Matrix families (2x2 unless noted) cover a crack in the triangular
lattice, a zigzag constraint in the honeycomb lattice (both of
Daniele-Khrapkov type), finite arrays of parallel cracks/constraints
(nu x nu), a Floquet-Bloch mixed array, a crack/constraint pair, and the
three opposing-tip configurations.  Closed-form determinants and the
N -> infinity structural limits are provided for validation.

Evaluation near z = -1 (a node of power-of-two sampling grids) goes
through the cleared quadratic for the slant-lattice root, where the
kernels have removable limits (t -> 0).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .branches import (
    Incidence,
    Lattice,
    _omega_value,
    _slant_root,
    hex_coupling,
    hex_reduced_omega_sq,
    square_branches,
)
from .errors import SingularN, UnsupportedFamily
from .series import half_transform_exp

__all__ = [
    "SCALAR_FAMILIES",
    "MATRIX_FAMILIES",
    "ScalarKernel",
    "MatrixKernelSpec",
    "DKForm",
    "AffineForcing",
    "eval_scalar_kernel",
    "scalar_kernel_forms",
    "eval_matrix_kernel",
    "det_closed_form",
    "dk_form",
    "vector_forcing",
    "scalar_forcing",
    "diag_limit_defect",
    "kernel_lattice",
]

SCALAR_FAMILIES = ("sq_crack", "sq_constraint", "tri_dirichlet", "hex_crack")
MATRIX_FAMILIES = (
    "tri_crack_2x2",
    "hex_constraint_2x2",
    "array_cracks",
    "array_constraints",
    "mixed_array",
    "pair_crack_constraint",
    "opposing_cracks",
    "opposing_constraints",
    "opposing_mixed",
)

_FAMILY_LATTICE = {
    "sq_crack": Lattice.SQUARE,
    "sq_constraint": Lattice.SQUARE,
    "tri_dirichlet": Lattice.TRIANGULAR,
    "hex_crack": Lattice.HONEYCOMB,
    "tri_crack_2x2": Lattice.TRIANGULAR,
    "hex_constraint_2x2": Lattice.HONEYCOMB,
    "array_cracks": Lattice.SQUARE,
    "array_constraints": Lattice.SQUARE,
    "mixed_array": Lattice.SQUARE,
    "pair_crack_constraint": Lattice.SQUARE,
    "opposing_cracks": Lattice.SQUARE,
    "opposing_constraints": Lattice.SQUARE,
    "opposing_mixed": Lattice.SQUARE,
}


def kernel_lattice(family: str) -> Lattice:
    try:
        return _FAMILY_LATTICE[family]
    except KeyError:
        raise UnsupportedFamily(f"unknown kernel family {family!r}") from None


@dataclass(frozen=True)
class ScalarKernel:
    """Descriptor of a scalar WH kernel; evaluable at any z off the cuts."""

    family: str
    omega: object  # Frequency, or bare complex for closed-form point checks

    def __post_init__(self):
        if self.family not in SCALAR_FAMILIES:
            raise UnsupportedFamily(f"{self.family!r} is not a scalar kernel family")

    @property
    def omega_value(self) -> complex:
        return _omega_value(self.omega)

    @property
    def lattice(self) -> Lattice:
        return kernel_lattice(self.family)

    def __call__(self, z):
        return eval_scalar_kernel(self, z)


def _sq_h2p2(z, w2):
    """h^2 + 2 = 4 - z - 1/z - w^2 (polynomial; no branch needed)."""
    return 4.0 - z - 1.0 / z - w2


def _tri_G(z, s_eff):
    """Cleared numerator G = 6 - z - 1/z - (3/2) s_eff of the slant F."""
    return 6.0 - z - 1.0 / z - 1.5 * s_eff


def eval_scalar_kernel(kernel: ScalarKernel, z):
    """Evaluate the scalar kernel at z (scalar or ndarray).

    Uses the form of each kernel that stays finite on power-of-two grids
    (in particular through the removable point z = -1 of the slant
    families).
    """
    w = kernel.omega_value
    w2 = w * w
    za = np.asarray(z, dtype=complex)
    scalar = za.ndim == 0

    if kernel.family == "sq_crack":
        bv = square_branches(za, w)
        out = np.asarray(bv.h / bv.r)
    elif kernel.family == "sq_constraint":
        bv = square_branches(za, w)
        out = np.asarray(_sq_h2p2(za, w2) / (bv.r * bv.h))
    elif kernel.family == "tri_dirichlet":
        t = np.asarray(_slant_root(za, w2))
        out = (za + t * t) / (za - t * t)
    else:  # hex_crack
        beta = hex_coupling(w)
        s = hex_reduced_omega_sq(w)
        hh = np.asarray(_slant_root(za, s))
        # (1+z)/hh rewritten through the quadratic: stable as hh -> 0
        ns = (_tri_G(za, s) - (1.0 + 1.0 / za) * hh + 1.0) / beta
        out = (ns - 1.0) / (ns + 1.0)
    return complex(out) if scalar else out


def scalar_kernel_forms(kernel: ScalarKernel, z):
    """Both printed algebraic forms of the kernel, for agreement checks.

    Returns (primary, alternate): h/r vs (1-lam)/(1+lam) style pairs.
    Not defined at the removable point z = -1 for the slant families.
    """
    w = kernel.omega_value
    w2 = w * w
    za = np.asarray(z, dtype=complex)
    if kernel.family == "sq_crack":
        bv = square_branches(za, w)
        return bv.h / bv.r, (1.0 - bv.lam) / (1.0 + bv.lam)
    if kernel.family == "sq_constraint":
        bv = square_branches(za, w)
        return _sq_h2p2(za, w2) / (bv.r * bv.h), (1.0 + bv.lam**2) / (1.0 - bv.lam**2)
    if kernel.family == "tri_dirichlet":
        t = np.asarray(_slant_root(za, w2))
        F = _tri_G(za, w2) / (1.0 + 1.0 / za)
        return (za + t * t) / (za - t * t), F / (F - 2.0 * t)
    beta = hex_coupling(w)
    s = hex_reduced_omega_sq(w)
    hh = np.asarray(_slant_root(za, s))
    ns_direct = ((1.0 + za) / hh + 1.0) / beta
    ns_cleared = (_tri_G(za, s) - (1.0 + 1.0 / za) * hh + 1.0) / beta
    return (ns_cleared - 1.0) / (ns_cleared + 1.0), (ns_direct - 1.0) / (ns_direct + 1.0)


@dataclass(frozen=True)
class MatrixKernelSpec:
    """Descriptor of a matrix WH kernel.

    count    number of defect rows (nu), arrays only;
    sep      vertical row separation N;
    offsets  tip offsets: one per defect row for arrays, a single offset
             for the opposing families, empty otherwise;
    psi      Floquet-Bloch multiplier exp(-i ky N), mixed_array only.
    """

    family: str
    omega: object
    count: int | None = None
    sep: int = 1
    offsets: tuple[int, ...] = ()
    psi: complex | None = None

    def __post_init__(self):
        if self.family not in MATRIX_FAMILIES:
            raise UnsupportedFamily(f"{self.family!r} is not a matrix kernel family")
        object.__setattr__(self, "offsets", tuple(int(m) for m in self.offsets))
        if self.family in ("array_cracks", "array_constraints"):
            if self.count is None or self.count < 2:
                raise ValueError("array kernels require count (nu) >= 2")
            if len(self.offsets) != self.count:
                raise ValueError("array kernels require one tip offset per defect row")
        elif self.family in ("opposing_cracks", "opposing_constraints", "opposing_mixed"):
            if len(self.offsets) != 1:
                raise ValueError("opposing kernels take a single tip offset")
        elif self.offsets:
            raise ValueError(f"{self.family} takes no tip offsets")
        if self.sep < 1:
            raise ValueError("row separation must be >= 1")
        if self.family == "mixed_array":
            if self.psi is None or self.psi == 0:
                raise ValueError("mixed_array requires a nonzero Floquet multiplier")

    @property
    def dim(self) -> int:
        if self.family in ("array_cracks", "array_constraints"):
            return self.count
        return 2

    @property
    def omega_value(self) -> complex:
        return _omega_value(self.omega)

    @property
    def lattice(self) -> Lattice:
        return kernel_lattice(self.family)

    def __call__(self, z):
        return eval_matrix_kernel(self, z)


def _lam(z, w):
    return square_branches(z, w).lam


def eval_matrix_kernel(spec: MatrixKernelSpec, z) -> np.ndarray:
    """Evaluate the matrix kernel at one point z; returns a (d, d) array."""
    w = spec.omega_value
    w2 = w * w
    z = complex(z)
    fam = spec.family

    if fam == "tri_crack_2x2":
        t = _slant_root(z, w2)
        nz = 4.0 - z - 1.0 / z - (1.0 + 1.0 / z) * t - 1.5 * w2
        if abs(nz) < 1e-14:
            raise SingularN("N(z) vanished; printed inverse kernel undefined")
        den = (nz + 2.0) ** 2 - (1.0 + z) * (1.0 + 1.0 / z)
        return (nz / den) * np.array([[nz + 2.0, 1.0 + z], [1.0 + 1.0 / z, nz + 2.0]])

    if fam == "hex_constraint_2x2":
        beta = hex_coupling(w)
        s = hex_reduced_omega_sq(w)
        hh = _slant_root(z, s)
        m_fn = ((1.0 + 1.0 / z) * hh + 1.0) / beta
        inner = np.array([[-beta, 1.0 + z], [1.0 + 1.0 / z, -beta]])
        k_inv = np.eye(2) + m_fn * np.linalg.inv(inner)
        return np.linalg.inv(k_inv)

    bv = square_branches(z, w)
    lam = bv.lam
    n = spec.sep

    if fam in ("array_cracks", "array_constraints"):
        nu = spec.count
        if fam == "array_cracks":
            scalar = bv.h / bv.r
        else:
            scalar = _sq_h2p2(z, w2) / (bv.r * bv.h)
        # paper row index i = p + 1 corresponds to defect j = nu - 1 - p
        out = np.empty((nu, nu), dtype=complex)
        for p in range(nu):
            for q in range(nu):
                mj = spec.offsets[nu - 1 - p] - spec.offsets[nu - 1 - q]
                out[p, q] = scalar * lam ** (n * abs(p - q)) * z**mj
        return out

    if fam == "mixed_array":
        psi = complex(spec.psi)
        pn = lam**n - psi
        qn = lam**n - 1.0 / psi
        pn1 = lam ** (n - 1) - psi
        qn1 = lam ** (n - 1) - 1.0 / psi
        top_left = -(pn / psi + lam ** (n + 2) * qn) / (1.0 - lam**2)
        top_right = (-(lam ** (n - 1)) * pn + lam**2 * psi * qn) / (1.0 + lam)
        bot_left = lam * (-pn1 / psi + lam**n * qn1) / (1.0 + lam)
        bot_right = (1.0 - lam) / (1.0 + lam) * (1.0 - lam ** (2 * n))
        return np.array([[top_left, top_right], [bot_left, bot_right]]) / (pn * qn)

    if fam == "pair_crack_constraint":
        return np.array([
            [(1.0 + lam**2) / (1.0 - lam**2), -(lam**n) * (1.0 + lam**2) / (1.0 + lam)],
            [lam ** (n + 1) / (1.0 + lam), (1.0 - lam) / (1.0 + lam)],
        ])

    m = spec.offsets[0]
    if fam == "opposing_cracks":
        return np.array([
            [(1.0 + lam) / (1.0 - lam), lam**n * z**m],
            [-(lam**n) * z**-m, (1.0 - lam) / (1.0 + lam) * (1.0 - lam ** (2 * n))],
        ])
    if fam == "opposing_constraints":
        return np.array([
            [(1.0 - lam**2) / (1.0 + lam**2), lam**n * z**m],
            [-(lam**n) * z**-m, (1.0 + lam**2) / (1.0 - lam**2) * (1.0 - lam ** (2 * n))],
        ])
    # opposing_mixed
    return np.array([
        [(1.0 - lam**2) / (1.0 + lam**2), -(1.0 - lam) * lam**n * z**m],
        [-(1.0 - lam) * lam * lam**n * z**-m / (1.0 + lam**2),
         (1.0 - lam) / (1.0 + lam) * (1.0 + lam ** (2 * n + 1))],
    ])


def det_closed_form(spec: MatrixKernelSpec, z) -> complex:
    """Printed closed-form determinant of the matrix kernel at z.

    The constraint-array formula is grouped as
    ((h^2+2)/(r h))^nu * (1 - lam^(2N))^(nu-1), the grouping pinned by
    numeric comparison against the assembled kernel.
    """
    fam = spec.family
    if fam in ("tri_crack_2x2", "hex_constraint_2x2"):
        raise UnsupportedFamily(
            f"{fam} determinant comes from the Daniele-Khrapkov form; use dk_form")
    w = spec.omega_value
    w2 = w * w
    z = complex(z)
    bv = square_branches(z, w)
    lam = bv.lam
    n = spec.sep
    if fam == "array_cracks":
        return (bv.h / bv.r) ** spec.count * (1.0 - lam ** (2 * n)) ** (spec.count - 1)
    if fam == "array_constraints":
        scalar = _sq_h2p2(z, w2) / (bv.r * bv.h)
        return scalar**spec.count * (1.0 - lam ** (2 * n)) ** (spec.count - 1)
    if fam == "mixed_array":
        psi = complex(spec.psi)
        return ((1.0 + lam**3) * (lam**-n + lam ** (n - 1))
                / ((1.0 + lam) ** 2 * (lam**-n + lam**n - psi - 1.0 / psi)))
    if fam == "pair_crack_constraint":
        return (1.0 + lam**2) * (1.0 + lam ** (2 * n + 1)) / (1.0 + lam) ** 2
    if fam in ("opposing_cracks", "opposing_constraints"):
        return 1.0 + 0j
    # opposing_mixed
    return (1.0 - lam) ** 2 / (1.0 + lam**2)


@dataclass(frozen=True)
class DKForm:
    """Daniele-Khrapkov data: K = (a1^2 - z a2^2)^(-1) (a1 I + a2 R)."""

    a1: Callable
    a2: Callable

    @staticmethod
    def R(z) -> np.ndarray:
        z = complex(z)
        return np.array([[0.0, z], [1.0, 0.0]])

    def reconstruct(self, z) -> np.ndarray:
        z = complex(z)
        a1, a2 = complex(self.a1(z)), complex(self.a2(z))
        return (a1 * np.eye(2) + a2 * self.R(z)) / (a1 * a1 - z * a2 * a2)

    def det(self, z) -> complex:
        z = complex(z)
        a1, a2 = complex(self.a1(z)), complex(self.a2(z))
        return 1.0 / (a1 * a1 - z * a2 * a2)


def dk_form(spec: MatrixKernelSpec) -> DKForm:
    """Daniele-Khrapkov representation of the two reducible 2x2 kernels."""
    w = spec.omega_value
    w2 = w * w
    if spec.family == "tri_crack_2x2":
        def a1(z):
            z = complex(z)
            t = _slant_root(z, w2)
            nz = 4.0 - z - 1.0 / z - (1.0 + 1.0 / z) * t - 1.5 * w2
            if abs(nz) < 1e-14:
                raise SingularN("N(z) vanished in the DK coefficients")
            return 1.0 + 2.0 / nz

        def a2(z):
            z = complex(z)
            t = _slant_root(z, w2)
            nz = 4.0 - z - 1.0 / z - (1.0 + 1.0 / z) * t - 1.5 * w2
            if abs(nz) < 1e-14:
                raise SingularN("N(z) vanished in the DK coefficients")
            return (1.0 + 1.0 / z) / nz

        return DKForm(a1=a1, a2=a2)

    if spec.family == "hex_constraint_2x2":
        beta = hex_coupling(w)
        s = hex_reduced_omega_sq(w)

        def a1(z):
            z = complex(z)
            m_fn = ((1.0 + 1.0 / z) * _slant_root(z, s) + 1.0) / beta
            return 1.0 - beta * m_fn / (beta**2 - (1.0 + z) * (1.0 + 1.0 / z))

        def a2(z):
            z = complex(z)
            m_fn = ((1.0 + 1.0 / z) * _slant_root(z, s) + 1.0) / beta
            return (1.0 + 1.0 / z) * m_fn / (beta**2 - (1.0 + z) * (1.0 + 1.0 / z))

        return DKForm(a1=a1, a2=a2)

    raise UnsupportedFamily(f"{spec.family} has no Daniele-Khrapkov form here")


def diag_limit_defect(spec: MatrixKernelSpec) -> Callable:
    """Kernel in the N -> infinity limit (all lam^N terms dropped).

    Arrays, the pair, and the opposing families decouple into the
    single-defect scalar kernels on the diagonal.  The mixed array tends
    to the full (non-diagonal) kernel of one combined crack+constraint
    defect instead; that limit matrix is returned verbatim.
    """
    fam = spec.family
    if fam in ("tri_crack_2x2", "hex_constraint_2x2"):
        raise UnsupportedFamily(f"{fam} has no separation parameter to send to infinity")
    w = spec.omega_value
    w2 = w * w

    def limit(z) -> np.ndarray:
        z = complex(z)
        bv = square_branches(z, w)
        lam = bv.lam
        crack = (1.0 - lam) / (1.0 + lam)
        constraint = (1.0 + lam**2) / (1.0 - lam**2)
        if fam == "array_cracks":
            return (bv.h / bv.r) * np.eye(spec.count, dtype=complex)
        if fam == "array_constraints":
            return (_sq_h2p2(z, w2) / (bv.r * bv.h)) * np.eye(spec.count, dtype=complex)
        if fam == "pair_crack_constraint":
            return np.diag([constraint, crack]).astype(complex)
        if fam == "opposing_cracks":
            return np.diag([1.0 / crack, crack]).astype(complex)
        if fam == "opposing_constraints":
            return np.diag([1.0 / constraint, constraint]).astype(complex)
        if fam == "opposing_mixed":
            return np.diag([1.0 / constraint, crack]).astype(complex)
        # mixed_array: single crack+constraint defect, not diagonal
        return np.array([
            [1.0 / (1.0 - lam**2), -(lam**2) / (1.0 + lam)],
            [lam / (1.0 + lam), crack],
        ])

    return limit


@dataclass(frozen=True)
class AffineForcing:
    """Forcing c(z; alpha) = base(z) + sum_k alpha_k term_k(z).

    Unknown lattice constants enter linearly; keys are site tuples like
    ("u", x, y).  Scalar problems use dim == 1 with complex-valued
    callables, matrix problems return length-dim vectors.
    """

    dim: int
    base: Callable
    terms: tuple = field(default_factory=tuple)

    @property
    def constant_ids(self) -> tuple:
        return tuple(key for key, _ in self.terms)

    def __call__(self, z, constants=None):
        val = self.base(z)
        if self.terms:
            if constants is None:
                raise ValueError(f"forcing requires constants {self.constant_ids}")
            for key, fn in self.terms:
                val = val + constants[key] * fn(z)
        return val


def _require_lattice(inc: Incidence, lattice: Lattice):
    if inc.lattice is not lattice:
        raise ValueError(f"incidence is for {inc.lattice.value}, kernel needs {lattice.value}")


def scalar_forcing(family: str, inc: Incidence) -> AffineForcing:
    """Wiener-Hopf forcing c(z) of the four scalar problems.

    sq_crack and hex_crack are fully known; sq_constraint carries the
    unknown scattered value u(0,0) and tri_dirichlet carries u(-1,1) and
    u(0,0).  Incident half-transforms are the exact geometric sums.
    """
    if family not in SCALAR_FAMILIES:
        raise UnsupportedFamily(f"{family!r} is not a scalar kernel family")
    _require_lattice(inc, kernel_lattice(family))
    amp = inc.amplitude
    q = np.exp(1j * inc.kappa_x)
    row_shift = np.exp(1j * inc.kappa_y)  # row y -> y-1 multiplies the incident by this

    if family == "sq_crack":
        u0m = half_transform_exp(amp * (1.0 - row_shift), q, "minus")
        kern = ScalarKernel("sq_crack", inc_omega(inc))

        def base(z):
            return 0.5 * (1.0 - eval_scalar_kernel(kern, z)) * u0m(z)

        return AffineForcing(dim=1, base=base)

    if family == "sq_constraint":
        w2 = inc_omega(inc) ** 2
        u0m = half_transform_exp(amp, q, "minus")
        u_in_m10 = complex(inc.field(-1, 0))
        kern = ScalarKernel("sq_constraint", inc_omega(inc))

        def base(z):
            half = 0.5 * (1.0 - eval_scalar_kernel(kern, z))
            return half * (_sq_h2p2(z, w2) * u0m(z) + u_in_m10)

        def term_u00(z):
            return 0.5 * (1.0 - eval_scalar_kernel(kern, z)) * z

        return AffineForcing(dim=1, base=base, terms=((("u", 0, 0), term_u00),))

    if family == "tri_dirichlet":
        w2 = inc_omega(inc) ** 2
        u0m = half_transform_exp(amp, q, "minus")
        u_in_m10 = complex(inc.field(-1, 0))

        # c = -t (G u0m + u_in(-1,0) - 2 u(-1,1) + z u(0,0)) / D with
        # D = G - 2 t (1 + 1/z); stable through the removable point z = -1.
        def _t_over_d(z):
            za = np.asarray(z, dtype=complex)
            t = np.asarray(_slant_root(za, w2))
            g = _tri_G(za, w2)
            return t, g, g - 2.0 * t * (1.0 + 1.0 / za)

        def base(z):
            t, g, d = _t_over_d(z)
            out = -t * (g * u0m(z) + u_in_m10) / d
            return complex(out) if np.asarray(z).ndim == 0 else out

        def term_um11(z):
            t, _, d = _t_over_d(z)
            out = 2.0 * t / d
            return complex(out) if np.asarray(z).ndim == 0 else out

        def term_u00(z):
            t, _, d = _t_over_d(z)
            out = -t * np.asarray(z, dtype=complex) / d
            return complex(out) if np.asarray(z).ndim == 0 else out

        return AffineForcing(
            dim=1, base=base,
            terms=((("u", -1, 1), term_um11), (("u", 0, 0), term_u00)),
        )

    # hex_crack: c = (u0m - v(-1)m)/(Ns + 1)
    w = inc_omega(inc)
    s = hex_reduced_omega_sq(w)
    beta = hex_coupling(w)
    u0m = half_transform_exp(amp, q, "minus")
    vm1m = half_transform_exp(amp * inc.hex_ratio * row_shift, q, "minus")

    def base(z):
        za = np.asarray(z, dtype=complex)
        hh = np.asarray(_slant_root(za, s))
        ns = (_tri_G(za, s) - (1.0 + 1.0 / za) * hh + 1.0) / beta
        out = (u0m(z) - vm1m(z)) / (1.0 + ns)
        return complex(out) if np.asarray(z).ndim == 0 else out

    return AffineForcing(dim=1, base=base)


def inc_omega(inc: Incidence) -> complex:
    """Frequency recovered from the incidence via the dispersion relation."""
    if inc.omega is not None:
        return complex(inc.omega)
    kx, ky = inc.kappa_x, inc.kappa_y
    if inc.lattice is Lattice.SQUARE:
        w2 = 4.0 - 2.0 * np.cos(kx) - 2.0 * np.cos(ky)
    elif inc.lattice is Lattice.TRIANGULAR:
        w2 = (6.0 - 2.0 * np.cos(kx) - 2.0 * np.cos(ky) - 2.0 * np.cos(kx - ky)) / 1.5
    else:
        p = 1.0 + np.exp(1j * kx) + np.exp(1j * ky)
        m = 1.0 + np.exp(-1j * kx) + np.exp(-1j * ky)
        # beta^2 = p m with beta = 3 - 3 w^2/4; the physical acoustic branch
        # has beta near +3 for moderate omega
        beta = np.sqrt(p * m)
        if beta.real < 0:
            beta = -beta
        w2 = (3.0 - beta) * 4.0 / 3.0
    w = complex(np.sqrt(complex(w2)))
    return w if w.real >= 0 else -w


def _incident_half(inc: Incidence, row: int, offset: int, side: str,
                   combine: str = "value"):
    """Closed-form half transform of an incident row combination.

    combine: "value"      u_in at (m+offset, row)
             "crack_diff" u_in(.., row) - u_in(.., row-1)
             "sum_pm1"    u_in(.., row+1) + u_in(.., row-1)

    Sums run over m in Z^+ (side "plus") or Z^- ("minus") with weight
    z^(-m); divergent sides are evaluated by analytic continuation of the
    geometric sum (legitimate: the incident transform continues to the
    whole plane minus the single pole).
    """
    q = np.exp(1j * inc.kappa_x)
    base_amp = inc.amplitude * np.exp(-1j * (inc.kappa_x * offset + inc.kappa_y * row))
    row_shift = np.exp(1j * inc.kappa_y)
    if combine == "value":
        factor = 1.0
    elif combine == "crack_diff":
        factor = 1.0 - row_shift
    elif combine == "sum_pm1":
        factor = 1.0 / row_shift + row_shift
    else:
        raise ValueError(combine)
    return half_transform_exp(base_amp * factor, q, side, strict=False)


def vector_forcing(spec: MatrixKernelSpec, inc: Incidence) -> AffineForcing:
    """Vector forcing c(z) of the matrix WH problems.

    Unknown scattered point values near defect tips enter as affine
    terms keyed by site tuples; values constrained to -u_in by a rigid
    row are still listed (callers may substitute the known value).
    Incident half transforms on divergent sides use the analytic
    continuation of the geometric sum.
    """
    _require_lattice(inc, spec.lattice)
    w = spec.omega_value
    w2 = w * w
    fam = spec.family
    n = spec.sep
    amp = inc.amplitude
    q = np.exp(1j * inc.kappa_x)

    def i_minus_k(z):
        return np.eye(spec.dim) - eval_matrix_kernel(spec, z)

    if fam == "array_cracks":
        rows = [(spec.count - 1 - p) * n for p in range(spec.count)]
        offs = [spec.offsets[spec.count - 1 - p] for p in range(spec.count)]
        fns = [_incident_half(inc, r, m, "minus", "crack_diff") for r, m in zip(rows, offs)]

        def base(z):
            vec = np.array([fn(z) for fn in fns])
            return i_minus_k(z) @ vec

        return AffineForcing(dim=spec.dim, base=base)

    if fam == "array_constraints":
        rows = [(spec.count - 1 - p) * n for p in range(spec.count)]
        offs = [spec.offsets[spec.count - 1 - p] for p in range(spec.count)]
        fns = [_incident_half(inc, r, m, "minus", "value") for r, m in zip(rows, offs)]

        def base(z):
            vec = np.array([_sq_h2p2(z, w2) * fn(z) for fn in fns])
            return i_minus_k(z) @ vec

        terms = []
        for p, (r, m) in enumerate(zip(rows, offs)):
            def tip_left(z, p=p):
                e = np.zeros(spec.dim, dtype=complex); e[p] = -1.0
                return i_minus_k(z) @ e

            def tip_right(z, p=p):
                e = np.zeros(spec.dim, dtype=complex); e[p] = 1.0
                return z * (i_minus_k(z) @ e)

            terms.append((("u", m - 1, r), tip_left))
            terms.append((("u", m, r), tip_right))
        return AffineForcing(dim=spec.dim, base=base, terms=tuple(terms))

    if fam == "pair_crack_constraint":
        u_n_minus = _incident_half(inc, n, 0, "minus", "value")
        v0_minus = _incident_half(inc, 0, 0, "minus", "crack_diff")

        def base(z):
            vec = np.array([_sq_h2p2(z, w2) * u_n_minus(z), v0_minus(z)])
            return i_minus_k(z) @ vec

        def t_m1n(z):
            return i_minus_k(z) @ np.array([-1.0, 0.0])

        def t_0n(z):
            return z * (i_minus_k(z) @ np.array([1.0, 0.0]))

        return AffineForcing(dim=2, base=base,
                             terms=((("u", -1, n), t_m1n), (("u", 0, n), t_0n)))

    if fam == "mixed_array":
        mix = np.array([[1.0, 1.0], [0.0, 1.0]])
        u0_minus = _incident_half(inc, 0, 0, "minus", "value")
        v0_minus = _incident_half(inc, 0, 0, "minus", "crack_diff")

        def h2p1(z):
            return _sq_h2p2(z, w2) - 1.0

        def base(z):
            vec = np.array([h2p1(z) * u0_minus(z), v0_minus(z)])
            return i_minus_k(z) @ (mix @ vec)

        def t_m10(z):
            return i_minus_k(z) @ (mix @ np.array([-1.0, 0.0]))

        def t_00(z):
            return z * (i_minus_k(z) @ (mix @ np.array([1.0, 0.0])))

        return AffineForcing(dim=2, base=base,
                             terms=((("u", -1, 0), t_m10), (("u", 0, 0), t_00)))

    if fam in ("opposing_cracks", "opposing_constraints", "opposing_mixed"):
        m_off = spec.offsets[0]
        sel = np.diag([-1.0, 1.0])  # I2 - I1

        if fam == "opposing_cracks":
            vn_plus = _incident_half(inc, n, m_off, "plus", "crack_diff")
            v0_minus = _incident_half(inc, 0, 0, "minus", "crack_diff")

            def base(z):
                vec = np.array([vn_plus(z), v0_minus(z)])
                return i_minus_k(z) @ (sel @ vec)

            return AffineForcing(dim=2, base=base)

        # chi of the right-pointing constraint: with the recentered
        # transform convention the tip values enter bare,
        # chi_N = (h^2+2) u_in_N^+ + u(M-1, N) - z u(M, N)
        un_plus = _incident_half(inc, n, m_off, "plus", "value")

        def t_up_left(z):
            return i_minus_k(z) @ (sel @ np.array([1.0, 0.0]))

        def t_up_right(z):
            return i_minus_k(z) @ (sel @ np.array([-z, 0.0]))

        if fam == "opposing_constraints":
            u0_minus = _incident_half(inc, 0, 0, "minus", "value")

            def base(z):
                chi_n = _sq_h2p2(z, w2) * un_plus(z)
                chi_0 = _sq_h2p2(z, w2) * u0_minus(z)
                return i_minus_k(z) @ (sel @ np.array([chi_n, chi_0]))

            def t_lo_left(z):
                return i_minus_k(z) @ (sel @ np.array([0.0, -1.0]))

            def t_lo_right(z):
                return i_minus_k(z) @ (sel @ np.array([0.0, z]))

            return AffineForcing(
                dim=2, base=base,
                terms=(
                    (("u", m_off - 1, n), t_up_left),
                    (("u", m_off, n), t_up_right),
                    (("u", -1, 0), t_lo_left),
                    (("u", 0, 0), t_lo_right),
                ),
            )

        # opposing_mixed: constraint (right) at row N, crack (left) at row 0
        v0_minus = _incident_half(inc, 0, 0, "minus", "crack_diff")

        def base(z):
            chi_n = _sq_h2p2(z, w2) * un_plus(z)
            return i_minus_k(z) @ (sel @ np.array([chi_n, v0_minus(z)]))

        return AffineForcing(
            dim=2, base=base,
            terms=((("u", m_off - 1, n), t_up_left), (("u", m_off, n), t_up_right)),
        )

    if fam == "tri_crack_2x2":
        u0_minus = _incident_half(inc, 0, 0, "minus", "value")
        um1_minus = _incident_half(inc, -1, 0, "minus", "value")
        u_in_0m1 = complex(inc.field(0, -1))

        def n_of(z):
            t = _slant_root(z, w2)
            return 4.0 - z - 1.0 / z - (1.0 + 1.0 / z) * t - 1.5 * w2

        def base(z):
            k = eval_matrix_kernel(spec, z)
            vec = (np.eye(2) - k) @ np.array([u0_minus(z), um1_minus(z)])
            extra = (k / n_of(z)) @ np.array([-z * u_in_0m1, u_in_0m1])
            return vec + extra

        def t_0m1(z):
            k = eval_matrix_kernel(spec, z)
            return (k / n_of(z)) @ np.array([-z, 1.0])

        return AffineForcing(dim=2, base=base, terms=((("u", 0, -1), t_0m1),))

    # hex_constraint_2x2
    u1_minus = _incident_half(inc, 1, 0, "minus", "value")
    row_shift = np.exp(1j * inc.kappa_y)
    vm1_amp = amp * inc.hex_ratio * row_shift
    vm1_minus = half_transform_exp(vm1_amp, q, "minus", strict=False)
    u_in_00 = complex(inc.field(0, 0))
    v_in_m10 = complex(inc.field(-1, 0, "v"))

    def base(z):
        vec = np.array([u1_minus(z) + z * u_in_00, vm1_minus(z) - v_in_m10])
        return i_minus_k(z) @ vec

    def t_u00(z):
        return i_minus_k(z) @ np.array([z, 0.0])

    def t_vm10(z):
        return i_minus_k(z) @ np.array([0.0, -1.0])

    return AffineForcing(dim=2, base=base,
                         terms=((("u", 0, 0), t_u00), (("v", -1, 0), t_vm10)))
