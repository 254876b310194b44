"""Exception hierarchy for lattice Wiener-Hopf computations.

Every numerical failure mode raised by this package derives from
:class:`LatticeWHError`, so callers can catch one type at the boundary.
The leaf classes mirror the preconditions of the operations that raise
them (branch evaluation, series handling, factorization, solving).
"""


class LatticeWHError(Exception):
    """Base class for all errors raised by latticewh."""


# --- branch functions -------------------------------------------------------

class DegeneratePoint(LatticeWHError):
    """Branch combination r + h vanished; the propagation root is undefined."""


class OnBranchCut(LatticeWHError):
    """Evaluation point lies within numeric tolerance of a branch cut."""


class RootSelectionAmbiguous(LatticeWHError):
    """Both quadratic roots have the same modulus; no inside root exists."""


class PoleAtMinusOne(LatticeWHError):
    """Triangular/honeycomb coefficient function has a pole at z = -1."""


class NoConvergence(LatticeWHError):
    """Iterative solver exhausted its iteration budget."""


class OutsidePassBand(LatticeWHError):
    """Real frequency admits no propagating wavenumber in this direction."""


class EmptyAnnulus(LatticeWHError):
    """Annulus bounds collapsed (lower bound >= upper bound)."""


# --- series and factorization ----------------------------------------------

class LengthMismatch(LatticeWHError):
    """Sample vector length does not match the grid node count."""


class ZeroOnContour(LatticeWHError):
    """A sample on the contour is (numerically) zero; log/winding undefined."""


class PhaseStepTooLarge(LatticeWHError):
    """Consecutive phase jump exceeded pi/2; grid too coarse to unwrap."""


class NonzeroWinding(LatticeWHError):
    """Kernel has nonzero index; scalar log-split factorization impossible."""

    def __init__(self, index: int):
        super().__init__(f"kernel winding number is {index}, expected 0")
        self.index = index


class DivergentSeries(LatticeWHError):
    """Half-range geometric transform does not converge at the requested z."""


# --- kernels ----------------------------------------------------------------

class UnsupportedFamily(LatticeWHError):
    """Operation is not defined for this kernel family."""


class SingularN(LatticeWHError):
    """Denominator function N(z) vanished; printed inverse kernel undefined."""


# --- solver -----------------------------------------------------------------

class IllConditionedClosure(LatticeWHError):
    """Constant-closure linear system is numerically singular."""


class WindowTooLarge(LatticeWHError):
    """Requested field window exceeds what the series resolution supports."""


# --- oracle -----------------------------------------------------------------

class InvalidSpec(LatticeWHError):
    """Lattice problem specification is inconsistent."""


class WindowTooSmall(LatticeWHError):
    """Truncation window too small for the requested defect offsets."""


class SolveFailure(LatticeWHError):
    """Direct solve failed to meet its residual contract."""

    def __init__(self, message: str, residual: float | None = None):
        super().__init__(message)
        self.residual = residual


class WindowMismatch(LatticeWHError):
    """Two field grids do not share the requested comparison window."""
