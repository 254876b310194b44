import numpy as np
import pytest

from latticewh.branches import Frequency, dispersion_solve
from latticewh.errors import WindowTooLarge
from latticewh.fields import compare_fields
from latticewh.kernels import AffineForcing
from latticewh.oracle import Defect, LatticeProblemSpec, assemble, solve_direct
from latticewh.series import CircleGrid, LaurentSeries, coefficients
from latticewh.whsolver import (
    ScalarWHProblem,
    inverse_transform_row,
    reconstruct_field,
    solve_scalar,
)

from conftest import OMEGA, THETA

W2 = OMEGA * OMEGA


def _synthetic_problem(inc, kernel, base, terms=()):
    return ScalarWHProblem(
        kernel=kernel,
        forcing=AffineForcing(dim=1, base=base, terms=terms),
        grid=CircleGrid(1.0, 256),
        incidence=inc,
    )


class TestSplitSolve:
    def test_identity_kernel_reduces_to_split(self, inc_square):
        problem = _synthetic_problem(
            inc_square, lambda z: np.ones_like(np.asarray(z, dtype=complex)),
            lambda z: 3.0 + 2.0 / z + 5.0 * z**2.0)
        sol = solve_scalar(problem)
        assert abs(sol.f_plus.coefficient(0) - 3.0) < 1e-12
        assert abs(sol.f_plus.coefficient(-1) - 2.0) < 1e-12
        assert abs(sol.f_minus.coefficient(2) - 5.0) < 1e-12
        assert abs(sol.f_minus.coefficient(0)) < 1e-13
        assert sol.residual < 1e-12

    def test_minus_type_kernel(self, inc_square):
        problem = _synthetic_problem(
            inc_square, lambda z: 1.0 - 0.5 * np.asarray(z, dtype=complex),
            lambda z: np.asarray(z, dtype=complex))
        sol = solve_scalar(problem)
        # c/K+ = c is minus-type: f+ = 0, f- = z/(1 - 0.5 z)
        assert np.max(np.abs(sol.f_plus.coeff)) < 1e-12
        for n in range(1, 6):
            assert abs(sol.f_minus.coefficient(n) - 0.5 ** (n - 1)) < 1e-11
        assert sol.residual < 1e-12

    @pytest.mark.parametrize("family,lattice", [
        ("sq_crack", "square"),
        ("sq_constraint", "square"),
        ("tri_dirichlet", "triangular"),
        ("hex_crack", "honeycomb"),
    ])
    def test_support_and_residual(self, family, lattice):
        inc = dispersion_solve(lattice, Frequency(OMEGA), THETA)
        problem = ScalarWHProblem.for_family(family, inc)
        sol = solve_scalar(problem)
        assert sol.residual < 1e-8
        half = problem.grid.count // 2
        assert not np.any(sol.f_plus.coeff[half + 1:])
        assert not np.any(sol.f_minus.coeff[: half + 1])


class TestInverseTransformRow:
    def test_direct_readoff(self):
        coeff = np.zeros(16, dtype=complex)
        ser = LaurentSeries(coeff, 1.0)
        full = ser.coeff.copy()
        full[8 + 0] = 2.0   # a_0
        full[8 - 3] = 1j    # a_-3
        ser = LaurentSeries(full, 1.0)
        vals = inverse_transform_row(ser, range(0, 5))
        assert vals[0] == 2.0
        assert vals[3] == 1j
        assert vals[1] == vals[2] == vals[4] == 0

    def test_geometric_incident_row(self):
        # minus transform of u_x = 2^{-x} over x < 0 has a_m = 2^m, so the
        # read-off must return u_{-1} = 2, u_{-2} = 4, ...
        coeff = np.zeros(16, dtype=complex)
        ser = LaurentSeries(coeff, 1.0)
        full = ser.coeff.copy()
        for m in range(1, 6):
            full[8 + m] = 2.0**m
        ser = LaurentSeries(full, 1.0)
        row = inverse_transform_row(ser, range(-3, 0))
        assert row[0] == 8.0 and row[1] == 4.0 and row[2] == 2.0

    def test_solved_row_decays(self, inc_square):
        problem = ScalarWHProblem.for_family("sq_crack", inc_square)
        sol = solve_scalar(problem)
        ser = coefficients(sol.transform_values(problem.grid), problem.grid)
        row = inverse_transform_row(ser, range(-200, 201))
        mids = np.abs(row[170:231])
        edges = max(abs(row[0]), abs(row[-1]))
        assert edges < np.max(mids) * 1e-5  # damping decay along the row


class TestReconstruction:
    def test_crack_odd_symmetry_exact(self, inc_square):
        problem = ScalarWHProblem.for_family("sq_crack", inc_square)
        sol = solve_scalar(problem)
        fld = reconstruct_field(problem, sol, ((-8, 8), (-8, 8)))
        for y in range(0, 8):
            assert np.array_equal(fld.row(-1 - y), -fld.row(y))

    def test_constraint_even_symmetry_exact(self, inc_square):
        problem = ScalarWHProblem.for_family("sq_constraint", inc_square)
        sol = solve_scalar(problem)
        fld = reconstruct_field(problem, sol, ((-8, 8), (-8, 8)))
        for y in range(1, 8):
            assert np.array_equal(fld.row(-y), fld.row(y))

    def test_constraint_pinned_row(self, inc_square):
        problem = ScalarWHProblem.for_family("sq_constraint", inc_square)
        sol = solve_scalar(problem)
        fld = reconstruct_field(problem, sol, ((-8, 8), (-2, 2)))
        for x in range(-8, 0):
            assert abs(fld.value(x, 0) + inc_square.field(x, 0)) < 1e-12

    def test_hex_crack_face_identity(self, inc_honeycomb):
        problem = ScalarWHProblem.for_family("hex_crack", inc_honeycomb)
        sol = solve_scalar(problem)
        fld = reconstruct_field(problem, sol, ((-10, 10), (-5, 5)))
        for x in range(-10, 0):
            assert abs(fld.value(x, 0, "u") + fld.value(x, -1, "v")) < 1e-10

    def test_interior_equation_residual(self, inc_square):
        problem = ScalarWHProblem.for_family("sq_crack", inc_square)
        sol = solve_scalar(problem)
        fld = reconstruct_field(problem, sol, ((-10, 10), (-10, 10)))
        worst = 0.0
        for y in range(-8, 9):
            if -3 <= y <= 2:
                continue  # within two rows of the defect pair
            for x in range(-9, 10):
                res = (fld.value(x + 1, y) + fld.value(x - 1, y)
                       + fld.value(x, y + 1) + fld.value(x, y - 1)
                       + (W2 - 4) * fld.value(x, y))
                scale = max(abs(fld.value(x, y)), 1e-30)
                worst = max(worst, abs(res) / scale)
        assert worst < 1e-6

    def test_crack_boundary_conditions(self, inc_square):
        # broken-bond equation on the crack faces, total field
        problem = ScalarWHProblem.for_family("sq_crack", inc_square)
        sol = solve_scalar(problem)
        fld = reconstruct_field(problem, sol, ((-12, 12), (-2, 2)))
        tot = lambda x, y: fld.value(x, y) + inc_square.field(x, y)
        worst = 0.0
        for x in range(-11, 0):
            res = tot(x + 1, 0) + tot(x - 1, 0) + tot(x, 1) + (W2 - 3) * tot(x, 0)
            worst = max(worst, abs(res))
        assert worst < 1e-6

    def test_hex_interior_equations(self, inc_honeycomb):
        # both sublattice equations away from the crack pair, without
        # reference to the oracle
        problem = ScalarWHProblem.for_family("hex_crack", inc_honeycomb)
        sol = solve_scalar(problem)
        fld = reconstruct_field(problem, sol, ((-10, 10), (-10, 10)))
        beta = 3 * (1 - 0.25 * W2)
        worst = 0.0
        for y in range(-9, 10):
            if -3 <= y <= 2:
                continue
            for x in range(-9, 10):
                r1 = (fld.value(x, y, "v") + fld.value(x - 1, y, "v")
                      + fld.value(x, y - 1, "v") - beta * fld.value(x, y, "u"))
                r2 = (fld.value(x, y, "u") + fld.value(x + 1, y, "u")
                      + fld.value(x, y + 1, "u") - beta * fld.value(x, y, "v"))
                scale = max(abs(fld.value(x, y, "u")), 1e-30)
                worst = max(worst, abs(r1) / scale, abs(r2) / scale)
        assert worst < 1e-6

    def test_tri_dirichlet_boundary_conditions(self, inc_triangular):
        problem = ScalarWHProblem.for_family("tri_dirichlet", inc_triangular)
        sol = solve_scalar(problem)
        fld = reconstruct_field(problem, sol, ((-12, 12), (-2, 2)))
        # pinned row (total field zero) and the free row-0 equation
        for x in range(-12, 0):
            assert abs(fld.value(x, 0) + inc_triangular.field(x, 0)) < 1e-12
        worst = 0.0
        for x in range(0, 10):
            res = (fld.value(x + 1, 0) + fld.value(x - 1, 0) + 2 * fld.value(x, 1)
                   + 2 * fld.value(x - 1, 1) + (1.5 * W2 - 6) * fld.value(x, 0))
            worst = max(worst, abs(res))
        assert worst < 1e-6

    def test_window_guard(self, inc_square):
        problem = ScalarWHProblem.for_family(
            "sq_crack", inc_square, CircleGrid(1.0, 64))
        sol = solve_scalar(problem)
        with pytest.raises(WindowTooLarge):
            reconstruct_field(problem, sol, ((-40, 40), (-40, 40)))


class TestClosure:
    def test_sq_crack_has_no_constants(self, inc_square):
        sol = solve_scalar(ScalarWHProblem.for_family("sq_crack", inc_square))
        assert sol.constants == {}
        assert sol.closure_condition is None

    def test_sq_constraint_constant_vs_oracle(self, inc_square):
        sol = solve_scalar(ScalarWHProblem.for_family("sq_constraint", inc_square))
        spec = LatticeProblemSpec("square", (Defect("constraint", 0, "left", 0),),
                                  inc_square)
        fld = solve_direct(assemble(spec, 60))
        ref = fld.value(0, 0)
        got = sol.constants[("u", 0, 0)]
        assert abs(got - ref) / abs(ref) < 1e-2
        assert sol.closure_condition < 1e6

    def test_tri_dirichlet_constants_vs_oracle(self, inc_triangular):
        sol = solve_scalar(ScalarWHProblem.for_family("tri_dirichlet", inc_triangular))
        spec = LatticeProblemSpec("triangular", (Defect("constraint", 0, "left", 0),),
                                  inc_triangular)
        fld = solve_direct(assemble(spec, 60))
        for key in (("u", -1, 1), ("u", 0, 0)):
            _, x, y = key
            ref = fld.value(x, y)
            assert abs(sol.constants[key] - ref) / abs(ref) < 2e-2
        assert sol.closure_condition < 1e6


class TestParameterCorners:
    # negative angles flip every row-shift phase and the vertical mode
    # selection; low damping stresses the annulus, high frequency the
    # branch geometry
    @pytest.mark.parametrize("family,lattice,omega,theta", [
        ("sq_crack", "square", 2 + 0.2j, 0.9),
        ("sq_constraint", "square", 1 + 0.1j, -0.52),
        ("tri_dirichlet", "triangular", 0.5 + 0.05j, -0.4),
        ("hex_crack", "honeycomb", 1 + 0.1j, -0.4),
    ])
    def test_end_to_end(self, family, lattice, omega, theta):
        inc = dispersion_solve(lattice, Frequency(omega), theta)
        problem = ScalarWHProblem.for_family(family, inc)
        sol = solve_scalar(problem)
        fld = reconstruct_field(problem, sol, ((-10, 10), (-10, 10)))
        oracle_fld = solve_direct(assemble(
            LatticeProblemSpec(lattice, (Defect(
                "crack" if "crack" in family else "constraint", 0, "left", 0),), inc),
            60))
        rep = compare_fields(fld, oracle_fld, ((-10, 10), (-10, 10)))
        assert rep.rel_l2 < 2e-2


class TestFieldCsv:
    def test_roundtrip(self, inc_square, tmp_path):
        problem = ScalarWHProblem.for_family("sq_crack", inc_square)
        sol = solve_scalar(problem)
        fld = reconstruct_field(problem, sol, ((-5, 5), (-5, 5)))
        path = tmp_path / "field.csv"
        fld.to_csv(path)
        text = path.read_text()
        assert "# lattice = square" in text
        assert "x,y,re_u,im_u" in text
        from latticewh.fields import FieldGrid
        back = FieldGrid.from_csv(path)
        assert np.max(np.abs(back.u - fld.u)) < 1e-15
        rep = compare_fields(back, fld, ((-5, 5), (-5, 5)))
        assert rep.rel_l2 == 0.0
