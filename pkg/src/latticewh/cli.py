"""Command-line interface: kernels, factorization, solves, oracle, verification.

Subcommands
-----------
kernel     sample a scalar or matrix kernel on a circle, write CSV
factorize  multiplicative factorization of a scalar kernel (CSV + JSON report)
solve      end-to-end scalar WH solve, write the field CSV and a report
oracle     finite-lattice direct solve (family shortcut or JSON problem spec)
compare    relative l2 / max-abs difference of two field CSV files
verify     run a named invariant suite; exits nonzero on any violation

Exit codes: 0 success, 1 invalid input, 2 numerical failure.
Outputs are deterministic: identical configurations produce identical bytes.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import dataclass, field

import numpy as np

from . import branches, kernels, whsolver
from .branches import Frequency, Lattice, dispersion_solve
from .errors import (
    DivergentSeries,
    IllConditionedClosure,
    LatticeWHError,
    NoConvergence,
    NonzeroWinding,
    OutsidePassBand,
    PhaseStepTooLarge,
    SolveFailure,
    UnsupportedFamily,
    ZeroOnContour,
)
from .fields import FieldGrid, compare_fields
from .kernels import (
    MATRIX_FAMILIES,
    SCALAR_FAMILIES,
    MatrixKernelSpec,
    ScalarKernel,
    det_closed_form,
    diag_limit_defect,
    dk_form,
    eval_matrix_kernel,
    eval_scalar_kernel,
)
from .oracle import BlochSpec, Defect, LatticeProblemSpec, assemble, problem_for, solve_direct, wh_residual
from .series import CircleGrid, mult_factorize, sample, series_to_csv

_NUMERICAL_ERRORS = (
    NonzeroWinding, DivergentSeries, SolveFailure, IllConditionedClosure,
    NoConvergence, OutsidePassBand, ZeroOnContour, PhaseStepTooLarge,
)


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write(f"error: {message}\n")
        sys.exit(1)


@dataclass
class RunConfig:
    """Validated run parameters shared by the computational subcommands."""

    family: str | None = None
    omega: complex = 1 + 0.1j
    theta: float = 0.0
    amplitude: complex = 1.0 + 0j
    nq: int = 4096
    radius: float = 1.0
    half_width: int = 100
    window: int = 20
    count: int | None = None
    sep: int = 1
    offsets: tuple[int, ...] = field(default_factory=tuple)
    bloch_period: int | None = None

    def validate(self, need_damping: bool):
        if self.omega.real <= 0:
            raise ValueError("Re(omega) must be positive")
        if need_damping and self.omega.imag <= 0:
            raise ValueError("this command requires Im(omega) > 0")
        if not -math.pi / 2 < self.theta < math.pi / 2:
            raise ValueError("theta must lie in (-pi/2, pi/2)")
        if self.nq <= 0 or self.nq % 2:
            raise ValueError("nq must be a positive even integer")
        if self.radius <= 0:
            raise ValueError("radius must be positive")
        return self


def _parse_complex(text: str) -> complex:
    parts = text.split(",")
    if len(parts) == 1:
        return complex(float(parts[0]), 0.0)
    if len(parts) == 2:
        return complex(float(parts[0]), float(parts[1]))
    raise ValueError(f"cannot parse complex number from {text!r}")


def _config_from_args(args) -> RunConfig:
    cfg = RunConfig(
        family=getattr(args, "family", None),
        omega=_parse_complex(args.omega),
        theta=getattr(args, "theta", 0.0),
        amplitude=_parse_complex(getattr(args, "amplitude", "1")),
        nq=getattr(args, "nq", 4096),
        radius=getattr(args, "radius", 1.0),
        half_width=getattr(args, "half_width", 100),
        window=getattr(args, "window", 20),
        count=getattr(args, "nu", None),
        sep=getattr(args, "sep", 1),
        offsets=tuple(int(t) for t in getattr(args, "offsets", "").split(",") if t != ""),
        bloch_period=getattr(args, "bloch_period", None),
    )
    return cfg


def _kernel_descriptor(cfg: RunConfig):
    """ScalarKernel or MatrixKernelSpec from a validated configuration."""
    fam = cfg.family
    if fam in SCALAR_FAMILIES:
        return ScalarKernel(fam, cfg.omega)
    if fam not in MATRIX_FAMILIES:
        raise UnsupportedFamily(f"unknown kernel family {fam!r}")
    psi = None
    if fam == "mixed_array":
        inc = dispersion_solve(Lattice.SQUARE, Frequency(cfg.omega), cfg.theta)
        psi = complex(np.exp(-1j * inc.kappa_y * cfg.sep))
    return MatrixKernelSpec(fam, cfg.omega, count=cfg.count, sep=cfg.sep,
                            offsets=cfg.offsets, psi=psi)


def _incidence_for(cfg: RunConfig, lattice: Lattice):
    return dispersion_solve(lattice, Frequency(cfg.omega), cfg.theta, cfg.amplitude)


def _write_json(path, payload: dict):
    text = json.dumps(payload, indent=2, sort_keys=True, default=_json_default)
    if path is None:
        print(text)
    else:
        with open(path, "w") as fh:
            fh.write(text + "\n")


def _json_default(obj):
    if isinstance(obj, complex):
        return [obj.real, obj.imag]
    if isinstance(obj, (np.complexfloating,)):
        return [float(obj.real), float(obj.imag)]
    if isinstance(obj, (np.floating, np.integer)):
        return float(obj)
    raise TypeError(f"not JSON-serializable: {type(obj)}")


# --- subcommands -------------------------------------------------------------

def _cmd_kernel(args) -> int:
    if args.list_families:
        for fam in SCALAR_FAMILIES:
            print(f"{fam}  (scalar)")
        for fam in MATRIX_FAMILIES:
            print(f"{fam}  (matrix)")
        return 0
    if args.family is None or args.output is None:
        raise ValueError("kernel requires --family and --output (or --list)")
    cfg = _config_from_args(args).validate(need_damping=False)
    kern = _kernel_descriptor(cfg)
    grid = CircleGrid(cfg.radius, cfg.nq)
    nodes = grid.nodes
    with open(args.output, "w") as fh:
        fh.write(f"# family = {cfg.family}\n# omega = {cfg.omega}\n")
        fh.write(f"# nq = {cfg.nq}\n# radius = {cfg.radius}\n")
        if isinstance(kern, ScalarKernel):
            vals = eval_scalar_kernel(kern, nodes)
            fh.write("k,z_re,z_im,re,im\n")
            for k, (z, val) in enumerate(zip(nodes, vals)):
                fh.write(f"{k},{z.real:.17e},{z.imag:.17e},{val.real:.17e},{val.imag:.17e}\n")
        else:
            fh.write("k,z_re,z_im,i,j,re,im\n")
            for k, z in enumerate(nodes):
                mat = eval_matrix_kernel(kern, z)
                for i in range(kern.dim):
                    for j in range(kern.dim):
                        val = mat[i, j]
                        fh.write(f"{k},{z.real:.17e},{z.imag:.17e},{i},{j},"
                                 f"{val.real:.17e},{val.imag:.17e}\n")
    return 0


def _cmd_factorize(args) -> int:
    cfg = _config_from_args(args).validate(need_damping=False)
    if cfg.family not in SCALAR_FAMILIES:
        raise UnsupportedFamily("factorize supports scalar kernel families only")
    kern = ScalarKernel(cfg.family, cfg.omega)
    grid = CircleGrid(cfg.radius, cfg.nq)
    samples = sample(lambda z: eval_scalar_kernel(kern, z), grid)
    plus, minus, report = mult_factorize(samples, grid)
    # factors are unique only up to a constant; this package fixes K_minus(0) = 1
    norm_note = "normalization = K_minus(0) = 1"
    series_to_csv(plus, args.output_plus,
                  header_lines=["factor = plus", f"family = {cfg.family}", norm_note])
    series_to_csv(minus, args.output_minus,
                  header_lines=["factor = minus", f"family = {cfg.family}", norm_note])
    _write_json(args.report, {"family": cfg.family, "omega": cfg.omega, **report.as_dict()})
    return 0


def _cmd_solve(args) -> int:
    cfg = _config_from_args(args).validate(need_damping=True)
    if cfg.family not in SCALAR_FAMILIES:
        raise UnsupportedFamily("solve supports the four scalar problems only")
    lattice = kernels.kernel_lattice(cfg.family)
    inc = _incidence_for(cfg, lattice)
    problem = whsolver.ScalarWHProblem.for_family(
        cfg.family, inc, CircleGrid(cfg.radius, cfg.nq))
    solution = whsolver.solve_scalar(problem)
    wnd = cfg.window
    fld = whsolver.reconstruct_field(problem, solution, ((-wnd, wnd), (-wnd, wnd)))
    fld.to_csv(args.output)
    payload = {
        "family": cfg.family,
        "omega": cfg.omega,
        "theta": cfg.theta,
        "residual": solution.residual,
        "winding": solution.factorization.winding,
        "factorization_residual": solution.factorization.reconstruction_residual,
        "constants": {f"{sub}({x},{y})": v
                      for (sub, x, y), v in solution.constants.items()},
        "closure_condition": solution.closure_condition,
    }
    _write_json(args.report, payload)
    return 0


def _problem_from_json(path) -> tuple[LatticeProblemSpec, int]:
    with open(path) as fh:
        data = json.load(fh)
    lattice = Lattice(data["lattice"])
    omega = complex(*data["omega"]) if isinstance(data["omega"], list) else complex(data["omega"])
    amplitude = complex(*data.get("amplitude", [1.0, 0.0]))
    inc = dispersion_solve(lattice, Frequency(omega), float(data.get("theta", 0.0)), amplitude)
    defects = tuple(
        Defect(d["kind"], int(d["row"]), d.get("side", "left"), int(d.get("tip", 0)))
        for d in data.get("defects", ())
    )
    bloch = None
    if "bloch" in data and data["bloch"]:
        period = int(data["bloch"]["period"])
        bloch = BlochSpec(period=period,
                          multiplier=complex(np.exp(-1j * inc.kappa_y * period)))
    spec = LatticeProblemSpec(lattice, defects, inc, bloch)
    return spec, int(data.get("half_width", 100))


def _cmd_oracle(args) -> int:
    if args.config:
        spec, half_width = _problem_from_json(args.config)
        if args.half_width is not None:
            half_width = args.half_width
    else:
        cfg = _config_from_args(args).validate(need_damping=True)
        if cfg.family is None:
            raise ValueError("oracle requires --family or --config")
        kern = _kernel_descriptor(cfg)
        inc = _incidence_for(cfg, kern.lattice)
        spec = problem_for(kern, inc)
        half_width = cfg.half_width
    fld = solve_direct(assemble(spec, half_width))
    fld.to_csv(args.output)
    return 0


def _cmd_compare(args) -> int:
    a = FieldGrid.from_csv(args.field_a)
    b = FieldGrid.from_csv(args.field_b)
    wnd = args.window
    report = compare_fields(a, b, ((-wnd, wnd), (-wnd, wnd)))
    _write_json(args.report, report.as_dict())
    return 0


# --- verify suites -----------------------------------------------------------

def _suite_branches(failures: list):
    ks = np.arange(4096)
    zs = np.exp(2j * np.pi * (ks + 0.5) / 4096)
    for omega in (0.5 + 0.05j, 1 + 0.1j, 2 + 0.2j):
        bv = branches.square_branches(zs, omega)
        lam = np.asarray(bv.lam)
        quad = np.abs(lam + 1 / lam + zs + 1 / zs - 4 + omega**2)
        _check(failures, f"lam quadratic residual omega={omega}", float(np.max(quad)), 1e-11)
        _check(failures, f"r^2-h^2=4 omega={omega}",
               float(np.max(np.abs(np.asarray(bv.r)**2 - np.asarray(bv.h)**2 - 4))), 1e-12)
        _check(failures, f"|lam|<=1 omega={omega}", float(np.max(np.abs(lam))), 1 + 1e-12)
        for name, root in (("t", branches.tri_branch(zs, omega)),
                           ("hh", branches.hex_branch(zs, omega))):
            root = np.asarray(root)
            s = omega**2 if name == "t" else branches.hex_reduced_omega_sq(omega)
            res = np.abs((1 + 1 / zs) * root**2
                         - (6 - zs - 1 / zs - 1.5 * s) * root + (1 + zs))
            _check(failures, f"{name} quadratic residual omega={omega}", float(np.max(res)), 1e-11)
            _check(failures, f"|{name}|<1 omega={omega}", float(np.max(np.abs(root))), 1.0)


def _suite_dets(failures: list):
    rng = np.random.default_rng(42)
    omega = 1 + 0.1j
    for nu in (2, 3, 5):
        for sep in (1, 2, 4):
            offsets = tuple(int(v) for v in rng.integers(0, 9, nu))
            for fam in ("array_cracks", "array_constraints"):
                spec = MatrixKernelSpec(fam, omega, count=nu, sep=sep, offsets=offsets)
                err = _det_err(spec, rng, 64)
                _check(failures, f"det {fam} nu={nu} N={sep}", err, 1e-10)
    for fam, kw in (
        ("mixed_array", {"sep": 3, "psi": 0.8 + 0.35j}),
        ("pair_crack_constraint", {"sep": 2}),
        ("opposing_mixed", {"sep": 2, "offsets": (3,)}),
        ("opposing_cracks", {"sep": 2, "offsets": (3,)}),
        ("opposing_constraints", {"sep": 2, "offsets": (3,)}),
    ):
        spec = MatrixKernelSpec(fam, omega, **kw)
        err = _det_err(spec, rng, 64)
        _check(failures, f"det {fam}", err, 1e-10)


def _det_err(spec, rng, count) -> float:
    worst = 0.0
    for _ in range(count):
        z = complex(np.exp(2j * np.pi * rng.random()) * (0.95 + 0.1 * rng.random()))
        num = complex(np.linalg.det(eval_matrix_kernel(spec, z)))
        ref = det_closed_form(spec, z)
        worst = max(worst, abs(num - ref) / max(1.0, abs(ref)))
    return worst


def _suite_dk(failures: list):
    rng = np.random.default_rng(7)
    for fam in ("tri_crack_2x2", "hex_constraint_2x2"):
        spec = MatrixKernelSpec(fam, 1 + 0.1j)
        form = dk_form(spec)
        worst_recon = worst_r = worst_det = 0.0
        for _ in range(256):
            z = complex(np.exp(2j * np.pi * rng.random()))
            kz = eval_matrix_kernel(spec, z)
            worst_recon = max(worst_recon, float(np.max(np.abs(kz - form.reconstruct(z)))))
            rr = form.R(z) @ form.R(z) - z * np.eye(2)
            worst_r = max(worst_r, float(np.max(np.abs(rr))))
            worst_det = max(worst_det,
                            abs(complex(np.linalg.det(kz)) - form.det(z)) / abs(form.det(z)))
        _check(failures, f"DK reconstruction {fam}", worst_recon, 1e-12)
        _check(failures, f"R^2 = z I {fam}", worst_r, 1e-12)
        _check(failures, f"det K = (a1^2 - z a2^2)^-1 {fam}", worst_det, 1e-11)


def _suite_limits(failures: list):
    omega = 1 + 0.1j
    z = complex(np.exp(0.9j))
    lam = abs(branches.square_branches(z, omega).lam)
    for fam, kw in (
        ("pair_crack_constraint", {}),
        ("opposing_cracks", {"offsets": (0,)}),
        ("opposing_constraints", {"offsets": (0,)}),
        ("opposing_mixed", {"offsets": (0,)}),
        ("array_cracks", {"count": 2, "offsets": (0, 2)}),
        ("array_constraints", {"count": 2, "offsets": (0, 2)}),
    ):
        errs = {}
        for n in (10, 15, 20):
            spec = MatrixKernelSpec(fam, omega, sep=n, **kw)
            limit = diag_limit_defect(spec)(z)
            errs[n] = float(np.max(np.abs(eval_matrix_kernel(spec, z) - limit)))
        for n0, n1 in ((10, 15), (15, 20)):
            expected = lam ** (n1 - n0)
            ratio = errs[n1] / errs[n0]
            mismatch = max(ratio / expected, expected / ratio)
            _check(failures, f"limit rate {fam} N={n0}->{n1} vs |lam|^{n1 - n0}",
                   mismatch, 3.0)


def _suite_residuals(failures: list, half_width: int = 100):
    omega = 1 + 0.15j
    theta = math.pi / 6
    inc = dispersion_solve(Lattice.SQUARE, Frequency(omega), theta)
    psi = complex(np.exp(-1j * inc.kappa_y * 3))
    cases = [
        MatrixKernelSpec("array_cracks", omega, count=2, sep=3, offsets=(0, 2)),
        MatrixKernelSpec("array_cracks", omega, count=3, sep=2, offsets=(0, 2, 5)),
        MatrixKernelSpec("array_constraints", omega, count=2, sep=3, offsets=(0, 2)),
        MatrixKernelSpec("array_constraints", omega, count=3, sep=2, offsets=(0, 2, 5)),
        MatrixKernelSpec("pair_crack_constraint", omega, sep=3),
        MatrixKernelSpec("mixed_array", omega, sep=3, psi=psi),
        MatrixKernelSpec("opposing_cracks", omega, sep=3, offsets=(3,)),
        MatrixKernelSpec("opposing_constraints", omega, sep=3, offsets=(3,)),
        MatrixKernelSpec("opposing_mixed", omega, sep=3, offsets=(3,)),
    ]
    for spec in cases:
        prob = problem_for(spec, inc)
        fld = solve_direct(assemble(prob, half_width))
        res = wh_residual(prob, spec, fld)
        label = f"wh_residual {spec.family}" + (f" nu={spec.count}" if spec.count else "")
        _check(failures, label, res, 5e-2)


_SUITES = {
    "branches": _suite_branches,
    "dets": _suite_dets,
    "dk": _suite_dk,
    "limits": _suite_limits,
    "residuals": _suite_residuals,
}


def _check(failures: list, label: str, value: float, bound: float):
    ok = value <= bound
    print(f"{'PASS' if ok else 'FAIL'}  {label}: {value:.3e} (bound {bound:.1e})")
    if not ok:
        failures.append(label)


def _cmd_verify(args) -> int:
    names = list(_SUITES) if args.suite == "all" else [args.suite]
    failures: list = []
    for name in names:
        print(f"== suite {name}")
        _SUITES[name](failures)
    if failures:
        print(f"{len(failures)} check(s) failed")
        return 2
    print("all checks passed")
    return 0


# --- entry point --------------------------------------------------------------

def _build_parser() -> _Parser:
    parser = _Parser(prog="latticewh",
                     description="Wiener-Hopf kernels and solvers for lattice defect scattering")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p, damping: bool):
        p.add_argument("--omega", default="1,0.1", help="complex frequency, e.g. 1,0.1")
        p.add_argument("--theta", type=float, default=0.0, help="incidence angle (rad)")
        p.add_argument("--amplitude", default="1", help="incident amplitude, e.g. 1,0")
        p.add_argument("--nq", type=int, default=4096, help="circle sample count")
        p.add_argument("--radius", type=float, default=1.0, help="circle radius")

    pk = sub.add_parser("kernel", help="sample a kernel on a circle")
    pk.add_argument("--family")
    pk.add_argument("--list", action="store_true", dest="list_families",
                    help="print the kernel catalog and exit")
    add_common(pk, damping=False)
    pk.add_argument("--nu", type=int, default=None, help="defect count (array kernels)")
    pk.add_argument("--sep", type=int, default=1, help="row separation N")
    pk.add_argument("--offsets", default="", help="tip offsets, e.g. 0,2,5")
    pk.add_argument("-o", "--output", default=None)
    pk.set_defaults(func=_cmd_kernel)

    pf = sub.add_parser("factorize", help="factorize a scalar kernel")
    pf.add_argument("--family", required=True)
    add_common(pf, damping=False)
    pf.add_argument("--output-plus", default="factor_plus.csv")
    pf.add_argument("--output-minus", default="factor_minus.csv")
    pf.add_argument("--report", default=None, help="JSON report path (stdout if omitted)")
    pf.set_defaults(func=_cmd_factorize)

    ps = sub.add_parser("solve", help="solve a scalar WH problem end to end")
    ps.add_argument("--family", required=True)
    add_common(ps, damping=True)
    ps.add_argument("--window", type=int, default=20, help="field half window")
    ps.add_argument("-o", "--output", required=True, help="field CSV path")
    ps.add_argument("--report", default=None)
    ps.set_defaults(func=_cmd_solve)

    po = sub.add_parser("oracle", help="finite-lattice direct solve")
    po.add_argument("--family", default=None)
    po.add_argument("--config", default=None, help="JSON problem spec")
    po.add_argument("--omega", default="1,0.1")
    po.add_argument("--theta", type=float, default=0.0)
    po.add_argument("--amplitude", default="1")
    po.add_argument("--nq", type=int, default=4096)
    po.add_argument("--radius", type=float, default=1.0)
    po.add_argument("--nu", type=int, default=None)
    po.add_argument("--sep", type=int, default=1)
    po.add_argument("--offsets", default="")
    po.add_argument("-L", "--half-width", type=int, default=None)
    po.add_argument("-o", "--output", required=True)
    po.set_defaults(func=_cmd_oracle)

    pc = sub.add_parser("compare", help="compare two field CSV files")
    pc.add_argument("field_a")
    pc.add_argument("field_b")
    pc.add_argument("--window", type=int, default=20)
    pc.add_argument("--report", default=None)
    pc.set_defaults(func=_cmd_compare)

    pv = sub.add_parser("verify", help="run invariant suites")
    pv.add_argument("--suite", choices=[*_SUITES, "all"], default="all")
    pv.set_defaults(func=_cmd_verify)
    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "command", None) == "oracle" and args.half_width is None and not args.config:
        args.half_width = 100
    try:
        return args.func(args)
    except _NUMERICAL_ERRORS as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 2
    except (ValueError, LatticeWHError, FileNotFoundError, KeyError) as exc:
        print(f"invalid input: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
