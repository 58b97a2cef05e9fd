"""Command-line interface.

Exit codes: 0 on success, 1 on numerical failure (singular operating point,
verification tolerance breach), 2 on usage or parse errors. File formats are
documented in :mod:`milac.fileio`; the `complexity` report writes CSV and can
additionally render the comparison figure next to it.
"""

from __future__ import annotations

import argparse
import os
import sys

from . import costmodel, estimation, kalman, lossless, network
from .fileio import (
    ParseError,
    list_observation_files,
    parse_matrix,
    parse_vector,
    write_matrix,
    write_vector,
)
from .numerics import CostMeter, DimensionError, SingularMatrixError

DEFAULT_TOL = 1e-9


def _default_tol() -> float:
    raw = os.environ.get("MILAC_TOL")
    if raw is None:
        return DEFAULT_TOL
    try:
        value = float(raw)
    except ValueError:
        raise ParseError("MILAC_TOL", None, f"environment override '{raw}' is not a number") from None
    if not value > 0:
        raise ParseError("MILAC_TOL", None, "environment override must be positive")
    return value


def _print_cost(meter: CostMeter) -> None:
    print(f"adds={meter.adds}")
    print(f"subs={meter.subs}")
    print(f"muls={meter.muls}")
    print(f"divs={meter.divs}")
    print(f"total={meter.total()}")


def _parse_sizes(expr: str) -> list[int]:
    parts = expr.split(":")
    if len(parts) == 1:
        parts = [parts[0], parts[0]]
    if len(parts) == 2:
        parts.append("x2")
    if len(parts) != 3:
        raise ValueError(f"sizes range '{expr}' must look like start:stop:x2 or start:stop:+k")
    try:
        start, stop = int(parts[0]), int(parts[1])
    except ValueError:
        raise ValueError(f"sizes range '{expr}': start and stop must be integers") from None
    step = parts[2]
    if start < 1 or stop < start:
        raise ValueError(f"sizes range '{expr}': need 1 <= start <= stop")
    sizes = []
    current = start
    if step.startswith("x"):
        try:
            factor = int(step[1:])
        except ValueError:
            raise ValueError(f"sizes range '{expr}': bad multiplier '{step}'") from None
        if factor < 2:
            raise ValueError(f"sizes range '{expr}': multiplier must be >= 2")
        while current <= stop:
            sizes.append(current)
            current *= factor
    elif step.startswith("+"):
        try:
            increment = int(step[1:])
        except ValueError:
            raise ValueError(f"sizes range '{expr}': bad increment '{step}'") from None
        if increment < 1:
            raise ValueError(f"sizes range '{expr}': increment must be >= 1")
        while current <= stop:
            sizes.append(current)
            current += increment
    else:
        raise ValueError(f"sizes range '{expr}': step must start with 'x' or '+'")
    if len(sizes) > 10000:
        raise ValueError(f"sizes range '{expr}' expands to more than 10000 sizes")
    return sizes


def _cmd_simulate(args) -> int:
    grid_values = parse_matrix(args.network)
    grid = network.ComponentGrid(grid_values.data)
    u = parse_vector(args.input)
    net = network.MilacNetwork(args.n, grid.size - args.n, args.y0, grid)
    sol = network.simulate(net, u)
    write_vector(args.out, sol.v)
    return 0


def _load_model(args) -> estimation.LinearObservationModel:
    return estimation.LinearObservationModel(
        parse_matrix(args.h), parse_matrix(args.cx), parse_matrix(args.cn)
    )


def _cmd_lmmse(args) -> int:
    model = _load_model(args)
    y = parse_vector(args.y)
    meter = CostMeter()
    sign = 1 if args.sign == "plus" else -1
    if args.mode == "digital":
        result = estimation.lmmse_digital(model, y, form=2, meter=meter)
    else:
        result = estimation.lmmse_analog(model, y, sign=sign, meter=meter)
    write_vector(args.out, result.xhat)
    if args.cost:
        _print_cost(meter)
    return 0


def _cmd_cov(args) -> int:
    model = _load_model(args)
    meter = CostMeter()
    if args.mode == "digital":
        result = estimation.cov_digital(model, form=2, meter=meter)
    else:
        result = estimation.cov_analog(model, meter=meter)
    write_matrix(args.out, result.ce)
    if args.cost:
        _print_cost(meter)
    return 0


def _cmd_invert(args) -> int:
    matrix = parse_matrix(args.matrix)
    meter = CostMeter()
    if args.mode == "digital":
        from .numerics import gauss_invert

        inverse = gauss_invert(matrix, meter)
    else:
        inverse = estimation.invert_analog(matrix, meter)
    write_matrix(args.out, inverse)
    if args.cost:
        _print_cost(meter)
    return 0


def _cmd_kalman(args) -> int:
    model = kalman.DynamicalModel(
        transition=parse_matrix(args.a),
        observation=parse_matrix(args.h),
        state_noise_cov=parse_matrix(args.m),
        obs_noise_cov=parse_matrix(args.ncov),
    )
    x0 = parse_vector(args.x0)
    r0 = parse_matrix(args.r0)
    obs_files = list_observation_files(args.obs)
    if args.steps is not None:
        obs_files = obs_files[: args.steps]
    if not obs_files:
        raise ParseError(args.obs, None, "no observation files (*.cvec) found")
    observations = [parse_vector(path) for path in obs_files]
    meter = CostMeter()
    initial = kalman.FilterState(x0, r=r0)
    trajectory = kalman.kalman_run(model, initial, observations, mode=args.mode, meter=meter)
    os.makedirs(args.out, exist_ok=True)
    for t, state in enumerate(trajectory, start=1):
        write_vector(os.path.join(args.out, f"xhat_{t:04d}.cvec"), state.xhat)
        assert state.r is not None
        write_matrix(os.path.join(args.out, f"rcov_{t:04d}.cmx"), state.r)
    if args.cost:
        _print_cost(meter)
    return 0


def _cmd_lossless_verify(args) -> int:
    y = parse_matrix(args.y)
    u = parse_vector(args.input)
    tol = args.tol if args.tol is not None else _default_tol()
    if not 1 <= args.n <= y.rows:
        raise ParseError(args.y, None, f"driven-port count {args.n} out of range for {y.rows} ports")
    net = network.MilacNetwork.from_admittance(y, args.n, args.y0)
    reference = network.simulate(net, u).v
    bbar = lossless.build_susceptance(y, args.n, args.y0)
    lifted = lossless.simulate_lossless(bbar, u, args.y0)
    report = lossless.verify_lifting(lifted, reference, tol, bbar)
    print(f"max_deviation={report.max_deviation!r}")
    print(f"relative_deviation={report.relative_deviation!r}")
    print(f"tolerance={report.tolerance!r}")
    print(f"susceptance_real={'yes' if report.susceptance_is_real else 'no'}")
    print(f"susceptance_asymmetry={report.susceptance_asymmetry!r}")
    print(f"status={'pass' if report.passed else 'fail'}")
    return 0 if report.passed else 1


def _cmd_complexity(args) -> int:
    sizes = _parse_sizes(args.sizes)
    rows = costmodel.speedup_table(args.op, sizes)
    costmodel.write_table(args.out, rows)
    if args.plot:
        costmodel.render_figure(args.plot, args.op, rows)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="milac",
        description="Analog-network linear algebra: simulation, estimation, and cost models.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", help="solve a configured network for an input vector")
    p.add_argument("--network", required=True, help="component-grid matrix file (.cmx)")
    p.add_argument("--y0", type=float, default=network.Y0_DEFAULT, help="reference admittance in siemens")
    p.add_argument("--n", type=int, required=True, help="number of driven ports")
    p.add_argument("--input", required=True, help="input vector file (.cvec)")
    p.add_argument("--out", required=True, help="output vector file for all port voltages")
    p.set_defaults(func=_cmd_simulate)

    p = sub.add_parser("lmmse", help="linear MMSE estimate of x from y = Hx + n")
    p.add_argument("--h", required=True, help="observation matrix file")
    p.add_argument("--cx", required=True, help="state covariance matrix file")
    p.add_argument("--cn", required=True, help="noise covariance matrix file")
    p.add_argument("--y", required=True, help="observation vector file")
    p.add_argument("--mode", choices=("digital", "analog"), default="digital")
    p.add_argument("--sign", choices=("plus", "minus"), default="plus")
    p.add_argument("--out", required=True, help="estimate vector output file")
    p.add_argument("--cost", action="store_true", help="print the operation meter")
    p.set_defaults(func=_cmd_lmmse)

    p = sub.add_parser("cov", help="error covariance of the linear MMSE estimator")
    p.add_argument("--h", required=True)
    p.add_argument("--cx", required=True)
    p.add_argument("--cn", required=True)
    p.add_argument("--mode", choices=("digital", "analog"), default="digital")
    p.add_argument("--out", required=True, help="covariance matrix output file")
    p.add_argument("--cost", action="store_true")
    p.set_defaults(func=_cmd_cov)

    p = sub.add_parser("invert", help="invert a square matrix")
    p.add_argument("--matrix", required=True)
    p.add_argument("--mode", choices=("digital", "analog"), default="digital")
    p.add_argument("--out", required=True)
    p.add_argument("--cost", action="store_true")
    p.set_defaults(func=_cmd_invert)

    p = sub.add_parser("kalman", help="run a Kalman filter over an observation directory")
    p.add_argument("--a", required=True, help="state transition matrix file")
    p.add_argument("--h", required=True, help="observation matrix file")
    p.add_argument("--m", required=True, help="state-noise covariance file")
    p.add_argument("--ncov", required=True, help="observation-noise covariance file")
    p.add_argument("--x0", required=True, help="initial state estimate vector file")
    p.add_argument("--r0", required=True, help="initial covariance matrix file")
    p.add_argument("--obs", required=True, help="directory of observation files obs_0001.cvec ...")
    p.add_argument("--steps", type=int, default=None, help="number of steps (default: all files)")
    p.add_argument("--mode", choices=("digital", "analog"), default="digital")
    p.add_argument("--out", required=True, help="output trajectory directory")
    p.add_argument("--cost", action="store_true")
    p.set_defaults(func=_cmd_kalman)

    p = sub.add_parser("lossless-verify", help="check the doubled lossless realization of a network")
    p.add_argument("--y", required=True, help="complex admittance matrix file")
    p.add_argument("--n", type=int, required=True, help="number of driven ports")
    p.add_argument("--y0", type=float, default=network.Y0_DEFAULT)
    p.add_argument("--input", required=True, help="input vector file")
    p.add_argument("--tol", type=float, default=None, help="relative tolerance (default MILAC_TOL or 1e-9)")
    p.set_defaults(func=_cmd_lossless_verify)

    p = sub.add_parser("complexity", help="emit digital-vs-analog operation-count tables")
    p.add_argument("--op", choices=sorted(costmodel.FORMULAS), required=True)
    p.add_argument("--sizes", required=True, help="size range, e.g. 16:8192:x2 or 8:64:+8")
    p.add_argument("--out", required=True, help="CSV output file")
    p.add_argument("--plot", default=None, help="also render the comparison figure to this image file")
    p.set_defaults(func=_cmd_complexity)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        code = exc.code
        return code if isinstance(code, int) else (0 if code is None else 2)
    try:
        return args.func(args)
    except ParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (SingularMatrixError, kalman.FilterStepError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 1
    except (DimensionError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # fuzz safety: never crash on hostile input
        print(f"error: unexpected failure: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
