"""Command-line interface.

Exit codes: 0 success, 1 numerical failure, 2 validation negative (an
operation increases trace), 3 input error, 4 rank deficiency, 5 every Monte
Carlo sample annihilated.
"""
from __future__ import annotations

import argparse
import json
import sys
from contextlib import contextmanager
from pathlib import Path

import numpy as np

from . import io
from .errors import (DegenerateSamplingError, DomainError, NumericalFailure, QopdistError,
                     RankDeficiencyError, ShapeError, SizeError, ValidationError)
from .models import (BeamSplitterParams, NsGateParams, beam_splitter,
                     beam_splitter_closed_form, ns_gate_pair)
from .operations import validate
from .renormalization import BoundOptions, bound, normalizing_distance
from .sampling import (DEFAULT_SAMPLES, contraction_and_rotation, feasible_boundary,
                       haar_states, in_feasible_domain, mc_lower_bound, min_cos_theta)

EXIT_OK = 0
EXIT_NUMERICAL = 1
EXIT_INVALID = 2
EXIT_INPUT = 3
EXIT_RANK = 4
EXIT_DEGENERATE = 5


class InputError(QopdistError):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


def fmt(x: float) -> str:
    """17 significant digits; round-trips any float64."""
    return format(float(x), ".16e")


def write_csv(rows, header, out) -> None:
    text = ",".join(header) + "\n" + "".join(",".join(row) + "\n" for row in rows)
    _emit(text, out)


def _emit(text: str, out) -> None:
    if out is None or out == "-":
        sys.stdout.write(text)
    else:
        with open(out, "w", newline="\n") as fh:
            fh.write(text)


def print_json(obj) -> None:
    sys.stdout.write(json.dumps(obj, indent=2) + "\n")


@contextmanager
def _input_errors():
    try:
        yield
    except OSError as exc:
        raise InputError(str(exc)) from exc


def _load(path):
    with _input_errors():
        return io.load_operation(path)


def _bound_opts(args) -> BoundOptions:
    return BoundOptions(rank_tol=args.rank_tol, gap_tol=args.gap_tol)


# commands ------------------------------------------------------------------------------

def cmd_validate(args) -> int:
    report = validate(_load(args.path))
    print_json(report.to_dict())
    return EXIT_OK if report.trace_nonincreasing else EXIT_INVALID


def cmd_bound(args) -> int:
    e, f = _load(args.path_e), _load(args.path_f)
    opts = _bound_opts(args)
    fwd = bound(e, f, opts)
    if not args.both_orders:
        print_json(fwd.to_dict())
        return EXIT_OK
    rev = bound(f, e, opts)
    print_json({"forward": fwd.to_dict(), "reverse": rev.to_dict(),
                "min_total": min(fwd.total, rev.total)})
    return EXIT_OK


def cmd_mc(args) -> int:
    e, f = _load(args.path_e), _load(args.path_f)
    report = mc_lower_bound(e, f, n_samples=args.samples, ancilla_dim=args.ancilla_dim,
                            seed=args.seed, workers=args.workers)
    if args.csv:
        rows = ([str(int(i)), fmt(d)] for i, d in zip(report.indices, report.samples))
        write_csv(rows, ["sample_index", "trace_distance"], args.csv)
    print_json(report.summary())
    return EXIT_OK


def _sweep_grid(lo: float, hi: float, points: int) -> np.ndarray:
    if points < 1 or not np.isfinite(lo) or not np.isfinite(hi) or lo > hi:
        raise InputError(f"invalid sweep range [{lo}, {hi}] with {points} points")
    return np.linspace(lo, hi, points)


def cmd_sweep(args) -> int:
    opts = _bound_opts(args)
    rows = []
    if args.model == "beamsplitter":
        grid = _sweep_grid(args.gamma_min, args.gamma_max, args.points)
        if grid[0] <= 0:
            raise InputError("loss ratio must be positive")
        ideal = beam_splitter(BeamSplitterParams(args.theta, args.phi))
        for ratio in grid:
            p = BeamSplitterParams.from_loss_ratio(ratio, args.theta, args.phi)
            lossy = beam_splitter(p)
            closed = beam_splitter_closed_form(p.theta, p.gamma_r, p.gamma_t)
            total = bound(ideal, lossy, opts).total
            mc = mc_lower_bound(ideal, lossy, args.samples, args.ancilla_dim, args.seed, args.workers)
            rows.append([fmt(ratio), fmt(closed), fmt(total), fmt(mc.max_distance)])
        header = ["Gamma", "closed_form", "bound_total", "mc_max"]
    else:
        grid = _sweep_grid(args.mu_min, args.mu_max, args.points)
        if grid[0] < 0:
            raise InputError("dark count rate must be >= 0")
        try:
            pairs = [ns_gate_pair(NsGateParams(mu)) for mu in grid]
        except ValidationError as exc:
            raise InputError(str(exc)) from exc
        for mu, (ideal, faulty) in zip(grid, pairs):
            total = bound(ideal, faulty, opts).total
            mc = mc_lower_bound(ideal, faulty, args.samples, args.ancilla_dim, args.seed, args.workers)
            rows.append([fmt(mu), fmt(total), fmt(mc.max_distance)])
        header = ["mu", "bound_total", "mc_max"]
    write_csv(rows, header, args.csv)
    return EXIT_OK


def _parse_lambdas(text: str) -> np.ndarray:
    try:
        lam = np.array([float(x) for x in text.split(",") if x.strip()])
    except ValueError as exc:
        raise InputError(f"--lambdas: {exc}") from exc
    if lam.size == 0:
        raise InputError("--lambdas: empty list")
    if np.any(lam < 0) or not np.all(np.isfinite(lam)):
        raise InputError("--lambdas: eigenvalues must be finite and non-negative")
    return np.sort(lam)[::-1]


def cmd_domain(args) -> int:
    lam = _parse_lambdas(args.lambdas)
    boundary = feasible_boundary(lam, args.points)
    rng = np.random.default_rng(args.seed)
    r, cos = contraction_and_rotation(lam, haar_states(args.samples, lam.size, rng))
    ok = r > 0
    r, cos = r[ok], cos[ok]
    inside = in_feasible_domain(lam, r, cos, slack=1e-9)

    text = "# boundary\nr,cos_theta\n"
    text += "".join(f"{fmt(p.r)},{fmt(p.cos_theta)}\n" for p in boundary)
    text += "# samples\nr,cos_theta\n"
    text += "".join(f"{fmt(a)},{fmt(b)}\n" for a, b in zip(r, cos))
    if args.csv:
        _emit(text, args.csv)
    print_json({
        "lambdas": [float(x) for x in lam],
        "boundary_points": len(boundary),
        "min_cos_theta_boundary": min(p.cos_theta for p in boundary),
        "min_cos_theta_formula": min_cos_theta(lam),
        "normalizing_distance": normalizing_distance(lam),
        "samples": int(r.size),
        "samples_inside": int(inside.sum()),
        "all_inside": bool(inside.all()),
    })
    return EXIT_OK


def cmd_model(args) -> int:
    if args.model == "beamsplitter":
        ideal = beam_splitter(BeamSplitterParams(args.theta, args.phi))
        faulty = beam_splitter(BeamSplitterParams(args.theta, args.phi, args.gamma_r, args.gamma_t))
    else:
        ideal, faulty = ns_gate_pair(NsGateParams(args.mu))
    with _input_errors():
        io.save_operation(ideal, args.ideal_out)
        io.save_operation(faulty, args.faulty_out)
    return EXIT_OK


# parser --------------------------------------------------------------------------------

def _add_bound_flags(p):
    p.add_argument("--rank-tol", type=float, default=None,
                   help="singular value cutoff for the Stinespring operator (default: numerical rank)")
    p.add_argument("--gap-tol", type=float, default=1e-7, help="certified SDP gap (default 1e-7)")


def _add_mc_flags(p, samples=DEFAULT_SAMPLES):
    p.add_argument("--samples", type=int, default=samples)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--ancilla-dim", type=int, default=None,
                   help="ancilla dimension (default: input dimension)")
    p.add_argument("--workers", type=int, default=None,
                   help="worker threads (default: $QOPDIST_THREADS or CPU count)")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="qopdist", description=(
        "Bounds and Monte Carlo estimates of the distance between "
        "non-trace-preserving quantum operations."))
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("validate", help="check that an operation is trace-nonincreasing")
    p.add_argument("path")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("bound", help="renormalization upper bound on the distance")
    p.add_argument("path_e")
    p.add_argument("path_f")
    _add_bound_flags(p)
    p.add_argument("--both-orders", action="store_true",
                   help="also bound (F, E) and report the smaller total")
    p.set_defaults(func=cmd_bound)

    p = sub.add_parser("mc", help="Monte Carlo lower bound over Haar-random inputs")
    p.add_argument("path_e")
    p.add_argument("path_f")
    _add_mc_flags(p)
    p.add_argument("--csv", default=None, help="write per-sample distances here")
    p.set_defaults(func=cmd_mc)

    p = sub.add_parser("sweep", help="bound and Monte Carlo across a model parameter")
    msub = p.add_subparsers(dest="model", required=True, parser_class=_Parser)
    bs = msub.add_parser("beamsplitter", help="sweep the loss ratio gamma_r/gamma_t")
    bs.add_argument("--theta", type=float, default=np.pi / 4)
    bs.add_argument("--phi", type=float, default=0.0)
    bs.add_argument("--gamma-min", type=float, default=0.25)
    bs.add_argument("--gamma-max", type=float, default=2.0)
    bs.add_argument("--points", type=int, default=8)
    ns = msub.add_parser("nsgate", help="sweep the dark count rate")
    ns.add_argument("--mu-min", type=float, default=0.0)
    ns.add_argument("--mu-max", type=float, default=0.5)
    ns.add_argument("--points", type=int, default=11)
    for q in (bs, ns):
        _add_bound_flags(q)
        _add_mc_flags(q)
        q.add_argument("--csv", default=None, help="output path (default stdout)")
        q.set_defaults(func=cmd_sweep)

    p = sub.add_parser("domain", help="feasible (r, cos theta) domain of a normalizing operator")
    p.add_argument("--lambdas", required=True, help="comma-separated eigenvalues")
    p.add_argument("--samples", type=int, default=DEFAULT_SAMPLES)
    p.add_argument("--points", type=int, default=200, help="points per boundary segment")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--csv", default=None)
    p.set_defaults(func=cmd_domain)

    p = sub.add_parser("model", help="write the ideal/faulty operation files of a case study")
    msub = p.add_subparsers(dest="model", required=True, parser_class=_Parser)
    bs = msub.add_parser("beamsplitter")
    bs.add_argument("--theta", type=float, default=np.pi / 4)
    bs.add_argument("--phi", type=float, default=0.0)
    bs.add_argument("--gamma-r", type=float, default=1.0)
    bs.add_argument("--gamma-t", type=float, default=1.0)
    ns = msub.add_parser("nsgate")
    ns.add_argument("--mu", type=float, default=0.0)
    for q in (bs, ns):
        q.add_argument("--ideal-out", required=True)
        q.add_argument("--faulty-out", required=True)
        q.set_defaults(func=cmd_model)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except RankDeficiencyError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RANK
    except DegenerateSamplingError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DEGENERATE
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except (InputError, io.OperationFileError, DomainError, ShapeError, SizeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except NumericalFailure as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
