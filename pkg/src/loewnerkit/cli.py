"""Command line entry point: ``loewnerkit <subcommand> ...``."""
from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import analysis, harness, metrics
from . import examples as ex
from .curves import Curve, hausdorff_distance, polyline
from .loewner import RADIAL, DrivingFunction, solve_chordal_trace, solve_radial_trace, unzip_chordal
from .sle import SleConfig, sample_chordal_driving, sample_radial_sle_kr

EXIT_OK, EXIT_ERROR, EXIT_MISMATCH = 0, 1, 2
FAMILIES = ("ladder", "three_segment", "dyadic_loops", "hooks", "figure_eight", "half_strip", "semicircle")


def parse_point(s: str) -> complex:
    """'0.5+0.8i', '0.5+0.8j', '2i' or 'inf'."""
    s = s.strip().replace(" ", "")
    if s.lower() in ("inf", "infinity"):
        return complex(np.inf, 0.0)
    return complex(s.replace("i", "j"))


def _emit(obj, out):
    text = json.dumps(obj, indent=1, default=harness._json_default) + "\n"
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _need_out(args):
    if not args.out:
        raise ValueError("--out is required for this subcommand")
    return args.out


# ------------------------------------------------------------------ subcommands

def cmd_trace(args):
    W = DrivingFunction.from_csv(args.driving)
    solve = solve_radial_trace if W.kind == RADIAL else solve_chordal_trace
    solve(W, args.n).to_csv(_need_out(args))
    return EXIT_OK


def cmd_drive(args):
    c = Curve.from_csv(args.curve)
    if args.x == "terminal":
        W = unzip_chordal(c, allow_touch=args.allow_touch)[0]
    else:
        W = metrics.driving_from(c, parse_point(args.x))
    W.to_csv(_need_out(args))
    return EXIT_OK


def cmd_metric(args):
    a, b = Curve.from_csv(args.a), Curve.from_csv(args.b)
    name = args.name
    comps = []
    if name in ("d_cap_r", "d_cap_l"):
        if args.x is None:
            raise ValueError(f"{name} needs --x")
        if name == "d_cap_l":
            a, b = a.reverse(), b.reverse()
        r = metrics.d_cap_r(a, b, parse_point(args.x))
        value, comps = r.value, list(r.components)
    elif name in ("d_f", "d_b"):
        value = getattr(metrics, name)(a, b)
    elif name == "d_strong":
        value = metrics.d_strong(a, b)
    else:
        value = hausdorff_distance(a, b)
    _emit({"metric": name, "x": args.x, "value": float(value), "components": comps}, args.out)
    return EXIT_OK


def cmd_sle_sample(args):
    out = _need_out(args)
    radial = args.rho is not None
    cfg = SleConfig(kappa=args.kappa, rho=args.rho or 0.0, w0=args.w0, v0=args.v0, T=args.T,
                    dt=args.dt, seed=args.seed)
    if not radial:
        sample_chordal_driving(cfg, args.stream).to_csv(out)
        return EXIT_OK
    W, V = sample_radial_sle_kr(cfg, args.stream)
    W.to_csv(out)
    v = np.unwrap(np.angle(V))
    np.savetxt(out, np.column_stack([W.times, W.values, v]), delimiter=",", header="t,w,v",
               comments="", fmt="%.17g")
    return EXIT_OK


def build_example(family, j, variant=None, depth=None) -> Curve:
    if family == "ladder":
        return ex.gen_ladder(j)
    if family == "three_segment":
        return ex.gen_three_segment(j, variant or "plain")
    if family == "dyadic_loops":
        base = polyline([0, 2j], max_step=0.01)
        return ex.gen_dyadic_loops(depth if depth is not None else j, base)
    if family == "hooks":
        return ex.gen_hooks(j, loop_depth=depth)
    if family == "figure_eight":
        return ex.gen_figure_eight(j, variant or "a")
    if family == "half_strip":
        return ex.gen_half_strip(j)
    if family == "semicircle":
        return ex.gen_perturbed_semicircle(j)
    raise ValueError(f"unknown family {family!r}")


def cmd_example(args):
    build_example(args.family, args.j, args.variant, args.depth).to_csv(_need_out(args))
    return EXIT_OK


def cmd_analyze(args):
    op = args.op
    res = {"op": op}
    if op == "cara":
        W1, W2 = DrivingFunction.from_csv(args.driving), DrivingFunction.from_csv(args.driving2)
        x = parse_point(args.x) if args.x else None
        res["value"] = analysis.caratheodory_sup(W1, W2, x=x, t=args.t, eps=args.eps)
        _emit(res, args.out)
        return EXIT_OK
    c = Curve.from_csv(args.curve)
    if op == "tsep":
        res["value"] = analysis.time_separation_diag(c, args.t, args.eps)
    else:
        if args.x is None:
            raise ValueError(f"--op {op} needs --x")
        xs = [parse_point(s) for s in args.x.split(",")]
        if op == "hit":
            t = np.inf if args.t is None else args.t
            res["value"] = analysis.hitting_prob_conformal(c, xs[0], args.s, t)
        elif op == "alpha":
            z = parse_point(args.z) if args.z else None
            res["left"] = analysis.alpha_left(c, xs[0], z)
            res["right"] = analysis.alpha_right(c, xs[0], z)
        elif op == "sparam":
            w = 1.0 / len(xs)
            res["value"] = analysis.harmonic_param_s(c, [(x, w) for x in xs], args.t)
    _emit(res, args.out)
    return EXIT_OK


def cmd_converge(args):
    if args.config:
        cfg = harness.ExperimentConfig.from_json(args.config)
    else:
        cfg = harness.ExperimentConfig(family=args.family or "semicircle")
    cfg.seed = args.seed if args.seed is not None else cfg.seed
    out = args.out or cfg.out
    if args.suite == "roundtrip":
        rep, ok = harness.run_roundtrip_suite(cfg), True
    elif args.suite == "law":
        rep = harness.run_law_convergence(cfg)
        ok = all(v == "PASS" for v in rep.verdicts.values())
    else:
        rep = harness.run_convergence_suite(cfg)
        ok = harness.verdicts_as_expected(rep)
    if out:
        harness.emit_report(rep, args.format, out)
    else:
        sys.stdout.write(json.dumps(rep.to_dict(), default=harness._json_default) + "\n")
    for key, v in sorted(rep.verdicts.items()):
        print(f"{key}: {v}", file=sys.stderr)
    return EXIT_OK if ok else EXIT_MISMATCH


def cmd_report(args):
    rep = harness.load_report(args.input)
    harness.emit_report(rep, args.format, _need_out(args))
    if "expected" in rep.meta and not harness.verdicts_as_expected(rep):
        return EXIT_MISMATCH
    return EXIT_OK


# ------------------------------------------------------------------ parser

class _Parser(argparse.ArgumentParser):
    """Usage errors exit with 1; exit code 2 is reserved for verdict mismatches."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_ERROR, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--seed", type=int, default=None)
    common.add_argument("--out", default=None, help="output file")
    common.add_argument("--threads", type=int, default=None, help="numba worker threads")

    p = _Parser(prog="loewnerkit", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("trace", parents=[common], help="driving CSV -> trace CSV")
    s.add_argument("--driving", required=True)
    s.add_argument("--n", type=int, default=None, help="number of steps")
    s.set_defaults(func=cmd_trace)

    s = sub.add_parser("drive", parents=[common], help="curve CSV -> driving CSV")
    s.add_argument("--curve", required=True)
    s.add_argument("--x", default="terminal", help="interior viewpoint, or 'terminal' for chordal")
    s.add_argument("--allow-touch", action="store_true")
    s.set_defaults(func=cmd_drive)

    s = sub.add_parser("metric", parents=[common], help="distance between two curve CSVs")
    s.add_argument("--name", required=True, choices=["d_cap_r", "d_cap_l", "d_f", "d_b", "d_strong", "hausdorff"])
    s.add_argument("--a", required=True)
    s.add_argument("--b", required=True)
    s.add_argument("--x", default=None)
    s.set_defaults(func=cmd_metric)

    s = sub.add_parser("sle-sample", parents=[common], help="sample an SLE driving function")
    s.add_argument("--kappa", type=float, required=True)
    s.add_argument("--rho", type=float, default=None, help="radial SLE(kappa; rho) when given")
    s.add_argument("--T", type=float, default=1.0)
    s.add_argument("--dt", type=float, default=None)
    s.add_argument("--w0", type=float, default=0.0)
    s.add_argument("--v0", type=float, default=float(np.pi))
    s.add_argument("--stream", type=int, default=0)
    s.set_defaults(func=cmd_sle_sample)

    s = sub.add_parser("example", parents=[common], help="generate a family member")
    s.add_argument("--family", required=True, choices=FAMILIES)
    s.add_argument("--j", type=int, required=True)
    s.add_argument("--variant", default=None)
    s.add_argument("--depth", type=int, default=None)
    s.set_defaults(func=cmd_example)

    s = sub.add_parser("analyze", parents=[common], help="hitting probabilities and diagnostics (JSON)")
    s.add_argument("--op", required=True, choices=["hit", "alpha", "cara", "tsep", "sparam"])
    s.add_argument("--curve")
    s.add_argument("--driving")
    s.add_argument("--driving2")
    s.add_argument("--x", help="viewpoint; comma separated list for sparam")
    s.add_argument("--z")
    s.add_argument("--s", type=float, default=0.0)
    s.add_argument("--t", type=float, default=None, help="end time (default: whole curve)")
    s.add_argument("--eps", type=float, default=0.05)
    s.set_defaults(func=cmd_analyze)

    s = sub.add_parser("converge", parents=[common], help="run a convergence, round-trip or law suite")
    s.add_argument("--config", help="ExperimentConfig JSON")
    s.add_argument("--family", choices=sorted(harness.FAMILIES))
    s.add_argument("--suite", default="convergence", choices=["convergence", "roundtrip", "law"])
    s.add_argument("--format", default="json", choices=["json", "csv", "svg"])
    s.set_defaults(func=cmd_converge)

    s = sub.add_parser("report", parents=[common], help="re-emit a JSON report as csv/json/svg")
    s.add_argument("--in", dest="input", required=True)
    s.add_argument("--format", default="csv", choices=["json", "csv", "svg"])
    s.set_defaults(func=cmd_report)
    return p


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as e:  # --help exits 0, usage errors exit 1
        return int(e.code or 0)
    if args.threads:
        import numba

        numba.set_num_threads(min(args.threads, numba.config.NUMBA_NUM_THREADS))
    if getattr(args, "seed", None) is None and args.command == "sle-sample":
        args.seed = 0
    try:
        return args.func(args)
    except Exception as e:  # noqa: BLE001 - any failure maps to exit code 1
        print(f"error: {e}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
