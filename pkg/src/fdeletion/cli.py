"""Command-line entry point: ``fdeletion <subcommand> [options]``.

Machine-readable results go to stdout (or ``--json-out``) as JSON with sorted
keys; progress and generated seeds go to stderr. Exit status is 0 on success,
2 when a solver finds no solution or a verification check fails, and 1 on
usage or runtime errors.
"""

from __future__ import annotations

import argparse
import json
import os
import secrets
import sys

from . import exact, treewidth
from .exhaustive import exhaustive_family, exhaustive_family_sized
from .graph import GraphError, dump_graph, read_graph
from .harness.corpus import GENERATORS, ConfigError, CorpusSpec, generate_one
from .harness.experiments import KNOWN_CHECKS, ExperimentConfig, run_experiments
from .minors import FamilyError, MinorFamilySpec, load_family, preset
from .separations import PreconditionError, build_hitting_family
from .solvers import EmptyCandidateError, approx_deletion, approx_modulator, fpt_k_optimal
from .treewidth import CapExceeded

EXIT_OK, EXIT_ERROR, EXIT_FAILED = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _family(args) -> MinorFamilySpec:
    name = args.family
    if os.path.exists(name):
        with open(name, encoding="utf-8") as fh:
            fam = load_family(fh.read())
    else:
        fam = preset(name)
    if getattr(args, "eta", None) is not None and args.eta != fam.eta:
        raise ConfigError(f"family {name!r} is configured for eta={fam.eta}, but --eta {args.eta} was given")
    return fam


def _graph(args):
    if not args.graph:
        raise UsageError("--graph is required")
    return read_graph(args.graph, args.format)


def _seed(args) -> int:
    if args.seed is None:
        args.seed = secrets.randbits(32)
        print(f"seed: {args.seed}", file=sys.stderr)
    return args.seed


def _vertices(g, text: str) -> list:
    by_name = {str(v): v for v in g.vertices}
    out = []
    for tok in text.split(","):
        tok = tok.strip()
        if not tok:
            continue
        if tok not in by_name:
            raise GraphError(f"--protrusion names unknown vertex {tok!r}")
        out.append(by_name[tok])
    return out


def _emit(args, obj) -> None:
    text = json.dumps(obj, indent=2, sort_keys=True) + "\n"
    if args.json_out:
        with open(args.json_out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


# -- subcommands ----------------------------------------------------------------


def cmd_family(args) -> int:
    g = _graph(args)
    eta = args.eta if args.eta is not None else _family(args).eta
    fam = build_hitting_family(g, eta)
    _emit(args, fam.to_json_obj(g))
    return EXIT_OK


def cmd_exhaust(args) -> int:
    g = _graph(args)
    fam = _family(args)
    if args.protrusion is None:
        raise UsageError("--protrusion is required")
    a = _vertices(g, args.protrusion)
    if args.ell is None:
        ex = exhaustive_family(g, a, fam)
    else:
        ex = exhaustive_family_sized(g, a, fam, args.ell)
    _emit(args, ex.to_json_obj(g))
    return EXIT_OK


def cmd_approx(args) -> int:
    g = _graph(args)
    fam = _family(args)
    seed = _seed(args)
    if args.modulator_only:
        rep = approx_modulator(g, fam.eta, fam, seed)
    else:
        rep = approx_deletion(g, fam, seed)
    _emit(args, rep.to_json_obj(g))
    return EXIT_OK


def cmd_fpt(args) -> int:
    g = _graph(args)
    fam = _family(args)
    if args.k is None:
        raise UsageError("--k is required")
    seed = _seed(args)
    rep = fpt_k_optimal(g, fam, args.k, seed, args.reps)
    _emit(args, rep.to_json_obj(g))
    if rep.status != "ok":
        print(f"no solution with at most {args.k} vertices found", file=sys.stderr)
        return EXIT_FAILED
    return EXIT_OK


def cmd_exact(args) -> int:
    g = _graph(args)
    fam = _family(args)
    if args.k is None:
        xs, w = exact.solve_exact(g, fam)
    else:
        xs, w = exact.solve_exact_k(g, fam, args.k)
    if xs is None:
        _emit(args, {"solution": None, "weight": None, "status": "infeasible"})
        print(f"no hitting set with at most {args.k} vertices", file=sys.stderr)
        return EXIT_FAILED
    _emit(args, {"solution": list(g.sort(xs)), "weight": w, "status": "ok"})
    return EXIT_OK


def _corpus(args) -> CorpusSpec:
    params = json.loads(args.params) if args.params else {}
    return CorpusSpec(
        args.generator, (args.n_min, args.n_max), params, (args.w_min, args.w_max), args.seed or 0, args.count
    )


def cmd_verify(args) -> int:
    spec = _corpus(args)
    checks = tuple(c for c in args.checks.split(",") if c) if args.checks else ExperimentConfig.checks
    cfg = ExperimentConfig(
        family=args.family, checks=checks, mc_runs=args.mc_runs, fpt_k=args.k or 2, seed=args.seed or 0
    )
    _family(args)
    report = run_experiments(spec, cfg)
    for c in report.checks:
        print(c.line(), file=sys.stderr)
    _emit(args, report.to_json_obj())
    if args.csv_out:
        with open(args.csv_out, "w", encoding="utf-8") as fh:
            fh.write(report.to_csv())
    return EXIT_OK if report.passed else EXIT_FAILED


def cmd_gen(args) -> int:
    spec = _corpus(args)
    g = generate_one(spec, args.index)
    fmt = args.format or "edgelist"
    text = dump_graph(g, fmt)
    if args.json_out:
        with open(args.json_out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


# -- parser -----------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="fdeletion", description="Weighted planar minor deletion toolkit.")
    sub = p.add_subparsers(dest="command", parser_class=_Parser)

    def common(sp, graph=True):
        if graph:
            sp.add_argument("--graph", help="graph file (edgelist or JSON)")
            sp.add_argument("--format", choices=["edgelist", "json"], help="graph format (default: from extension)")
        sp.add_argument("--family", default="k3", help="preset (k3, k4, outerplanar) or family JSON file")
        sp.add_argument("--eta", type=int, help="treewidth bound; must match the family")
        sp.add_argument("--seed", type=int, help="random seed (generated and printed if absent)")
        sp.add_argument("--json-out", help="write JSON here instead of stdout")
        sp.add_argument("--threads", type=int, default=1, help="worker bound (work runs sequentially)")
        sp.add_argument("--tw-cap", type=int, help="vertex cap of the exact treewidth routine")
        sp.add_argument("--exact-cap", type=int, help="vertex cap of the exact solvers")
        sp.add_argument("-v", "--verbose", action="store_true")

    def corpus(sp):
        sp.add_argument("--generator", choices=GENERATORS, default="gnp")
        sp.add_argument("--count", type=int, default=10)
        sp.add_argument("--n-min", type=int, default=6)
        sp.add_argument("--n-max", type=int, default=10)
        sp.add_argument("--w-min", type=int, default=1)
        sp.add_argument("--w-max", type=int, default=1)
        sp.add_argument("--params", help="generator parameters as JSON, e.g. '{\"p\": 0.4}'")

    sp = sub.add_parser("family", help="modulator hitting family as JSON")
    common(sp)
    sp.set_defaults(func=cmd_family)

    sp = sub.add_parser("exhaust", help="exhaustive family of a protrusion")
    common(sp)
    sp.add_argument("--protrusion", help="comma-separated vertex ids")
    sp.add_argument("--ell", type=int, help="size bound for the sized variant")
    sp.set_defaults(func=cmd_exhaust)

    sp = sub.add_parser("approx", help="randomized approximation")
    common(sp)
    sp.add_argument("--modulator-only", action="store_true", help="stop after the treewidth modulator")
    sp.set_defaults(func=cmd_approx)

    sp = sub.add_parser("fpt", help="randomized FPT algorithm for k-optimal solutions")
    common(sp)
    sp.add_argument("--k", type=int, help="solution size bound")
    sp.add_argument("--reps", type=int, help="repetitions (default 4^k, capped at 2^20)")
    sp.set_defaults(func=cmd_fpt)

    sp = sub.add_parser("exact", help="exact minimum-weight hitting set")
    common(sp)
    sp.add_argument("--k", type=int, help="optional solution size bound")
    sp.set_defaults(func=cmd_exact)

    sp = sub.add_parser("verify", help="run verification checks on a generated corpus")
    common(sp, graph=False)
    corpus(sp)
    sp.add_argument("--checks", help=f"comma-separated subset of {','.join(KNOWN_CHECKS)}")
    sp.add_argument("--mc-runs", type=int, default=100)
    sp.add_argument("--k", type=int, help="k for the fpt check")
    sp.add_argument("--csv-out", help="also write a CSV summary here")
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("gen", help="generate one corpus instance")
    common(sp, graph=False)
    corpus(sp)
    sp.add_argument("--format", choices=["edgelist", "json"], help="output format (default edgelist)")
    sp.add_argument("--index", type=int, default=0, help="instance index within the corpus")
    sp.set_defaults(func=cmd_gen)
    return p


def main(argv=None) -> int:
    saved = treewidth.TW_CAP, exact.EXACT_CAP
    try:
        return _main(argv)
    finally:
        treewidth.TW_CAP, exact.EXACT_CAP = saved


def _main(argv) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if not args.command:
            raise UsageError(parser.format_usage().strip())
        for flag in ("tw_cap", "exact_cap", "threads"):
            val = getattr(args, flag, None)
            if val is not None and val < 1:
                raise ConfigError(f"--{flag.replace('_', '-')} must be positive")
        if args.tw_cap:
            treewidth.TW_CAP = args.tw_cap
        if args.exact_cap:
            exact.EXACT_CAP = args.exact_cap
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    except (GraphError, FamilyError, PreconditionError, ConfigError, CapExceeded, EmptyCandidateError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    except OSError as exc:
        print(f"error: {exc.filename or ''}: {exc.strerror}", file=sys.stderr)
        return EXIT_ERROR
    except json.JSONDecodeError as exc:
        print(f"error: invalid JSON: {exc.msg}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
