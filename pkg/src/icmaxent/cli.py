"""Command-line front end.

Subcommands:

* ``gen``       sample one synthetic model and write its graph, datasets,
                constraint files, and exact joint/marginals
* ``fit``       fit multipliers from constraint + joint/marginals + graph
                files, writing the model and a fit report
* ``setting1``  feature-selection benchmark, interventional vs conditional
* ``setting2``  feature-selection benchmark over the interventional share
* ``joint``     two-variable interventional estimation benchmark

Exit codes: 0 on success, 1 on any input or schema error, 2 when ``fit``
ends without reaching the residual tolerance.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

from . import fileio
from .core import Config
from .errors import IcmaxentError
from .experiments import (
    ExperimentConfig,
    JOINT_HEADER,
    SETTING1_HEADER,
    SETTING2_HEADER,
    joint_rows,
    setting1_rows,
    setting2_rows,
)
from .solver import SolverOptions, fit, merge_marginals_maxent, smooth_joint
from .synth import (
    ConstraintTemplate,
    STRUCTURES,
    ancestral_sample,
    empirical_averages,
    exact_joint_X,
    exact_marginals,
    sample_scm,
)
from .core import ConstraintKind


class _Parser(argparse.ArgumentParser):
    """Argument errors are input errors: exit 1, not argparse's default 2."""

    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"error: {message}", file=sys.stderr)
        raise SystemExit(1)


def _resolve_structure(spec: str):
    if spec in STRUCTURES:
        return STRUCTURES[spec]()
    return fileio.load_structure(spec)


def _add_common(sub, n_samples_default):
    sub.add_argument("--structure", default="a", help="a|b|c or a structure file path")
    sub.add_argument("--n-graphs", type=int, default=200)
    sub.add_argument("--n-samples", type=int, default=n_samples_default)
    sub.add_argument("--seed", type=int, default=0)
    sub.add_argument("--tolerance", type=float, default=0.01)
    sub.add_argument("--max-restarts", type=int, default=10)
    sub.add_argument("--out", required=True, help="output directory")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="icmaxent", description=__doc__.splitlines()[0])
    commands = parser.add_subparsers(dest="command", required=True)

    gen = commands.add_parser("gen", help="generate graph, dataset, and constraint files")
    gen.add_argument("--structure", default="a")
    gen.add_argument("--n-samples", type=int, default=100)
    gen.add_argument("--seed", type=int, default=0)
    gen.add_argument("--out", required=True)

    fit_cmd = commands.add_parser("fit", help="fit a model from files")
    fit_cmd.add_argument("--constraints", required=True)
    fit_cmd.add_argument("--graph", required=True)
    px = fit_cmd.add_mutually_exclusive_group(required=True)
    px.add_argument("--joint", help="dense joint table file")
    px.add_argument("--marginals", help="per-variable marginals file (merged as a product)")
    fit_cmd.add_argument("--tolerance", type=float, default=0.01)
    fit_cmd.add_argument("--max-restarts", type=int, default=10)
    fit_cmd.add_argument("--allow-unidentifiable", action="store_true")
    fit_cmd.add_argument("--out", required=True)

    s1 = commands.add_parser("setting1", help="interventional vs conditional benchmark")
    _add_common(s1, n_samples_default=100)
    s1.add_argument(
        "--px",
        choices=["exact", "marginals", "both"],
        default="both",
        help="which cause-joint inputs to run (default: both)",
    )

    s2 = commands.add_parser("setting2", help="interventional-share sweep benchmark")
    _add_common(s2, n_samples_default=100)

    joint = commands.add_parser("joint", help="joint interventional estimation benchmark")
    _add_common(joint, n_samples_default=1000)
    return parser


def _cmd_gen(args) -> int:
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    template = _resolve_structure(args.structure)
    rng = np.random.default_rng([args.seed, 0])
    scm = sample_scm(template, rng)
    d = template.n_causes
    causes = [f"X{i + 1}" for i in range(d)]

    fileio.save_structure(out / "structure.json", template)
    fileio.save_graph(out / "graph.json", scm.graph, causes)
    fileio.save_joint(out / "joint.json", exact_joint_X(scm), causes)
    fileio.save_marginals(out / "marginals.json", exact_marginals(scm), causes)

    obs = ancestral_sample(scm, args.n_samples, rng=rng)
    fileio.save_dataset(out / "observational.json", obs)
    clamped = {}
    for i in range(d):
        clamped[i] = []
        for v in (0, 1):
            ds = ancestral_sample(scm, args.n_samples, Config((i,), (v,)), rng=rng)
            fileio.save_dataset(out / f"interventional_{causes[i]}_{v}.json", ds)
            clamped[i].append(ds)

    conditional = [
        empirical_averages(obs, ConstraintTemplate(ConstraintKind.CONDITIONAL, cond_set=(i,)))
        for i in range(d)
    ]
    interventional = [
        empirical_averages(
            clamped[i], ConstraintTemplate(ConstraintKind.INTERVENTIONAL, int_set=(i,))
        )
        for i in range(d)
    ]
    fileio.save_constraints(out / "constraints_conditional.json", conditional, causes)
    fileio.save_constraints(out / "constraints_interventional.json", interventional, causes)
    print(f"wrote synthetic bundle to {out}")
    return 0


def _cmd_fit(args) -> int:
    constraints, causes = fileio.load_constraints(args.constraints)
    graph, graph_causes = fileio.load_graph(args.graph)
    if graph_causes != causes:
        raise IcmaxentError(
            f"cause lists differ between {args.constraints} and {args.graph}"
        )
    opts = SolverOptions(tolerance=args.tolerance, max_restarts=args.max_restarts)
    if args.joint:
        p, joint_causes = fileio.load_joint(args.joint)
    else:
        marginals, joint_causes = fileio.load_marginals(args.marginals)
        p = merge_marginals_maxent(marginals)
    if joint_causes != causes:
        raise IcmaxentError("cause lists differ between constraint and joint inputs")
    p = smooth_joint(p, opts.epsilon_smoothing)

    _, model, report = fit(
        constraints,
        p,
        graph.without_y_parents(),
        opts,
        allow_unidentifiable=args.allow_unidentifiable,
    )
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    fileio.save_model(out / "model.json", model, causes)
    fileio.save_report(out / "report.json", report)
    print(
        f"residual norm {report.residual_norm:.6g} after {report.restarts} restarts; "
        f"converged={report.converged}"
    )
    return 0 if report.converged else 2


def _experiment_config(args) -> ExperimentConfig:
    return ExperimentConfig(
        structure=_resolve_structure(args.structure)
        if args.structure not in STRUCTURES
        else args.structure,
        n_graphs=args.n_graphs,
        n_samples=args.n_samples,
        seed=args.seed,
        tolerance=args.tolerance,
        max_restarts=args.max_restarts,
    )


def _write_rows(args, name, header, rows) -> int:
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    path = out / f"{name}.csv"
    fileio.write_csv(path, header, rows)
    print(f"wrote {len(rows)} rows to {path}")
    return 0


def _cmd_setting1(args) -> int:
    rows = setting1_rows(_experiment_config(args))
    if args.px != "both":
        rows = [r for r in rows if r["px_mode"] == args.px]
    return _write_rows(args, "setting1", SETTING1_HEADER, rows)


def _cmd_setting2(args) -> int:
    return _write_rows(args, "setting2", SETTING2_HEADER, setting2_rows(_experiment_config(args)))


def _cmd_joint(args) -> int:
    return _write_rows(args, "joint", JOINT_HEADER, joint_rows(_experiment_config(args)))


_COMMANDS = {
    "gen": _cmd_gen,
    "fit": _cmd_fit,
    "setting1": _cmd_setting1,
    "setting2": _cmd_setting2,
    "joint": _cmd_joint,
}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return _COMMANDS[args.command](args)
    except SystemExit as exc:
        return int(exc.code or 0)
    except (IcmaxentError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
