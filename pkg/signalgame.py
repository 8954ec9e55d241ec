#!/usr/bin/env python3

"""
This is the entry point for signalgame, responsible for parsing command line arguments and
invoking the appropriate commands.
"""

import csv
import json
import os
import sys
import time

import numpy as np

import deps
import libsg as lib
import state
from argparsing import Argparser
from config import PRESETS, ExperimentConfig
from equilibrium import SecurityGame, solve_matrix_game, solve_security_exact_small, \
    solve_security_subgame
from experiment import run_experiment
from game import (BayesianZeroSumGame, ConvexDecomposition, SignalingScheme, expected_matrix,
                  full_revelation_scheme, opaque_scheme, scheme_to_decomposition)
from graph_io import load_instance, read_graph, read_truth_file, truth_path_for, write_graph, \
    write_truth
from graphs import amplify_instance, gen_planted_cover
from recovery import background_overlap, recover_pipeline
from signaling import (build_clique_partition_scheme, evaluate_scheme_explicit,
                       evaluate_scheme_security, grid_envelope_oracle, scheme_utility_lower_bound)
from validators import (amplification_validator, bidensity_validator, coverage_validator,
                        distinguisher_validator)

EXIT_PASS = 0
EXIT_ERROR = 1
EXIT_ACCEPTANCE_FAILURE = 2

####################################################################################################

p = Argparser(
    program_name="signalgame",
    description="R|Signaling in Bayesian zero-sum games: security games on planted clique "
                "graphs.\n"
                "Use `signalgame <command> --help` to get more detailed help for a command.",
)

# --------------------------------------------------------------------------------------------------
# Global Options

p.arg(
    "--seed",
    help="seed of the run (replaces the configured seed list)",
    type=int,
    default=None,
    dest="seed")

p.arg(
    "--out",
    help="output directory (./results by default)",
    default=None,
    dest="out")

p.arg(
    "--format",
    help="format of the result printed to stdout",
    choices=["json", "csv"],
    default="json",
    dest="format")

p.arg(
    "--config",
    help="path to a config file (.toml or .json)",
    default=None,
    dest="config_path")

p.arg(
    "--preset",
    help="start from a preset configuration",
    choices=sorted(PRESETS),
    default=None,
    dest="preset")

p.arg(
    "--jobs",
    help="number of worker threads",
    type=int,
    default=None,
    dest="jobs")

for name, kind, descr in [
        ("n", int, "number of vertices"),
        ("p", float, "edge probability"),
        ("k", int, "planted clique size"),
        ("r", int, "number of planted cliques"),
        ("d", int, "defense budget"),
        ("rho", float, "protection reward")]:
    p.arg(f"--{name}", help=descr, type=kind, default=None, dest=name)

# --------------------------------------------------------------------------------------------------
p.delimiter("INSTANCES & GAMES")

cmd_gen = p.command(
    "gen",
    help="generates a planted clique cover instance",
    description="Generates G(n, p, k, r) and writes the public graph and its truth file under "
                "<out>/graphs. With --amplify, plants more cliques into an existing graph.")

cmd_solve = p.command(
    "solve",
    help="solves the game at one posterior",
    description="Solves the security subgame of --graph (or the explicit game of --game) at the "
                "given posterior, uniform by default.")

cmd_scheme = p.command(
    "scheme",
    help="builds a signaling scheme")

cmd_eval = p.command(
    "eval",
    help="evaluates a signaling scheme",
    description="Computes the attacker's (row player's) utility under a scheme, one LP per "
                "signal. With --truth, also prints the clique-partition lower bound.")

cmd_recover = p.command(
    "recover",
    help="recovers planted cliques from a signaling scheme",
    description="Extracts clusters from the scheme and grows them into cliques. The truth file "
                "is only read if given with --truth, to score the candidates.")

# --------------------------------------------------------------------------------------------------
p.delimiter("EXPERIMENTS")

cmd_experiment = p.command(
    "experiment",
    help="runs the full pipeline over the configured seeds")

cmd_validate = p.command(
    "validate",
    help="runs the statistical validators")

# --------------------------------------------------------------------------------------------------
# Command-Specific Options

cmd_gen.arg("--name", help="base name of the output files", default=None, dest="name")
cmd_gen.arg("--binary", help="write the graph in the binary format", default=False,
            dest="binary", action="store_true")
cmd_gen.arg("--amplify", help="graph file to plant more cliques into", default=None,
            dest="amplify")

for cmd in [cmd_solve, cmd_scheme, cmd_eval, cmd_recover]:
    cmd.arg("--graph", help="graph file", default=None, dest="graph")
    cmd.arg("--game", help="explicit game file (JSON)", default=None, dest="game")

for cmd in [cmd_scheme, cmd_eval, cmd_recover]:
    cmd.arg("--truth", help="truth file of the graph", default=None, dest="truth")

cmd_solve.arg("--posterior", help="JSON file holding the posterior (uniform if omitted)",
              default=None, dest="posterior")
cmd_solve.arg("--exact", help="enumerate defender strategies (small graphs only)",
              default=False, dest="exact", action="store_true")

cmd_scheme.arg("--kind", help="which scheme to build",
               choices=["clique-partition", "opaque", "full-revelation", "envelope"],
               default="clique-partition", dest="kind")
cmd_scheme.arg("--resolution", help="grid spacing of the envelope oracle", type=float,
               default=0.01, dest="resolution")

for cmd in [cmd_eval, cmd_recover]:
    cmd.arg("--scheme", help="scheme file", default=None, dest="scheme", required=True)

for cmd in [cmd_recover, cmd_experiment]:
    cmd.arg("--sample-factor", help="c_R in the sample size c_R log2 n", type=float,
            default=None, dest="sample_factor")
    cmd.arg("--trial-budget", help="samples drawn per cluster", type=int, default=None,
            dest="trial_budget")
    cmd.arg("--filter1-fraction", help="fraction of the sample a survivor must be adjacent to",
            type=float, default=None, dest="filter1_fraction")
    cmd.arg("--generic-lp", help="extract clusters with a generic LP solver", default=False,
            dest="generic_lp", action="store_true")

cmd_validate.arg("--check", help="which validator to run",
                 choices=["bidensity", "coverage", "distinguisher", "amplification", "all"],
                 default="all", dest="check")


####################################################################################################

def load_config() -> ExperimentConfig:
    """
    Uses the program arguments (found at `state.args`) to create and populate an
    :py:class:`ExperimentConfig`: preset first, then the config file, then command line flags.
    """
    args = state.args
    config = ExperimentConfig(args.preset)
    if args.preset is not None:
        PRESETS[args.preset](config)

    if args.config_path:
        if args.config_path.endswith(".toml") and not deps.has_tomli():
            raise lib.SignalGameError(
                "Reading TOML config files requires tomli: `pip install -r requirements.txt`.")
        try:
            values = lib.read_config_file(args.config_path)
        except Exception as e:
            raise lib.extend_exception(
                e, prefix=f"Failed to read config file {args.config_path}: ") from None
        config.apply(values, source=args.config_path)

    for name in ["n", "p", "k", "r", "d", "rho", "jobs"]:
        if getattr(args, name, None) is not None:
            setattr(config, name, getattr(args, name))
    for name in ["sample_factor", "trial_budget", "filter1_fraction"]:
        if getattr(args, name, None) is not None:
            setattr(config, name, getattr(args, name))
    if getattr(args, "generic_lp", False):
        config.generic_lp = True
    if args.seed is not None:
        config.seeds = [args.seed]
    if args.out is not None:
        config.out_dir = os.path.abspath(args.out)

    config.validate()
    return config


####################################################################################################

def emit(config: ExperimentConfig, name: str, result: dict, rows: list[dict] | None = None,
         columns: list[str] | None = None):
    """
    Writes `result` to `<out>/<name>.json` and prints it to stdout: as JSON, or as CSV (`rows`
    under the header `columns` if given, `key,value` lines of the scalar entries otherwise).
    """
    path = os.path.join(config.out_dir, f"{name}.json")
    lib.write_json_file(path, result)
    if state.args.format == "json":
        print(json.dumps(result, indent=2))
        return
    if rows is not None:
        columns = columns or list(dict.fromkeys(key for row in rows for key in row))
        writer = csv.DictWriter(sys.stdout, fieldnames=columns, restval="", lineterminator="\n")
        writer.writeheader()
        writer.writerows(rows)
        return
    writer = csv.writer(sys.stdout, lineterminator="\n")
    writer.writerow(["key", "value"])
    for key, value in result.items():
        if not isinstance(value, (list, dict)):
            writer.writerow([key, value])


def _require(value, flag: str):
    if value is None:
        raise lib.InvalidInputError(f"this command requires {flag}")
    return value


def _read_game(path: str) -> BayesianZeroSumGame:
    try:
        return BayesianZeroSumGame.from_json(lib.read_json_file(path))
    except (OSError, ValueError, KeyError) as e:
        raise lib.extend_exception(e, prefix=f"Failed to read game file {path}: ") from None


def _read_scheme(path: str, prior: np.ndarray) -> ConvexDecomposition:
    """
    Reads a scheme file: a decomposition (`alpha`, `posteriors`) or a state-to-signal matrix
    (`M`, `signals`, `phi`), which is turned into the decomposition it induces on `prior`.
    """
    try:
        data = lib.read_json_file(path)
        if "phi" in data and "posteriors" not in data:
            return scheme_to_decomposition(prior, SignalingScheme.from_json(data))
        return ConvexDecomposition.from_json(data, prior=data.get("prior"))
    except (OSError, ValueError, KeyError) as e:
        raise lib.extend_exception(e, prefix=f"Failed to read scheme file {path}: ") from None


def _read_posterior(path: str | None, size: int) -> np.ndarray:
    if path is None:
        return np.full(size, 1.0 / size)
    data = lib.read_json_file(path)
    posterior = data["posterior"] if isinstance(data, dict) else data
    return lib.check_probability_vector(posterior, "posterior", 1e-9)


####################################################################################################

def cmd_gen_run(config: ExperimentConfig) -> int:
    args = state.args
    seed = config.seeds[0]
    if args.amplify:
        base = read_graph(args.amplify)
        instance = amplify_instance(base, config.p, config.k, config.num_cliques, seed)
    else:
        instance = gen_planted_cover(config.n, config.p, config.k, config.num_cliques, seed)

    name = args.name or f"{instance.generator}-n{instance.n}-seed{seed}"
    graph_path = os.path.join(config.graphs_dir, name + (".sgrb" if args.binary else ".txt"))
    write_graph(graph_path, instance.graph)
    write_truth(truth_path_for(graph_path), instance)
    lib.info(f"Wrote {graph_path}")

    emit(config, "gen", {
        "graph": graph_path,
        "truth": truth_path_for(graph_path),
        "n": instance.n,
        "m": instance.graph.m,
        "cliques": len(instance.planted_cliques),
        "coverage": coverage_validator(instance).observed,
    })
    return EXIT_PASS


def cmd_solve_run(config: ExperimentConfig) -> int:
    args = state.args
    if args.game:
        game = _read_game(args.game)
        x = _read_posterior(args.posterior, game.num_states)
        solution = solve_matrix_game(expected_matrix(game, x))
        emit(config, "solve", {
            "value": solution.value,
            "row_strategy": solution.row_strategy.tolist(),
            "col_strategy": solution.col_strategy.tolist(),
        })
        return EXIT_PASS

    g = read_graph(_require(args.graph, "--graph or --game"))
    game = SecurityGame(g, config.d, config.rho)
    x = _read_posterior(args.posterior, g.n)
    if args.exact:
        exact = solve_security_exact_small(game, x)
        emit(config, "solve", {
            "value": exact.value,
            "y": exact.attacker_strategy.tolist(),
            "decomposition": [[w, sorted(s)] for w, s in exact.defender_mix],
        })
    else:
        emit(config, "solve", solve_security_subgame(game, x).to_json())
    return EXIT_PASS


def cmd_scheme_run(config: ExperimentConfig) -> int:
    args = state.args
    if args.kind == "clique-partition":
        instance = load_instance(_require(args.graph, "--graph"), _require(args.truth, "--truth"))
        dec = build_clique_partition_scheme(instance)
    elif args.kind == "envelope":
        game = _read_game(_require(args.game, "--game"))
        envelope = grid_envelope_oracle(game, args.resolution)
        lib.info(f"Envelope value {envelope.value:.6f} (error <= {envelope.error_bound:.4g}, "
                 f"no signaling: {envelope.opaque_value:.6f})")
        dec = envelope.decomposition
    else:
        if args.game:
            prior = _read_game(args.game).prior
        else:
            n = read_graph(_require(args.graph, "--graph or --game")).n
            prior = np.full(n, 1.0 / n)
        make = opaque_scheme if args.kind == "opaque" else full_revelation_scheme
        dec = scheme_to_decomposition(prior, make(prior.size))

    emit(config, "scheme", {**dec.to_json(), "prior": dec.prior.tolist()},
         rows=[{"signal": i, "alpha": float(a), "support": int(np.count_nonzero(x))}
               for i, (a, x) in enumerate(zip(dec.alpha, dec.posteriors))])
    return EXIT_PASS


EVAL_COLUMNS = ["seed", "n", "p", "k", "r", "d", "rho", "bound", "total", "runtime_ms"]
"""Columns of the `eval` CSV row; entries that don't apply (e.g. `p` without --truth) are blank."""

RECOVER_COLUMNS = ["candidate", "size", "verified", "vertices"]


def cmd_eval_run(config: ExperimentConfig) -> int:
    args = state.args
    row = dict.fromkeys(EVAL_COLUMNS)
    row["seed"] = args.seed
    started = time.perf_counter()
    if args.game:
        game = _read_game(args.game)
        evaluation = evaluate_scheme_explicit(game, _read_scheme(args.scheme, game.prior))
        result = evaluation.to_json()
        row["n"] = game.num_states
    else:
        g = read_graph(_require(args.graph, "--graph or --game"))
        dec = _read_scheme(args.scheme, np.full(g.n, 1.0 / g.n))
        game = SecurityGame(g, config.d, config.rho, prior=dec.prior)
        evaluation = evaluate_scheme_security(game, dec, jobs=config.jobs)
        result = evaluation.to_json()
        row.update(n=g.n, d=config.d, rho=config.rho)
        if args.truth:
            instance = load_instance(args.graph, args.truth)
            result["lower_bound"] = scheme_utility_lower_bound(instance, dec, config.d, config.rho)
            params = instance.params
            row.update(seed=instance.seed, p=params.p, k=params.k, r=params.r,
                       bound=result["lower_bound"])
    row["total"] = evaluation.total
    row["runtime_ms"] = round(1000 * (time.perf_counter() - started), 3)
    emit(config, "eval", result, rows=[row], columns=EVAL_COLUMNS)
    return EXIT_PASS


def cmd_recover_run(config: ExperimentConfig) -> int:
    args = state.args
    graph_path = _require(args.graph, "--graph")
    g = read_graph(graph_path)
    dec = _read_scheme(args.scheme, np.full(g.n, 1.0 / g.n))
    truth = None
    if args.truth:
        truth = [frozenset(c) for c in read_truth_file(args.truth)["cliques"]]

    report = recover_pipeline(g, dec, config.k, config.recovery_params(), config.seeds[0],
                              truth=truth)
    result = report.to_json()
    if args.truth:
        instance = load_instance(graph_path, args.truth)
        if instance.background is not None:
            result["background_overlap"] = background_overlap(report.steps, instance)
    rows = [{"candidate": i, "size": len(clique),
             "verified": None if report.verified is None else clique in report.verified,
             "vertices": " ".join(map(str, sorted(clique)))}
            for i, clique in enumerate(report.candidates)]
    emit(config, "recover", result, rows=rows, columns=RECOVER_COLUMNS)
    return EXIT_PASS


####################################################################################################

def _with_console_log(config: ExperimentConfig, command: str, run) -> int:
    """
    Runs `run()` with stdout and stderr mirrored to the command's log file, if configured.
    """
    if not config.tee_console:
        return run()
    stdout, stderr = sys.stdout, sys.stderr
    log = lib.FileStream(config.command_log_file(command), truncate=True)
    sys.stdout = lib.Tee(stdout, log)
    sys.stderr = lib.Tee(stderr, log)
    try:
        return run()
    finally:
        sys.stdout.close()
        sys.stderr.close()
        sys.stdout, sys.stderr = stdout, stderr


def cmd_experiment_run(config: ExperimentConfig) -> int:
    summary = run_experiment(config)
    emit(config, "experiment", summary.to_json())
    return EXIT_PASS if summary.passed else EXIT_ACCEPTANCE_FAILURE


def cmd_validate_run(config: ExperimentConfig) -> int:
    check = state.args.check
    results = []
    r = config.num_cliques

    if check in ("bidensity", "all"):
        runs = [bidensity_validator(config.n, config.p, config, seed) for seed in config.seeds]
        passed = sum(v.passed for v in runs) / len(runs)
        results.append({"name": "bidensity", "passed": passed >= config.seed_pass_fraction,
                        "observed": passed, "threshold": config.seed_pass_fraction,
                        "worst": max(v.observed for v in runs)})
    if check in ("coverage", "all"):
        runs = [coverage_validator(gen_planted_cover(config.n, config.p, config.k, r, seed),
                                   config.coverage_target) for seed in config.seeds]
        passed = sum(v.passed for v in runs) / len(runs)
        results.append({"name": "coverage", "passed": passed >= config.seed_pass_fraction,
                        "observed": passed, "threshold": config.seed_pass_fraction,
                        "mean_coverage": float(np.mean([v.observed for v in runs]))})
    if check in ("distinguisher", "all"):
        results.append(distinguisher_validator(
            config.n, config.p, config.k, r, config.seeds, config.seed_pass_fraction).to_json())
    if check in ("amplification", "all"):
        results.append(amplification_validator(
            config.n, config.p, config.k, r, config.seeds, config.significance).to_json())

    for result in results:
        lib.info(f"{result['name']}: {'PASSED' if result['passed'] else 'FAILED'} "
                 f"(observed {result['observed']:.4g}, threshold {result['threshold']:.4g})")
    emit(config, "validate", {"passed": all(v["passed"] for v in results), "checks": results},
         rows=[{k: v for k, v in res.items() if not isinstance(v, (list, dict))}
               for res in results])
    return EXIT_PASS if all(v["passed"] for v in results) else EXIT_ACCEPTANCE_FAILURE


COMMANDS = {
    "gen": cmd_gen_run,
    "solve": cmd_solve_run,
    "scheme": cmd_scheme_run,
    "eval": cmd_eval_run,
    "recover": cmd_recover_run,
    "experiment": lambda config: _with_console_log(
        config, "experiment", lambda: cmd_experiment_run(config)),
    "validate": lambda config: _with_console_log(
        config, "validate", lambda: cmd_validate_run(config)),
}


####################################################################################################

def main(argv: list[str] | None = None) -> int:
    state.args = p.parse(argv)
    config = None

    try:
        if state.args.command is None:
            p.print_help()
            return EXIT_PASS

        deps.check_prerequisites()
        config = load_config()
        os.makedirs(config.logs_dir, exist_ok=True)
        return COMMANDS[state.args.command](config)

    except KeyboardInterrupt:
        print("Interrupted by user.")
        return EXIT_ERROR
    except Exception as e:
        import traceback
        trace_path = config.trace_log_file if config is not None \
            else os.path.abspath(os.path.join("results", "logs", "trace.log"))
        lib.ensure_parent_dir(trace_path)
        with open(trace_path, "w") as f:
            f.write(str(e))
            f.write("\n")
            f.write(traceback.format_exc())
        print(f"Aborted with error: {e}\n"
              f"See log file for full trace: {trace_path}")
        return EXIT_ERROR


####################################################################################################

if __name__ == "__main__":
    sys.exit(main())

####################################################################################################
