"""
Runs an experiment: for every seed, generate G(n, p, k, r), build the clique-partition scheme,
bound (and, on small graphs, compute exactly) the attacker's utility under it, and try to recover
the planted cliques from it. Writes one CSV row per seed, a JSON summary and a metadata file.
"""

import csv
import datetime
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

import libsg as lib
from config import ExperimentConfig
from equilibrium import SecurityGame, security_game_matrix
from graphs import PlantedCoverInstance, gen_planted_cover
from recovery import check_cluster_invariants, recover_pipeline
from signaling import (build_clique_partition_scheme, evaluate_scheme_security,
                       lemma3_analytic_bound, scheme_utility_lower_bound)
from validators import coverage_fraction

CSV_COLUMNS = [
    "seed", "n", "p", "k", "r", "d", "rho", "c", "coverage", "bound", "lp_total",
    "frac_recovered", "clusters", "runtime_ms", "constants_profile", "error",
]

PAYOFF_RANGE_STATES = 5
"""Number of states whose explicit payoff matrix the payoff range check looks at."""


####################################################################################################

@dataclass
class SeedOutcome:
    row: dict
    runtime_ms: float
    invariants_ok: bool | None = None
    payoff_range: tuple[float, float] | None = None


@dataclass
class ExperimentSummary:
    preset: str | None
    seeds: int
    errors: int
    mean_coverage: float | None
    mean_bound: float | None
    analytic_bound: float | None
    fraction_bound_ok: float | None
    mean_lp_total: float | None
    mean_fraction_recovered: float | None
    invariant_failures: int
    payoff_range: list[float] | None
    passed: bool
    failures: list[str] = field(default_factory=list)

    def to_json(self) -> dict:
        return dict(vars(self))


####################################################################################################

def _payoff_range(instance: PlantedCoverInstance, d: int, rho: float) -> tuple[float, float]:
    """
    Smallest and largest entry of the explicit attacker-by-defense-set payoff matrices A^theta
    for the first few states.
    """
    game = SecurityGame(instance.graph, d, rho)
    lo, hi = np.inf, -np.inf
    for theta in range(min(PAYOFF_RANGE_STATES, instance.n)):
        point = np.zeros(instance.n)
        point[theta] = 1.0
        matrix, _ = security_game_matrix(game, point)
        lo, hi = min(lo, float(matrix.min())), max(hi, float(matrix.max()))
    return lo, hi


def run_seed(config: ExperimentConfig, seed: int) -> SeedOutcome:
    """
    Runs the whole pipeline on one seed. Errors are caught and recorded in the row's `error`
    column, so that one failing seed doesn't abort the experiment.
    """
    r = config.num_cliques
    row = {
        "seed": seed, "n": config.n, "p": config.p, "k": config.k, "r": r, "d": config.d,
        "rho": config.rho, "c": config.c, "coverage": "", "bound": "", "lp_total": "",
        "frac_recovered": "", "clusters": "", "runtime_ms": "",
        "constants_profile": config.constants_profile, "error": "",
    }
    outcome = SeedOutcome(row, 0.0)
    start = time.perf_counter()
    try:
        instance = gen_planted_cover(config.n, config.p, config.k, r, seed)
        row["coverage"] = coverage_fraction(instance)
        dec = build_clique_partition_scheme(instance)
        row["bound"] = scheme_utility_lower_bound(instance, dec, config.d, config.rho)

        if config.n <= config.lp_eval_max_n:
            game = SecurityGame(instance.graph, config.d, config.rho)
            row["lp_total"] = evaluate_scheme_security(game, dec).total

        if config.check_payoff_range:
            outcome.payoff_range = _payoff_range(instance, config.d, config.rho)

        if config.run_recovery and config.rho * config.d >= 2:
            report = recover_pipeline(instance.graph, dec, config.k, config.recovery_params(),
                                      seed, truth=instance.planted_cliques)
            row["frac_recovered"] = report.fraction_recovered
            row["clusters"] = len(report.clusters)
            invariants = check_cluster_invariants(instance.graph, report.steps, config.d,
                                                  config.rho)
            outcome.invariants_ok = bool(invariants.ok)
    except Exception as e:
        row["error"] = f"{type(e).__name__}: {e}"
        lib.debug(f"seed {seed} failed: {row['error']}")

    outcome.runtime_ms = (time.perf_counter() - start) * 1000
    return outcome


####################################################################################################

def _mean(values) -> float | None:
    values = [v for v in values if v != ""]
    return float(np.mean(values)) if values else None


def summarize(config: ExperimentConfig, outcomes: list[SeedOutcome]) -> ExperimentSummary:
    rows = [o.row for o in outcomes]
    ok_rows = [row for row in rows if not row["error"]]
    failures = []

    errors = len(rows) - len(ok_rows)
    if errors:
        failures.append(f"{errors} seed(s) raised an error")

    bounds = [row["bound"] for row in ok_rows if row["bound"] != ""]
    fraction_bound_ok = sum(b >= config.bound_target for b in bounds) / len(bounds) \
        if bounds else None
    if fraction_bound_ok is not None and fraction_bound_ok < config.seed_pass_fraction:
        failures.append(f"bound >= {config.bound_target} on only {fraction_bound_ok:.0%} of seeds")

    coverages = [row["coverage"] for row in ok_rows if row["coverage"] != ""]
    mean_coverage = _mean(coverages)

    frac = _mean(row["frac_recovered"] for row in ok_rows)
    if config.recovery_target is not None and frac is not None and frac < config.recovery_target:
        failures.append(f"mean fraction recovered {frac:.3f} < {config.recovery_target}")

    invariant_failures = sum(o.invariants_ok is False for o in outcomes)
    if invariant_failures:
        failures.append(f"cluster invariants violated on {invariant_failures} seed(s)")

    payoff_range = None
    ranges = [o.payoff_range for o in outcomes if o.payoff_range is not None]
    if ranges:
        payoff_range = [min(lo for lo, _ in ranges), max(hi for _, hi in ranges)]
        if payoff_range[0] < -2 * config.rho - 1e-12 or payoff_range[1] > 1 + 1e-12:
            failures.append(f"payoffs {payoff_range} outside [-2 rho, 1]")

    return ExperimentSummary(
        preset=config.preset,
        seeds=len(rows),
        errors=errors,
        mean_coverage=mean_coverage,
        mean_bound=_mean(bounds),
        analytic_bound=lemma3_analytic_bound(mean_coverage, config.c)
        if mean_coverage is not None else None,
        fraction_bound_ok=fraction_bound_ok,
        mean_lp_total=_mean(row["lp_total"] for row in ok_rows),
        mean_fraction_recovered=frac,
        invariant_failures=invariant_failures,
        payoff_range=payoff_range,
        passed=not failures,
        failures=failures)


####################################################################################################

def write_results(config: ExperimentConfig, outcomes: list[SeedOutcome]):
    """
    Writes the CSV rows in seed order. Runtimes go to the metadata file instead of the
    `runtime_ms` column, so that rerunning a config reproduces the CSV byte for byte.
    """
    lib.ensure_parent_dir(config.results_file)
    with open(config.results_file, "w", newline="") as f:
        writer = csv.DictWriter(f, fieldnames=CSV_COLUMNS, lineterminator="\n")
        writer.writeheader()
        for outcome in outcomes:
            writer.writerow(outcome.row)


def run_experiment(config: ExperimentConfig) -> ExperimentSummary:
    """
    Runs every seed of `config` (on `config.jobs` threads) and writes the results, summary and
    metadata files under `config.out_dir`.
    """
    started = datetime.datetime.now(datetime.timezone.utc)
    lib.info(f"Running {len(config.seeds)} seed(s): n={config.n} p={config.p} k={config.k} "
             f"r={config.num_cliques} d={config.d} rho={config.rho}")

    if config.jobs > 1:
        with ThreadPoolExecutor(max_workers=config.jobs) as pool:
            outcomes = list(pool.map(lambda s: run_seed(config, s), config.seeds))
    else:
        outcomes = []
        for seed in config.seeds:
            outcomes.append(run_seed(config, seed))
            row = outcomes[-1].row
            lib.info(f"  seed {seed}: coverage={row['coverage']} bound={row['bound']} "
                     f"recovered={row['frac_recovered']} {row['error']}".rstrip())

    summary = summarize(config, outcomes)
    write_results(config, outcomes)
    lib.write_json_file(config.summary_file, summary.to_json())
    lib.write_json_file(config.metadata_file, {
        "started": started.isoformat(),
        "finished": datetime.datetime.now(datetime.timezone.utc).isoformat(),
        "runtime_ms": {str(o.row["seed"]): round(o.runtime_ms, 3) for o in outcomes},
        "config": config.to_json(),
    })

    verdict = "PASSED" if summary.passed else "FAILED: " + "; ".join(summary.failures)
    lib.info(f"Experiment {verdict}")
    lib.info(f"Results written to {config.results_file}")
    return summary

####################################################################################################
