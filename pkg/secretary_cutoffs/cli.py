"""
Command line interface for secretary cutoffs
"""

import functools
import logging
import math
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional

import click

from secretary_cutoffs import __version__
from secretary_cutoffs.evaluation import PolicyEvaluator, Quadrature
from secretary_cutoffs.exceptions import CapacityError, DomainError, FitError, NumericError, SecretaryError
from secretary_cutoffs.infrastructure import ConfigFileParser, LoggingConfig, RangeParser, ResultCache, UtilitySpecParser
from secretary_cutoffs.models import (
    CutoffMethod,
    InnerSumStrategy,
    LipschitzConfig,
    OptimizerConfig,
    QuadratureConfig,
    SimConfig,
    SweepConfig,
    TopKScoring,
    Variant,
)
from secretary_cutoffs.optimization import CutoffOptimizer
from secretary_cutoffs.output import FORMATS, FileManager, ManifestBuilder, ResultRenderer, SweepCsvWriter
from secretary_cutoffs.simulation import MonteCarloSimulator
from secretary_cutoffs.sweep import ObjectiveParser, PowerLawFitter, SweepRunner, TopKObjective, UtilityObjective
from secretary_cutoffs.topk import TopKAnalyzer
from secretary_cutoffs.utility import UtilityAnalyzer

logger = logging.getLogger(__name__)

EXIT_USAGE = 2
EXIT_NUMERIC = 3
EXIT_CAPACITY = 4


def guarded(command: Callable) -> Callable:
    """
    Map library errors onto the exit code contract

    DomainError (bad arguments, unparseable specs) -> usage error, exit 2
    NumericError (quadrature, fits, simulation checks) -> exit 3
    CapacityError (exact enumeration too large) -> exit 4
    """

    @functools.wraps(command)
    def wrapper(*args, **kwargs):
        try:
            return command(*args, **kwargs)
        except DomainError as e:
            raise click.UsageError(str(e), ctx=click.get_current_context(silent=True)) from e
        except CapacityError as e:
            logger.error(str(e))
            click.get_current_context().exit(EXIT_CAPACITY)
        except NumericError as e:
            logger.error(str(e))
            click.get_current_context().exit(EXIT_NUMERIC)
        except SecretaryError as e:
            logger.error(str(e))
            click.get_current_context().exit(EXIT_NUMERIC)

    return wrapper


def output_options(command: Callable) -> Callable:
    command = click.option("--out", "-o", type=click.Path(dir_okay=False, path_type=Path), help="Write output to a file instead of stdout")(command)
    command = click.option("--format", "output_format", type=click.Choice(FORMATS), default="text", show_default=True, help="Output format")(command)
    return command


def quadrature_options(command: Callable) -> Callable:
    command = click.option(
        "--strategy",
        type=click.Choice([s.value for s in InnerSumStrategy]),
        default=InnerSumStrategy.SWAPPED_KERNEL.value,
        show_default=True,
        help="Evaluate the t-sum per term or as one swapped kernel integral",
    )(command)
    command = click.option("--max-depth", type=int, default=40, show_default=True, help="Quadrature subdivisions per piece")(command)
    command = click.option("--abs-tol", type=float, default=1e-10, show_default=True, help="Absolute quadrature tolerance")(command)
    return command


def build_quadrature_config(abs_tol: float, max_depth: int, strategy: str) -> QuadratureConfig:
    return QuadratureConfig(abs_tol=abs_tol, max_depth=max_depth, inner_sum_strategy=InnerSumStrategy(strategy))


def emit(ctx: click.Context, columns: List[str], rows: List[Dict[str, Any]], seed: Optional[int] = None, summary: Optional[Dict[str, Any]] = None) -> None:
    """Render rows in the requested format and write them to --out or stdout"""
    params = ctx.params
    manifest = ManifestBuilder().build(ctx.info_name, params, seed)
    text = ResultRenderer(params["output_format"]).render(columns, rows, manifest, summary)
    write_output(params.get("out"), text)


def write_output(out: Optional[Path], text: str) -> None:
    if out is None:
        click.echo(text, nl=False)
        return
    FileManager().write_atomic(out, text)
    logger.info(f"Wrote {out}")


def load_config_defaults(path: Path) -> Dict[str, str]:
    text = FileManager().read_text(path) or ""
    return ConfigFileParser.parse(text)


def command_defaults(command: click.Command, values: Dict[str, str]) -> Dict[str, str]:
    """Config values for the parameters of one command, matched by option name or parameter name"""
    defaults = {}
    for param in command.params:
        names = {param.name} | {option.lstrip("-").replace("-", "_") for option in param.opts}
        for name in names & values.keys():
            defaults[param.name] = values[name]
    return defaults


@click.group()
@click.option("--config", "config_file", type=click.Path(exists=True, dir_okay=False, path_type=Path), help="key=value defaults for subcommand options")
@click.option("--log-level", type=click.Choice(["DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"], case_sensitive=False), help="Overrides SECRETARY_LOG_LEVEL")
@click.version_option(version=__version__, prog_name="secretary-cutoffs")
@click.pass_context
def main(ctx: click.Context, config_file: Optional[Path], log_level: Optional[str]):
    """
    Secretary Cutoffs - optimal cutoff policies for the secretary problem with general utilities

    Utilities are given as w-specs over relative rank x (x = 0 is the best applicant):
    linear (1 - x), const:<v>, power:<p> (-x^p), nsqrt (-sqrt x), step:<q>[:<h>],
    pwl:x0,y0;x1,y1;..., poly:a0,a1,...

    Examples:

    \b
    # Expected utility, first and second differences for cutoffs 1..20:
    secretary-cutoffs eval --w linear --n 100 --c 1..20

    \b
    # Optimal cutoff with the sqrt(n) ceiling:
    secretary-cutoffs opt --w linear --n 10000 --bound

    \b
    # Classical secretary problem:
    secretary-cutoffs topk --n 100 --k 1

    \b
    # Seeded Monte Carlo (byte-identical on rerun):
    secretary-cutoffs sim --variant p2 --w linear --n 3 --c 2 --trials 1000000 --seed 42

    \b
    # Asymptotics sweep to CSV with a power-law fit footer:
    secretary-cutoffs sweep --objective topk:1 --grid 200,400,800 --out s.csv

    Exit codes: 0 success, 2 usage, 3 numeric failure, 4 capacity.
    """
    LoggingConfig.setup_default(log_level)

    if config_file is not None:
        try:
            values = load_config_defaults(config_file)
        except SecretaryError as e:
            raise click.UsageError(f"Invalid config file {config_file}: {e}") from e
        ctx.default_map = {name: command_defaults(command, values) for name, command in main.commands.items()}
        logger.debug(f"Loaded defaults from {config_file}: {sorted(values)}")


@main.command("eval")
@click.option("--w", "w_spec", required=True, help="Utility w-spec")
@click.option("--n", type=int, required=True, help="Number of applicants")
@click.option("--c", "cutoffs", required=True, help="Cutoff, range a..b, or list c1,c2,...")
@click.option("--ranked", is_flag=True, help="Add the exact payoff on random rank orders")
@quadrature_options
@output_options
@click.pass_context
@guarded
def cmd_eval(ctx, w_spec, n, cutoffs, ranked, abs_tol, max_depth, strategy, output_format, out):
    """Expected utility E_c with its first and second differences"""
    w = UtilitySpecParser.parse(w_spec)
    evaluator = PolicyEvaluator(Quadrature(build_quadrature_config(abs_tol, max_depth, strategy)))

    rows = []
    for c in RangeParser.parse_cutoffs(cutoffs):
        if not 1 <= c <= n:
            raise DomainError("cutoff must lie in [1, n]", f"c: {c}, n: {n}")
        row = {
            "c": c,
            "expected_utility": evaluator.expected_utility(w, n, c).expected_utility,
            "delta": evaluator.delta(w, n, c) if c >= 2 else None,
            "second_delta": evaluator.second_delta(w, n, c) if c >= 3 else None,
        }
        if ranked:
            row["ranked_utility"] = evaluator.ranked_expected_utility(w, n, c)
        rows.append(row)

    columns = ["c", "expected_utility", "delta", "second_delta"] + (["ranked_utility"] if ranked else [])
    emit(ctx, columns, rows)


@main.command("opt")
@click.option("--w", "w_spec", required=True, help="Utility w-spec")
@click.option("--n", type=int, required=True, help="Number of applicants")
@click.option("--method", type=click.Choice(["binary", "scan", "both"]), default="binary", show_default=True, help="Search strategy")
@click.option("--bound/--no-bound", default=False, help="Report the sqrt((L / w_hat) n) ceiling")
@click.option("--epsilon", type=float, default=0.1, show_default=True, help="Neighborhood of the top rank for L")
@click.option("--workers", type=int, default=1, show_default=True, help="Threads for the full scan")
@quadrature_options
@output_options
@click.pass_context
@guarded
def cmd_opt(ctx, w_spec, n, method, bound, epsilon, workers, abs_tol, max_depth, strategy, output_format, out):
    """Optimal cutoff of a utility objective"""
    w = UtilitySpecParser.parse(w_spec)
    quadrature = Quadrature(build_quadrature_config(abs_tol, max_depth, strategy))
    optimizer = CutoffOptimizer(PolicyEvaluator(quadrature), UtilityAnalyzer(quadrature), OptimizerConfig(epsilon=epsilon), max_workers=workers)

    results = []
    if method in ("binary", "both"):
        results.append(optimizer.optimal_cutoff(w, n))
    if method in ("scan", "both"):
        results.append(optimizer.optimal_cutoff_scan(w, n))

    ceiling = optimizer.cutoff_upper_bound(w, n, epsilon) if bound else None
    rows = [
        {
            "n": result.n,
            "c_opt": result.c_opt,
            "value": result.value,
            "method": result.method.value,
            "bound": ceiling.value if ceiling else None,
            "bound_note": ceiling.reason if ceiling else None,
        }
        for result in results
    ]

    summary = None
    if method == "both":
        agree = results[0].c_opt == results[1].c_opt
        summary = {"methods_agree": agree}
        if not agree:
            logger.warning(f"{CutoffMethod.BINARY_SEARCH.value} and {CutoffMethod.FULL_SCAN.value} disagree: {results[0].c_opt} vs {results[1].c_opt}")
    emit(ctx, ["n", "c_opt", "value", "method", "bound", "bound_note"], rows, summary=summary)


@main.command("topk")
@click.option("--n", type=int, required=True, help="Number of applicants")
@click.option("--k", type=int, required=True, help="Success means accepting one of the k best")
@click.option("--scoring", type=click.Choice([s.value for s in TopKScoring]), default=TopKScoring.EXACT.value, show_default=True, help="Exact probability or the asymptotic model")
@click.option("--profile", is_flag=True, help="List P(c) for every cutoff")
@click.option("--exact-check", is_flag=True, help="Compare with full enumeration (n <= 12)")
@output_options
@click.pass_context
@guarded
def cmd_topk(ctx, n, k, scoring, profile, exact_check, output_format, out):
    """Optimal cutoff and success probability for the top-k objective"""
    analyzer = TopKAnalyzer()
    scoring = TopKScoring(scoring)

    if profile:
        model = analyzer.success_profile(n, k, scoring)
        rows = [{"c": c, "probability": p} for c, p in model.success_probs]
        if exact_check:
            for row in rows:
                row["enumerated"] = analyzer.success_probability_exact(n, k, row["c"])
        emit(ctx, ["c", "probability"] + (["enumerated"] if exact_check else []), rows)
        return

    optimum = analyzer.optimal_cutoff_topk(n, k, scoring)
    row = {"n": n, "k": k, "c_opt": optimum.c_opt, "probability": optimum.probability, "ratio": optimum.ratio, "scoring": scoring.value}
    columns = ["n", "k", "c_opt", "probability", "ratio", "scoring"]
    if exact_check:
        row["enumerated"] = analyzer.success_probability_exact(n, k, optimum.c_opt)
        columns.append("enumerated")
    emit(ctx, columns, [row])


@main.command("sim")
@click.option("--variant", type=click.Choice([v.value for v in Variant]), required=True, help="p1 (rank orders), p2 (uniform types) or topk")
@click.option("--w", "w_spec", help="Utility w-spec (p1 and p2)")
@click.option("--n", type=int, required=True, help="Number of applicants")
@click.option("--c", type=int, required=True, help="Cutoff")
@click.option("--k", type=int, help="Top-k threshold (topk only)")
@click.option("--trials", type=int, default=100000, show_default=True, help="Episodes")
@click.option("--seed", type=int, default=0, show_default=True, help="64-bit seed")
@click.option("--workers", type=int, default=4, show_default=True, help="Threads running blocks")
@click.option("--exact", "with_exact", is_flag=True, help="Add the exact value for comparison")
@click.option("--debug", is_flag=True, help="Check permutations (same as SECRETARY_MC_DEBUG=1)")
@click.option("--progress", is_flag=True, help="Show a progress bar on stderr")
@output_options
@click.pass_context
@guarded
def cmd_sim(ctx, variant, w_spec, n, c, k, trials, seed, workers, with_exact, debug, progress, output_format, out):
    """Seeded Monte Carlo estimate of the cutoff rule"""
    variant = Variant(variant)
    if variant is Variant.TOPK and w_spec:
        raise DomainError("--w does not apply to topk", f"w: {w_spec}")
    w = UtilitySpecParser.parse(w_spec) if w_spec else None

    config = SimConfig(variant=variant, n=n, c=c, trials=trials, seed=seed, k=k)
    simulator = MonteCarloSimulator(max_workers=workers, debug=True if debug else None, show_progress=progress)
    result = simulator.simulate(w, config)

    row = {"variant": variant.value, "n": n, "c": c, "trials": result.trials, "seed": seed, "mean": result.mean, "stderr": result.stderr}
    columns = ["variant", "n", "c", "trials", "seed", "mean", "stderr"]
    if with_exact:
        row["exact"] = exact_value(w, config)
        columns.append("exact")
    emit(ctx, columns, [row], seed=seed)


def exact_value(w, config: SimConfig) -> float:
    if config.variant is Variant.TOPK:
        return TopKAnalyzer().success_probability_closed(config.n, config.k, config.c)
    if config.n < 2:
        raise DomainError("exact values need n >= 2", f"n: {config.n}")
    evaluator = PolicyEvaluator()
    if config.variant is Variant.P1:
        return evaluator.ranked_expected_utility(w, config.n, config.c)
    return evaluator.expected_utility(w, config.n, config.c).expected_utility


@main.command("sweep")
@click.option("--objective", required=True, help="topk:<k>[:model], utility:<w-spec> or a bare w-spec")
@click.option("--grid", help="Comma-separated n values (default depends on the objective)")
@click.option("--cache", "cache_file", type=click.Path(dir_okay=False, path_type=Path), help="JSON cache to resume interrupted sweeps")
@click.option("--drop-smallest", is_flag=True, help="Leave the smallest n out of the fit")
@click.option("--epsilon", type=float, default=0.1, show_default=True, help="Neighborhood of the top rank for the bound (pulled below a jump)")
@click.option("--slack", type=float, default=2.0, show_default=True, help="Bound check: c_opt <= slack * bound")
@click.option("--workers", type=int, default=4, show_default=True, help="Grid points computed concurrently")
@click.option("--progress", is_flag=True, help="Show a progress bar on stderr")
@quadrature_options
@click.option("--format", "output_format", type=click.Choice(FORMATS), default="csv", show_default=True, help="Output format")
@click.option("--out", "-o", type=click.Path(dir_okay=False, path_type=Path), help="Write output to a file instead of stdout")
@click.pass_context
@guarded
def cmd_sweep(ctx, objective, grid, cache_file, drop_smallest, epsilon, slack, workers, progress, abs_tol, max_depth, strategy, output_format, out):
    """Optimal cutoffs over a grid of n with a power-law fit"""
    target = ObjectiveParser.parse(objective)
    n_grid = RangeParser.parse_grid(grid) if grid else list(SweepRunner.default_grid(target))
    quadrature_config = build_quadrature_config(abs_tol, max_depth, strategy)
    sweep_config = SweepConfig(epsilon=epsilon, slack=slack, drop_smallest=drop_smallest, max_workers=workers)

    runner = SweepRunner(
        optimizer=CutoffOptimizer.create_default(quadrature_config),
        topk=TopKAnalyzer(),
        cache=ResultCache(cache_file),
        config=sweep_config,
        show_progress=progress,
    )
    records = runner.run_sweep(target, n_grid, quadrature_config)

    fitter = PowerLawFitter(drop_smallest=sweep_config.drop_smallest)
    running = fitter.running_exponents(records)
    fit, fit_error = None, None
    try:
        fit = fitter.fit(records)
    except FitError as e:
        fit_error = e.reason
        logger.warning(f"No power-law fit: {e}")

    checks = fitter.check_bound(records, sweep_config.slack) if isinstance(target, UtilityObjective) else []
    failed = [check.n for check in checks if not check.passed]
    if failed:
        logger.warning(f"c_opt exceeds {slack} x bound at n = {failed}")

    if output_format == "csv":
        write_output(out, SweepCsvWriter.render(records, running, fit, fit_error))
        return

    rows = [dict(record.to_dict(), exponent_running=exponent) for record, exponent in zip(records, running)]
    summary: Dict[str, Any] = {"fit_error": fit_error} if fit is None else {"exponent": fit.exponent, "log_intercept": fit.log_intercept, "r_squared": fit.r_squared}
    if checks:
        summary["bound_failures"] = failed
    if isinstance(target, TopKObjective):
        summary["final_ratio"] = records[-1].c_opt / records[-1].n
    emit(ctx, list(SweepCsvWriter.HEADER), rows, summary=summary)


@main.command("constants")
@click.option("--w", "w_spec", required=True, help="Utility w-spec")
@click.option("--epsilon", type=float, default=0.1, show_default=True, help="Neighborhood of the top rank")
@click.option("--n", type=int, default=1000, show_default=True, help="n for the cutoff ceiling")
@click.option("--grid", "lipschitz_grid", type=int, default=1024, show_default=True, help="Subintervals of the slope estimate")
@output_options
@click.pass_context
@guarded
def cmd_constants(ctx, w_spec, epsilon, n, lipschitz_grid, output_format, out):
    """Lipschitz constant L, bound M, mean gap w_hat and the cutoff ceiling"""
    w = UtilitySpecParser.parse(w_spec)
    analyzer = UtilityAnalyzer(config=LipschitzConfig(grid=lipschitz_grid))
    constants = analyzer.extract_constants(w, epsilon)
    ceiling = CutoffOptimizer.bound_from_constants(constants, n)

    row = {
        "utility": w.label,
        "L": constants.L if constants.is_lipschitz else "unbounded",
        "epsilon": constants.epsilon,
        "M": constants.M,
        "w_hat": constants.w_hat,
        "n": n,
        "bound": ceiling.value,
        "bound_note": ceiling.reason,
    }
    emit(ctx, ["utility", "L", "epsilon", "M", "w_hat", "n", "bound", "bound_note"], [row])


@main.command("concentration")
@click.option("--n", type=int, required=True, help="Sample size")
@click.option("--trials", type=int, default=1000, show_default=True, help="Samples")
@click.option("--seed", type=int, default=0, show_default=True, help="64-bit seed")
@click.option("--tail-i", type=int, help="Order statistic for the tail check (default n/2)")
@click.option("--tail-epsilon", type=float, default=0.01, show_default=True, help="Deviation of the tail check")
@click.option("--workers", type=int, default=4, show_default=True, help="Threads running blocks")
@click.option("--progress", is_flag=True, help="Show a progress bar on stderr")
@output_options
@click.pass_context
@guarded
def cmd_concentration(ctx, n, trials, seed, tail_i, tail_epsilon, workers, progress, output_format, out):
    """How often sorted uniforms stray from i/n by more than ln(n)/sqrt(n)"""
    simulator = MonteCarloSimulator(max_workers=workers, show_progress=progress)
    violations = simulator.order_stat_deviation(n, trials, seed)
    index = tail_i if tail_i is not None else max(1, n // 2)
    tail, chernoff = simulator.order_stat_tail(n, index, tail_epsilon, trials, seed)

    row = {
        "n": n,
        "trials": trials,
        "seed": seed,
        "threshold": math.log(n) / math.sqrt(n),
        "violation_fraction": violations,
        "tail_i": index,
        "tail_fraction": tail,
        "chernoff_bound": chernoff,
    }
    emit(ctx, list(row), [row], seed=seed)


if __name__ == "__main__":
    main()
