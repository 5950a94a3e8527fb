"""
orderloss computes how much entanglement survives when the order of
Bob's qubits of N = 2J shared pairs alpha|00> + beta|11> is lost.
For usage see README.md!

This file contains the command implementations and the main function.
Every command writes its result table to stdout or to --output,
log lines go to stderr.

Exit codes: 0 success, 1 failed verification, 2 usage error,
3 size guard exceeded.
"""

__all__ = ["cmd_table", "cmd_sweep", "cmd_distill", "cmd_verify", "cmd_info", "main", "cli"]
__date__ = "2024-03-22"
__license__ = "GPLv3"
__version__ = "1.0.0"

import sys
from typing import Callable, Dict, List, Optional

import pandas
from pydantic import ValidationError

from . import constants as const
from .coupled_basis import degeneracy
from .distill import enumerate_outcomes, average_yield, run_shot, monte_carlo, export_trace
from .numkit import SizeGuardError, check_size, use_eigensolver
from .quantities import block_table, ratio, sweep
from .verification import run_suite, format_report
from .orderloss_utils.orderloss_control import RunConfig, parser, build_run_config
from .orderloss_utils.orderloss_logging import logger, log_block_table
from .orderloss_utils.output_writer import write_table


def cmd_table(config: RunConfig) -> str:
    """
    per sector j: d_j, p_j, d_j**2 p_j, S_j and log2(2j + 1);
    footer with E_D, delta_I, the ratio and E_D per pair
    """
    s = config.schmidt()
    logger.create_info_section(f"sector table J = {config.J}")
    table = block_table(config.J, s)
    log_block_table(table, "sectors")
    record = ratio(config.J, s)
    footer = {
        "J": config.J, "alpha": record.alpha, "E_initial": record.E_initial,
        "E_D": record.E_D, "delta_I": record.delta_I, "ratio": record.ratio,
        "ratio_defined": record.ratio_defined,
        "E_D_per_pair": record.E_D / (2 * config.J),
        }
    logger.log(25, f"E_D = {record.E_D:.12g}, delta_I = {record.delta_I:.12g}, ratio = "
                   f"{record.ratio if record.ratio_defined else 'undefined'}")
    return write_table(table, config.format, config.output, footer)


def cmd_sweep(config: RunConfig) -> str:
    """ one row (J, alpha, E_initial, E_D, delta_I, ratio) per alpha """
    alphas = config.alphas()
    logger.create_info_section(f"sweep J = {config.J} over {len(alphas)} alpha values")
    records = sweep(config.J, alphas, progress=len(alphas) > 1000)
    df = pandas.DataFrame([record.as_row() for record in records], columns=const.SWEEP_COLUMNS)
    defined = df[df.ratio_defined]
    if len(defined):
        logger.log(25, f"max ratio = {defined.ratio.max():.12g}")
    return write_table(df, config.format, config.output)


def cmd_distill(config: RunConfig) -> str:
    """
    exhaustive outcome table of the protocol, extended by a Monte Carlo
    summary if shots are given; optionally the trace of one run
    """
    s = config.schmidt()
    check_size(config.J, const.BRUTE_FORCE_MAX_J, "distill", config.big, const.BIG_MAX_J)
    logger.create_info_section(f"distillation protocol J = {config.J}")
    outcomes = enumerate_outcomes(config.J, s, config.big)
    yield_bits = average_yield(outcomes)
    seed = config.resolve_seed()

    if config.shots is None:
        df = pandas.DataFrame([{
            "j": o.j, "alpha_j": o.alpha_j, "beta_j": o.beta_j, "bob_j": o.bob_j,
            "probability": o.probability, "yield_bits": o.yield_bits}
            for o in outcomes])
        footer = {"J": config.J, "alpha": s.alpha, "average_yield": yield_bits}
    else:
        df = monte_carlo(config.J, s, config.shots, seed, outcomes=outcomes,
                         progress=config.shots > 10 ** 6)
        footer = {"J": config.J, "alpha": s.alpha, "average_yield": yield_bits,
                  "empirical_yield": float((df.frequency * df.yield_bits).sum()),
                  "shots": config.shots, "seed": seed}

    if config.trace is not None:
        _, trace = run_shot(config.J, s, seed, config.big)
        export_trace(trace, config.trace)
    logger.log(25, f"average yield = {yield_bits:.12g} ebits")
    return write_table(df, config.format, config.output, footer)


def cmd_verify(config: RunConfig) -> int:
    """ run the acceptance suite, exit code 1 if any check fails """
    check_size(config.J, const.BRUTE_FORCE_MAX_J, "verify", config.big, const.BIG_MAX_J)
    logger.create_info_section(f"verify J = {config.J}")
    results = run_suite(config)
    report = format_report(results)
    if config.output is None:
        sys.stdout.write(report)
    else:
        with open(config.output, 'w', newline='') as f:
            f.write(report)
    if all(result.passed for result in results):
        return const.EXIT_OK
    return const.EXIT_VERIFY_FAILED


def cmd_info(config: RunConfig) -> str:
    """ version, supported ranges and the degeneracy table of J """
    df = pandas.DataFrame([
        {"j": j, "d_j": degeneracy(config.J, j), "multiplet": 2 * j + 1,
         "dimension": degeneracy(config.J, j) * (2 * j + 1)}
        for j in range(config.J + 1)])
    footer = {
        "version": __version__, "J": config.J, "qubits": 4 * config.J,
        "brute_force_max_J": const.BRUTE_FORCE_MAX_J, "big_max_J": const.BIG_MAX_J,
        "basis_max_J": const.BASIS_MAX_J, "closed_form_max_J": const.CLOSED_FORM_MAX_J,
        "eigensolver": config.eigensolver_kwargs.name,
        }
    return write_table(df, config.format, config.output, footer)


COMMANDS: Dict[str, Callable[[RunConfig], object]] = {
    "table": cmd_table,
    "sweep": cmd_sweep,
    "distill": cmd_distill,
    "verify": cmd_verify,
    "info": cmd_info,
    }


def main(argv: Optional[List[str]] = None) -> int:
    """ Run orderloss from the command line, returns the exit code """
    try:
        args = parser(argv)
    except SystemExit as exc:
        return const.EXIT_OK if exc.code in (None, 0) else const.EXIT_USAGE

    logger.set_stream_level(20 + 5 * (args.quiet - args.verbose))
    try:
        config = build_run_config(args)
    except (ValidationError, ValueError) as exc:
        logger.error(f"invalid arguments: {exc}")
        return const.EXIT_USAGE

    if config.output is not None:
        logger.setup_file_logging(20 + 5 * (args.quiet - args.verbose))
    try:
        config.log_settings()
        use_eigensolver(config.eigensolver_kwargs)
        result = COMMANDS[config.command](config)
        return result if isinstance(result, int) else const.EXIT_OK
    except SizeGuardError:
        return const.EXIT_SIZE_GUARD
    finally:
        if config.output is not None:
            logger.update_location(f"{config.output}.log")
        logger.cleanup()
        logger.flush()


def cli():
    """ console script entry point """
    sys.exit(main())
