# cli.py
import argparse
import logging
import sys
from typing import Any, Dict, Optional

from l1sections.config import load_config
from l1sections.constants import (
    EXIT_FAILURE,
    EXIT_GUARD_EXCEEDED,
    EXIT_INFEASIBLE,
    EXIT_INTERRUPTED,
    EXIT_PARSE_ERROR,
    EXIT_SUCCESS,
)
from l1sections.exceptions import (
    ConfigurationError,
    DomainError,
    L1SectionsException,
    NumericalGuardError,
    ParameterInfeasibleError,
    ParsingError,
)
from l1sections.main import GRAPH_FAMILIES, SubspaceWorkbench, parse_s_grid
from l1sections.utils.logging import setup_logging
from l1sections.utils.validation import build_run_config

cli_logger = logging.getLogger("cli")


def parse_args(argv=None) -> argparse.Namespace:
    """Parse command line arguments."""
    parser = argparse.ArgumentParser(
        description="l1-sections: explicit low-distortion subspaces of l1 and their analysis",
        formatter_class=argparse.RawTextHelpFormatter,
    )
    parser.add_argument(
        "--config", "-c",
        type=str,
        help=(
            "Path to a specific YAML configuration file. \n"
            "If not provided, 'default.yaml' in the config directory is used, \n"
            "merged with an environment-specific file (e.g., 'development.yaml')."
        ),
    )
    parser.add_argument(
        "--env", "-e",
        type=str,
        default="development",
        help="Environment configuration to merge (development, production). Default: 'development'.",
    )

    subparsers = parser.add_subparsers(dest="command", help="Command to execute", required=True)

    construct_parser = subparsers.add_parser("construct", help="Build a check matrix and its certificate report.")
    construct_parser.add_argument("--N", dest="N", type=int, required=True, help="Ambient dimension.")
    construct_parser.add_argument("--eta", type=float, help="Row budget as a fraction of N (0 < eta <= 1).")
    construct_parser.add_argument(
        "--mode", type=str, default="thm1-explicit",
        help="thm1-explicit (deterministic) or thm2-seeded (needs --seed).",
    )
    construct_parser.add_argument("--seed", type=int, help="Seed of the sign stream, seeded mode only.")
    construct_parser.add_argument("--beta0", type=float, help="Schedule exponent beta0.")
    construct_parser.add_argument("--eps", dest="epsilon_schedule", type=float, help="First schedule point t_0.")
    construct_parser.add_argument("--xi0", dest="xi0_assumed", type=float, help="Assumed sum-product exponent.")
    construct_parser.add_argument("--degree", type=int, help="Spectral degree override for seeded mode.")
    construct_parser.add_argument("--out", type=str, help="Output stem; .check and .report are appended.")

    analyze_parser = subparsers.add_parser("analyze", help="Kernel, spread and distortion report for a CHECK file.")
    analyze_parser.add_argument("matrix", type=str, help="CHECK file to analyze.")
    analyze_parser.add_argument("--out", type=str, help="Report path (default: <matrix>.analysis).")
    analyze_parser.add_argument("--max-analysis-n", dest="max_analysis_n", type=int,
                                help="Largest N analyzed with dense factorizations.")
    analyze_parser.add_argument("--enum-budget", dest="enum_budget", type=int,
                                help="Largest number of subsets enumerated exactly.")

    graph_parser = subparsers.add_parser("graph", help="Export a bipartite expander and its profile report.")
    graph_parser.add_argument("family", choices=GRAPH_FAMILIES, help="Graph family.")
    graph_parser.add_argument("--N", dest="N", type=int, help="Left vertices (cycle: vertex count).")
    graph_parser.add_argument("--d", type=int, help="Target right degree (spectral).")
    graph_parser.add_argument("--p", type=int, help="LPS generator prime.")
    graph_parser.add_argument("--q", type=int, help="LPS field prime.")
    graph_parser.add_argument("--xi0", type=float, default=None, help="Assumed sum-product exponent.")
    graph_parser.add_argument("--out", type=str, help="Output stem; .graph and .report are appended.")

    csdemo_parser = subparsers.add_parser("csdemo", help="Sparse recovery curve by basis pursuit.")
    csdemo_parser.add_argument("matrix", type=str, help="CHECK file used as encoder.")
    csdemo_parser.add_argument("--s-grid", dest="s_grid", type=str, default="0,1,2",
                               help="Support sizes, e.g. '0,1,2' or '1-8'.")
    csdemo_parser.add_argument("--trials", type=int, default=20, help="Trials per support size.")
    csdemo_parser.add_argument("--seed", type=int, default=0, help="Experiment seed.")
    csdemo_parser.add_argument("--noise", type=float, default=0.0, help="l1 mass of the dense perturbation.")
    csdemo_parser.add_argument("--out", type=str, help="Curve path (default: <matrix>.curve).")

    return parser.parse_args(argv)


def _overrides(args: argparse.Namespace) -> Dict[str, Any]:
    keys = ("N", "eta", "mode", "seed", "beta0", "epsilon_schedule", "xi0_assumed", "degree", "out",
            "max_analysis_n", "enum_budget")
    return {key: getattr(args, key) for key in keys if hasattr(args, key)}


def main_cli(argv=None) -> int:
    """Main entry point for the CLI."""
    args = parse_args(argv)
    effective_config_path: Optional[str] = args.config
    effective_env: Optional[str] = args.env if not args.config else None

    temp_log_config = {"level": "INFO", "console": True, "format": "%(asctime)s [%(levelname)s] %(name)s - %(message)s"}
    try:
        config = load_config(config_path=effective_config_path, env=effective_env)
        _ = setup_logging(config.get("logging", temp_log_config))
        cli_logger.info(f"Logging configured using: {effective_config_path or 'default config with env ' + (effective_env or 'none')}.")
    except ConfigurationError as e:
        _ = setup_logging(temp_log_config)
        cli_logger.error(f"Configuration error: {e}")
        return EXIT_INFEASIBLE

    cli_logger.info(f"l1-sections starting with command: '{args.command}'")
    cli_logger.debug(f"Full arguments: {args}")

    try:
        run = build_run_config(args.command, config, _overrides(args))
        workbench = SubspaceWorkbench(config)

        if args.command == "construct":
            result = workbench.construct(run)
            print(f"CHECK {result.assembly.rows} {run.N} -> {result.check_path} (digest {result.digest})")

        elif args.command == "analyze":
            report = workbench.analyze(args.matrix, run, report_path=args.out)
            print(f"dim={report.get('dim')} delta_lower={report.get('delta_lower')} "
                  f"delta_upper={report.get('delta_upper')}")

        elif args.command == "graph":
            xi0 = args.xi0 if args.xi0 is not None else run.xi0_assumed
            report = workbench.graph(args.family, out=args.out, N=args.N, p=args.p, q=args.q, d=args.d, xi0=xi0)
            print(report["header"])

        elif args.command == "csdemo":
            curve = workbench.csdemo(
                args.matrix, parse_s_grid(args.s_grid), args.trials, args.seed,
                noise_level=args.noise, out=args.out, workers=run.workers,
            )
            print(f"largest s with rate >= 0.99: {curve.largest_reliable()}")

        cli_logger.info(f"Command '{args.command}' completed successfully.")
        return EXIT_SUCCESS

    except KeyboardInterrupt:
        cli_logger.info("Keyboard interrupt received. Shutting down...")
        return EXIT_INTERRUPTED
    except (ParameterInfeasibleError, DomainError, ConfigurationError) as e:
        cli_logger.error(f"Infeasible request: {e}")
        return EXIT_INFEASIBLE
    except ParsingError as e:
        cli_logger.error(f"Could not parse input: {e}")
        return EXIT_PARSE_ERROR
    except NumericalGuardError as e:
        cli_logger.error(f"Numerical guard exceeded: {e}")
        return EXIT_GUARD_EXCEEDED
    except L1SectionsException as e:
        cli_logger.error(f"An l1-sections error occurred: {e}", exc_info=True)
        return EXIT_FAILURE
    except Exception as e:
        cli_logger.error(f"An unexpected error occurred: {e}", exc_info=True)
        return EXIT_FAILURE
    finally:
        cli_logger.info("l1-sections CLI finished.")


if __name__ == "__main__":
    sys.exit(main_cli())
