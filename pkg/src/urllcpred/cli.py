"""
Command-line interface.

    urllcpred simulate  --config smoke --seed 3 --out run/
    urllcpred decompose run/trace.csv --out run/
    urllcpred predict   run/trace.csv --config smoke --out run/
    urllcpred allocate  run/predictions.csv --config smoke --out run/
    urllcpred evaluate  --config table1_preset --out results/

Exit status is 0 on success, 1 on a failed run (with a diagnostic on
stderr) and 2 on a usage error.
"""

import argparse
import dataclasses
import sys
from pathlib import Path
from typing import List, Optional

import pandas as pd

from .config import ConfigError, ExperimentConfig, Method, TrainValSplit, get_paths, load_config
from .data.validators import InvalidArgumentError

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_USAGE = 2


def _configure(args: argparse.Namespace) -> ExperimentConfig:
    config = load_config(args.config)
    changes = {}
    if args.seed is not None:
        changes["link"] = config.link.with_seed(args.seed)
    if args.out is not None:
        changes["output_dir"] = Path(args.out)
    else:
        changes["output_dir"] = get_paths().resolve_output(config.output_dir)
    if getattr(args, "methods", None):
        changes["methods"] = tuple(Method(m) for m in args.methods)
    try:
        return dataclasses.replace(config, **changes)
    except InvalidArgumentError as exc:
        raise ConfigError(str(exc)) from exc


def cmd_simulate(args: argparse.Namespace, config: ExperimentConfig) -> None:
    from .core.channel import gen_interference_trace, summarise_trace
    from .data.loaders import save_trace, write_frame
    from .utils.logging_config import log

    trace = gen_interference_trace(config.link)
    out = config.output_dir
    save_trace(trace, out / "trace.csv")
    write_frame(summarise_trace(trace), out / "trace_summary.csv")
    log.info(f"Simulated {len(trace)} samples (seed {config.link.rng_seed}) into {out}")


def cmd_decompose(args: argparse.Namespace, config: ExperimentConfig) -> None:
    from .core.emd import decompose, imf_diagnostics
    from .data.loaders import load_trace, save_decomposition, write_frame
    from .utils.logging_config import log

    trace = load_trace(args.trace)
    imf_set = decompose(trace.samples, config.sift)
    out = config.output_dir
    save_decomposition(trace.samples, imf_set, out / "decomposition.csv")
    write_frame(imf_diagnostics(imf_set), out / "imf_diagnostics.csv")
    log.info(f"Decomposed into {len(imf_set.imfs)} IMFs plus residual")


def cmd_predict(args: argparse.Namespace, config: ExperimentConfig) -> None:
    from .data.loaders import load_trace, save_predictions, write_frame
    from .forecasting.rolling import forecast_method
    from .utils.logging_config import log

    trace = load_trace(args.trace)
    split = TrainValSplit.from_fraction(len(trace), config.train_fraction)
    results = []
    for method in config.methods:
        log.info(f"Predicting with {method.value}")
        results.append(forecast_method(trace, split, method, config=config))

    out = config.output_dir
    save_predictions(results, out / "predictions.csv")
    rmse = pd.DataFrame({"method": [r.method.value for r in results], "rmse": [r.rmse for r in results]})
    write_frame(rmse, out / "rmse.csv")
    log.info("\n" + rmse.to_string(index=False))


def cmd_allocate(args: argparse.Namespace, config: ExperimentConfig) -> None:
    from .core.fbl import allocate_series
    from .core.metrics import summarise_allocation
    from .data.loaders import load_predictions, save_allocations, write_frame
    from .utils.logging_config import log

    predictions = load_predictions(args.predictions)
    out = config.output_dir
    signal = config.link.desired_power if args.signal_power is None else args.signal_power
    t_offset = int(predictions["t"].iloc[0])

    summary = []
    for column in [c for c in predictions.columns if c.startswith("pred_")]:
        method = column[len("pred_"):]
        for eps in config.target_eps_list:
            records = allocate_series(
                predictions[column].to_numpy(),
                predictions["actual"].to_numpy(),
                signal,
                config.link.noise_power,
                config.payload_bits,
                eps,
                integer_R=config.integer_R,
                t_offset=t_offset,
            )
            save_allocations(records, method, out / f"allocation_{method}_eps{eps:g}.csv")
            summary.append({"method": method, "target_eps": eps, **summarise_allocation(records)})

    frame = pd.DataFrame(summary)
    write_frame(frame, out / "allocation_summary.csv")
    log.info("\n" + frame.to_string(index=False))


def cmd_evaluate(args: argparse.Namespace, config: ExperimentConfig) -> None:
    from .analysis.report import emit_report
    from .core.processors import run_experiment

    report = run_experiment(config)
    emit_report(report, config.output_dir)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", default=None, help="preset name, name of a file in configs/, or config file path")
    common.add_argument("--seed", type=int, default=None, help="override link.rng_seed")
    common.add_argument(
        "--out", default=None,
        help="output directory (default: the config's output_dir under the project root)",
    )
    common.add_argument("--log-level", default="INFO", choices=["DEBUG", "INFO", "WARNING", "ERROR"])
    common.add_argument("--log-file", default=None, help="also log to this file")

    parser = argparse.ArgumentParser(prog="urllcpred", description=__doc__.split("\n\n")[0].strip())
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", parents=[common], help="generate an interference trace")
    p.set_defaults(handler=cmd_simulate)

    p = sub.add_parser("decompose", parents=[common], help="EMD of a trace CSV")
    p.add_argument("trace", type=Path)
    p.set_defaults(handler=cmd_decompose)

    p = sub.add_parser("predict", parents=[common], help="rolling forecasts of a trace CSV")
    p.add_argument("trace", type=Path)
    p.add_argument("--methods", nargs="+", choices=[m.value for m in Method])
    p.set_defaults(handler=cmd_predict)

    p = sub.add_parser("allocate", parents=[common], help="allocate channel uses from predictions")
    p.add_argument("predictions", type=Path)
    p.add_argument("--signal-power", type=float, default=None, help="desired power S (linear)")
    p.set_defaults(handler=cmd_allocate)

    p = sub.add_parser("evaluate", parents=[common], help="full Monte-Carlo experiment")
    p.set_defaults(handler=cmd_evaluate)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    """
    Entry point.

    Args:
        argv: Arguments without the program name; defaults to sys.argv[1:].

    Returns:
        Process exit status.
    """
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_USAGE

    from .core.processors import ExperimentFailedError
    from .forecasting.recurrent import TrainingDivergedError
    from .forecasting.rolling import ForecastStepError
    from .utils.logging_config import log, setup_logging

    setup_logging(log_file=args.log_file, level=args.log_level, colorize=sys.stderr.isatty())
    try:
        config = _configure(args)
        args.handler(args, config)
    except (
        InvalidArgumentError,
        OSError,
        ForecastStepError,
        TrainingDivergedError,
        ExperimentFailedError,
    ) as exc:
        log.error(f"{args.command} failed: {exc}")
        return EXIT_FAILURE
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
