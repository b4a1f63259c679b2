#!/usr/bin/env python
"""
Main analysis runner script.

Run the complete interference-prediction and allocation experiment.
Pass a preset name or config file as the only argument (default: default).
"""

import sys
from pathlib import Path

# Add src to path
sys.path.insert(0, str(Path(__file__).parent / "src"))

from urllcpred.config import get_paths, load_config
from urllcpred.core.processors import run_experiment
from urllcpred.analysis.report import emit_report
from urllcpred.utils.logging_config import setup_logging, log


def main(source: str = "default"):
    """Run the complete analysis pipeline."""
    setup_logging(level="INFO")

    log.info("=" * 60)
    log.info("Interference Prediction / URLLC Allocation Experiment")
    log.info("=" * 60)

    paths = get_paths()
    config = load_config(source)
    output_dir = paths.root / config.output_dir

    log.info(f"Project root: {paths.root}")
    log.info(f"Config: {source}")
    log.info(f"Output directory: {output_dir}")

    log.info("")
    log.info("=" * 60)
    log.info("Step 1: Monte-Carlo Runs")
    log.info("=" * 60)

    report = run_experiment(config)

    log.info("")
    log.info("=" * 60)
    log.info("Step 2: Prediction Error")
    log.info("=" * 60)
    log.info("\n" + report.rmse_table.to_string(index=False))

    log.info("")
    log.info("=" * 60)
    log.info("Step 3: Achieved Outage and Resources")
    log.info("=" * 60)
    log.info("\n" + report.outage_curve.to_string(index=False))
    log.info("\n" + report.resource_curve.to_string(index=False))

    emit_report(report, output_dir)

    log.info("")
    log.info("=" * 60)
    log.info("Analysis Complete!")
    log.info("=" * 60)
    log.info(f"Results saved to: {output_dir}")

    return report


if __name__ == "__main__":
    main(sys.argv[1] if len(sys.argv) > 1 else "default")
