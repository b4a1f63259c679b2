"""
Report emission.

Writes the experiment tables as CSV, the two charts as SVG and a JSON
manifest with the configuration echo and content hashes. Every file is
byte-stable for a given report.
"""

import json
from pathlib import Path
from typing import Dict

from ..data.loaders import write_frame
from ..utils.file_helpers import ensure_dir, sha256_file, write_text_lf
from ..utils.logging_config import log
from ..visualisation.charts import plot_outage_curve, plot_resource_curve
from .statistics import ExperimentReport


def emit_report(report: ExperimentReport, output_dir: Path) -> Dict[str, Path]:
    """
    Write all report artifacts.

    Args:
        report: Aggregated experiment report.
        output_dir: Destination directory, created if needed.

    Returns:
        Mapping of artifact name to path.

    Raises:
        OSError: If the directory cannot be written.
    """
    output_dir = ensure_dir(Path(output_dir))
    paths = {
        "rmse.csv": write_frame(report.rmse_table, output_dir / "rmse.csv"),
        "outage.csv": write_frame(report.outage_curve, output_dir / "outage.csv"),
        "resources.csv": write_frame(report.resource_curve, output_dir / "resources.csv"),
        "per_seed.csv": write_frame(report.per_seed, output_dir / "per_seed.csv"),
    }
    plot_outage_curve(report.outage_curve, output_dir=output_dir)
    plot_resource_curve(report.resource_curve, output_dir=output_dir)
    paths["outage.svg"] = output_dir / "outage.svg"
    paths["resources.svg"] = output_dir / "resources.svg"

    manifest = dict(report.metadata)
    manifest["files"] = {
        name: sha256_file(path) for name, path in sorted(paths.items()) if name.endswith(".csv")
    }
    paths["manifest.json"] = write_text_lf(
        output_dir / "manifest.json",
        json.dumps(manifest, indent=2, sort_keys=True, default=str) + "\n",
    )
    log.info(f"Report written to {output_dir}")
    return paths
