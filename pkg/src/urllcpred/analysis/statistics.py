"""
Statistical aggregation of Monte-Carlo seed results.

Turns per-seed RMSE and allocation summaries into the report tables:
RMSE per method (mean and std over seeds), achieved outage per target and
mean channel uses per target.
"""

import platform
from dataclasses import dataclass, field
from importlib import metadata
from typing import Any, Dict, List, Mapping, Sequence

import numpy as np
import pandas as pd

from ..config import ExperimentConfig, Method
from ..utils.file_helpers import sha256_json

SEED_COLUMNS = [
    "seed", "method", "target_eps", "rmse",
    "mean_achieved_eps", "mean_channel_uses", "violation_rate", "n_steps",
]
VERSIONED_PACKAGES = ("numpy", "scipy", "pandas", "matplotlib", "loguru")


@dataclass
class ExperimentReport:
    """Aggregated outcome of one experiment."""
    rmse_table: pd.DataFrame
    outage_curve: pd.DataFrame
    resource_curve: pd.DataFrame
    per_seed: pd.DataFrame
    metadata: Dict[str, Any] = field(default_factory=dict)

    @property
    def methods(self) -> List[str]:
        return list(self.rmse_table["method"])

    def curve(self, method: Method, column: str = "mean_achieved_eps") -> pd.Series:
        """One method's curve indexed by target_eps."""
        source = self.resource_curve if column == "mean_channel_uses" else self.outage_curve
        rows = source[source["method"] == Method(method).value]
        return rows.set_index("target_eps")[column]


def package_versions() -> Dict[str, str]:
    """Versions of the numerical stack, for the manifest."""
    from .. import __version__

    versions = {"python": platform.python_version(), "urllcpred": __version__}
    for name in VERSIONED_PACKAGES:
        try:
            versions[name] = metadata.version(name)
        except metadata.PackageNotFoundError:
            versions[name] = "unknown"
    return versions


def seed_rows(seed: int, rmse_by_method: Mapping[Method, float], allocation: Sequence[dict]) -> pd.DataFrame:
    """
    Long-format rows for one seed.

    Args:
        seed: Monte-Carlo seed.
        rmse_by_method: RMSE of each method's validation predictions.
        allocation: Dicts with method, target_eps and the allocation summary.

    Returns:
        DataFrame with SEED_COLUMNS.
    """
    rows = []
    for entry in allocation:
        method = Method(entry["method"])
        rows.append({
            "seed": seed,
            "method": method.value,
            "target_eps": entry["target_eps"],
            "rmse": rmse_by_method[method],
            "mean_achieved_eps": entry["mean_achieved_eps"],
            "mean_channel_uses": entry["mean_channel_uses"],
            "violation_rate": entry["violation_rate"],
            "n_steps": entry["n_steps"],
        })
    return pd.DataFrame(rows, columns=SEED_COLUMNS)


def _weighted_mean(values: pd.Series, weights: pd.Series) -> float:
    return float(np.average(values.to_numpy(), weights=weights.to_numpy()))


def compute_rmse_table(per_seed: pd.DataFrame, methods: Sequence[Method]) -> pd.DataFrame:
    """
    RMSE per method: mean and population std over seeds.

    Returns:
        DataFrame with columns method, rmse_mean, rmse_std, n_seeds.
    """
    one_per_seed = per_seed.drop_duplicates(subset=["seed", "method"])
    rows = []
    for method in methods:
        values = one_per_seed.loc[one_per_seed["method"] == method.value, "rmse"].to_numpy()
        rows.append({
            "method": method.value,
            "rmse_mean": float(np.mean(values)),
            "rmse_std": float(np.std(values)),
            "n_seeds": int(values.size),
        })
    return pd.DataFrame(rows)


def compute_curves(
    per_seed: pd.DataFrame,
    methods: Sequence[Method],
    target_eps_list: Sequence[float],
) -> tuple:
    """
    Achieved-outage and resource curves.

    Means run over every validation step of every seed, i.e. per-seed means
    weighted by their step counts.

    Returns:
        (outage_curve, resource_curve) DataFrames, one row per method and
        target in configuration order.
    """
    outage, resources = [], []
    for method in methods:
        for eps in target_eps_list:
            rows = per_seed[(per_seed["method"] == method.value) & (per_seed["target_eps"] == eps)]
            outage.append({
                "method": method.value,
                "target_eps": eps,
                "mean_achieved_eps": _weighted_mean(rows["mean_achieved_eps"], rows["n_steps"]),
                "violation_rate": _weighted_mean(rows["violation_rate"], rows["n_steps"]),
            })
            resources.append({
                "method": method.value,
                "target_eps": eps,
                "mean_channel_uses": _weighted_mean(rows["mean_channel_uses"], rows["n_steps"]),
            })
    return pd.DataFrame(outage), pd.DataFrame(resources)


def build_report(
    config: ExperimentConfig,
    per_seed: pd.DataFrame,
    failed_seeds: Mapping[int, str],
) -> ExperimentReport:
    """
    Assemble the report from the rows of every successful seed.

    Args:
        config: The experiment configuration.
        per_seed: Concatenated ``seed_rows`` output.
        failed_seeds: Seed -> failure message for aborted seeds.

    Returns:
        ExperimentReport.
    """
    per_seed = per_seed.sort_values(["seed"], kind="stable").reset_index(drop=True)
    outage, resources = compute_curves(per_seed, config.methods, config.target_eps_list)
    config_echo = config.to_dict()
    meta = {
        "config": config_echo,
        "config_sha256": sha256_json(config_echo),
        "seeds": sorted(int(s) for s in per_seed["seed"].unique()),
        "failed_seeds": {str(k): v for k, v in sorted(failed_seeds.items())},
        "complete": not failed_seeds,
        "versions": package_versions(),
    }
    return ExperimentReport(
        rmse_table=compute_rmse_table(per_seed, config.methods),
        outage_curve=outage,
        resource_curve=resources,
        per_seed=per_seed,
        metadata=meta,
    )
