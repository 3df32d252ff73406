"""
Runtime scaling of the solver on sparse random connected graphs.

Times `solve()` across graph sizes and fits a log-log slope, which should stay well below
the degree-7 polynomial ceiling.
"""

from __future__ import annotations

import logging
import time
from collections.abc import Sequence
from pathlib import Path

import matplotlib.pyplot as plt
import numpy as np
import pandas as pd
from scipy import stats

from dire_vertex_cover.config_loader import load_section
from dire_vertex_cover.harness import RunReport, gen_random_connected
from dire_vertex_cover.solver import SolverConfig, solve

logger = logging.getLogger(__name__)

plt.style.use("seaborn-v0_8-whitegrid")
plt.rcParams["font.size"] = 11


def median_table(df: pd.DataFrame) -> pd.DataFrame:
    """Median seconds, edges and cover size per graph size."""
    if df.empty:
        return pd.DataFrame(columns=["m", "edges", "seconds", "cover_size"])
    return (
        df.groupby("m", as_index=False)[["edges", "seconds", "cover_size"]]
        .median()
        .sort_values("m")
        .reset_index(drop=True)
    )


def fit_loglog_slope(df: pd.DataFrame) -> float | None:
    """
    Slope of log(median seconds) against log(m).

    Returns None when fewer than two sizes have a positive median timing.
    """
    medians = median_table(df)
    medians = medians[(medians["seconds"] > 0) & (medians["m"] > 0)]
    if len(medians) < 2:
        return None
    fit = stats.linregress(np.log(medians["m"].astype(float)), np.log(medians["seconds"]))
    return float(fit.slope)


def scaling_bench(
    sizes: Sequence[int] | None = None,
    trials: int | None = None,
    edge_probability: float | None = None,
    rng_seed: int = 0,
    config: SolverConfig | None = None,
) -> RunReport:
    """
    Time solve() on `trials` random connected graphs per size.

    Args:
        sizes: Vertex counts (default scaling.sizes)
        trials: Graphs per size (default scaling.trials)
        edge_probability: Extra-edge probability (default scaling.edge_probability)
        rng_seed: Base seed; graph (size index i, trial t) uses seed [rng_seed, i, t]
        config: Solver settings

    Returns:
        RunReport whose scaling_samples hold (m, trial, edges, seconds, cover_size) rows,
        with the fitted slope and whether it stays under scaling.slope_ceiling
    """
    section = load_section("scaling")
    sizes = list(section["sizes"] if sizes is None else sizes)
    trials = int(section["trials"] if trials is None else trials)
    edge_probability = float(
        section["edge_probability"] if edge_probability is None else edge_probability
    )
    ceiling = float(section.get("slope_ceiling", 7.0))
    config = config or SolverConfig.from_config()

    samples = []
    for i, m in enumerate(sizes):
        for trial in range(trials):
            seed = int(np.random.SeedSequence([rng_seed, i, trial]).generate_state(1)[0])
            g = gen_random_connected(m, edge_probability, seed)
            start = time.perf_counter()
            result = solve(g, config)
            seconds = time.perf_counter() - start
            samples.append(
                {
                    "m": m,
                    "trial": trial,
                    "edges": g.n,
                    "seconds": seconds,
                    "cover_size": result.size,
                }
            )
            logger.debug("m=%d trial=%d: %.4fs, cover %d", m, trial, seconds, result.size)

    report = RunReport(
        instances={"scaling": len(samples)} if samples else {},
        seconds=[s["seconds"] for s in samples],
        scaling_samples=samples,
    )
    report.slope = fit_loglog_slope(report.samples_frame())
    report.polynomial_consistent = report.slope is not None and report.slope < ceiling
    return report


def create_charts(df: pd.DataFrame, output_dir: Path | str | None = None) -> Path | None:
    """
    Log-log chart of solve() time against vertex count.

    Args:
        df: Scaling samples (RunReport.samples_frame())
        output_dir: Directory to save the chart (if None, displays instead)
    """
    medians = median_table(df)
    fig, ax = plt.subplots(figsize=(8, 5))
    ax.loglog(df["m"], df["seconds"], "o", color="#9aa5b1", alpha=0.6, label="Trials")
    ax.loglog(medians["m"], medians["seconds"], "o-", color="#003087", linewidth=2, label="Median")

    slope = fit_loglog_slope(df)
    if slope is not None:
        ax.set_title(f"Solver Runtime Scaling (log-log slope {slope:.2f})", fontweight="bold")
    else:
        ax.set_title("Solver Runtime Scaling", fontweight="bold")
    ax.set_xlabel("Vertices (m)", fontsize=12, fontweight="bold")
    ax.set_ylabel("Seconds", fontsize=12, fontweight="bold")
    ax.grid(True, alpha=0.3)
    ax.legend()

    plt.tight_layout()
    saved = None
    if output_dir:
        output_dir = Path(output_dir)
        output_dir.mkdir(parents=True, exist_ok=True)
        saved = output_dir / "scaling.png"
        plt.savefig(saved, dpi=150, bbox_inches="tight")
        print(f"Saved: {saved}")
    else:
        plt.show()
    plt.close(fig)
    return saved
