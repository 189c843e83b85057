"""Run reports: JSON summaries, per-generation CSV history, and the
convergence figure rendered next to the delimited output."""

from __future__ import annotations

import csv
import dataclasses
import json

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

from .errors import IoFailure
from .ga import GAConfig, SearchHistory

HISTORY_FIELDS = ["generation", "best_C", "mean_C", "best_E", "best_shape"]


def format_shape(dims) -> str:
    return "x".join(str(int(n)) for n in dims)


def history_rows(history: SearchHistory) -> list[dict]:
    rows = []
    for record in history.records:
        rows.append(
            {
                "generation": record.generation,
                "best_C": record.best_compression,
                "mean_C": record.mean_compression,
                "best_E": record.best_error,
                "best_shape": format_shape(record.best_genome),
            }
        )
    return rows


def write_history_csv(history: SearchHistory, path) -> None:
    try:
        with open(path, "w", newline="") as handle:
            writer = csv.DictWriter(handle, fieldnames=HISTORY_FIELDS)
            writer.writeheader()
            for row in history_rows(history):
                writer.writerow(row)
    except OSError as exc:
        raise IoFailure(f"cannot write history {path}: {exc}") from exc


def render_convergence(history: SearchHistory, path, title: str | None = None) -> None:
    """Plot best and population-mean compression per generation to a file."""
    generations = [r.generation for r in history.records]
    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    ax.plot(
        generations,
        [r.best_compression for r in history.records],
        color="tab:blue",
        label="best",
    )
    ax.plot(
        generations,
        [r.mean_compression for r in history.records],
        color="tab:orange",
        linestyle="--",
        label="population mean",
    )
    ax.set_xlabel("generation")
    ax.set_ylabel("compression ratio")
    if title:
        ax.set_title(title)
    ax.grid(alpha=0.3)
    ax.legend()
    fig.tight_layout()
    try:
        # Fixed metadata keeps repeated runs byte-identical.
        fig.savefig(path, dpi=150, metadata={"Software": "ttshape"})
    except OSError as exc:
        raise IoFailure(f"cannot write figure {path}: {exc}") from exc
    finally:
        plt.close(fig)


def build_report(
    input_descriptor: dict,
    error_bound: float,
    mode: str,
    best_shape,
    compression: float,
    error: float,
    ranks,
    params: int,
    config: GAConfig | None = None,
    history: SearchHistory | None = None,
    archive: dict | None = None,
) -> dict:
    """Assemble the JSON-ready run summary.

    Wall time is deliberately absent: the file must come out byte-identical
    for identical seeds and flags, so timing goes to the console instead.
    """
    report = {
        "input": input_descriptor,
        "mode": mode,
        "error_bound": float(error_bound),
        "best_shape": [int(n) for n in best_shape],
        "compression_ratio": float(compression),
        "relative_error": float(error),
        "ranks": [int(r) for r in ranks],
        "param_count": int(params),
        "config": dataclasses.asdict(config) if config is not None else None,
        "history": history_rows(history) if history is not None else [],
        "archive": archive,
    }
    if history is not None:
        report["search"] = {
            "evaluations": int(history.evaluations),
            "cache_hits": int(history.cache_hits),
        }
    return report


def write_report(report: dict, path) -> None:
    try:
        with open(path, "w") as handle:
            json.dump(report, handle, indent=2, sort_keys=True)
            handle.write("\n")
    except OSError as exc:
        raise IoFailure(f"cannot write report {path}: {exc}") from exc
