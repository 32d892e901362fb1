"""Loading and validation of the benchmark event CSV."""

from __future__ import annotations

import os

import pandas as pd

REQUIRED_COLUMNS = ["run_id", "algo", "n", "lambda1", "lambda2", "k", "d_switch",
                    "seed", "event_type", "evaluations", "fitness", "distance"]

EVENT_KINDS = {"improvement", "switch", "optimum", "budget_exhausted"}


class PlotDataError(ValueError):
    """Input data does not support the requested figure."""


def load_events(paths: list[str]) -> pd.DataFrame:
    """Read one or more event CSVs into a single frame, schema-checked."""
    frames = []
    for path in paths:
        if not os.path.exists(path):
            raise PlotDataError(f"input CSV not found: {path}")
        df = pd.read_csv(path)
        missing = [c for c in REQUIRED_COLUMNS if c not in df.columns]
        if missing:
            raise PlotDataError(f"{path}: missing columns {missing}")
        unknown = set(df["event_type"].unique()) - EVENT_KINDS
        if unknown:
            raise PlotDataError(f"{path}: unknown event types {sorted(unknown)}")
        df["source"] = path
        frames.append(df)
    out = pd.concat(frames, ignore_index=True)
    for col in ("n", "evaluations", "fitness", "distance"):
        out[col] = out[col].astype("int64")
    return out


def optimum_events(df: pd.DataFrame) -> pd.DataFrame:
    return df[df["event_type"] == "optimum"]


def switch_events(df: pd.DataFrame) -> pd.DataFrame:
    return df[df["event_type"] == "switch"]
