"""Report containers with deterministic JSON and CSV serialization.

CSV column order is part of the public contract:

* sweep: ``frequency, period, mean, std, n_scored, n_skipped`` (one row per
  frequency, ascending, then a ``baseline`` row)
* similarity: ``item, stylized, content, directional_loss,
  patch_contribution, rejected, cosine_style, projected_style, degenerate,
  error``
"""

import csv
import io
import json
import math
from dataclasses import dataclass, field

import numpy as np

from .bands import format_period, period_of

SWEEP_COLUMNS = ("frequency", "period", "mean", "std", "n_scored", "n_skipped")
SIMILARITY_COLUMNS = (
    "item",
    "stylized",
    "content",
    "directional_loss",
    "patch_contribution",
    "rejected",
    "cosine_style",
    "projected_style",
    "degenerate",
    "error",
)


def mean_std(values):
    """Mean and population std of the finite entries; NaNs when there are none."""
    values = [v for v in values if v is not None and not math.isnan(v)]
    if not values:
        return float("nan"), float("nan")
    return float(np.mean(values)), float(np.std(values))


def _clean(value):
    if isinstance(value, float) and math.isnan(value):
        return None
    if isinstance(value, (np.floating,)):
        return _clean(float(value))
    if isinstance(value, (np.integer,)):
        return int(value)
    return value


def _csv_cell(value):
    value = _clean(value)
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    return repr(value) if isinstance(value, float) else str(value)


def _dump_json(obj):
    return json.dumps(obj, indent=2, ensure_ascii=False, allow_nan=False) + "\n"


def _dump_csv(columns, rows):
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([_csv_cell(row.get(c)) for c in columns])
    return buf.getvalue()


@dataclass
class SweepReport:
    n: int
    rows: list  # of similarity.SweepRow, baseline last
    metadata: dict = field(default_factory=dict)
    ranking: list = field(default_factory=list)  # (combination, mean, n_skipped)

    def records(self):
        out = []
        for row in self.rows:
            if row.is_baseline:
                freq, period = "baseline", None
            else:
                freq, period = row.frequency, format_period(period_of(row.frequency, self.n))
            out.append(
                {
                    "frequency": freq,
                    "period": period,
                    "mean": _clean(row.mean),
                    "std": _clean(row.std),
                    "n_scored": row.n_scored,
                    "n_skipped": row.n_skipped,
                }
            )
        return out

    def to_json(self):
        return _dump_json(
            {
                "kind": "frequency_sweep",
                "metadata": {k: _clean(v) for k, v in self.metadata.items()},
                "rows": self.records(),
                "combination_ranking": [
                    {"combination": name, "mean": _clean(mean), "n_skipped": skipped}
                    for name, mean, skipped in self.ranking
                ],
            }
        )

    def to_csv(self):
        return _dump_csv(SWEEP_COLUMNS, self.records())


@dataclass
class SimilarityReport:
    items: list  # dicts keyed by SIMILARITY_COLUMNS
    metadata: dict = field(default_factory=dict)
    patch_total: float = float("nan")

    def summary(self):
        out = {}
        for key in ("directional_loss", "cosine_style", "projected_style"):
            mean, std = mean_std([item.get(key) for item in self.items])
            out[key] = {"mean": _clean(mean), "std": _clean(std)}
        out["patch_loss_total"] = _clean(self.patch_total)
        out["n_items"] = len(self.items)
        out["n_degenerate"] = sum(bool(item.get("degenerate")) for item in self.items)
        return out

    def to_json(self):
        return _dump_json(
            {
                "kind": "similarity",
                "metadata": {k: _clean(v) for k, v in self.metadata.items()},
                "items": [{c: _clean(item.get(c)) for c in SIMILARITY_COLUMNS} for item in self.items],
                "summary": self.summary(),
            }
        )

    def to_csv(self):
        return _dump_csv(SIMILARITY_COLUMNS, self.items)
