"""Persistence: CSV point clouds, swirl-profile tables, and JSON reports.

Point clouds are UTF-8 CSV with a two-column header (``z1,z2`` for latent
clouds, ``x1,x2`` for observations) and 17 significant digits per value, so
float64 coordinates round-trip exactly.  Reports are JSON with the timestamp
isolated on its own line; everything else is a pure function of config and
seed, so repeated runs are byte-identical apart from that line.
"""

from __future__ import annotations

import csv
import json
from datetime import datetime, timezone
from pathlib import Path

import numpy as np
from numpy.typing import NDArray

from swirlaudit.audits import AuditReport, CoordRelationVerdict, support_overshoot
from swirlaudit.errors import EmptyDatasetError, MalformedRowError
from swirlaudit.transforms import Dataset

__all__ = [
    "write_cloud_csv",
    "read_cloud_csv",
    "load_external_cloud",
    "write_profile_csv",
    "build_report",
    "write_report_json",
]

CLOUD_HEADERS = ("z1,z2", "x1,x2")
SIGMA_PROXY_THRESHOLD = 1e-9
BOX_THRESHOLD = 1e-9


def _fmt(value: float) -> str:
    return f"{value:.17g}"


def write_cloud_csv(path: str | Path, points: NDArray[np.float64], header: str = "z1,z2") -> None:
    """Write a point cloud as CSV with round-trip-safe decimal formatting."""
    if header not in CLOUD_HEADERS:
        raise ValueError(f"header must be one of {CLOUD_HEADERS}, got {header!r}")
    pts = np.asarray(points, dtype=np.float64)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(header + "\n")
        for x, y in pts:
            fh.write(f"{_fmt(x)},{_fmt(y)}\n")


def read_cloud_csv(path: str | Path) -> tuple[NDArray[np.float64], str]:
    """Read a point cloud written by :func:`write_cloud_csv` (or compatible).

    Returns the ``(n, 2)`` array and the header line.  Rows that do not hold
    exactly two parseable floats raise :class:`MalformedRowError` with the
    offending row number.
    """
    rows = []
    with open(path, "r", encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        try:
            header_fields = next(reader)
        except StopIteration:
            raise EmptyDatasetError(f"{path}: file is empty") from None
        header = ",".join(f.strip() for f in header_fields)
        if header not in CLOUD_HEADERS:
            raise MalformedRowError(
                f"{path}: row 1: expected header {CLOUD_HEADERS[0]!r} or "
                f"{CLOUD_HEADERS[1]!r}, got {header!r}"
            )
        for lineno, fields in enumerate(reader, start=2):
            if not fields:
                continue
            if len(fields) != 2:
                raise MalformedRowError(
                    f"{path}: row {lineno}: expected 2 columns, got {len(fields)}"
                )
            try:
                rows.append((float(fields[0]), float(fields[1])))
            except ValueError:
                raise MalformedRowError(
                    f"{path}: row {lineno}: cannot parse {fields!r} as two reals"
                ) from None
    if not rows:
        raise EmptyDatasetError(f"{path}: no data rows")
    return np.array(rows, dtype=np.float64), header


def load_external_cloud(path: str | Path, label: str) -> Dataset:
    """Load a user-supplied point cloud as a dataset (seed recorded as 0)."""
    points, _ = read_cloud_csv(path)
    return Dataset(points=points, label=label, seed=0)


def write_profile_csv(path: str | Path, profile: NDArray) -> None:
    """Write a swirl-profile table (structured array) as CSV."""
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("r_lo,r_hi,r_mean,count,mean_angle\n")
        for row in profile:
            fh.write(
                f"{_fmt(row['r_lo'])},{_fmt(row['r_hi'])},{_fmt(row['r_mean'])},"
                f"{int(row['count'])},{_fmt(row['mean_angle'])}\n"
            )


def _relation_dict(verdict: CoordRelationVerdict) -> dict:
    return {
        "verdict": verdict.verdict,
        "threshold": verdict.threshold,
        "best_assignment": list(verdict.best_assignment),
        "best_max_score": verdict.best_max_score,
        "monotonicity": list(verdict.monotonicity),
        "assignments": [
            {
                "perm": list(a.perm),
                "scores_zprime_to_z": list(a.zprime_to_z),
                "scores_z_to_zprime": list(a.z_to_zprime),
                "max_score": a.max_score,
            }
            for a in verdict.assignments
        ],
    }


def build_report(
    report: AuditReport,
    *,
    tool_version: str,
    config_dict: dict | None = None,
    skipped_premises: dict[str, str] | None = None,
    timestamp: str | None = None,
) -> dict:
    """Assemble the machine-readable report document.

    ``skipped_premises`` maps premise names to the reason they were not run
    (used when auditing external clouds, where no analytic maps exist).
    """
    skipped = skipped_premises or {}
    expected = np.array([[-1.0, 1.0], [-1.0, 1.0]])

    def premise(name, passed, statistic, threshold, **extra):
        entry = {"name": name, "pass": passed, "statistic": statistic, "threshold": threshold}
        if name in skipped:
            entry.update({"pass": None, "statistic": None, "note": skipped[name]})
        entry.update(extra)
        return entry

    premises = [
        premise("continuity", report.continuity_pass, report.continuity_max_ratio,
                report.parameters.get("l_max")),
        premise("sigma-algebra", report.sigma_algebra_pass, report.sigma_algebra_max_error,
                SIGMA_PROXY_THRESHOLD),
        premise("compact-support", report.compact_support_pass,
                support_overshoot(report.support_box, expected), BOX_THRESHOLD,
                box=report.support_box.tolist()),
        premise("independent-support-Z", report.independent_support_pass_z,
                report.independent_support_fraction_z, 1.0),
        premise("independent-support-Zprime", report.independent_support_pass_zprime,
                report.independent_support_fraction_zprime, 1.0),
    ]
    return {
        "tool": "swirlaudit",
        "version": tool_version,
        "timestamp": timestamp or datetime.now(timezone.utc).isoformat(),
        "seed": report.parameters.get("seed"),
        "parameters": config_dict if config_dict is not None else dict(report.parameters),
        "premises": premises,
        "uniformity_pvalue": report.uniformity_pvalue_zprime,
        "uniformity_alpha": report.uniformity_alpha,
        "relation": _relation_dict(report.conclusion),
        "counterexample_certified": report.counterexample_certified,
    }


def write_report_json(path: str | Path, document: dict) -> None:
    """Write the report with a stable layout (timestamp on its own line)."""
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        json.dump(document, fh, indent=2)
        fh.write("\n")
