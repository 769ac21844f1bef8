"""Point-cloud figures: the radial swirl profile and self-contained SVG scatters.

The swirl profile is the empirical signature of the radius-dependent
rotation: the mean angular displacement between paired points as a function
of their radius.  For the pipeline it should trace ``a * (r - c)`` inside the
cutoff radius and vanish outside.
"""

from __future__ import annotations

import math
from pathlib import Path

import numpy as np
from numpy.typing import ArrayLike, NDArray

from swirlaudit.errors import PairingError
from swirlaudit.transforms import Dataset

__all__ = ["swirl_profile", "render_scatter_svg", "PROFILE_COLUMNS"]

PROFILE_COLUMNS = ("r_lo", "r_hi", "r_mean", "count", "mean_angle")

_PROFILE_DTYPE = np.dtype(
    [
        ("r_lo", np.float64),
        ("r_hi", np.float64),
        ("r_mean", np.float64),
        ("count", np.int64),
        ("mean_angle", np.float64),
    ]
)


def angular_displacement(z: ArrayLike, zp: ArrayLike) -> NDArray[np.float64]:
    """Signed angle from each point of ``z`` to its pair in ``zp``, in (-pi, pi].

    Computed as ``atan2(z x z', z . z')``, which is exact zero for untouched
    points (the cross product of a point with itself cancels exactly).
    """
    z = np.asarray(z, dtype=np.float64)
    zp = np.asarray(zp, dtype=np.float64)
    cross = z[:, 0] * zp[:, 1] - z[:, 1] * zp[:, 0]
    dot = z[:, 0] * zp[:, 0] + z[:, 1] * zp[:, 1]
    return np.arctan2(cross, dot)


def swirl_profile(Z: Dataset, Zp: Dataset, bin_width: float = 0.01) -> NDArray:
    """Mean angular displacement between paired clouds, binned by radius.

    Per-point displacements are unwrapped along decreasing radius (anchored
    at the outermost points, which a swirl leaves fixed), so rotations larger
    than half a turn near the origin are reported with their true magnitude
    rather than their wrapped remainder.

    Returns a structured array with fields ``r_lo, r_hi, r_mean, count,
    mean_angle`` covering radii from 0 to just past ``sqrt(2)``; empty bins
    carry ``count = 0`` and NaN means.
    """
    if Z.n != Zp.n:
        raise PairingError(f"datasets are not paired: {Z.n} vs {Zp.n} points")
    if not bin_width > 0.0:
        raise ValueError(f"bin width must be positive, got {bin_width}")
    radii = Z.radii()
    wrapped = angular_displacement(Z.points, Zp.points)
    order = np.argsort(radii, kind="stable")[::-1]
    unwrapped = np.empty_like(wrapped)
    unwrapped[order] = np.unwrap(wrapped[order])

    n_bins = math.ceil(math.sqrt(2.0) / bin_width)
    edges = np.linspace(0.0, n_bins * bin_width, n_bins + 1)
    idx = np.clip(np.digitize(radii, edges) - 1, 0, n_bins - 1)
    counts = np.bincount(idx, minlength=n_bins)
    with np.errstate(invalid="ignore"):
        angle_mean = np.bincount(idx, weights=unwrapped, minlength=n_bins) / counts
        radius_mean = np.bincount(idx, weights=radii, minlength=n_bins) / counts

    table = np.empty(n_bins, dtype=_PROFILE_DTYPE)
    table["r_lo"] = edges[:-1]
    table["r_hi"] = edges[1:]
    table["r_mean"] = radius_mean
    table["count"] = counts
    table["mean_angle"] = angle_mean
    return table


def render_scatter_svg(
    points: ArrayLike,
    path: str | Path,
    axis_range: tuple[float, float] = (-1.05, 1.05),
    title: str = "",
    size_px: int = 560,
    point_radius: float = 1.3,
) -> None:
    """Write a standalone SVG scatter of a 2-D point cloud.

    No plotting library involved: each point becomes one ``<circle>`` inside
    a framed square viewport mapping ``axis_range`` on both axes.
    """
    pts = np.asarray(points, dtype=np.float64)
    lo, hi = axis_range
    if not hi > lo:
        raise ValueError(f"axis range must be increasing, got {axis_range}")
    pad = 20.0
    inner = size_px - 2.0 * pad
    scale = inner / (hi - lo)
    px = pad + (pts[:, 0] - lo) * scale
    py = size_px - pad - (pts[:, 1] - lo) * scale

    lines = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{size_px}" height="{size_px}" '
        f'viewBox="0 0 {size_px} {size_px}">',
        f'<rect x="0" y="0" width="{size_px}" height="{size_px}" fill="white"/>',
        f'<rect x="{pad:.1f}" y="{pad:.1f}" width="{inner:.1f}" height="{inner:.1f}" '
        'fill="none" stroke="#444444" stroke-width="1"/>',
    ]
    if title:
        lines.append(
            f'<text x="{size_px / 2:.1f}" y="{pad - 6:.1f}" text-anchor="middle" '
            f'font-family="sans-serif" font-size="12">{title}</text>'
        )
    lines.append('<g fill="#30669c" fill-opacity="0.45" stroke="none">')
    lines.extend(
        f'<circle cx="{x:.2f}" cy="{y:.2f}" r="{point_radius}"/>' for x, y in zip(px, py)
    )
    lines.append("</g>")
    lines.append("</svg>")
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")
