#!/usr/bin/env python3
# Generate the three point clouds of the construction and render them.
#
# Sources Z are uniform on the square [-1, 1]^2.  Observations X = A Z fill a
# sheared parallelepiped.  The alternate sources Z' = h(A^{-1} X) coincide
# with Z outside radius c and are progressively rotated inside it.
from pathlib import Path

import numpy as np

import swirlaudit as sa
from swirlaudit.figures import render_scatter_svg

out = Path("demo_output/clouds")
out.mkdir(parents=True, exist_ok=True)

A = sa.Mixing2.from_rows(1.0, 0.5, 0.0, 1.0)  # shear, det = 1
p = sa.MpaParams(a=3.6, c=0.9)

Z = sa.sample_uniform_square(20_000, seed=42)
X, Zp = sa.apply_pipeline(A, p, Z)

for d in (Z, X, Zp):
    box = np.column_stack([d.points.min(axis=0), d.points.max(axis=0)])
    print(f"{d.label:14s} n={d.n}  bounding box = {np.round(box, 3).tolist()}")

# the swirl moves only the points inside the cutoff radius
moved = np.any(Zp.points != Z.points, axis=1)
print(f"\npoints altered by the swirl: {moved.mean():.1%} "
      f"(area of the radius-{p.c} disk over the square = {np.pi * p.c**2 / 4:.1%})")

render_scatter_svg(Z.points, out / "z.svg", title="sources Z")
span = 1.05 * float(np.abs(X.points).max())
render_scatter_svg(X.points, out / "x.svg", axis_range=(-span, span), title="observations X")
render_scatter_svg(Zp.points, out / "zprime.svg", title="alternate sources Z'")
print(f"\nSVG scatters written to {out}/")
