"""Generative pipeline for a 2-D latent model with a radius-dependent swirl.

Latent sources are uniform on the square ``[-1, 1]^2``, observations are an
invertible linear mixing of the sources, and an alternate latent
representation is obtained by applying a radius-dependent rotation (a
measure-preserving automorphism of the square) behind the mixing.  Every map
in the pipeline has an exact analytic inverse; the statistical audits in
:mod:`swirlaudit.audits` lean on that.

All operations are pure functions of their inputs and vectorize over arrays
of points with shape ``(..., 2)``.  Datasets are immutable once created, so
everything here is safe to evaluate in parallel.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Callable

import numpy as np
from numpy.typing import ArrayLike, NDArray

from swirlaudit.errors import (
    EmptyDatasetError,
    IllConditionedPointError,
    InvalidPointError,
    LabelMismatchError,
)

__all__ = [
    "LATENT_Z",
    "OBSERVED_X",
    "LATENT_ZPRIME",
    "DATASET_LABELS",
    "DET_EPSILON",
    "MpaParams",
    "Mixing2",
    "Dataset",
    "sample_uniform_square",
    "sample_uniform_disk",
    "mix",
    "unmix",
    "mpa_forward",
    "mpa_inverse",
    "apply_pipeline",
    "jacobian_det_fd",
]

# Dataset provenance labels.
LATENT_Z = "latent-Z"
OBSERVED_X = "observed-X"
LATENT_ZPRIME = "latent-Zprime"
DATASET_LABELS = frozenset({LATENT_Z, OBSERVED_X, LATENT_ZPRIME})

# Mixing matrices with |det| at or below this are rejected as numerically
# singular.
DET_EPSILON = 1e-9

# A * A^{-1} must reproduce the identity at least this well, entrywise.
_INVERSE_TOL = 1e-12


def _as_points(z: ArrayLike, *, what: str = "point") -> NDArray[np.float64]:
    """Coerce to a float64 array with trailing axis of length 2."""
    arr = np.asarray(z, dtype=np.float64)
    if arr.ndim == 0 or arr.shape[-1] != 2:
        raise InvalidPointError(
            f"{what} must have a trailing axis of length 2, got shape {arr.shape}"
        )
    if not np.all(np.isfinite(arr)):
        raise InvalidPointError(f"{what} contains NaN or infinite coordinates")
    return arr


@dataclass(frozen=True)
class MpaParams:
    """Parameters of the radius-dependent rotation ("swirl").

    Points with radius at most ``c`` are rotated about the origin by the
    angle ``a * (radius - c)`` radians; points outside are left untouched.

    Attributes
    ----------
    a : float
        Rotation rate in radians per unit radius.  Must be nonzero; a zero
        rate collapses the swirl to the identity and is only allowed through
        :meth:`degenerate_fixture` (used by tests as a negative control).
    c : float
        Cutoff radius, strictly inside ``(0, 1)``.
    degenerate : bool
        True only for the ``a == 0`` fixture.
    """

    a: float
    c: float
    degenerate: bool = False

    def __post_init__(self):
        if not (np.isfinite(self.a) and np.isfinite(self.c)):
            raise ValueError("swirl parameters must be finite")
        if not 0.0 < self.c < 1.0:
            raise ValueError(f"c must lie in the open interval (0, 1), got {self.c}")
        if self.a == 0.0 and not self.degenerate:
            raise ValueError("a must be nonzero (a = 0 only via degenerate_fixture)")
        if self.degenerate and self.a != 0.0:
            raise ValueError("degenerate fixture requires a = 0")

    @classmethod
    def degenerate_fixture(cls, c: float = 0.9) -> "MpaParams":
        """Identity swirl (``a = 0``); a negative control for audits."""
        return cls(a=0.0, c=c, degenerate=True)

    def rotation_angle(self, radius: ArrayLike) -> NDArray[np.float64]:
        """Rotation angle applied at the given radii: ``a*(r-c)`` inside ``c``, else 0."""
        r = np.asarray(radius, dtype=np.float64)
        return np.where(r <= self.c, self.a * (r - self.c), 0.0)


@dataclass(frozen=True)
class Mixing2:
    """Invertible 2x2 mixing matrix with a cached exact inverse.

    Construction rejects near-singular matrices (``|det| <= 1e-9``) and
    verifies ``A @ A^{-1} = I`` to 1e-12 entrywise.  The inverse is computed
    with the closed-form adjugate formula, so ``unmix`` is deterministic and
    as accurate as the conditioning allows.
    """

    matrix: NDArray[np.float64]
    det: float = field(init=False)
    inverse: NDArray[np.float64] = field(init=False)

    def __post_init__(self):
        a = np.array(self.matrix, dtype=np.float64)
        if a.shape != (2, 2):
            raise ValueError(f"mixing matrix must be 2x2, got shape {a.shape}")
        if not np.all(np.isfinite(a)):
            raise ValueError("mixing matrix must be finite")
        det = float(a[0, 0] * a[1, 1] - a[0, 1] * a[1, 0])
        if abs(det) <= DET_EPSILON:
            raise ValueError(
                f"mixing matrix is numerically singular: |det| = {abs(det):.3e} <= {DET_EPSILON}"
            )
        inv = np.array([[a[1, 1], -a[0, 1]], [-a[1, 0], a[0, 0]]]) / det
        if not np.allclose(a @ inv, np.eye(2), rtol=0.0, atol=_INVERSE_TOL):
            raise ValueError(
                "mixing matrix too ill-conditioned: A @ inv(A) deviates from I by more "
                f"than {_INVERSE_TOL}"
            )
        a.flags.writeable = False
        inv.flags.writeable = False
        object.__setattr__(self, "matrix", a)
        object.__setattr__(self, "det", det)
        object.__setattr__(self, "inverse", inv)

    @classmethod
    def identity(cls) -> "Mixing2":
        return cls(np.eye(2))

    @classmethod
    def from_rows(cls, a11: float, a12: float, a21: float, a22: float) -> "Mixing2":
        return cls(np.array([[a11, a12], [a21, a22]], dtype=np.float64))


@dataclass(frozen=True)
class Dataset:
    """An ordered, immutable collection of 2-D points with provenance.

    Attributes
    ----------
    points : ndarray, shape (n, 2)
        Sample coordinates (read-only).
    label : str
        One of ``latent-Z``, ``observed-X``, ``latent-Zprime``.
    seed : int
        Seed of the generator run that produced the samples (datasets derived
        from another dataset inherit its seed; externally loaded clouds use 0).
    n : int
        Number of points; always ``len(points)`` and at least 1.
    """

    points: NDArray[np.float64]
    label: str
    seed: int
    n: int = field(init=False)

    def __post_init__(self):
        pts = np.array(self.points, dtype=np.float64)
        if pts.ndim != 2 or pts.shape[1] != 2:
            raise InvalidPointError(f"dataset points must have shape (n, 2), got {pts.shape}")
        if pts.shape[0] == 0:
            raise EmptyDatasetError("dataset must contain at least one point (n >= 1)")
        if not np.all(np.isfinite(pts)):
            raise InvalidPointError("dataset contains NaN or infinite coordinates")
        if self.label not in DATASET_LABELS:
            raise LabelMismatchError(
                f"unknown dataset label {self.label!r}; expected one of {sorted(DATASET_LABELS)}"
            )
        if not (isinstance(self.seed, (int, np.integer)) and self.seed >= 0):
            raise ValueError(f"seed must be a nonnegative integer, got {self.seed!r}")
        pts.flags.writeable = False
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "seed", int(self.seed))
        object.__setattr__(self, "n", pts.shape[0])

    def radii(self) -> NDArray[np.float64]:
        """Euclidean distance of every point from the origin."""
        return np.hypot(self.points[:, 0], self.points[:, 1])


def _rng(seed: int) -> np.random.Generator:
    # PCG64 is seedable, platform independent, and 64-bit; all sampling in the
    # package goes through it so runs are bit-reproducible from (n, seed).
    return np.random.Generator(np.random.PCG64(seed))


def sample_uniform_square(n: int, seed: int) -> Dataset:
    """Draw ``n`` i.i.d. points uniformly from the square ``[-1, 1]^2``.

    Each point consumes two consecutive uniform draws from a PCG64 stream, so
    identical ``(n, seed)`` give bit-identical output.

    Raises
    ------
    EmptyDatasetError
        If ``n < 1``.
    """
    if n < 1:
        raise EmptyDatasetError(f"cannot sample an empty dataset (n = {n})")
    pts = _rng(seed).random((int(n), 2)) * 2.0 - 1.0
    return Dataset(points=pts, label=LATENT_Z, seed=seed)


def sample_uniform_disk(n: int, seed: int, radius: float = 1.0) -> Dataset:
    """Draw ``n`` i.i.d. points uniformly from the disk of the given radius.

    The disk is not a product of its marginal supports, which makes this the
    canonical negative fixture for the independent-support check.
    """
    if n < 1:
        raise EmptyDatasetError(f"cannot sample an empty dataset (n = {n})")
    u = _rng(seed).random((int(n), 2))
    r = radius * np.sqrt(u[:, 0])
    phi = 2.0 * np.pi * u[:, 1]
    pts = np.column_stack([r * np.cos(phi), r * np.sin(phi)])
    return Dataset(points=pts, label=LATENT_Z, seed=seed)


def mix(A: Mixing2, z: ArrayLike) -> NDArray[np.float64]:
    """Map latent points to observations: ``x = A @ z`` (vectorized)."""
    z = _as_points(z, what="latent point")
    return z @ A.matrix.T


def unmix(A: Mixing2, x: ArrayLike) -> NDArray[np.float64]:
    """Invert the mixing: ``z = A^{-1} @ x``; exact inverse of :func:`mix`."""
    x = _as_points(x, what="observed point")
    return x @ A.inverse.T


def mpa_forward(p: MpaParams, z: ArrayLike) -> NDArray[np.float64]:
    """Apply the swirl: rotate by ``a*(|z| - c)`` radians inside radius ``c``.

    Identifying ``(z1, z2)`` with the complex number ``z1 + i*z2``, this is
    multiplication by ``exp(i*a*(|z| - c))`` on ``|z| <= c`` and the identity
    outside.  At ``|z| = c`` the angle vanishes, so the map is continuous.
    Rotation preserves the radius, hence the map preserves the uniform
    distribution on any radially symmetric region and on the square.

    The outside branch returns the input coordinates unchanged (exactly, not
    just up to round-off).
    """
    z = _as_points(z)
    r = np.hypot(z[..., 0], z[..., 1])
    theta = np.where(r <= p.c, p.a * (r - p.c), 0.0)
    cos_t = np.cos(theta)
    sin_t = np.sin(theta)
    out = np.empty_like(z)
    out[..., 0] = cos_t * z[..., 0] - sin_t * z[..., 1]
    out[..., 1] = sin_t * z[..., 0] + cos_t * z[..., 1]
    return out


def mpa_inverse(p: MpaParams, zp: ArrayLike) -> NDArray[np.float64]:
    """Exact inverse of :func:`mpa_forward`: the same swirl with rate ``-a``."""
    return mpa_forward(replace(p, a=-p.a), zp)


def apply_pipeline(A: Mixing2, p: MpaParams, zs: Dataset) -> tuple[Dataset, Dataset]:
    """Run the generative pipeline on a latent sample.

    Produces the observations ``X_i = A z_i`` and the alternate latents
    ``Z'_i = swirl(A^{-1} X_i)``; row ``i`` corresponds across all three
    datasets.

    Raises
    ------
    LabelMismatchError
        If ``zs`` is not labelled ``latent-Z``.
    """
    if zs.label != LATENT_Z:
        raise LabelMismatchError(
            f"pipeline input must be labelled {LATENT_Z!r}, got {zs.label!r}"
        )
    x_pts = mix(A, zs.points)
    zp_pts = mpa_forward(p, unmix(A, x_pts))
    x = Dataset(points=x_pts, label=OBSERVED_X, seed=zs.seed)
    zp = Dataset(points=zp_pts, label=LATENT_ZPRIME, seed=zs.seed)
    return x, zp


def jacobian_det_fd(
    transform: Callable[[NDArray[np.float64]], ArrayLike],
    z: ArrayLike,
    h: float = 1e-5,
    discontinuity_radius: float | None = None,
) -> float:
    """Central-finite-difference estimate of ``|det J|`` of a planar map at ``z``.

    Parameters
    ----------
    transform : callable
        Map from a point of shape ``(2,)`` to a point of shape ``(2,)``.
    z : array_like, shape (2,)
        Evaluation point.
    h : float
        Step size for the central differences.
    discontinuity_radius : float, optional
        If the transform's Jacobian is known to be discontinuous across the
        circle of this radius, probes within ``10*h`` of that circle are
        rejected with :class:`IllConditionedPointError` (the two-sided stencil
        would straddle the jump).

    Returns
    -------
    float
        Absolute value of the estimated Jacobian determinant.
    """
    if not h > 0.0:
        raise ValueError(f"finite-difference step must be positive, got {h}")
    z = _as_points(z)
    if z.shape != (2,):
        raise InvalidPointError(f"expected a single point of shape (2,), got {z.shape}")
    if discontinuity_radius is not None:
        gap = abs(np.hypot(z[0], z[1]) - discontinuity_radius)
        if gap <= 10.0 * h:
            raise IllConditionedPointError(
                f"probe at distance {gap:.3e} from the discontinuity circle; "
                f"need > {10.0 * h:.3e}"
            )
    jac = np.empty((2, 2))
    for j in range(2):
        step = np.zeros(2)
        step[j] = h
        f_plus = _as_points(transform(z + step), what="transform output")
        f_minus = _as_points(transform(z - step), what="transform output")
        jac[:, j] = (f_plus - f_minus) / (2.0 * h)
    return float(abs(jac[0, 0] * jac[1, 1] - jac[0, 1] * jac[1, 0]))
