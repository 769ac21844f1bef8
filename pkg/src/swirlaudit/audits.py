"""Statistical and numerical audits of identifiability assumptions.

Given a paired pair of latent representations (the original sources ``Z`` and
the swirled alternates ``Z'``), the checks here probe, on samples, whether

* the maps from observations to each representation are continuous,
* the two representations carry the same information (each is an explicit
  continuous function of the other),
* both representations have compact support inside the canonical square,
* both satisfy the independent support condition (joint support equals the
  product of marginal supports), and
* the alternate representation is uniform on the square,

and finally whether the two representations are related by a permutation plus
coordinate-wise bijections.  :func:`run_audit` bundles everything into an
:class:`AuditReport`; a certified counterexample is a run where every premise
passes while the coordinate-wise-relation verdict fails.

None of the premise checks is a proof: continuity and support checks are
falsification audits, consistent-with rather than established-by samples.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from numpy.typing import ArrayLike, NDArray
from scipy import stats

from swirlaudit.errors import (
    InvalidDomainError,
    PairingError,
    SwirlAuditError,
    UndersampledError,
)
from swirlaudit.transforms import (
    Dataset,
    Mixing2,
    MpaParams,
    apply_pipeline,
    mpa_forward,
    mpa_inverse,
    sample_uniform_square,
    unmix,
)

__all__ = [
    "SupportGrid",
    "CoordRelationVerdict",
    "AssignmentScores",
    "AuditReport",
    "COORDINATE_WISE",
    "NOT_COORDINATE_WISE",
    "check_continuity",
    "check_sigma_algebra_proxy",
    "check_compact_support",
    "check_independent_support",
    "check_uniformity",
    "check_coordinatewise_relation",
    "run_audit",
    "bounding_box",
]

COORDINATE_WISE = "coordinate-wise"
NOT_COORDINATE_WISE = "not-coordinate-wise"

# Pass threshold for the bidirectional reconstruction error certifying that
# the two representations are exact functions of each other.
SIGMA_PROXY_TOL = 1e-9

# Slack allowed when testing empirical support containment.
BOX_SLACK = 1e-9

# Displacement used by the continuity sweep.
CONTINUITY_DELTA = 1e-7

# Occupancy threshold per histogram cell when estimating supports.
DEFAULT_MIN_COUNT = 5

_PERMUTATIONS = ((0, 1), (1, 0))


def bounding_box(points: ArrayLike) -> NDArray[np.float64]:
    """Per-axis empirical bounds, shape (2, 2): ``[[lo1, hi1], [lo2, hi2]]``."""
    pts = np.asarray(points, dtype=np.float64)
    return np.column_stack([pts.min(axis=0), pts.max(axis=0)])


@dataclass(frozen=True)
class SupportGrid:
    """Histogram-based estimate of a joint support and its marginals.

    A cell (joint or marginal) counts as occupied when it holds at least
    ``min_count`` samples.  Marginal occupancy is computed from the marginal
    counts, so an occupied joint cell always has occupied marginal cells.
    """

    bins_per_axis: int
    occupancy: NDArray[np.bool_]
    marginal_occupancy: tuple[NDArray[np.bool_], NDArray[np.bool_]]
    min_count: int

    def __post_init__(self):
        if self.bins_per_axis < 2:
            raise ValueError(f"bins_per_axis must be >= 2, got {self.bins_per_axis}")
        occupied = self.occupancy
        marg1, marg2 = self.marginal_occupancy
        if occupied.shape != (self.bins_per_axis, self.bins_per_axis):
            raise ValueError("occupancy table shape does not match bins_per_axis")
        implied = np.outer(marg1, marg2)
        if np.any(occupied & ~implied):
            raise ValueError("occupied joint cell with unoccupied marginal cell")

    @classmethod
    def from_points(
        cls, points: ArrayLike, bins_per_axis: int, min_count: int
    ) -> "SupportGrid":
        """Build the grid over the empirical bounding box of the points."""
        pts = np.asarray(points, dtype=np.float64)
        box = bounding_box(pts)
        counts, _, _ = np.histogram2d(
            pts[:, 0], pts[:, 1], bins=bins_per_axis, range=[tuple(box[0]), tuple(box[1])]
        )
        marg1 = counts.sum(axis=1) >= min_count
        marg2 = counts.sum(axis=0) >= min_count
        return cls(
            bins_per_axis=bins_per_axis,
            occupancy=counts >= min_count,
            marginal_occupancy=(marg1, marg2),
            min_count=min_count,
        )

    def product_occupancy_fraction(self) -> float:
        """Fraction of marginal-product cells that are occupied jointly."""
        marg1, marg2 = self.marginal_occupancy
        product = np.outer(marg1, marg2)
        n_product = int(product.sum())
        if n_product == 0:
            return 0.0
        return float(self.occupancy[product].mean())


@dataclass(frozen=True)
class AssignmentScores:
    """Functional-dependence scores for one coordinate assignment.

    ``perm`` maps output coordinate ``j`` to the alternate-representation
    coordinate ``perm[j]``.  Scores are normalized mean within-bin conditional
    variances in the two directions; 0 means perfect functional dependence,
    1 means no dependence.
    """

    perm: tuple[int, int]
    zprime_to_z: tuple[float, float]
    z_to_zprime: tuple[float, float]

    @property
    def max_score(self) -> float:
        return max(*self.zprime_to_z, *self.z_to_zprime)


@dataclass(frozen=True)
class CoordRelationVerdict:
    """Outcome of the coordinate-wise-relation check.

    ``verdict`` is ``coordinate-wise`` iff some assignment keeps all four of
    its scores (two coordinates times two directions) at or below
    ``threshold``.  ``monotonicity`` annotates each coordinate of the best
    assignment with the sign of its rank correlation ("increasing",
    "decreasing", or "non-monotone").
    """

    verdict: str
    threshold: float
    best_assignment: tuple[int, int]
    best_max_score: float
    monotonicity: tuple[str, str]
    assignments: tuple[AssignmentScores, ...]

    def __post_init__(self):
        achievable = min(a.max_score for a in self.assignments)
        expect = COORDINATE_WISE if achievable <= self.threshold else NOT_COORDINATE_WISE
        if self.verdict != expect:
            raise ValueError("verdict inconsistent with assignment scores")

    @property
    def is_coordinate_wise(self) -> bool:
        return self.verdict == COORDINATE_WISE


@dataclass(frozen=True)
class AuditReport:
    """Pass/fail record for every identifiability premise plus the conclusion.

    Premises: continuity of both observation-to-latent maps, bidirectional
    reconstruction (shared information), compact support, and independent
    support of both representations.  ``counterexample_certified`` is True
    when all premises pass, the alternate representation looks uniform, and
    the conclusion check still finds no coordinate-wise relation.
    """

    continuity_pass: bool
    continuity_max_ratio: float
    sigma_algebra_pass: bool
    sigma_algebra_max_error: float
    compact_support_pass: bool
    support_box: NDArray[np.float64]
    independent_support_pass_z: bool
    independent_support_fraction_z: float
    independent_support_pass_zprime: bool
    independent_support_fraction_zprime: float
    uniformity_pvalue_zprime: float
    uniformity_alpha: float
    conclusion: CoordRelationVerdict
    parameters: dict = field(default_factory=dict)

    @property
    def premises_pass(self) -> bool:
        return (
            self.continuity_pass
            and self.sigma_algebra_pass
            and self.compact_support_pass
            and self.independent_support_pass_z
            and self.independent_support_pass_zprime
        )

    @property
    def uniformity_pass(self) -> bool:
        return self.uniformity_pvalue_zprime > self.uniformity_alpha

    @property
    def counterexample_certified(self) -> bool:
        return (
            self.premises_pass
            and self.uniformity_pass
            and not self.conclusion.is_coordinate_wise
        )


def check_continuity(
    transform: Callable[[NDArray[np.float64]], ArrayLike],
    domain_box: ArrayLike,
    n_pairs: int = 1000,
    seed: int | ArrayLike = 0,
    l_max: float = 100.0,
    delta: float = CONTINUITY_DELTA,
) -> tuple[bool, float]:
    """Scan for gross discontinuities of a planar map over a box.

    Samples ``n_pairs`` base points uniformly in ``domain_box`` and measures
    the displacement ratio ``|T(z + d) - T(z)| / |d|`` for a random direction
    ``d`` of length ``delta``.  Passes iff the largest observed ratio stays at
    or below ``l_max``.  This can falsify continuity (a jump crossed by some
    pair produces a ratio of order ``1/delta``) but can never prove it.

    Returns
    -------
    (passed, max_ratio)
    """
    if n_pairs < 100:
        raise ValueError(f"need at least 100 pairs for the sweep, got {n_pairs}")
    box = np.asarray(domain_box, dtype=np.float64)
    if box.shape != (2, 2) or not np.all(np.isfinite(box)):
        raise InvalidDomainError(f"domain box must be finite with shape (2, 2), got {box!r}")
    widths = box[:, 1] - box[:, 0]
    if np.any(widths <= 0.0):
        raise InvalidDomainError(f"degenerate domain box, widths {widths}")
    rng = np.random.default_rng(seed)
    base = box[:, 0] + rng.random((n_pairs, 2)) * widths
    angles = rng.random(n_pairs) * 2.0 * np.pi
    offsets = delta * np.column_stack([np.cos(angles), np.sin(angles)])
    moved = np.asarray(transform(base + offsets), dtype=np.float64)
    here = np.asarray(transform(base), dtype=np.float64)
    ratios = np.hypot(*(moved - here).T) / delta
    max_ratio = float(ratios.max())
    return max_ratio <= l_max, max_ratio


def check_sigma_algebra_proxy(
    Z: Dataset,
    Zp: Dataset,
    fwd: Callable[[NDArray[np.float64]], ArrayLike],
    inv: Callable[[NDArray[np.float64]], ArrayLike],
) -> tuple[bool, float]:
    """Certify that two paired representations determine each other.

    Checks that the supplied analytic maps reconstruct each dataset from the
    other pointwise: ``fwd(Z_i) = Z'_i`` and ``inv(Z'_i) = Z_i`` within 1e-9.
    Mutual exact reconstruction through continuous maps is the sample-level
    surrogate for the two representations generating the same sigma-algebra.

    Returns
    -------
    (passed, max_error)
    """
    if Z.n != Zp.n:
        raise PairingError(f"datasets are not paired: {Z.n} vs {Zp.n} points")
    fwd_err = np.hypot(*(np.asarray(fwd(Z.points), dtype=np.float64) - Zp.points).T)
    inv_err = np.hypot(*(np.asarray(inv(Zp.points), dtype=np.float64) - Z.points).T)
    max_err = float(max(fwd_err.max(), inv_err.max()))
    return max_err < SIGMA_PROXY_TOL, max_err


def check_compact_support(
    D: Dataset, expected_box: ArrayLike
) -> tuple[bool, NDArray[np.float64]]:
    """Empirical bounding box containment within an expected box (plus slack).

    Returns
    -------
    (passed, empirical_box)
    """
    expected = np.asarray(expected_box, dtype=np.float64)
    box = bounding_box(D.points)
    passed = bool(
        np.all(box[:, 0] >= expected[:, 0] - BOX_SLACK)
        and np.all(box[:, 1] <= expected[:, 1] + BOX_SLACK)
    )
    return passed, box


def support_overshoot(box: NDArray[np.float64], expected_box: ArrayLike) -> float:
    """Largest excursion of a bounding box beyond the expected box (<= 0 inside)."""
    expected = np.asarray(expected_box, dtype=np.float64)
    return float(
        max((expected[:, 0] - box[:, 0]).max(), (box[:, 1] - expected[:, 1]).max())
    )


def check_independent_support(
    D: Dataset, bins: int, min_count: int = DEFAULT_MIN_COUNT
) -> tuple[bool, float]:
    """Test whether the joint support factorizes into its marginal supports.

    Builds an occupancy grid over the empirical bounding box and passes iff
    every cell of the product of occupied marginal cells is itself occupied.
    The returned fraction is the share of product cells that are occupied;
    data supported on a rectangle gives 1.0, a disk leaves its corner product
    cells empty and fails.

    Raises
    ------
    UndersampledError
        If ``n < bins**2 * min_count * 5`` (too few samples per cell to call
        empty cells empty with any confidence).
    """
    required = bins * bins * min_count * 5
    if D.n < required:
        raise UndersampledError(
            f"independent-support check needs n >= {required} for bins={bins}, "
            f"min_count={min_count}; got n = {D.n}",
            required_n=required,
        )
    grid = SupportGrid.from_points(D.points, bins_per_axis=bins, min_count=min_count)
    fraction = grid.product_occupancy_fraction()
    return fraction == 1.0, fraction


def check_uniformity(
    D: Dataset, bins: int, box: ArrayLike = ((-1.0, 1.0), (-1.0, 1.0))
) -> float:
    """Pearson chi-square goodness of fit against Unif on the given box.

    The square is cut into ``bins x bins`` equal cells; each has null
    probability ``1/bins**2``.  Samples falling outside the box deplete the
    observed counts and push the statistic up, as they should under this
    null.  Returns the p-value from the chi-square survival function with
    ``bins**2 - 1`` degrees of freedom.

    Raises
    ------
    UndersampledError
        If ``n < 5 * bins**2`` (rule of thumb for chi-square validity).
    """
    required = 5 * bins * bins
    if D.n < required:
        raise UndersampledError(
            f"uniformity check needs n >= {required} for bins={bins}; got n = {D.n}",
            required_n=required,
        )
    box = np.asarray(box, dtype=np.float64)
    counts, _, _ = np.histogram2d(
        D.points[:, 0], D.points[:, 1], bins=bins, range=[tuple(box[0]), tuple(box[1])]
    )
    expected = D.n / (bins * bins)
    statistic = float(((counts - expected) ** 2 / expected).sum())
    return float(stats.chi2.sf(statistic, bins * bins - 1))


def _conditional_variance_ratio(binning: NDArray, dependent: NDArray, bins: int) -> float:
    """Mean within-bin variance of ``dependent`` over equal-count bins of
    ``binning``, normalized by the total variance of ``dependent``."""
    total_var = float(dependent.var())
    if total_var == 0.0:
        return 0.0
    order = np.argsort(binning, kind="stable")
    within = 0.0
    for chunk in np.array_split(dependent[order], bins):
        within += chunk.size * float(chunk.var())
    return within / (binning.size * total_var)


def _monotonicity_note(x: NDArray, y: NDArray) -> str:
    rho = float(stats.spearmanr(x, y).statistic)
    if rho >= 0.95:
        return "increasing"
    if rho <= -0.95:
        return "decreasing"
    return "non-monotone"


def check_coordinatewise_relation(
    Z: Dataset, Zp: Dataset, bins: int = 50, threshold: float = 0.01
) -> CoordRelationVerdict:
    """Decide whether two paired representations are coordinate-wise related.

    For each of the two coordinate assignments and each output coordinate
    ``j``, the alternate coordinate ``Z'_{perm[j]}`` is cut into ``bins``
    equal-count bins and the within-bin variance of ``Z_j`` (normalized by
    its total variance) is the forward score; the reverse score bins ``Z_j``
    and measures ``Z'_{perm[j]}``.  A relation through coordinate-wise
    bijections drives all four scores of the right assignment to the
    ``1/bins**2`` scale; requiring both directions rules out non-invertible
    (many-to-one) dependence.  The verdict is ``coordinate-wise`` iff some
    assignment keeps all four scores at or below ``threshold``.

    Raises
    ------
    PairingError
        If the datasets differ in length.
    UndersampledError
        If ``n < 50 * bins``.
    """
    if Z.n != Zp.n:
        raise PairingError(f"datasets are not paired: {Z.n} vs {Zp.n} points")
    required = 50 * bins
    if Z.n < required:
        raise UndersampledError(
            f"relation check needs n >= {required} for bins={bins}; got n = {Z.n}",
            required_n=required,
        )
    scored = []
    for perm in _PERMUTATIONS:
        forward = tuple(
            _conditional_variance_ratio(Zp.points[:, perm[j]], Z.points[:, j], bins)
            for j in range(2)
        )
        reverse = tuple(
            _conditional_variance_ratio(Z.points[:, j], Zp.points[:, perm[j]], bins)
            for j in range(2)
        )
        scored.append(AssignmentScores(perm=perm, zprime_to_z=forward, z_to_zprime=reverse))
    best = min(scored, key=lambda a: a.max_score)
    verdict = COORDINATE_WISE if best.max_score <= threshold else NOT_COORDINATE_WISE
    notes = tuple(
        _monotonicity_note(Zp.points[:, best.perm[j]], Z.points[:, j]) for j in range(2)
    )
    return CoordRelationVerdict(
        verdict=verdict,
        threshold=threshold,
        best_assignment=best.perm,
        best_max_score=best.max_score,
        monotonicity=notes,
        assignments=tuple(scored),
    )


def _checked(name: str, fn, *args, **kwargs):
    """Run one audit component, attaching the check identity to any failure."""
    try:
        return fn(*args, **kwargs)
    except SwirlAuditError as exc:
        exc.args = (f"[{name}] {exc.args[0]}",) + exc.args[1:]
        raise


def run_audit(
    A: Mixing2,
    p: MpaParams,
    n: int,
    seed: int,
    *,
    bins_support: int = 10,
    bins_uniformity: int = 10,
    bins_relation: int = 50,
    min_count: int = DEFAULT_MIN_COUNT,
    functional_threshold: float = 0.01,
    alpha: float = 0.001,
    l_max: float = 100.0,
    continuity_pairs: int = 1000,
) -> AuditReport:
    """Run the full generative pipeline and every audit on one sample.

    Draws ``n`` uniform latents, pushes them through the mixing and the
    swirl, and checks all premises before the coordinate-wise-relation
    conclusion.  With a nondegenerate swirl the expected outcome is that all
    premises pass, the alternate latents look uniform, and the conclusion is
    ``not-coordinate-wise``: a certified counterexample.
    """
    square = np.array([[-1.0, 1.0], [-1.0, 1.0]])
    Z = _checked("sampling", sample_uniform_square, n, seed)
    X, Zp = _checked("pipeline", apply_pipeline, A, p, Z)

    def to_sources(x):
        return unmix(A, x)

    def to_alternates(x):
        return mpa_forward(p, unmix(A, x))

    x_box = bounding_box(X.points)
    f_pass, f_ratio = _checked(
        "continuity", check_continuity, to_sources, x_box,
        n_pairs=continuity_pairs, seed=[seed, 1], l_max=l_max,
    )
    fp_pass, fp_ratio = _checked(
        "continuity", check_continuity, to_alternates, x_box,
        n_pairs=continuity_pairs, seed=[seed, 2], l_max=l_max,
    )

    sigma_pass, sigma_err = _checked(
        "sigma-algebra", check_sigma_algebra_proxy, Z, Zp,
        lambda z: mpa_forward(p, z), lambda zp: mpa_inverse(p, zp),
    )

    z_ok, z_box = _checked("compact-support", check_compact_support, Z, square)
    zp_ok, zp_box = _checked("compact-support", check_compact_support, Zp, square)
    union_box = np.column_stack(
        [np.minimum(z_box[:, 0], zp_box[:, 0]), np.maximum(z_box[:, 1], zp_box[:, 1])]
    )

    is_z, frac_z = _checked(
        "independent-support", check_independent_support, Z, bins_support, min_count
    )
    is_zp, frac_zp = _checked(
        "independent-support", check_independent_support, Zp, bins_support, min_count
    )

    pvalue = _checked("uniformity", check_uniformity, Zp, bins_uniformity)

    conclusion = _checked(
        "relation", check_coordinatewise_relation, Z, Zp,
        bins=bins_relation, threshold=functional_threshold,
    )

    return AuditReport(
        continuity_pass=f_pass and fp_pass,
        continuity_max_ratio=max(f_ratio, fp_ratio),
        sigma_algebra_pass=sigma_pass,
        sigma_algebra_max_error=sigma_err,
        compact_support_pass=z_ok and zp_ok,
        support_box=union_box,
        independent_support_pass_z=is_z,
        independent_support_fraction_z=frac_z,
        independent_support_pass_zprime=is_zp,
        independent_support_fraction_zprime=frac_zp,
        uniformity_pvalue_zprime=pvalue,
        uniformity_alpha=alpha,
        conclusion=conclusion,
        parameters={
            "a": p.a,
            "c": p.c,
            "degenerate_a": p.degenerate,
            "A": A.matrix.tolist(),
            "n": n,
            "seed": seed,
            "bins_support": bins_support,
            "bins_uniformity": bins_uniformity,
            "bins_relation": bins_relation,
            "min_count": min_count,
            "functional_threshold": functional_threshold,
            "alpha": alpha,
            "l_max": l_max,
        },
    )
