"""Tests for the generative pipeline and the swirl transform."""

import numpy as np
import pytest
import sympy as sp

import swirlaudit as sa
from swirlaudit.errors import (
    EmptyDatasetError,
    IllConditionedPointError,
    InvalidPointError,
    LabelMismatchError,
)
from swirlaudit.transforms import LATENT_Z, LATENT_ZPRIME, OBSERVED_X, Dataset

A_DEFAULT = lambda: sa.Mixing2.from_rows(1.0, 0.5, 0.0, 1.0)
P_DEFAULT = lambda: sa.MpaParams(3.6, 0.9)

# Rotation of (0.5, 0) by theta = 3.6*(0.5-0.9) = -1.44 rad, evaluated with
# 40-digit arithmetic (mpmath) and frozen here.
SWIRL_HALF_X = 0.065211854369072746
SWIRL_HALF_Y = -0.49572917409584323


# ---------------------------------------------------------------------------
# parameter and dataset types


def test_mpa_params_validation():
    with pytest.raises(ValueError):
        sa.MpaParams(a=3.6, c=1.5)
    with pytest.raises(ValueError):
        sa.MpaParams(a=3.6, c=0.0)
    with pytest.raises(ValueError):
        sa.MpaParams(a=0.0, c=0.9)
    fixture = sa.MpaParams.degenerate_fixture(0.9)
    assert fixture.a == 0.0 and fixture.degenerate


def test_mixing_rejects_near_singular():
    with pytest.raises(ValueError):
        sa.Mixing2.from_rows(1.0, 1.0, 1.0, 1.0)
    with pytest.raises(ValueError):
        sa.Mixing2.from_rows(1.0, 1.0, 1.0, 1.0 + 5e-10)


def test_mixing_inverse_is_cached_and_exact():
    A = sa.Mixing2.from_rows(2.0, 1.0, -1.0, 3.0)
    assert A.det == pytest.approx(7.0)
    np.testing.assert_allclose(A.matrix @ A.inverse, np.eye(2), atol=1e-12, rtol=0)


def test_dataset_validation():
    with pytest.raises(EmptyDatasetError):
        Dataset(points=np.empty((0, 2)), label=LATENT_Z, seed=0)
    with pytest.raises(InvalidPointError):
        Dataset(points=np.array([[0.0, np.nan]]), label=LATENT_Z, seed=0)
    with pytest.raises(LabelMismatchError):
        Dataset(points=np.zeros((1, 2)), label="mystery", seed=0)
    d = Dataset(points=np.zeros((3, 2)), label=LATENT_Z, seed=0)
    assert d.n == 3
    with pytest.raises(ValueError):
        d.points[0, 0] = 1.0  # immutable


# ---------------------------------------------------------------------------
# sampling


def test_sample_uniform_square_basic():
    d = sa.sample_uniform_square(4, seed=7)
    assert d.n == 4 and d.label == LATENT_Z and d.seed == 7
    assert np.all(d.points >= -1.0) and np.all(d.points <= 1.0)


def test_sample_uniform_square_deterministic():
    a = sa.sample_uniform_square(1000, seed=13)
    b = sa.sample_uniform_square(1000, seed=13)
    assert np.array_equal(a.points, b.points)
    c = sa.sample_uniform_square(1000, seed=14)
    assert not np.array_equal(a.points, c.points)


def test_sample_uniform_square_marginal_means():
    # Independent oracle: a different bit generator (MT19937) at n=1e6 puts
    # the marginal means well inside +-0.005, so +-0.02 at n=1e5 is generous.
    oracle = np.random.Generator(np.random.MT19937(99)).random((1_000_000, 2)) * 2 - 1
    assert np.all(np.abs(oracle.mean(axis=0)) < 0.005)
    d = sa.sample_uniform_square(100_000, seed=1)
    assert np.all(np.abs(d.points.mean(axis=0)) < 0.02)


def test_sample_uniform_square_empty_raises():
    with pytest.raises(EmptyDatasetError):
        sa.sample_uniform_square(0, seed=1)


def test_sample_uniform_disk_inside_radius():
    d = sa.sample_uniform_disk(10_000, seed=2)
    assert d.radii().max() <= 1.0


# ---------------------------------------------------------------------------
# mixing


def test_mix_examples():
    ident = sa.Mixing2.identity()
    np.testing.assert_array_equal(sa.mix(ident, [0.3, -0.5]), [0.3, -0.5])
    shear = A_DEFAULT()
    np.testing.assert_allclose(sa.mix(shear, [1.0, 1.0]), [1.5, 1.0], rtol=0, atol=0)
    perm = sa.Mixing2.from_rows(0.0, 1.0, 1.0, 0.0)
    np.testing.assert_array_equal(sa.mix(perm, [0.2, 0.9]), [0.9, 0.2])


def test_unmix_examples():
    ident = sa.Mixing2.identity()
    np.testing.assert_array_equal(sa.unmix(ident, [0.4, 0.4]), [0.4, 0.4])
    double = sa.Mixing2.from_rows(2.0, 0.0, 0.0, 2.0)
    np.testing.assert_array_equal(sa.unmix(double, [1.0, -1.0]), [0.5, -0.5])


@pytest.mark.parametrize(
    "rows",
    [
        (1.0, 0.5, 0.0, 1.0),
        (0.3, -1.2, 0.8, 0.9),
        (2.0, 0.0, 0.0, 0.25),
    ],
)
def test_unmix_roundtrip(rows):
    A = sa.Mixing2.from_rows(*rows)
    z = sa.sample_uniform_square(100_000, seed=21).points
    err = np.abs(sa.unmix(A, sa.mix(A, z)) - z).max()
    assert err < 1e-12


# ---------------------------------------------------------------------------
# the swirl


def test_swirl_outside_cutoff_is_exact_identity():
    p = P_DEFAULT()
    z = np.array([0.95, 0.0])
    np.testing.assert_array_equal(sa.mpa_forward(p, z), z)
    # every point with radius > c is untouched, bitwise up to signed zeros
    pts = sa.sample_uniform_square(100_000, seed=4).points
    outside = pts[np.hypot(pts[:, 0], pts[:, 1]) > p.c]
    np.testing.assert_array_equal(sa.mpa_forward(p, outside), outside)


def test_swirl_boundary_point_fixed():
    # at radius exactly c the rotation angle is zero, so both branches agree
    p = P_DEFAULT()
    np.testing.assert_array_equal(sa.mpa_forward(p, [0.9, 0.0]), [0.9, 0.0])


def test_swirl_interior_oracle_value():
    p = P_DEFAULT()
    out = sa.mpa_forward(p, [0.5, 0.0])
    assert abs(out[0] - SWIRL_HALF_X) < 1e-9
    assert abs(out[1] - SWIRL_HALF_Y) < 1e-9


def test_swirl_rejects_nonfinite():
    p = P_DEFAULT()
    with pytest.raises(InvalidPointError):
        sa.mpa_forward(p, [np.nan, 0.0])
    with pytest.raises(InvalidPointError):
        sa.mpa_inverse(p, [np.inf, 0.0])


def test_swirl_inverse_examples():
    p = P_DEFAULT()
    np.testing.assert_array_equal(sa.mpa_inverse(p, [0.95, 0.0]), [0.95, 0.0])
    back = sa.mpa_inverse(p, [SWIRL_HALF_X, SWIRL_HALF_Y])
    assert abs(back[0] - 0.5) < 1e-8 and abs(back[1]) < 1e-8


def test_swirl_inverse_matches_negated_rate():
    p = P_DEFAULT()
    neg = sa.MpaParams(-3.6, 0.9)
    z = sa.sample_uniform_square(10_000, seed=6).points
    np.testing.assert_array_equal(sa.mpa_inverse(p, z), sa.mpa_forward(neg, z))


def test_swirl_roundtrip_and_radius_preservation():
    p = P_DEFAULT()
    z = sa.sample_uniform_square(100_000, seed=3).points
    fwd = sa.mpa_forward(p, z)
    assert np.abs(sa.mpa_inverse(p, fwd) - z).max() < 1e-12
    r_in = np.hypot(z[:, 0], z[:, 1])
    r_out = np.hypot(fwd[:, 0], fwd[:, 1])
    assert np.abs(r_out - r_in).max() < 1e-12


def test_swirl_boundary_continuity():
    # displacement just inside the cutoff stays below |a|*delta*r + 1e-6
    p = P_DEFAULT()
    delta = 1e-8
    angles = np.linspace(0.0, 2.0 * np.pi, 256, endpoint=False)
    for radius in (p.c - delta, p.c + delta):
        ring = radius * np.column_stack([np.cos(angles), np.sin(angles)])
        disp = np.hypot(*(sa.mpa_forward(p, ring) - ring).T).max()
        assert disp <= abs(p.a) * delta * radius + 1e-6


# ---------------------------------------------------------------------------
# pipeline


def test_pipeline_identity_mixing_outside_cutoff():
    X, Zp = sa.apply_pipeline(
        sa.Mixing2.identity(), P_DEFAULT(), Dataset(np.array([[0.95, 0.0]]), LATENT_Z, 0)
    )
    np.testing.assert_array_equal(X.points, [[0.95, 0.0]])
    np.testing.assert_array_equal(Zp.points, [[0.95, 0.0]])
    assert X.label == OBSERVED_X and Zp.label == LATENT_ZPRIME


def test_pipeline_identity_mixing_matches_pointwise_swirl():
    p = P_DEFAULT()
    Z = sa.sample_uniform_square(5000, seed=9)
    _, Zp = sa.apply_pipeline(sa.Mixing2.identity(), p, Z)
    np.testing.assert_array_equal(Zp.points, sa.mpa_forward(p, Z.points))


def test_pipeline_composition_oracle():
    # the shear leaves (0.5, 0) fixed, so Z' is the pinned swirl image
    X, Zp = sa.apply_pipeline(
        A_DEFAULT(), P_DEFAULT(), Dataset(np.array([[0.5, 0.0]]), LATENT_Z, 0)
    )
    np.testing.assert_allclose(X.points, [[0.5, 0.0]], atol=1e-15, rtol=0)
    assert abs(Zp.points[0, 0] - SWIRL_HALF_X) < 1e-9
    assert abs(Zp.points[0, 1] - SWIRL_HALF_Y) < 1e-9


def test_pipeline_rejects_wrong_label():
    Z = sa.sample_uniform_square(10, seed=0)
    X, _ = sa.apply_pipeline(A_DEFAULT(), P_DEFAULT(), Z)
    with pytest.raises(LabelMismatchError):
        sa.apply_pipeline(A_DEFAULT(), P_DEFAULT(), X)


def test_pipeline_latents_stay_in_square():
    # radius preservation keeps the swirled cloud inside the square
    Z = sa.sample_uniform_square(1_000_000, seed=11)
    _, Zp = sa.apply_pipeline(A_DEFAULT(), P_DEFAULT(), Z)
    assert np.abs(Zp.points).max() <= 1.0 + 1e-12


# ---------------------------------------------------------------------------
# finite-difference Jacobian determinant


def test_jacobian_identity():
    det = sa.jacobian_det_fd(lambda z: z, np.array([0.3, 0.4]), 1e-5)
    assert abs(det - 1.0) < 1e-10


def test_jacobian_constant_linear():
    A = sa.Mixing2.from_rows(2.0, 0.0, 0.0, 3.0)
    det = sa.jacobian_det_fd(lambda z: sa.mix(A, z), np.array([-0.2, 0.7]), 1e-5)
    assert abs(det - 6.0) < 1e-6


def test_jacobian_swirl_measure_preserving_at_symbolic_points():
    # Symbolic oracle: h(z) = R(a(|z|-c)) z has det J = 1 identically on the
    # rotated region; re-derived here with sympy, then compared to the
    # finite-difference estimate at three interior points.
    z1, z2, a, c = sp.symbols("z1 z2 a c", real=True)
    theta = a * (sp.sqrt(z1**2 + z2**2) - c)
    h1 = sp.cos(theta) * z1 - sp.sin(theta) * z2
    h2 = sp.sin(theta) * z1 + sp.cos(theta) * z2
    det = sp.simplify(sp.Matrix([[h1.diff(z1), h1.diff(z2)],
                                 [h2.diff(z1), h2.diff(z2)]]).det())
    assert det == 1

    p = P_DEFAULT()
    for point in [(0.5, 0.0), (0.31, -0.22), (-0.61, 0.55)]:
        est = sa.jacobian_det_fd(
            lambda z: sa.mpa_forward(p, z), np.array(point), 1e-5, discontinuity_radius=p.c
        )
        assert abs(est - 1.0) < 1e-6


def test_jacobian_rejects_probe_near_discontinuity():
    with pytest.raises(IllConditionedPointError):
        sa.jacobian_det_fd(lambda z: z, np.array([0.9 + 5e-5, 0.0]), 1e-5,
                           discontinuity_radius=0.9)


def test_jacobian_rejects_bad_step():
    with pytest.raises(ValueError):
        sa.jacobian_det_fd(lambda z: z, np.array([0.1, 0.1]), 0.0)
