import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from hausdorff_spectra.arithmetic import family_independence
from hausdorff_spectra.cases import circle, prime_family, doubling_spec, three_term_spec, two_term_spec
from hausdorff_spectra.errors import EmptySet, HypothesisNotMet
from hausdorff_spectra.families import GeometricPrimeFamily
from hausdorff_spectra.model import scalar_dilation_spec, validate_spec
from hausdorff_spectra.spectra import (SpectrumApprox, analytic_curve, annulus_analytic, annulus_radii,
                                       hausdorff_distance, point_spectrum, rotational_invariance_check,
                                       spectrum_frequency_grid, spectrum_torus, symbol_norm_sup,
                                       truncation_convergence, weyl_classify)


def brute_hausdorff(a, b):
    d = np.abs(np.asarray(a)[:, None] - np.asarray(b)[None, :])
    return max(d.min(axis=1).max(), d.min(axis=0).max())


def torus_extremes(radii, n=721):
    """min/max of |sum r_k t_k| over a dense grid on the torus (first angle fixed)."""
    theta = 2 * math.pi * np.arange(n) / n
    total = np.full((1,), radii[0], dtype=complex)
    for r in radii[1:]:
        total = (total[:, None] + r * np.exp(1j * theta)[None, :]).ravel()
    mod = np.abs(total)
    return mod.min(), mod.max()


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 60), st.integers(1, 60), st.integers(0, 10 ** 6))
def test_hausdorff_matches_brute_force(n, m, seed):
    rng = np.random.default_rng(seed)
    a = rng.normal(size=n) + 1j * rng.normal(size=n)
    b = rng.normal(size=m) + 1j * rng.normal(size=m)
    assert hausdorff_distance(a, b) == pytest.approx(brute_hausdorff(a, b), abs=1e-12)
    assert hausdorff_distance(a, b) == pytest.approx(hausdorff_distance(b, a), abs=1e-12)


def test_hausdorff_empty_rejected():
    with pytest.raises(EmptySet):
        hausdorff_distance([], [1j])


def test_doubling_grid_on_circle():
    approx = spectrum_frequency_grid(doubling_spec())
    assert hausdorff_distance(approx.points, circle(1.0, 2 ** -0.5)) <= 1e-2
    assert not rotational_invariance_check(approx, [math.pi]).passed


def test_constant_symbol_spectrum():
    approx = spectrum_frequency_grid(scalar_dilation_spec([3 - 1j], [1.0], dimension=2))
    assert np.allclose(approx.points, 3 - 1j) and approx.resolution == 0.0


def test_symbol_norm_sup_doubling():
    assert symbol_norm_sup(doubling_spec()) == pytest.approx(1 + 2 ** -0.5, abs=1e-12)


# the interior minimum of the three-term disc sits between grid nodes, so
# the oracle is only good to about one grid step (2 pi sum r / 721)
@pytest.mark.parametrize("spec_fn, radii, tol", [
    (two_term_spec, [2 ** -0.5, 3 ** -0.5], 1e-4),
    (three_term_spec, [2 ** -0.5, 3 ** -0.5, 5 ** -0.5], 2e-2),
])
def test_annulus_radii_against_dense_torus(spec_fn, radii, tol):
    r_in, r_out = annulus_radii(spec_fn())
    lo, hi = torus_extremes(radii)
    assert r_out == pytest.approx(hi, abs=1e-12)
    assert r_in == pytest.approx(lo, abs=tol)


def test_two_term_radii_values():
    r_in, r_out = annulus_radii(two_term_spec())
    assert r_in == pytest.approx(0.129757, abs=1e-6)
    assert r_out == pytest.approx(1.284457, abs=1e-6)


def test_torus_needs_independence():
    with pytest.raises(HypothesisNotMet):
        spectrum_torus(doubling_spec(), samples=100)
    with pytest.raises(HypothesisNotMet):
        annulus_analytic(scalar_dilation_spec([1, 1], [2, 4]))


def test_torus_is_reproducible():
    a = spectrum_torus(two_term_spec(), samples=5000, seed=3)
    b = spectrum_torus(two_term_spec(), samples=5000, seed=3)
    assert np.array_equal(a.points, b.points)


def test_torus_cloud_inside_annulus():
    spec = three_term_spec()
    approx = spectrum_torus(spec, samples=20_000)
    r_in, r_out = annulus_radii(spec)
    assert approx.max_modulus() <= r_out + 1e-12
    assert approx.min_modulus() >= r_in - 1e-12


def test_analytic_annulus_resolution_and_invariance():
    approx = annulus_analytic(two_term_spec())
    assert approx.annulus == pytest.approx(annulus_radii(two_term_spec()))
    assert rotational_invariance_check(approx, [0.3, 1.7, 4.0]).passed


def test_analytic_curve_doubling():
    approx = analytic_curve(doubling_spec(), samples=4000)
    assert approx.metadata["period"] == pytest.approx(2 * math.pi / math.log(2), rel=1e-12)
    assert np.allclose(np.abs(approx.points - 1), 2 ** -0.5, atol=1e-12)


@pytest.mark.parametrize("spec_fn", [two_term_spec, three_term_spec, lambda: prime_family().truncation(8)])
def test_grid_and_torus_agree_for_independent_cases(spec_fn):
    spec = spec_fn()
    grid = spectrum_frequency_grid(spec)
    torus = spectrum_torus(spec, samples=200_000)
    assert hausdorff_distance(grid.points, torus.points) <= grid.resolution + torus.resolution


def test_invariance_rejects_off_center_cloud():
    pts = circle(0.5, 0.2, 2000)
    approx = SpectrumApprox(pts, "test", 1e-3, len(pts))
    verdict = rotational_invariance_check(approx, [0.5])
    assert not verdict.passed
    assert verdict.distances[0.5] > 0.1


@settings(max_examples=20, deadline=None)
@given(st.floats(0.1, 2.0), st.floats(0.0, 2 * math.pi))
def test_invariance_accepts_centered_circle(radius, theta):
    pts = circle(0.0, radius, 4000)
    approx = SpectrumApprox(pts, "test", radius * 2 * math.pi / 4000, len(pts))
    assert rotational_invariance_check(approx, [theta]).passed


def test_point_spectrum_identity():
    spec = scalar_dilation_spec([2 - 1j], [1.0], dimension=2)
    ps = point_spectrum(spec)
    assert ps.values == [2 - 1j]
    cls = weyl_classify(spec, None, ps)
    assert cls.weyl_equals_spectrum is True


def test_point_spectrum_positive_two_term_empty():
    assert point_spectrum(two_term_spec()).values == []


@pytest.mark.parametrize("d", [1, 2])
def test_point_spectrum_reflection(d):
    spec = scalar_dilation_spec([1.5], [-1.0], dimension=d)
    values = sorted(point_spectrum(spec).values, key=lambda z: z.real)
    assert values == pytest.approx([-1.5, 1.5], abs=1e-12)
    assert weyl_classify(spec, None, point_spectrum(spec)).weyl_equals_spectrum is True


def test_point_spectrum_identity_plus_reflection():
    spec = scalar_dilation_spec([1, 1], [1.0, -1.0])
    values = sorted(point_spectrum(spec).values, key=lambda z: z.real)
    assert values == pytest.approx([0.0, 2.0], abs=1e-12)


def test_point_spectrum_mixed_nonconstant_is_empty():
    assert point_spectrum(scalar_dilation_spec([1, 1], [2.0, -3.0])).values == []


def test_weyl_on_annulus():
    spec = two_term_spec()
    approx = spectrum_torus(spec, samples=50_000)
    cls = weyl_classify(spec, approx, point_spectrum(spec))
    assert cls.weyl_equals_spectrum is True and cls.pi00 == []


def test_weyl_requires_independence():
    spec = doubling_spec()
    approx = spectrum_frequency_grid(spec)
    with pytest.raises(HypothesisNotMet):
        weyl_classify(spec, approx, point_spectrum(spec))


def test_truncation_steps_within_tail_bound():
    fam = GeometricPrimeFamily(0.5)
    steps = truncation_convergence(fam, [2, 3], samples=20_000)
    for step in steps:
        assert step.within_bound
        assert step.bound == pytest.approx(fam.tail(step.order))


def test_general_family_eigenvalue_cloud():
    # symbol of I + J is constant: eigenvalues 0 and 2
    spec = validate_spec(2, [(0, 1, np.eye(2)), (1, 1, [[0, 1], [1, 0]])])
    approx = spectrum_frequency_grid(spec)
    near = np.minimum(np.abs(approx.points), np.abs(approx.points - 2))
    assert np.max(near) < 1e-12
    _, rel = family_independence(spec)
    assert not rel.independent
