import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from hausdorff_spectra.errors import NoTailFormula
from hausdorff_spectra.families import CustomTailFamily, FiniteFamily, GeometricPrimeFamily, primes
from hausdorff_spectra.model import make_entry, scalar_dilation_spec
from hausdorff_spectra.sampling import active_directions, frequency_grid, kronecker_alphas, torus_points


def test_primes():
    assert primes(10) == [2, 3, 5, 7, 11, 13, 17, 19, 23, 29]
    assert primes(1000)[-1] == 7919


def test_geometric_prime_truncation():
    fam = GeometricPrimeFamily(0.5)
    spec = fam.truncation(4)
    assert spec.indices == [1, 2, 3, 4]
    assert [e.matrix[0, 0] for e in spec.entries] == [2, 3, 5, 7]
    assert spec.coefficients.tolist() == [0.5, 0.25, 0.125, 0.0625]
    assert all(e.exact_eigenvalues is not None for e in spec.entries)


def test_geometric_prime_tail_matches_long_sum():
    fam = GeometricPrimeFamily(0.5)
    ps = primes(400)
    direct = math.fsum(2.0 ** -k / math.sqrt(ps[k - 1]) for k in range(6, 401))
    # the majorant may only overshoot, and only by a negligible amount
    assert direct <= fam.tail(5) <= direct + 1e-20


def test_finite_family_tail():
    spec = scalar_dilation_spec([1, 2, 3], [2, 3, 5], indices=[1, 2, 3])
    fam = FiniteFamily(spec)
    assert fam.tail(3) == 0.0
    assert fam.tail(1) == pytest.approx(2 / math.sqrt(3) + 3 / math.sqrt(5), abs=1e-15)


def test_custom_tail():
    entries = [make_entry(k, 1.0, [[k + 1.0]]) for k in (1, 2, 3)]
    fam = CustomTailFamily(1, entries, tail_constant=2.0, tail_ratio=0.5)
    assert fam.tail(2) == pytest.approx(0.5 + 2.0 * 0.5 ** 3, abs=1e-15)
    assert len(fam.truncation(2).entries) == 2
    with pytest.raises(NoTailFormula):
        CustomTailFamily(1, entries).tail(2)


def test_active_directions_rank():
    rates = np.array([[0.0, 0.0], [math.log(2), 0.0]])
    dirs = active_directions(rates)
    assert dirs.shape == (1, 2)
    assert abs(abs(dirs[0, 0]) - 1) < 1e-15


def test_auto_grid_rules():
    rates = np.array([[0.0], [math.log(2)]])
    plan = frequency_grid(rates)
    assert plan.span[0] == pytest.approx(30 * 2 * math.pi / math.log(2), rel=1e-15)
    assert plan.step[0] == pytest.approx(0.05 / math.log(2), rel=1e-15)
    pts = plan.points()
    assert pts.min() >= -plan.span[0] - 1e-12 and pts.max() <= plan.span[0] + 1e-12
    assert len(pts) % 2 == 1 and np.any(pts == 0)


def test_grid_is_coarsened_to_budget():
    rates = np.diag([1.0, 2.0, 3.0])
    plan = frequency_grid(rates, span=50.0, step=0.01, max_samples=100_000)
    assert plan.coarsened and plan.size <= 100_000


def test_constant_symbol_grid_is_single_point():
    plan = frequency_grid(np.zeros((2, 3)))
    assert plan.size == 1 and plan.points().shape == (1, 3)


def test_kronecker_alphas_root():
    g = 1 / kronecker_alphas(1)[0]
    assert g * g == pytest.approx(g + 1, abs=1e-12)  # golden ratio


@settings(max_examples=20, deadline=None)
@given(st.integers(1, 8), st.integers(1, 500), st.integers(0, 100))
def test_torus_points_in_unit_cube(dim, count, seed):
    pts = torus_points(dim, count, seed, random_count=7)
    assert pts.shape == (count + 7, dim)
    assert np.all((pts >= 0) & (pts < 1))
    assert np.array_equal(pts, torus_points(dim, count, seed, random_count=7))
