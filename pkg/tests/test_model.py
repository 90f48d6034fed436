import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from hausdorff_spectra.errors import (DuplicateMatrix, ExactEigenvalueMismatch, NonCommuting, NonInvertible,
                                      NonSymmetric, SpecValidationError)
from hausdorff_spectra.model import (ExactPower, OctantScheme, build_omega, pattern_kind, scalar_dilation_spec,
                                     simultaneous_diagonalize, validate_spec)


def rotation(theta):
    c, s = np.cos(theta), np.sin(theta)
    return np.array([[c, -s], [s, c]])


def test_scalar_spec_n2():
    spec = scalar_dilation_spec([1, 1], [1, 2])
    assert spec.n2 == pytest.approx(1 + 2 ** -0.5, abs=1e-15)
    assert spec.is_scalar_dilation()
    assert spec.indices == [0, 1]


def test_singular_matrix_rejected():
    with pytest.raises(NonInvertible) as err:
        validate_spec(2, [(0, 1, np.eye(2)), (3, 1, np.diag([1.0, 0.0]))])
    assert err.value.k == 3


def test_nonsymmetric_rejected():
    with pytest.raises(NonSymmetric):
        validate_spec(2, [(0, 1, [[1, 1], [0, 1]])])


def test_noncommuting_rejected():
    with pytest.raises(NonCommuting) as err:
        validate_spec(2, [(0, 1, np.diag([1.0, 2.0])), (1, 1, [[1, 1], [1, 3]])])
    assert (err.value.i, err.value.j) == (0, 1)


def test_duplicate_and_repeated_index_rejected():
    with pytest.raises(DuplicateMatrix):
        validate_spec(1, [(0, 1, [[2.0]]), (1, 3, [[2.0]])])
    with pytest.raises(SpecValidationError):
        validate_spec(1, [(0, 1, [[2.0]]), (0, 3, [[3.0]])])


def test_exact_eigenvalues_checked():
    validate_spec(1, [(0, 1, [[2 ** 0.5]], [(1, 2, 1, 2)])])
    with pytest.raises(ExactEigenvalueMismatch):
        validate_spec(1, [(0, 1, [[1.5]], [(1, 2, 1, 2)])])


def test_exact_power_value():
    x = ExactPower(-1, 8, 2, 3)
    assert x.value == pytest.approx(-4.0, rel=1e-15)
    with pytest.raises(SpecValidationError):
        ExactPower(1, 1, 1, 1)


def test_standard_octants():
    oc = OctantScheme.standard(2)
    assert oc.signs.tolist() == [[1, 1], [1, -1], [-1, -1], [-1, 1]]
    oc3 = OctantScheme.standard(3)
    assert np.array_equal(oc3.signs[4:], -oc3.signs[:4])
    assert len({tuple(s) for s in oc3.signs}) == 8


def test_octant_scheme_requires_antipodal_halves():
    with pytest.raises(ValueError):
        OctantScheme(2, [[1, 1], [1, -1], [-1, 1], [-1, -1]])


def test_diagonal_family_uses_identity():
    spec = validate_spec(2, [(0, 1, np.eye(2)), (1, 1, np.diag([2.0, -3.0]))])
    diag = simultaneous_diagonalize(spec)
    assert np.array_equal(diag.diagonalizer, np.eye(2))
    assert diag.eigen_tuples.tolist() == [[1, 1], [2, -3]]


def test_positive_family_omega_is_diagonal():
    spec = scalar_dilation_spec([1, 2, 3], [1, 2, 5], dimension=2)
    diag = simultaneous_diagonalize(spec)
    assert pattern_kind(diag) == "positive"
    for (i, j), ks in diag.omega.items():
        assert ks == (frozenset({0, 1, 2}) if i == j else frozenset())


def test_reflection_family_rotated_basis():
    spec = validate_spec(2, [(0, 1, np.eye(2)), (1, 1, [[0, 1], [1, 0]])])
    diag = simultaneous_diagonalize(spec)
    # the eigenvectors of the swap are (1, 1)/sqrt2 and (1, -1)/sqrt2
    assert abs(abs(diag.diagonalizer[0, 0]) - 2 ** -0.5) < 1e-12
    assert sorted(diag.eigen_tuples[1].tolist()) == pytest.approx([-1, 1], abs=1e-12)
    assert pattern_kind(diag) == "general"


def test_omega_partitions_patterns():
    spec = validate_spec(2, [(0, 1, np.diag([2.0, 3.0])), (1, 1, np.diag([-2.0, 5.0])),
                             (2, 1, np.diag([-1.0, -7.0]))])
    diag = simultaneous_diagonalize(spec)
    oc = diag.octants
    for (i, j), ks in diag.omega.items():
        for k in ks:
            pos = diag.indices.index(k)
            assert np.array_equal(diag.sign_patterns[pos], oc.signs[i] * oc.signs[j])
    # every entry appears in exactly 2^d cells
    for k in diag.indices:
        assert sum(k in ks for ks in diag.omega.values()) == 4


@st.composite
def commuting_families(draw):
    d = draw(st.integers(1, 3))
    m = draw(st.integers(1, 4))
    seed = draw(st.integers(0, 2 ** 32 - 1))
    rng = np.random.default_rng(seed)
    q, _ = np.linalg.qr(rng.standard_normal((d, d)))
    tuples = rng.uniform(0.3, 3.0, (m, d)) * rng.choice([-1, 1], (m, d))
    entries = [(k, 1.0, q @ np.diag(t) @ q.T) for k, t in enumerate(tuples)]
    return d, q, tuples, entries


@settings(max_examples=40, deadline=None)
@given(commuting_families())
def test_joint_diagonalization_recovers_eigenvalues(fam):
    d, q, tuples, entries = fam
    spec = validate_spec(d, entries)
    diag = simultaneous_diagonalize(spec)
    c = diag.diagonalizer
    assert np.max(np.abs(c.T @ c - np.eye(d))) < 1e-10
    for e, tup in zip(spec.entries, diag.eigen_tuples):
        assert np.max(np.abs(c.T @ e.matrix @ c - np.diag(tup))) < 1e-8
    # same multiset of eigenvalues per matrix
    for tup, want in zip(diag.eigen_tuples, tuples):
        assert np.sort(tup) == pytest.approx(np.sort(want), abs=1e-8)


@settings(max_examples=30, deadline=None)
@given(commuting_families(), st.randoms(use_true_random=False))
def test_omega_cells_follow_octant_relabeling(fam, rnd):
    d, _, _, entries = fam
    spec = validate_spec(d, entries)
    diag = simultaneous_diagonalize(spec)
    half = 2 ** (d - 1)
    perm = list(range(half))
    rnd.shuffle(perm)
    oc = diag.octants.permuted(perm)
    full = perm + [p + half for p in perm]
    omega = build_omega(diag, oc)
    for (i, j), ks in omega.items():
        assert ks == diag.omega[(full[i], full[j])]
