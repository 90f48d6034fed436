"""Operator data, validation and simultaneous diagonalization.

A discrete Hausdorff operator acts on functions on R^d by

    (H f)(x) = sum_k c(k) f(A(k) x)

with invertible, symmetric, pairwise commuting matrices A(k).  Everything
downstream (symbols, spectra) works in the common eigenbasis of the family,
so this module also computes that basis, the sign pattern of every
eigenvalue tuple and the octant-pair cells built from those patterns.

Octant indices are 0-based throughout: octant ``j`` and ``j + 2**(d-1)``
are antipodal.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .errors import (
    DegenerateFamily,
    DuplicateMatrix,
    ExactEigenvalueMismatch,
    NonCommuting,
    NonInvertible,
    NonSymmetric,
    SpecValidationError,
)

TAU_DIAG = 1e-8
TAU_ORTH = 1e-10
TAU_EIG = 1e-9
DET_THRESHOLD = 1e-12
LOG_ZERO = 1e-12


def _structure_tol(matrices):
    scale = max((float(np.max(np.abs(m))) for m in matrices), default=0.0)
    return 1e-10 * (1.0 + scale)


@dataclass(frozen=True)
class ExactPower:
    """The real number ``sign * base**(num/den)``."""

    sign: int
    base: int
    num: int
    den: int = 1

    def __post_init__(self):
        if self.sign not in (-1, 1):
            raise SpecValidationError(f"sign must be -1 or +1, got {self.sign}")
        if self.base < 2:
            raise SpecValidationError(f"base must be >= 2, got {self.base}")
        if self.den <= 0:
            raise SpecValidationError(f"den must be positive, got {self.den}")

    @property
    def exponent(self) -> Fraction:
        return Fraction(self.num, self.den)

    @property
    def log_abs(self) -> float:
        return float(self.exponent) * math.log(self.base)

    @property
    def value(self) -> float:
        return self.sign * math.exp(self.log_abs)


@dataclass(frozen=True, eq=False)
class ScaleEntry:
    k: int
    coefficient: complex
    matrix: np.ndarray
    exact_eigenvalues: tuple[ExactPower, ...] | None = None

    @property
    def det(self) -> float:
        return float(np.linalg.det(self.matrix))

    @property
    def weight(self) -> complex:
        """c(k) |det A(k)|^{-1/2}, the modulus-carrying factor of every symbol."""
        return self.coefficient / math.sqrt(abs(self.det))


@dataclass(frozen=True, eq=False)
class OperatorSpec:
    dimension: int
    entries: tuple[ScaleEntry, ...]
    n2: float

    @property
    def indices(self) -> list[int]:
        return [e.k for e in self.entries]

    @property
    def coefficients(self) -> np.ndarray:
        return np.array([e.coefficient for e in self.entries], dtype=complex)

    @property
    def matrices(self) -> np.ndarray:
        return np.stack([e.matrix for e in self.entries])

    @property
    def weights(self) -> np.ndarray:
        return np.array([e.weight for e in self.entries], dtype=complex)

    def is_scalar_dilation(self) -> bool:
        """True when every A(k) is a multiple of the identity."""
        eye = np.eye(self.dimension)
        for e in self.entries:
            a = e.matrix[0, 0]
            if np.max(np.abs(e.matrix - a * eye)) > _structure_tol([e.matrix]):
                return False
        return True

    def is_zero(self) -> bool:
        return all(e.coefficient == 0 for e in self.entries)

    def nonzero_entries(self) -> list[ScaleEntry]:
        return [e for e in self.entries if e.coefficient != 0]

    def restrict(self, keep) -> "OperatorSpec":
        """Sub-operator over the entries whose index satisfies ``keep``."""
        entries = [e for e in self.entries if keep(e.k)]
        if not entries:
            raise SpecValidationError("restriction leaves no entries")
        return OperatorSpec(self.dimension, tuple(entries), _n2(entries))


def _n2(entries) -> float:
    return math.fsum(abs(e.weight) for e in entries)


def make_entry(k, coefficient, matrix, exact=None, dimension=None) -> ScaleEntry:
    m = np.atleast_2d(np.asarray(matrix, dtype=float))
    if dimension is not None and m.shape != (dimension, dimension):
        raise SpecValidationError(f"entry k={k}: matrix shape {m.shape} != ({dimension}, {dimension})")
    if m.shape[0] != m.shape[1]:
        raise SpecValidationError(f"entry k={k}: matrix is not square")
    if exact is not None:
        exact = tuple(x if isinstance(x, ExactPower) else ExactPower(*x) for x in exact)
    return ScaleEntry(int(k), complex(coefficient), m, exact)


def validate_spec(dimension: int, entries) -> OperatorSpec:
    """Check a raw entry list and return an immutable ``OperatorSpec``.

    ``entries`` may hold ``ScaleEntry`` objects or ``(k, c, matrix[, exact])``
    tuples.
    """
    if dimension < 1:
        raise SpecValidationError("dimension must be positive")
    built = []
    for raw in entries:
        e = raw if isinstance(raw, ScaleEntry) else make_entry(*raw, dimension=dimension)
        if e.matrix.shape != (dimension, dimension):
            raise SpecValidationError(f"entry k={e.k}: matrix must be {dimension}x{dimension}")
        built.append(e)
    if not built:
        raise SpecValidationError("entry list is empty")
    ks = [e.k for e in built]
    if len(set(ks)) != len(ks):
        raise SpecValidationError("entry indices k must be distinct")

    tol = _structure_tol([e.matrix for e in built])
    for e in built:
        det = np.linalg.det(e.matrix)
        if abs(det) <= DET_THRESHOLD:
            raise NonInvertible(e.k, det)
        asym = float(np.max(np.abs(e.matrix - e.matrix.T)))
        if asym > tol:
            raise NonSymmetric(e.k, asym)
    for a, b in itertools.combinations(built, 2):
        if np.array_equal(a.matrix, b.matrix) or np.max(np.abs(a.matrix - b.matrix)) <= tol:
            raise DuplicateMatrix(a.k, b.k)
        comm = float(np.max(np.abs(a.matrix @ b.matrix - b.matrix @ a.matrix)))
        if comm > tol:
            raise NonCommuting(a.k, b.k, comm)
    for e in built:
        if e.exact_eigenvalues is None:
            continue
        if len(e.exact_eigenvalues) != dimension:
            raise SpecValidationError(f"entry k={e.k}: need {dimension} exact eigenvalues")
        got = np.sort(np.linalg.eigvalsh(e.matrix))
        want = np.sort([x.value for x in e.exact_eigenvalues])
        gap = float(np.max(np.abs(got - want) / (1.0 + np.abs(want))))
        if gap > TAU_EIG:
            raise ExactEigenvalueMismatch(e.k, gap)
    return OperatorSpec(dimension, tuple(built), _n2(built))


def scalar_dilation_spec(coefficients, dilations, dimension=1, indices=None, exact=None) -> OperatorSpec:
    """Spec of f(x) -> sum_k c(k) f(a(k) x) on R^d.

    ``exact`` optionally gives one ``ExactPower`` (or tuple) per dilation.
    """
    if indices is None:
        indices = range(len(coefficients))
    eye = np.eye(dimension)
    entries = []
    for pos, (k, c, a) in enumerate(zip(indices, coefficients, dilations)):
        ex = None
        if exact is not None and exact[pos] is not None:
            p = exact[pos] if isinstance(exact[pos], ExactPower) else ExactPower(*exact[pos])
            ex = (p,) * dimension
        entries.append(make_entry(k, c, a * eye, ex))
    return validate_spec(dimension, entries)


@dataclass(frozen=True)
class OctantScheme:
    """Ordered sign vectors of the 2^d open orthants, antipodal by halves."""

    dimension: int
    signs: np.ndarray

    def __post_init__(self):
        signs = np.asarray(self.signs, dtype=int)
        n = 2 ** self.dimension
        if signs.shape != (n, self.dimension):
            raise ValueError(f"expected {n} sign vectors of length {self.dimension}")
        if len({tuple(s) for s in signs}) != n:
            raise ValueError("octant sign vectors must be distinct")
        half = n // 2
        if not np.array_equal(signs[half:], -signs[:half]):
            raise ValueError("octant j + 2^(d-1) must be the antipode of octant j")
        object.__setattr__(self, "signs", signs)

    @classmethod
    def standard(cls, dimension: int) -> "OctantScheme":
        half = 2 ** (dimension - 1)
        first = []
        for j in range(half):
            bits = [(j >> (dimension - 2 - b)) & 1 for b in range(dimension - 1)]
            first.append([1] + [1 - 2 * bit for bit in bits])
        first = np.array(first, dtype=int).reshape(half, dimension)
        return cls(dimension, np.vstack([first, -first]))

    @property
    def size(self) -> int:
        return 2 ** self.dimension

    def permuted(self, perm) -> "OctantScheme":
        """Relabel the first half by ``perm`` (and the antipodes alike)."""
        half = self.size // 2
        perm = list(perm)
        first = self.signs[:half][perm]
        return OctantScheme(self.dimension, np.vstack([first, -first]))


@dataclass(frozen=True, eq=False)
class DiagonalizedFamily:
    diagonalizer: np.ndarray
    eigen_tuples: np.ndarray
    sign_patterns: np.ndarray
    indices: tuple[int, ...]
    octants: OctantScheme
    omega: dict = field(repr=False)
    residual: float = 0.0

    @property
    def log_abs(self) -> np.ndarray:
        """log|a_l(k)|, one row per entry; rounding noise around |a| = 1 is snapped to 0."""
        logs = np.log(np.abs(self.eigen_tuples))
        return np.where(np.abs(logs) <= LOG_ZERO, 0.0, logs)

    def cell_masks(self) -> np.ndarray:
        """0/1 array ``M[pos, i, j]``: entry ``pos`` lies in Omega_ij."""
        n = self.octants.size
        masks = np.zeros((len(self.indices), n, n))
        pos_of = {k: p for p, k in enumerate(self.indices)}
        for (i, j), ks in self.omega.items():
            for k in ks:
                masks[pos_of[k], i, j] = 1.0
        return masks


def _offdiag(mats):
    d = mats.shape[-1]
    mask = ~np.eye(d, dtype=bool)
    return float(np.max(np.abs(mats[:, mask]))) if d > 1 else 0.0


def _jacobi_sweeps(mats, basis, max_sweeps=50, threshold=1e-15):
    """Joint Jacobi rotations minimizing the summed off-diagonal mass."""
    d = basis.shape[0]
    work = np.einsum("ji,mjk,kl->mil", basis, mats, basis)
    for _ in range(max_sweeps):
        rotated = False
        for p in range(d - 1):
            for q in range(p + 1, d):
                g = np.vstack([work[:, p, p] - work[:, q, q], work[:, p, q] + work[:, q, p]])
                gg = g @ g.T
                ton = gg[0, 0] - gg[1, 1]
                toff = gg[0, 1] + gg[1, 0]
                theta = 0.5 * math.atan2(toff, ton + math.hypot(ton, toff))
                c, s = math.cos(theta), math.sin(theta)
                if abs(s) <= threshold:
                    continue
                rotated = True
                rot = np.eye(d)
                rot[p, p] = rot[q, q] = c
                rot[p, q] = -s
                rot[q, p] = s
                work = np.einsum("ji,mjk,kl->mil", rot, work, rot)
                basis = basis @ rot
        if not rotated:
            break
    return basis, work


def _canonical_columns(basis, diagonals):
    # sort columns lexicographically by their eigenvalues listed in entry order
    order = sorted(range(basis.shape[1]), key=lambda col: tuple(diagonals[:, col]))
    basis = basis[:, order]
    diagonals = diagonals[:, order]
    for col in range(basis.shape[1]):
        lead = int(np.argmax(np.abs(basis[:, col])))
        if basis[lead, col] < 0:
            basis[:, col] = -basis[:, col]
    return basis, diagonals


def simultaneous_diagonalize(spec: OperatorSpec, octants: OctantScheme | None = None,
                             seed: int = 0, restarts: int = 5) -> DiagonalizedFamily:
    """Common orthogonal eigenbasis C of the commuting family.

    The basis is seeded with the eigenvectors of a random combination of the
    matrices and polished by joint Jacobi sweeps; a fresh combination is
    tried if the residual stays above ``TAU_DIAG``.
    """
    mats = spec.matrices
    d = spec.dimension
    octants = octants or OctantScheme.standard(d)
    sorted_pos = sorted(range(len(spec.entries)), key=lambda p: spec.entries[p].k)

    if _offdiag(mats) == 0.0:
        basis = np.eye(d)
        diagonals = np.einsum("mii->mi", mats).copy()
        residual = 0.0
    else:
        rng = np.random.default_rng(seed)
        for _ in range(restarts):
            w = rng.standard_normal(len(mats))
            _, basis = np.linalg.eigh(np.tensordot(w, mats, axes=1))
            basis, work = _jacobi_sweeps(mats, basis)
            residual = _offdiag(work)
            if residual <= TAU_DIAG:
                break
        else:
            raise DegenerateFamily(f"joint diagonalization residual {residual:.3e} exceeds {TAU_DIAG}")
        diagonals = np.einsum("mii->mi", work).copy()
        basis, ordered = _canonical_columns(basis, diagonals[sorted_pos])
        diagonals = np.einsum("ji,mjk,kl->mil", basis, mats, basis)
        residual = _offdiag(diagonals)
        diagonals = np.einsum("mii->mi", diagonals).copy()

    if np.max(np.abs(basis.T @ basis - np.eye(d))) > TAU_ORTH:
        raise DegenerateFamily("diagonalizer lost orthogonality")
    if np.any(diagonals == 0):
        raise DegenerateFamily("zero eigenvalue in an invertible family")
    signs = np.where(diagonals > 0, 1, -1)
    fam = DiagonalizedFamily(basis, diagonals, signs, tuple(spec.indices), octants, {}, residual)
    object.__setattr__(fam, "omega", build_omega(fam, octants))
    return fam


def build_omega(diag: DiagonalizedFamily, octants: OctantScheme) -> dict:
    """Map (i, j) to the frozenset of k whose sign pattern sends octant i to j."""
    n = octants.size
    by_pattern = {}
    for k, pattern in zip(diag.indices, diag.sign_patterns):
        by_pattern.setdefault(tuple(int(v) for v in pattern), set()).add(k)
    omega = {}
    for i in range(n):
        for j in range(n):
            eps = tuple(int(v) for v in octants.signs[i] * octants.signs[j])
            omega[(i, j)] = frozenset(by_pattern.get(eps, ()))
    return omega


def pattern_kind(diag: DiagonalizedFamily) -> str:
    """'positive', 'negative', 'definite' (mixed +/- definite) or 'general'."""
    pos = np.all(diag.sign_patterns > 0, axis=1)
    neg = np.all(diag.sign_patterns < 0, axis=1)
    if np.all(pos):
        return "positive"
    if np.all(neg):
        return "negative"
    if np.all(pos | neg):
        return "definite"
    return "general"
