"""Scalar, conjugate and matrix symbols, and the N_p norm bound.

In the common eigenbasis with eigenvalue tuples a(k), every symbol is a
finite exponential sum in the frequency s in R^d with terms

    w_k(s) = c(k) |det A(k)|^{-1/2} exp(-i s . log|a(k)|).

The matrix symbol places w_k(s) in every cell (i, j) whose octant pair
matches the sign pattern of a(k).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import NotScalarDilation
from .families import Family, TruncationBound
from .model import DiagonalizedFamily, OctantScheme, OperatorSpec, pattern_kind, simultaneous_diagonalize


def norm_bound(spec: OperatorSpec, p: float) -> float:
    """N_p(c, A) = sum_k |c(k)| |det A(k)|^{-1/p}; p = inf gives exponent 0."""
    if p < 1:
        raise ValueError("p must lie in [1, inf]")
    expo = 0.0 if math.isinf(p) else -1.0 / p
    return math.fsum(abs(e.coefficient) * abs(e.det) ** expo for e in spec.entries)


@dataclass(frozen=True, eq=False)
class SymbolEvaluation:
    frequency: np.ndarray
    matrix: np.ndarray
    scalar: complex | None = None
    conjugate_scalar: complex | None = None

    def norm(self) -> float:
        return float(np.linalg.norm(self.matrix, 2))

    def to_dict(self) -> dict:
        out = {"frequency": [float(v) for v in self.frequency],
               "matrix": [[[z.real, z.imag] for z in row] for row in self.matrix.tolist()],
               "norm": self.norm()}
        if self.scalar is not None:
            out["scalar"] = [self.scalar.real, self.scalar.imag]
        if self.conjugate_scalar is not None:
            out["conjugate_scalar"] = [self.conjugate_scalar.real, self.conjugate_scalar.imag]
        return out


class SymbolField:
    """Vectorized evaluator of all symbols of one operator.

    Frequencies are arrays of shape ``(..., d)``; results carry the same
    leading shape.
    """

    def __init__(self, spec: OperatorSpec, diag: DiagonalizedFamily | None = None,
                 octants: OctantScheme | None = None):
        self.spec = spec
        if diag is None or (octants is not None and diag.octants is not octants):
            diag = simultaneous_diagonalize(spec, octants=octants)
        self.diag = diag
        self.dimension = spec.dimension
        self.size = diag.octants.size
        self.radii = spec.weights
        self.log_rates = diag.log_abs
        self.masks = diag.cell_masks()
        self.kind = pattern_kind(diag)
        self.positive = np.all(diag.sign_patterns > 0, axis=1)

    @property
    def n2(self) -> float:
        return self.spec.n2

    def weights(self, s) -> np.ndarray:
        s = np.asarray(s, dtype=float)
        phase = s @ self.log_rates.T
        return self.radii * np.exp(-1j * phase)

    def torus_weights(self, t) -> np.ndarray:
        """Weights with each exponential replaced by a free unimodular t_k."""
        return self.radii * np.asarray(t)

    def assemble(self, w) -> np.ndarray:
        """Matrix symbol from per-entry weights of shape ``(..., m)``."""
        return np.tensordot(w, self.masks, axes=([-1], [0]))

    def matrices(self, s) -> np.ndarray:
        return self.assemble(self.weights(s))

    def scalar(self, s) -> np.ndarray:
        return self.weights(s).sum(axis=-1)

    def split(self, w) -> tuple[np.ndarray, np.ndarray]:
        """(phi_plus, phi_minus): sums over positive / negative definite entries."""
        if self.kind == "general":
            raise NotScalarDilation("phi_plus/phi_minus need definite sign patterns")
        return (w * self.positive).sum(axis=-1), (w * ~self.positive).sum(axis=-1)

    def conjugate_from_weights(self, w) -> np.ndarray:
        sgn = np.where(self.positive, 1.0, -1.0)
        return (w * sgn).sum(axis=-1)

    def conjugate_scalar(self, s) -> np.ndarray:
        if not self.spec.is_scalar_dilation():
            raise NotScalarDilation("the conjugate scalar symbol is defined for A(k) = a(k) I only")
        return self.conjugate_from_weights(self.weights(s))

    def eigenvalues_from_weights(self, w) -> np.ndarray:
        """Eigenvalues of the assembled symbol, shape ``(N, r)``.

        Definite patterns give block matrices [[p I, q I], [q I, p I]] whose
        spectrum is {p + q, p - q}; all-positive families give p alone.
        """
        w = np.atleast_2d(w)
        if self.kind == "positive":
            return w.sum(axis=-1)[:, None]
        if self.kind in ("negative", "definite"):
            plus, minus = self.split(w)
            return np.stack([plus + minus, plus - minus], axis=-1)
        return np.linalg.eigvals(self.assemble(w))

    def evaluate(self, s) -> SymbolEvaluation:
        s = np.asarray(s, dtype=float).reshape(self.dimension)
        w = self.weights(s)
        conj = None
        if self.spec.is_scalar_dilation():
            conj = complex(self.conjugate_from_weights(w))
        return SymbolEvaluation(s, self.assemble(w), complex(w.sum()), conj)


def scalar_symbol(diag: DiagonalizedFamily, coeffs, s, weights=None) -> complex:
    """phi(s) = sum_k c(k) |det A(k)|^{-1/2} exp(-i s . log|a(k)|)."""
    a = np.abs(diag.eigen_tuples)
    r = np.asarray(coeffs, dtype=complex) / np.sqrt(np.prod(a, axis=1)) if weights is None else weights
    return complex(np.sum(r * np.exp(-1j * (np.log(a) @ np.asarray(s, dtype=float)))))


def conjugate_scalar_symbol(diag: DiagonalizedFamily, coeffs, s) -> complex:
    """phi*(s): like phi but each term carries sgn(a(k)); scalar dilations only."""
    tuples = diag.eigen_tuples
    if np.any(np.abs(tuples - tuples[:, :1]) > 1e-12 * (1 + np.abs(tuples[:, :1]))):
        raise NotScalarDilation("the conjugate scalar symbol is defined for A(k) = a(k) I only")
    a = np.abs(tuples)
    r = np.asarray(coeffs, dtype=complex) * np.sign(tuples[:, 0]) / np.sqrt(np.prod(a, axis=1))
    return complex(np.sum(r * np.exp(-1j * (np.log(a) @ np.asarray(s, dtype=float)))))


def matrix_symbol(diag: DiagonalizedFamily, coeffs, octants: OctantScheme, s) -> SymbolEvaluation:
    a = np.abs(diag.eigen_tuples)
    s = np.asarray(s, dtype=float)
    w = np.asarray(coeffs, dtype=complex) / np.sqrt(np.prod(a, axis=1)) * np.exp(-1j * (np.log(a) @ s))
    n = octants.size
    pos_of = {k: p for p, k in enumerate(diag.indices)}
    omega = diag.omega if diag.octants is octants else _omega_for(diag, octants)
    mat = np.zeros((n, n), dtype=complex)
    for (i, j), ks in omega.items():
        for k in ks:
            mat[i, j] += w[pos_of[k]]
    conj = None
    tuples = diag.eigen_tuples
    if np.all(np.abs(tuples - tuples[:, :1]) <= 1e-12 * (1 + np.abs(tuples[:, :1]))):
        conj = complex(np.sum(w * np.sign(tuples[:, 0])))
    return SymbolEvaluation(s, mat, complex(w.sum()), conj)


def _omega_for(diag, octants):
    from .model import build_omega
    return build_omega(diag, octants)


def truncated_symbol(family: Family, n: int, s) -> SymbolEvaluation:
    """Symbol of the truncation H^(n) (entries with |k| <= n)."""
    return SymbolField(family.truncation(n)).evaluate(s)


def tail_bound(family: Family, n: int) -> TruncationBound:
    return family.tail_bound(n)
