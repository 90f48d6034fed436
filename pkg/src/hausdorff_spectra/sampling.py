"""Frequency grids and torus samplers."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

PERIODS = 30
PHASE_STEP = 0.05


@dataclass(frozen=True)
class GridPlan:
    """Product grid along the directions that the symbol actually depends on.

    ``axes`` holds the 1-d coordinate arrays, ``directions`` the matching
    unit vectors in R^d; frequency point = sum_j axes[j][i_j] * directions[j].
    """

    directions: np.ndarray
    axes: tuple
    span: tuple
    step: tuple
    coarsened: bool = False

    @property
    def shape(self):
        return tuple(len(a) for a in self.axes)

    @property
    def size(self):
        return int(np.prod(self.shape)) if self.axes else 1

    def points(self) -> np.ndarray:
        d = self.directions.shape[1]
        if not self.axes:
            return np.zeros((1, d))
        mesh = np.meshgrid(*self.axes, indexing="ij")
        coords = np.stack([m.ravel() for m in mesh], axis=-1)
        return coords @ self.directions

    def describe(self) -> dict:
        return {"directions": self.directions.tolist(), "span": list(self.span),
                "step": list(self.step), "shape": list(self.shape), "coarsened": self.coarsened}


def active_directions(log_rates: np.ndarray, rtol: float = 1e-12) -> np.ndarray:
    """Orthonormal basis of the row space of the log-modulus matrix."""
    if log_rates.size == 0 or not np.any(log_rates):
        return np.zeros((0, log_rates.shape[1]))
    _, sv, vt = np.linalg.svd(log_rates)
    rank = int(np.sum(sv > rtol * sv[0]))
    return vt[:rank]


def frequency_grid(log_rates, span=None, step=None, max_samples: int = 2_000_000) -> GridPlan:
    """Grid covering [-S, S] along each active direction with step h.

    Automatic choices: S makes the slowest nonzero phase sweep ``PERIODS``
    full turns on each side of the origin; h keeps the fastest phase advance
    below ``PHASE_STEP`` radians.
    """
    log_rates = np.atleast_2d(np.asarray(log_rates, dtype=float))
    dirs = active_directions(log_rates)
    if len(dirs) == 0:
        return GridPlan(np.zeros((0, log_rates.shape[1])), (), (), ())
    # a deterministic orientation for each direction
    for j in range(len(dirs)):
        lead = int(np.argmax(np.abs(dirs[j])))
        if dirs[j, lead] < 0:
            dirs[j] = -dirs[j]
    spans, steps = [], []
    for v in dirs:
        rates = np.abs(log_rates @ v)
        rates = rates[rates > 1e-12 * max(rates.max(), 1e-300)]
        spans.append(PERIODS * 2 * math.pi / rates.min() if span is None else float(span))
        steps.append(PHASE_STEP / rates.max() if step is None else float(step))
    counts = [2 * int(math.floor(S / h)) + 1 for S, h in zip(spans, steps)]
    coarsened = False
    total = int(np.prod(counts))
    while total > max_samples:
        # odd point counts round up, so shrink until the budget really holds
        factor = 1.01 * (total / max_samples) ** (1.0 / len(counts))
        steps = [h * factor for h in steps]
        counts = [2 * int(math.floor(S / h)) + 1 for S, h in zip(spans, steps)]
        total = int(np.prod(counts))
        coarsened = True
    axes = tuple(h * np.arange(-(c // 2), c // 2 + 1) for h, c in zip(steps, counts))
    return GridPlan(dirs, axes, tuple(spans), tuple(steps), coarsened)


def kronecker_alphas(dim: int) -> np.ndarray:
    """Generalized golden-ratio shifts: powers of the root of x^(dim+1) = x + 1."""
    g = 2.0
    for _ in range(100):
        g = (1.0 + g) ** (1.0 / (dim + 1))
    return np.array([g ** -(j + 1) for j in range(dim)]) % 1.0


def torus_points(dim: int, count: int, seed: int = 0, random_count: int = 10_000) -> np.ndarray:
    """Angles in [0, 1)^dim: a Kronecker sequence plus seeded uniform points."""
    alphas = kronecker_alphas(dim)
    n = np.arange(1, count + 1, dtype=float)[:, None]
    lattice = (0.5 + n * alphas[None, :]) % 1.0
    if random_count <= 0:
        return lattice
    rng = np.random.default_rng(seed)
    return np.vstack([lattice, rng.random((random_count, dim))])
