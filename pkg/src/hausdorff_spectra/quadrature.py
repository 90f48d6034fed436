"""Tensor-product Gauss-Legendre quadrature with panel refinement."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class QuadraturePlan:
    order: int = 16
    panels: int = 4
    rtol: float = 1e-8
    atol: float = 1e-300
    max_levels: int = 8
    max_points: int = 40_000_000


@dataclass(frozen=True)
class QuadratureResult:
    value: float
    error: float
    levels: int
    points: int


def _split(lo, hi, pieces):
    """Cut [lo, hi] into ``pieces`` panels, geometrically when far from 0."""
    if lo * hi > 0 and max(abs(lo), abs(hi)) / min(abs(lo), abs(hi)) > 4:
        sign = 1.0 if lo > 0 else -1.0
        a, b = sorted((abs(lo), abs(hi)))
        edges = sign * np.geomspace(a, b, pieces + 1)
        return np.sort(edges)
    return np.linspace(lo, hi, pieces + 1)


def axis_rule(lo, hi, breakpoints, pieces, order):
    """Nodes and weights on one axis honouring the breakpoints."""
    cuts = sorted({lo, hi, *(b for b in breakpoints if lo < b < hi)})
    x0, w0 = np.polynomial.legendre.leggauss(order)
    xs, ws = [], []
    for a, b in zip(cuts[:-1], cuts[1:]):
        span = abs(math.log(b / a)) if a * b > 0 else 0.0
        # geometric panels get extra pieces for long log-ranges
        n = pieces * max(1, int(math.ceil(span / math.log(4)))) if span else pieces
        edges = _split(a, b, n)
        for p, q in zip(edges[:-1], edges[1:]):
            half = 0.5 * (q - p)
            xs.append(0.5 * (p + q) + half * x0)
            ws.append(half * w0)
    return np.concatenate(xs), np.concatenate(ws)


def _tensor_sum(fn, rules, chunk=1_000_000):
    nodes = [r[0] for r in rules]
    weights = [r[1] for r in rules]
    d = len(rules)
    if d == 1:
        return float(np.sum(weights[0] * fn(nodes[0][:, None])))
    # iterate over the first axis in blocks to bound memory
    rest = np.meshgrid(*nodes[1:], indexing="ij")
    rest_pts = np.stack([m.ravel() for m in rest], axis=-1)
    rest_w = np.prod(np.meshgrid(*weights[1:], indexing="ij"), axis=0).ravel()
    total = 0.0
    block = max(1, chunk // len(rest_pts))
    for i in range(0, len(nodes[0]), block):
        xi = nodes[0][i:i + block]
        pts = np.concatenate([np.repeat(xi, len(rest_pts))[:, None],
                              np.tile(rest_pts, (len(xi), 1))], axis=1)
        vals = fn(pts).reshape(len(xi), len(rest_pts))
        total += float(np.sum(weights[0][i:i + block, None] * vals * rest_w[None, :]))
    return total


def integrate(fn, box, breakpoints=None, plan: QuadraturePlan | None = None) -> QuadratureResult:
    """Integrate ``fn`` (points of shape (N, d) -> values) over a box.

    Each panel is halved per level until two successive levels agree to
    ``rtol``; the last difference is the error estimate.
    """
    plan = plan or QuadraturePlan()
    d = len(box)
    breakpoints = breakpoints or [[] for _ in range(d)]
    prev = None
    err = math.inf
    pieces = plan.panels
    for level in range(plan.max_levels + 1):
        rules = [axis_rule(lo, hi, bp, pieces, plan.order) for (lo, hi), bp in zip(box, breakpoints)]
        npts = int(np.prod([len(r[0]) for r in rules]))
        if npts > plan.max_points and prev is not None:
            break
        value = _tensor_sum(fn, rules)
        if prev is not None:
            err = abs(value - prev)
            if err <= plan.rtol * abs(value) + plan.atol:
                break
        prev = value
        pieces *= 2
    return QuadratureResult(value, err, level, npts)
