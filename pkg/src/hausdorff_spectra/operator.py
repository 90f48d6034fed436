"""Applying H to concrete functions, L2 norms and the sharpness construction."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .errors import BadExponent, BoxTooSmall
from .model import OperatorSpec
from .quadrature import QuadraturePlan, QuadratureResult, integrate

BOUNDARY_RTOL = 1e-6


@dataclass(frozen=True, eq=False)
class TestFunction:
    """A closed-form function on R^d with the data needed to integrate it.

    ``box`` encloses the numerically significant support and ``breakpoints``
    lists, per axis, where the function is not smooth.
    """

    __test__ = False  # not a pytest class

    evaluator: Callable[[np.ndarray], np.ndarray]
    dimension: int
    kind: str
    params: dict = field(default_factory=dict)
    box: tuple = ()
    breakpoints: tuple = ()
    exact_l2: float | None = None

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        return self.evaluator(x.reshape(-1, self.dimension)).reshape(x.shape[:-1] if x.ndim > 1 else ())


def gaussian(center, width: float = 1.0) -> TestFunction:
    """exp(-|x - center|^2 / width^2)."""
    center = np.atleast_1d(np.asarray(center, dtype=float))
    d = len(center)

    def f(x):
        return np.exp(-np.sum((x - center) ** 2, axis=-1) / width ** 2)

    box = tuple((c - 10 * width, c + 10 * width) for c in center)
    exact = (math.pi / 2) ** (d / 4) * width ** (d / 2)
    return TestFunction(f, d, "Gaussian", {"center": center.tolist(), "width": width}, box,
                        tuple(() for _ in range(d)), exact)


def indicator(lo, hi) -> TestFunction:
    lo = np.atleast_1d(np.asarray(lo, dtype=float))
    hi = np.atleast_1d(np.asarray(hi, dtype=float))

    def f(x):
        return np.all((x >= lo) & (x <= hi), axis=-1).astype(float)

    pad = 0.5 * (hi - lo)
    box = tuple((a - p, b + p) for a, b, p in zip(lo, hi, pad))
    return TestFunction(f, len(lo), "Indicator", {"lo": lo.tolist(), "hi": hi.tolist()}, box,
                        tuple((a, b) for a, b in zip(lo, hi)), float(np.sqrt(np.prod(hi - lo))))


def power_cutoff(exponent: float, t: float) -> TestFunction:
    """x^{-exponent} on (t, 1/t), zero elsewhere (d = 1)."""
    if not 0 < t < 1:
        raise ValueError("t must lie in (0, 1)")

    def f(x):
        x = x[:, 0]
        out = np.zeros_like(x)
        inside = (x > t) & (x < 1 / t)
        out[inside] = x[inside] ** -exponent
        return out

    q = 1 - 2 * exponent
    sq = 2 * math.log(1 / t) if abs(q) < 1e-15 else (t ** -q - t ** q) / q
    return TestFunction(f, 1, "PowerCutoff", {"exponent": exponent, "t": t}, ((t / 2, 2 / t),),
                        ((t, 1 / t),), math.sqrt(sq))


def custom(fn, dimension, box, breakpoints=None) -> TestFunction:
    bps = tuple(tuple(b) for b in breakpoints) if breakpoints else tuple(() for _ in range(dimension))
    return TestFunction(fn, dimension, "Custom", {}, tuple(tuple(b) for b in box), bps)


def apply(spec: OperatorSpec, f: TestFunction, x) -> np.ndarray:
    """(H f)(x) = sum_k c(k) f(A(k) x) for a point or a batch of points."""
    x = np.asarray(x, dtype=float)
    pts = x.reshape(-1, spec.dimension)
    total = np.zeros(len(pts), dtype=complex)
    for e in spec.entries:
        if e.coefficient != 0:
            total += e.coefficient * f.evaluator(pts @ e.matrix.T)
    return total.reshape(x.shape[:-1]) if x.ndim > 1 else total.reshape(()) if x.ndim == 1 and spec.dimension == len(x) else total


def _pullback_box(box, matrix):
    inv = np.linalg.inv(matrix)
    corners = np.array(list(itertools.product(*box)))
    img = corners @ inv.T
    return img.min(axis=0), img.max(axis=0)


def apply_function(spec: OperatorSpec, f: TestFunction) -> TestFunction:
    """H f as a ``TestFunction`` with merged support box and breakpoints."""
    d = spec.dimension
    lows, highs, bps = [], [], [set() for _ in range(d)]
    for e in spec.entries:
        if e.coefficient == 0:
            continue
        lo, hi = _pullback_box(f.box, e.matrix)
        lows.append(lo)
        highs.append(hi)
        diag = np.allclose(e.matrix, np.diag(np.diag(e.matrix)))
        if diag:
            for ax in range(d):
                for b in f.breakpoints[ax]:
                    bps[ax].add(b / e.matrix[ax, ax])
    if not lows:
        lows, highs = [np.array([b[0] for b in f.box])], [np.array([b[1] for b in f.box])]
    box = tuple(zip(np.min(lows, axis=0), np.max(highs, axis=0)))

    def hf(x):
        return apply(spec, f, x)

    return TestFunction(hf, d, "Custom", {"applied": f.kind}, box, tuple(tuple(sorted(b)) for b in bps))


def _check_boundary(f: TestFunction, box, scale):
    d = len(box)
    probes = np.polynomial.legendre.leggauss(9)[0]
    for ax in range(d):
        for side in (0, 1):
            axes = [0.5 * (lo + hi) + 0.5 * (hi - lo) * probes for lo, hi in box]
            axes[ax] = np.array([box[ax][side]])
            pts = np.stack([m.ravel() for m in np.meshgrid(*axes, indexing="ij")], axis=-1)
            edge = float(np.max(np.abs(f.evaluator(pts))))
            if edge > BOUNDARY_RTOL * max(scale, 1e-300):
                raise BoxTooSmall(f"|f| = {edge:.3e} on the boundary of axis {ax}")


def l2_norm(f: TestFunction, box=None, plan: QuadraturePlan | None = None) -> QuadratureResult:
    """||f||_2 by tensor Gauss-Legendre quadrature, with an error estimate."""
    box = tuple(box) if box is not None else f.box
    res = integrate(lambda x: np.abs(f.evaluator(x)) ** 2, box, [list(b) for b in f.breakpoints], plan)
    value = math.sqrt(max(res.value, 0.0))
    _check_boundary(f, box, value / math.sqrt(np.prod([hi - lo for lo, hi in box])))
    err = res.error / (2 * value) if value > 0 else math.sqrt(res.error)
    return QuadratureResult(value, err, res.levels, res.points)


@dataclass
class NormRatioReport:
    ratios: list
    max_ratio: float
    symbol_norm: float
    n2: float
    tolerance: float

    @property
    def within_bounds(self) -> bool:
        return self.max_ratio <= self.symbol_norm + self.tolerance and self.max_ratio <= self.n2 + self.tolerance

    def to_dict(self):
        return {"ratios": self.ratios, "max_ratio": self.max_ratio, "symbol_norm_sup": self.symbol_norm,
                "n2": self.n2, "tolerance": self.tolerance, "within_bounds": self.within_bounds}


def norm_ratio(spec: OperatorSpec, f: TestFunction, plan=None) -> float:
    num = l2_norm(apply_function(spec, f), plan=plan)
    den = l2_norm(f, plan=plan)
    return num.value / den.value


def norm_ratio_experiment(spec: OperatorSpec, functions, symbol_norm=None, tol: float = 1e-4,
                          plan=None) -> NormRatioReport:
    """max ||H f|| / ||f|| over the given functions next to sup ||Phi(s)|| and N_2."""
    if symbol_norm is None:
        from .spectra import symbol_norm_sup
        symbol_norm = symbol_norm_sup(spec)
    ratios = [norm_ratio(spec, f, plan) for f in functions]
    return NormRatioReport(ratios, max(ratios), float(symbol_norm), spec.n2, tol)


def random_gaussians(dimension: int, count: int = 20, seed: int = 0) -> list[TestFunction]:
    rng = np.random.default_rng(seed)
    return [gaussian(rng.uniform(-2, 2, dimension), float(rng.uniform(0.3, 2.0))) for _ in range(count)]


def near_extremizer(t: float = 1e-8, p: float = 2.0) -> TestFunction:
    """The cutoff power x^{-1/p} on (t, 1/t), nearly extremal for dilation sums."""
    return power_cutoff(1.0 / p, t)


def _conjugate(p):
    if not 1 < p < math.inf:
        raise BadExponent(f"p must lie in (1, inf), got {p}")
    return p / (p - 1)


def h_t(k: int, p: float, t: float) -> float:
    """Closed form of int_0^inf g_t(kx) f_t(x) dx for the cutoff powers."""
    q = _conjugate(p)
    big = 2 * math.log(1 / t)
    if k == 1:
        return big
    if k > 1 / t ** 2:
        return 0.0
    return k ** (-1 / q) * (big - math.log(k))


@dataclass
class SharpnessReport:
    p: float
    t: float
    ratio: float
    limit: float
    h_values: dict

    def to_dict(self):
        return {"p": self.p, "t": self.t, "ratio": self.ratio, "limit": self.limit,
                "h_values": {str(k): v for k, v in self.h_values.items()}}


def sharpness_experiment(p: float, coefficients: dict, t: float) -> SharpnessReport:
    """Lower bound J_t / (2 log(1/t)) for ||H|| with A(k) = 1/k, c(k) >= 0.

    As t -> 0 the ratio increases to N_p = sum_k c(k) k^{1/p}.
    """
    _conjugate(p)
    if not 0 < t < 1:
        raise ValueError("t must lie in (0, 1)")
    if any(k < 1 for k in coefficients) or any(c < 0 for c in coefficients.values()):
        raise ValueError("need k >= 1 and nonnegative coefficients")
    hv = {k: h_t(k, p, t) for k in sorted(coefficients)}
    jt = math.fsum(coefficients[k] * k * hv[k] for k in hv)
    limit = math.fsum(c * k ** (1 / p) for k, c in coefficients.items())
    return SharpnessReport(p, t, jt / (2 * math.log(1 / t)), limit, hv)
