"""Spectrum approximation, annulus analytics and spectral classification.

The spectrum of H is the closure of the union over s of the eigenvalues of
the matrix symbol Phi(s).  Three ways of sampling it are provided:

* frequency grids in s (always valid),
* torus sampling, where each exponential exp(-i s . log|a(k)|) is replaced
  by an independent unimodular t_k (valid when the logarithms are
  independent over Z, since then the exponentials are dense in the torus),
* closed forms: the annulus of radii derived from |c(k)| |det A(k)|^{-1/2}
  for definite families, or one period of a periodic symbol.

``resolution`` on every result is an estimated covering radius, not a
certificate.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np
from scipy.spatial import cKDTree

from .arithmetic import RelationReport, family_independence
from .errors import EmptySet, HypothesisNotMet
from .families import Family
from .model import OperatorSpec
from .sampling import active_directions, frequency_grid, torus_points
from .symbols import SymbolField

FREQUENCY_GRID = "FrequencyGrid"
TORUS_SAMPLING = "TorusSampling"
ANALYTIC_ANNULUS = "AnalyticAnnulus"
ANALYTIC_CURVE = "AnalyticCurve"

PROVEN = "Proven"
FAILED_NUMERICALLY = "FailedNumerically"
NOT_APPLICABLE = "NotApplicable"

TAU_DET = 1e-8


@dataclass(eq=False)
class SpectrumApprox:
    points: np.ndarray
    method: str
    resolution: float
    sample_count: int
    annulus: tuple[float, float] | None = None
    metadata: dict = field(default_factory=dict)

    @property
    def xy(self) -> np.ndarray:
        return np.column_stack([self.points.real, self.points.imag])

    def max_modulus(self) -> float:
        return float(np.max(np.abs(self.points)))

    def min_modulus(self) -> float:
        return float(np.min(np.abs(self.points)))

    def to_dict(self, include_points=True) -> dict:
        out = {"method": self.method, "resolution": self.resolution, "sample_count": self.sample_count,
               "point_count": int(len(self.points)), "min_modulus": self.min_modulus(),
               "max_modulus": self.max_modulus(), "annulus": list(self.annulus) if self.annulus else None,
               "resolution_is_estimate": True, "metadata": self.metadata}
        if include_points:
            out["points"] = [[float(z.real), float(z.imag)] for z in self.points]
        return out


def _as_xy(points) -> np.ndarray:
    pts = np.asarray(points)
    if np.iscomplexobj(pts) or pts.ndim == 1:
        pts = np.asarray(pts, dtype=complex).ravel()
        return np.column_stack([pts.real, pts.imag])
    return np.asarray(pts, dtype=float).reshape(-1, 2)


def directed_distance(xs, ys_tree: cKDTree, upper=np.inf) -> float:
    dist, _ = ys_tree.query(xs, k=1, distance_upper_bound=upper)
    return float(np.max(dist))


def hausdorff_distance(x, y) -> float:
    """Two-sided sup-inf distance between finite planar point sets.

    Points may be complex numbers or rows of (x, y) coordinates.
    """
    xs, ys = _as_xy(x), _as_xy(y)
    if len(xs) == 0 or len(ys) == 0:
        raise EmptySet("Hausdorff distance needs two nonempty sets")
    return max(directed_distance(xs, cKDTree(ys)), directed_distance(ys, cKDTree(xs)))


def nearest_neighbor_resolution(points) -> float:
    """Twice the largest nearest-neighbour gap of a cloud."""
    xy = _as_xy(points)
    if len(xy) < 2:
        return 0.0
    dist, _ = cKDTree(xy).query(xy, k=2)
    return 2.0 * float(np.max(dist[:, 1]))


def _set_step(prev, nxt) -> float:
    """Largest per-step set displacement between consecutive eigenvalue sets."""
    gaps = np.abs(prev[..., :, None] - nxt[..., None, :])
    return float(max(np.max(np.min(gaps, axis=-1)), np.max(np.min(gaps, axis=-2))))


def _sorted_rows(eigs):
    order = np.lexsort((eigs.imag, eigs.real), axis=-1) if eigs.shape[-1] > 1 else None
    if order is None:
        return eigs
    return np.take_along_axis(eigs, order, axis=-1)


def _field(spec_or_field) -> SymbolField:
    return spec_or_field if isinstance(spec_or_field, SymbolField) else SymbolField(spec_or_field)


def _eigen_on(fld: SymbolField, freqs, chunk=100_000) -> np.ndarray:
    parts = [fld.eigenvalues_from_weights(fld.weights(freqs[i:i + chunk]))
             for i in range(0, len(freqs), chunk)]
    return np.concatenate(parts, axis=0)


def spectrum_frequency_grid(spec, span=None, step=None, max_samples: int = 2_000_000) -> SpectrumApprox:
    """Eigenvalues of Phi(s) over a frequency grid (``None`` = automatic)."""
    fld = _field(spec)
    plan = frequency_grid(fld.log_rates, span, step, max_samples)
    freqs = plan.points()
    eigs = _sorted_rows(_eigen_on(fld, freqs)) if fld.kind == "general" else _eigen_on(fld, freqs)

    res = 0.0
    if plan.axes:
        grid = eigs.reshape(plan.shape + (eigs.shape[-1],))
        for ax in range(len(plan.shape)):
            if plan.shape[ax] < 2:
                continue
            a = np.moveaxis(grid, ax, 0)
            if fld.kind == "general":
                step_gap = _set_step(a[:-1], a[1:])
            else:
                step_gap = float(np.max(np.abs(a[1:] - a[:-1])))
            res = max(res, step_gap)
    res *= 2.0
    meta = {"grid": plan.describe(), "kind": fld.kind}
    return SpectrumApprox(eigs.ravel(), FREQUENCY_GRID, res, len(freqs), None, meta)


def symbol_norm_sup(spec, span=None, step=None, max_samples: int = 2_000_000) -> float:
    """max over a frequency grid of the spectral norm of Phi(s)."""
    fld = _field(spec)
    plan = frequency_grid(fld.log_rates, span, step, max_samples)
    freqs = plan.points()
    best = 0.0
    for i in range(0, len(freqs), 50_000):
        w = fld.weights(freqs[i:i + 50_000])
        if fld.kind == "general":
            norms = np.linalg.norm(fld.assemble(w), ord=2, axis=(-2, -1))
        else:
            # block symbols are normal: norm = largest eigenvalue modulus
            norms = np.max(np.abs(fld.eigenvalues_from_weights(w)), axis=-1)
        best = max(best, float(np.max(norms)))
    return best


def require_independence(spec: OperatorSpec, relation: RelationReport | None):
    if relation is None:
        _, relation = family_independence(spec)
    if not relation.independent:
        raise HypothesisNotMet(f"log-moduli are dependent: relation {relation.relation}")
    return relation


def _modulus_objective(fld: SymbolField, branch_signs, sense):
    """Smooth objective sense * |sum_k sign_k r_k e^{i theta_k}|^2 with gradient."""
    w = fld.radii * branch_signs

    def f(theta):
        e = w * np.exp(1j * theta)
        xi = e.sum()
        grad = 2.0 * np.real(np.conj(xi) * 1j * e)
        return sense * float(abs(xi) ** 2), sense * grad

    return f


def _general_objective(fld: SymbolField, sense):
    def f(theta):
        mods = np.abs(np.linalg.eigvals(fld.assemble(fld.torus_weights(np.exp(1j * theta)))))
        return float(sense * (mods.min() if sense > 0 else mods.max()) ** 2)

    return f


def refine_extremes(fld: SymbolField, angles, points_per_sample, count: int = 8) -> np.ndarray:
    """Locally optimize the smallest and largest eigenvalue moduli over the torus.

    Seeds are the ``count`` most extreme samples of each kind; the returned
    eigenvalues are evaluated at genuine torus points.
    """
    from scipy.optimize import minimize

    mods = np.abs(points_per_sample)
    branch = fld.positive.astype(float) * 2 - 1
    out = []
    for sense, seeds in ((1.0, np.argsort(mods.min(axis=1))[:count]),
                         (-1.0, np.argsort(-mods.max(axis=1))[:count])):
        for idx in seeds:
            theta0 = 2 * math.pi * angles[idx]
            if fld.kind == "general":
                res = minimize(_general_objective(fld, sense), theta0, method="Nelder-Mead",
                               options={"xatol": 1e-10, "fatol": 1e-16, "maxiter": 4000})
            else:
                # the branch p + q uses all radii with sign +1, p - q flips the negatives
                col = int(np.argmin(mods[idx]) if sense > 0 else np.argmax(mods[idx]))
                signs = np.ones_like(branch) if col == 0 else branch
                res = minimize(_modulus_objective(fld, signs, sense), theta0, jac=True, method="BFGS",
                               options={"gtol": 1e-14, "maxiter": 500})
            w = fld.torus_weights(np.exp(1j * res.x))
            out.append(fld.eigenvalues_from_weights(w).ravel())
    return np.concatenate(out) if out else np.zeros(0, dtype=complex)


def spectrum_torus(spec, relation: RelationReport | None = None, samples: int = 100_000,
                   seed: int = 0, random_count: int = 10_000, refine: int = 8) -> SpectrumApprox:
    """Eigenvalues of Xi(t) over torus samples t in T^m.

    Requires independence of the log-moduli along some coordinate.  With
    ``refine > 0`` the extreme-modulus samples are polished by local
    optimization on the torus and the optimized points are appended.
    """
    fld = _field(spec)
    relation = require_independence(fld.spec, relation)
    angles = torus_points(len(fld.radii), samples, seed, random_count)
    eigs = []
    for i in range(0, len(angles), 100_000):
        t = np.exp(2j * math.pi * angles[i:i + 100_000])
        eigs.append(fld.eigenvalues_from_weights(fld.torus_weights(t)))
    per_sample = np.concatenate(eigs, axis=0)
    points = per_sample.ravel()
    refined = np.zeros(0, dtype=complex)
    if refine > 0 and np.any(fld.radii):
        refined = refine_extremes(fld, angles, per_sample, refine)
        points = np.concatenate([points, refined])
    meta = {"kind": fld.kind, "seed": seed, "lattice_count": samples, "random_count": random_count,
            "refined_points": int(len(refined)), "relation": relation.to_dict()}
    return SpectrumApprox(points, TORUS_SAMPLING, nearest_neighbor_resolution(points), len(angles), None, meta)


def annulus_radii(spec: OperatorSpec) -> tuple[float, float]:
    r = [abs(e.weight) for e in spec.entries]
    total = math.fsum(r)
    return max(0.0, 2.0 * max(r) - total), total


def annulus_analytic(spec, relation: RelationReport | None = None, n_radii: int = 64,
                     n_angles: int = 720) -> SpectrumApprox:
    """Closed-form annulus {r_in <= |z| <= r_out} for definite families.

    r_out = sum r_k and r_in = max(0, 2 max r_k - sum r_k) with
    r_k = |c(k)| |det A(k)|^{-1/2}.
    """
    fld = _field(spec)
    if fld.kind == "general":
        raise HypothesisNotMet("annulus formula needs definite (or scalar) dilations")
    relation = require_independence(fld.spec, relation)
    r_in, r_out = annulus_radii(fld.spec)
    radii = np.linspace(r_in, r_out, n_radii) if r_out > r_in else np.array([r_out])
    theta = 2 * math.pi * np.arange(n_angles) / n_angles
    points = (radii[:, None] * np.exp(1j * theta)[None, :]).ravel()
    dr = (r_out - r_in) / (n_radii - 1) if len(radii) > 1 else 0.0
    res = math.hypot(dr / 2, r_out * math.pi / n_angles)
    meta = {"relation": relation.to_dict(), "kind": fld.kind}
    return SpectrumApprox(points, ANALYTIC_ANNULUS, res, len(points), (r_in, r_out), meta)


def symbol_period(fld: SymbolField, max_den: int = 64):
    """(direction, period) when Phi is periodic along a single direction, else None."""
    dirs = active_directions(fld.log_rates)
    if len(dirs) != 1:
        return None
    v = dirs[0]
    rates = fld.log_rates @ v
    nz = rates[np.abs(rates) > 1e-12]
    base = float(np.min(np.abs(nz)))
    denom = 1
    for r in nz:
        frac = Fraction(float(r / base)).limit_denominator(max_den)
        if abs(float(frac) * base - r) > 1e-9 * (1 + abs(r)):
            return None
        denom = denom * frac.denominator // math.gcd(denom, frac.denominator)
    return v, 2 * math.pi * denom / base


def analytic_curve(spec, samples: int = 20_000) -> SpectrumApprox:
    """Eigenvalue curves over one period of a periodic symbol."""
    fld = _field(spec)
    if not np.any(fld.log_rates):
        eigs = fld.eigenvalues_from_weights(fld.weights(np.zeros((1, fld.dimension))))
        return SpectrumApprox(eigs.ravel(), ANALYTIC_CURVE, 0.0, 1, None, {"period": None})
    found = symbol_period(fld)
    if found is None:
        raise HypothesisNotMet("symbol is not periodic along a single direction")
    v, period = found
    tau = period * np.arange(samples) / samples
    eigs = _eigen_on(fld, tau[:, None] * v[None, :])
    if fld.kind == "general":
        eigs = _sorted_rows(eigs)
        step_gap = _set_step(eigs[:-1], eigs[1:])
    else:
        step_gap = float(np.max(np.abs(np.diff(eigs, axis=0))))
    meta = {"period": period, "direction": v.tolist(), "kind": fld.kind}
    return SpectrumApprox(eigs.ravel(), ANALYTIC_CURVE, 2 * step_gap, samples, None, meta)


@dataclass
class InvarianceVerdict:
    passed: bool
    tolerance: float
    distances: dict

    def to_dict(self):
        return {"passed": self.passed, "tolerance": self.tolerance,
                "distances": {repr(float(k)): v for k, v in self.distances.items()}}


def _occupancy(xy, cell):
    """Dilated (3x3) occupancy grid of a cloud, or None if it would be huge."""
    lo = xy.min(axis=0) - 2 * cell
    shape = np.ceil((xy.max(axis=0) + 2 * cell - lo) / cell).astype(int) + 1
    if np.prod(shape) > 40_000_000:
        return None
    occ = np.zeros(shape, dtype=bool)
    idx = np.floor((xy - lo) / cell).astype(int)
    occ[idx[:, 0], idx[:, 1]] = True
    grown = occ.copy()
    for di in (-1, 0, 1):
        for dj in (-1, 0, 1):
            grown |= np.roll(np.roll(occ, di, axis=0), dj, axis=1)
    return lo, grown


def rotational_invariance_check(approx: SpectrumApprox, angles, tol: float | None = None) -> InvarianceVerdict:
    """Pass iff dist_H(e^{i theta} X, X) <= tol for every angle.

    Points whose 3x3 cell neighbourhood (cell = tol/4) is occupied are within
    2 sqrt(2) tol/4 < tol of the cloud; only the remaining points are queried
    exactly.  Reported distances are exact when they exceed that grid bound
    and equal to the bound otherwise.
    """
    if len(approx.points) == 0:
        raise EmptySet("empty cloud")
    tol = 3.0 * approx.resolution if tol is None else float(tol)
    xy = _as_xy(approx.points)
    z = xy[:, 0] + 1j * xy[:, 1]
    tree = None
    grid = _occupancy(xy, tol / 4.0) if tol > 0 else None
    grid_bound = 2 * math.sqrt(2) * tol / 4.0
    distances = {}
    passed = True
    for theta in angles:
        worst = 0.0
        for sign in (1, -1):
            rot = z * np.exp(1j * sign * theta)
            rxy = np.column_stack([rot.real, rot.imag])
            if grid is not None:
                lo, grown = grid
                idx = np.floor((rxy - lo) / (tol / 4.0)).astype(int)
                inside = np.all((idx >= 0) & (idx < np.array(grown.shape)), axis=1)
                ok = np.zeros(len(rxy), dtype=bool)
                ok[inside] = grown[idx[inside, 0], idx[inside, 1]]
                if ok.any():
                    worst = max(worst, grid_bound)
                rxy = rxy[~ok]
            if len(rxy):
                tree = tree or cKDTree(xy)
                worst = max(worst, directed_distance(rxy, tree))
        distances[float(theta)] = worst
        passed = passed and worst <= tol
    return InvarianceVerdict(passed, tol, distances)


@dataclass
class TruncationStep:
    order: int
    distance: float
    bound: float
    resolution: float

    @property
    def within_bound(self) -> bool:
        return self.distance <= self.bound + 2.0 * self.resolution

    def to_dict(self):
        return {"order": self.order, "distance": self.distance, "bound": self.bound,
                "resolution": self.resolution, "within_bound": self.within_bound}


def truncation_spectrum(spec: OperatorSpec, samples: int, seed: int) -> SpectrumApprox:
    _, rel = family_independence(spec)
    if rel.independent:
        return spectrum_torus(spec, rel, samples=samples, seed=seed)
    return spectrum_frequency_grid(spec)


def truncation_convergence(family: Family, orders, samples: int = 200_000, seed: int = 0) -> list[TruncationStep]:
    """Measured dist_H between successive truncations next to the tail bound."""
    cache = {}

    def cloud(n):
        if n not in cache:
            cache[n] = truncation_spectrum(family.truncation(n), samples, seed)
        return cache[n]

    steps = []
    for n in orders:
        a, b = cloud(n), cloud(n + 1)
        if np.array_equal(a.points, b.points):
            dist = 0.0
        else:
            dist = hausdorff_distance(a.points, b.points)
        steps.append(TruncationStep(n, dist, family.tail(n), max(a.resolution, b.resolution)))
    return steps


@dataclass
class PointSpectrum:
    values: list
    method: str
    probes: int = 0

    def to_dict(self):
        return {"values": [[complex(v).real, complex(v).imag] for v in self.values],
                "method": self.method, "probes": self.probes}


def _is_identity_like(entry, sign=1) -> bool:
    d = entry.matrix.shape[0]
    return bool(np.max(np.abs(entry.matrix - sign * np.eye(d))) <= 1e-12)


def point_spectrum(spec, probes=None, n_probes: int = 16, seed: int = 0) -> PointSpectrum:
    """Common eigenvalues of Phi(s) over probe frequencies.

    Positive definite families take the shortcut: H has an eigenvalue only
    when H = lambda I.
    """
    fld = _field(spec)
    spec = fld.spec
    if fld.kind == "positive":
        live = spec.nonzero_entries()
        if not live:
            return PointSpectrum([0j], "positive-definite")
        if len(live) == 1 and _is_identity_like(live[0]):
            return PointSpectrum([live[0].coefficient], "positive-definite")
        return PointSpectrum([], "positive-definite")

    if probes is None:
        rng = np.random.default_rng(seed)
        probes = rng.uniform(-20.0, 20.0, size=(n_probes, fld.dimension))
    probes = np.atleast_2d(np.asarray(probes, dtype=float))
    mats = fld.matrices(probes)
    cands = []
    for lam in np.linalg.eigvals(mats[0]):
        if all(abs(lam - c) > 1e-9 * (1 + abs(c)) for c in cands):
            cands.append(complex(lam))
    eye = np.eye(fld.size)
    scale = TAU_DET * (1.0 + fld.n2) ** fld.size
    kept = [lam for lam in cands if np.max(np.abs(np.linalg.det(lam * eye - mats))) <= scale]
    kept.sort(key=lambda z: (round(z.real, 12), round(z.imag, 12)))
    return PointSpectrum(kept, "probe", len(probes))


@dataclass
class SpectrumClassification:
    point_spectrum: list
    weyl_equals_spectrum: bool | None
    pi00: list
    rotation_invariant: str
    pi00_status: str = "empty"
    caveat: str | None = None

    def to_dict(self):
        return {"point_spectrum": [[complex(v).real, complex(v).imag] for v in self.point_spectrum],
                "weyl_equals_spectrum": self.weyl_equals_spectrum,
                "pi00": [[complex(v).real, complex(v).imag] for v in self.pi00],
                "pi00_status": self.pi00_status, "rotation_invariant": self.rotation_invariant,
                "caveat": self.caveat}


def recognized_special_case(spec: OperatorSpec):
    """'zero', 'identity' or 'reflection' for H = 0, lambda I, lambda J."""
    live = spec.nonzero_entries()
    if not live:
        return "zero"
    if len(live) == 1:
        if _is_identity_like(live[0], 1):
            return "identity"
        if _is_identity_like(live[0], -1):
            return "reflection"
    return None


def weyl_classify(spec, approx: SpectrumApprox | None, point_spec: PointSpectrum,
                  relation: RelationReport | None = None) -> SpectrumClassification:
    """Decide whether the essential Weyl spectrum equals the spectrum.

    sigma_ew = sigma minus pi00, and under the independence hypothesis pi00
    is contained in {0}.  Multiples of I and of the reflection J are settled
    analytically (their eigenvalues have infinite multiplicity).
    """
    fld = _field(spec)
    special = recognized_special_case(fld.spec)
    if special is not None:
        return SpectrumClassification(list(point_spec.values), True, [], NOT_APPLICABLE, "empty",
                                      f"{special} operator: eigenvalues of infinite multiplicity")
    relation = require_independence(fld.spec, relation)
    if approx is None or len(approx.points) == 0:
        raise EmptySet("classification needs a spectrum cloud")
    near = float(np.min(np.abs(approx.points)))
    isolated = near > 5.0 * approx.resolution
    zero_eigen = any(abs(v) <= 1e-12 for v in point_spec.values)
    if isolated and zero_eigen:
        return SpectrumClassification(list(point_spec.values), None, [], PROVEN, "unknown",
                                      "0 is an isolated eigenvalue of undetermined multiplicity")
    return SpectrumClassification(list(point_spec.values), True, [], PROVEN, "empty")
