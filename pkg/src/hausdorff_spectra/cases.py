"""Built-in case studies, each with its own pass/fail assertions."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .arithmetic import family_independence
from .errors import UnknownCase
from .families import GeometricPrimeFamily
from .model import OperatorSpec, scalar_dilation_spec, validate_spec
from .specfile import ResultDocument
from .spectra import (annulus_radii, hausdorff_distance, point_spectrum, rotational_invariance_check,
                      spectrum_frequency_grid, spectrum_torus, symbol_norm_sup, weyl_classify)
from .symbols import SymbolField

CIRCLE_SAMPLES = 10_000
MAX_EXPORTED_POINTS = 20_000


@dataclass
class Assertion:
    name: str
    value: float
    threshold: float
    passed: bool

    def to_dict(self):
        return {"name": self.name, "value": self.value, "threshold": self.threshold, "passed": self.passed}


def _at_most(name, value, threshold):
    return Assertion(name, float(value), float(threshold), bool(value <= threshold))


def _at_least(name, value, threshold):
    return Assertion(name, float(value), float(threshold), bool(value >= threshold))


def _thin(points, limit=MAX_EXPORTED_POINTS):
    stride = max(1, int(math.ceil(len(points) / limit)))
    return points[::stride], stride


def circle(center, radius, count=CIRCLE_SAMPLES):
    return center + radius * np.exp(2j * math.pi * np.arange(count) / count)


def doubling_spec() -> OperatorSpec:
    """f(x) + f(2x) on L2(R)."""
    return scalar_dilation_spec([1, 1], [1, 2], exact=[(1, 2, 0), (1, 2, 1)])


def cell_growth_spec(c0=1.0, c1=1.0, alpha=2.0) -> OperatorSpec:
    return validate_spec(2, [(0, c0, np.eye(2)), (1, c1, np.diag([alpha, 1.0]))])


def power_dilation_spec(coefficients=(1, 1, 1), q=2.0, dimension=1) -> OperatorSpec:
    """R u(x) = sum_k c(k) u(q^-k x) for k = 0, 1, ..."""
    ks = list(range(len(coefficients)))
    return scalar_dilation_spec(list(coefficients), [q ** -k for k in ks], dimension=dimension, indices=ks)


def two_term_spec() -> OperatorSpec:
    return scalar_dilation_spec([1, 1], [2, 3], exact=[(1, 2, 1), (1, 3, 1)])


def three_term_spec() -> OperatorSpec:
    return scalar_dilation_spec([1, 1, 1], [2, 3, 5], exact=[(1, 2, 1), (1, 3, 1), (1, 5, 1)])


def prime_family() -> GeometricPrimeFamily:
    return GeometricPrimeFamily(ratio=0.5)


def _document(name, params, outputs, checks, seed):
    outputs = dict(outputs)
    outputs["assertions"] = [a.to_dict() for a in checks]
    return ResultDocument(f"case:{name}", params, outputs, "", seed, all(a.passed for a in checks))


def _circle_case(name, spec, center, radius, seed, invariance=True):
    approx = spectrum_frequency_grid(spec)
    dist = hausdorff_distance(approx.points, circle(center, radius))
    checks = [_at_most("hausdorff_to_circle", dist, 1e-2)]
    outputs = {"center": center, "radius": radius, "hausdorff_to_circle": dist,
               "resolution": approx.resolution, "grid": approx.metadata["grid"]}
    if invariance:
        verdict = rotational_invariance_check(approx, [math.pi])
        # the circle is centered off the origin, so invariance must fail
        checks.append(Assertion("rotation_by_pi_fails", verdict.distances[math.pi], verdict.tolerance,
                                not verdict.passed))
        outputs["invariance"] = verdict.to_dict()
    pts, stride = _thin(approx.points)
    outputs["points"] = pts
    return _document(name, {"method": "grid", "span": "auto", "step": "auto", "export_stride": stride},
                     outputs, checks, seed)


def doubling_circle(seed=0, **_):
    return _circle_case("remark-circle", doubling_spec(), 1.0, 2 ** -0.5, seed)


def cell_growth(seed=0, c0=1.0, c1=1.0, alpha=2.0, **_):
    spec = cell_growth_spec(c0, c1, alpha)
    doc = _circle_case("cell-growth", spec, c0, abs(c1) / math.sqrt(alpha), seed, invariance=False)
    doc.parameters.update({"c": [c0, c1], "alpha": alpha})
    return doc


def polynomial_circle(seed=0, coefficients=(1, 1, 1), q=2.0, dimension=1, **_):
    spec = power_dilation_spec(coefficients, q, dimension)
    radius = q ** (dimension / 2)

    def r(z):
        return np.polyval(list(coefficients)[::-1], z)

    target = r(circle(0.0, radius))
    approx = spectrum_frequency_grid(spec)
    dist = hausdorff_distance(approx.points, target)
    norm = symbol_norm_sup(spec)
    sweep = float(np.max(np.abs(r(circle(0.0, radius, 1_000_000)))))
    checks = [_at_most("hausdorff_to_polynomial_image", dist, 1e-2),
              _at_most("norm_minus_max_modulus", abs(norm - sweep), 1e-3)]
    pts, stride = _thin(approx.points)
    outputs = {"hausdorff_to_polynomial_image": dist, "norm": norm, "max_on_circle": sweep,
               "resolution": approx.resolution, "points": pts}
    return _document("ross-circle", {"q": q, "dimension": dimension, "coefficients": list(coefficients),
                                     "export_stride": stride}, outputs, checks, seed)


def _annulus_case(name, spec, seed, samples, expect_disc=None, angles_count=8):
    _, relation = family_independence(spec)
    approx = spectrum_torus(spec, relation, samples=samples, seed=seed)
    r_in, r_out = annulus_radii(spec)
    rng = np.random.default_rng(seed)
    angles = rng.uniform(0, 2 * math.pi, angles_count)
    verdict = rotational_invariance_check(approx, angles)
    pspec = point_spectrum(spec, seed=seed)
    cls = weyl_classify(spec, approx, pspec, relation)
    checks = [_at_most("min_modulus_gap", abs(approx.min_modulus() - r_in), 1e-3),
              _at_most("max_modulus_gap", abs(approx.max_modulus() - r_out), 1e-3),
              Assertion("rotational_invariance", max(verdict.distances.values()), verdict.tolerance,
                        verdict.passed)]
    if expect_disc is not None:
        checks.append(Assertion("disc" if expect_disc else "annulus", r_in, 0.0, (r_in == 0.0) == expect_disc))
    if r_in > 0:
        checks.append(Assertion("weyl_equals_spectrum", float(bool(cls.weyl_equals_spectrum)), 1.0,
                                cls.weyl_equals_spectrum is True))
    pts, stride = _thin(approx.points)
    outputs = {"annulus": {"r_in": r_in, "r_out": r_out},
               "torus": {"min_modulus": approx.min_modulus(), "max_modulus": approx.max_modulus(),
                         "resolution": approx.resolution, "samples": approx.sample_count},
               "relation": relation.to_dict(), "invariance": verdict.to_dict(),
               "point_spectrum": pspec.to_dict(), "classification": cls.to_dict(), "points": pts}
    return _document(name, {"method": "torus", "samples": samples, "angles": angles,
                            "export_stride": stride}, outputs, checks, seed)


def two_term_annulus(seed=0, samples=1_000_000, **_):
    return _annulus_case("two-term-annulus", two_term_spec(), seed, samples, expect_disc=False)


def three_term_disc(seed=0, samples=1_000_000, **_):
    return _annulus_case("three-term-disc", three_term_spec(), seed, samples, expect_disc=True)


def prime_annulus(seed=0, samples=200_000, order=8, **_):
    doc = _annulus_case("prime-annulus", prime_family().truncation(order), seed, samples)
    doc.parameters["order"] = order
    return doc


def pantograph_classify(seed=0, spec: OperatorSpec | None = None, **_):
    """Whether u' = (H + K) u must have unbounded L2 solutions for compact K.

    When the log-moduli are independent and H != 0 the essential Weyl
    spectrum is rotationally invariant and not {0}, so it leaves the
    imaginary axis; this is a classification only.
    """
    spec = spec if spec is not None else two_term_spec()
    nonzero = not spec.is_zero()
    _, relation = family_independence(spec)
    invariant = relation.independent and nonzero
    kind = SymbolField(spec).kind
    annulus = None
    if invariant and kind != "general":
        annulus = dict(zip(("r_in", "r_out"), annulus_radii(spec)))
    outputs = {"operator_nonzero": nonzero, "relation": relation.to_dict(),
               "weyl_spectrum_rotationally_invariant": invariant,
               "weyl_spectrum_nonzero": invariant,
               "unbounded_solutions": invariant if invariant else None,
               "spectrum_annulus": annulus}
    checks = [Assertion("hypothesis_met", float(invariant), 1.0, invariant)]
    return _document("pantograph-classify", {"n2": spec.n2}, outputs, checks, seed)


CASES = {
    "remark-circle": doubling_circle,
    "cell-growth": cell_growth,
    "ross-circle": polynomial_circle,
    "prime-annulus": prime_annulus,
    "two-term-annulus": two_term_annulus,
    "three-term-disc": three_term_disc,
    "pantograph-classify": pantograph_classify,
}

CASE_SPECS = {
    "remark-circle": doubling_spec,
    "cell-growth": cell_growth_spec,
    "ross-circle": power_dilation_spec,
    "prime-annulus": lambda: prime_family().truncation(8),
    "two-term-annulus": two_term_spec,
    "three-term-disc": three_term_spec,
    "pantograph-classify": two_term_spec,
}


def run_case_study(name: str, seed: int = 0, **options) -> ResultDocument:
    if name not in CASES:
        raise UnknownCase(name)
    return CASES[name](seed=seed, **options)
