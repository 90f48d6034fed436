"""Infinite coefficient families, represented by truncations plus a tail bound.

A family yields the finite operator H^(n) over the entries with |k| <= n and
an upper bound for sum_{|k|>n} |c(k)| / sqrt|det A(k)|, which bounds the
norm of the remainder H - H^(n).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import NoTailFormula, SpecValidationError
from .model import ExactPower, OperatorSpec, ScaleEntry, make_entry, validate_spec


def primes(count: int) -> list[int]:
    """The first ``count`` primes."""
    if count <= 0:
        return []
    limit = max(15, int(count * (math.log(count) + math.log(math.log(count + 2)) + 2)))
    while True:
        sieve = np.ones(limit + 1, dtype=bool)
        sieve[:2] = False
        for p in range(2, int(limit ** 0.5) + 1):
            if sieve[p]:
                sieve[p * p::p] = False
        found = np.flatnonzero(sieve)
        if len(found) >= count:
            return [int(p) for p in found[:count]]
        limit *= 2


@dataclass(frozen=True)
class TruncationBound:
    order: int
    bound: float


class Family:
    """Base class: ``truncation(n)`` and ``tail(n)``."""

    name = "family"
    dimension = 1

    def truncation(self, n: int) -> OperatorSpec:
        raise NotImplementedError

    def tail(self, n: int) -> float:
        raise NoTailFormula(f"family {self.name!r} has no tail formula")

    def tail_bound(self, n: int) -> TruncationBound:
        return TruncationBound(n, float(self.tail(n)))

    def describe(self) -> dict:
        return {"name": self.name}


class FiniteFamily(Family):
    """A finite spec viewed as a family; its tail is exact."""

    name = "finite"

    def __init__(self, spec: OperatorSpec):
        self.spec = spec
        self.dimension = spec.dimension

    def truncation(self, n):
        return self.spec.restrict(lambda k: abs(k) <= n)

    def tail(self, n):
        return math.fsum(abs(e.weight) for e in self.spec.entries if abs(e.k) > n)


class GeometricPrimeFamily(Family):
    """c(k) = scale * ratio**k and A(k) = p_k * I for k >= 1 (p_k the k-th prime)."""

    name = "geometric-prime"

    def __init__(self, ratio=0.5, scale=1.0, dimension=1):
        if not 0 < abs(ratio) < 1:
            raise SpecValidationError("geometric-prime ratio must satisfy 0 < |ratio| < 1")
        self.ratio = float(ratio)
        self.scale = complex(scale)
        self.dimension = int(dimension)

    def coefficient(self, k):
        return self.scale * self.ratio ** k

    def truncation(self, n):
        if n < 1:
            raise SpecValidationError("geometric-prime truncation needs n >= 1")
        eye = np.eye(self.dimension)
        entries = [
            make_entry(k, self.coefficient(k), p * eye, (ExactPower(1, p, 1),) * self.dimension)
            for k, p in enumerate(primes(n), start=1)
        ]
        return validate_spec(self.dimension, entries)

    def term(self, k, p):
        return abs(self.scale) * abs(self.ratio) ** k * p ** (-self.dimension / 2)

    def tail(self, n, extra=80):
        # exact partial sum, then a geometric majorant using p_k >= p_{n+extra+1}
        ps = primes(n + extra + 1)
        exact = math.fsum(self.term(k, ps[k - 1]) for k in range(n + 1, n + extra + 1))
        q = abs(self.ratio)
        rest = abs(self.scale) * q ** (n + extra + 1) * ps[-1] ** (-self.dimension / 2) / (1 - q)
        return exact + rest

    def describe(self):
        return {"name": self.name, "ratio": self.ratio, "scale": [self.scale.real, self.scale.imag],
                "dimension": self.dimension}


class CustomTailFamily(Family):
    """Listed entries plus a geometric majorant C * q**n for the unlisted tail.

    Without ``tail_constant`` the family cannot bound its tail.
    """

    name = "custom-tail"

    def __init__(self, dimension, entries: list[ScaleEntry], tail_constant=None, tail_ratio=None):
        self.dimension = int(dimension)
        self.entries = list(entries)
        self.tail_constant = tail_constant
        self.tail_ratio = tail_ratio
        validate_spec(self.dimension, self.entries)
        self.support = max(abs(e.k) for e in self.entries)

    def truncation(self, n):
        kept = [e for e in self.entries if abs(e.k) <= n]
        if not kept:
            raise SpecValidationError(f"custom-tail family has no entries with |k| <= {n}")
        return validate_spec(self.dimension, kept)

    def tail(self, n):
        if self.tail_constant is None:
            raise NoTailFormula("custom-tail family was given no tail constant")
        q = 0.0 if self.tail_ratio is None else float(self.tail_ratio)
        listed = math.fsum(abs(e.weight) for e in self.entries if abs(e.k) > n)
        return listed + float(self.tail_constant) * q ** max(n, self.support)

    def describe(self):
        return {"name": self.name, "tail_constant": self.tail_constant, "tail_ratio": self.tail_ratio}
