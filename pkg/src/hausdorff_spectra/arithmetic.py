"""Integer relations among logarithms.

Rotational invariance of the spectrum hinges on the numbers log|a_nu(k)|
being linearly independent over Z.  Two checks are offered:

* ``check_log_independence`` - exhaustive search over all integer vectors
  with entries in [-L, L].  The search is split in two halves whose partial
  sums are matched through a sorted array, so the cost is about
  (2L+1)^ceil(m/2) rather than (2L+1)^m.
* ``check_exact_independence`` - for values of the form base**(num/den),
  factor the bases and decide independence exactly over Q.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce

import numpy as np

from .errors import BaseTooLarge, SearchTooLarge
from .model import ExactPower

INDEPENDENT_UP_TO_BOUND = "IndependentUpToBound"
DEPENDENT = "Dependent"
EXACTLY_INDEPENDENT = "ExactlyIndependent"

_STRENGTH = {DEPENDENT: 0, INDEPENDENT_UP_TO_BOUND: 1, EXACTLY_INDEPENDENT: 2}

MAX_LENGTH = 12
HALF_BUDGET = 100_000_000
FACTOR_LIMIT = 10 ** 9


@dataclass(frozen=True)
class RelationReport:
    verdict: str
    relation: tuple[int, ...] | None
    residual: float
    search_bound: int
    note: str = ""

    @property
    def independent(self) -> bool:
        return self.verdict != DEPENDENT

    @property
    def strength(self) -> int:
        return _STRENGTH[self.verdict]

    def to_dict(self) -> dict:
        return {"verdict": self.verdict, "relation": list(self.relation) if self.relation else None,
                "residual": self.residual, "search_bound": self.search_bound, "note": self.note}


def _normalize(rel):
    rel = [int(v) for v in rel]
    g = reduce(math.gcd, (abs(v) for v in rel), 0)
    if g > 1:
        rel = [v // g for v in rel]
    lead = next(v for v in rel if v != 0)
    if lead < 0:
        rel = [-v for v in rel]
    return tuple(rel)


def _residual(rel, logs):
    return abs(math.fsum(l * x for l, x in zip(rel, logs)))


def _partial_sums(logs, bound):
    coeffs = np.arange(-bound, bound + 1, dtype=float)
    sums = np.zeros(1)
    for x in logs:
        sums = (sums[:, None] + coeffs[None, :] * x).ravel()
    return sums


def _decode(index, length, bound):
    base = 2 * bound + 1
    digits = []
    for _ in range(length):
        index, r = divmod(int(index), base)
        digits.append(r - bound)
    return digits[::-1]


def check_log_independence(values, bound: int = 10, tol: float = 1e-9,
                           chunk: int = 1 << 20) -> RelationReport:
    """Search all nonzero l in [-bound, bound]^m for |sum l_k log(values_k)| <= tol."""
    values = [float(v) for v in values]
    if not values:
        raise ValueError("need at least one value")
    if any(v <= 0 for v in values):
        raise ValueError("values must be positive")
    if bound < 1:
        raise ValueError("bound must be positive")
    logs = [math.log(v) for v in values]
    m = len(logs)

    for pos, x in enumerate(logs):
        if x == 0.0 or abs(x) <= tol:
            rel = tuple(1 if i == pos else 0 for i in range(m))
            return RelationReport(DEPENDENT, rel, abs(x), bound, "value equal to 1")

    h = (m + 1) // 2
    if m > MAX_LENGTH or (2 * bound + 1) ** h > HALF_BUDGET:
        raise SearchTooLarge(f"search over [-{bound},{bound}]^{m} exceeds the budget")

    left = _partial_sums(logs[:h], bound)
    right = _partial_sums(logs[h:], bound) if m > h else np.zeros(1)
    left_zero = (len(left) - 1) // 2
    right_zero = (len(right) - 1) // 2
    order = np.argsort(right, kind="stable")
    right_sorted = right[order]

    best = math.inf
    best_pair = None
    # left part nonzero, right part arbitrary
    for start in range(0, len(left), chunk):
        u = left[start:start + chunk]
        pos = np.searchsorted(right_sorted, -u)
        for cand in (np.clip(pos - 1, 0, len(right) - 1), np.clip(pos, 0, len(right) - 1)):
            gap = np.abs(u + right_sorted[cand])
            idx = np.arange(start, start + len(u))
            gap[idx == left_zero] = np.inf
            j = int(np.argmin(gap))
            if gap[j] < best:
                best = float(gap[j])
                best_pair = (start + j, int(order[cand[j]]))
    # left part zero, right part nonzero
    if m > h:
        gap = np.abs(right)
        gap[right_zero] = np.inf
        j = int(np.argmin(gap))
        if gap[j] < best:
            best = float(gap[j])
            best_pair = (left_zero, j)

    rel = _decode(best_pair[0], h, bound) + (_decode(best_pair[1], m - h, bound) if m > h else [])
    if best <= tol:
        rel = _normalize(rel)
        return RelationReport(DEPENDENT, rel, _residual(rel, logs), bound)
    return RelationReport(INDEPENDENT_UP_TO_BOUND, None, best, bound,
                          f"closest combination has residual {best:.3e}")


def factorize(n: int) -> dict[int, int]:
    if n > FACTOR_LIMIT:
        raise BaseTooLarge(f"base {n} exceeds the factorization budget {FACTOR_LIMIT}")
    out = {}
    p = 2
    while p * p <= n:
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
        p += 1 if p == 2 else 2
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def _nullspace_vector(rows, ncols):
    """One rational null vector of the matrix ``rows`` (list of lists), or None."""
    mat = [list(r) for r in rows]
    pivots = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(mat)) if mat[i][c] != 0), None)
        if piv is None:
            continue
        mat[r], mat[piv] = mat[piv], mat[r]
        lead = mat[r][c]
        mat[r] = [v / lead for v in mat[r]]
        for i in range(len(mat)):
            if i != r and mat[i][c] != 0:
                f = mat[i][c]
                mat[i] = [a - f * b for a, b in zip(mat[i], mat[r])]
        pivots.append(c)
        r += 1
    free = [c for c in range(ncols) if c not in pivots]
    if not free:
        return None
    f = free[0]
    vec = [Fraction(0)] * ncols
    vec[f] = Fraction(1)
    for row, c in enumerate(pivots):
        vec[c] = -mat[row][f]
    return vec


def check_exact_independence(forms) -> RelationReport:
    """Decide Z-independence of log|x_k| for x_k = sign * base**(num/den) exactly."""
    forms = [f if isinstance(f, ExactPower) else ExactPower(*f) for f in forms]
    if not forms:
        raise ValueError("need at least one exact value")
    factored = [factorize(f.base) for f in forms]
    prime_list = sorted({p for fac in factored for p in fac})
    rows = [[f.exponent * fac.get(p, 0) for f, fac in zip(forms, factored)] for p in prime_list]
    vec = _nullspace_vector(rows, len(forms))
    if vec is None:
        return RelationReport(EXACTLY_INDEPENDENT, None, 0.0, 1, "prime exponent vectors independent over Q")
    denom = reduce(lambda a, b: a * b // math.gcd(a, b), (v.denominator for v in vec), 1)
    rel = _normalize([v * denom for v in vec])
    return RelationReport(DEPENDENT, rel, 0.0, max(abs(v) for v in rel), "exact witness")


def strongest(reports):
    """The report with the strongest independence verdict (first wins ties)."""
    best = None
    for rep in reports:
        if best is None or rep.strength > best.strength:
            best = rep
    return best


def family_independence(spec, diag=None, bound: int = 10, tol: float = 1e-9):
    """Run the check per eigenvalue coordinate nu and keep the strongest verdict.

    Returns ``(nu, report)``.  Exact forms are used when every entry carries
    them; otherwise the numeric search is run.
    """
    from .model import simultaneous_diagonalize

    diag = diag or simultaneous_diagonalize(spec)
    exact_cols = _match_exact(spec, diag)
    reports = []
    for nu in range(spec.dimension):
        if exact_cols is not None:
            rep = check_exact_independence([col[nu] for col in exact_cols])
        else:
            rep = check_log_independence(np.abs(diag.eigen_tuples[:, nu]), bound=bound, tol=tol)
        reports.append(rep)
    rep = strongest(reports)
    return reports.index(rep), rep


def _match_exact(spec, diag):
    """Exact forms aligned with the diagonalizer's column order, or None."""
    from scipy.optimize import linear_sum_assignment

    cols = []
    for entry, tup in zip(spec.entries, diag.eigen_tuples):
        if entry.exact_eigenvalues is None:
            return None
        vals = np.array([x.value for x in entry.exact_eigenvalues])
        cost = np.abs(vals[:, None] - tup[None, :])
        rows, assign = linear_sum_assignment(cost)
        aligned = [None] * len(tup)
        for r, c in zip(rows, assign):
            aligned[c] = entry.exact_eigenvalues[r]
        cols.append(aligned)
    return cols
