import math
import random
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from hausdorff_spectra.arithmetic import (DEPENDENT, EXACTLY_INDEPENDENT, INDEPENDENT_UP_TO_BOUND,
                                          check_exact_independence, check_log_independence,
                                          family_independence, factorize)
from hausdorff_spectra.errors import BaseTooLarge, SearchTooLarge
from hausdorff_spectra.model import ExactPower, scalar_dilation_spec, validate_spec


def trial_division(n):
    out, p = {}, 2
    while p * p <= n:
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
        p += 1
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def is_exact_relation(rel, forms):
    """sum_k rel_k * log|x_k| == 0 with rational arithmetic."""
    total = {}
    for r, f in zip(rel, forms):
        for p, e in trial_division(f.base).items():
            total[p] = total.get(p, 0) + r * Fraction(f.num, f.den) * e
    return all(v == 0 for v in total.values())


def test_two_and_four_dependent():
    rep = check_log_independence([2, 4])
    assert rep.verdict == DEPENDENT
    assert rep.relation == (2, -1)


def test_one_is_dependent():
    rep = check_log_independence([1, 2])
    assert rep.verdict == DEPENDENT
    assert rep.relation == (1, 0)


def test_distinct_primes_independent_up_to_bound():
    rep = check_log_independence([2, 3, 5])
    assert rep.verdict == INDEPENDENT_UP_TO_BOUND
    assert rep.independent
    assert rep.residual > 1e-9


def test_exact_primes_independent():
    assert check_exact_independence([(1, 2, 1), (1, 3, 1), (1, 5, 1)]).verdict == EXACTLY_INDEPENDENT


def test_exact_composite_relation():
    rep = check_exact_independence([(1, 6, 1), (1, 2, 1), (1, 3, 1)])
    assert rep.verdict == DEPENDENT and rep.relation == (1, -1, -1)


def test_exact_fractional_exponents():
    rep = check_exact_independence([(1, 2, 1, 2), (1, 2, 1, 3)])
    assert rep.relation == (2, -3)


def test_sign_is_ignored():
    assert check_exact_independence([(-1, 2, 1), (1, 4, 1)]).relation == (2, -1)
    assert check_log_independence([2, 4]).relation == (2, -1)


def test_relation_beyond_bound_not_found():
    # 2^11 = 2048: the only relation needs coefficient 11
    rep = check_log_independence([2, 2048], bound=10)
    assert rep.verdict == INDEPENDENT_UP_TO_BOUND
    assert check_log_independence([2, 2048], bound=11).relation == (11, -1)


def test_search_budget():
    with pytest.raises(SearchTooLarge):
        check_log_independence([2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41])
    with pytest.raises(SearchTooLarge):
        check_log_independence([2, 3, 5, 7, 11, 13], bound=1000)


def test_factorize():
    assert factorize(360) == {2: 3, 3: 2, 5: 1}
    assert factorize(2) == {2: 1}
    with pytest.raises(BaseTooLarge):
        factorize(10 ** 12 + 39)


def test_family_uses_exact_forms_when_present():
    spec = scalar_dilation_spec([1, 1], [2, 3], exact=[(1, 2, 1), (1, 3, 1)])
    _, rep = family_independence(spec)
    assert rep.verdict == EXACTLY_INDEPENDENT
    nu, rep = family_independence(scalar_dilation_spec([1, 1], [2, 3]))
    assert nu == 0 and rep.verdict == INDEPENDENT_UP_TO_BOUND


def test_family_keeps_strongest_coordinate():
    # first coordinate dependent (2, 4), second independent (3, 5)
    spec = validate_spec(2, [(0, 1, np.diag([2.0, 3.0])), (1, 1, np.diag([4.0, 5.0]))])
    nu, rep = family_independence(spec)
    assert nu == 1 and rep.independent


def random_forms(rng):
    m = rng.randint(2, 3)
    return [ExactPower(rng.choice([-1, 1]), rng.randint(2, 12), rng.randint(1, 3), rng.randint(1, 3))
            for _ in range(m)]


def test_exact_and_numeric_paths_agree_on_random_forms():
    rng = random.Random(0)
    dependent = 0
    for _ in range(100):
        forms = random_forms(rng)
        exact = check_exact_independence(forms)
        numeric = check_log_independence([abs(f.value) for f in forms], bound=10)
        if exact.verdict == DEPENDENT:
            dependent += 1
            assert is_exact_relation(exact.relation, forms)
            if max(abs(v) for v in exact.relation) <= 10:
                assert numeric.verdict == DEPENDENT
                assert is_exact_relation(numeric.relation, forms)
        else:
            assert numeric.verdict == INDEPENDENT_UP_TO_BOUND
    assert 10 < dependent < 90  # both outcomes exercised


@settings(max_examples=50, deadline=None)
@given(st.lists(st.integers(-4, 4), min_size=2, max_size=4).filter(lambda r: any(r)),
       st.lists(st.sampled_from([2, 3, 5, 7]), min_size=1, max_size=1))
def test_planted_relation_is_found(coeffs, base):
    # x_k = base^(e_k) with integer exponents: a relation exists whenever m >= 2
    exps = [c if c else 1 for c in coeffs]
    vals = [float(base[0]) ** e for e in exps]
    rep = check_log_independence(vals, bound=6)
    assert rep.verdict == DEPENDENT
    assert abs(sum(r * e for r, e in zip(rep.relation, exps))) == 0
    lead = next(v for v in rep.relation if v)
    assert lead > 0
    assert math.gcd(*[abs(v) for v in rep.relation]) == 1
