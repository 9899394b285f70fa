from fractions import Fraction
import math

import numpy as np
import pytest

from drrquanta import FlowSpec, SystemSpec
from drrquanta.bounds import (
    alpha_at_tau,
    bound_report,
    deviation,
    exact_delay_bound,
    is_feasible_exact,
    is_feasible_modified,
    modified_delay_bound,
    phi,
    real_mod,
    tau,
)
from drrquanta.errors import SameFlow

from conftest import oracle_modified, random_spec

COUNTER = SystemSpec(40, 3, (FlowSpec(10, 1, 1), FlowSpec(10, 1, 1)))


def exact_oracle(b, r, c, L, q, i):
    """Exact bound in rational arithmetic, written out term by term."""
    b, r, q = [Fraction(x) for x in b], [Fraction(x) for x in r], [Fraction(x) for x in q]
    c, L = Fraction(c), Fraction(L)
    B = b[i] + L
    rem = B - math.floor(B / q[i]) * q[i]
    t = (q[i] - rem) / r[i]

    def psi(x):
        m = math.floor((x + L) / q[i])
        return x + sum(m * q[j] + q[j] + L for j in range(len(q)) if j != i)

    return max(psi(b[i]) / c, psi(b[i] + r[i] * t) / c - t)


@pytest.mark.parametrize("q, expected", [
    ((5, 9), (1.0, 0.575)),
    ((6, 10), (1.075, 0.625)),
    ((7, 11), (0.875, 0.675)),
])
def test_counterexample_values(q, expected):
    got = tuple(exact_delay_bound(COUNTER, q, i) for i in range(2))
    assert got == pytest.approx(expected, abs=1e-9)


def test_counterexample_is_not_convex():
    # midpoint of two feasible points is infeasible under the exact bound
    assert is_feasible_exact(COUNTER, (5, 9))
    assert is_feasible_exact(COUNTER, (7, 11))
    assert not is_feasible_exact(COUNTER, (6, 10))


def test_exact_bound_matches_rational_oracle():
    rng = np.random.default_rng(11)
    for _ in range(300):
        n = int(rng.integers(2, 6))
        c = int(rng.integers(20, 500))
        L = int(rng.integers(1, 6))
        b = rng.integers(0, 40, n).tolist()
        r = rng.integers(1, 10, n).tolist()
        q = (rng.integers(1, 200, n) / 4).tolist()
        spec = SystemSpec(c, L, tuple(FlowSpec(bi, ri, 100.0) for bi, ri in zip(b, r)))
        for i in range(n):
            want = float(exact_oracle(b, r, c, L, q, i))
            assert exact_delay_bound(spec, q, i) == pytest.approx(want, rel=1e-12, abs=1e-12)


def test_real_mod():
    assert real_mod(13, 5) == 3
    assert real_mod(13, 6.5) == 0
    assert real_mod(7.5, 2.5) == 0


def test_tau_and_alpha():
    assert tau(COUNTER, (5, 9), 0) == 2.0
    assert alpha_at_tau(COUNTER, (5, 9), 0) == 12.0


def test_phi_rejects_same_flow():
    with pytest.raises(SameFlow):
        phi(COUNTER, (5, 9), 0, 0, 10.0)
    assert phi(COUNTER, (5, 9), 0, 1, 10.0) == 2 * 9 + 9 + 3


def test_modified_bound_against_oracle():
    rng = np.random.default_rng(5)
    for _ in range(200):
        spec = random_spec(rng, int(rng.integers(2, 7)))
        q = rng.uniform(0.1, 100.0, spec.n)
        want = oracle_modified(spec, q)[0]
        got = [modified_delay_bound(spec, q, i) for i in range(spec.n)]
        np.testing.assert_allclose(got, want, rtol=1e-12)


def test_modified_equals_exact_at_divisor_quanta():
    # b + L = 13 is a multiple of 13 and of 6.5
    for q in [(13, 13), (6.5, 13), (13, 3.25)]:
        for i in range(2):
            assert modified_delay_bound(COUNTER, q, i) == pytest.approx(
                exact_delay_bound(COUNTER, q, i), rel=1e-12)


def test_deviation_and_report():
    rep = bound_report(COUNTER, (5, 9), 1)
    assert rep.deviation == pytest.approx(rep.modified_bound - 1.0)
    assert deviation(COUNTER, (5, 9), 1) == rep.deviation
    assert rep.exact_bound <= rep.modified_bound


def test_feasibility_rejects_bad_vectors():
    assert not is_feasible_modified(COUNTER, (0.0, 1.0))
    assert not is_feasible_modified(COUNTER, (1.0,))
    assert not is_feasible_exact(COUNTER, (-1.0, 1.0))
    assert is_feasible_modified(COUNTER, (1.0, 1.0))


def test_exact_bound_round_count_at_float_boundary():
    # alpha + L rounds to just below 2*q here; the bound must still count
    # two rounds and coincide with the modified bound
    b, L = 8.78278103012795, 4.329576719514444
    spec = SystemSpec(100.0, L, (FlowSpec(b, 1000.0, 1.0), FlowSpec(5.0, 1.0, 1.0)))
    q = (b + L, 30.0)
    assert exact_delay_bound(spec, q, 0) == pytest.approx(1.1491347972432056, rel=1e-12)
    assert exact_delay_bound(spec, q, 0) == pytest.approx(modified_delay_bound(spec, q, 0), rel=1e-12)
