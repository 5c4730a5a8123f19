import cmath

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from conftest import random_poly, random_rational
from inflectus.ratfun import (
    POLE,
    ComplexPoly,
    RationalFunction,
    derivative,
    partial_fractions,
    residue_at_infinity,
    residues,
    roots,
    wronskian,
)

root_st = st.complex_numbers(min_magnitude=0.0, max_magnitude=3.0, allow_nan=False, allow_infinity=False)


def test_trim_and_degree():
    assert ComplexPoly([1, 2, 0, 0]).degree == 1
    assert ComplexPoly().is_zero
    assert ComplexPoly().degree == float("-inf")


def test_arithmetic_matches_pointwise():
    rng = np.random.default_rng(1)
    p, q = random_poly(rng, 4), random_poly(rng, 3)
    z = 0.3 - 0.7j
    assert abs((p * q)(z) - p(z) * q(z)) < 1e-12
    assert abs((p - q)(z) - (p(z) - q(z))) < 1e-12
    assert abs((q ** 3)(z) - q(z) ** 3) < 1e-10


def test_divmod_reconstructs():
    rng = np.random.default_rng(2)
    p, q = random_poly(rng, 6), random_poly(rng, 2)
    quo, rem = p.divmod(q)
    assert rem.degree < q.degree
    assert (quo * q + rem).allclose(p, atol=1e-10)


def test_derivative_and_antiderivative():
    p = ComplexPoly([1, 2, 3])
    assert p.derivative() == ComplexPoly([2, 6])
    assert p.derivative().antiderivative().allclose(ComplexPoly([0, 2, 3]))


@settings(max_examples=60, deadline=None)
@given(st.lists(root_st, min_size=1, max_size=5), st.lists(st.integers(1, 3), min_size=5, max_size=5))
def test_roots_recover_multiplicities(rs, mults):
    # keep the roots well separated so clusters are unambiguous
    pts = []
    for r in rs:
        if all(abs(r - s) > 0.3 for s in pts):
            pts.append(r)
    wanted = list(zip(pts, mults))
    found = roots(ComplexPoly.from_roots(wanted))
    assert sorted(m for _, m in found) == sorted(m for _, m in wanted)
    for a, m in wanted:
        best = min(found, key=lambda t: abs(t[0] - a))
        assert best[1] == m
        assert abs(best[0] - a) < 1e-6


def test_reduce_cancels_common_factor():
    num = ComplexPoly.from_roots([1.0, 2j])
    den = ComplexPoly.from_roots([1.0, -1.0, 3.0])
    R = RationalFunction(num, den)
    assert R.denominator.degree == 2
    assert R.numerator.degree == 1
    assert abs(R.denominator.lead - 1) < 1e-15
    assert abs(R(0.5) - num(0.5) / den(0.5)) < 1e-12


def test_evaluate_pole_marker():
    R = RationalFunction(ComplexPoly([1.0]), ComplexPoly([-1.0, 1.0]))
    assert R.evaluate(1.0) is POLE
    assert R.evaluate(2.0) == pytest.approx(1.0)


def test_derivative_pointwise():
    rng = np.random.default_rng(3)
    R = random_rational(rng, 3, 2)
    f = derivative(R)
    z, h = 0.4 + 2.1j, 1e-6
    fd = (R(z + h) - R(z - h)) / (2 * h)
    assert abs(f(z) - fd) < 1e-6 * max(1, abs(fd))


def test_wronskian():
    Q, P = ComplexPoly([0, 0, 1]), ComplexPoly([1, 1])
    # Q'P - QP' = 2z(1+z) - z^2
    assert wronskian(Q, P).allclose(ComplexPoly([0, 2, 1]))


def test_partial_fractions_reconstruct():
    rng = np.random.default_rng(4)
    f = RationalFunction(random_poly(rng, 5), ComplexPoly.from_roots([(0.5j, 2), (-1.0, 1), (1.2, 3)]))
    pf = partial_fractions(f)
    for z in (0.1 + 0.2j, 2 - 1j, -3j):
        assert abs(pf(z) - f(z)) < 1e-9 * max(1, abs(f(z)))


def test_residues_sum_with_infinity():
    rng = np.random.default_rng(5)
    for _ in range(10):
        f = random_rational(rng, 2, 4)
        total = sum(c for _, c in residues(f)) + residue_at_infinity(f)
        assert abs(total) < 1e-8


def test_residue_of_simple_pole():
    f = RationalFunction(ComplexPoly([3.0]), ComplexPoly([-2j, 1]))
    (a, c), = residues(f)
    assert abs(a - 2j) < 1e-12 and abs(c - 3) < 1e-12


def test_json_round_trip():
    rng = np.random.default_rng(6)
    R = random_rational(rng, 2, 3)
    back = RationalFunction.from_json(R.to_json())
    for z in (0.2, 1j, -2 + 3j):
        assert cmath.isclose(back(z), R(z), rel_tol=1e-10)
