import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from inflectus.geometry import (
    DirectionSet,
    angular_distance,
    asymptotic_rays,
    boundedness_analysis,
    feature_radius,
    pole_tangent_rays,
    poles,
    separatrix_directions,
    singular_candidates,
)
from inflectus.inflection import DegenerateInputError, defining_polynomial
from inflectus.parser import compile_expression

coef_st = st.complex_numbers(min_magnitude=0.2, max_magnitude=5.0, allow_nan=False, allow_infinity=False)


def test_direction_set_normalizes():
    d = DirectionSet.of([2 * math.pi, -math.pi / 2, 0.0, 1e-14, math.pi])
    assert d.angles == pytest.approx((0.0, math.pi, 1.5 * math.pi))
    assert d.matches(DirectionSet.of([math.pi, 3 * math.pi / 2, 0.0]))
    assert not d.matches(DirectionSet.of([0.0, math.pi]))
    best, dist = d.nearest(6.2)
    assert best == 0.0 and dist == pytest.approx(2 * math.pi - 6.2)
    assert angular_distance(0.1, 2 * math.pi - 0.1) == pytest.approx(0.2)


def test_inverse_z_rays():
    (p,) = poles(compile_expression("1/z"))
    assert p.order == 1 and p.branch_count == 2
    assert p.tangent_rays.matches(DirectionSet.of([0, math.pi / 2, math.pi, 1.5 * math.pi]))
    assert len(p.branches()) == 2


@settings(max_examples=50, deadline=None)
@given(st.integers(1, 4), coef_st)
def test_tangent_rays_lie_on_the_curve(s, a):
    rays = pole_tangent_rays(s, a)
    assert len(rays) == 2 * s + 2
    for th in rays:
        # leading term of Im R' near the pole: Im(-s a e^{-i(s+1)th}) r^-(s+1)
        assert abs((-s * a * cmath.exp(-1j * (s + 1) * th)).imag) < 1e-9 * abs(a) * s


@settings(max_examples=50, deadline=None)
@given(st.integers(1, 4), coef_st)
def test_separatrix_property(s, a):
    for th in separatrix_directions(s, a):
        assert abs((-a * cmath.exp(-1j * s * th) * cmath.exp(-1j * th)).imag) < 1e-9 * abs(a)


@settings(max_examples=50, deadline=None)
@given(coef_st, st.integers(-4, 4).filter(lambda m: m != 0))
def test_asymptotic_rays_count_and_property(c, m):
    rays = asymptotic_rays(c, m)
    assert len(rays) == 2 * abs(m)
    for th in rays:
        assert abs((c * cmath.exp(1j * m * th)).imag) < 1e-9 * abs(c)


def test_boundedness_examples():
    assert boundedness_analysis(compile_expression("(1+i)*z + 1/(z-1)")).verdict == "bounded"
    rep = boundedness_analysis(compile_expression("1/z"))
    assert rep.verdict == "unbounded" and rep.end_count == 4
    rep = boundedness_analysis(compile_expression("z^3"))
    assert rep.verdict == "unbounded" and rep.end_count == 4
    rep = boundedness_analysis(compile_expression("z + 1/z"))
    assert rep.verdict == "unbounded" and rep.heuristic
    assert boundedness_analysis(compile_expression("2*z")).verdict == "degenerate"
    with pytest.raises(DegenerateInputError):
        boundedness_analysis(compile_expression("5"))


def test_singular_candidates():
    cands = singular_candidates(compile_expression("z^3"))
    assert len(cands) == 1 and abs(cands[0]) < 1e-6
    assert singular_candidates(compile_expression("1/z")) == []
    # z^3 + i z: R'' vanishes at 0 where R' = i, not real
    assert singular_candidates(compile_expression("z^3 + i*z")) == []


def test_singular_candidate_is_a_gradient_zero():
    R = compile_expression("z^3 - 3*z")
    F = defining_polynomial(R, normalize=False)
    h = 1e-6
    for z in singular_candidates(R):
        gx = (F(z.real + h, z.imag) - F(z.real - h, z.imag)) / (2 * h)
        gy = (F(z.real, z.imag + h) - F(z.real, z.imag - h)) / (2 * h)
        assert abs(F(z.real, z.imag)) < 1e-9 and abs(gx) < 1e-5 and abs(gy) < 1e-5


def test_feature_radius():
    assert feature_radius(compile_expression("1/(z-3i)")) == pytest.approx(3.0)
    assert feature_radius(compile_expression("z")) == 1.0
