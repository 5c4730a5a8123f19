import numpy as np
import pytest

from conftest import random_poly
from inflectus.exactness import NotExactError, PoleOrderError, dessin_pole_check, is_exact, primitive
from inflectus.parser import compile_expression
from inflectus.ratfun import ComplexPoly, RationalFunction, derivative


def test_simple_pole_is_not_exact():
    rep = is_exact(compile_expression("1/(z-1)"))
    assert not rep
    assert abs(rep.residues[0][1] - 1) < 1e-12
    with pytest.raises(NotExactError):
        primitive(compile_expression("1/(z-1)"))


def test_derivatives_are_exact_and_integrate_back():
    rng = np.random.default_rng(11)
    for _ in range(20):
        R = RationalFunction(random_poly(rng, 3), ComplexPoly.from_roots([(0.7j, 2), (-1.1, 1)]))
        f = derivative(R)
        assert is_exact(f)
        G = primitive(f)
        diffs = [G(z) - R(z) for z in (0.3, 2j, -1 + 1j, 3 - 2j)]
        assert np.ptp(np.real(diffs)) + np.ptp(np.imag(diffs)) < 1e-8
        dG = derivative(G)
        for z in (0.5 + 0.5j, -2.0):
            assert abs(dG(z) - f(z)) < 1e-8 * max(1.0, abs(f(z)))


def test_polynomial_primitive_has_no_constant():
    G = primitive(compile_expression("3*z^2 + 1"))
    assert G.numerator.allclose(ComplexPoly([0, 1, 0, 1]))


def test_json():
    js = is_exact(compile_expression("1/z^2 + 2/(z-1)")).to_json()
    assert js["exact"] is False and len(js["residues"]) == 2


def test_dessin_pole_check():
    f = derivative(compile_expression("1/z + 1/(z-1)^2"))
    assert sorted((m, n) for _, m, n in dessin_pole_check(f)) == [(2, 4), (3, 6)]
    with pytest.raises(PoleOrderError):
        dessin_pole_check(compile_expression("1/z"))
