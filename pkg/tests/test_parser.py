import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from inflectus.parser import (
    BinOp,
    CompileError,
    Neg,
    Num,
    ParseError,
    Pow,
    Var,
    compile_ast,
    compile_expression,
    evaluate,
    parse_expression,
    pretty,
)

PROBES = np.array([0.37 + 1.21j, -1.4 + 0.6j, 2.2 - 0.9j])


def test_simple_forms():
    R = compile_expression("z + 1/z")
    assert R(2.0) == pytest.approx(2.5)
    assert compile_expression("0.35i")(0) == pytest.approx(0.35j)
    assert compile_expression("(1+0.35i)/(z-(-1.25+0.05i))")(0) == pytest.approx((1 + 0.35j) / (1.25 - 0.05j))
    assert compile_expression("z^-2")(2.0) == pytest.approx(0.25)
    assert compile_expression("-z^2")(3.0) == pytest.approx(-9.0)
    assert compile_expression("2e-1*z")(1.0) == pytest.approx(0.2)


def test_cancellation_in_compile():
    R = compile_expression("(z^2-1)/(z-1)")
    assert R.denominator.degree == 0 and R(5.0) == pytest.approx(6.0)


@pytest.mark.parametrize(
    "text, offset",
    [("z^^2", 2), ("z +", 3), ("(z", 2), ("z^1.5", 2), ("2*y", 2), ("", 0)],
)
def test_parse_errors(text, offset):
    with pytest.raises(ParseError) as exc:
        parse_expression(text)
    assert exc.value.offset == offset
    assert "offset" in exc.value.to_json()


def test_compile_errors():
    with pytest.raises(CompileError):
        compile_expression("1/(z-z)")
    with pytest.raises(CompileError):
        compile_expression("z^65")
    with pytest.raises(CompileError):
        compile_expression("(z^40)*(z^40)")


num_st = st.builds(
    complex,
    st.floats(-5, 5, allow_nan=False).map(lambda x: round(x, 3)),
    st.floats(-5, 5, allow_nan=False).map(lambda x: round(x, 3)),
).map(Num)


def _trees():
    leaves = st.one_of(num_st, st.just(Var()))
    return st.recursive(
        leaves,
        lambda kids: st.one_of(
            st.builds(Neg, kids),
            st.builds(BinOp, st.sampled_from("+-*"), kids, kids),
            st.builds(Pow, kids, st.integers(0, 3)),
        ),
        max_leaves=8,
    )


@settings(max_examples=150, deadline=None)
@given(_trees())
def test_pretty_round_trip(tree):
    again = parse_expression(pretty(tree))
    assert np.allclose(evaluate(again, PROBES), evaluate(tree, PROBES), rtol=1e-12, atol=1e-12)


@settings(max_examples=150, deadline=None)
@given(_trees())
def test_compile_agrees_with_evaluate(tree):
    try:
        R = compile_ast(tree)
    except CompileError:
        return
    direct = evaluate(tree, PROBES) * np.ones_like(PROBES)
    comp = np.array([R(z) for z in PROBES])
    scale = np.maximum(1.0, np.abs(direct))
    assert np.all(np.abs(comp - direct) <= 1e-10 * scale)


@settings(max_examples=60, deadline=None)
@given(_trees(), _trees())
def test_quotients_agree(a, b):
    tree = BinOp("/", a, b)
    try:
        R = compile_ast(tree)
    except CompileError:
        return
    direct = evaluate(tree, PROBES) * np.ones_like(PROBES)
    ok = np.isfinite(direct) & (np.abs(evaluate(b, PROBES) * np.ones_like(PROBES)) > 1e-3)
    comp = np.array([complex(R.evaluate(z)) if R.evaluate(z) is not None else np.nan for z in PROBES[ok]])
    assert np.all(np.abs(comp - direct[ok]) <= 1e-8 * np.maximum(1.0, np.abs(direct[ok])))
