import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from inflectus.ratfun import ComplexPoly, RationalFunction  # noqa: E402

ACCEPTANCE: dict[int, tuple[bool, str]] = {}


def record(n: int, ok: bool, detail: str = "") -> None:
    ACCEPTANCE[n] = (bool(ok), detail)
    print(f"criterion {n:2d}: {'PASS' if ok else 'FAIL'} {detail}")


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[n]
        terminalreporter.write_line(f"criterion {n:2d}: {'PASS' if ok else 'FAIL'}  {detail}")


def random_poly(rng, degree: int) -> ComplexPoly:
    c = rng.normal(size=degree + 1) + 1j * rng.normal(size=degree + 1)
    if abs(c[-1]) < 0.3:
        c[-1] = 1.0 + 0.5j
    return ComplexPoly(c)


def random_rational(rng, k: int, l: int, spread: float = 1.5) -> RationalFunction:
    """Q/P with deg Q = k and l distinct simple-ish poles in a box."""
    roots = rng.uniform(-spread, spread, l) + 1j * rng.uniform(-spread, spread, l)
    return RationalFunction(random_poly(rng, k), ComplexPoly.from_roots(list(roots)))


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
