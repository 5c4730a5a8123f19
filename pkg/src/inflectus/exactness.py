"""Exact rational differentials: zero residues and rational primitives."""
from __future__ import annotations

from dataclasses import dataclass

from .ratfun import ComplexPoly, RationalFunction, partial_fractions

RESIDUE_TOL = 1e-8


class NotExactError(ValueError):
    pass


class PoleOrderError(ArithmeticError):
    """A simple finite pole on a function that passed the residue test."""


@dataclass(frozen=True)
class ExactnessReport:
    exact: bool
    residues: tuple[tuple[complex, complex], ...]

    def __bool__(self):
        return self.exact

    def to_json(self) -> dict:
        return {
            "exact": self.exact,
            "residues": [
                {"pole": [float(f"{a.real:.12g}"), float(f"{a.imag:.12g}")],
                 "residue": [float(f"{c.real:.12g}"), float(f"{c.imag:.12g}")]}
                for a, c in self.residues
            ],
        }


def is_exact(f: RationalFunction, tol: float = RESIDUE_TOL) -> ExactnessReport:
    """f dz is exact iff every finite residue vanishes.

    A residue counts as zero when it is at most ``tol`` times the largest
    Laurent coefficient at the same pole.
    """
    pf = partial_fractions(f)
    exact = True
    report = []
    for a, m in f.poles:
        coeffs = [c for b, j, c in pf.terms if b == a]
        res = next(c for b, j, c in pf.terms if b == a and j == 1)
        scale = max(abs(c) for c in coeffs)
        if abs(res) > tol * scale:
            exact = False
        report.append((a, res))
    return ExactnessReport(exact, tuple(report))


def primitive(f: RationalFunction, tol: float = RESIDUE_TOL) -> RationalFunction:
    """The rational R with R' = f and no constant term in its polynomial part."""
    if not is_exact(f, tol):
        raise NotExactError("f has a nonzero residue and no rational primitive")
    pf = partial_fractions(f)
    poles = [(a, m - 1) for a, m in f.poles if m > 1]
    D = ComplexPoly.from_roots(poles)
    num = pf.polynomial.antiderivative() * D
    for a, j, c in pf.terms:
        if j < 2:
            continue
        # -c / ((j-1) (z-a)^(j-1)) over the common denominator D
        cofactor = ComplexPoly.from_roots([(b, n) for b, n in poles if b != a] + [(a, dict(poles)[a] - (j - 1))])
        num = num + cofactor * (-c / (j - 1))
    return RationalFunction(num, D, reduce=False, poles=poles)


def dessin_pole_check(f: RationalFunction) -> list[tuple[complex, int, int]]:
    """(pole, order, 2*order incident rays) for every finite pole of an exact f."""
    out = []
    for a, m in f.poles:
        if m < 2:
            raise PoleOrderError(f"simple pole at {a} on an exact differential")
        out.append((a, m, 2 * m))
    return out
