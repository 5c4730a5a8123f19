"""Local structure of the inflection curve at poles and at infinity."""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

import numpy as np

from .inflection import DegenerateInputError
from .ratfun import ComplexPoly, RationalFunction, derivative, roots

ANGLE_TOL = 1e-9
TWO_PI = 2 * math.pi


@dataclass(frozen=True)
class DirectionSet:
    """Sorted, deduplicated angles in [0, 2pi)."""

    angles: tuple[float, ...]

    @classmethod
    def of(cls, values) -> "DirectionSet":
        norm = []
        for a in values:
            a = math.fmod(float(a), TWO_PI) + 0.0
            if a < 0:
                a += TWO_PI
            if TWO_PI - a <= ANGLE_TOL:
                a = 0.0
            norm.append(a)
        norm.sort()
        out: list[float] = []
        for a in norm:
            if not out or a - out[-1] > ANGLE_TOL:
                out.append(a)
        if len(out) > 1 and out[0] + TWO_PI - out[-1] <= ANGLE_TOL:
            out.pop()
        return cls(tuple(out))

    def __len__(self):
        return len(self.angles)

    def __iter__(self):
        return iter(self.angles)

    def matches(self, other: "DirectionSet", tol: float = ANGLE_TOL) -> bool:
        if len(self) != len(other):
            return False
        return all(min(angular_distance(a, b) for b in other.angles) <= tol for a in self.angles)

    def nearest(self, angle: float) -> tuple[float, float]:
        """(closest angle in the set, angular distance to it)."""
        best = min(self.angles, key=lambda a: angular_distance(a, angle))
        return best, angular_distance(best, angle)

    def to_json(self) -> list[float]:
        return [float(f"{a:.12g}") for a in self.angles]


def angular_distance(a: float, b: float) -> float:
    d = abs(math.fmod(a - b, TWO_PI))
    return min(d, TWO_PI - d)


@dataclass(frozen=True)
class PoleData:
    location: complex
    order: int
    leading_coefficient: complex
    tangent_rays: DirectionSet

    @property
    def branch_count(self) -> int:
        return self.order + 1

    def branches(self) -> list[tuple[float, float]]:
        """Pairs of opposite rays, one pair per analytic branch."""
        angs = self.tangent_rays.angles
        half = len(angs) // 2
        return [(angs[i], angs[i + half]) for i in range(half)]

    def to_json(self) -> dict:
        z, a = self.location, self.leading_coefficient
        return {
            "location": [_r(z.real), _r(z.imag)],
            "order": self.order,
            "leadingCoefficient": [_r(a.real), _r(a.imag)],
            "branchCount": self.branch_count,
            "tangentRays": self.tangent_rays.to_json(),
        }


@dataclass(frozen=True)
class LaurentLeading:
    c: complex
    m: int


def _r(x: float) -> float:
    return float(f"{x:.12g}")


def pole_tangent_rays(s: int, a: complex) -> DirectionSet:
    """Tangent rays of the curve at a pole of order s with leading coefficient a."""
    if s < 1 or a == 0:
        raise ValueError("need s >= 1 and a != 0")
    base = cmath.phase(-s * a)
    return DirectionSet.of((base + m * math.pi) / (s + 1) for m in range(2 * s + 2))


def separatrix_directions(s: int, a: complex) -> DirectionSet:
    """Directions where w**(s+1) / (-a) is real: the separatrices of w' = -a w**-s."""
    if s < 1 or a == 0:
        raise ValueError("need s >= 1 and a != 0")
    base = cmath.phase(-a)
    return DirectionSet.of((base + j * math.pi) / (s + 1) for j in range(2 * s + 2))


def poles(R: RationalFunction) -> list[PoleData]:
    out = []
    plist = R.poles
    for idx, (z0, s) in enumerate(plist):
        others = ComplexPoly.from_roots([p for j, p in enumerate(plist) if j != idx])
        a = complex(R.numerator(z0) / others(z0))
        out.append(PoleData(complex(z0), s, a, pole_tangent_rays(s, a)))
    return out


def singular_candidates(R: RationalFunction, tol: float = 1e-8) -> list[complex]:
    """Finite zeros of R'' where Im R' vanishes to within ``tol``."""
    f = derivative(R)
    if f.is_zero:
        raise DegenerateInputError("R is constant")
    g = derivative(f)
    if g.numerator.degree <= 0:
        return []
    out = []
    for z0, _ in roots(g.numerator):
        if any(abs(z0 - a) <= 1e-9 * max(1.0, abs(a)) for a, _ in f.poles):
            continue
        if abs(complex(f(z0)).imag) <= tol:
            out.append(complex(z0))
    return out


def laurent_leading_at_infinity(f: RationalFunction) -> LaurentLeading:
    """(c, m) with f(z) = c z**m + O(z**(m-1)) at infinity."""
    if f.is_zero:
        raise DegenerateInputError("f vanishes identically")
    m = int(f.numerator.degree) - f.l
    return LaurentLeading(f.numerator.lead / f.denominator.lead, m)


def asymptotic_rays(c: complex, m: int) -> DirectionSet:
    """Solutions of Im(c exp(i m theta)) = 0: exactly 2|m| angles."""
    if m == 0 or c == 0:
        raise ValueError("need m != 0 and c != 0")
    base = -cmath.phase(c)
    return DirectionSet.of((j * math.pi + base) / m for j in range(2 * abs(m)))


@dataclass(frozen=True)
class BoundednessReport:
    verdict: str  # "bounded" | "unbounded" | "degenerate"
    end_count: int
    rays: DirectionSet
    leading: LaurentLeading | None
    heuristic: bool = False
    steps: tuple = field(default=())

    def to_json(self) -> dict:
        out = {"verdict": self.verdict, "endCount": self.end_count, "rays": self.rays.to_json()}
        if self.leading is not None:
            c = self.leading.c
            out["leading"] = {"c": [_r(c.real), _r(c.imag)], "m": self.leading.m}
        out["heuristic"] = self.heuristic
        return out


def boundedness_analysis(R: RationalFunction, real_tol: float = 1e-12) -> BoundednessReport:
    """Decide boundedness from the expansion of R' at infinity.

    m != 0 gives 2|m| unbounded ends.  For m == 0 with a non-real limit the
    curve is bounded.  With a real limit c the curve coincides with
    Im(R' - c) = 0, so the remainder (which decays) decides the ends; that
    branch is flagged heuristic.
    """
    f = derivative(R)
    if f.is_zero:
        raise DegenerateInputError("R is constant")
    lead = laurent_leading_at_infinity(f)
    if lead.m != 0:
        return BoundednessReport("unbounded", 2 * abs(lead.m), asymptotic_rays(lead.c, lead.m), lead)
    if abs(lead.c.imag) > real_tol * max(1.0, abs(lead.c)):
        return BoundednessReport("bounded", 0, DirectionSet(()), lead)
    c_real = lead.c.real
    rest = RationalFunction(f.numerator - f.denominator * c_real, f.denominator, reduce=False, poles=f.poles)
    if rest.is_zero:
        return BoundednessReport("degenerate", 0, DirectionSet(()), lead)
    sub = laurent_leading_at_infinity(rest)
    return BoundednessReport(
        "unbounded",
        2 * abs(sub.m),
        asymptotic_rays(sub.c, sub.m),
        lead,
        heuristic=True,
        steps=(lead, sub),
    )


def feature_radius(R: RationalFunction) -> float:
    """Largest modulus among poles of R, zeros of R and critical points of R'."""
    f = derivative(R)
    pts = [a for a, _ in R.poles] + [a for a, _ in R.zeros]
    if not f.is_zero and f.numerator.degree > 0:
        pts += [a for a, _ in f.zeros]
        g = derivative(f)
        if g.numerator.degree > 0:
            pts += [a for a, _ in roots(g.numerator)]
    return max([abs(p) for p in pts] + [1.0])


def sign_changes_across(F, z0: complex, theta: float, r: float, width: float) -> bool:
    """Does F change sign across the ray of angle theta at radius r?"""
    a = F(z0 + r * np.exp(1j * (theta - width)))
    b = F(z0 + r * np.exp(1j * (theta + width)))
    return bool(np.sign(a) * np.sign(b) < 0)
