"""Normal forms of exact rational functions of degree one, two and three."""
from __future__ import annotations

import cmath
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .exactness import RESIDUE_TOL, NotExactError, PoleOrderError, is_exact
from .monodromy import critical_data
from .ratfun import RationalFunction, partial_fractions

REAL_TOL = 1e-8


class DegreeClassKind(str, Enum):
    LINE = "LINE"
    QUAD_POLY = "QUAD_POLY"
    QUAD_FINITE_DOUBLE_POLE = "QUAD_FINITE_DOUBLE_POLE"
    CUBIC_POLY = "CUBIC_POLY"
    CUBIC_TRIPLE_POLE = "CUBIC_TRIPLE_POLE"
    CUBIC_DOUBLE_PLUS_INFINITY = "CUBIC_DOUBLE_PLUS_INFINITY"


@dataclass(frozen=True)
class DegreeClass:
    degree: int
    kind: DegreeClassKind
    parameters: dict

    def evaluate(self, z):
        """The normal form evaluated at z, in the original coordinate."""
        z = np.asarray(z, dtype=complex)
        p = self.parameters
        k = self.kind
        if k is DegreeClassKind.LINE:
            return p["a"] * z + p["b"]
        if k is DegreeClassKind.QUAD_POLY:
            return p["alpha"] * (z - p["p"]) ** 2 + p["beta"]
        if k is DegreeClassKind.QUAD_FINITE_DOUBLE_POLE:
            return p["beta"] + p["alpha"] / (z - p["p"]) ** 2
        if k is DegreeClassKind.CUBIC_POLY:
            return sum(c * z**i for i, c in enumerate(p["coeffs"]))
        w = z - p["p"]
        if k is DegreeClassKind.CUBIC_TRIPLE_POLE:
            return p["c"] + p["a"] / w**3 + p["b"] / w**2
        return p["a"] * w + p["b"] + p["c"] / w**2

    def to_json(self) -> dict:
        def enc(v):
            if isinstance(v, (list, tuple)):
                return [enc(x) for x in v]
            v = complex(v)
            return [float(f"{v.real:.12g}") + 0.0, float(f"{v.imag:.12g}") + 0.0]

        return {"degree": self.degree, "class": self.kind.value, "parameters": {k: enc(v) for k, v in self.parameters.items()}}


def classify_exact(f: RationalFunction, tol: float = RESIDUE_TOL) -> DegreeClass:
    """Sort an exact f of degree 1-3 by its pole partition and extract normal-form constants."""
    if not is_exact(f, tol):
        raise NotExactError("classification needs an exact rational function")
    d = f.degree
    if d not in (1, 2, 3):
        raise ValueError(f"degree {d} is outside the classified range 1..3")
    finite = sorted(m for _, m in f.poles)
    if any(m < 2 for m in finite):
        raise PoleOrderError("exact function with a simple finite pole")
    at_inf = d - sum(finite)
    pf = partial_fractions(f)
    poly = pf.polynomial.coeffs

    def pc(i):
        return complex(poly[i]) if i < len(poly) else 0j

    if d == 1:
        if finite:
            raise PoleOrderError("degree-one exact function with a finite pole")
        return DegreeClass(1, DegreeClassKind.LINE, {"a": pc(1), "b": pc(0)})

    if d == 2:
        if not finite:
            alpha = pc(2)
            p = -pc(1) / (2 * alpha)
            beta = complex(f(p))
            return DegreeClass(2, DegreeClassKind.QUAD_POLY, {"alpha": alpha, "p": p, "beta": beta})
        if finite == [2] and at_inf == 0:
            p = f.poles[0][0]
            return DegreeClass(
                2,
                DegreeClassKind.QUAD_FINITE_DOUBLE_POLE,
                {"alpha": pf.coefficient(p, 2), "p": p, "beta": pc(0)},
            )
        raise PoleOrderError(f"degree-two pole partition {finite} + {at_inf} at infinity")

    if not finite:
        return DegreeClass(3, DegreeClassKind.CUBIC_POLY, {"coeffs": [pc(i) for i in range(4)]})
    p = f.poles[0][0]
    if finite == [3] and at_inf == 0:
        return DegreeClass(
            3,
            DegreeClassKind.CUBIC_TRIPLE_POLE,
            {"a": pf.coefficient(p, 3), "b": pf.coefficient(p, 2), "c": pc(0), "p": p},
        )
    if finite == [2] and at_inf == 1:
        a = pc(1)
        return DegreeClass(
            3,
            DegreeClassKind.CUBIC_DOUBLE_PLUS_INFINITY,
            {"a": a, "b": pc(0) + a * p, "c": pf.coefficient(p, 2), "p": p},
        )
    raise PoleOrderError(f"degree-three pole partition {finite} + {at_inf} at infinity")


@dataclass(frozen=True)
class CurveVerdict:
    form: str
    im_beta: float
    reducible: bool
    geometry: str  # "hyperbola" | "two-lines"
    near_degenerate: bool
    coordinate: dict

    def to_json(self) -> dict:
        return {
            "form": self.form,
            "imBeta": float(f"{self.im_beta:.12g}"),
            "reducible": self.reducible,
            "geometry": self.geometry,
            "nearDegenerate": self.near_degenerate,
            "coordinate": self.coordinate,
        }


def degree_two_curve_verdict(d: DegreeClass, tol: float = REAL_TOL) -> CurveVerdict:
    """Reduce a degree-two class to 2xy + Im(beta) = 0 in the coordinate u = x + iy.

    For the polynomial class u = sqrt(alpha) (z - p); for the finite double
    pole u = sqrt(alpha) / (z - p).  In both cases f = u**2 + beta.
    """
    if d.degree != 2:
        raise ValueError("curve verdict is defined for degree two only")
    alpha, p, beta = d.parameters["alpha"], d.parameters["p"], d.parameters["beta"]
    thresh = tol * (1 + abs(beta))
    im_beta = beta.imag
    reducible = abs(im_beta) <= thresh
    near = thresh < abs(im_beta) <= 1e3 * thresh or (reducible and abs(im_beta) > 1e-3 * thresh)
    sa = cmath.sqrt(alpha)
    kind = "affine" if d.kind is DegreeClassKind.QUAD_POLY else "inverted-affine"
    expr = "sqrt(alpha)*(z - p)" if kind == "affine" else "sqrt(alpha)/(z - p)"
    coord = {
        "kind": kind,
        "u": expr,
        "sqrtAlpha": [float(f"{sa.real:.12g}"), float(f"{sa.imag:.12g}")],
        "p": [float(f"{p.real:.12g}") + 0.0, float(f"{p.imag:.12g}") + 0.0],
    }
    return CurveVerdict(
        form="2xy + Im β = 0",
        im_beta=im_beta,
        reducible=reducible,
        geometry="two-lines" if reducible else "hyperbola",
        near_degenerate=near,
        coordinate=coord,
    )


def normal_coordinate(d: DegreeClass, z):
    """u(z) for a degree-two class, so that f(z) = u**2 + beta."""
    alpha, p = d.parameters["alpha"], d.parameters["p"]
    sa = cmath.sqrt(alpha)
    z = np.asarray(z, dtype=complex)
    if d.kind is DegreeClassKind.QUAD_POLY:
        return sa * (z - p)
    return sa / (z - p)


def cubic_singularity_trigger(f: RationalFunction, real_tol: float = 1e-9) -> list[dict]:
    """Non-pole critical values of a degree-three exact f with RP^1 membership flags."""
    d = classify_exact(f)
    if d.degree != 3:
        raise ValueError("singularity trigger is defined for degree three")
    cd = critical_data(f, real_tol)
    out = []
    for z0, v, flag in zip(cd.points, cd.values, cd.real_flags):
        if cmath.isinf(v):
            continue
        out.append({"point": z0, "value": v, "onRP1": bool(flag)})
    return out
