"""The defining real polynomial of the inflection curve and its checks."""
from __future__ import annotations

from dataclasses import dataclass
from math import comb

import numpy as np

from .ratfun import ComplexPoly, RationalFunction, derivative, wronskian

TRIM_TOL = 1e-10
POLE_TOL = 1e-9


class DegenerateInputError(ValueError):
    """R is constant, so R' vanishes identically."""


class PoleProximityError(ValueError):
    pass


@dataclass(frozen=True)
class RealBivariatePoly:
    """Real polynomial sum c[i, j] x^i y^j.

    ``coeffs`` is normalized so that its largest entry has modulus one;
    ``scale`` is the factor that was divided out.  Coefficients built by
    ``defining_polynomial`` are kept in extended precision and evaluation
    runs in the coefficients' precision: far from the window's origin the
    monomial form cancels heavily and double precision loses digits there.
    """

    coeffs: np.ndarray
    scale: float = 1.0

    @property
    def total_degree(self) -> int:
        top = np.abs(self.coeffs).max() if self.coeffs.size else 0.0
        if top == 0.0:
            return -1
        i, j = np.nonzero(np.abs(self.coeffs) > TRIM_TOL * top)
        return int((i + j).max())

    def __call__(self, x, y):
        dt = self.coeffs.dtype
        x = np.asarray(x, dtype=dt)
        y = np.asarray(y, dtype=dt)
        out = np.zeros(np.broadcast(x, y).shape, dtype=dt)
        ny = self.coeffs.shape[1]
        for i in range(self.coeffs.shape[0] - 1, -1, -1):
            row = np.zeros_like(out)
            for j in range(ny - 1, -1, -1):
                row = row * y + self.coeffs[i, j]
            out = out * x + row
        out = out.astype(float)
        return out if out.ndim else float(out)

    def magnitude(self, x, y):
        """sum |c_ij| |x|^i |y|^j, used as the local scale for relative errors."""
        return RealBivariatePoly(np.abs(self.coeffs))(np.abs(x), np.abs(y))

    def to_json(self) -> dict:
        i, j = np.nonzero(self.coeffs)
        return {
            "coeffs": [[int(a), int(b), float(self.coeffs[a, b])] for a, b in zip(i, j)],
            "degree": self.total_degree,
        }

    @classmethod
    def from_json(cls, data: dict) -> "RealBivariatePoly":
        entries = data["coeffs"]
        n = 1 + max([max(a, b) for a, b, _ in entries], default=0)
        c = np.zeros((n, n))
        for a, b, v in entries:
            c[a, b] = v
        return cls(c)


def _zzbar_to_xy(M: np.ndarray) -> np.ndarray:
    """Rewrite sum M[a, b] z^a zbar^b in the monomial basis x^i y^j."""
    na, nb = M.shape
    n = na + nb - 1
    out = np.zeros((n, n), dtype=np.clongdouble)
    # (x + iy)^a = sum_p C(a,p) x^(a-p) (iy)^p ; (x - iy)^b = sum_q C(b,q) x^(b-q) (-iy)^q
    zpow = [np.array([comb(a, p) * (1j) ** p for p in range(a + 1)], dtype=np.clongdouble) for a in range(na)]
    zbpow = [np.array([comb(b, q) * (-1j) ** q for q in range(b + 1)], dtype=np.clongdouble) for b in range(nb)]
    for a in range(na):
        for b in range(nb):
            m = M[a, b]
            if m == 0:
                continue
            conv = np.convolve(zpow[a], zbpow[b])  # index = power of y
            deg = a + b
            for yp, c in enumerate(conv):
                out[deg - yp, yp] += m * c
    return out


def defining_polynomial(R: RationalFunction, normalize: bool = True) -> RealBivariatePoly:
    """F_R = (W conj(P)^2 - conj(W) P^2) / 2i as a real polynomial in x, y."""
    Q, P = R.numerator, R.denominator
    W = wronskian(Q, P)
    if W.is_zero:
        raise DegenerateInputError("R is constant; the inflection locus is undefined")
    pc = P.coeffs.astype(np.clongdouble)
    w = W.coeffs.astype(np.clongdouble)
    h = np.convolve(pc, pc)
    n = max(len(w), len(h))
    wp = np.zeros(n, np.clongdouble)
    hp = np.zeros(n, np.clongdouble)
    wp[: len(w)] = w
    hp[: len(h)] = h
    M = (np.outer(wp, np.conj(hp)) - np.outer(hp, np.conj(wp))) / 2j
    C = _zzbar_to_xy(M)
    scale_im = np.abs(C.imag).max()
    scale_re = np.abs(C.real).max()
    if scale_im > 1e-9 * max(scale_re, 1e-300):
        raise ArithmeticError("defining polynomial has a non-negligible imaginary part")
    c = C.real
    top = np.abs(c).max()
    if top == 0.0 or top <= 1e-13 * max(W.scale, 1e-300) * float(np.abs(h).max()):
        raise DegenerateInputError("R' is a real constant; F_R vanishes identically")
    # drop rows/cols beyond the trimmed total degree
    mask = np.abs(c) > TRIM_TOL * top
    c = np.where(mask, c, 0.0)
    i, j = np.nonzero(c)
    size = int((i + j).max()) + 1 if i.size else 1
    c = c[:size, :size]
    if normalize:
        return RealBivariatePoly(c / top, float(top))
    return RealBivariatePoly(c, 1.0)


def im_r_prime(R: RationalFunction, z: complex, f: RationalFunction | None = None) -> float:
    """Im R'(z), the inflection condition for trajectories of -R d/dz."""
    f = derivative(R) if f is None else f
    val = f.evaluate(z, tol=POLE_TOL)
    if not isinstance(val, complex):
        raise PoleProximityError(f"{z} is too close to a pole of R'")
    return val.imag


def real_field_inflection_expression(R: RationalFunction, z: complex, h: float | None = None) -> float:
    """u (u v_x + v v_y) - v (u u_x + v u_y) for (u, v) = (Re R, Im R).

    Partial derivatives are central differences with step
    ``1e-4 * max(1, |z|)`` unless ``h`` is given.
    """
    z = complex(z)
    h = 1e-4 * max(1.0, abs(z)) if h is None else h
    for a, _ in R.poles:
        if abs(z - a) <= 2 * h:
            raise PoleProximityError(f"{z} is within the difference stencil of a pole")
    r0 = complex(R(z))
    dx = (complex(R(z + h)) - complex(R(z - h))) / (2 * h)
    dy = (complex(R(z + 1j * h)) - complex(R(z - 1j * h))) / (2 * h)
    u, v = r0.real, r0.imag
    ux, vx = dx.real, dx.imag
    uy, vy = dy.real, dy.imag
    return u * (u * vx + v * vy) - v * (u * ux + v * uy)


@dataclass(frozen=True)
class DegreeReport:
    n: int
    bound: int
    actual: int
    generic: int
    generic_formula_matches: bool
    wronskian_cancellation: bool
    top_form_cancellation: bool

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "bound": self.bound,
            "actual": self.actual,
            "generic": self.generic,
            "genericFormulaMatches": self.generic_formula_matches,
            "wronskianCancellation": self.wronskian_cancellation,
            "topFormCancellation": self.top_form_cancellation,
        }


def degree_report(R: RationalFunction) -> DegreeReport:
    """Degree of F_R against n + 2l and the generic formulas.

    When the generic formula misses, the two flags say where the drop came
    from: leading terms of the Wronskian cancelling, or the top homogeneous
    part of F_R cancelling (W conj(P)^2 and its conjugate agreeing there).
    """
    k = int(R.numerator.degree)
    l = R.l
    W = wronskian(R.numerator, R.denominator)
    if W.is_zero:
        raise DegenerateInputError("R is constant")
    n = int(W.degree)
    bound = n + 2 * l
    actual = defining_polynomial(R).total_degree
    generic = k + 3 * l - 1 if k != l else 4 * l - 2
    generic_n = k + l - 1 if k != l else 2 * l - 2
    return DegreeReport(
        n=n,
        bound=bound,
        actual=actual,
        generic=generic,
        generic_formula_matches=actual == generic,
        wronskian_cancellation=n < generic_n,
        top_form_cancellation=actual < bound,
    )
