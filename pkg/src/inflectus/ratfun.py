"""Complex polynomials and rational functions in one variable.

Coefficients are double-precision complex numbers stored in ascending
order.  Rational functions are kept in lowest terms with a monic
denominator; common factors are cancelled by matching roots rather than
by Euclidean remainder sequences.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

ZERO_TOL = 1e-10
CLUSTER_TOL = 1e-6
MAX_ROOT_ITER = 200
POLE_PROXIMITY_TOL = 1e-12

_EPS_EVAL = 1e-14


class RootFindingError(ArithmeticError):
    """Simultaneous iteration did not reach the residual tolerance."""


class _PoleMarker:
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "POLE"

    def __bool__(self) -> bool:
        return False


POLE = _PoleMarker()


def _trim(c: np.ndarray, tol: float) -> np.ndarray:
    if c.size == 0:
        return c
    mags = np.abs(c)
    top = mags.max()
    if top == 0.0:
        return c[:0]
    keep = np.nonzero(mags > tol * top)[0]
    return c[: keep[-1] + 1]


class ComplexPoly:
    """Polynomial with complex coefficients, ascending powers.

    The zero polynomial has no coefficients and degree ``-inf``.
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable[complex] | np.ndarray = (), tol: float = ZERO_TOL):
        c = np.array(list(coeffs) if not isinstance(coeffs, np.ndarray) else coeffs, dtype=complex).ravel()
        c = _trim(c, tol).copy()
        c.flags.writeable = False
        self.coeffs = c

    @classmethod
    def constant(cls, value: complex) -> "ComplexPoly":
        return cls([value])

    @classmethod
    def z(cls) -> "ComplexPoly":
        return cls([0.0, 1.0])

    @classmethod
    def from_roots(cls, roots: Sequence[tuple[complex, int]] | Sequence[complex], lead: complex = 1.0) -> "ComplexPoly":
        c = np.array([lead], dtype=complex)
        for item in roots:
            r, m = item if isinstance(item, tuple) else (item, 1)
            for _ in range(m):
                c = np.convolve(c, np.array([-r, 1.0], dtype=complex))
        return cls(c, tol=0.0)

    @property
    def degree(self) -> float:
        return len(self.coeffs) - 1 if len(self.coeffs) else -math.inf

    @property
    def is_zero(self) -> bool:
        return len(self.coeffs) == 0

    @property
    def lead(self) -> complex:
        return complex(self.coeffs[-1]) if len(self.coeffs) else 0j

    @property
    def scale(self) -> float:
        return float(np.abs(self.coeffs).max()) if len(self.coeffs) else 0.0

    def __call__(self, z):
        z = np.asarray(z, dtype=complex)
        out = np.zeros_like(z)
        for c in self.coeffs[::-1]:
            out = out * z + c
        return out if out.ndim else complex(out)

    def magnitude_at(self, z):
        """Sum of |c_k||z|^k, the natural scale of rounding error at z."""
        r = np.abs(np.asarray(z, dtype=complex))
        out = np.zeros_like(r, dtype=float)
        for c in np.abs(self.coeffs[::-1]):
            out = out * r + c
        return out if out.ndim else float(out)

    def __add__(self, other):
        other = _as_poly(other)
        n = max(len(self.coeffs), len(other.coeffs))
        c = np.zeros(n, dtype=complex)
        c[: len(self.coeffs)] += self.coeffs
        c[: len(other.coeffs)] += other.coeffs
        return ComplexPoly(c)

    __radd__ = __add__

    def __neg__(self):
        return ComplexPoly(-self.coeffs)

    def __sub__(self, other):
        return self + (-_as_poly(other))

    def __rsub__(self, other):
        return _as_poly(other) - self

    def __mul__(self, other):
        other = _as_poly(other)
        if self.is_zero or other.is_zero:
            return ComplexPoly()
        return ComplexPoly(np.convolve(self.coeffs, other.coeffs))

    __rmul__ = __mul__

    def __pow__(self, n: int):
        out = ComplexPoly([1.0])
        for _ in range(n):
            out = out * self
        return out

    def __eq__(self, other):
        if not isinstance(other, ComplexPoly):
            return NotImplemented
        return self.coeffs.shape == other.coeffs.shape and bool(np.all(self.coeffs == other.coeffs))

    def __hash__(self):
        return hash(self.coeffs.tobytes())

    def allclose(self, other: "ComplexPoly", atol: float = 1e-12) -> bool:
        n = max(len(self.coeffs), len(other.coeffs))
        a = np.zeros(n, complex)
        b = np.zeros(n, complex)
        a[: len(self.coeffs)] = self.coeffs
        b[: len(other.coeffs)] = other.coeffs
        return bool(np.all(np.abs(a - b) <= atol))

    def __repr__(self):
        return f"ComplexPoly({[complex(c) for c in self.coeffs]})"

    def derivative(self) -> "ComplexPoly":
        if len(self.coeffs) <= 1:
            return ComplexPoly()
        return ComplexPoly(self.coeffs[1:] * np.arange(1, len(self.coeffs)))

    def antiderivative(self) -> "ComplexPoly":
        if self.is_zero:
            return ComplexPoly()
        c = np.concatenate([[0.0], self.coeffs / np.arange(1, len(self.coeffs) + 1)])
        return ComplexPoly(c)

    def conj(self) -> "ComplexPoly":
        return ComplexPoly(np.conj(self.coeffs), tol=0.0)

    def divmod(self, other: "ComplexPoly") -> tuple["ComplexPoly", "ComplexPoly"]:
        if other.is_zero:
            raise ZeroDivisionError("polynomial division by zero")
        num = self.coeffs.astype(complex).copy()
        den = other.coeffs
        dn = len(den) - 1
        if len(num) - 1 < dn:
            return ComplexPoly(), ComplexPoly(num)
        q = np.zeros(len(num) - dn, dtype=complex)
        for i in range(len(q) - 1, -1, -1):
            q[i] = num[i + dn] / den[-1]
            num[i : i + dn + 1] -= q[i] * den
        return ComplexPoly(q, tol=0.0), ComplexPoly(num[:dn])

    def deflate(self, root: complex, times: int = 1) -> "ComplexPoly":
        """Divide by (z - root)**times, discarding the remainder."""
        c = self.coeffs.copy()
        for _ in range(times):
            if len(c) <= 1:
                return ComplexPoly()
            n = len(c) - 1
            q = np.zeros(n, dtype=complex)
            acc = c[-1]
            q[-1] = acc
            for i in range(n - 1, 0, -1):
                acc = c[i] + root * acc
                q[i - 1] = acc
            c = q
        return ComplexPoly(c, tol=0.0)

    def taylor(self, a: complex, order: int | None = None) -> np.ndarray:
        """Coefficients of p(a + h) in powers of h (Horner shift)."""
        c = self.coeffs.astype(complex).copy()
        n = len(c)
        for i in range(n - 1):
            for j in range(n - 2, i - 1, -1):
                c[j] += a * c[j + 1]
        if order is not None:
            out = np.zeros(order, dtype=complex)
            m = min(order, n)
            out[:m] = c[:m]
            return out
        return c

    def to_json(self) -> list[list[float]]:
        return [[float(c.real), float(c.imag)] for c in self.coeffs]

    @classmethod
    def from_json(cls, data: Sequence) -> "ComplexPoly":
        vals = []
        for item in data:
            if isinstance(item, (list, tuple)):
                vals.append(complex(item[0], item[1] if len(item) > 1 else 0.0))
            else:
                vals.append(complex(item))
        return cls(vals)


def _as_poly(x) -> ComplexPoly:
    if isinstance(x, ComplexPoly):
        return x
    return ComplexPoly([complex(x)])


def wronskian(Q: ComplexPoly, P: ComplexPoly) -> ComplexPoly:
    """Q'P - QP'."""
    return Q.derivative() * P - Q * P.derivative()


# ---------------------------------------------------------------- roots


def _aberth(c: np.ndarray, max_iter: int) -> np.ndarray:
    """Aberth-Ehrlich iteration on a monic coefficient vector (ascending)."""
    n = len(c) - 1
    center = -c[n - 1] / n
    # Initial circle radius from the shifted polynomial's coefficient bound.
    shifted = ComplexPoly(c, tol=0.0).taylor(center)
    mags = np.abs(shifted[:-1])
    with np.errstate(divide="ignore"):
        radii = [mags[k] ** (1.0 / (n - k)) for k in range(n) if mags[k] > 0]
    radius = max(radii) if radii else 1.0
    radius = radius if radius > 0 else 1.0
    ang = 2 * np.pi * np.arange(n) / n + 0.4
    z = center + radius * np.exp(1j * ang)

    dc = c[1:] * np.arange(1, n + 1)
    absc = np.abs(c)
    done = np.zeros(n, dtype=bool)
    for _ in range(max_iter):
        pv = np.polyval(c[::-1], z)
        dv = np.polyval(dc[::-1], z)
        noise = _EPS_EVAL * np.polyval(absc[::-1], np.abs(z))
        done |= np.abs(pv) <= noise
        if done.all():
            break
        diff = z[:, None] - z[None, :]
        np.fill_diagonal(diff, 1.0)
        inv = 1.0 / diff
        np.fill_diagonal(inv, 0.0)
        s = inv.sum(axis=1)
        with np.errstate(divide="ignore", invalid="ignore"):
            ratio = pv / dv
            w = ratio / (1.0 - ratio * s)
        bad = ~np.isfinite(w)
        w[bad] = 1e-8 * (1 + np.abs(z[bad]))
        w[done] = 0.0
        z = z - w
    return z


def _taylor_ok(p: ComplexPoly, c: complex, m: int, spread: float) -> bool:
    t = p.taylor(c)
    if m >= len(t):
        return False
    tm = abs(t[m])
    if tm == 0:
        return False
    s0 = p.magnitude_at(c)
    noise = 3.0 * (_EPS_EVAL * s0 / tm) ** (1.0 / m)
    return spread <= noise


def _polish(p: ComplexPoly, c: complex, m: int) -> complex:
    # Newton on the (m-1)-th derivative, where an m-fold root is simple.
    if m == 1:
        return c
    best, best_val = c, None
    for _ in range(6):
        t = p.taylor(c, m + 1)
        val = abs(t[m - 1])
        if best_val is not None and val >= best_val:
            break
        best, best_val = c, val
        if t[m] == 0:
            break
        c = c - t[m - 1] / (m * t[m])
    return complex(best)


def _cluster(p: ComplexPoly, approx: np.ndarray, radius: float) -> list[tuple[complex, int]]:
    groups = [[complex(r)] for r in approx]
    rejected: set[tuple[int, int]] = set()
    while len(groups) > 1:
        cents = [np.mean(g) for g in groups]
        best = None
        for i in range(len(groups)):
            for j in range(i + 1, len(groups)):
                key = (id(groups[i]), id(groups[j]))
                if key in rejected:
                    continue
                d = abs(cents[i] - cents[j])
                if best is None or d < best[0]:
                    best = (d, i, j)
        if best is None:
            break
        d, i, j = best
        merged = groups[i] + groups[j]
        c = complex(np.mean(merged))
        spread = max(abs(r - c) for r in merged)
        scale = max(1.0, abs(c))
        if spread <= radius * scale or _taylor_ok(p, c, len(merged), spread):
            groups = [g for k, g in enumerate(groups) if k not in (i, j)] + [merged]
        else:
            rejected.add((id(groups[i]), id(groups[j])))
    out = [(_polish(p, complex(np.mean(g)), len(g)) + 0j, len(g)) for g in groups]
    out.sort(key=lambda t: (round(t[0].real, 9), round(t[0].imag, 9)))
    return out


def roots(p: ComplexPoly, cluster_tol: float = CLUSTER_TOL, max_iter: int = MAX_ROOT_ITER) -> list[tuple[complex, int]]:
    """All roots of ``p`` with multiplicities.

    Aberth iteration, then agglomeration of nearby approximations into
    multiple roots.  A cluster is merged when it is tighter than
    ``cluster_tol`` times the root scale, or when its spread is explained
    by rounding error around an m-fold root at the cluster centroid.
    """
    if p.is_zero:
        raise ValueError("roots of the zero polynomial")
    n = int(p.degree)
    if n <= 0:
        return []
    c = p.coeffs / p.lead
    if n == 1:
        return [(complex(-c[0]), 1)]
    z = _aberth(c, max_iter)
    scale = p.scale
    for r in z:
        resid = abs(p(r))
        if not np.isfinite(r) or resid > 1e-7 * scale * max(1.0, abs(r)) ** n:
            raise RootFindingError(f"root iteration failed to converge (residual {resid:.3g} at {r})")
    return _cluster(p, z, cluster_tol)


# ---------------------------------------------------------------- rational functions


@dataclass(frozen=True)
class PartialFractions:
    """p(z) + sum of c / (z - a)**j over the listed terms."""

    polynomial: ComplexPoly
    terms: tuple[tuple[complex, int, complex], ...]

    def __call__(self, z):
        z = np.asarray(z, dtype=complex)
        out = self.polynomial(z) if not self.polynomial.is_zero else np.zeros_like(z)
        for a, j, c in self.terms:
            out = out + c / (z - a) ** j
        return out if np.ndim(out) else complex(out)

    def coefficient(self, a: complex, j: int, tol: float = 1e-9) -> complex:
        for b, k, c in self.terms:
            if k == j and abs(b - a) <= tol * max(1.0, abs(a)):
                return c
        return 0j


class RationalFunction:
    """Q/P in lowest terms with monic denominator."""

    def __init__(self, numerator, denominator=None, *, reduce: bool = True, poles=None):
        num = _as_poly(numerator)
        den = ComplexPoly([1.0]) if denominator is None else _as_poly(denominator)
        if den.is_zero:
            raise ZeroDivisionError("zero denominator")
        lead = den.lead
        num = ComplexPoly(num.coeffs / lead)
        den = ComplexPoly(den.coeffs / lead)
        if num.is_zero:
            den = ComplexPoly([1.0])
            poles = []
        elif reduce and den.degree > 0:
            num, den, poles = _reduce(num, den)
        self.numerator = num
        self.denominator = den
        if poles is not None:
            self.__dict__["poles"] = list(poles)

    @classmethod
    def polynomial(cls, coeffs) -> "RationalFunction":
        return cls(ComplexPoly(coeffs) if not isinstance(coeffs, ComplexPoly) else coeffs, poles=[])

    @classmethod
    def from_poles(cls, numerator: ComplexPoly, poles: Sequence[tuple[complex, int]]) -> "RationalFunction":
        """Build Q / prod (z-a)^m, trusting that Q does not vanish at the poles."""
        return cls(numerator, ComplexPoly.from_roots(list(poles)), reduce=False, poles=list(poles))

    @property
    def k(self) -> float:
        return self.numerator.degree

    @property
    def l(self) -> int:
        return int(self.denominator.degree)

    @property
    def degree(self) -> int:
        """Degree as a map of the sphere."""
        return int(max(0, self.k, self.l))

    @property
    def is_zero(self) -> bool:
        return self.numerator.is_zero

    @property
    def is_polynomial(self) -> bool:
        return self.l == 0

    @property
    def is_constant(self) -> bool:
        return self.l == 0 and self.numerator.degree <= 0

    @cached_property
    def poles(self) -> list[tuple[complex, int]]:
        if self.l == 0:
            return []
        return roots(self.denominator)

    @cached_property
    def zeros(self) -> list[tuple[complex, int]]:
        if self.numerator.degree <= 0:
            return []
        return roots(self.numerator)

    def __repr__(self):
        return f"RationalFunction({self.numerator!r}, {self.denominator!r})"

    # evaluation

    def __call__(self, z):
        return self.numerator(z) / self.denominator(z)

    def evaluate(self, z: complex, tol: float = POLE_PROXIMITY_TOL):
        """Q(z)/P(z), or ``POLE`` when P(z) is indistinguishable from zero."""
        pv = self.denominator(z)
        if abs(pv) <= tol * max(1.0, self.denominator.magnitude_at(z)):
            return POLE
        return complex(self.numerator(z) / pv)

    # algebra

    def _combine(self, other, op):
        other = other if isinstance(other, RationalFunction) else RationalFunction(other)
        if op == "add":
            num = self.numerator * other.denominator + other.numerator * self.denominator
            den = self.denominator * other.denominator
        elif op == "sub":
            num = self.numerator * other.denominator - other.numerator * self.denominator
            den = self.denominator * other.denominator
        elif op == "mul":
            num = self.numerator * other.numerator
            den = self.denominator * other.denominator
        else:
            if other.is_zero:
                raise ZeroDivisionError("division by the zero rational function")
            num = self.numerator * other.denominator
            den = self.denominator * other.numerator
        return RationalFunction(num, den)

    def __add__(self, other):
        return self._combine(other, "add")

    def __radd__(self, other):
        return RationalFunction(other)._combine(self, "add")

    def __sub__(self, other):
        return self._combine(other, "sub")

    def __rsub__(self, other):
        return RationalFunction(other)._combine(self, "sub")

    def __mul__(self, other):
        return self._combine(other, "mul")

    def __rmul__(self, other):
        return RationalFunction(other)._combine(self, "mul")

    def __truediv__(self, other):
        return self._combine(other, "div")

    def __rtruediv__(self, other):
        return RationalFunction(other)._combine(self, "div")

    def __neg__(self):
        return RationalFunction(-self.numerator, self.denominator, reduce=False, poles=self.__dict__.get("poles"))

    def derivative(self) -> "RationalFunction":
        return derivative(self)

    def conjugate(self) -> "RationalFunction":
        return conjugate(self)

    def to_json(self) -> dict:
        return {"numerator": self.numerator.to_json(), "denominator": self.denominator.to_json()}

    @classmethod
    def from_json(cls, data: dict) -> "RationalFunction":
        num = ComplexPoly.from_json(data["numerator"])
        den = ComplexPoly.from_json(data.get("denominator", [[1.0, 0.0]]))
        return cls(num, den)


def _reduce(num: ComplexPoly, den: ComplexPoly):
    pr = roots(den)
    if num.degree <= 0:
        return num, den, pr
    qr = roots(num)
    remaining = []
    used = [0] * len(qr)
    for r, m in pr:
        cancel = 0
        for idx, (s, n) in enumerate(qr):
            avail = n - used[idx]
            if avail > 0 and abs(r - s) <= CLUSTER_TOL * max(1.0, abs(r)):
                take = min(avail, m - cancel)
                used[idx] += take
                cancel += take
                if cancel == m:
                    break
        if cancel:
            num = num.deflate(r, cancel)
            den = den.deflate(r, cancel)
        if m - cancel:
            remaining.append((r, m - cancel))
    return num, den, remaining


def derivative(R: RationalFunction) -> RationalFunction:
    """R' = W / P**2 in lowest terms.

    At a pole of order s the Wronskian vanishes to order s - 1, so the
    reduced denominator is P * rad(P) and the numerator is W divided by
    prod (z - a)**(s - 1).
    """
    Q, P = R.numerator, R.denominator
    if R.is_polynomial:
        return RationalFunction.polynomial(Q.derivative())
    W = wronskian(Q, P)
    poles = R.poles
    D = ComplexPoly.from_roots([(a, s - 1) for a, s in poles if s > 1])
    A = W.divmod(D)[0] if D.degree > 0 else W
    rad = ComplexPoly.from_roots([(a, 1) for a, _ in poles])
    B = P * rad
    return RationalFunction(A, B, reduce=False, poles=[(a, s + 1) for a, s in poles])


def conjugate(f: RationalFunction) -> RationalFunction:
    """Coefficientwise conjugate map, f^sigma(w) = conj(f(conj(w)))."""
    poles = f.__dict__.get("poles")
    cp = None if poles is None else [(complex(a).conjugate(), m) for a, m in poles]
    return RationalFunction(f.numerator.conj(), f.denominator.conj(), reduce=False, poles=cp)


def partial_fractions(f: RationalFunction) -> PartialFractions:
    A, B = f.numerator, f.denominator
    poly, _ = A.divmod(B)
    poles = f.poles
    terms = []
    for idx, (a, m) in enumerate(poles):
        others = [(b, n) for j, (b, n) in enumerate(poles) if j != idx]
        Ba = ComplexPoly.from_roots(others)
        ta = A.taylor(a, m)
        tb = Ba.taylor(a, m)
        # power series quotient g = ta / tb up to h**(m-1)
        g = np.zeros(m, dtype=complex)
        for n in range(m):
            acc = ta[n] - sum(g[i] * tb[n - i] for i in range(n))
            g[n] = acc / tb[0]
        for j in range(1, m + 1):
            terms.append((a, j, complex(g[m - j])))
    return PartialFractions(poly, tuple(terms))


def residues(f: RationalFunction) -> list[tuple[complex, complex]]:
    pf = partial_fractions(f)
    return [(a, c) for a, j, c in pf.terms if j == 1]


def residue_at_infinity(f: RationalFunction) -> complex:
    """Minus the 1/z coefficient of the expansion at infinity."""
    _, r = f.numerator.divmod(f.denominator)
    l = f.l
    if l == 0 or r.is_zero or r.degree < l - 1:
        return 0j
    return -complex(r.coeffs[l - 1]) / f.denominator.lead
