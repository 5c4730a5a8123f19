"""Critical values of f = R' and connectivity of the fiber product of f and its conjugate.

The separated-variable curve A(z) B^s(w) - A^s(w) B(z) = 0 is the fiber
product of the covers f and f^s over the t-sphere.  Its irreducible
components correspond to orbits of the joint monodromy action on pairs
(root of f = t, root of f^s = t).  The action is computed by lifting
loops around every branch value with predictor-corrector continuation.
"""
from __future__ import annotations

import cmath
import logging
import math
from dataclasses import dataclass, field

import numpy as np

from .ratfun import ComplexPoly, RationalFunction, RootFindingError, conjugate, derivative, roots

log = logging.getLogger(__name__)

INF = complex(math.inf, 0.0)
DEGREE_CAP = 5
BASE_STEPS = 64
MAX_STEPS = 4096


class ContinuationError(RuntimeError):
    pass


# ---------------------------------------------------------------- critical data


@dataclass(frozen=True)
class CriticalData:
    points: tuple[complex, ...]
    values: tuple[complex, ...]
    real_flags: tuple[bool, ...]

    def to_json(self) -> dict:
        def enc(v):
            return "inf" if cmath.isinf(v) else [float(f"{v.real:.12g}"), float(f"{v.imag:.12g}")]

        return {
            "criticalPoints": [enc(p) for p in self.points],
            "criticalValues": [enc(v) for v in self.values],
            "realFlags": list(self.real_flags),
        }


def _value_at_infinity(f: RationalFunction) -> tuple[complex, int]:
    """(f(inf), local degree of f at inf)."""
    k, l = int(f.numerator.degree), f.l
    if k > l:
        return INF, k - l
    if k < l:
        return 0j, l - k
    c = f.numerator.lead / f.denominator.lead
    rest = f.numerator - f.denominator * c
    e = rest.degree
    return complex(c), (l - int(e)) if e >= 0 else 0


def critical_data(f: RationalFunction, real_tol: float = 1e-9) -> CriticalData:
    """Critical points of f with their values and membership of RP^1.

    Finite critical points come from the numerator of f' and from multiple
    poles (value infinity).  The point at infinity is included when f is
    ramified there.
    """
    if f.is_constant:
        raise ValueError("f is constant")
    g = derivative(f)
    pts: list[complex] = []
    vals: list[complex] = []
    if g.numerator.degree > 0:
        for z0, _ in roots(g.numerator):
            pts.append(z0)
            vals.append(complex(f(z0)))
    for a, m in f.poles:
        if m >= 2:
            pts.append(a)
            vals.append(INF)
    v_inf, e_inf = _value_at_infinity(f)
    if e_inf >= 2:
        pts.append(INF)
        vals.append(v_inf)
    flags = tuple(cmath.isinf(v) or abs(v.imag) <= real_tol * (1 + abs(v) ** 2) for v in vals)
    return CriticalData(tuple(pts), tuple(vals), flags)


def branch_values(f: RationalFunction) -> list[complex]:
    cd = critical_data(f)
    return [v for v in cd.values if not cmath.isinf(v)]


# ---------------------------------------------------------------- permutations


def compose(first: tuple[int, ...], then: tuple[int, ...]) -> tuple[int, ...]:
    """Permutation of following ``first`` and then ``then``."""
    return tuple(then[i] for i in first)


def inverse(p: tuple[int, ...]) -> tuple[int, ...]:
    out = [0] * len(p)
    for i, j in enumerate(p):
        out[j] = i
    return tuple(out)


def cycle_notation(p: tuple[int, ...]) -> str:
    seen = set()
    parts = []
    for i in range(len(p)):
        if i in seen or p[i] == i:
            seen.add(i)
            continue
        cyc = [i]
        seen.add(i)
        j = p[i]
        while j != i:
            cyc.append(j)
            seen.add(j)
            j = p[j]
        parts.append("(" + " ".join(map(str, cyc)) + ")")
    return "".join(parts) or "()"


def orbit_count(n: int, generators) -> int:
    parent = list(range(n))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for g in generators:
        for i, j in enumerate(g):
            ri, rj = find(i), find(j)
            if ri != rj:
                parent[ri] = rj
    return len({find(i) for i in range(n)})


# ---------------------------------------------------------------- continuation


class _Fiber:
    """Roots of A(z) - t B(z) tracked along a path in t."""

    def __init__(self, f: RationalFunction):
        self.A = f.numerator
        self.B = f.denominator
        self.dA = self.A.derivative()
        self.dB = self.B.derivative()

    def solve(self, t: complex) -> np.ndarray:
        g = self.A - self.B * t
        rts = roots(g)
        if any(m > 1 for _, m in rts):
            raise ContinuationError("base point lies over a branch value")
        return np.array([r for r, _ in rts])

    def _newton(self, z: np.ndarray, t: complex):
        for _ in range(12):
            g = self.A(z) - t * self.B(z)
            dg = self.dA(z) - t * self.dB(z)
            step = g / dg
            z = z - step
            if np.all(np.abs(step) <= 1e-13 * (1 + np.abs(z))):
                return z, True
        return z, False

    def step(self, z: np.ndarray, t: complex) -> np.ndarray | None:
        znew, ok = self._newton(z.copy(), t)
        if not ok or not np.all(np.isfinite(znew)):
            return None
        d = np.abs(z[:, None] - z[None, :])
        np.fill_diagonal(d, np.inf)
        sep = d.min(axis=1) if len(z) > 1 else np.full(len(z), np.inf)
        if np.any(np.abs(znew - z) > 0.3 * sep):
            return None
        dn = np.abs(znew[:, None] - znew[None, :])
        np.fill_diagonal(dn, np.inf)
        if len(z) > 1 and dn.min() <= 1e-10 * (1 + np.abs(znew).max()):
            return None
        return znew


def _track(fiber: _Fiber, z0: np.ndarray, path: np.ndarray, min_frac: float) -> np.ndarray:
    length = float(np.abs(np.diff(path)).sum())
    min_step = length * min_frac
    z = z0.copy()
    for ta, tb in zip(path[:-1], path[1:]):
        stack = [(ta, tb)]
        while stack:
            a, b = stack.pop()
            znew = fiber.step(z, b)
            if znew is None:
                if abs(b - a) <= min_step:
                    raise ContinuationError(f"continuation stalled near t={b:.6g}")
                mid = 0.5 * (a + b)
                stack.append((mid, b))
                stack.append((a, mid))
                continue
            z = znew
    return z


def _match(start: np.ndarray, end: np.ndarray) -> tuple[int, ...]:
    perm = tuple(int(np.argmin(np.abs(e - start))) for e in end)
    if len(set(perm)) != len(perm):
        raise ContinuationError("lifted loop does not return to a permutation of the fiber")
    if len(start) > 1:
        sep = np.abs(start[:, None] - start[None, :])
        np.fill_diagonal(sep, np.inf)
        if any(abs(e - start[j]) > 0.25 * sep[j].min() for e, j in zip(end, perm)):
            raise ContinuationError("lifted endpoint is ambiguous")
    return perm


def _loop_path(t0: complex, center: complex, radius: float, n: int) -> np.ndarray:
    phi = cmath.phase(t0 - center)
    anchor = center + radius * cmath.exp(1j * phi)
    spoke_len = abs(anchor - t0)
    circ_len = 2 * math.pi * radius
    total = 2 * spoke_len + circ_len
    n_sp = max(2, int(round(n * spoke_len / total)))
    n_ci = max(8, n - 2 * n_sp)
    out = np.linspace(t0, anchor, n_sp + 1)
    ang = phi + np.linspace(0, 2 * math.pi, n_ci + 1)[1:]
    out = np.concatenate([out, center + radius * np.exp(1j * ang)])
    out = np.concatenate([out, np.linspace(anchor, t0, n_sp + 1)[1:]])
    return out


@dataclass
class FiberProductResult:
    degree_pair: tuple[int, int]
    status: str  # "determined" | "undetermined"
    connected: bool | None
    orbit_count: int | None
    loop_log: list[tuple[str, tuple[int, ...]]] = field(default_factory=list)
    relation_holds: bool | None = None
    base_point: complex | None = None
    message: str = ""

    def to_json(self) -> dict:
        return {
            "degreePair": list(self.degree_pair),
            "status": self.status,
            "connected": self.connected,
            "orbitCount": self.orbit_count,
            "relationHolds": self.relation_holds,
            "basePoint": None if self.base_point is None else [float(f"{self.base_point.real:.12g}"), float(f"{self.base_point.imag:.12g}")],
            "loops": [{"around": d, "permutation": cycle_notation(p)} for d, p in self.loop_log],
            "message": self.message,
        }


def _dedupe(values: list[complex]) -> list[complex]:
    out: list[complex] = []
    for v in values:
        if not any(abs(v - u) <= 1e-9 * (1 + abs(u)) for u in out):
            out.append(v)
    return out


def _marked_points(f: RationalFunction) -> list[complex]:
    pts = branch_values(f)
    v_inf, _ = _value_at_infinity(f)
    if not cmath.isinf(v_inf):
        pts.append(v_inf)
    return pts


def _spokes_clear(t0: complex, marks: list[complex], radii: list[float]) -> bool:
    for i, v in enumerate(marks):
        for j, u in enumerate(marks):
            if i == j:
                continue
            # distance from u to the segment t0 -> v
            d = v - t0
            s = max(0.0, min(1.0, ((u - t0) * d.conjugate()).real / abs(d) ** 2))
            if abs(t0 + s * d - u) < 0.2 * radii[j] and s < 1.0:
                return False
    return True


def fiber_product_connected(
    f: RationalFunction,
    seed: int = 0,
    degree_cap: int = DEGREE_CAP,
    retries: int = 3,
) -> FiberProductResult:
    """Orbit count of the joint monodromy of f and f^sigma on fiber pairs."""
    d = f.degree
    if d > degree_cap:
        raise ValueError(f"degree {d} exceeds the continuation cap {degree_cap}")
    if d < 1:
        raise ValueError("f is constant")
    fs = conjugate(f)
    marks = _dedupe(_marked_points(f) + _marked_points(fs))
    rng = np.random.default_rng(seed)
    big = max([abs(v) for v in marks] + [0.0]) + 1.0

    if len(marks) > 1:
        radii = []
        for i, v in enumerate(marks):
            others = [abs(v - u) for j, u in enumerate(marks) if j != i]
            radii.append(0.5 * min(others))
    else:
        radii = [0.5 * big] * len(marks)

    t0 = None
    for attempt in range(60):
        # keep the base point away from the real axis
        angle = math.pi / 4 if attempt == 0 else rng.uniform(0.15, math.pi - 0.15) * rng.choice([-1, 1])
        cand = big * cmath.exp(1j * angle)
        if _spokes_clear(cand, marks, radii):
            t0 = cand
            break
    if t0 is None:
        t0 = big * cmath.exp(1j * math.pi / 4)
        log.debug("no base point with clear spokes; continuing with the default")

    fib = [_Fiber(f), _Fiber(fs)]
    result = FiberProductResult((d, d), "undetermined", None, None, base_point=t0)
    try:
        starts = [fb.solve(t0) for fb in fib]
    except (ContinuationError, RootFindingError) as exc:
        result.message = str(exc)
        return result
    if any(len(s) != d for s in starts):
        result.message = "fiber over the base point is incomplete"
        return result

    def lift(center, radius):
        perms = []
        for fb, z0 in zip(fib, starts):
            for attempt in range(retries + 1):
                r = radius / (2 ** attempt)
                try:
                    end = _track(fb, z0, _loop_path(t0, center, r, BASE_STEPS), 1.0 / MAX_STEPS)
                    perms.append(_match(z0, end))
                    break
                except ContinuationError as exc:
                    log.debug("retrying loop around %s: %s", center, exc)
            else:
                raise ContinuationError(f"loop around {center} failed after {retries} retries")
        return perms

    def pair_perm(pf, pg):
        return tuple(pf[i] * d + pg[j] for i in range(d) for j in range(d))

    direction = -t0 / abs(t0)
    order = sorted(range(len(marks)), key=lambda i: cmath.phase((marks[i] - t0) / direction))
    try:
        gens = []
        product = tuple(range(d * d))
        for i in order:
            pf, pg = lift(marks[i], radii[i])
            p = pair_perm(pf, pg)
            gens.append(p)
            product = compose(product, p)
            v = marks[i]
            result.loop_log.append((f"{v.real:.12g}{v.imag:+.12g}i", p))
        # one big counterclockwise loop around every finite mark
        big_perms = []
        for fb, z0 in zip(fib, starts):
            path = _big_loop(t0, 1.6 * big)
            end = _track(fb, z0, path, 1.0 / (8 * MAX_STEPS))
            big_perms.append(_match(z0, end))
        around_all = pair_perm(*big_perms)
        p_inf = inverse(around_all)
        gens.append(p_inf)
        result.loop_log.append(("infinity", p_inf))
        result.relation_holds = compose(product, p_inf) == tuple(range(d * d))
    except (ContinuationError, RootFindingError) as exc:
        result.message = str(exc)
        return result

    n_orb = orbit_count(d * d, gens)
    result.status = "determined"
    result.orbit_count = n_orb
    result.connected = n_orb == 1
    return result


def _big_loop(t0: complex, radius: float) -> np.ndarray:
    phi = cmath.phase(t0)
    anchor = radius * cmath.exp(1j * phi)
    n_ci = 4 * BASE_STEPS
    out = np.linspace(t0, anchor, 9)
    ang = phi + np.linspace(0, 2 * math.pi, n_ci + 1)[1:]
    out = np.concatenate([out, radius * np.exp(1j * ang), np.linspace(anchor, t0, 9)[1:]])
    return out
