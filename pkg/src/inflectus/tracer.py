"""Grid tracing of the inflection curve, its graph, and trajectories of -R d/dz.

The tracer samples G(z) = Im(A(z) conj(B(z))) where R' = A/B in lowest
terms.  Off the poles G and F_R differ by the positive factor
prod |z - a|^(2(s-1)), so they have the same sign pattern; G has lower
degree and stays well scaled near multiple poles.

Zero crossings live on grid edges and are keyed by the edge they lie on,
so neighbouring cells share crossing nodes exactly.  Cells whose four
edges all carry a crossing are subdivided.  Small square blocks of cells
around poles and isolated singular points are cut out of the grid and
every crossing on a block's perimeter is joined to a single vertex at the
exact special point.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field, replace

import numpy as np
from scipy.integrate import solve_ivp

from .geometry import BoundednessReport, PoleData, boundedness_analysis, feature_radius, poles, singular_candidates
from .inflection import DegenerateInputError
from .ratfun import RationalFunction, derivative

log = logging.getLogger(__name__)

FINE = 64  # 2**MAX_DEPTH sub-units per coarse cell
MAX_DEPTH = 6
BLOCK_HALF = 3
MAX_REFINEMENTS = 2
# fractional node offsets; keep grid nodes off lines of symmetry through the window centre
_OFFSET_X = 0.5 + 0.0137 * math.sqrt(2)
_OFFSET_Y = 0.5 - 0.0219 * math.sqrt(3)
_NEG_TINY = -np.finfo(float).tiny


@dataclass(frozen=True)
class Window:
    center: complex
    half_width: float
    half_height: float
    resolution: int = 512

    def __post_init__(self):
        if self.resolution < 16:
            raise ValueError("resolution must be at least 16 cells per axis")
        if not (self.half_width > 0 and self.half_height > 0):
            raise ValueError("window half-sizes must be positive")

    @classmethod
    def parse(cls, text: str, resolution: int = 512) -> "Window":
        cx, cy, hw, hh = (float(t) for t in text.split(","))
        return cls(complex(cx, cy), hw, hh, resolution)

    @property
    def bounds(self) -> tuple[float, float, float, float]:
        c = self.center
        return c.real - self.half_width, c.real + self.half_width, c.imag - self.half_height, c.imag + self.half_height

    @property
    def diagonal(self) -> float:
        return 2 * math.hypot(self.half_width, self.half_height)

    def contains(self, z: complex, margin: float = 0.0) -> bool:
        d = complex(z) - self.center
        return abs(d.real) < self.half_width - margin and abs(d.imag) < self.half_height - margin

    def scaled(self, factor: float) -> "Window":
        return replace(self, half_width=self.half_width * factor, half_height=self.half_height * factor)

    def with_resolution(self, n: int) -> "Window":
        return replace(self, resolution=n)

    def to_json(self) -> dict:
        return {
            "center": [_r(self.center.real), _r(self.center.imag)],
            "halfWidth": _r(self.half_width),
            "halfHeight": _r(self.half_height),
            "resolution": self.resolution,
        }


def _r(x: float) -> float:
    return float(f"{x:.12g}") + 0.0


def auto_window(R: RationalFunction, resolution: int = 512) -> Window:
    """Pole/zero bounding box padded by half its size, at least 2 on each side."""
    pts = [a for a, _ in R.poles] + [a for a, _ in R.zeros]
    if not pts:
        return Window(0j, 2.0, 2.0, resolution)
    xs = [p.real for p in pts]
    ys = [p.imag for p in pts]
    c = complex((min(xs) + max(xs)) / 2, (min(ys) + max(ys)) / 2)
    hw = max(1.5 * (max(xs) - min(xs)) / 2, 2.0)
    hh = max(1.5 * (max(ys) - min(ys)) / 2, 2.0)
    return Window(c, hw, hh, resolution)


def asymptotic_window(R: RationalFunction, resolution: int = 512) -> Window:
    """Square window at the origin large enough that the ends are near their asymptotes."""
    h = 40.0 * feature_radius(R)
    return Window(0j, h, h, resolution)


# graph types


@dataclass
class Vertex:
    position: complex
    valency: int
    kind: str  # "regular-junction" | "pole-vertex" | "boundary-exit"
    poles: tuple[int, ...] = ()
    directions: tuple[float, ...] = ()

    def to_json(self, vid: int) -> dict:
        return {
            "id": vid,
            "position": [_r(self.position.real), _r(self.position.imag)],
            "valency": self.valency,
            "kind": self.kind,
            "poles": list(self.poles),
        }


@dataclass
class Edge:
    points: np.ndarray
    start: int | None
    end: int | None

    @property
    def closed(self) -> bool:
        return self.start is None

    def to_json(self, eid: int) -> dict:
        return {
            "id": eid,
            "start": self.start,
            "end": self.end,
            "closed": self.closed,
            "points": [[_r(p.real), _r(p.imag)] for p in self.points],
        }


@dataclass
class Component:
    edges: list[int]
    vertices: list[int]
    bounded: bool
    poles: list[int]

    def to_json(self, cid: int) -> dict:
        return {"id": cid, "edges": self.edges, "vertices": self.vertices, "bounded": self.bounded, "poles": self.poles}


@dataclass
class CurveGraph:
    vertices: list[Vertex]
    edges: list[Edge]
    components: list[Component]
    window: Window
    pole_data: list[PoleData] = field(default_factory=list)
    anomalies: list[str] = field(default_factory=list)
    refinements: int = 0
    grown: bool = False

    @property
    def boundary_exits(self) -> list[int]:
        return [i for i, v in enumerate(self.vertices) if v.kind == "boundary-exit"]

    def pole_vertex(self, pole_id: int) -> Vertex | None:
        for v in self.vertices:
            if pole_id in v.poles:
                return v
        return None

    def exit_angles(self, origin: complex = 0j) -> list[float]:
        return sorted(math.atan2((self.vertices[i].position - origin).imag, (self.vertices[i].position - origin).real) % (2 * math.pi) for i in self.boundary_exits)

    def summary(self) -> dict:
        """Structural description used for golden comparisons."""
        return {
            "componentCount": len(self.components),
            "boundedComponents": sum(c.bounded for c in self.components),
            "boundaryExits": len(self.boundary_exits),
            "poleValencies": [
                (self.pole_vertex(i).valency if self.pole_vertex(i) is not None else 0) for i in range(len(self.pole_data))
            ],
            "componentPoles": sorted(sorted(c.poles) for c in self.components),
            "componentBounded": sorted(c.bounded for c in self.components),
        }

    def to_json(self) -> dict:
        return {
            "window": self.window.to_json(),
            "vertices": [v.to_json(i) for i, v in enumerate(self.vertices)],
            "edges": [e.to_json(i) for i, e in enumerate(self.edges)],
            "components": [c.to_json(i) for i, c in enumerate(self.components)],
            "poles": [p.to_json() for p in self.pole_data],
            "summary": self.summary(),
            "anomalies": self.anomalies,
            "refinements": self.refinements,
        }


# grid field


def sign_field(R: RationalFunction):
    """Vectorized G(z) = Im(A conj B) with R' = A/B, sign-equivalent to F_R off the poles."""
    f = derivative(R)
    if f.is_zero:
        raise DegenerateInputError("R is constant")
    if f.is_constant and abs(complex(f.numerator.lead).imag) <= 1e-14 * abs(f.numerator.lead):
        raise DegenerateInputError("R' is a real constant; F_R vanishes identically")
    A, B = f.numerator, f.denominator
    sa, sb = A.scale, B.scale

    def G(z):
        z = np.asarray(z, dtype=complex)
        v = ((A(z) / sa) * np.conj(B(z) / sb)).imag
        return np.nan_to_num(v, nan=0.0)

    return G


class _Grid:
    def __init__(self, window: Window):
        self.window = window
        self.n = window.resolution
        xmin, _, ymin, _ = window.bounds
        self.hx = 2 * window.half_width / (self.n + 1)
        self.hy = 2 * window.half_height / (self.n + 1)
        self.x0 = xmin + _OFFSET_X * self.hx
        self.y0 = ymin + _OFFSET_Y * self.hy

    def point(self, X: float, Y: float) -> complex:
        """Position of a fine-lattice coordinate."""
        return complex(self.x0 + X / FINE * self.hx, self.y0 + Y / FINE * self.hy)

    def nodes(self) -> np.ndarray:
        xs = self.x0 + np.arange(self.n + 1) * self.hx
        ys = self.y0 + np.arange(self.n + 1) * self.hy
        return xs[None, :] + 1j * ys[:, None]

    def cell_of(self, z: complex) -> tuple[int, int]:
        i = int(math.floor((z.real - self.x0) / self.hx))
        j = int(math.floor((z.imag - self.y0) / self.hy))
        return min(max(i, 0), self.n - 1), min(max(j, 0), self.n - 1)

    def inside(self, z: complex) -> bool:
        return self.x0 <= z.real <= self.x0 + self.n * self.hx and self.y0 <= z.imag <= self.y0 + self.n * self.hy

    def on_boundary(self, key) -> bool:
        orient, X, Y, _ = key
        top = self.n * FINE
        return (orient == "h" and Y in (0, top)) or (orient == "v" and X in (0, top))


@dataclass
class _Block:
    i0: int
    i1: int
    j0: int
    j1: int
    members: list  # (z, pole_id or None)

    @property
    def anchor(self) -> tuple[complex, tuple[int, ...]]:
        pole_ids = tuple(p for _, p in self.members if p is not None)
        if pole_ids:
            z = next(z for z, p in self.members if p is not None)
            return z, pole_ids
        return self.members[0][0], ()


def _blocks(grid: _Grid, specials: list[tuple[complex, int | None]]) -> list[_Block]:
    """Disjoint cell rectangles around special points.

    Each block starts as the cell holding its point widened by BLOCK_HALF
    cells.  Overlapping neighbours shrink to fit; if even one cell of margin
    does not fit they are merged into a single block.
    """
    groups = []
    for z, pid in specials:
        if not grid.inside(z):
            continue
        i, j = grid.cell_of(z)
        groups.append([i, i, j, j, BLOCK_HALF, [(z, pid)]])
    changed = True
    while changed:
        changed = False
        for a in range(len(groups)):
            for b in range(a + 1, len(groups)):
                A, B = groups[a], groups[b]
                gx = max(B[0] - A[1], A[0] - B[1])
                gy = max(B[2] - A[3], A[2] - B[3])
                g = max(gx, gy)
                if A[4] + B[4] < g:
                    continue
                room = (g - 1) // 2
                if room >= 1:
                    A[4] = B[4] = min(A[4], B[4], room)
                else:
                    A[0], A[1] = min(A[0], B[0]), max(A[1], B[1])
                    A[2], A[3] = min(A[2], B[2]), max(A[3], B[3])
                    A[4] = min(A[4], B[4])
                    A[5] = A[5] + B[5]
                    del groups[b]
                changed = True
                break
            if changed:
                break
    n = grid.n
    return [
        _Block(max(g[0] - g[4], 0), min(g[1] + g[4], n - 1), max(g[2] - g[4], 0), min(g[3] + g[4], n - 1), g[5])
        for g in groups
    ]


class _Marcher:
    """Marching squares with edge-keyed crossings and recursive subdivision."""

    def __init__(self, grid: _Grid, G, values: np.ndarray):
        self.grid = grid
        self.G = G
        self.V = values
        self.nodes: dict = {}
        self.ends: dict = {}
        self.segments: list[tuple] = []
        self.capped = 0

    def _cross(self, key, pa: complex, pb: complex, va: float, vb: float):
        if (va >= 0) == (vb >= 0):
            return None
        t = min(max(va / (va - vb), 0.0), 1.0)
        if key not in self.nodes:
            self.nodes[key] = pa + t * (pb - pa)
            self.ends[key] = (pa, pb)
        return (key, t)

    def polish(self, iterations: int = 30):
        """Move every crossing to the bisection root of G on its edge."""
        if not self.ends:
            return
        keys = list(self.ends)
        lo = np.array([self.ends[k][0] for k in keys])
        hi = np.array([self.ends[k][1] for k in keys])
        glo, ghi = self.G(lo), self.G(hi)
        ok = (glo >= 0) != (ghi >= 0)
        lo, hi, glo = lo[ok], hi[ok], glo[ok]
        for _ in range(iterations):
            mid = (lo + hi) / 2
            gm = self.G(mid)
            same = (gm >= 0) == (glo >= 0)
            lo = np.where(same, mid, lo)
            glo = np.where(same, gm, glo)
            hi = np.where(same, hi, mid)
        for k, z in zip((k for k, good in zip(keys, ok) if good), (lo + hi) / 2):
            self.nodes[k] = complex(z)

    def coarse_edge(self, orient: str, i: int, j: int):
        V, g = self.V, self.grid
        key = (orient, i * FINE, j * FINE, FINE)
        if orient == "h":
            return self._cross(key, g.point(i * FINE, j * FINE), g.point((i + 1) * FINE, j * FINE), V[j, i], V[j, i + 1])
        return self._cross(key, g.point(i * FINE, j * FINE), g.point(i * FINE, (j + 1) * FINE), V[j, i], V[j + 1, i])

    def cell(self, i: int, j: int):
        V = self.V
        vals = (V[j, i], V[j, i + 1], V[j + 1, i + 1], V[j + 1, i])
        edges = [self.coarse_edge("h", i, j), self.coarse_edge("v", i + 1, j), self.coarse_edge("h", i, j + 1), self.coarse_edge("v", i, j)]
        self._process(i * FINE, j * FINE, FINE, vals, edges, 0)

    def _process(self, X, Y, L, vals, edges, depth):
        hits = [e for e in edges if e is not None]
        if not hits:
            return
        if len(hits) == 2:
            self.segments.append((hits[0][0], hits[1][0]))
            return
        if len(hits) != 4:
            raise AssertionError("odd crossing count in a cell")
        if depth < MAX_DEPTH:
            self._subdivide(X, Y, L, vals, edges, depth)
            return
        # saddle decider at the depth cap
        self.capped += 1
        vc = float(self.G(self.grid.point(X + L / 2, Y + L / 2)))
        if (vc >= 0) == (vals[0] >= 0):
            pairs = ((0, 1), (2, 3))
        else:
            pairs = ((3, 0), (1, 2))
        for a, b in pairs:
            self.segments.append((edges[a][0], edges[b][0]))

    def _subdivide(self, X, Y, L, vals, edges, depth):
        g, h = self.grid, L // 2
        v0, v1, v2, v3 = vals
        mids = [(X + h, Y), (X + L, Y + h), (X + h, Y + L), (X, Y + h)]
        pts = [g.point(*m) for m in mids] + [g.point(X + h, Y + h)]
        raw = self.G(np.array(pts))
        ends = [(v0, v1), (v1, v2), (v3, v2), (v0, v3)]
        mv = []
        for k in range(4):
            va, vb = ends[k]
            e = edges[k]
            want = (vb >= 0) if (e is not None and e[1] < 0.5) else (va >= 0)
            v = float(raw[k])
            if (v >= 0) != want:
                v = 0.0 if want else _NEG_TINY
            mv.append(v)
        vc = float(raw[4])
        mb, mr, mt, ml = mv
        c = pts[4]

        def halves(e):
            if e is None:
                return None, None
            key, t = e
            return ((key, 2 * t), None) if t < 0.5 else (None, (key, 2 * t - 1))

        b1, b2 = halves(edges[0])
        r1, r2 = halves(edges[1])
        t1, t2 = halves(edges[2])
        l1, l2 = halves(edges[3])
        eb = self._cross(("v", X + h, Y, h), pts[0], c, mb, vc)
        et = self._cross(("v", X + h, Y + h, h), c, pts[2], vc, mt)
        el = self._cross(("h", X, Y + h, h), pts[3], c, ml, vc)
        er = self._cross(("h", X + h, Y + h, h), c, pts[1], vc, mr)
        d = depth + 1
        self._process(X, Y, h, (v0, mb, vc, ml), [b1, eb, el, l1], d)
        self._process(X + h, Y, h, (mb, v1, mr, vc), [b2, r1, er, eb], d)
        self._process(X + h, Y + h, h, (vc, mr, v2, mt), [er, r2, t2, et], d)
        self._process(X, Y + h, h, (ml, vc, mt, v3), [el, et, t1, l2], d)


def _trace_once(R: RationalFunction, window: Window, pole_data: list[PoleData], cands: list[complex]) -> CurveGraph:
    G = sign_field(R)
    grid = _Grid(window)
    V = G(grid.nodes())
    if not np.any(V):
        raise DegenerateInputError("F_R vanishes on the whole grid")
    S = V >= 0
    n = grid.n
    mixed = ~((S[:-1, :-1] == S[:-1, 1:]) & (S[:-1, :-1] == S[1:, 1:]) & (S[:-1, :-1] == S[1:, :-1]))

    specials = [(p.location, k) for k, p in enumerate(pole_data)] + [(z, None) for z in cands]
    blocks = _blocks(grid, specials)
    inblock = np.zeros((n, n), dtype=bool)
    for b in blocks:
        inblock[b.j0 : b.j1 + 1, b.i0 : b.i1 + 1] = True

    m = _Marcher(grid, G, V)
    for j, i in zip(*np.nonzero(mixed & ~inblock)):
        m.cell(int(i), int(j))

    block_keys = []
    for bi, b in enumerate(blocks):
        vkey = ("block", bi)
        z, _ = b.anchor
        m.nodes[vkey] = complex(z)
        block_keys.append(vkey)
        perimeter = [m.coarse_edge("h", i, b.j0) for i in range(b.i0, b.i1 + 1)]
        perimeter += [m.coarse_edge("h", i, b.j1 + 1) for i in range(b.i0, b.i1 + 1)]
        perimeter += [m.coarse_edge("v", b.i0, j) for j in range(b.j0, b.j1 + 1)]
        perimeter += [m.coarse_edge("v", b.i1 + 1, j) for j in range(b.j0, b.j1 + 1)]
        for e in perimeter:
            if e is not None:
                m.segments.append((e[0], vkey))

    m.polish()
    graph = _compress(m, grid, blocks, block_keys)
    graph.pole_data = pole_data
    if m.capped:
        graph.anomalies.append(f"{m.capped} cells hit the subdivision cap")
    return graph


def _compress(m: _Marcher, grid: _Grid, blocks: list[_Block], block_keys: list) -> CurveGraph:
    adj: dict = {}
    for sid, (a, b) in enumerate(m.segments):
        adj.setdefault(a, []).append((b, sid))
        adj.setdefault(b, []).append((a, sid))
    special = set(block_keys)
    vset = [k for k in block_keys] + [k for k, nb in adj.items() if len(nb) != 2 and k not in special]
    vid = {k: i for i, k in enumerate(vset)}
    anomalies = []
    vertices = []
    for k in vset:
        deg = len(adj.get(k, []))
        pos = m.nodes[k]
        if k in special:
            b = blocks[block_keys.index(k)]
            _, pole_ids = b.anchor
            kind = "pole-vertex" if pole_ids else "regular-junction"
            vertices.append(Vertex(pos, deg, kind, pole_ids))
            if len(b.members) > 1:
                anomalies.append(f"merged {len(b.members)} special points near {pos:.6g}")
        elif deg == 1 and grid.on_boundary(k):
            vertices.append(Vertex(pos, 1, "boundary-exit"))
        else:
            vertices.append(Vertex(pos, deg, "regular-junction"))
            anomalies.append(f"node of degree {deg} at {pos:.6g}")

    used = np.zeros(len(m.segments), dtype=bool)
    edges: list[Edge] = []

    def walk(start, nb, sid):
        path = [start]
        prev_sid, cur = sid, nb
        used[sid] = True
        while cur not in vid:
            path.append(cur)
            nxt = [(x, s) for x, s in adj[cur] if s != prev_sid]
            x, s = nxt[0]
            if used[s]:
                return path, cur
            used[s] = True
            prev_sid, cur = s, x
        path.append(cur)
        return path, cur

    for k in vset:
        for nb, sid in adj.get(k, []):
            if used[sid]:
                continue
            path, end = walk(k, nb, sid)
            edges.append(Edge(np.array([m.nodes[p] for p in path]), vid[k], vid[end]))
    for sid in range(len(m.segments)):
        if used[sid]:
            continue
        a, b = m.segments[sid]
        path, _ = walk(a, b, sid)
        pts = [m.nodes[p] for p in path]
        if path[-1] != path[0]:
            pts.append(m.nodes[path[0]])
        edges.append(Edge(np.array(pts), None, None))

    # components by union-find over vertices; closed loops stand alone
    parent = list(range(len(vertices)))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for e in edges:
        if e.start is not None:
            parent[find(e.start)] = find(e.end)
    comps: dict = {}
    for eid, e in enumerate(edges):
        key = ("loop", eid) if e.start is None else find(e.start)
        comps.setdefault(key, []).append(eid)
    for v in range(len(vertices)):
        if find(v) not in comps:
            comps[find(v)] = []
    components = []
    for key, eids in comps.items():
        vs = [] if isinstance(key, tuple) else sorted(v for v in range(len(vertices)) if find(v) == key)
        bounded = not any(vertices[v].kind == "boundary-exit" for v in vs)
        pole_ids = sorted({p for v in vs for p in vertices[v].poles})
        components.append(Component(eids, vs, bounded, pole_ids))
    for v in vertices:
        if v.kind != "boundary-exit" and v.valency % 2:
            anomalies.append(f"odd valency {v.valency} at {v.position:.6g}")
    cell = math.hypot(grid.hx, grid.hy)
    for i, v in enumerate(vertices):
        if v.kind == "boundary-exit":
            continue
        dirs = []
        for e in edges:
            if e.start == i:
                dirs.append(_tangent_angle(v.position, e.points[1:], cell))
            if e.end == i:
                dirs.append(_tangent_angle(v.position, e.points[-2::-1], cell))
        v.directions = tuple(sorted(dirs))
    return CurveGraph(vertices, edges, components, grid.window, anomalies=anomalies)


def _tangent_angle(origin: complex, pts: np.ndarray, cell: float, reach: float = 4.0) -> float:
    """Direction of a branch leaving ``origin``.

    The angle of the traced polyline seen from ``origin`` is fitted as a
    linear function of distance over the first few cells and evaluated at
    distance zero; this removes the first-order bias from branch curvature.
    """
    d = pts - origin
    r = np.abs(d)
    if len(r) == 0:
        return 0.0
    keep = r <= r[0] + reach * cell
    # stop at the first point that turns back toward the origin
    stop = len(r)
    for j in range(1, len(r)):
        if r[j] <= r[j - 1]:
            stop = j
            break
    keep[stop:] = False
    ang = np.unwrap(np.angle(d[keep]))
    if len(ang) < 3:
        return float(ang[0] % (2 * math.pi))
    slope, icept = np.polyfit(r[keep], ang, 1)
    return float(icept % (2 * math.pi))


@dataclass(frozen=True)
class ComponentStatus:
    component: int
    bounded: bool
    poles: tuple[int, ...]
    violation: bool

    def to_json(self) -> dict:
        return {"component": self.component, "bounded": self.bounded, "poles": list(self.poles), "violation": self.violation}


def component_report(g: CurveGraph, pole_data: list[PoleData] | None = None, bd: BoundednessReport | None = None) -> list[ComponentStatus]:
    """Flag bounded components that contain no pole.

    A bounded component of the true curve always passes through a pole, so
    a flagged component means the grid was too coarse.
    """
    out = []
    for i, c in enumerate(g.components):
        out.append(ComponentStatus(i, c.bounded, tuple(c.poles), c.bounded and not c.poles))
    return out


def trace_curve(
    R: RationalFunction,
    window: Window | None = None,
    *,
    resolution: int = 512,
    refine: bool = True,
    max_refinements: int = MAX_REFINEMENTS,
) -> CurveGraph:
    """Trace F_R = 0 in ``window`` (auto-sized when omitted).

    Violations of the pole-containment property trigger up to
    ``max_refinements`` retraces at doubled resolution.  An auto-sized
    window is grown once by 2x when the global verdict is bounded but a
    traced component still reaches the edge.
    """
    auto = window is None
    if auto:
        window = auto_window(R, resolution)
    bd = boundedness_analysis(R)
    pole_data = poles(R)
    cands = singular_candidates(R)
    grown = False
    refinements = 0
    while True:
        g = _trace_once(R, window, pole_data, cands)
        if auto and not grown and bd.verdict == "bounded" and any(not c.bounded for c in g.components):
            log.info("growing window: bounded verdict but a component exits")
            window = window.scaled(2.0)
            grown = True
            continue
        rep = component_report(g, pole_data, bd)
        if refine and refinements < max_refinements and any(s.violation for s in rep):
            log.info("pole-free bounded component; refining to %d", 2 * window.resolution)
            window = window.with_resolution(2 * window.resolution)
            refinements += 1
            continue
        g.refinements = refinements
        g.grown = grown
        return g


# trajectories


@dataclass
class Trajectory:
    points: np.ndarray
    seed: complex
    truncated: bool
    stops: tuple[str, str]  # (backward, forward): "exit" | "singular" | "length"
    rtol: float = 1e-8
    atol: float = 1e-10

    def to_json(self) -> dict:
        return {
            "seed": [_r(self.seed.real), _r(self.seed.imag)],
            "truncated": self.truncated,
            "stops": list(self.stops),
            "points": [[_r(p.real), _r(p.imag)] for p in self.points],
        }


def _scalar(poly):
    c = [complex(x) for x in poly.coeffs[::-1]]

    def ev(z):
        out = 0j
        for a in c:
            out = out * z + a
        return out

    return ev


def integrate_trajectories(
    R: RationalFunction,
    window: Window,
    seeds,
    *,
    rtol: float = 1e-8,
    atol: float = 1e-10,
    stop_radius: float = 1e-3,
    max_step: float | None = None,
    max_length: float | None = None,
) -> list[Trajectory]:
    """Integrate z' = -R(z) through each seed, forward and backward.

    The field is normalized to unit speed, so the parameter is arc length
    and the curves are the same as for -R itself.  Integration stops at the
    window edge, within ``stop_radius`` of a zero or pole, or after
    ``max_length`` of arc.
    """
    num, den = _scalar(R.numerator), _scalar(R.denominator)
    stops = [a for a, _ in R.poles] + [a for a, _ in R.zeros]
    xmin, xmax, ymin, ymax = window.bounds
    max_step = window.diagonal / 400 if max_step is None else max_step
    max_length = 4 * window.diagonal if max_length is None else max_length

    def make_rhs(sign):
        def rhs(_, y):
            z = complex(y[0], y[1])
            v = -num(z) / den(z)
            a = abs(v)
            if a == 0 or not math.isfinite(a):
                return [0.0, 0.0]
            v = sign * v / a
            return [v.real, v.imag]

        return rhs

    def exit_event(_, y):
        return min(y[0] - xmin, xmax - y[0], y[1] - ymin, ymax - y[1])

    exit_event.terminal = True

    def near_event(_, y):
        z = complex(y[0], y[1])
        return min(abs(z - a) for a in stops) - stop_radius

    near_event.terminal = True
    events = [exit_event] + ([near_event] if stops else [])

    out = []
    for s in seeds:
        s = complex(s)
        if stops and min(abs(s - a) for a in stops) <= stop_radius:
            log.debug("seed %s too close to a zero or pole", s)
            continue
        halves, reasons = [], []
        for sign in (-1.0, 1.0):
            sol = solve_ivp(make_rhs(sign), (0.0, max_length), [s.real, s.imag], method="RK45", rtol=rtol, atol=atol, max_step=max_step, events=events)
            pts = sol.y[0] + 1j * sol.y[1]
            if sol.status == 1:
                reasons.append("exit" if len(sol.t_events[0]) else "singular")
            else:
                reasons.append("length")
            halves.append(pts)
        pts = np.concatenate([halves[0][::-1], halves[1][1:]])
        out.append(Trajectory(pts, s, "length" in reasons, (reasons[0], reasons[1]), rtol, atol))
    return out


def default_seeds(R: RationalFunction, window: Window, per_axis: int = 7) -> list[complex]:
    xmin, xmax, ymin, ymax = window.bounds
    xs = np.linspace(xmin, xmax, per_axis + 2)[1:-1]
    ys = np.linspace(ymin, ymax, per_axis + 2)[1:-1]
    return [complex(x, y) for y in ys for x in xs]


# inflection cross-check


def _sign_change_indices(values: np.ndarray, positions: np.ndarray) -> list[float]:
    """Locations (in point index) where the sign of nonzero samples flips."""
    out = []
    last = None
    for v, p in zip(values, positions):
        if v == 0:
            continue
        s = v > 0
        if last is not None and s != last[0]:
            out.append((last[1] + p) / 2)
        last = (s, p)
    return out


def curvature_sign_changes(points: np.ndarray, rtol: float = 1e-8, atol: float = 1e-10, dead_zone: float = 1e-9) -> list[float]:
    """Index locations where the discrete curvature of a polyline changes sign.

    Cross products smaller than what the integration error in the points
    could produce count as zero.
    """
    d = np.diff(points)
    if len(d) < 2:
        return []
    a, b = d[:-1], d[1:]
    cross = (np.conj(a) * b).imag
    err = 10 * (rtol * np.abs(points[1:-1]) + atol)
    thresh = np.maximum(dead_zone * np.abs(a) * np.abs(b), err * (np.abs(a) + np.abs(b)))
    cross = np.where(np.abs(cross) <= thresh, 0.0, cross)
    return _sign_change_indices(cross, np.arange(1, len(points) - 1, dtype=float))


def field_sign_changes(R: RationalFunction, points: np.ndarray) -> list[float]:
    f = derivative(R)
    A, B = f.numerator, f.denominator
    G = (A(points) * np.conj(B(points))).imag
    scale = np.abs(A(points)) * np.abs(B(points))
    G = np.where(np.abs(G) <= 1e-13 * scale, 0.0, G)
    return _sign_change_indices(G, np.arange(len(points), dtype=float))


@dataclass(frozen=True)
class CrossCheck:
    curvature: tuple[float, ...]
    field: tuple[float, ...]
    unmatched_curvature: tuple[float, ...]
    unmatched_field: tuple[float, ...]

    @property
    def ok(self) -> bool:
        return not self.unmatched_curvature and not self.unmatched_field

    def points(self, traj: Trajectory) -> list[complex]:
        pts = traj.points
        return [complex(pts[int(round(i))]) for i in self.curvature]


def inflection_crosscheck(R: RationalFunction, traj: Trajectory | np.ndarray, radius: float = 2.0) -> CrossCheck:
    """Match discrete-curvature sign changes with sign changes of F_R along a trajectory."""
    if isinstance(traj, Trajectory):
        pts = traj.points
        cur = curvature_sign_changes(pts, traj.rtol, traj.atol)
    else:
        pts = np.asarray(traj, dtype=complex)
        cur = curvature_sign_changes(pts)
    fld = field_sign_changes(R, pts)
    uc = tuple(c for c in cur if not any(abs(c - f) <= radius for f in fld))
    uf = tuple(f for f in fld if not any(abs(c - f) <= radius for c in cur))
    return CrossCheck(tuple(cur), tuple(fld), uc, uf)
