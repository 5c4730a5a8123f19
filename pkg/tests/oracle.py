"""Independent structural oracle for traced curves.

Contours F_R = 0 of the real defining polynomial are extracted with
contourpy on a dense grid.  Pieces that come within ``join`` of each other
near a pole or of a common point are merged; this recovers connected
components, boundedness (a piece reaching the window edge) and the poles
each component passes through.
"""
from __future__ import annotations

import contourpy
import numpy as np

from inflectus.inflection import defining_polynomial


def contour_structure(R, center, half, n=1500, join=None):
    F = defining_polynomial(R)
    xs = np.linspace(center.real - half, center.real + half, n)
    ys = np.linspace(center.imag - half, center.imag + half, n)
    X, Y = np.meshgrid(xs, ys)
    Z = F(X, Y)
    h = xs[1] - xs[0]
    join = 4 * h if join is None else join
    lines = contourpy.contour_generator(xs, ys, Z).lines(0.0)
    pieces = [ln[:, 0] + 1j * ln[:, 1] for ln in lines if len(ln) > 1]
    parent = list(range(len(pieces)))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    ends = [(p[0], p[-1]) for p in pieces]
    for i in range(len(pieces)):
        for j in range(i + 1, len(pieces)):
            if min(abs(a - b) for a in ends[i] for b in ends[j]) <= join:
                parent[find(i)] = find(j)
    pole_list = [a for a, _ in R.poles]
    for a in pole_list:
        near = [i for i, p in enumerate(pieces) if np.min(np.abs(p - a)) <= join]
        for i in near[1:]:
            parent[find(i)] = find(near[0])
    comps = {}
    for i in range(len(pieces)):
        comps.setdefault(find(i), []).append(i)
    lo_x, hi_x, lo_y, hi_y = xs[0], xs[-1], ys[0], ys[-1]
    out = []
    for idx in comps.values():
        pts = np.concatenate([pieces[i] for i in idx])
        edge = (np.min(np.abs(pts.real - lo_x)) < h) or (np.min(np.abs(pts.real - hi_x)) < h) or (
            np.min(np.abs(pts.imag - lo_y)) < h) or (np.min(np.abs(pts.imag - hi_y)) < h)
        poles_in = sorted(k for k, a in enumerate(pole_list) if np.min(np.abs(pts - a)) <= join)
        out.append({"bounded": not edge, "poles": poles_in})
    return out


def boundary_sign_changes(R, center, half, n=20000):
    F = defining_polynomial(R)
    t = np.linspace(0, 1, n, endpoint=False)
    c = center
    sides = [c + half * (-1 - 1j) + 2 * half * t, c + half * (1 - 1j) + 2j * half * t,
             c + half * (1 + 1j) - 2 * half * t, c + half * (-1 + 1j) - 2j * half * t]
    z = np.concatenate(sides)
    s = np.sign(F(z.real, z.imag))
    s = s[s != 0]
    return int(np.sum(s != np.roll(s, 1)))


def pole_sign_changes(R, a, r, n=4000):
    F = defining_polynomial(R)
    z = a + r * np.exp(2j * np.pi * np.arange(n) / n)
    s = np.sign(F(z.real, z.imag))
    s = s[s != 0]
    return int(np.sum(s != np.roll(s, 1)))
