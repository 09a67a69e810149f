#!/usr/bin/env python3
"""Brute-force recomputation of the four-point fixture.

Everything here is derived from first principles with exact fractions:
circumcenters come from solving the equidistance linear systems, attachment
from comparing squared distances to the circumcenter, and the component
series from a union-find replay. Nothing is shared with the C++ code.
"""
from fractions import Fraction as F
from itertools import combinations
import math

P = [(0, 0, 0), (6, 0, 0), (1, 4, 0), (2, 1, 7)]


def sub(a, b):
    return tuple(x - y for x, y in zip(a, b))


def dot(a, b):
    return sum(x * y for x, y in zip(a, b))


def cross(a, b):
    return (a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0])


def solve(m, r):
    """Gaussian elimination over fractions."""
    n = len(m)
    a = [[F(v) for v in row] + [F(rv)] for row, rv in zip(m, r)]
    for c in range(n):
        p = next(i for i in range(c, n) if a[i][c] != 0)
        a[c], a[p] = a[p], a[c]
        for i in range(n):
            if i != c and a[i][c] != 0:
                f = a[i][c] / a[c][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[c])]
    return [a[i][n] / a[i][i] for i in range(n)]


def center(pts):
    """Center of the smallest sphere through pts (affine span equidistance)."""
    p0 = pts[0]
    dirs = [sub(p, p0) for p in pts[1:]]
    # center = p0 + sum t_k dirs_k ; |c - p_j|^2 = |c - p0|^2 for all j
    k = len(dirs)
    m = [[2 * dot(dirs[i], dirs[j]) for j in range(k)] for i in range(k)]
    r = [dot(dirs[i], dirs[i]) for i in range(k)]
    t = solve(m, r)
    return tuple(F(p0[d]) + sum(t[i] * dirs[i][d] for i in range(k)) for d in range(3))


def rho_sq(pts):
    c = center(pts)
    return dot(sub(c, pts[0]), sub(c, pts[0]))


def inside(pts, q):
    c = center(pts)
    return dot(sub(q, c), sub(q, c)) < rho_sq(pts)


def main():
    simplices = {k: list(combinations(range(4), k + 1)) for k in range(4)}
    rho = {}
    attached = {}
    for k in (1, 2, 3):
        for s in simplices[k]:
            pts = [P[i] for i in s]
            rho[s] = rho_sq(pts)
            others = [P[i] for i in range(4) if i not in s]
            attached[s] = k < 3 and any(inside(pts, q) for q in others)

    spectrum = sorted({rho[s] for s in rho if not attached[s]})
    print("spectrum:", [str(x) for x in spectrum])
    print("count:", len(spectrum))

    # mu values (single tetrahedron: every coface set is known)
    mu = {}
    for k in (3, 2, 1, 0):
        for s in simplices[k]:
            if k == 3:
                mu[s] = rho[s]
                continue
            up = [t for t in simplices[k + 1] if set(s) <= set(t)]
            mu[s] = min(mu[t] if attached.get(t, False) else rho[t] for t in up)
    print("mu t123:", mu[(0, 1, 2)], "mu e13:", mu[(0, 2)], "mu v1:", mu[(0,)])

    # components over intervals
    reps = [spectrum[0] / 2] + [
        (spectrum[i] + spectrum[i + 1]) / 2 for i in range(len(spectrum) - 1)
    ] + [spectrum[-1] + 1]
    comps = []
    for a2 in reps:
        parent = list(range(4))

        def find(x):
            while parent[x] != x:
                x = parent[x]
            return x

        for e in simplices[1]:
            appear = mu[e] if attached[e] else rho[e]
            if appear < a2:
                parent[find(e[0])] = find(e[1])
        comps.append(len({find(i) for i in range(4)}))
    print("components:", comps)

    vol = F(abs(dot(sub(P[1], P[0]), cross(sub(P[2], P[0]), sub(P[3], P[0])))), 6)
    print("volume:", vol)
    area = sum(math.sqrt(dot(c, c)) / 2 for c in (
        cross(sub(P[b], P[a]), sub(P[c], P[a])) for a, b, c in simplices[2]))
    print("area: %.12f" % area)
    n123 = cross(sub(P[1], P[0]), sub(P[2], P[0]))
    print("t123 area:", math.sqrt(dot(n123, n123)) / 2)

    # radius examples
    print("rho tri (0,0,0),(6,0,0),(2,1,7):", rho_sq([(0, 0, 0), (6, 0, 0), (2, 1, 7)]))
    print("rho tet unit:", rho_sq([(0, 0, 0), (1, 0, 0), (0, 1, 0), (0, 0, 1)]))
    print("center P:", center(P))
    print("triangle attached (0,0,0),(6,0,0),(2,1,7) q=(1,4,0):",
          inside([(0, 0, 0), (6, 0, 0), (2, 1, 7)], (1, 4, 0)))


if __name__ == "__main__":
    main()
