#!/usr/bin/env python3
"""Hyperbolic distance two ways, and the three matrix factorizations.

The Minkowski pairing and the horospherical formula
arccosh[(|u-v|^2 + r^2 + t^2)/(2rt)] must agree to full precision; NAK,
ANK and KA+K factor products must reconstruct their inputs.
"""
import numpy as np

from hypcycles import ank, dist, dist_horospherical, from_horospherical, kak, nak
from hypcycles.decompose import random_point
from hypcycles.lorentz import basepoint, random_lorentz

rng = np.random.default_rng(0)

print("=== distance duality ===")
worst = 0.0
for _ in range(2000):
    d = int(rng.integers(2, 6))
    u, r = 2 * rng.uniform(-1, 1, d - 1), float(np.exp(rng.uniform(-1, 1)))
    v, t = 2 * rng.uniform(-1, 1, d - 1), float(np.exp(rng.uniform(-1, 1)))
    a = dist(from_horospherical(u, r), from_horospherical(v, t))
    b = dist_horospherical(u, r, v, t)
    worst = max(worst, abs(a - b))
print("2000 random pairs, max |pairing - horospherical| =", worst)
print("two heights (e, 1) at the same position: distance =",
      dist_horospherical([0.0, 0.0], np.e, [0.0, 0.0], 1.0))

print("\n=== factorizations reconstruct ===")
worst = {"nak": 0.0, "ank": 0.0, "kak": 0.0}
for _ in range(500):
    d = int(rng.integers(2, 6))
    g = random_lorentz(rng, d)
    worst["nak"] = max(worst["nak"], np.max(np.abs(nak(g).product() - g)))
    worst["ank"] = max(worst["ank"], np.max(np.abs(ank(g).product() - g)))
    worst["kak"] = max(worst["kak"], np.max(np.abs(kak(g).product() - g)))
print("500 random words, reconstruction errors:", worst)

print("\n=== the Cartan middle parameter is a distance ===")
g = random_lorentz(rng, 3)
f = kak(g)
print("t =", f.t)
print("dist(g.o, o) =", dist(g[:, 0], basepoint(3)))
print("cosh t - g00 =", np.cosh(f.t) - g[0, 0])

print("\n=== isometry invariance ===")
p, q = random_point(rng, 3), random_point(rng, 3)
g = random_lorentz(rng, 3)
print("dist(p, q)   =", dist(p, q))
print("dist(gp, gq) =", dist(g @ p, g @ q))
