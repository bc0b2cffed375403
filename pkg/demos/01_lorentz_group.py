#!/usr/bin/env python3
"""Tour of the Lorentz-group building blocks.

Boosts, horospherical translations, the compact subgroups, the commutation
rules between them, and the 2x2 complex spin cover that supplies concrete
discrete subgroups of SO0(1,3).
"""
import numpy as np

from hypcycles import (
    CycleConfig,
    check_membership,
    commutation_identities,
    make_boost,
    make_scale,
    make_unipotent,
    minkowski_form,
    spin_cover_so13,
)

np.set_printoptions(precision=4, suppress=True)

print("=== boosts and horospherical translations (d = 3) ===")
a = make_boost(1.0, 3)
n = make_unipotent([1.0, 0.0])
print("a_1 =\n", a)
print("n_(1,0) =\n", n)
J = minkowski_form(3)
print("residual |a^T J a - J| =", np.max(np.abs(a.T @ J @ a - J)))
print("residual |n^T J n - J| =", np.max(np.abs(n.T @ J @ n - J)))

print("\n=== commutation rules ===")
print("a_r n_u = n_(u r) a_r, rotation and flip versions:",
      commutation_identities(2.0, np.array([1.0, 0.0])))
lhs = make_scale(2.0, 3) @ make_unipotent([1.0, 0.0])
rhs = make_unipotent([2.0, 0.0]) @ make_scale(2.0, 3)
print("entrywise gap:", np.max(np.abs(lhs - rhs)))

print("\n=== subgroup membership by block shape ===")
cfg = CycleConfig(3, 2)
for desc, g, sub in [
    ("boost", make_boost(0.7, 3), "A"),
    ("translation along the cycle", make_unipotent([1.0, 0.0]), "G0"),
    ("translation off the cycle", make_unipotent([0.0, 1.0]), "G0"),
]:
    print(f"{desc:>28} in {sub}: {check_membership(g, sub, cfg)}")

print("\n=== spin cover SL(2,C) -> SO0(1,3) ===")
T = np.array([[1, 1], [0, 1]], dtype=complex)
U = np.array([[1, 1j], [0, 1]], dtype=complex)
print("image of [[1,1],[0,1]]  equals n_(1,0):",
      np.max(np.abs(spin_cover_so13(T) - make_unipotent([1.0, 0.0]))) < 1e-12)
print("image of [[1,i],[0,1]]  equals n_(0,1):",
      np.max(np.abs(spin_cover_so13(U) - make_unipotent([0.0, 1.0]))) < 1e-12)
m = np.diag([np.exp(0.5), np.exp(-0.5)]).astype(complex)
print("image of diag(e^1/2, e^-1/2) equals the unit boost:",
      np.max(np.abs(spin_cover_so13(m) - make_boost(1.0, 3))) < 1e-12)
print("kernel is +-1:",
      np.max(np.abs(spin_cover_so13(-T) - spin_cover_so13(T))) == 0.0)
