#!/usr/bin/env python3
"""The particular solution u0: seed of the whole method.

u0 solves -u'' + (l(l+1)/x^2 + q) u = 0 with u0 ~ x^{l+1} at the origin,
constructed by Picard iteration of the equivalent Volterra equation in
the scaled variable u0/x^{l+1}.
"""
import numpy as np

from pbessel import UniformMesh, build_u0, make_potential
from pbessel.shooting import shoot_solution

mesh = UniformMesh(np.pi, 20001)

# --- smooth potential -------------------------------------------------------
p = make_potential("x^2", mesh, 1.5)
u0 = build_u0(p)
print(f"q = x^2, l = 3/2: {u0.iterations} Picard sweeps, ODE defect {u0.residual:.2e}")
print(f"  u0(pi)  = {u0.u0.at_end:.12f}")
print(f"  u0'(pi) = {u0.u0_prime.at_end:.12f}")

# asymptotics at the origin: u0/x^{l+1} -> 1
x = mesh.x[1:6]
print("  u0/x^{l+1} at the first mesh points:", u0.u0.values[1:6] / x**2.5)

# --- independent check: adaptive high-order shooting ------------------------
idx = [mesh.m // 6, mesh.m // 2, mesh.m - 1]
xs = mesh.x[idx]
u_ref, up_ref = shoot_solution(lambda t: np.asarray(t) ** 2, 1.5, 0.0, xs)
for i, xi, ur in zip(idx, xs, u_ref):
    print(f"  x = {xi:.3f}: u0 = {u0.u0.values[i]:.12e}, shooting = {ur:.12e}")

# --- Coulomb singularity ----------------------------------------------------
# q = 1/x is singular at the origin; the sample at x = 0 is never used on
# its own and the analytic limit of x q(x) pins the Picard integrand there
ph = make_potential("1/x", mesh, 1.0)
uh = build_u0(ph)
print(f"\nq = 1/x, l = 1 (hydrogen): ODE defect {uh.residual:.2e}")
print("  u0/x^2 near the origin:", uh.u0.values[1:4] / mesh.x[1:4] ** 2)
print(f"  u0(pi) = {uh.u0.at_end:.12f}")
