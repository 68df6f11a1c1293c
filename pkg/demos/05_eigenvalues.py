#!/usr/bin/env python3
"""Eigenvalue computation: large sets with non-deteriorating accuracy.

Dirichlet/Neumann/Robin problems at x = b reduce to root-finding on the
characteristic function Phi(omega) = omega^{l+1} BC(omega); one
coefficient table serves the whole window.
"""
import numpy as np

from pbessel import UniformMesh, build_solution, make_potential
from pbessel.shooting import shoot_eigenvalue_near
from pbessel.spectral import BoundaryCondition, SpectralProblem, find_eigenvalues

mesh = UniformMesh(np.pi, 20001)

# --- the oscillator-like example: q = x^2, l = 3/2 ---------------------------
sol = build_solution(make_potential("x^2", mesh, 1.5), N=100)
prob = SpectralProblem(sol.potential, BoundaryCondition("dirichlet"), (2.0, 51.2))
pairs = find_eigenvalues(sol, prob)
print(f"found {len(pairs)} Dirichlet eigenvalues in [2, 51.2]")
known = {1: 2.46294997397397, 10: 10.8861250916173, 50: 50.7786768095149}
for n, exact in known.items():
    print(f"  omega_{n:<2d} = {pairs[n - 1].omega:.14f}   (exact {exact}, |err| = {abs(pairs[n - 1].omega - exact):.1e})")

# --- Neumann spectrum interlaces the Dirichlet one ---------------------------
neu = find_eigenvalues(
    sol, SpectralProblem(sol.potential, BoundaryCondition("neumann"), (0.5, 11.0))
)
dir_small = [p.omega for p in pairs if p.omega < 11.0]
print("\nNeumann:  ", " ".join(f"{p.omega:.4f}" for p in neu))
print("Dirichlet:", " ".join(f"{om:.4f}" for om in dir_small))

# --- hydrogen atom: singular potential, same machinery -----------------------
hyd = build_solution(make_potential("1/x", mesh, 1.0), N=100)
hpairs = find_eigenvalues(
    hyd, SpectralProblem(hyd.potential, BoundaryCondition("dirichlet"), (0.5, 6.0))
)
print("\nhydrogen (q = 1/x, l = 1) eigenvalues vs shooting oracle:")
for p in hpairs:
    ref = shoot_eigenvalue_near(lambda t: 1.0 / np.asarray(t), 1.0, np.pi, p.omega)
    print(f"  omega_{p.index} = {p.omega:.12f}   |err| = {abs(p.omega - ref):.1e}")
