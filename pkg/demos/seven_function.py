"""Build a solution of the seven-function equation

    Psi1(x+y) = Psi2(x+y) phi2(x) phi3(y) + Psi3(x+y) phi4(x) phi5(y)

from three shifts mu1, mu2, mu3 on the square lattice and verify it.
"""
from bakerfe.applications import BiggyParams, example3_construct
from bakerfe.elliptic import lattice_from_invariants

L = lattice_from_invariants(1.0, 0.0)
for mu in [(1.1, 0.5, 0.35), (0.9 + 0.3j, 0.2 - 0.1j, 0.4 + 0.2j), (1.4, -0.3, 0.6j)]:
    p = BiggyParams(*mu, L)
    S = example3_construct(p)
    print("mu =", mu)
    print(f"  alpha = {p.alpha:.6g}  nu1 = {p.nu1:.6g}  nu2 = {p.nu2:.6g}")
    print(f"  c1 = {S.c1:.10f}  lambda1 = {S.lambda1:.10f}")
    print(f"  c2 = {S.c2:.10f}  lambda2 = {S.lambda2:.10f}")
    r1, r3 = S.psi_ratios(0.3 + 0.1j)
    print(f"  Psi1/Psi2 and Psi3/Psi2 at 0.3+0.1i: {r1:.8f}, {r3:.8f}")
    for k, v in S.residuals.items():
        print(f"  {k:<11s}{v:.1e}")

try:
    example3_construct(BiggyParams(0.85, 0.5, 0.35, L))
except ValueError as e:
    print("\nmu1 = mu2 + mu3 rejected:", e)
