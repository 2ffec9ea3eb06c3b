"""The symmetry side: prolonged vector fields and their superalgebra.

First each of the five named generators is prolonged to second order and
its symmetry residual is evaluated at random on-shell jet points; a true
symmetry annihilates the equation there.  A deliberately wrong candidate
(a plain shift of the field) is run through the same criterion to show
the test has teeth.

Then the abstract algebra: brackets against the structure table, the
closed-form adjoint action against a long Baker-Campbell-Hausdorff
series, and conjugation of a generic element into the dilation direction.
"""

import random

from susygordon import (
    DEFAULT_CONTEXT as CTX,
    AlgebraElement,
    SSG_SIGNATURE,
    adjoint_closed_form,
    adjoint_exp,
    basis_element,
    bracket,
    random_jet_point,
    solve_conjugation_to_L,
    ssg_named_generators,
    symmetry_residual,
)
from susygordon.prolongation import ssg_shift_spec

print("== symmetry criterion at random on-shell points ==")
gens = ssg_named_generators(CTX)
for name, g in gens.items():
    worst = max(
        symmetry_residual(g, random_jet_point(SSG_SIGNATURE, 100 + s, CTX)).norm()
        for s in range(20)
    )
    print(f"  {name:8s} residual {worst:.2e}")

shift = ssg_shift_spec(CTX)
p = random_jet_point(SSG_SIGNATURE, 5, CTX)
print(f"  field shift (not a symmetry): residual body "
      f"{abs(symmetry_residual(shift, p).body):.3f}")

print()
print("== structure table spot checks ==")
L, Px, Pt = (basis_element(k, CTX) for k in ("L", "Px", "Pt"))
mu, nu = CTX.gen("mu"), CTX.gen("nu")
qx = AlgebraElement.from_coeffs(CTX, Qx=mu)
print("  [L, P_x] - 2 P_x        :", (bracket(L, Px) - Px * 2.0).norm())
print("  [L, mu Q_x] - mu Q_x    :", (bracket(L, qx) - qx).norm())
eta = CTX.gen("D1")
qx2 = AlgebraElement.from_coeffs(CTX, Qx=eta)
anti = bracket(qx, qx2)
print("  {mu Q_x, eta Q_x}       : P_x coefficient",
      (anti.c_Px - mu * eta * 2.0).norm(), "off 2*mu*eta")

print()
print("== adjoint action: closed form vs 16-term series ==")
rng = random.Random(3)
Y = AlgebraElement.from_coeffs(CTX, L=-0.5, Qx=eta * 0.7)
for _ in range(3):
    X = AlgebraElement.from_coeffs(
        CTX, Px=rng.uniform(-1, 1), Pt=rng.uniform(-1, 1),
        Qx=mu * rng.uniform(-1, 1), Qt=nu * rng.uniform(-1, 1),
    )
    gap = adjoint_exp(Y, X, series_terms=16) - adjoint_closed_form(Y, X)
    print("  gap", f"{gap.norm():.2e}")

print()
print("== conjugating a generic element onto the dilation ==")
V = AlgebraElement.from_coeffs(CTX, L=1.0, Px=0.4, Pt=-0.8,
                               Qx=mu * 0.3, Qt=nu * 0.6)
Y, res = solve_conjugation_to_L(V)
img = adjoint_exp(Y, V)
print("  residual", f"{res:.2e}",
      "| leftover translation part",
      f"{max(img.c_Px.norm(), img.c_Pt.norm()):.2e}")
print("  the L coefficient survives untouched:",
      (img.c_L - V.c_L).norm() == 0.0)
