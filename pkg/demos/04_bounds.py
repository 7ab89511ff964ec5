"""Invariant rectangle and a-priori bounds for the Lengyel-Epstein model.

The factorisation f*phi = a - u and g*phi = u gives the bounds in closed form;
a kinetic run from the same start never leaves them.

    python demos/04_bounds.py
"""

from rdstab import (REFERENCE_FHN, REFERENCE_LE, DomainError, check_invariant_rectangle,
                    compute_bounds, decompose, integrate_ode, preset_fitzhugh_nagumo,
                    preset_lengyel_epstein)

spec = preset_lengyel_epstein(**REFERENCE_LE)
chk = check_invariant_rectangle(spec)
print(f"(0, {chk.r1:.4f}) x (0, {chk.r2:.4f}) is invariant: {chk.holds}")

u0, v0 = 4.0, 3.0
rep = compute_bounds(spec, decompose(spec, hi=u0), (u0, u0), (v0, v0))
print(f"u in [{rep.u1:.6f}, {rep.u2:.6f}], v in [{rep.v1:.6f}, {rep.v2:.6f}]")
print(f"C1 = {rep.C1:.6f}, C2 = {rep.C2:.6f}, box bound {rep.C2_box:.6f}")

traj = integrate_ode(spec, (u0, v0), 100.0, 0.1)
print(f"kinetic run: u in [{traj.u.min():.4f}, {traj.u.max():.4f}], "
      f"v in [{traj.v.min():.4f}, {traj.v.max():.4f}]")

fhn = preset_fitzhugh_nagumo(**REFERENCE_FHN)
dec = decompose(fhn)
print(f"\nFitzHugh-Nagumo: Psi positive on the whole range: {dec.psi_valid}")
try:
    compute_bounds(fhn, dec, (0.5, 0.5), (1.2, 1.2))
except DomainError as exc:
    print(f"bounds not available: {exc}")
