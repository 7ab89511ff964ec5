"""Diffusion-driven instability in an activator-inhibitor variant of the
Lengyel-Epstein kinetics.

The steady state is stable without diffusion. Once d2/sigma exceeds the
critical ratio, one Neumann mode has Q_k < 0 and grows at the rate given by
the positive root of xi^2 + p_k xi + Q_k = 0.

    python demos/05_instability_witness.py
"""

import numpy as np

from rdstab import (Field, Grid1D, Interval, SpectrumConfig, classify_pde_stability,
                    find_equilibrium, integrate_pde_1d, neumann_eigenvalues,
                    preset_lengyel_epstein)
from rdstab.analysis import growth_rate
from rdstab.sim import mode_amplitude

base = preset_lengyel_epstein(a=10.0, mu=1.0, lam=4.0, sigma=4.0, d1=1.0, d2=1.0)
eq = find_equilibrium(base)
L = 20.0
cfg = SpectrumConfig(Interval(L), 200)
rep = classify_pde_stability(base, eq, cfg)
print(f"F0 = {rep.F0:.4f}, modes with d1*lambda_i < F0: 1..{rep.i_alpha}")
print(f"critical ratio d2/sigma = {rep.d_crit:.6f}")

for factor in (0.5, 2.0):
    spec = base.replace(d2=factor * rep.d_crit * base.sigma)
    r = classify_pde_stability(spec, eq, cfg)
    print(f"  d2/sigma = {factor:g} x critical -> {r.verdict.value}"
          + (f", witness mode {r.witness_mode}" if r.witness_mode else ""))

spec = base.replace(d2=2 * rep.d_crit * base.sigma)
k = classify_pde_stability(spec, eq, cfg).witness_mode
lam_k = neumann_eigenvalues(cfg)[k]
xi = growth_rate(spec, eq, lam_k)

M = eq.jac - np.diag([spec.d1, spec.d2]) * lam_k
w, vecs = np.linalg.eig(M)
vec = np.real(vecs[:, np.argmax(w.real)])
vec /= np.max(np.abs(vec))
grid = Grid1D(L, 64)
shape = 1e-4 * np.cos(k * np.pi * grid.nodes / L)
traj = integrate_pde_1d(spec, grid, Field(eq.u_star + vec[0] * shape, eq.v_star + vec[1] * shape),
                        20.0, 0.5, eq)
amp = np.abs(mode_amplitude(traj.u - eq.u_star, grid, k))
fit = (traj.times >= 1) & (traj.times <= 8)
rate = np.polyfit(traj.times[fit], np.log(amp[fit]), 1)[0]
print(f"\nmode {k}: predicted growth rate {xi:.4f}, measured {rate:.4f}")
for t in (0, 5, 10, 15, 20):
    j = int(np.searchsorted(traj.times, t))
    print(f"  t = {t:4.0f}: amplitude {amp[j]:.3e}")
