"""Sweep the inhibitor diffusivity and compare the predicted verdict with
what short simulations do. Just above the critical ratio the unstable mode
grows slowly, so a 15-unit run can still look like decay there.

    RDSTAB_THREADS=4 python demos/06_parameter_sweep.py
"""

import numpy as np

from rdstab import (Field, Grid1D, Interval, Scenario, SpectrumConfig, classify_pde_stability,
                    find_equilibrium, preset_lengyel_epstein, sweep)

base = preset_lengyel_epstein(a=10.0, mu=1.0, lam=4.0, sigma=4.0, d1=1.0, d2=1.0)
eq = find_equilibrium(base)
d_crit = classify_pde_stability(base, eq, SpectrumConfig(Interval(20.0), 200)).d_crit
factors = (0.25, 0.5, 0.9, 1.1, 2.0)
specs = [base.replace(d2=f * d_crit * base.sigma) for f in factors]


def perturbed(spec, eq, grid):
    x = grid.nodes
    bump = 1e-3 * sum(np.cos(k * np.pi * x / grid.length) for k in range(1, 9))
    return Field(eq.u_star + bump, np.full(grid.n, eq.v_star))


results = sweep(specs, Scenario(Grid1D(20.0, 48), perturbed, 15.0, 0.5))
print(f"critical d2/sigma = {d_crit:.4f}")
print(f"{'factor':>7} {'verdict':>12} {'start':>9} {'end':>9} {'max/start':>10} consistent")
for f, r in zip(factors, results):
    print(f"{f:7.2f} {r.verdict:>12} {r.initial_distance:9.2e} {r.final_distance:9.2e} "
          f"{r.growth:10.2f} {r.consistent}")
