"""Locate the constant steady states of both built-in models and check
their structural conditions.

    python demos/01_equilibria.py
"""

from rdstab import (REFERENCE_FHN, REFERENCE_LE, check_global_ode, check_hypotheses,
                    find_equilibrium, preset_fitzhugh_nagumo, preset_lengyel_epstein)

for spec in (preset_lengyel_epstein(**REFERENCE_LE), preset_fitzhugh_nagumo(**REFERENCE_FHN)):
    eq = find_equilibrium(spec)
    print(f"{spec.name}: working range (0, {spec.delta:.6f})")
    print(f"  steady state (u*, v*) = ({eq.u_star:.6f}, {eq.v_star:.6f})")
    print(f"  trace {eq.trace:+.4f}, det {eq.det:+.4f}, stable kinetics: {eq.ode_stable}")
    print(f"  activator-inhibitor type: {eq.activator_inhibitor}")
    rep = check_hypotheses(spec, eq.alpha)
    for key, res in rep.as_dict().items():
        if key == "grid_size":
            continue
        if not res["applicable"]:
            print(f"  {key:14s} not applicable")
            continue
        extra = f" (witness u={res['witness']:.4f})" if res["witness"] is not None else ""
        print(f"  {key:14s} {'holds' if res['holds'] else 'fails'}{extra}")
    print(f"  f' < sigma everywhere: {check_global_ode(spec)}")
    print()
