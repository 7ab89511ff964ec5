"""Scan the Lengyel-Epstein feed parameter a across the value a^2 = 125/4,
where the one-sided bound (alpha - u)(f(u) - f(alpha)) >= 0 stops holding.

Below the threshold the Lyapunov functional certifies global stability of the
diffusive system; above it only weaker statements remain.

    python demos/02_condition_threshold.py
"""

import math

from rdstab import (REFERENCE_LE, check_hypotheses, find_equilibrium, preset_lengyel_epstein,
                    verdict_global)

print(f"{'a^2':>8} {'alpha':>8} {'con6':>6} {'margin':>11} {'witness':>8}  verdict")
for a2 in (25.0, 30.0, 31.0, 31.25, 31.5, 32.0, 34.0, 40.0):
    spec = preset_lengyel_epstein(**{**REFERENCE_LE, "a": math.sqrt(a2)})
    eq = find_equilibrium(spec)
    rep = check_hypotheses(spec, eq.alpha)
    c = rep.con6
    w = f"{c.witness:8.4f}" if c.witness is not None else " " * 8
    print(f"{a2:8.2f} {eq.alpha:8.4f} {str(c.holds):>6} {c.margin:11.3e} {w}  "
          f"{verdict_global(spec, eq, rep).value}")
