"""Invariant rectangles and a-priori bounds on solutions.

Two constructions are provided. ``check_invariant_rectangle`` tests that the
reaction field points into (0, delta) x (0, g(delta)) on its boundary.
``compute_bounds`` builds the rectangle [u1, u2] x [v1, v2] from the
factorisation f*phi = K - u*Psi(u), g*phi = u*Phi(u) and the initial data.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize_scalar

from .errors import DomainError, NonFiniteError, SublinearityError
from .model import ModelSpec, ScalarFn, interior_grid


@dataclass(frozen=True)
class InvariantCheck:
    """Boundary test of the rectangle (0, delta) x (0, g(delta)).

    Truthiness is ``holds``; on failure ``edge`` names the offending side
    ("left", "right", "bottom", "top") and ``witness`` the sampled point.
    """

    holds: bool
    r1: float
    r2: float
    edge: str | None = None
    witness: tuple[float, float] | None = None
    value: float | None = None

    def __bool__(self) -> bool:
        return self.holds


def check_invariant_rectangle(spec: ModelSpec, n_samples: int = 256) -> InvariantCheck:
    """Check that (F, G) points into (0, delta) x (0, g(delta)) on the boundary.

    The left edge u = 0 is evaluated at u = 1e-8 * delta.
    """
    if n_samples < 16:
        raise DomainError("n_samples must be at least 16")
    r1 = spec.delta
    r2 = float(spec.g(r1))
    us = interior_grid(r1, n_samples)
    vs = interior_grid(r2, n_samples)
    u0 = spec.limit_point()
    with np.errstate(all="ignore"):
        sides = {
            "left": (np.full_like(vs, u0), vs, spec.F(u0, vs), 1.0),
            "right": (np.full_like(vs, r1), vs, spec.F(r1, vs), -1.0),
            "bottom": (us, np.zeros_like(us), spec.G(us, 0.0), 1.0),
            "top": (us, np.full_like(us, r2), spec.G(us, r2), -1.0),
        }
    for name, (_, _, val, _) in sides.items():
        if not np.all(np.isfinite(val)):
            raise NonFiniteError(f"reaction field not finite on the {name} edge")
    scale = max(1.0, *(float(np.max(np.abs(s[2]))) for s in sides.values()))
    tol = 1e-10 * scale
    for name, (uu, vv, val, sign) in sides.items():
        # sign=+1: field must be >= 0 (pointing right/up); -1: <= 0
        slack = sign * np.asarray(val, dtype=float)
        k = int(np.argmin(slack))
        if slack[k] < -tol:
            return InvariantCheck(False, r1, r2, name, (float(uu[k]), float(vv[k])), float(val[k]))
    return InvariantCheck(True, r1, r2)


@dataclass(frozen=True)
class Decomposition:
    K: float
    Psi: ScalarFn
    Phi_fn: ScalarFn
    psi_min: float
    psi_max: float
    phi_min: float
    phi_max: float
    scan_range: tuple[float, float]
    # False when Psi is not positive on the whole scan range; extrema then
    # come from the sub-range where it is
    psi_valid: bool = True


def _refined_extremum(fn, x: np.ndarray, y: np.ndarray, kind: str) -> float:
    k = int(np.argmin(y) if kind == "min" else np.argmax(y))
    best = float(y[k])
    lo = x[max(k - 1, 0)]
    hi = x[min(k + 1, len(x) - 1)]
    if hi <= lo:
        return best
    sgn = 1.0 if kind == "min" else -1.0
    res = minimize_scalar(lambda s: sgn * float(fn(s)), bounds=(lo, hi), method="bounded",
                          options=dict(xatol=1e-12 * max(1.0, hi)))
    cand = sgn * float(res.fun)
    return min(best, cand) if kind == "min" else max(best, cand)


def decompose(spec: ModelSpec, hi: float | None = None, n_scan: int = 100_000,
              n_check: int = 512) -> Decomposition:
    """Extrema of Psi and Phi over (0, hi] for the spec's analytic split.

    ``hi`` defaults to delta. The split is verified against f*phi and g*phi
    at ``n_check`` points before use.
    """
    if spec.split is None:
        raise DomainError(f"model {spec.name!r} carries no K - u*Psi / u*Phi split")
    sp = spec.split
    hi = spec.delta if hi is None else max(hi, spec.delta)

    uc = interior_grid(hi, n_check)
    lhs_f = spec.f(uc) * spec.phi(uc)
    rhs_f = sp.K - uc * sp.Psi(uc)
    lhs_g = spec.g(uc) * spec.phi(uc)
    rhs_g = uc * sp.Phi(uc)
    for lhs, rhs, what in ((lhs_f, rhs_f, "f*phi"), (lhs_g, rhs_g, "g*phi")):
        err = np.abs(lhs - rhs)
        if np.any(err > 1e-9 * np.maximum(1.0, np.abs(lhs))):
            raise DomainError(f"split does not reproduce {what}")

    x = hi * np.arange(1, n_scan + 1) / n_scan
    psi = np.asarray(sp.Psi(x), dtype=float) * np.ones_like(x)
    phi = np.asarray(sp.Phi(x), dtype=float) * np.ones_like(x)
    if not (np.all(np.isfinite(psi)) and np.all(np.isfinite(phi))):
        raise NonFiniteError("Psi or Phi not finite on the scan range")
    pos = psi > 0
    psi_valid = bool(np.all(pos))
    if not np.any(pos):
        raise DomainError("Psi is nowhere positive on the scan range")
    if psi_valid:
        psi_min = _refined_extremum(sp.Psi, x, psi, "min")
        psi_max = _refined_extremum(sp.Psi, x, psi, "max")
    else:
        psi_min = float(np.min(psi[pos]))
        psi_max = float(np.max(psi[pos]))
    return Decomposition(
        K=float(sp.K), Psi=sp.Psi, Phi_fn=sp.Phi,
        psi_min=psi_min, psi_max=psi_max,
        phi_min=_refined_extremum(sp.Phi, x, phi, "min"),
        phi_max=_refined_extremum(sp.Phi, x, phi, "max"),
        scan_range=(0.0, float(hi)), psi_valid=psi_valid,
    )


@dataclass(frozen=True)
class BoundsReport:
    rect_delta: tuple[float, float]
    u1: float
    u2: float
    v1: float
    v2: float
    C1: float
    C2: float
    C2_box: float
    phi_prime_0: float
    psi_valid: bool = True

    def as_dict(self) -> dict:
        return dict(rect_delta=list(self.rect_delta), u1=self.u1, u2=self.u2, v1=self.v1,
                    v2=self.v2, C1=self.C1, C2=self.C2, C2_box=self.C2_box,
                    phi_prime_0=self.phi_prime_0, psi_valid=self.psi_valid)


def check_sublinear(spec: ModelSpec, hi: float, n: int = 100_000) -> None:
    """Raise SublinearityError if phi(s)/s increases anywhere on (0, hi]."""
    s = hi * np.arange(1, n + 1) / n
    r = spec.phi(s) / s
    jump = np.diff(r)
    tol = 1e-12 * max(1.0, float(np.max(np.abs(r))))
    bad = np.nonzero(jump > tol)[0]
    if bad.size:
        raise SublinearityError(f"phi(s)/s increases near s={s[bad[0]]:.6g}")


def compute_bounds(spec: ModelSpec, dec: Decomposition, u0_range: tuple[float, float],
                   v0_range: tuple[float, float]) -> BoundsReport:
    """Bounds u1 <= u <= u2, v1 <= v <= v2 for solutions started in the given
    initial ranges.

    Evaluation order follows the coupling: u2, then v2 (needs u2), then u1
    (needs v2), then v1. ``C2`` is min(u2, v2) as the estimate is usually stated;
    ``C2_box`` = max(u2, v2) is the value that actually bounds both fields.
    """
    umin, umax = map(float, u0_range)
    vmin, vmax = map(float, v0_range)
    if umin > umax or vmin > vmax:
        raise DomainError("initial ranges must be given as (min, max)")
    check_sublinear(spec, dec.scan_range[1])
    dphi0 = float(spec.phi.deriv(0.0))
    if not dphi0 > 0:
        raise DomainError(f"phi'(0) = {dphi0!r} must be positive for these bounds")

    K, lam = dec.K, spec.lam
    u2 = max(K / dec.psi_max, umax)
    v2 = max(u2 / float(spec.phi(u2)) * dec.phi_max, vmax)
    u1 = min(K / (dec.psi_min + lam * v2 * dphi0), umin)
    v1 = min(dec.phi_min / dphi0, vmin)
    r1 = spec.delta
    return BoundsReport(
        rect_delta=(r1, float(spec.g(r1))), u1=u1, u2=u2, v1=v1, v2=v2,
        C1=min(u1, v1), C2=min(u2, v2), C2_box=max(u2, v2),
        phi_prime_0=dphi0, psi_valid=dec.psi_valid,
    )
