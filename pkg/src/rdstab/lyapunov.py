"""Lyapunov functional and global-stability verdicts.

    H(u) = int_alpha^u (g(r) - g(alpha)) dr
    E(u, v) = sigma * H(u) + lam/2 * (v - v*)^2
    V(t) = int_Omega E(u(x, t), v(x, t)) dx

V is non-increasing along solutions whenever g is non-decreasing and
(alpha - u)(f(u) - f(alpha)) > 0 off alpha; here that is monitored on
simulated snapshots.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, replace
from functools import lru_cache

import numpy as np

from .analysis import EquilibriumReport
from .errors import DomainError
from .model import HypothesisReport, ModelSpec

CLAMP = 1e-10


@dataclass(frozen=True)
class LyapunovConfig:
    quad_points: int = 64
    rtol: float = 1e-10
    max_depth: int = 40

    def __post_init__(self):
        if self.quad_points < 8:
            raise DomainError("quad_points must be >= 8")


@lru_cache(maxsize=None)
def _legendre(n: int):
    x, w = np.polynomial.legendre.leggauss(n)
    x.setflags(write=False)
    w.setflags(write=False)
    return x, w


def gauss_legendre(fn, a, b, n: int):
    """n-point Gauss-Legendre rule on [a, b]; ``a`` and ``b`` may be arrays
    of equal shape, giving one integral per entry."""
    x, w = _legendre(n)
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    half = 0.5 * (b - a)
    mid = 0.5 * (b + a)
    nodes = mid[..., None] + half[..., None] * x
    return half * np.sum(w * fn(nodes), axis=-1)


def adaptive_gauss_legendre(fn, a: float, b: float, n: int = 64, rtol: float = 1e-10,
                            atol: float = 1e-300, max_depth: int = 40) -> float:
    """Integrate ``fn`` over [a, b] by recursive interval halving.

    An interval is accepted when its n-point estimate agrees with the sum of
    the estimates on its two halves to ``max(atol, rtol * |total|)``.
    """
    whole = float(gauss_legendre(fn, a, b, n))
    # |fn| keeps the tolerance meaningful when the signed integral cancels
    scale = max(abs(whole), float(gauss_legendre(lambda r: np.abs(fn(r)), a, b, n)))
    stack = [(a, b, whole, 0)]
    total = 0.0
    while stack:
        lo, hi, est, depth = stack.pop()
        m = 0.5 * (lo + hi)
        left = float(gauss_legendre(fn, lo, m, n))
        right = float(gauss_legendre(fn, m, hi, n))
        if abs(left + right - est) <= max(atol, rtol * scale) or depth >= max_depth:
            total += left + right
        else:
            stack.append((lo, m, left, depth + 1))
            stack.append((m, hi, right, depth + 1))
    return total


def _check_u(spec: ModelSpec, u: np.ndarray) -> np.ndarray:
    lo, hi = 0.0, spec.delta
    bad = (u <= lo - CLAMP) | (u >= hi + CLAMP) | ~np.isfinite(u)
    if np.any(bad):
        raise DomainError(f"u={u[bad].ravel()[0]!r} outside (0, delta={hi!r})")
    # integrator noise within CLAMP of the ends is pulled back inside
    eps = 1e-12 * hi
    return np.clip(u, lo + eps, hi - eps)


def eval_H(spec: ModelSpec, alpha: float, u: float, cfg: LyapunovConfig = LyapunovConfig()) -> float:
    """H(u) by adaptive Gauss-Legendre quadrature."""
    u = float(_check_u(spec, np.asarray(u, dtype=float)))
    if u == alpha:
        return 0.0
    ga = float(spec.g(alpha))
    sign = 1.0
    lo, hi = alpha, u
    if u < alpha:
        lo, hi, sign = u, alpha, -1.0
    val = sign * adaptive_gauss_legendre(lambda r: spec.g(r) - ga, lo, hi, cfg.quad_points,
                                         rtol=cfg.rtol, max_depth=cfg.max_depth)
    return val


def eval_H_field(spec: ModelSpec, alpha: float, u, cfg: LyapunovConfig = LyapunovConfig()) -> np.ndarray:
    """Vectorised H over an array of u values.

    One fixed rule handles every entry at once; entries where the n- and
    n/2-point rules disagree beyond ``rtol`` fall back to ``eval_H``.
    """
    u = _check_u(spec, np.asarray(u, dtype=float))
    ga = float(spec.g(alpha))

    def integrand(r):
        return spec.g(r) - ga

    n = cfg.quad_points
    full = gauss_legendre(integrand, np.full_like(u, alpha), u, n)
    coarse = gauss_legendre(integrand, np.full_like(u, alpha), u, n // 2)
    err = np.abs(full - coarse)
    redo = err > cfg.rtol * np.maximum(np.abs(full), 1e-300)
    redo &= err > 1e-15
    if np.any(redo):
        full = np.array(full, dtype=float)
        for idx in zip(*np.nonzero(redo)):
            full[idx] = eval_H(spec, alpha, float(u[idx]), cfg)
    return np.asarray(full, dtype=float)


def trapezoid_weights(n: int, dx: float) -> np.ndarray:
    w = np.full(n, dx)
    w[0] = w[-1] = 0.5 * dx
    return w


def energy_density(spec: ModelSpec, eq: EquilibriumReport, u, v,
                   cfg: LyapunovConfig = LyapunovConfig()) -> np.ndarray:
    """E(u, v) = sigma*H(u) + lam/2*(v - v*)^2, elementwise."""
    H = eval_H_field(spec, eq.alpha, u, cfg)
    return spec.sigma * H + 0.5 * spec.lam * (np.asarray(v, dtype=float) - eq.v_star) ** 2


def eval_V(spec: ModelSpec, eq: EquilibriumReport, snapshot, grid=None,
           cfg: LyapunovConfig = LyapunovConfig()) -> float:
    """V for one snapshot (u_field, v_field).

    With a ``grid`` (anything with ``n`` and ``dx``) the spatial integral is
    the trapezoid rule on it; without one the snapshot is treated as a
    spatially uniform state and E itself is returned.
    """
    u, v = (np.asarray(a, dtype=float) for a in snapshot)
    E = energy_density(spec, eq, u, v, cfg)
    if grid is None:
        return float(np.sum(E))
    if u.shape != (grid.n,):
        raise DomainError("snapshot length does not match the grid")
    return float(np.dot(trapezoid_weights(grid.n, grid.dx), E))


def lyapunov_series(spec: ModelSpec, eq: EquilibriumReport, traj,
                    cfg: LyapunovConfig = LyapunovConfig()) -> np.ndarray:
    """V at every snapshot of a trajectory."""
    grid = traj.grid
    return np.array([eval_V(spec, eq, (traj.u[k], traj.v[k]), grid, cfg)
                     for k in range(len(traj.times))])


def attach_lyapunov(spec: ModelSpec, eq: EquilibriumReport, traj,
                    cfg: LyapunovConfig = LyapunovConfig()):
    """Return a copy of ``traj`` with its V column filled."""
    return replace(traj, V=lyapunov_series(spec, eq, traj, cfg))


def is_monotone(V, rtol: float = 1e-6) -> bool:
    """V[k+1] <= V[k] + rtol * V[0] for every consecutive pair."""
    V = np.asarray(V, dtype=float)
    return bool(np.all(np.diff(V) <= rtol * V[0]))


class GlobalVerdict(str, enum.Enum):
    GLOBAL_ODE = "GlobalODE"
    GLOBAL_PDE = "GlobalPDE"
    INCONCLUSIVE = "Inconclusive"


def verdict_global(spec: ModelSpec, eq: EquilibriumReport, hyp: HypothesisReport) -> GlobalVerdict:
    """Strongest global-stability statement the sufficient conditions allow.

    The Lyapunov condition (g' >= 0 together with the one-sided bound on
    f - f(alpha)) covers the diffusive system and takes precedence; the
    divergence bound f' < sigma covers the kinetics alone.
    """
    if hyp.con6.holds and hyp.con2.holds:
        return GlobalVerdict.GLOBAL_PDE
    if hyp.theorem5.holds:
        return GlobalVerdict.GLOBAL_ODE
    return GlobalVerdict.INCONCLUSIVE
