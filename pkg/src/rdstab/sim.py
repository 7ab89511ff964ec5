"""Time integration of the kinetics (ODE) and of the 1-D diffusive system.

The ODE integrator is classical RK4 with step-doubling error control. The
PDE is discretised by the method of lines on a node-centred grid; Neumann
boundaries use mirrored ghost nodes and time stepping is explicit RK4.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .analysis import (EquilibriumReport, Interval, SpectrumConfig, classify_pde_stability,
                       find_equilibrium)
from .errors import BlowupError, DomainError, RDStabError, StepError
from .model import ModelSpec

BLOWUP = 1e12
RECT_TOL = 1e-6


@dataclass(frozen=True)
class Grid1D:
    length: float
    n: int

    def __post_init__(self):
        if not self.length > 0:
            raise DomainError("grid length must be positive")
        if self.n < 8:
            raise DomainError("grid needs at least 8 nodes")

    @property
    def dx(self) -> float:
        return self.length / (self.n - 1)

    @property
    def nodes(self) -> np.ndarray:
        return np.linspace(0.0, self.length, self.n)


@dataclass(frozen=True)
class Constant:
    u0: float
    v0: float


@dataclass(frozen=True)
class SinePerturbed:
    """u = u_base + amp*sin(x/w), v = v_base + amp*cos(x/w)."""

    u_base: float
    v_base: float
    amp: float = 0.2
    wavelen_param: float = 5.0


@dataclass(frozen=True)
class Field:
    """Explicit nodal values."""

    u: np.ndarray
    v: np.ndarray


InitialData = Constant | SinePerturbed | Field


def initial_fields(init: InitialData, grid: Grid1D) -> tuple[np.ndarray, np.ndarray]:
    x = grid.nodes
    if isinstance(init, Constant):
        u, v = np.full(grid.n, float(init.u0)), np.full(grid.n, float(init.v0))
    elif isinstance(init, SinePerturbed):
        u = init.u_base + init.amp * np.sin(x / init.wavelen_param)
        v = init.v_base + init.amp * np.cos(x / init.wavelen_param)
    elif isinstance(init, Field):
        u = np.array(init.u, dtype=float)
        v = np.array(init.v, dtype=float)
        if u.shape != (grid.n,) or v.shape != (grid.n,):
            raise DomainError("Field initial data does not match the grid")
    else:
        raise DomainError(f"unknown initial data {init!r}")
    if not (np.all(np.isfinite(u)) and np.all(np.isfinite(v))):
        raise DomainError("initial data must be finite")
    if np.any(u < 0) or np.any(v < 0):
        raise DomainError("initial data must be non-negative")
    return u, v


@dataclass(frozen=True)
class Trajectory:
    """Snapshots of a run.

    For ODE runs ``u`` and ``v`` have shape (T,); for PDE runs (T, n).
    ``V`` is filled by :func:`rdstab.lyapunov.attach_lyapunov`.
    """

    times: np.ndarray
    u: np.ndarray
    v: np.ndarray
    dist_sup: np.ndarray
    rect_violation: np.ndarray
    grid: Grid1D | None = None
    V: np.ndarray | None = None
    warnings: tuple[str, ...] = ()

    @property
    def in_rect(self) -> np.ndarray:
        return self.rect_violation <= RECT_TOL

    @property
    def final(self) -> tuple:
        return self.u[-1], self.v[-1]


def rectangle_violation(spec: ModelSpec, u, v) -> np.ndarray:
    """How far (u, v) lies outside (0, delta) x (0, g(delta)); 0 inside.

    Reduces over the last axis for field snapshots.
    """
    r2 = float(spec.g(spec.delta))
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    out = np.maximum.reduce([np.zeros_like(u), -u, u - spec.delta, -v, v - r2])
    return out.max(axis=-1) if out.ndim > 1 else out


def _diagnostics(spec, eq, U, Vf):
    if eq is None:
        dist = np.full(U.shape[0], np.nan)
    else:
        du = np.abs(U - eq.u_star)
        dv = np.abs(Vf - eq.v_star)
        d = np.maximum(du, dv)
        dist = d.max(axis=-1) if d.ndim > 1 else d
    return dist, rectangle_violation(spec, U, Vf)


def _equilibrium_or_none(spec):
    try:
        return find_equilibrium(spec)
    except RDStabError:
        return None


def _check_state(y, t):
    if not np.all(np.isfinite(y)) or np.max(np.abs(y)) > BLOWUP:
        raise BlowupError(f"solution exceeded {BLOWUP:g} at t={t:.6g}")


def _output_times(t_end: float, dt_out: float) -> np.ndarray:
    if not t_end > 0:
        raise DomainError("t_end must be positive")
    if not dt_out > 0:
        raise DomainError("dt_out must be positive")
    k = int(math.floor(t_end / dt_out + 1e-9))
    ts = dt_out * np.arange(k + 1)
    if t_end - ts[-1] > 1e-9 * t_end:
        ts = np.append(ts, t_end)
    return ts


# ODE -----------------------------------------------------------------------

def _rk4(rhs, y, h):
    k1 = rhs(y)
    k2 = rhs(y + 0.5 * h * k1)
    k3 = rhs(y + 0.5 * h * k2)
    k4 = rhs(y + h * k3)
    return y + (h / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)


def integrate_ode(spec: ModelSpec, init: tuple[float, float], t_end: float, dt_out: float,
                  rtol: float = 1e-8, atol: float = 1e-10,
                  eq: EquilibriumReport | None = None) -> Trajectory:
    """Integrate the diffusion-free kinetics u' = F(u, v), v' = G(u, v).

    Adaptive RK4 with step doubling; steps are clipped to land on every
    multiple of ``dt_out``.
    """
    u0, v0 = map(float, init)
    if not (u0 > 0 and v0 > 0):
        raise DomainError("ODE initial state must be positive")
    ts = _output_times(t_end, dt_out)

    def rhs(y):
        F, G = spec.reaction(y[0], y[1])
        return np.array([F, G], dtype=float)

    y = np.array([u0, v0])
    out = np.empty((len(ts), 2))
    out[0] = y
    t = 0.0
    h = min(dt_out, t_end) * 0.1
    h_min = 1e-14 * t_end
    for k in range(1, len(ts)):
        target = ts[k]
        while t < target:
            step = min(h, target - t)
            full = _rk4(rhs, y, step)
            half = _rk4(rhs, _rk4(rhs, y, 0.5 * step), 0.5 * step)
            _check_state(half, t)
            err = np.abs(half - full) / 15.0
            scale = atol + rtol * np.maximum(np.abs(y), np.abs(half))
            ratio = float(np.max(err / scale))
            if ratio <= 1.0:
                # local extrapolation of the doubled step
                y = half + (half - full) / 15.0
                t = target if step == target - t else t + step
            fac = 4.0 if ratio == 0 else min(4.0, max(0.2, 0.9 * ratio ** -0.2))
            h = step * fac
            if h < h_min:
                raise StepError(f"step size underflow at t={t:.6g}")
        t = target
        out[k] = y
    eq = eq if eq is not None else _equilibrium_or_none(spec)
    dist, viol = _diagnostics(spec, eq, out[:, 0], out[:, 1])
    return Trajectory(times=ts, u=out[:, 0].copy(), v=out[:, 1].copy(), dist_sup=dist,
                      rect_violation=viol)


# PDE -----------------------------------------------------------------------

def neumann_laplacian(w: np.ndarray, dx: float) -> np.ndarray:
    """Second difference along the last axis with mirrored ghost nodes
    (w[-1] = w[1], w[n] = w[n-2])."""
    lap = np.empty_like(w)
    lap[..., 1:-1] = w[..., :-2] - 2.0 * w[..., 1:-1] + w[..., 2:]
    lap[..., 0] = 2.0 * (w[..., 1] - w[..., 0])
    lap[..., -1] = 2.0 * (w[..., -2] - w[..., -1])
    return lap / (dx * dx)


def _jac_norm(spec: ModelSpec, u, v) -> float:
    Fu, Fv, Gu, Gv = (np.asarray(a, dtype=float) for a in spec.jacobian(u, v))
    rows = np.maximum(np.abs(Fu) + np.abs(Fv), np.abs(Gu) + np.abs(Gv))
    return float(np.max(rows))


def reaction_lipschitz(spec: ModelSpec, u=None, v=None, n: int = 64) -> float:
    """Max row-sum norm of the reaction Jacobian.

    Evaluated at the given states, or on an n x n interior grid of the
    rectangle (0, delta) x (0, g(delta)) when no state is given.
    """
    if u is None:
        us = spec.delta * np.arange(1, n + 1) / (n + 1)
        vs = float(spec.g(spec.delta)) * np.arange(1, n + 1) / (n + 1)
        u, v = np.meshgrid(us, vs)
    with np.errstate(all="ignore"):
        return _jac_norm(spec, u, v)


def integrate_pde_1d(spec: ModelSpec, grid: Grid1D, init: InitialData, t_end: float,
                     dt_out: float, eq: EquilibriumReport | None = None, *,
                     reaction: bool = True, lipschitz: str = "local", cfl: float = 0.4,
                     react_safety: float = 0.1) -> Trajectory:
    """Method-of-lines integration of the diffusive system on [0, L].

    The step obeys dt <= cfl * dx^2 / (2 max(d1, d2)) and
    dt <= react_safety / Lip. With ``lipschitz="local"`` Lip is the Jacobian
    norm at the current nodal states, refreshed at every output time; with
    ``"rectangle"`` it is the maximum over (0, delta) x (0, g(delta)).
    ``reaction=False`` switches the kinetics off (pure diffusion).
    """
    u, v = initial_fields(init, grid)
    ts = _output_times(t_end, dt_out)
    dx = grid.dx
    D = np.array([[spec.d1], [spec.d2]])
    dt_diff = cfl * dx * dx / (2.0 * max(spec.d1, spec.d2))
    lip_rect = reaction_lipschitz(spec) if (reaction and lipschitz == "rectangle") else None
    if lipschitz not in ("local", "rectangle"):
        raise DomainError(f"unknown lipschitz mode {lipschitz!r}")

    if reaction:
        def rhs(y):
            F, G = spec.reaction(y[0], y[1])
            out = D * neumann_laplacian(y, dx)
            out[0] += F
            out[1] += G
            return out
    else:
        def rhs(y):
            return D * neumann_laplacian(y, dx)

    y = np.vstack([u, v])
    snaps = np.empty((len(ts), 2, grid.n))
    snaps[0] = y
    warnings = []
    t = 0.0
    for k in range(1, len(ts)):
        span = ts[k] - ts[k - 1]
        dt_max = dt_diff
        if reaction:
            lip = lip_rect if lip_rect is not None else reaction_lipschitz(spec, y[0], y[1])
            if lip > 0:
                dt_max = min(dt_max, react_safety / lip)
        nsub = max(1, int(math.ceil(span / dt_max - 1e-12)))
        h = span / nsub
        if h < 1e-14 * t_end:
            raise StepError(f"time step underflow at t={t:.6g}")
        for _ in range(nsub):
            y = _rk4(rhs, y, h)
        t = ts[k]
        _check_state(y, t)
        if y.min() < -1e-10 and not warnings:
            warnings.append(f"NegativityWarning: min field value {y.min():.3e} at t={t:.6g}")
        snaps[k] = y
    eq = eq if eq is not None else _equilibrium_or_none(spec)
    U = snaps[:, 0, :].copy()
    Vf = snaps[:, 1, :].copy()
    dist, viol = _diagnostics(spec, eq, U, Vf)
    return Trajectory(times=ts, u=U, v=Vf, dist_sup=dist, rect_violation=viol, grid=grid,
                      warnings=tuple(warnings))


def converged_at(traj: Trajectory, tol: float = 1e-2, consecutive: int = 10) -> float | None:
    """First time after which ``dist_sup < tol`` for ``consecutive`` snapshots."""
    ok = traj.dist_sup < tol
    run = 0
    for k, flag in enumerate(ok):
        run = run + 1 if flag else 0
        if run >= consecutive:
            return float(traj.times[k - consecutive + 1])
    return None


def mode_amplitude(field: np.ndarray, grid: Grid1D, k: int) -> np.ndarray:
    """Projection of a field (or stack of fields) onto cos(k*pi*x/L),
    normalised so that a pure mode of amplitude A returns A."""
    x = grid.nodes
    w = np.full(grid.n, grid.dx)
    w[0] = w[-1] = 0.5 * grid.dx
    phi = np.cos(k * np.pi * x / grid.length)
    return (np.asarray(field) @ (w * phi)) / np.dot(w, phi * phi)


# sweeps --------------------------------------------------------------------

@dataclass(frozen=True)
class Scenario:
    """Shared simulation setup for a batch of specs.

    ``init`` may be a fixed InitialData or a callable
    (spec, eq, grid) -> InitialData, e.g. a perturbation of each spec's
    own equilibrium.
    """

    grid: Grid1D
    init: InitialData | Callable
    t_end: float
    dt_out: float
    max_modes: int = 200


@dataclass(frozen=True)
class SweepSummary:
    name: str
    params: dict
    status: str
    verdict: str | None = None
    d_crit: float | None = None
    initial_distance: float = math.nan
    final_distance: float = math.nan
    growth: float = math.nan
    consistent: bool | None = None


def _run_one(spec: ModelSpec, sc: Scenario) -> SweepSummary:
    try:
        eq = find_equilibrium(spec)
        try:
            rep = classify_pde_stability(spec, eq, SpectrumConfig(Interval(sc.grid.length), sc.max_modes))
            verdict, d_crit = rep.verdict.value, rep.d_crit
        except RDStabError as exc:
            verdict, d_crit = f"error: {type(exc).__name__}", None
        init = sc.init(spec, eq, sc.grid) if callable(sc.init) else sc.init
        traj = integrate_pde_1d(spec, sc.grid, init, sc.t_end, sc.dt_out, eq)
        d0 = float(traj.dist_sup[0])
        growth = float(np.max(traj.dist_sup) / d0) if d0 > 0 else math.inf
        final = float(traj.dist_sup[-1])
        if verdict == "Unstable":
            consistent = growth >= 10.0
        elif verdict in ("StableCase1", "StableCase2"):
            consistent = final < d0
        else:
            consistent = None
        return SweepSummary(spec.name, dict(spec.params), "ok", verdict, d_crit, d0, final,
                            growth, consistent)
    except RDStabError as exc:
        return SweepSummary(spec.name, dict(spec.params), f"{type(exc).__name__}: {exc}")


def sweep_threads() -> int:
    env = os.environ.get("RDSTAB_THREADS")
    if env:
        return max(1, int(env))
    return max(1, min(8, os.cpu_count() or 1))


def sweep(specs: Sequence[ModelSpec], scenario: Scenario, threads: int | None = None) -> list[SweepSummary]:
    """Simulate every spec under the same scenario.

    Failures are recorded in the ``status`` field of the corresponding
    summary; the order of the output matches ``specs``.
    """
    specs = list(specs)
    if not specs:
        raise DomainError("sweep needs at least one spec")
    threads = threads or sweep_threads()
    if threads == 1 or len(specs) == 1:
        return [_run_one(s, scenario) for s in specs]
    with ThreadPoolExecutor(max_workers=threads) as ex:
        return list(ex.map(lambda s: _run_one(s, scenario), specs))
