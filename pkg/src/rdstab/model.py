"""Model definition for the generalized two-species reaction-diffusion system

    u_t - d1 * Lap(u) = (f(u) - lam * v) * phi(u)
    v_t - d2 * Lap(v) = sigma * (g(u) - v) * phi(u)

with homogeneous Neumann boundaries, the two built-in presets
(Lengyel-Epstein and FitzHugh-Nagumo) and the structural hypothesis checker.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Callable, Mapping

import numpy as np

from .errors import DomainError, NonFiniteError, RootError
from .roots import bisect, sign_brackets

# u -> 0+ limits are evaluated at this fraction of delta
LIMIT_FRACTION = 1e-8
DEFAULT_GRID = 4096


@dataclass(frozen=True)
class ScalarFn:
    """A scalar nonlinearity bundled with its analytic derivative.

    Both callables must accept numpy arrays and act elementwise.
    """

    eval: Callable[[np.ndarray], np.ndarray]
    deriv: Callable[[np.ndarray], np.ndarray]

    def __call__(self, u):
        return self.eval(u)


def constant(c: float) -> ScalarFn:
    """ScalarFn for u -> c."""
    c = float(c)
    return ScalarFn(
        lambda u: np.full_like(np.asarray(u, dtype=float), c),
        lambda u: np.zeros_like(np.asarray(u, dtype=float)),
    )


@dataclass(frozen=True)
class Split:
    """Analytic factorisation f*phi = K - u*Psi(u), g*phi = u*Phi(u)."""

    K: float
    Psi: ScalarFn
    Phi: ScalarFn


@dataclass(frozen=True)
class ModelSpec:
    """Nonlinearities and constants of the reaction-diffusion system.

    ``lam`` is the coupling constant lambda; ``delta`` is the positive root
    of ``f`` that closes the working range (0, delta).
    """

    f: ScalarFn
    g: ScalarFn
    phi: ScalarFn
    d1: float
    d2: float
    lam: float
    sigma: float
    delta: float
    name: str = "custom"
    params: Mapping[str, float] = field(default_factory=dict)
    split: Split | None = None

    def __post_init__(self):
        for key in ("d1", "d2", "lam", "sigma", "delta"):
            val = getattr(self, key)
            if not (np.isfinite(val) and val > 0):
                raise DomainError(f"{key} must be a finite positive number, got {val!r}")
        fd = float(self.f(self.delta))
        fh = float(self.f(0.5 * self.delta))
        if not (np.isfinite(fd) and np.isfinite(fh)):
            raise NonFiniteError("f is not finite at delta or delta/2")
        if abs(fd) > 1e-9 * max(1.0, abs(fh)):
            raise DomainError(f"delta={self.delta!r} is not a root of f (f(delta)={fd:.3e})")

    # reaction terms -------------------------------------------------------

    def F(self, u, v):
        return (self.f(u) - self.lam * v) * self.phi(u)

    def G(self, u, v):
        return self.sigma * (self.g(u) - v) * self.phi(u)

    def reaction(self, u, v):
        """Return (F, G) sharing a single evaluation of phi."""
        p = self.phi(u)
        return (self.f(u) - self.lam * v) * p, self.sigma * (self.g(u) - v) * p

    def jacobian(self, u, v):
        """Analytic Jacobian entries (F_u, F_v, G_u, G_v) at (u, v)."""
        p = self.phi(u)
        dp = self.phi.deriv(u)
        Fu = (self.f(u) - self.lam * v) * dp + self.f.deriv(u) * p
        Fv = -self.lam * p
        Gu = self.sigma * ((self.g(u) - v) * dp + self.g.deriv(u) * p)
        Gv = -self.sigma * p
        return Fu, Fv, Gu, Gv

    def limit_point(self) -> float:
        """Stand-in abscissa for u -> 0+."""
        return LIMIT_FRACTION * self.delta

    def replace(self, **changes) -> "ModelSpec":
        return replace(self, **changes)


# presets ------------------------------------------------------------------

REFERENCE_LE = dict(a=math.sqrt(125 / 4), mu=1.0, lam=4.0, sigma=0.5, d1=1.0, d2=0.5)
REFERENCE_FHN = dict(beta=0.139, eps=0.008, gamma=2.54, stim=2.0, d1=1.0, d2=1.0)


def preset_lengyel_epstein(a: float, mu: float = 1.0, lam: float = 4.0, sigma: float = 0.5,
                           d1: float = 1.0, d2: float = 0.5) -> ModelSpec:
    """Generalized Lengyel-Epstein kinetics with phi(u) = u / (1 + u^2).

    f(u) = (a - mu*u) / phi(u) and g(u) = u / phi(u), so delta = a / mu.
    The classical CIMA model is recovered with lam=4, mu=1; its constants b
    and c enter only through ``sigma`` (sigma*b) and ``d2`` (sigma*c).
    """
    if not (a > 0 and mu > 0):
        raise DomainError("Lengyel-Epstein preset needs a > 0 and mu > 0")

    phi = ScalarFn(lambda u: u / (1 + u * u), lambda u: (1 - u * u) / (1 + u * u) ** 2)
    f = ScalarFn(
        lambda u: (a - mu * u) * (1 + u * u) / u,
        lambda u: -a / (u * u) + a - 2 * mu * u,
    )
    g = ScalarFn(lambda u: 1 + u * u, lambda u: 2 * u)
    split = Split(K=a, Psi=constant(mu), Phi=constant(1.0))
    return ModelSpec(f=f, g=g, phi=phi, d1=d1, d2=d2, lam=lam, sigma=sigma, delta=a / mu,
                     name="lengyel_epstein",
                     params=dict(a=a, mu=mu, lam=lam, sigma=sigma, d1=d1, d2=d2),
                     split=split)


def _first_positive_root(fn: Callable, lo: float = 1e-9, xtol: float = 1e-10) -> float:
    if not float(fn(lo)) > 0:
        raise RootError("f is not positive just right of 0; no admissible delta")
    hi = 1.0
    for _ in range(200):
        if float(fn(hi)) < 0:
            break
        hi *= 2
    else:
        raise RootError("f stays non-negative on (0, 2^200)")
    br = sign_brackets(fn, lo, hi, 4096)
    a, b = br[0]
    return bisect(fn, a, b, xtol=xtol, rtol=0.0)


def preset_fitzhugh_nagumo(beta: float, eps: float, gamma: float, stim: float,
                           d1: float = 1.0, d2: float = 1.0) -> ModelSpec:
    """FitzHugh-Nagumo kinetics u_t = -u^3 + (1+beta)u^2 - beta*u - v + stim,
    v_t = eps*(u - gamma*v), cast as f = cubic, g = u/gamma, phi = 1,
    lam = 1, sigma = eps*gamma.
    """
    if not 0 < beta < 1:
        raise DomainError("FitzHugh-Nagumo preset needs 0 < beta < 1")
    if not (eps > 0 and gamma > 0):
        raise DomainError("FitzHugh-Nagumo preset needs eps > 0 and gamma > 0")

    f = ScalarFn(
        lambda u: -u ** 3 + (1 + beta) * u ** 2 - beta * u + stim,
        lambda u: -3 * u ** 2 + 2 * (1 + beta) * u - beta,
    )
    g = ScalarFn(lambda u: u / gamma, lambda u: np.full_like(np.asarray(u, float), 1 / gamma))
    delta = _first_positive_root(f)
    split = Split(
        K=stim,
        Psi=ScalarFn(lambda u: u * u - (1 + beta) * u + beta, lambda u: 2 * u - (1 + beta)),
        Phi=constant(1 / gamma),
    )
    return ModelSpec(f=f, g=g, phi=constant(1.0), d1=d1, d2=d2, lam=1.0, sigma=eps * gamma,
                     delta=delta, name="fitzhugh_nagumo",
                     params=dict(beta=beta, eps=eps, gamma=gamma, stim=stim, d1=d1, d2=d2),
                     split=split)


PRESETS = {
    "lengyel_epstein": preset_lengyel_epstein,
    "fitzhugh_nagumo": preset_fitzhugh_nagumo,
}


# hypothesis checking --------------------------------------------------------

@dataclass(frozen=True)
class ConditionResult:
    """Outcome of one structural condition.

    ``margin`` is the worst value of the condition's slack over the grid
    (negative means violated). ``witness`` is a u-value in (0, delta) where
    the violation happens, for conditions quantified over that interval.
    """

    holds: bool
    margin: float
    witness: float | None = None
    applicable: bool = True

    def as_dict(self) -> dict:
        return dict(holds=self.holds, margin=self.margin, witness=self.witness,
                    applicable=self.applicable)


CONDITIONS = ("con1", "con5", "con2", "con3", "con4", "con6", "theorem5",
              "phi_sublinear", "phi_gen")


@dataclass(frozen=True)
class HypothesisReport:
    con1: ConditionResult
    con5: ConditionResult
    con2: ConditionResult
    con3: ConditionResult
    con4: ConditionResult
    con6: ConditionResult
    theorem5: ConditionResult
    phi_sublinear: ConditionResult
    phi_gen: ConditionResult
    grid_size: int

    def __getitem__(self, key: str) -> ConditionResult:
        if key not in CONDITIONS:
            raise KeyError(key)
        return getattr(self, key)

    def as_dict(self) -> dict:
        out = {k: self[k].as_dict() for k in CONDITIONS}
        out["grid_size"] = self.grid_size
        return out


def interior_grid(delta: float, n: int) -> np.ndarray:
    """``n`` uniformly spaced interior points of (0, delta)."""
    return delta * np.arange(1, n + 1) / (n + 1)


def _finite(name: str, values: np.ndarray, u: np.ndarray) -> np.ndarray:
    values = np.asarray(values, dtype=float)
    if values.shape != u.shape:
        values = np.broadcast_to(values, u.shape)
    bad = ~np.isfinite(values)
    if bad.any():
        raise NonFiniteError(f"{name} is not finite at u={u[bad][0]!r}")
    return values


def _pointwise(cond: Callable[[np.ndarray], np.ndarray], u: np.ndarray, mask: np.ndarray | None,
               tol: float, strict: bool, delta: float) -> ConditionResult:
    """Evaluate a slack function on the grid; violation means slack < -tol
    (or slack <= 0 when ``strict``). The worst violating point is refined by
    probing halfway to both neighbours."""
    slack = cond(u)
    keep = np.ones_like(u, dtype=bool) if mask is None else mask
    s = np.where(keep, slack, np.inf)
    k = int(np.argmin(s))
    margin = float(s[k])
    violated = margin <= 0 if strict else margin < -tol
    if not violated:
        return ConditionResult(True, margin)
    h = u[1] - u[0]
    probes = np.array([u[k] - h / 2, u[k], u[k] + h / 2])
    probes = probes[(probes > 0) & (probes < delta)]
    ps = cond(probes)
    j = int(np.argmin(ps))
    w = float(probes[j])
    bad = ps[j] <= 0 if strict else ps[j] < -tol
    if not bad:
        w = float(u[k])
    return ConditionResult(False, min(margin, float(ps[j])), w)


def check_hypotheses(spec: ModelSpec, alpha: float, grid_size: int = DEFAULT_GRID) -> HypothesisReport:
    """Check the structural conditions of the model on a uniform grid of
    ``grid_size`` interior points of (0, delta).

    The u -> 0+ limit needed by the phi(0) > 0 variant is taken at
    ``delta * 1e-8``.
    """
    delta = spec.delta
    if not delta > 0:
        raise DomainError("delta must be positive")
    if grid_size < 64:
        raise DomainError("grid_size must be at least 64")
    if not 0 < alpha < delta:
        raise DomainError(f"alpha={alpha!r} is not in (0, delta)")

    u = interior_grid(delta, grid_size)
    fu = _finite("f", spec.f(u), u)
    gu = _finite("g", spec.g(u), u)
    pu = _finite("phi", spec.phi(u), u)
    # derivatives are only screened here; conditions re-evaluate them
    _finite("f'", spec.f.deriv(u), u)
    _finite("g'", spec.g.deriv(u), u)
    fa = float(spec.f(alpha))
    ga = float(spec.g(alpha))
    lam = spec.lam
    scale = max(1.0, float(np.max(np.abs(fu))), lam * float(np.max(np.abs(gu))))
    tol = 1e-12 * scale * max(1.0, delta)

    # phi(0) = 0 and f(delta) = 0
    phi0 = float(spec.phi(0.0))
    f_delta = float(spec.f(delta))
    con1_margin = -max(abs(phi0), abs(f_delta) / scale)
    con1 = ConditionResult(abs(phi0) <= 1e-12 and abs(f_delta) <= 1e-9 * scale, con1_margin)

    con5 = _pointwise(lambda x: np.minimum(np.minimum(spec.g(x), spec.f(x)), spec.phi(x)),
                      u, None, tol, True, delta)
    con2 = _pointwise(lambda x: spec.g.deriv(x), u, None, tol, False, delta)

    res3 = abs(lam * ga - fa)
    con3 = ConditionResult(res3 <= 1e-8 * scale, -res3)

    away = np.abs(u - alpha) > 1e-6 * alpha
    con4 = _pointwise(lambda x: (alpha - x) * (spec.f(x) - lam * spec.g(x)), u, away, tol, False, delta)
    con6 = _pointwise(lambda x: (alpha - x) * (spec.f(x) - fa), u, away, tol, False, delta)
    theorem5 = _pointwise(lambda x: spec.sigma - spec.f.deriv(x), u, None, tol, True, delta)

    # phi(s)/s must be non-increasing: slack at u_k is ratio(u_k) - ratio(u_{k+1})
    h = u[1] - u[0]

    def ratio_drop(x):
        x = np.asarray(x, dtype=float)
        return spec.phi(x) / x - spec.phi(x + h) / (x + h)

    rtol_phi = 1e-12 * max(1.0, float(np.max(np.abs(pu / u))))
    phi_sub = _pointwise(ratio_drop, u[:-1], None, rtol_phi, False, delta)

    if phi0 > 0:
        f0 = float(spec.f(spec.limit_point()))
        lim = math.inf if not np.isfinite(f0) else f0
        slack = lim - lam * float(spec.g(delta))
        phi_gen = ConditionResult(slack >= 0, slack if np.isfinite(slack) else math.inf)
    else:
        phi_gen = ConditionResult(True, math.inf, applicable=False)

    return HypothesisReport(con1=con1, con5=con5, con2=con2, con3=con3, con4=con4, con6=con6,
                            theorem5=theorem5, phi_sublinear=phi_sub, phi_gen=phi_gen,
                            grid_size=grid_size)
