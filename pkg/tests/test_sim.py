import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.integrate import solve_ivp

from rdstab import (BlowupError, Constant, DomainError, Field, Grid1D, Interval, ModelSpec, ScalarFn,
                    Scenario, SinePerturbed, SpectrumConfig, classify_pde_stability, find_equilibrium,
                    integrate_ode, integrate_pde_1d, sweep)
from rdstab.model import constant
from rdstab.sim import (converged_at, mode_amplitude, neumann_laplacian, rectangle_violation,
                        reaction_lipschitz)


# kinetics --------------------------------------------------------------------

def test_ode_reference_runs(le, le_eq, fhn, fhn_eq):
    traj = integrate_ode(le, (4.0, 3.0), 400.0, 1.0, eq=le_eq)
    assert traj.dist_sup[-1] < 1e-2
    assert traj.u[-1] == pytest.approx(1.118, abs=1e-2) and traj.v[-1] == pytest.approx(2.2499, abs=1e-2)
    traj = integrate_ode(fhn, (0.5, 1.2), 600.0, 1.0, eq=fhn_eq)
    assert traj.dist_sup[-1] < 1e-2
    assert converged_at(traj) is not None


def test_ode_matches_scipy(le):
    def rhs(_, y):
        return le.reaction(y[0], y[1])
    ref = solve_ivp(rhs, (0, 5), [4.0, 3.0], method="DOP853", rtol=1e-12, atol=1e-12,
                    t_eval=np.arange(0, 5.5, 0.5))
    traj = integrate_ode(le, (4.0, 3.0), 5.0, 0.5)
    np.testing.assert_allclose(traj.times, ref.t, atol=1e-12)
    np.testing.assert_allclose(traj.u, ref.y[0], rtol=1e-7, atol=1e-9)
    np.testing.assert_allclose(traj.v, ref.y[1], rtol=1e-7, atol=1e-9)


def test_output_grid_ends_at_t_end(le):
    traj = integrate_ode(le, (4.0, 3.0), 2.5, 1.0)
    np.testing.assert_allclose(traj.times, [0, 1, 2, 2.5])


def test_ode_validation(le):
    with pytest.raises(DomainError):
        integrate_ode(le, (0.0, 1.0), 1.0, 0.1)
    with pytest.raises(DomainError):
        integrate_ode(le, (1.0, 1.0), 0.0, 0.1)
    with pytest.raises(DomainError):
        integrate_ode(le, (1.0, 1.0), 1.0, -0.1)


def _runaway():
    # u' = u - 1 - 0.01 v grows like e^t from u0 = 3 and has no equilibrium in (0, 1)
    f = ScalarFn(lambda u: u - 1.0, lambda u: np.ones_like(np.asarray(u, float)))
    return ModelSpec(f=f, g=constant(1.0), phi=constant(1.0), d1=1, d2=1, lam=0.01, sigma=1, delta=1.0)


def test_blowup_detected():
    with pytest.raises(BlowupError):
        integrate_ode(_runaway(), (3.0, 1.0), 40.0, 1.0)
    with pytest.raises(BlowupError):
        integrate_pde_1d(_runaway(), Grid1D(1.0, 16), Constant(3.0, 1.0), 40.0, 1.0)


# spatial operator -------------------------------------------------------------

@pytest.mark.parametrize("k", [0, 1, 3, 7])
def test_laplacian_cosine_eigenvectors(k):
    grid = Grid1D(7.0, 41)
    w = np.cos(k * np.pi * grid.nodes / grid.length)
    exact = (2 * np.cos(k * np.pi * grid.dx / grid.length) - 2) / grid.dx ** 2
    np.testing.assert_allclose(neumann_laplacian(w, grid.dx), exact * w, atol=1e-10)


def test_mode_amplitude_recovers_coefficients():
    grid = Grid1D(20.0, 64)
    x = grid.nodes
    field = 0.3 * np.cos(2 * np.pi * x / 20) - 0.7 * np.cos(5 * np.pi * x / 20) + 1.5
    assert mode_amplitude(field, grid, 5) == pytest.approx(-0.7, abs=1e-12)
    assert mode_amplitude(field, grid, 2) == pytest.approx(0.3, abs=1e-12)
    assert mode_amplitude(field, grid, 0) == pytest.approx(1.5, abs=1e-12)


def test_grid_and_initial_data_validation(le):
    with pytest.raises(DomainError):
        Grid1D(0.0, 10)
    with pytest.raises(DomainError):
        Grid1D(1.0, 4)
    g = Grid1D(1.0, 16)
    with pytest.raises(DomainError):
        integrate_pde_1d(le, g, Field(np.ones(15), np.ones(15)), 1.0, 0.5)
    with pytest.raises(DomainError):
        integrate_pde_1d(le, g, Constant(-1.0, 1.0), 1.0, 0.5)
    with pytest.raises(DomainError):
        integrate_pde_1d(le, g, Constant(1.0, 1.0), 1.0, 0.5, lipschitz="bogus")


# diffusive system ----------------------------------------------------------

def test_constant_equilibrium_stays_put(le, le_eq):
    traj = integrate_pde_1d(le, Grid1D(100.0, 64), Constant(le_eq.u_star, le_eq.v_star), 5.0, 0.5, le_eq)
    assert np.max(np.abs(traj.u - le_eq.u_star)) < 1e-8
    assert np.max(np.abs(traj.v - le_eq.v_star)) < 1e-8


def test_zero_diffusion_matches_kinetics(le):
    spec = le.replace(d1=1e-12, d2=1e-12)
    # a finer reaction step brings the explicit scheme's error under the tolerance
    pde = integrate_pde_1d(spec, Grid1D(10.0, 16), Constant(4.0, 3.0), 10.0, 0.5, react_safety=0.02)
    ode = integrate_ode(spec, (4.0, 3.0), 10.0, 0.5, rtol=1e-10, atol=1e-12)
    np.testing.assert_allclose(pde.u, np.repeat(ode.u[:, None], 16, axis=1), atol=1e-6)
    np.testing.assert_allclose(pde.v, np.repeat(ode.v[:, None], 16, axis=1), atol=1e-6)


def test_pure_diffusion_conserves_mass(le):
    grid = Grid1D(10.0, 48)
    x = grid.nodes
    init = Field(2 + np.cos(x) + 0.3 * x / 10, 1 + 0.5 * np.sin(2 * x) ** 2)
    traj = integrate_pde_1d(le, grid, init, 5.0, 0.5, reaction=False)
    w = np.full(grid.n, grid.dx)
    w[0] = w[-1] = grid.dx / 2
    mass_u = traj.u @ w
    mass_v = traj.v @ w
    np.testing.assert_allclose(mass_u, mass_u[0], rtol=1e-10)
    np.testing.assert_allclose(mass_v, mass_v[0], rtol=1e-10)
    # and the profile flattens
    assert np.ptp(traj.u[-1]) < np.ptp(traj.u[0])


def test_rectangle_lipschitz_mode_agrees(fhn, fhn_eq):
    grid = Grid1D(100.0, 32)
    init = SinePerturbed(0.5, 1.2)
    a = integrate_pde_1d(fhn, grid, init, 20.0, 5.0, fhn_eq)
    b = integrate_pde_1d(fhn, grid, init, 20.0, 5.0, fhn_eq, lipschitz="rectangle")
    np.testing.assert_allclose(a.u, b.u, atol=1e-6)
    assert reaction_lipschitz(fhn) > 0


def test_rectangle_violation_function(le):
    r2 = float(le.g(le.delta))
    assert rectangle_violation(le, 1.0, 1.0) == 0
    assert rectangle_violation(le, -0.5, 1.0) == pytest.approx(0.5)
    assert rectangle_violation(le, 1.0, r2 + 2) == pytest.approx(2.0)
    assert rectangle_violation(le, np.array([[1.0, le.delta + 1]]), np.array([[1.0, 1.0]]))[0] == pytest.approx(1.0)


@given(seed=st.integers(0, 2 ** 32 - 1))
@settings(max_examples=5, deadline=None)
def test_random_fields_stay_in_rectangle(fhn, seed):
    rng = np.random.default_rng(seed)
    grid = Grid1D(50.0, 32)
    x = grid.nodes / grid.length
    r2 = float(fhn.g(fhn.delta))

    def smooth(lo, hi):
        s = sum(rng.normal() * np.cos(k * np.pi * x) for k in range(1, 5))
        s = (s - s.min()) / max(np.ptp(s), 1e-12)
        return lo + (hi - lo) * s

    init = Field(smooth(0.05 * fhn.delta, 0.95 * fhn.delta), smooth(0.05 * r2, 0.95 * r2))
    traj = integrate_pde_1d(fhn, grid, init, 10.0, 0.5)
    assert traj.rect_violation.max() <= 1e-6
    assert traj.in_rect.all()


# sweeps --------------------------------------------------------------------

def _perturbed_equilibrium(spec, eq, grid):
    x = grid.nodes
    return Field(eq.u_star + 1e-3 * np.cos(5 * np.pi * x / grid.length), np.full(grid.n, eq.v_star))


def test_sweep_straddling_critical_ratio(turing_spec):
    eq = find_equilibrium(turing_spec)
    d_crit = classify_pde_stability(turing_spec, eq, SpectrumConfig(Interval(20.0), 200)).d_crit
    specs = [turing_spec.replace(d2=f * d_crit * turing_spec.sigma) for f in (0.5, 2.0)]
    sc = Scenario(Grid1D(20.0, 48), _perturbed_equilibrium, 12.0, 0.5)
    stable, unstable = sweep(specs, sc, threads=2)
    assert stable.verdict == "StableCase2" and unstable.verdict == "Unstable"
    assert stable.final_distance < stable.initial_distance
    assert unstable.growth >= 10
    assert stable.consistent and unstable.consistent


def test_sweep_single_and_empty(fhn):
    sc = Scenario(Grid1D(50.0, 24), SinePerturbed(0.5, 1.2), 5.0, 1.0)
    (one,) = sweep([fhn], sc)
    direct = integrate_pde_1d(fhn, sc.grid, sc.init, 5.0, 1.0)
    assert one.status == "ok"
    assert one.final_distance == direct.dist_sup[-1]
    with pytest.raises(DomainError):
        sweep([], sc)


def test_sweep_records_failures_without_aborting(fhn):
    sc = Scenario(Grid1D(1.0, 16), Constant(0.5, 0.5), 2.0, 1.0)
    bad, good = sweep([_runaway(), fhn], sc, threads=1)
    assert bad.status.startswith("RootError")
    assert good.status == "ok"


def test_sweep_thread_count_does_not_change_results(fhn, le, monkeypatch):
    sc = Scenario(Grid1D(30.0, 24), SinePerturbed(0.5, 1.2), 3.0, 1.0)
    monkeypatch.setenv("RDSTAB_THREADS", "1")
    a = sweep([fhn, fhn.replace(d2=2.0)], sc)
    b = sweep([fhn, fhn.replace(d2=2.0)], sc, threads=2)
    assert [s.final_distance for s in a] == [s.final_distance for s in b]
    assert math.isfinite(a[0].final_distance)
