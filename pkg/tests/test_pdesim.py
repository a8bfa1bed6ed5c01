"""Simulator tests.

Scheme fidelity is checked against inline re-implementations (a scalar
reaction ODE for homogeneous data, a no-history field scheme for zero
delay), conservation against the trapezoid mass functional, and the
long benchmark trajectories against the attractor classifier and the
frozen periods measured during development.
"""

from __future__ import annotations

import math

import numpy as np
import pytest

from memohopf import ModelParams
from memohopf.errors import (
    BlowUpError,
    InvalidStepError,
    TooFewPeaksError,
    WindowTooShortError,
)
from memohopf.pdesim import (
    Grid,
    HistoryBuffer,
    PeriodicMode,
    Steady,
    Trajectory,
    Transition,
    Unclassified,
    classify_attractor,
    default_dt,
    mass,
    mode_amplitudes,
    mode_matrix,
    period_estimate,
    read_binary,
    read_csv,
    simulate,
    write_binary,
    write_csv,
    write_modes_csv,
)

PERIOD_P2 = 19.5990      # mode-1 orbit at d21=3.6, tau=5.3, nx=201
PERIOD_P3 = 7.5724       # mode-2 orbit at d21=6.0, tau=2.0, nx=201


def _params(d21, tau, **kw):
    base = dict(a=1.0, b=0.3, c=0.1, d11=0.6, d22=0.8, ell=2.0)
    base.update(kw)
    return ModelParams(d21=d21, tau=tau, **base)


# ---------------------------------------------------------------- validation

def test_grid_validation():
    with pytest.raises(ValueError):
        Grid(nx=8, ell=2.0)
    with pytest.raises(ValueError):
        Grid(nx=51, ell=-1.0)
    g = Grid(nx=17, ell=2.0)
    assert g.x[0] == 0.0
    assert g.x[-1] == pytest.approx(2.0 * math.pi, abs=1e-15)
    assert g.dx == pytest.approx(2.0 * math.pi / 16, rel=1e-15)


def test_history_buffer():
    f0 = np.full(5, 1.0)
    hb = HistoryBuffer(2, f0)
    assert hb.depth == 3
    hb.push(np.full(5, 2.0))
    hb.push(np.full(5, 3.0))
    assert hb.at_lag(0)[0] == 3.0
    assert hb.at_lag(1)[0] == 2.0
    assert hb.at_lag(2)[0] == 1.0
    # interpolation between the two oldest entries
    assert hb.stage_value(0.25)[0] == pytest.approx(0.75 * 1.0 + 0.25 * 2.0)
    with pytest.raises(IndexError):
        hb.at_lag(3)
    with pytest.raises(ValueError):
        HistoryBuffer(-1, f0)
    hb0 = HistoryBuffer(0, f0)
    assert hb0.stage_value(0.5)[0] == 1.0


def test_default_dt_divides_delay():
    p = _params(3.6, 5.3)
    g = Grid(nx=201, ell=2.0)
    dt = default_dt(p, g)
    bound = 0.4 * g.dx ** 2 / (2.0 * 0.8)
    assert dt <= bound * (1 + 1e-12)
    m = round(5.3 / dt)
    assert m >= 8
    assert m * dt == pytest.approx(5.3, abs=1e-12)
    # zero delay falls back to the plain diffusive bound
    assert default_dt(_params(3.6, 0.0), g) == pytest.approx(bound, rel=1e-15)


def test_invalid_steps():
    g = Grid(nx=51, ell=2.0)
    bound = 0.4 * g.dx ** 2 / (2.0 * 0.8)
    with pytest.raises(InvalidStepError):
        simulate(_params(3.6, 2.0), g, 2.0 * bound, 10.0)
    with pytest.raises(InvalidStepError):
        simulate(_params(3.6, 2.0), g, -0.001, 10.0)
    # m = tau/dt below 8 steps per delay
    with pytest.raises(InvalidStepError):
        simulate(_params(3.6, 0.01), g, 0.0025, 10.0)
    # dt inside the bound but not an exact divisor of tau
    with pytest.raises(InvalidStepError):
        simulate(_params(3.6, 2.0), g, 0.0039, 10.0)
    with pytest.raises(InvalidStepError):
        simulate(_params(3.6, 2.0), g, None, 0.0)
    with pytest.raises(InvalidStepError):
        simulate(_params(3.6, 2.0, ell=3.0), g, None, 10.0)


# ---------------------------------------------------- scheme cross-checks

def _rk4_reaction_ode(u0, v0, p, dt, nsteps):
    a, b, c = float(p.a), float(p.b), float(p.c)

    def f(u, v):
        pred = b * u * v / (1.0 + u)
        return u * (1.0 - u / a) - pred, pred - c * v

    us = np.empty(nsteps + 1)
    vs = np.empty(nsteps + 1)
    us[0], vs[0] = u0, v0
    u, v = u0, v0
    for k in range(nsteps):
        k1u, k1v = f(u, v)
        k2u, k2v = f(u + 0.5 * dt * k1u, v + 0.5 * dt * k1v)
        k3u, k3v = f(u + 0.5 * dt * k2u, v + 0.5 * dt * k2v)
        k4u, k4v = f(u + dt * k3u, v + dt * k3v)
        u = u + dt / 6.0 * (k1u + 2.0 * k2u + 2.0 * k3u + k4u)
        v = v + dt / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v)
        us[k + 1], vs[k + 1] = u, v
    return us, vs


def test_homogeneous_invariance():
    # constant fields keep every spatial term at exactly zero, so the run
    # must reproduce the plain reaction ODE under the same stepper
    p = _params(3.6, 5.3)
    g = Grid(nx=51, ell=2.0)
    traj = simulate(p, g, None, 30.0, (lambda x: 0.7 + 0.0 * x,
                                       lambda x: 2.0 + 0.0 * x))
    spread_u = np.max(np.abs(traj.u - traj.u[:, :1]))
    spread_v = np.max(np.abs(traj.v - traj.v[:, :1]))
    assert spread_u == 0.0
    assert spread_v == 0.0

    dt = traj.meta["dt"]
    nsteps = max(1, math.ceil(30.0 / dt - 1e-9))
    us, vs = _rk4_reaction_ode(0.7, 2.0, p, dt, nsteps)
    steps = np.rint(traj.t / dt).astype(int)
    assert np.max(np.abs(traj.u[:, 0] - us[steps])) < 1e-10
    assert np.max(np.abs(traj.v[:, 0] - vs[steps])) < 1e-10


def _rhs_ref(U, V, UD, p, dx, react=True):
    nx = U.size
    inv_dx = 1.0 / dx
    inv_dx2 = inv_dx * inv_dx
    lap_u = np.empty(nx)
    lap_v = np.empty(nx)
    lap_u[1:-1] = (U[2:] - 2.0 * U[1:-1] + U[:-2]) * inv_dx2
    lap_v[1:-1] = (V[2:] - 2.0 * V[1:-1] + V[:-2]) * inv_dx2
    lap_u[0] = 2.0 * (U[1] - U[0]) * inv_dx2
    lap_u[-1] = 2.0 * (U[-2] - U[-1]) * inv_dx2
    lap_v[0] = 2.0 * (V[1] - V[0]) * inv_dx2
    lap_v[-1] = 2.0 * (V[-2] - V[-1]) * inv_dx2
    if react:
        pred = float(p.b) * U * V / (1.0 + U)
        fval = U * (1.0 - U / float(p.a)) - pred
        gval = pred - float(p.c) * V
    else:
        fval = gval = 0.0
    dU = float(p.d11) * lap_u + fval
    dV = float(p.d22) * lap_v + gval
    d21 = float(p.d21)
    if d21 != 0.0:
        flux = 0.5 * (V[:-1] + V[1:]) * (UD[1:] - UD[:-1]) * inv_dx
        dV[0] -= d21 * 2.0 * flux[0] * inv_dx
        dV[-1] -= d21 * (-2.0 * flux[-1]) * inv_dx
        dV[1:-1] -= d21 * (flux[1:] - flux[:-1]) * inv_dx
    return dU, dV


def test_tau_zero_matches_no_history_scheme():
    # with tau = 0 the delayed field is the current stage field; an inline
    # re-implementation with no history machinery must agree per step
    p = _params(3.6, 0.0)
    g = Grid(nx=31, ell=2.0)
    init = (lambda x: 0.5 + 0.1 * np.cos(x / 2.0),
            lambda x: 2.5 + 0.2 * np.cos(x / 2.0))
    traj = simulate(p, g, None, 2.0, init)

    dt = traj.meta["dt"]
    assert traj.meta["m"] == 0
    u = init[0](g.x).astype(np.float64)
    v = init[1](g.x).astype(np.float64)
    nsteps = max(1, math.ceil(2.0 / dt - 1e-9))
    fields = [(u.copy(), v.copy())]
    for _ in range(nsteps):
        k1u, k1v = _rhs_ref(u, v, u, p, g.dx)
        u2 = u + 0.5 * dt * k1u
        v2 = v + 0.5 * dt * k1v
        k2u, k2v = _rhs_ref(u2, v2, u2, p, g.dx)
        u3 = u + 0.5 * dt * k2u
        v3 = v + 0.5 * dt * k2v
        k3u, k3v = _rhs_ref(u3, v3, u3, p, g.dx)
        u4 = u + dt * k3u
        v4 = v + dt * k3v
        k4u, k4v = _rhs_ref(u4, v4, u4, p, g.dx)
        u = u + dt / 6.0 * (k1u + 2.0 * k2u + 2.0 * k3u + k4u)
        v = v + dt / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v)
        fields.append((u.copy(), v.copy()))

    steps = np.rint(traj.t / dt).astype(int)
    for row, k in enumerate(steps):
        uref, vref = fields[k]
        tol = 1e-12 * max(1, k)
        assert np.max(np.abs(traj.u[row] - uref)) < tol
        assert np.max(np.abs(traj.v[row] - vref)) < tol


def test_mass_conserved_pure_diffusion():
    p = _params(0.0, 0.0)
    g = Grid(nx=51, ell=2.0)
    init = (lambda x: 0.5 + 0.2 * np.cos(x / 2.0),
            lambda x: 2.5 + 0.3 * np.cos(x))
    traj = simulate(p, g, None, 20.0, init, include_reaction=False)
    mu = np.array([mass(traj.u[k], g) for k in range(traj.t.size)])
    mv = np.array([mass(traj.v[k], g) for k in range(traj.t.size)])
    assert np.max(np.abs(mu - mu[0])) < 1e-11
    assert np.max(np.abs(mv - mv[0])) < 1e-11


def test_mass_conserved_memory_flux():
    # the face-flux memory discretization telescopes: v mass is conserved
    # exactly even with the cross term active
    p = _params(3.6, 1.0)
    g = Grid(nx=51, ell=2.0)
    init = (lambda x: 0.5 + 0.2 * np.cos(x / 2.0),
            lambda x: 2.5 + 0.3 * np.cos(x))
    traj = simulate(p, g, None, 20.0, init, include_reaction=False,
                    flux_form="conservative")
    mu = np.array([mass(traj.u[k], g) for k in range(traj.t.size)])
    mv = np.array([mass(traj.v[k], g) for k in range(traj.t.size)])
    assert np.max(np.abs(mu - mu[0])) < 1e-11
    assert np.max(np.abs(mv - mv[0])) < 1e-11


def test_flux_forms_agree():
    p = _params(3.6, 5.3)
    g = Grid(nx=201, ell=2.0)
    init = (lambda x: 0.2 + 0.1 * np.cos(x / 2.0),
            lambda x: 2.5 + 0.1 * np.cos(x / 2.0))
    ta = simulate(p, g, None, 50.0, init, flux_form="conservative")
    tb = simulate(p, g, None, 50.0, init, flux_form="expanded")
    assert np.max(np.abs(ta.u - tb.u)) < 1e-4
    assert np.max(np.abs(ta.v - tb.v)) < 1e-4


def test_blow_up_detected():
    p = _params(200.0, 2.0)
    g = Grid(nx=51, ell=2.0)
    init = (lambda x: 0.5 + 0.2 * np.cos(x / 2.0),
            lambda x: 2.5 + 0.5 * np.cos(x / 2.0))
    with pytest.raises(BlowUpError) as exc:
        simulate(p, g, None, 400.0, init)
    assert 0.0 < exc.value.t < 400.0


# ------------------------------------------------------------- diagnostics

def test_meta_and_sampling():
    p = _params(3.6, 0.5)
    g = Grid(nx=21, ell=2.0)
    traj = simulate(p, g, None, 2.0, None, sample_dt=0.25, n_max=4)
    assert traj.t[0] == 0.0
    assert traj.t[-1] == pytest.approx(2.0, abs=0.05)
    assert np.all(np.diff(traj.t) > 0)
    assert traj.modes_u.shape == (traj.t.size, 5)
    assert np.array_equal(traj.x, g.x)
    for key in ("params", "nx", "dx", "dt", "m", "sample_stride",
                "flux_form", "include_reaction", "history_init", "n_max"):
        assert key in traj.meta
    assert traj.meta["history_init"] == "constant"
    # equilibrium start stays put
    eq_dev = np.max(np.abs(traj.u - traj.u[0, 0]))
    assert eq_dev < 1e-12


def test_mode_projection_recovers_coefficients():
    g = Grid(nx=51, ell=2.0)
    lp = 2.0 * math.pi
    fld = (0.3 / math.sqrt(lp)
           + 0.2 * math.sqrt(2.0 / lp) * np.cos(3 * g.x / 2.0))
    c = mode_amplitudes(fld, g, 8)
    expect = np.zeros(9)
    expect[0] = 0.3
    expect[3] = 0.2
    assert np.max(np.abs(c - expect)) < 1e-12
    assert mode_matrix(g, 8).shape == (9, 51)
    assert mass(np.ones(51), g) == pytest.approx(lp, rel=1e-14)


def test_attractor_verdicts():
    assert str(Steady()) == "Steady"
    assert str(PeriodicMode(2)) == "PeriodicMode(2)"
    assert str(Transition(2, 1)) == "Transition(2, 1)"
    assert str(Unclassified()) == "Unclassified"
    assert PeriodicMode(2) == PeriodicMode(2)
    assert PeriodicMode(2) != PeriodicMode(1)
    assert Steady() != Unclassified()


def test_benchmark_steady(run_p1):
    traj = run_p1["traj"]
    assert classify_attractor(traj) == Steady()
    assert np.max(np.abs(traj.u[-1] - 0.5)) < 1e-6
    assert np.max(np.abs(traj.v[-1] - 2.5)) < 1e-6


def test_benchmark_mode1(run_p2):
    traj = run_p2["traj"]
    assert classify_attractor(traj) == PeriodicMode(1)
    period = period_estimate(traj, 1, (1000.0, 2000.0))
    assert period == pytest.approx(PERIOD_P2, rel=1e-3)
    # default window gives the same answer
    assert period_estimate(traj, 1) == pytest.approx(period, rel=1e-3)


def test_benchmark_mode2(run_p3):
    traj = run_p3["traj"]
    assert classify_attractor(traj) == PeriodicMode(2)
    period = period_estimate(traj, 2, (1000.0, 2000.0))
    assert period == pytest.approx(PERIOD_P3, rel=1e-3)


def test_benchmark_even_subspace(run_p4):
    # the pure even-mode seed keeps the dynamics inside the even subspace:
    # mode 1 never grows beyond roundoff, and the mode-2 orbit persists
    traj = run_p4["traj"]
    assert classify_attractor(traj) == PeriodicMode(2)
    assert np.max(np.abs(traj.modes_u[:, 1])) < 1e-8


def test_transition_classified(run_transition):
    traj = run_transition["traj"]
    verdict = classify_attractor(traj)
    assert verdict == Transition(2, 1)
    t = traj.t
    span = t[-1] - t[0]
    first = t <= t[0] + span / 3
    last = t >= t[-1] - span / 3
    ptp_first = np.ptp(traj.modes_u[first], axis=0)
    ptp_last = np.ptp(traj.modes_u[last], axis=0)
    assert np.argmax(ptp_first[1:]) + 1 == 2
    assert np.argmax(ptp_last[1:]) + 1 == 1


def test_period_stable_across_windows(run_p2):
    traj = run_p2["traj"]
    pa = period_estimate(traj, 1, (1000.0, 1500.0))
    pb = period_estimate(traj, 1, (1500.0, 2000.0))
    assert abs(pa - pb) / pb < 0.02


def test_grid_convergence_steady_state(run_p1):
    p = _params(4.0, 2.0)
    coarse = simulate(p, Grid(nx=101, ell=2.0), None, 2000.0,
                      (lambda x: 0.2 + 0.1 * np.cos(x / 2.0),
                       lambda x: 2.5 + 0.1 * np.cos(x / 2.0)))
    fine = run_p1["traj"]
    # the coarse nodes coincide with every second fine node
    assert np.max(np.abs(coarse.u[-1] - fine.u[-1][::2])) < 1e-3
    assert np.max(np.abs(coarse.v[-1] - fine.v[-1][::2])) < 1e-3


def test_grid_convergence_period(run_p2):
    p = _params(3.6, 5.3)
    coarse = simulate(p, Grid(nx=101, ell=2.0), None, 2000.0,
                      (lambda x: 0.2 + 0.1 * np.cos(x / 2.0),
                       lambda x: 2.5 + 0.1 * np.cos(x / 2.0)))
    pc = period_estimate(coarse, 1, (1000.0, 2000.0))
    pf = period_estimate(run_p2["traj"], 1, (1000.0, 2000.0))
    assert abs(pc - pf) / pf < 0.02


STABLE_POINTS = [(1.5, 3.0), (2.5, 2.0), (3.0, 2.0), (4.5, 1.5), (6.0, 1.0)]
UNSTABLE_POINTS = [(3.0, 9.3, 1), (3.6, 6.0, 1), (4.5, 4.0, 2),
                   (5.2, 3.0, 2), (6.0, 2.5, 2)]


def test_stability_region_consistency(exact_params):
    # simulated verdicts must match the linear stability chart: points with
    # tau below the critical delay settle, points above it oscillate
    from memohopf.errors import StableForAllTauError
    from memohopf.model import linearize
    from memohopf.spectral import critical_delay

    lin = linearize(exact_params)
    g = Grid(nx=51, ell=2.0)
    init = (lambda x: 0.5 + 0.02 * np.cos(x / 2.0) + 0.02 * np.cos(x),
            lambda x: 2.5 + 0.02 * np.cos(x / 2.0) + 0.02 * np.cos(x))

    for d21, tau in STABLE_POINTS:
        try:
            tau_star, _ = critical_delay(lin, d21)
            assert tau < tau_star
        except StableForAllTauError:
            pass
        traj = simulate(_params(d21, tau), g, None, 1200.0, init)
        assert classify_attractor(traj) == Steady(), (d21, tau)

    for d21, tau, n_expect in UNSTABLE_POINTS:
        tau_star, _ = critical_delay(lin, d21)
        assert tau > tau_star
        traj = simulate(_params(d21, tau), g, None, 700.0, init)
        assert classify_attractor(traj) == PeriodicMode(n_expect), (d21, tau)


def test_window_errors(run_p2):
    traj = run_p2["traj"]
    with pytest.raises(WindowTooShortError):
        classify_attractor(traj, window=(1900.0, 2100.0))
    with pytest.raises(WindowTooShortError):
        classify_attractor(traj, window=(1900.0, 1950.0))
    with pytest.raises(WindowTooShortError):
        classify_attractor(traj, window=(1000.0, 1000.5))
    # a single bump has too few peaks for a period estimate
    t = np.linspace(0.0, 100.0, 201)
    cu = np.zeros((201, 3))
    cu[:, 0] = 1.0
    cu[:, 1] = np.exp(-((t - 30.0) / 5.0) ** 2)
    bump = Trajectory(t=t, x=np.zeros(16), u=np.zeros((201, 16)),
                      v=np.zeros((201, 16)), modes_u=cu, modes_v=cu,
                      n_max=2)
    with pytest.raises(TooFewPeaksError):
        period_estimate(bump, 1, (0.0, 100.0))


def test_competing_modes_unclassified():
    t = np.linspace(0.0, 600.0, 2401)
    cu = np.zeros((t.size, 3))
    cu[:, 0] = 1.0
    cu[:, 1] = 0.3 * np.sin(2 * np.pi * t / 20.0)
    cu[:, 2] = 0.2 * np.sin(2 * np.pi * t / 17.0)
    traj = Trajectory(t=t, x=np.zeros(16), u=np.zeros((t.size, 16)),
                      v=np.zeros((t.size, 16)), modes_u=cu, modes_v=cu,
                      n_max=2)
    assert classify_attractor(traj) == Unclassified()


# ------------------------------------------------------------ file formats

@pytest.fixture(scope="module")
def tiny_traj():
    p = _params(3.6, 0.5)
    g = Grid(nx=16, ell=2.0)
    return simulate(p, g, None, 2.0, (lambda x: 0.5 + 0.05 * np.cos(x / 2.0),
                                      lambda x: 2.5 + 0.05 * np.cos(x / 2.0)),
                    sample_dt=0.5, n_max=3)


def test_csv_roundtrip(tiny_traj, tmp_path):
    path = tmp_path / "traj.csv"
    write_csv(tiny_traj, path)
    t, x, u, v = read_csv(path)
    assert np.array_equal(t, tiny_traj.t)
    assert np.array_equal(x, tiny_traj.x)
    assert np.array_equal(u, tiny_traj.u)
    assert np.array_equal(v, tiny_traj.v)


def test_csv_rejects_ragged_input(tiny_traj, tmp_path):
    path = tmp_path / "bad.csv"
    write_csv(tiny_traj, path)
    lines = path.read_text().splitlines()
    path.write_text("\n".join(lines[:-1]) + "\n")
    with pytest.raises(ValueError):
        read_csv(path)


def test_binary_roundtrip(tiny_traj, tmp_path):
    path = tmp_path / "traj.bin"
    write_binary(tiny_traj, path)
    back = read_binary(path)
    assert np.array_equal(back.t, tiny_traj.t)
    assert np.array_equal(back.x, tiny_traj.x)
    assert np.array_equal(back.u, tiny_traj.u)
    assert np.array_equal(back.v, tiny_traj.v)
    assert np.array_equal(back.modes_u, tiny_traj.modes_u)
    assert np.array_equal(back.modes_v, tiny_traj.modes_v)
    assert back.n_max == tiny_traj.n_max
    assert back.meta == tiny_traj.meta


def test_binary_rejects_bad_magic(tmp_path):
    path = tmp_path / "junk.bin"
    path.write_bytes(b"NOTMAG" + b"\x00" * 64)
    with pytest.raises(ValueError):
        read_binary(path)


def test_modes_csv(tiny_traj, tmp_path):
    path = tmp_path / "modes.csv"
    write_modes_csv(tiny_traj, path)
    data = np.loadtxt(path, delimiter=",", skiprows=1)
    nn = tiny_traj.n_max + 1
    assert data.shape == (tiny_traj.t.size * nn, 4)
    cu = data[:, 2].reshape(tiny_traj.t.size, nn)
    assert np.array_equal(cu, tiny_traj.modes_u)


def test_march_kernel_is_compiled():
    numba = pytest.importorskip("numba")
    from memohopf.pdesim import _march, _rhs

    assert isinstance(_march, numba.core.registry.CPUDispatcher)
    assert isinstance(_rhs, numba.core.registry.CPUDispatcher)
