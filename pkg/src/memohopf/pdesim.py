"""Method-of-lines simulator for the delayed cross-diffusion system.

Space is discretized on a uniform grid over [0, ell*pi] with mirror-ghost
nodes enforcing the no-flux boundary, the delayed prey gradient is carried
in a ring buffer of exactly m+1 stored fields with dt = tau/m, and time
stepping is classical RK4 with linear interpolation of the delayed field at
the half steps.  The memory transport term is discretized in conservative
face-flux form by default,

    flux_{i+1/2} = d21 * (v_i + v_{i+1})/2 * (u^d_{i+1} - u^d_i)/dx,

with mirrored wall fluxes, which makes the trapezoid mass functional of v
telescope exactly when the reaction is switched off; the expanded
product-rule form is available for comparison.

Diagnostics project each sample onto the no-flux cosine basis, classify the
long-time behavior (steady, single-mode periodic, mode transition) and
estimate oscillation periods from refined peak positions.
"""

from __future__ import annotations

import json
import math
import struct
from dataclasses import dataclass, field

import numpy as np
from scipy.signal import find_peaks

from .errors import (
    BlowUpError,
    InvalidStepError,
    TooFewPeaksError,
    WindowTooShortError,
)
from .model import ModelParams, positive_equilibrium

try:
    from numba import njit
except ImportError:  # pragma: no cover - exercised only without numba
    def njit(*args, **kwargs):
        if args and callable(args[0]):
            return args[0]

        def wrap(fun):
            return fun
        return wrap

__all__ = [
    "Grid",
    "HistoryBuffer",
    "Trajectory",
    "Attractor",
    "Steady",
    "PeriodicMode",
    "Transition",
    "Unclassified",
    "default_dt",
    "simulate",
    "mode_amplitudes",
    "mode_matrix",
    "mass",
    "classify_attractor",
    "period_estimate",
    "write_csv",
    "read_csv",
    "write_modes_csv",
    "write_binary",
    "read_binary",
]

DEFAULT_NX = 201
DEFAULT_SAMPLE_DT = 0.25
DEFAULT_N_MAX = 8
# classification thresholds; tunable both here and per call
STEADY_TOL = 1e-4
PEAK_VARIATION_TOL = 0.05
DOMINANCE_RATIO = 3.0
OSC_FLOOR = 1e-3
MIN_PERIODS_IN_WINDOW = 5

_BLOWUP_BOUND = 1e6
_MAGIC = b"MHTRJ1"


@dataclass(frozen=True)
class Grid:
    """Uniform grid of nx nodes on [0, ell*pi], including both endpoints."""

    nx: int
    ell: float

    def __post_init__(self):
        if self.nx < 16:
            raise ValueError(f"nx must be >= 16, got {self.nx}")
        if not self.ell > 0:
            raise ValueError(f"ell must be positive, got {self.ell}")

    @property
    def dx(self) -> float:
        return self.ell * math.pi / (self.nx - 1)

    @property
    def x(self) -> np.ndarray:
        return np.linspace(0.0, self.ell * math.pi, self.nx)


class HistoryBuffer:
    """Ring of m+1 stored u-fields giving exact lag lookups j*dt, j = 0..m.

    Slot ``pos`` holds the newest field; ``push`` advances the ring and
    overwrites the oldest entry.  ``stage_value(c)`` returns the delayed
    field at lag tau - c*dt by linear interpolation between the two oldest
    relevant entries, which is what the RK4 half steps consume.
    """

    def __init__(self, m: int, init_field):
        if m < 0:
            raise ValueError("m must be >= 0")
        self.m = int(m)
        base = np.array(init_field, dtype=np.float64, copy=True)
        self.ring = np.tile(base, (self.m + 1, 1))
        self.pos = 0

    @property
    def depth(self) -> int:
        return self.m + 1

    def push(self, fld) -> None:
        self.pos = (self.pos + 1) % (self.m + 1)
        self.ring[self.pos, :] = fld

    def at_lag(self, j: int) -> np.ndarray:
        if not 0 <= j <= self.m:
            raise IndexError(f"lag {j} outside stored range 0..{self.m}")
        return self.ring[(self.pos - j) % (self.m + 1)]

    def stage_value(self, c: float) -> np.ndarray:
        if self.m == 0:
            return self.at_lag(0)
        return (1.0 - c) * self.at_lag(self.m) + c * self.at_lag(self.m - 1)


@dataclass
class Trajectory:
    """Sampled solution with cosine-mode diagnostics and provenance metadata.

    modes_u[k, n] and modes_v[k, n] are the amplitudes of cos(n x/ell) in
    the sample at t[k], n = 0..n_max, under the orthonormal no-flux basis.
    """

    t: np.ndarray
    x: np.ndarray
    u: np.ndarray
    v: np.ndarray
    modes_u: np.ndarray
    modes_v: np.ndarray
    n_max: int
    meta: dict = field(default_factory=dict)


def Steady() -> "Attractor":
    return Attractor("steady")


def PeriodicMode(n: int) -> "Attractor":
    return Attractor("periodic", mode=int(n))


def Transition(n_from: int, n_to: int) -> "Attractor":
    return Attractor("transition", mode_from=int(n_from), mode_to=int(n_to))


def Unclassified() -> "Attractor":
    return Attractor("unclassified")


@dataclass(frozen=True)
class Attractor:
    """Classification verdict; compare against Steady(), PeriodicMode(n),
    Transition(n_from, n_to) or Unclassified()."""

    kind: str
    mode: int | None = None
    mode_from: int | None = None
    mode_to: int | None = None

    def __str__(self):
        if self.kind == "periodic":
            return f"PeriodicMode({self.mode})"
        if self.kind == "transition":
            return f"Transition({self.mode_from}, {self.mode_to})"
        return self.kind.capitalize()


@njit(cache=True, fastmath=False)
def _rhs(U, V, UD, dU, dV, flux, dx, d11, d22, d21, ra, rb, rc, react, conservative):
    nx = U.shape[0]
    inv_dx = 1.0 / dx
    inv_dx2 = inv_dx * inv_dx
    for i in range(nx):
        if i == 0:
            lap_u = 2.0 * (U[1] - U[0]) * inv_dx2
            lap_v = 2.0 * (V[1] - V[0]) * inv_dx2
        elif i == nx - 1:
            lap_u = 2.0 * (U[nx - 2] - U[nx - 1]) * inv_dx2
            lap_v = 2.0 * (V[nx - 2] - V[nx - 1]) * inv_dx2
        else:
            lap_u = (U[i + 1] - 2.0 * U[i] + U[i - 1]) * inv_dx2
            lap_v = (V[i + 1] - 2.0 * V[i] + V[i - 1]) * inv_dx2
        fval = 0.0
        gval = 0.0
        if react:
            pred = rb * U[i] * V[i] / (1.0 + U[i])
            fval = U[i] * (1.0 - U[i] / ra) - pred
            gval = pred - rc * V[i]
        dU[i] = d11 * lap_u + fval
        dV[i] = d22 * lap_v + gval
    if d21 != 0.0:
        if conservative:
            for i in range(nx - 1):
                flux[i] = 0.5 * (V[i] + V[i + 1]) * (UD[i + 1] - UD[i]) * inv_dx
            # mirror ghosts reflect the wall-adjacent fluxes
            dV[0] -= d21 * 2.0 * flux[0] * inv_dx
            dV[nx - 1] -= d21 * (-2.0 * flux[nx - 2]) * inv_dx
            for i in range(1, nx - 1):
                dV[i] -= d21 * (flux[i] - flux[i - 1]) * inv_dx
        else:
            for i in range(nx):
                if i == 0:
                    div = V[0] * 2.0 * (UD[1] - UD[0]) * inv_dx2
                elif i == nx - 1:
                    div = V[nx - 1] * 2.0 * (UD[nx - 2] - UD[nx - 1]) * inv_dx2
                else:
                    vx = 0.5 * (V[i + 1] - V[i - 1]) * inv_dx
                    udx = 0.5 * (UD[i + 1] - UD[i - 1]) * inv_dx
                    udxx = (UD[i + 1] - 2.0 * UD[i] + UD[i - 1]) * inv_dx2
                    div = vx * udx + V[i] * udxx
                dV[i] -= d21 * div


@njit(cache=True, fastmath=False)
def _march(u, v, hist, pos0, m, nsteps, dt, dx, d11, d22, d21, ra, rb, rc,
           react, conservative, sample_stride, out_u, out_v, out_step):
    nx = u.shape[0]
    ring = m + 1
    pos = pos0
    k1u = np.empty(nx)
    k1v = np.empty(nx)
    k2u = np.empty(nx)
    k2v = np.empty(nx)
    k3u = np.empty(nx)
    k3v = np.empty(nx)
    k4u = np.empty(nx)
    k4v = np.empty(nx)
    ut = np.empty(nx)
    vt = np.empty(nx)
    ud = np.empty(nx)
    flux = np.empty(nx - 1)
    row = 1
    status = 0
    fail_step = 0
    for step in range(1, nsteps + 1):
        base = (pos - m) % ring
        nxt = (pos - m + 1) % ring
        # stage 1, t
        if m > 0:
            for i in range(nx):
                ud[i] = hist[base, i]
        else:
            for i in range(nx):
                ud[i] = u[i]
        _rhs(u, v, ud, k1u, k1v, flux, dx, d11, d22, d21, ra, rb, rc, react, conservative)
        # stage 2, t + dt/2
        for i in range(nx):
            ut[i] = u[i] + 0.5 * dt * k1u[i]
            vt[i] = v[i] + 0.5 * dt * k1v[i]
        if m > 0:
            for i in range(nx):
                ud[i] = 0.5 * (hist[base, i] + hist[nxt, i])
        else:
            for i in range(nx):
                ud[i] = ut[i]
        _rhs(ut, vt, ud, k2u, k2v, flux, dx, d11, d22, d21, ra, rb, rc, react, conservative)
        # stage 3, t + dt/2, same delayed field as stage 2 when m > 0
        for i in range(nx):
            ut[i] = u[i] + 0.5 * dt * k2u[i]
            vt[i] = v[i] + 0.5 * dt * k2v[i]
        if m == 0:
            for i in range(nx):
                ud[i] = ut[i]
        _rhs(ut, vt, ud, k3u, k3v, flux, dx, d11, d22, d21, ra, rb, rc, react, conservative)
        # stage 4, t + dt
        for i in range(nx):
            ut[i] = u[i] + dt * k3u[i]
            vt[i] = v[i] + dt * k3v[i]
        if m > 0:
            for i in range(nx):
                ud[i] = hist[nxt, i]
        else:
            for i in range(nx):
                ud[i] = ut[i]
        _rhs(ut, vt, ud, k4u, k4v, flux, dx, d11, d22, d21, ra, rb, rc, react, conservative)
        bad = False
        for i in range(nx):
            u[i] = u[i] + dt / 6.0 * (k1u[i] + 2.0 * k2u[i] + 2.0 * k3u[i] + k4u[i])
            v[i] = v[i] + dt / 6.0 * (k1v[i] + 2.0 * k2v[i] + 2.0 * k3v[i] + k4v[i])
            if not (abs(u[i]) <= _BLOWUP_BOUND and abs(v[i]) <= _BLOWUP_BOUND):
                bad = True
        pos = (pos + 1) % ring
        for i in range(nx):
            hist[pos, i] = u[i]
        if bad:
            status = 1
            fail_step = step
            break
        if step % sample_stride == 0 or step == nsteps:
            for i in range(nx):
                out_u[row, i] = u[i]
                out_v[row, i] = v[i]
            out_step[row] = step
            row += 1
    return status, fail_step, pos, row


def default_dt(params: ModelParams, grid: Grid) -> float:
    """Largest admissible step: the diffusive bound 0.4 dx^2 / (2 max(d11, d22)),
    rounded down to an exact divisor tau/m of the delay (m >= 8)."""
    bound = 0.4 * grid.dx ** 2 / (2.0 * max(float(params.d11), float(params.d22)))
    tau = float(params.tau)
    if tau == 0.0:
        return bound
    m = max(8, math.ceil(tau / bound - 1e-12))
    return tau / m


def _initial_fields(params, grid, init):
    u_eq, v_eq = positive_equilibrium(params)
    if init is None:
        u0 = np.full(grid.nx, float(u_eq))
        v0 = np.full(grid.nx, float(v_eq))
        return u0, v0
    fu, fv = init
    x = grid.x
    u0 = np.asarray(fu(x) if callable(fu) else fu, dtype=np.float64)
    v0 = np.asarray(fv(x) if callable(fv) else fv, dtype=np.float64)
    u0 = np.broadcast_to(u0, (grid.nx,)).copy()
    v0 = np.broadcast_to(v0, (grid.nx,)).copy()
    return u0, v0


def simulate(params: ModelParams, grid: Grid | None = None, dt: float | None = None,
             t_end: float = 2000.0, init=None, *, sample_dt: float = DEFAULT_SAMPLE_DT,
             n_max: int = DEFAULT_N_MAX, flux_form: str = "conservative",
             include_reaction: bool = True) -> Trajectory:
    """Integrate from the initial fields (or from the equilibrium) to t_end.

    dt must divide tau exactly with quotient m >= 8 and respect the
    diffusive bound; both default correctly via :func:`default_dt`.  The
    delay history is initialized as constant-in-time from the initial field.
    init is None or a pair (u0, v0) of arrays or callables of x.

    Raises
    ------
    InvalidStepError
        for steps that violate the delay-divisibility or diffusive bound.
    BlowUpError
        when any component leaves [-1e6, 1e6] or becomes non-finite; the
        error carries the first failing time.
    """
    if grid is None:
        grid = Grid(nx=DEFAULT_NX, ell=float(params.ell))
    if abs(grid.ell - float(params.ell)) > 1e-12 * max(1.0, float(params.ell)):
        raise InvalidStepError(f"grid ell {grid.ell} does not match params ell {float(params.ell)}")
    if dt is None:
        dt = default_dt(params, grid)
    dt = float(dt)
    tau = float(params.tau)
    bound = 0.4 * grid.dx ** 2 / (2.0 * max(float(params.d11), float(params.d22)))
    if dt <= 0:
        raise InvalidStepError(f"dt must be positive, got {dt}")
    if dt > bound * (1 + 1e-12):
        raise InvalidStepError(f"dt={dt:.6g} violates the diffusive bound {bound:.6g}")
    if tau > 0:
        m = int(round(tau / dt))
        if m < 8:
            raise InvalidStepError(f"need at least 8 steps per delay, got m={m}")
        if abs(m * dt - tau) > 1e-9 * max(1.0, tau):
            raise InvalidStepError(f"dt={dt!r} does not divide tau={tau!r} (m={m})")
    else:
        m = 0
    if t_end <= 0:
        raise InvalidStepError(f"t_end must be positive, got {t_end}")

    u0, v0 = _initial_fields(params, grid, init)
    hb = HistoryBuffer(m, u0)
    nsteps = max(1, math.ceil(t_end / dt - 1e-9))
    sample_stride = max(1, int(round(sample_dt / dt)))
    n_rows = 1 + nsteps // sample_stride + (1 if nsteps % sample_stride else 0)
    out_u = np.empty((n_rows, grid.nx))
    out_v = np.empty((n_rows, grid.nx))
    out_step = np.zeros(n_rows, dtype=np.int64)
    out_u[0] = u0
    out_v[0] = v0

    u = u0.copy()
    v = v0.copy()
    status, fail_step, pos, rows = _march(
        u, v, hb.ring, hb.pos, m, nsteps, dt, grid.dx,
        float(params.d11), float(params.d22), float(params.d21),
        float(params.a), float(params.b), float(params.c),
        bool(include_reaction), flux_form == "conservative",
        sample_stride, out_u, out_v, out_step)
    hb.pos = pos
    if status == 1:
        raise BlowUpError(
            f"solution left [-1e6, 1e6] at t={fail_step * dt:.6g}", t=fail_step * dt)

    t = out_step[:rows] * dt
    out_u = out_u[:rows]
    out_v = out_v[:rows]
    W = mode_matrix(grid, n_max)
    modes_u = out_u @ W.T
    modes_v = out_v @ W.T
    meta = {
        "params": {k: float(getattr(params, k))
                   for k in ("a", "b", "c", "d11", "d22", "d21", "ell", "tau")},
        "nx": grid.nx, "dx": grid.dx, "dt": dt, "m": m,
        "sample_stride": sample_stride, "t_end": float(t[-1]),
        "flux_form": flux_form, "include_reaction": bool(include_reaction),
        "history_init": "constant", "n_max": int(n_max),
    }
    return Trajectory(t=t, x=grid.x, u=out_u, v=out_v,
                      modes_u=modes_u, modes_v=modes_v, n_max=int(n_max), meta=meta)


def _trapezoid_weights(grid: Grid) -> np.ndarray:
    w = np.full(grid.nx, grid.dx)
    w[0] *= 0.5
    w[-1] *= 0.5
    return w


def mass(fld, grid: Grid) -> float:
    """Trapezoid integral of a field over [0, ell*pi]."""
    return float(_trapezoid_weights(grid) @ np.asarray(fld))


def mode_matrix(grid: Grid, n_max: int) -> np.ndarray:
    """Rows are the orthonormal no-flux basis functions times the trapezoid
    weights, so modes = W @ field gives the amplitudes c_0..c_{n_max}."""
    x = grid.x
    w = _trapezoid_weights(grid)
    lp = grid.ell * math.pi
    W = np.empty((n_max + 1, grid.nx))
    W[0] = w / math.sqrt(lp)
    for n in range(1, n_max + 1):
        W[n] = math.sqrt(2.0 / lp) * np.cos(n * x / grid.ell) * w
    return W


def mode_amplitudes(fld, grid: Grid, n_max: int) -> np.ndarray:
    """Amplitudes c_n = <gamma_n, field>, n = 0..n_max, by trapezoid quadrature
    against gamma_0 = 1/sqrt(ell pi), gamma_n = sqrt(2/(ell pi)) cos(n x/ell)."""
    return mode_matrix(grid, n_max) @ np.asarray(fld, dtype=np.float64)


def _window_slice(t: np.ndarray, window):
    w0, w1 = float(window[0]), float(window[1])
    if not (w0 >= t[0] - 1e-9 and w1 <= t[-1] + 1e-9 and w1 > w0):
        raise WindowTooShortError(
            f"window ({w0:.6g}, {w1:.6g}) not inside the sampled span ({t[0]:.6g}, {t[-1]:.6g})")
    sel = (t >= w0) & (t <= w1)
    if int(sel.sum()) < 8:
        raise WindowTooShortError("window contains fewer than 8 samples")
    return sel


def _refined_peak_times(tw: np.ndarray, y: np.ndarray) -> np.ndarray:
    prom = 0.1 * float(np.ptp(y))
    idx, _ = find_peaks(y, prominence=prom if prom > 0 else None)
    idx = idx[(idx > 0) & (idx < y.size - 1)]
    if idx.size == 0:
        return np.empty(0)
    a = y[idx - 1]
    b = y[idx]
    c = y[idx + 1]
    denom = a - 2 * b + c
    shift = np.where(np.abs(denom) > 1e-300, 0.5 * (a - c) / denom, 0.0)
    dt_s = tw[1] - tw[0]
    return tw[idx] + shift * dt_s


def period_estimate(traj: Trajectory, n: int, window=None) -> float:
    """Mean spacing of parabolic-refined peaks of the mode-n amplitude.

    Raises
    ------
    TooFewPeaksError
        when fewer than 4 peaks lie in the window.
    """
    if window is None:
        span = traj.t[-1] - traj.t[0]
        window = (traj.t[0] + 0.5 * span, traj.t[-1])
    sel = _window_slice(traj.t, window)
    times = _refined_peak_times(traj.t[sel], traj.modes_u[sel, n])
    if times.size < 4:
        raise TooFewPeaksError(f"found {times.size} peaks of mode {n}, need >= 4")
    return float(np.mean(np.diff(times)))


def classify_attractor(traj: Trajectory, window=None, *,
                       steady_tol: float = STEADY_TOL,
                       peak_tol: float = PEAK_VARIATION_TOL,
                       dominance: float = DOMINANCE_RATIO,
                       osc_floor: float = OSC_FLOOR) -> Attractor:
    """Classify the sampled long-time behavior inside the given window.

    Steady: every nonhomogeneous amplitude stays within steady_tol and the
    homogeneous amplitude drifts slower than steady_tol per unit time.
    Transition: the dominant nonhomogeneous mode differs between the first
    and last third of the full trajectory (both clearly oscillating).
    PeriodicMode(n): mode n dominates every other by the dominance ratio and
    its successive peak heights vary by less than peak_tol.
    Anything else: Unclassified.

    Raises
    ------
    WindowTooShortError
        when the window is outside the samples or shorter than 5 estimated
        oscillation periods.
    """
    t = traj.t
    if window is None:
        span = t[-1] - t[0]
        window = (t[0] + 0.75 * span, t[-1])
    sel = _window_slice(t, window)
    tw = t[sel]
    cu = traj.modes_u[sel]
    n_modes = cu.shape[1] - 1
    dev = np.array([np.ptp(cu[:, n]) for n in range(1, n_modes + 1)])
    drift = float(np.max(np.abs(np.gradient(cu[:, 0], tw))))
    if np.all(dev < steady_tol) and drift < steady_tol:
        return Steady()

    ndom = int(np.argmax(dev)) + 1
    peak_times = _refined_peak_times(tw, cu[:, ndom])
    if peak_times.size < 2:
        raise WindowTooShortError(
            f"mode {ndom} oscillates but shows {peak_times.size} peaks in the window")
    est_period = float(np.mean(np.diff(peak_times)))
    if (tw[-1] - tw[0]) < MIN_PERIODS_IN_WINDOW * est_period:
        raise WindowTooShortError(
            f"window of length {tw[-1] - tw[0]:.6g} spans fewer than "
            f"{MIN_PERIODS_IN_WINDOW} periods (~{est_period:.6g} each)")

    span = t[-1] - t[0]
    first = t <= t[0] + span / 3
    last = t >= t[-1] - span / 3
    dom_first = _dominant_mode(traj.modes_u[first], osc_floor)
    dom_last = _dominant_mode(traj.modes_u[last], osc_floor)
    if dom_first and dom_last and dom_first != dom_last:
        return Transition(dom_first, dom_last)

    heights = cu[:, ndom][_peak_indices(cu[:, ndom])]
    if heights.size >= 3:
        mean_h = float(np.mean(np.abs(heights)))
        var = float(np.max(np.abs(np.diff(heights)))) / max(mean_h, 1e-300)
        others = np.delete(dev, ndom - 1)
        dominant = others.size == 0 or np.all(dev[ndom - 1] >= dominance * others)
        if var < peak_tol and dominant:
            return PeriodicMode(ndom)
    return Unclassified()


def _peak_indices(y: np.ndarray) -> np.ndarray:
    prom = 0.1 * float(np.ptp(y))
    idx, _ = find_peaks(y, prominence=prom if prom > 0 else None)
    return idx


def _dominant_mode(cu: np.ndarray, osc_floor: float) -> int:
    dev = np.array([np.ptp(cu[:, n]) for n in range(1, cu.shape[1])])
    if dev.size == 0 or float(np.max(dev)) < osc_floor:
        return 0
    return int(np.argmax(dev)) + 1


def write_csv(traj: Trajectory, path) -> None:
    """Long-format samples: one row per (time, x) pair, columns time,x,u,v,
    17 significant digits (lossless for float64)."""
    nt, nx = traj.u.shape
    cols = np.column_stack([
        np.repeat(traj.t, nx),
        np.tile(traj.x, nt),
        traj.u.ravel(),
        traj.v.ravel(),
    ])
    np.savetxt(path, cols, fmt="%.17g", delimiter=",",
               header="time,x,u,v", comments="")


def read_csv(path):
    """Inverse of :func:`write_csv`: returns (t, x, u, v) arrays."""
    data = np.loadtxt(path, delimiter=",", skiprows=1)
    times = np.unique(data[:, 0])
    xs = np.unique(data[:, 1])
    nt, nx = times.size, xs.size
    if nt * nx != data.shape[0]:
        raise ValueError("csv does not contain a full (time, x) product grid")
    t = data[::nx, 0]
    x = data[:nx, 1]
    u = data[:, 2].reshape(nt, nx)
    v = data[:, 3].reshape(nt, nx)
    return t, x, u, v


def write_modes_csv(traj: Trajectory, path) -> None:
    """Long-format mode series: columns time,n,c_u,c_v."""
    nt = traj.t.size
    nn = traj.n_max + 1
    cols = np.column_stack([
        np.repeat(traj.t, nn),
        np.tile(np.arange(nn), nt),
        traj.modes_u.ravel(),
        traj.modes_v.ravel(),
    ])
    np.savetxt(path, cols, fmt=["%.17g", "%d", "%.17g", "%.17g"],
               delimiter=",", header="time,n,c_u,c_v", comments="")


def write_binary(traj: Trajectory, path) -> None:
    """Compact dump: magic MHTRJ1; u64 counts nt, nx, n_modes; f64 arrays
    t, x, u, v, modes_u, modes_v in row-major order; u64 length-prefixed
    JSON metadata.  All little-endian."""
    nt, nx = traj.u.shape
    nn = traj.n_max + 1
    meta = json.dumps(traj.meta, sort_keys=True).encode()
    with open(path, "wb") as fh:
        fh.write(_MAGIC)
        fh.write(struct.pack("<QQQ", nt, nx, nn))
        for arr in (traj.t, traj.x, traj.u, traj.v, traj.modes_u, traj.modes_v):
            fh.write(np.ascontiguousarray(arr, dtype="<f8").tobytes())
        fh.write(struct.pack("<Q", len(meta)))
        fh.write(meta)


def read_binary(path) -> Trajectory:
    """Inverse of :func:`write_binary`."""
    with open(path, "rb") as fh:
        magic = fh.read(6)
        if magic != _MAGIC:
            raise ValueError(f"bad magic {magic!r}, expected {_MAGIC!r}")
        nt, nx, nn = struct.unpack("<QQQ", fh.read(24))

        def block(*shape):
            count = int(np.prod(shape))
            arr = np.frombuffer(fh.read(8 * count), dtype="<f8").astype(np.float64)
            return arr.reshape(shape)

        t = block(nt)
        x = block(nx)
        u = block(nt, nx)
        v = block(nt, nx)
        mu = block(nt, nn)
        mv = block(nt, nn)
        (meta_len,) = struct.unpack("<Q", fh.read(8))
        meta = json.loads(fh.read(meta_len).decode())
    return Trajectory(t=t, x=x, u=u, v=v, modes_u=mu, modes_v=mv,
                      n_max=int(nn - 1), meta=meta)
