"""Per-mode linear stability analysis of the delayed cross-diffusion system.

Spatial modes cos(n x / ell) decouple the linearization into a family of
2x2 quasi-polynomials

    Gamma_n(lam) = lam^2 - T_n lam + J_n - a12 d21 v* (n/ell)^2 exp(-lam tau)

indexed by the mode number n.  This module computes, per mode, the scalar
invariants (T_n, J_n, P_n, Q_n), the cross-diffusion thresholds d21^(n)
where purely imaginary roots become possible, the crossing frequencies and
delays, transversality of each crossing, and the resulting stability region
in the (d21, tau) plane, including double-Hopf points where two mode curves
intersect.

Algebraic quantities (T_n, J_n, thresholds) are computed in the arithmetic
of the inputs, so exact parameters give exact thresholds; frequencies and
delays involve square roots and arccos and are evaluated in float.
"""

from __future__ import annotations

import cmath
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    DegenerateRootError,
    InvalidModeError,
    MemoHopfError,
    NoPositiveRootError,
    NoSignChangeError,
    StableForAllTauError,
)
from .model import LinearData

__all__ = [
    "ModeScalars",
    "HopfCritical",
    "RegionScan",
    "mode_scalars",
    "d21_threshold",
    "d21_star",
    "hopf_frequency",
    "hopf_delays",
    "hopf_point",
    "char_eval",
    "refine_root",
    "transversality",
    "transversality_sign",
    "unstable_mode_set",
    "critical_delay",
    "double_hopf",
    "region_scan",
    "default_n_max",
]

_NEWTON_TOL = 1e-12
_NEWTON_MAXIT = 50


@dataclass(frozen=True)
class ModeScalars:
    """Scalar invariants of mode n.

    T_n and J_n are trace and determinant of the delay-free per-mode matrix;
    P_n = T_n^2 - 2 J_n and Q_n = J_n^2 - S_n^2 are the coefficients of the
    quartic omega^4 + P_n omega^2 + Q_n = 0 solved by crossing frequencies,
    where S_n = -a12 d21 v* (n/ell)^2 is the memory coupling strength.
    """

    n: int
    T: float
    J: float
    P: float
    Q: float
    S: float


@dataclass(frozen=True)
class HopfCritical:
    """A verified delay-induced crossing of mode n_c.

    omega is the crossing frequency, tau_c the j-th crossing delay at
    coupling d21.  omega_c = tau_c * omega is the phase angle that appears
    throughout the normal-form computation after time rescaling.
    """

    n_c: int
    omega: float
    tau_c: float
    d21: float
    j: int = 0

    @property
    def omega_c(self) -> float:
        return self.tau_c * self.omega


def mode_scalars(lin: LinearData, d21, n: int) -> ModeScalars:
    """Invariants (T_n, J_n, P_n, Q_n, S_n) of mode n at coupling d21.

    Computed in the arithmetic of the inputs; exact inputs give exact
    values.  n = 0 is allowed (S_0 = 0, the memory term is invisible to the
    homogeneous mode).
    """
    if n < 0:
        raise InvalidModeError(f"mode number must be >= 0, got {n}")
    k2 = (n * n) / (lin.ell * lin.ell)
    T = lin.trace - (lin.d11 + lin.d22) * k2
    J = (lin.d11 * lin.d22) * k2 * k2 - (lin.d11 * lin.a22 + lin.d22 * lin.a11) * k2 + lin.det
    S = -lin.a12 * d21 * lin.v_star * k2
    P = T * T - 2 * J
    Q = J * J - S * S
    return ModeScalars(n=n, T=T, J=J, P=P, Q=Q, S=S)


def d21_threshold(lin: LinearData, n: int):
    """Coupling threshold d21^(n) = J_n / (-a12 v* (n/ell)^2) of mode n.

    For d21 above this value, Q_n < 0 and mode n acquires a crossing
    frequency.  Exact when the linear data is exact.

    Raises
    ------
    InvalidModeError
        for n = 0; the homogeneous mode never feels the memory term.
    """
    if n <= 0:
        raise InvalidModeError(f"threshold requires n >= 1, got {n}")
    k2 = (n * n) / (lin.ell * lin.ell)
    J = (lin.d11 * lin.d22) * k2 * k2 - (lin.d11 * lin.a22 + lin.d22 * lin.a11) * k2 + lin.det
    denom = -lin.a12 * lin.v_star * k2
    if denom <= 0:
        raise MemoHopfError("memory destabilization requires a12 < 0 and v* > 0")
    return J / denom


def default_n_max(lin: LinearData) -> int:
    """Mode scan cutoff: ceil(2 ell (det/(d11 d22))^(1/4)) + 5, capped at 64.

    J_n grows like d11 d22 (n/ell)^4, so thresholds beyond the cutoff exceed
    every threshold below it and the minimizing mode is always inside.
    """
    base = math.ceil(2 * float(lin.ell) * (float(lin.det) / (float(lin.d11) * float(lin.d22))) ** 0.25)
    return min(base + 5, 64)


def d21_star(lin: LinearData):
    """Smallest threshold over all modes and its minimizer (d21*, n*).

    Scans n = 1 .. ceil(2 ell (det/(d11 d22))^(1/4)) + 2, which brackets the
    real-variable minimizer of the threshold expression.
    """
    n_hi = math.ceil(2 * float(lin.ell) * (float(lin.det) / (float(lin.d11) * float(lin.d22))) ** 0.25) + 2
    best = None
    best_n = 0
    for n in range(1, n_hi + 1):
        val = d21_threshold(lin, n)
        if best is None or val < best:
            best, best_n = val, n
    return best, best_n


def hopf_frequency(lin: LinearData, d21, n: int) -> float:
    """Crossing frequency omega_n > 0 of mode n at coupling d21.

    The unique positive root of omega^4 + P_n omega^2 + Q_n = 0 on the
    principal branch, omega = sqrt((-P_n + sqrt(P_n^2 - 4 Q_n))/2).

    Raises
    ------
    NoPositiveRootError
        when no positive root exists, including the boundary Q_n = 0.
    """
    sc = mode_scalars(lin, d21, n)
    P, Q = float(sc.P), float(sc.Q)
    if Q >= 0 and P > 0:
        raise NoPositiveRootError(
            f"mode {n}: Q_n={Q:.6g} >= 0 and P_n={P:.6g} > 0, no purely imaginary root")
    disc = P * P - 4 * Q
    if disc < 0:
        raise NoPositiveRootError(f"mode {n}: negative discriminant {disc:.6g}")
    z = (-P + math.sqrt(disc)) / 2
    if z <= 0:
        raise NoPositiveRootError(f"mode {n}: largest root omega^2={z:.6g} <= 0")
    omega = math.sqrt(z)
    resid = abs(omega ** 4 + P * omega ** 2 + Q)
    if resid > 1e-9 * max(1.0, omega ** 4):
        raise MemoHopfError(f"frequency root residual {resid:.3g} out of tolerance")
    return omega


def hopf_delays(lin: LinearData, d21, n: int, j_max: int = 0) -> list[float]:
    """Crossing delays tau_{n,0} .. tau_{n,j_max} of mode n at coupling d21.

    tau_{n,j} = (arccos((omega^2 - J_n)/S_n) + 2 pi j)/omega.  Consecutive
    delays differ by exactly 2 pi / omega.  The principal arccos branch is
    correct because sin(omega tau) = -omega T_n / S_n > 0 whenever T_n < 0,
    which is asserted here.
    """
    omega = hopf_frequency(lin, d21, n)
    sc = mode_scalars(lin, d21, n)
    S = float(sc.S)
    if float(sc.T) >= 0:
        raise MemoHopfError(
            f"mode {n}: principal arccos branch needs T_n < 0, got T_n={float(sc.T):.6g}")
    arg = (omega * omega - float(sc.J)) / S
    if abs(arg) > 1 + 1e-12:
        raise MemoHopfError(f"mode {n}: arccos argument {arg!r} outside [-1, 1]")
    arg = min(1.0, max(-1.0, arg))
    tau0 = math.acos(arg) / omega
    assert math.sin(omega * tau0) > 0
    return [tau0 + 2 * math.pi * j / omega for j in range(j_max + 1)]


def char_eval(lin: LinearData, d21, tau, n: int, lam: complex) -> complex:
    """Characteristic function Gamma_n(lam), the determinant of the per-mode
    2x2 matrix lam I + (n/ell)^2 D1 + (n/ell)^2 exp(-lam tau) D2 - A.

    For n = 0 this reduces to lam^2 - Tr(A) lam + Det(A) regardless of tau.
    """
    k2 = float((n * n) / (lin.ell * lin.ell))
    a11, a12, a21, a22 = (float(lin.a11), float(lin.a12), float(lin.a21), float(lin.a22))
    m00 = lam + k2 * float(lin.d11) - a11
    m01 = -a12
    m10 = -k2 * float(d21) * float(lin.v_star) * cmath.exp(-lam * float(tau)) - a21
    m11 = lam + k2 * float(lin.d22) - a22
    return m00 * m11 - m01 * m10


def _char_dlam(lin: LinearData, d21, tau, n: int, lam: complex) -> complex:
    # dGamma/dlam = 2 lam - T_n + tau * E(lam), E = -a12 d21 v* k^2 exp(-lam tau)
    sc = mode_scalars(lin, d21, n)
    E = float(sc.S) * cmath.exp(-lam * float(tau))
    return 2 * lam - float(sc.T) - float(tau) * E


def refine_root(lin: LinearData, d21, tau, n: int, lam0: complex) -> complex:
    """Newton refinement of a characteristic root from the seed lam0.

    Stops when the step falls below 1e-12 (relative to |lam|), capped at 50
    iterations.

    Raises
    ------
    DegenerateRootError
        when the lam-derivative of Gamma_n nearly vanishes at an iterate.
    """
    lam = complex(lam0)
    for _ in range(_NEWTON_MAXIT):
        d = _char_dlam(lin, d21, tau, n, lam)
        if abs(d) < 1e-12:
            raise DegenerateRootError(f"dGamma/dlam = {abs(d):.3g} at lam={lam}")
        step = char_eval(lin, d21, tau, n, lam) / d
        lam -= step
        if abs(step) <= _NEWTON_TOL * max(1.0, abs(lam)):
            break
    return lam


def hopf_point(lin: LinearData, d21, n: int, j: int = 0) -> HopfCritical:
    """Verified crossing (n, omega, tau_{n,j}, d21).

    The closed-form frequency and delay are checked by Newton refinement of
    the characteristic root from the seed i*omega at tau = tau_{n,j}; the
    refined root must sit on the imaginary axis to within 1e-9.
    """
    taus = hopf_delays(lin, d21, n, j_max=j)
    omega = hopf_frequency(lin, d21, n)
    tau_c = taus[j]
    lam = refine_root(lin, d21, tau_c, n, 1j * omega)
    if abs(lam - 1j * omega) > 1e-9 * max(1.0, omega):
        raise MemoHopfError(
            f"refined root {lam} strays from i*omega = {1j * omega} at mode {n}")
    return HopfCritical(n_c=n, omega=omega, tau_c=tau_c, d21=float(d21), j=j)


def transversality(lin: LinearData, d21, crit: HopfCritical) -> complex:
    """d lam / d tau at the crossing, by implicit differentiation:

        d lam / d tau = lam E / (2 lam - T_n - tau E),
        E = -a12 d21 v* (n/ell)^2 exp(-lam tau).

    Raises
    ------
    DegenerateRootError
        when |dGamma/dlam| < 1e-12 at the crossing.
    """
    lam = 1j * crit.omega
    tau = crit.tau_c
    sc = mode_scalars(lin, d21, crit.n_c)
    E = float(sc.S) * cmath.exp(-lam * tau)
    denom = 2 * lam - float(sc.T) - tau * E
    if abs(denom) < 1e-12:
        raise DegenerateRootError(f"degenerate crossing at mode {crit.n_c}: |dGamma/dlam|={abs(denom):.3g}")
    return lam * E / denom


def transversality_sign(lin: LinearData, d21, crit: HopfCritical) -> int:
    """Sign of Re(d lam / d tau) at the crossing (+1 or -1)."""
    re = transversality(lin, d21, crit).real
    return 1 if re > 0 else -1


def unstable_mode_set(lin: LinearData, d21, n_max: int | None = None) -> set[int]:
    """Modes with d21^(n) < d21, i.e. modes that can cross for some delay.

    The set is contiguous in n for this model family.  ``n_max`` defaults to
    :func:`default_n_max`, extended if necessary so that the first excluded
    mode is genuinely above threshold.
    """
    if n_max is None:
        n_max = default_n_max(lin)
    out = {n for n in range(1, n_max + 1) if d21_threshold(lin, n) < d21}
    n = n_max + 1
    while n <= 64 and d21_threshold(lin, n) < d21:
        out.add(n)
        n += 1
    return out


def critical_delay(lin: LinearData, d21):
    """Smallest first-crossing delay over all unstable modes: (tau*, n*).

    The equilibrium is asymptotically stable for tau < tau* and unstable for
    tau just above tau*.

    Raises
    ------
    StableForAllTauError
        when no mode is above threshold at this coupling.
    """
    modes = unstable_mode_set(lin, d21)
    if not modes:
        raise StableForAllTauError(f"no mode above threshold at d21={float(d21):.6g}")
    best = None
    best_n = 0
    for n in sorted(modes):
        tau0 = hopf_delays(lin, d21, n)[0]
        if best is None or tau0 < best:
            best, best_n = tau0, n
    return best, best_n


def double_hopf(lin: LinearData, n1: int, n2: int, d21_bracket) -> tuple[float, float]:
    """Coupling and delay (d21**, tau**) where tau_{n1,0} and tau_{n2,0} meet.

    Bisection on the difference of first-crossing delays over the bracket;
    both curves must be defined on the whole bracket.  Terminates when the
    bracket width in d21 falls below 1e-8 (the delay mismatch at the
    midpoint is then far below 1e-8 as well).

    Raises
    ------
    NoSignChangeError
        when the delay difference has equal signs at the bracket ends, which
        includes the degenerate request n1 = n2.
    """
    lo, hi = float(d21_bracket[0]), float(d21_bracket[1])
    if not lo < hi:
        raise MemoHopfError(f"bracket must satisfy lo < hi, got {d21_bracket!r}")

    def gap(d):
        return hopf_delays(lin, d, n1)[0] - hopf_delays(lin, d, n2)[0]

    g_lo, g_hi = gap(lo), gap(hi)
    if g_lo == 0 and g_hi == 0:
        raise NoSignChangeError(f"delay curves of modes {n1} and {n2} coincide on the bracket")
    if g_lo * g_hi > 0:
        raise NoSignChangeError(
            f"no sign change of tau_{{{n1},0}} - tau_{{{n2},0}} on [{lo:.6g}, {hi:.6g}]")
    while hi - lo > 1e-8:
        mid = 0.5 * (lo + hi)
        g_mid = gap(mid)
        if g_mid == 0:
            lo = hi = mid
            break
        if g_lo * g_mid < 0:
            hi, g_hi = mid, g_mid
        else:
            lo, g_lo = mid, g_mid
    d_star = 0.5 * (lo + hi)
    tau_star = hopf_delays(lin, d_star, n1)[0]
    if abs(gap(d_star)) > 1e-8:
        raise MemoHopfError(f"bisection stalled, residual delay gap {gap(d_star):.3g}")
    return d_star, tau_star


@dataclass(frozen=True)
class RegionScan:
    """Sampled stability picture over a (d21, tau) rectangle.

    curves maps mode number to an array of first-crossing delays tau_{n,0}
    along the d21 samples (NaN where the mode is below threshold).  stable
    is indexed [i_d21, j_tau].  tau_star is +inf and n_star is -1 where every
    mode is below threshold.
    """

    d21: np.ndarray
    tau: np.ndarray
    stable: np.ndarray
    curves: dict[int, np.ndarray] = field(default_factory=dict)
    tau_star: np.ndarray = field(default_factory=lambda: np.empty(0))
    n_star: np.ndarray = field(default_factory=lambda: np.empty(0, dtype=int))


def region_scan(lin: LinearData, d21_range, tau_range, resolution=(121, 121),
                curve_modes=None, threads: int = 1) -> RegionScan:
    """Stability grid and delay curves over a (d21, tau) rectangle.

    curve_modes defaults to every mode whose threshold lies below the right
    edge of the d21 range.  With threads > 1 the d21 columns are evaluated
    in a thread pool; results are placed by index, so the output is
    identical to the sequential scan.
    """
    d21s = np.linspace(float(d21_range[0]), float(d21_range[1]), int(resolution[0]))
    taus = np.linspace(float(tau_range[0]), float(tau_range[1]), int(resolution[1]))
    if curve_modes is None:
        n_hi = default_n_max(lin)
        curve_modes = tuple(n for n in range(1, n_hi + 1)
                            if d21_threshold(lin, n) < d21s[-1])
    curve_modes = tuple(sorted(curve_modes))
    curves = {n: np.full(d21s.size, np.nan) for n in curve_modes}
    tau_star = np.full(d21s.size, np.inf)
    n_star = np.full(d21s.size, -1, dtype=int)

    def column(i):
        d = d21s[i]
        for n in curve_modes:
            try:
                curves[n][i] = hopf_delays(lin, d, n)[0]
            except NoPositiveRootError:
                pass
        try:
            ts, ns = critical_delay(lin, d)
            tau_star[i] = ts
            n_star[i] = ns
        except StableForAllTauError:
            pass

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            list(pool.map(column, range(d21s.size)))
    else:
        for i in range(d21s.size):
            column(i)

    stable = taus[None, :] < tau_star[:, None]
    return RegionScan(d21=d21s, tau=taus, stable=stable, curves=curves,
                      tau_star=tau_star, n_star=n_star)
