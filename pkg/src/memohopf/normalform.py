"""Hopf normal form on the center manifold of a delay-induced crossing.

Given a verified crossing (mode n_c, frequency omega, delay tau_c, coupling
d21), this module rescales time so the delay is 1, builds the critical
eigenfunctions phi(theta) = phi e^{i omega_c theta} and the adjoint
eigenfunctions normalized against the delay bilinear form, assembles the
Taylor coefficients of the reaction and of the quadratic memory-transport
terms, solves the four center-manifold coefficient systems, and reduces to
the planar normal form

    rho' = K1 mu rho + K2 rho^3 + O(mu^2 rho, rho^5)

with K1 = Re(B1)/2 and K2 = Re(B2)/6.  The bifurcation is supercritical
exactly when K1 K2 < 0, and the bifurcating orbit is stable exactly when
K2 < 0.

The reaction enters only through :class:`~memohopf.model.ReactionDerivatives`,
so any 2-component kinetics of the same shape can be analyzed via
:func:`normal_form_at`; :func:`hopf_normal_form` is the convenience driver
for the built-in model.

Everything here works in float; convert exact linear data with
``LinearData.as_float()`` first.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from . import model, spectral
from .errors import MemoHopfError, ResonantMatrixError, SingularNormalizationError
from .model import LinearData, ModelParams, ReactionDerivatives
from .spectral import HopfCritical

__all__ = [
    "EigenPair",
    "TaylorAssembly",
    "CenterCoeffs",
    "NormalForm",
    "eigenpair",
    "eta_closed_form",
    "taylor_assembly",
    "center_coeffs",
    "b1_coefficient",
    "b1_operator_form",
    "b2_coefficients",
    "residuals",
    "normal_form_at",
    "hopf_normal_form",
]


@dataclass(frozen=True)
class EigenPair:
    """Critical eigenfunctions of the rescaled linearization at the crossing.

    phi spans the i*omega eigenspace with first component fixed to 1;
    psi = eta * psi0 is the adjoint row vector scaled so the delay bilinear
    form pairs them to 1.  On theta in [-1, 0] the eigenfunction is
    phi * e^{i omega_c theta} with omega_c = tau_c * omega.
    """

    phi: np.ndarray
    psi: np.ndarray
    eta: complex
    omega_nc: float
    omega_c: float
    n_c: int

    def phi_at(self, theta: float) -> np.ndarray:
        return self.phi * cmath.exp(1j * self.omega_c * theta)

    def psi_at(self, s: float) -> np.ndarray:
        return self.psi * cmath.exp(-1j * self.omega_c * s)


@dataclass(frozen=True)
class TaylorAssembly:
    """Quadratic and cubic interaction coefficients on the critical mode.

    A20, A11, A02 and A21 collect the reaction Taylor terms paired with the
    eigenfunction products (the convention F = sum (1/j!) F_j is absorbed
    here, so these are the coefficients that multiply z1^2, z1 z2, z2^2 and
    z1^2 z2 directly).  The Ad blocks are the quadratic memory-transport
    coefficients; their first components vanish because the memory term only
    feeds the second equation.  At20/At11/At02 = A - 2 (n_c/ell)^2 Ad are the
    combinations that drive the 2 n_c center coefficients.
    """

    A20: np.ndarray
    A11: np.ndarray
    A02: np.ndarray
    A21: np.ndarray
    Ad20: np.ndarray
    Ad11: np.ndarray
    Ad02: np.ndarray
    At20: np.ndarray
    At11: np.ndarray
    At02: np.ndarray


@dataclass(frozen=True)
class CenterCoeffs:
    """Second-order center-manifold coefficients.

    h020 and h2nc20 rotate at rate 2 i omega_c; h011 and h2nc11 are constant
    in theta (and real up to roundoff).  The subscripts name the spatial
    mode (0 or 2 n_c) and the (z1, z2) powers.
    """

    h020: np.ndarray
    h011: np.ndarray
    h2nc20: np.ndarray
    h2nc11: np.ndarray
    omega_c: float

    def h020_at(self, theta: float) -> np.ndarray:
        return self.h020 * cmath.exp(2j * self.omega_c * theta)

    def h011_at(self, theta: float) -> np.ndarray:
        return self.h011

    def h2nc20_at(self, theta: float) -> np.ndarray:
        return self.h2nc20 * cmath.exp(2j * self.omega_c * theta)

    def h2nc11_at(self, theta: float) -> np.ndarray:
        return self.h2nc11


@dataclass(frozen=True)
class NormalForm:
    """Planar Hopf normal-form data at a crossing."""

    n_c: int
    d21: float
    omega: float
    tau_c: float
    B1: complex
    B21: complex
    B22: complex
    B23: complex
    B2: complex
    K1: float
    K2: float
    direction: str
    orbit_stability: str


def _coupling(lin: LinearData, crit: HopfCritical) -> float:
    # normal-form routines take the coupling from the crossing record
    return float(crit.d21)


def _pairing(lin: LinearData, crit: HopfCritical, psi_row: np.ndarray,
             phi_vec: np.ndarray, rate: complex) -> complex:
    """Delay bilinear form <psi, x> for x(theta) = phi_vec * e^{rate*theta}.

    <psi, x> = psi x(0) + int_{-1}^{0} psi(xi+1) W x(xi) dxi with the kernel
    a point mass at theta = -1, W = -tau_c k^2 D2.  The integral collapses
    to a closed form in the rate.
    """
    k2 = (crit.n_c / lin.ell) ** 2
    w = crit.tau_c * _coupling(lin, crit) * lin.v_star * k2
    iw = 1j * crit.omega_c
    if abs(rate - iw) < 1e-14:
        kernel = cmath.exp(-iw)
    else:
        kernel = cmath.exp(-iw) * (1 - cmath.exp(-(rate - iw))) / (rate - iw)
    direct = psi_row[0] * phi_vec[0] + psi_row[1] * phi_vec[1]
    through_w = psi_row[1] * w * phi_vec[0]
    return direct + through_w * kernel


def eigenpair(lin: LinearData, crit: HopfCritical) -> EigenPair:
    """Eigenvector phi, normalized adjoint psi and the scale eta.

    phi = (1, p/a12) and psi0 = (1, a12/q) with p = i omega + k^2 d11 - a11
    and q = i omega + k^2 d22 - a22; eta = 1/<psi0, phi>.

    Raises
    ------
    SingularNormalizationError
        when |<psi0, phi>| < 1e-12.
    """
    if lin.a12 == 0:
        raise MemoHopfError("eigenvector construction requires a12 != 0")
    k2 = (crit.n_c / lin.ell) ** 2
    iw = 1j * crit.omega
    p = iw + k2 * lin.d11 - lin.a11
    q = iw + k2 * lin.d22 - lin.a22
    phi = np.array([1.0, p / lin.a12], dtype=complex)
    psi0 = np.array([1.0, lin.a12 / q], dtype=complex)
    denom = _pairing(lin, crit, psi0, phi, 1j * crit.omega_c)
    if abs(denom) < 1e-12:
        raise SingularNormalizationError(f"bilinear form nearly singular: |<psi0,phi>|={abs(denom):.3g}")
    eta = 1 / denom
    pair = EigenPair(phi=phi, psi=eta * psi0, eta=eta,
                     omega_nc=crit.omega, omega_c=crit.omega_c, n_c=crit.n_c)
    resid = _eigen_residual(lin, crit, phi)
    if resid > 1e-8:
        raise MemoHopfError(f"eigenvector residual {resid:.3g} out of tolerance")
    return pair


def _eigen_residual(lin: LinearData, crit: HopfCritical, phi: np.ndarray) -> float:
    # |(i omega I + k^2 D1 + k^2 e^{-i omega tau} D2 - A) phi|
    k2 = (crit.n_c / lin.ell) ** 2
    d21 = _coupling(lin, crit)
    ph = cmath.exp(-1j * crit.omega * crit.tau_c)
    m = np.array([
        [1j * crit.omega + k2 * lin.d11 - lin.a11, -lin.a12],
        [-k2 * d21 * lin.v_star * ph - lin.a21, 1j * crit.omega + k2 * lin.d22 - lin.a22],
    ], dtype=complex)
    return float(np.linalg.norm(m @ phi))


def eta_closed_form(lin: LinearData, crit: HopfCritical) -> complex:
    """Algebraic expression for the normalization scale,

        eta = q / (p + q + tau_c a12 d21 v* k^2 e^{-i omega_c}),

    used as an independent cross-check of the bilinear-form value.
    """
    k2 = (crit.n_c / lin.ell) ** 2
    iw = 1j * crit.omega
    p = iw + k2 * lin.d11 - lin.a11
    q = iw + k2 * lin.d22 - lin.a22
    d21 = _coupling(lin, crit)
    return q / (p + q + crit.tau_c * lin.a12 * d21 * lin.v_star * k2 * cmath.exp(-1j * crit.omega_c))


def _quad(d: ReactionDerivatives, x: np.ndarray, y: np.ndarray) -> np.ndarray:
    """Symmetric quadratic form of the reaction Hessians on (x, y)."""
    cross = x[0] * y[1] + x[1] * y[0]
    return np.array([
        d.f_uu * x[0] * y[0] + d.f_uv * cross + d.f_vv * x[1] * y[1],
        d.g_uu * x[0] * y[0] + d.g_uv * cross + d.g_vv * x[1] * y[1],
    ], dtype=complex)


def _cubic(d: ReactionDerivatives, x: np.ndarray, y: np.ndarray, z: np.ndarray) -> np.ndarray:
    """Symmetric trilinear form of the third-order reaction tensor."""
    s_uuv = x[0] * y[0] * z[1] + x[0] * y[1] * z[0] + x[1] * y[0] * z[0]
    s_uvv = x[0] * y[1] * z[1] + x[1] * y[0] * z[1] + x[1] * y[1] * z[0]
    return np.array([
        d.f_uuu * x[0] * y[0] * z[0] + d.f_uuv * s_uuv + d.f_uvv * s_uvv + d.f_vvv * x[1] * y[1] * z[1],
        d.g_uuu * x[0] * y[0] * z[0] + d.g_uuv * s_uuv + d.g_uvv * s_uvv + d.g_vvv * x[1] * y[1] * z[1],
    ], dtype=complex)


def taylor_assembly(derivs: ReactionDerivatives, eig: EigenPair,
                    lin: LinearData, crit: HopfCritical) -> TaylorAssembly:
    """Quadratic/cubic coefficients of the rescaled system on the crossing mode.

    Reaction blocks: A20 = tau_c Q(phi, phi), A11 = 2 tau_c Q(phi, phi_bar),
    A21 = 3 tau_c C(phi, phi, phi_bar), with Q and C the symmetric forms of
    the order-2 and order-3 reaction tensors.  Memory blocks: Ad20 and Ad11
    pair the delayed first component with the instantaneous second one,
    carrying the factor -2 d21 tau_c; spatial weights (powers of n_c/ell)
    are attached later, when the blocks meet a specific spatial mode.
    """
    tau = crit.tau_c
    d21 = _coupling(lin, crit)
    phi = eig.phi
    phib = np.conj(phi)
    phi1_m1 = phi[0] * cmath.exp(-1j * eig.omega_c)

    A20 = tau * _quad(derivs, phi, phi)
    A11 = 2 * tau * _quad(derivs, phi, phib)
    A02 = np.conj(A20)
    A21 = 3 * tau * _cubic(derivs, phi, phi, phib)

    Ad20 = -2 * d21 * tau * np.array([0.0, phi1_m1 * phi[1]], dtype=complex)
    Ad11 = -2 * d21 * tau * np.array(
        [0.0, 2 * (phi1_m1 * np.conj(phi[1])).real], dtype=complex)
    Ad02 = np.conj(Ad20)

    k2 = (crit.n_c / lin.ell) ** 2
    At20 = A20 - 2 * k2 * Ad20
    At11 = A11 - 2 * k2 * Ad11
    At02 = A02 - 2 * k2 * Ad02
    return TaylorAssembly(A20=A20, A11=A11, A02=A02, A21=A21,
                          Ad20=Ad20, Ad11=Ad11, Ad02=Ad02,
                          At20=At20, At11=At11, At02=At02)


def mtilde(lin: LinearData, crit: HopfCritical, n: int, lam: complex) -> np.ndarray:
    """Rescaled per-mode characteristic matrix

        M~_n(lam) = lam I + tau_c (n/ell)^2 D1 + tau_c (n/ell)^2 e^{-lam} D2
                    - tau_c A,

    so that M~_n(tau_c lam') = tau_c M_n(lam') for the unscaled matrix M_n.
    """
    tau = crit.tau_c
    kn2 = (n / lin.ell) ** 2
    d21 = _coupling(lin, crit)
    return np.array([
        [lam + tau * kn2 * lin.d11 - tau * lin.a11, -tau * lin.a12],
        [-tau * kn2 * d21 * lin.v_star * cmath.exp(-lam) - tau * lin.a21,
         lam + tau * kn2 * lin.d22 - tau * lin.a22],
    ], dtype=complex)


def _solve2(m: np.ndarray, rhs: np.ndarray, label: str) -> np.ndarray:
    det = m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0]
    scale = max(1.0, float(np.max(np.abs(m))))
    if abs(det) < 1e-12 * scale * scale:
        raise ResonantMatrixError(f"{label}: |det| = {abs(det):.3g}, system is resonant")
    return np.array([
        (m[1, 1] * rhs[0] - m[0, 1] * rhs[1]) / det,
        (m[0, 0] * rhs[1] - m[1, 0] * rhs[0]) / det,
    ], dtype=complex)


def center_coeffs(lin: LinearData, asm: TaylorAssembly, crit: HopfCritical) -> CenterCoeffs:
    """Solve the four center-manifold systems.

    Spatial mode 0 takes the plain reaction blocks with weight 1/sqrt(ell pi);
    spatial mode 2 n_c takes the combined blocks At with weight
    1/sqrt(2 ell pi).  Rates: 2 i omega_c for the 20-coefficients, 0 for the
    11-coefficients.

    Raises
    ------
    ResonantMatrixError
        when one of the four matrices is numerically singular (a genuine
        resonance, e.g. a simultaneous crossing of mode 2 n_c).
    """
    lp = math.sqrt(lin.ell * math.pi)
    l2p = math.sqrt(2 * lin.ell * math.pi)
    two_iw = 2j * crit.omega_c
    n2 = 2 * crit.n_c
    h020 = _solve2(mtilde(lin, crit, 0, two_iw), asm.A20 / lp, "M~_0(2 i omega_c)")
    h011 = _solve2(mtilde(lin, crit, 0, 0.0), asm.A11 / lp, "M~_0(0)")
    h2nc20 = _solve2(mtilde(lin, crit, n2, two_iw), asm.At20 / l2p, "M~_2nc(2 i omega_c)")
    h2nc11 = _solve2(mtilde(lin, crit, n2, 0.0), asm.At11 / l2p, "M~_2nc(0)")
    return CenterCoeffs(h020=h020, h011=h011, h2nc20=h2nc20, h2nc11=h2nc11,
                        omega_c=crit.omega_c)


def b1_coefficient(eig: EigenPair) -> complex:
    """B1 = 2 i omega_{n_c} psi^T phi; K1 = Re(B1)/2."""
    return 2j * eig.omega_nc * (eig.psi @ eig.phi)


def b1_operator_form(lin: LinearData, crit: HopfCritical, eig: EigenPair) -> complex:
    """B1 recomputed through the unscaled linear operator,

        2 psi^T (A phi - k^2 D1 phi - k^2 D2 phi e^{-i omega_c}),

    an independent route that must agree with :func:`b1_coefficient`.
    """
    k2 = (crit.n_c / lin.ell) ** 2
    d21 = _coupling(lin, crit)
    A = np.array([[lin.a11, lin.a12], [lin.a21, lin.a22]], dtype=complex)
    D1 = np.array([[lin.d11, 0.0], [0.0, lin.d22]], dtype=complex)
    D2 = np.array([[0.0, 0.0], [-d21 * lin.v_star, 0.0]], dtype=complex)
    vec = A @ eig.phi - k2 * (D1 @ eig.phi + D2 @ eig.phi * cmath.exp(-1j * crit.omega_c))
    return 2 * (eig.psi @ vec)


def b2_coefficients(derivs: ReactionDerivatives, eig: EigenPair, asm: TaylorAssembly,
                    cen: CenterCoeffs, lin: LinearData, crit: HopfCritical):
    """Cubic resonant coefficients (B21, B22, B23, B2); K2 = Re(B2)/6.

    B21 pairs the cubic reaction tensor with the eigenfunctions directly;
    B22 pairs the quadratic reaction tensor with the center coefficients;
    B23 does the same for the quadratic memory-transport terms, where the
    spatial pairing of cos(n_c x/ell) with the mode-0 and mode-2n_c
    coefficients yields the gradient weights -k^2, 2 k^2 and -(2 n_c/ell)^2
    on the three transport contractions.
    """
    tau = crit.tau_c
    d21 = _coupling(lin, crit)
    k2 = (crit.n_c / lin.ell) ** 2
    lp = math.sqrt(lin.ell * math.pi)
    l2p = math.sqrt(2 * lin.ell * math.pi)
    psi = eig.psi
    phi = eig.phi
    phib = np.conj(phi)
    em = cmath.exp(-1j * eig.omega_c)
    phi1_m1 = phi[0] * em
    phib1_m1 = np.conj(phi1_m1)

    B21 = (3.0 / (2 * lin.ell * math.pi)) * (psi @ asm.A21)

    def s2(x, y):
        return 2 * tau * _quad(derivs, x, y)

    B22 = (psi @ (s2(phi, cen.h011) + s2(phib, cen.h020))) / lp \
        + (psi @ (s2(phi, cen.h2nc11) + s2(phib, cen.h2nc20))) / l2p

    def sd1(x1_m1, y):
        # delayed first component of x against instantaneous second of y
        return -2 * d21 * tau * np.array([0.0, x1_m1 * y[1]], dtype=complex)

    def sd3(x, y1_m1):
        # instantaneous second component of x against delayed first of y
        return -2 * d21 * tau * np.array([0.0, x[1] * y1_m1], dtype=complex)

    h020_m1 = cen.h020_at(-1.0)
    h2nc20_m1 = cen.h2nc20_at(-1.0)

    t0 = sd1(phi1_m1, cen.h011) + sd1(phib1_m1, cen.h020)
    B23 = (-k2 / lp) * (psi @ t0)

    t1 = sd1(phi1_m1, cen.h2nc11) + sd1(phib1_m1, cen.h2nc20)
    t3 = sd3(phi, cen.h2nc11[0]) + sd3(phib, h2nc20_m1[0])
    t2 = t1 + t3
    B23 += (psi @ (-k2 * t1 + 2 * k2 * t2 - 4 * k2 * t3)) / l2p

    B2 = B21 + 1.5 * (B22 + B23)
    return B21, B22, B23, B2


def residuals(lin: LinearData, derivs: ReactionDerivatives,
              crit: HopfCritical) -> dict[str, float]:
    """Defining-equation residuals of every intermediate quantity.

    Returns a dict with entries

    - ``quartic``: frequency polynomial at omega squared,
    - ``char_root``: characteristic function at i omega,
    - ``eigenvector``: M_{n_c}(i omega) phi,
    - ``adjoint``: psi0^T M_{n_c}(i omega),
    - ``normalization``: <psi, phi> - 1 under the delay bilinear form,
    - ``conjugate_pairing``: <psi, phi_bar e^{-i omega_c theta}>,
    - ``h020``/``h011``/``h2nc20``/``h2nc11``: center system residuals,
      relative to the right-hand side norm.

    All values should sit at roundoff level for a genuine crossing; anything
    above ~1e-8 indicates an inconsistent (lin, crit) pair.
    """
    d21 = _coupling(lin, crit)
    sc = spectral.mode_scalars(lin, d21, crit.n_c)
    w2 = crit.omega ** 2
    quartic = abs(w2 * w2 + float(sc.P) * w2 + float(sc.Q))
    char_root = abs(spectral.char_eval(lin, d21, crit.tau_c, crit.n_c,
                                       1j * crit.omega))

    eig = eigenpair(lin, crit)
    k2 = (crit.n_c / lin.ell) ** 2
    ph = cmath.exp(-1j * crit.omega * crit.tau_c)
    m = np.array([
        [1j * crit.omega + k2 * lin.d11 - lin.a11, -lin.a12],
        [-k2 * d21 * lin.v_star * ph - lin.a21,
         1j * crit.omega + k2 * lin.d22 - lin.a22],
    ], dtype=complex)
    eigenvector = float(np.linalg.norm(m @ eig.phi))
    psi0 = eig.psi / eig.eta
    adjoint = float(np.linalg.norm(psi0 @ m))
    normalization = abs(_pairing(lin, crit, eig.psi, eig.phi, 1j * crit.omega_c) - 1)
    conjugate_pairing = abs(_pairing(lin, crit, eig.psi, np.conj(eig.phi),
                                     -1j * crit.omega_c))

    asm = taylor_assembly(derivs, eig, lin, crit)
    cen = center_coeffs(lin, asm, crit)
    lp = math.sqrt(lin.ell * math.pi)
    l2p = math.sqrt(2 * lin.ell * math.pi)
    two_iw = 2j * crit.omega_c
    n2 = 2 * crit.n_c

    def center_resid(n, rate, h, rhs):
        r = mtilde(lin, crit, n, rate) @ h - rhs
        return float(np.linalg.norm(r) / max(1.0, np.linalg.norm(rhs)))

    return {
        "quartic": quartic,
        "char_root": char_root,
        "eigenvector": eigenvector,
        "adjoint": adjoint,
        "normalization": normalization,
        "conjugate_pairing": conjugate_pairing,
        "h020": center_resid(0, two_iw, cen.h020, asm.A20 / lp),
        "h011": center_resid(0, 0.0, cen.h011, asm.A11 / lp),
        "h2nc20": center_resid(n2, two_iw, cen.h2nc20, asm.At20 / l2p),
        "h2nc11": center_resid(n2, 0.0, cen.h2nc11, asm.At11 / l2p),
    }


def normal_form_at(lin: LinearData, derivs: ReactionDerivatives,
                   crit: HopfCritical) -> NormalForm:
    """Normal form at a given crossing, for arbitrary kinetics.

    The kinetics enter only through the derivative table, so this is the
    entry point for custom models; the linear data and the crossing must
    belong to the same parameters.
    """
    if crit.n_c < 1:
        raise MemoHopfError("normal form requires a spatially nonhomogeneous mode, n_c >= 1")
    eig = eigenpair(lin, crit)
    asm = taylor_assembly(derivs, eig, lin, crit)
    cen = center_coeffs(lin, asm, crit)
    B1 = b1_coefficient(eig)
    B21, B22, B23, B2 = b2_coefficients(derivs, eig, asm, cen, lin, crit)
    K1 = B1.real / 2
    K2 = B2.real / 6
    direction = "supercritical" if K1 * K2 < 0 else "subcritical"
    orbit_stability = "stable" if K2 < 0 else "unstable"
    return NormalForm(n_c=crit.n_c, d21=crit.d21, omega=crit.omega, tau_c=crit.tau_c,
                      B1=B1, B21=B21, B22=B22, B23=B23, B2=B2,
                      K1=K1, K2=K2, direction=direction, orbit_stability=orbit_stability)


def hopf_normal_form(params: ModelParams, d21, n_c: int, j: int = 0) -> NormalForm:
    """Full pipeline for the built-in kinetics at coupling d21, mode n_c.

    On failure the raised error carries a ``stage`` attribute naming the
    pipeline stage (equilibrium, crossing, eigenpair, taylor, center,
    coefficients) so callers can attribute the problem.
    """
    stage = "equilibrium"
    try:
        lin = model.linearize(params.with_d21(d21)).as_float()
        derivs = model.reaction_derivatives(params).as_float()
        stage = "crossing"
        crit = spectral.hopf_point(lin, float(d21), n_c, j=j)
        stage = "eigenpair"
        eig = eigenpair(lin, crit)
        stage = "taylor"
        asm = taylor_assembly(derivs, eig, lin, crit)
        stage = "center"
        cen = center_coeffs(lin, asm, crit)
        stage = "coefficients"
        B1 = b1_coefficient(eig)
        B21, B22, B23, B2 = b2_coefficients(derivs, eig, asm, cen, lin, crit)
    except MemoHopfError as err:
        err.stage = stage
        raise
    K1 = B1.real / 2
    K2 = B2.real / 6
    direction = "supercritical" if K1 * K2 < 0 else "subcritical"
    orbit_stability = "stable" if K2 < 0 else "unstable"
    return NormalForm(n_c=n_c, d21=float(d21), omega=crit.omega, tau_c=crit.tau_c,
                      B1=B1, B21=B21, B22=B22, B23=B23, B2=B2,
                      K1=K1, K2=K2, direction=direction, orbit_stability=orbit_stability)
