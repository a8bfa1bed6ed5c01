"""Center-manifold reduction: eigenpairs, Taylor blocks, K1/K2."""

from __future__ import annotations

import cmath

import mpmath
import numpy as np
import pytest

from memohopf.errors import (
    MemoHopfError,
    NoPositiveRootError,
    NotAdmissibleError,
    ResonantMatrixError,
)
from memohopf.model import (
    ModelParams,
    linearize,
    reaction_derivatives,
    reaction_rhs,
    ReactionDerivatives,
    positive_equilibrium,
)
from memohopf.normalform import (
    TaylorAssembly,
    b1_coefficient,
    b1_operator_form,
    center_coeffs,
    eigenpair,
    eta_closed_form,
    hopf_normal_form,
    mtilde,
    normal_form_at,
    residuals,
    taylor_assembly,
)
from memohopf.spectral import HopfCritical, hopf_frequency, hopf_delays, hopf_point, transversality

# frozen normal-form values, pinned from the first verified run
K1_36_1 = 0.05966201747024701
K2_36_1 = -1.562374855888976
K1_60_2 = 0.17339427945161737
K2_60_2 = -2.228323558936042
K1_40_1 = 0.07367360593096146
K2_40_1 = -1.4553417843278798
K1_40_2 = 0.05042184729252745
K2_40_2 = -2.961877681476024
K1_36_1_J1 = 0.028443509107732058
K2_36_1_J1 = -2.3307803215671625

POINTS = [(3.6, 1), (4.0, 1), (4.0, 2), (5.0, 2), (6.0, 2)]


@pytest.fixture(scope="module")
def setup(exact_params):
    lin = {}
    crit = {}
    for d21, n in POINTS:
        lf = linearize(exact_params.with_d21(d21)).as_float()
        lin[(d21, n)] = lf
        crit[(d21, n)] = hopf_point(lf, d21, n)
    derivs = reaction_derivatives(exact_params).as_float()
    return lin, crit, derivs


def test_k_values_frozen(exact_params):
    for d21, n, j, k1, k2 in [
        (3.6, 1, 0, K1_36_1, K2_36_1),
        (6.0, 2, 0, K1_60_2, K2_60_2),
        (4.0, 1, 0, K1_40_1, K2_40_1),
        (4.0, 2, 0, K1_40_2, K2_40_2),
        (3.6, 1, 1, K1_36_1_J1, K2_36_1_J1),
    ]:
        nf = hopf_normal_form(exact_params, d21, n, j=j)
        assert nf.K1 == pytest.approx(k1, rel=1e-12)
        assert nf.K2 == pytest.approx(k2, rel=1e-12)
        assert nf.direction == "supercritical"
        assert nf.orbit_stability == "stable"
        assert nf.K1 * nf.K2 < 0 and nf.K2 < 0
        assert nf.B2 == pytest.approx(nf.B21 + 1.5 * (nf.B22 + nf.B23), rel=1e-14)
        assert nf.K1 == pytest.approx(nf.B1.real / 2, rel=1e-15)
        assert nf.K2 == pytest.approx(nf.B2.real / 6, rel=1e-15)


def test_eta_closed_form_matches_bilinear(setup):
    lin, crit, _ = setup
    for key in POINTS:
        eig = eigenpair(lin[key], crit[key])
        assert abs(eig.eta - eta_closed_form(lin[key], crit[key])) < 1e-12


def test_b1_two_routes_agree(setup):
    lin, crit, _ = setup
    for key in POINTS:
        eig = eigenpair(lin[key], crit[key])
        assert abs(b1_coefficient(eig) - b1_operator_form(lin[key], crit[key], eig)) < 1e-12


def test_k1_equals_rescaled_transversality(setup):
    # K1 = tau_c * Re(d lambda / d tau) at the crossing
    lin, crit, _ = setup
    for (d21, n) in POINTS:
        c = crit[(d21, n)]
        dl = transversality(lin[(d21, n)], d21, c)
        eig = eigenpair(lin[(d21, n)], c)
        k1 = b1_coefficient(eig).real / 2
        assert k1 == pytest.approx(c.tau_c * dl.real, rel=1e-10)
        assert k1 > 0


def test_conjugate_symmetry_and_real_coefficients(setup):
    lin, crit, derivs = setup
    for key in POINTS:
        eig = eigenpair(lin[key], crit[key])
        asm = taylor_assembly(derivs, eig, lin[key], crit[key])
        np.testing.assert_allclose(asm.A02, np.conj(asm.A20), rtol=0, atol=1e-15)
        np.testing.assert_allclose(asm.Ad02, np.conj(asm.Ad20), rtol=0, atol=1e-15)
        np.testing.assert_allclose(asm.At02, np.conj(asm.At20), rtol=0, atol=1e-15)
        # the 11-blocks pair phi with its conjugate, so they are real
        assert np.max(np.abs(asm.A11.imag)) < 1e-15
        assert np.max(np.abs(asm.Ad11.imag)) < 1e-15
        cen = center_coeffs(lin[key], asm, crit[key])
        assert np.max(np.abs(cen.h011.imag)) < 1e-12
        assert np.max(np.abs(cen.h2nc11.imag)) < 1e-12


def test_residual_suite_roundoff(setup):
    lin, crit, derivs = setup
    for key in POINTS:
        res = residuals(lin[key], derivs, crit[key])
        assert set(res) == {"quartic", "char_root", "eigenvector", "adjoint",
                            "normalization", "conjugate_pairing",
                            "h020", "h011", "h2nc20", "h2nc11"}
        for name, val in res.items():
            assert val < 1e-10, (key, name, val)


def test_mtilde_scale_consistency(setup):
    # M~_n(tau_c lam) = tau_c M_n(lam) for the unscaled per-mode matrix
    lin, crit, _ = setup
    lf = lin[(3.6, 1)]
    c = crit[(3.6, 1)]
    rng = np.random.default_rng(7)
    for _ in range(10):
        lam = complex(rng.normal(), rng.normal())
        for n in range(5):
            kn2 = (n / lf.ell) ** 2
            m_unscaled = np.array([
                [lam + kn2 * lf.d11 - lf.a11, -lf.a12],
                [-kn2 * 3.6 * lf.v_star * cmath.exp(-lam * c.tau_c) - lf.a21,
                 lam + kn2 * lf.d22 - lf.a22],
            ], dtype=complex)
            diff = mtilde(lf, c, n, c.tau_c * lam) - c.tau_c * m_unscaled
            scale = c.tau_c * float(np.max(np.abs(m_unscaled)))
            assert np.max(np.abs(diff)) < 1e-12 * max(1.0, scale)


def test_omega_c_rescaling_exact(setup):
    _, crit, _ = setup
    for key in POINTS:
        assert crit[key].omega_c == crit[key].tau_c * crit[key].omega


def test_taylor_blocks_match_directional_derivatives(setup, float_params):
    # oracle: high-precision directional derivatives of
    # G(z1, z2) = tau_c F(u* + z1 phi + z2 conj(phi)), computed with mpmath;
    # A20 = d^2 G / dz1^2, A11 = 2 d^2 G / dz1 dz2, A21 = 3 d^3 G / dz1^2 dz2
    lin, crit, derivs = setup
    key = (3.6, 1)
    eig = eigenpair(lin[key], crit[key])
    asm = taylor_assembly(derivs, eig, lin[key], crit[key])
    tau = crit[key].tau_c
    us, vs = positive_equilibrium(float_params)
    phi = eig.phi
    phib = np.conj(phi)
    mpmath.mp.dps = 30

    def G(z1, z2, comp):
        u = us + z1 * phi[0] + z2 * phib[0]
        v = vs + z1 * phi[1] + z2 * phib[1]
        f, g = reaction_rhs(float_params, u, v)
        return tau * (f if comp == 0 else g)

    for comp in (0, 1):
        a20 = mpmath.diff(lambda z: G(z, mpmath.mpf(0), comp), 0, 2)
        a11 = 2 * mpmath.diff(lambda z1, z2: G(z1, z2, comp), (0, 0), (1, 1))
        a21 = 3 * mpmath.diff(lambda z1, z2: G(z1, z2, comp), (0, 0), (2, 1))
        assert abs(complex(a20) - asm.A20[comp]) < 1e-12
        assert abs(complex(a11) - asm.A11[comp]) < 1e-12
        assert abs(complex(a21) - asm.A21[comp]) < 1e-10

    # random-direction quadratic identity:
    # d^2/ds^2 G(s z1, s z2) = z1^2 A20 + z1 z2 A11 + z2^2 A02
    rng = np.random.default_rng(11)
    for _ in range(5):
        z1, z2 = rng.normal(size=2)
        for comp in (0, 1):
            dd = mpmath.diff(lambda s: G(s * z1, s * z2, comp), 0, 2)
            expect = z1 * z1 * asm.A20[comp] + z1 * z2 * asm.A11[comp] \
                + z2 * z2 * asm.A02[comp]
            assert abs(complex(dd) - expect) < 1e-11


def test_k2_invariant_under_fd_derivatives(setup, float_params):
    # replacing the closed-form derivative table by a finite-difference one
    # must leave K2 unchanged to 1e-9 relative
    lin, crit, _ = setup
    us, vs = positive_equilibrium(float_params)
    fd = ReactionDerivatives.from_functions(
        lambda u, v: reaction_rhs(float_params, u, v)[0],
        lambda u, v: reaction_rhs(float_params, u, v)[1],
        us, vs)
    for key in [(3.6, 1), (6.0, 2)]:
        nf_fd = normal_form_at(lin[key], fd, crit[key])
        nf_cf = normal_form_at(lin[key], reaction_derivatives(float_params).as_float(), crit[key])
        assert nf_fd.K2 == pytest.approx(nf_cf.K2, rel=1e-9)
        assert nf_fd.K1 == pytest.approx(nf_cf.K1, rel=1e-12)
        assert nf_fd.direction == nf_cf.direction


def test_resonant_center_system_detected(setup):
    # crafting omega = omega_2 / 2 at the mode-2 crossing delay makes the
    # 2 n_c system matrix equal tau_c M_2(i omega_2), which is singular
    lin, crit, _ = setup
    lf = lin[(3.6, 1)]
    w2 = hopf_frequency(lf, 3.6, 2)
    t2 = hopf_delays(lf, 3.6, 2)[0]
    fake = HopfCritical(n_c=1, omega=w2 / 2, tau_c=t2, d21=3.6)
    one = np.array([1.0 + 0j, 1.0 + 0j])
    asm = TaylorAssembly(A20=one, A11=one, A02=one, A21=one,
                         Ad20=one, Ad11=one, Ad02=one,
                         At20=one, At11=one, At02=one)
    with pytest.raises(ResonantMatrixError):
        center_coeffs(lf, asm, fake)


def test_mode_zero_rejected(setup):
    lin, _, derivs = setup
    fake = HopfCritical(n_c=0, omega=0.3, tau_c=5.0, d21=3.6)
    with pytest.raises(MemoHopfError):
        normal_form_at(lin[(3.6, 1)], derivs, fake)


def test_pipeline_stage_attribution(exact_params):
    with pytest.raises(NoPositiveRootError) as exc:
        hopf_normal_form(exact_params, 1.0, 1)
    assert exc.value.stage == "crossing"
    bad = ModelParams(a=1, b=1, c=2, d11=1, d22=1, d21=3.6, ell=2)
    with pytest.raises(NotAdmissibleError) as exc:
        hopf_normal_form(bad, 3.6, 1)
    assert exc.value.stage == "equilibrium"
