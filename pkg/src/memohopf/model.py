"""Two-component predator-prey reaction model with memory-based cross-diffusion.

The concrete kinetics are logistic prey growth with a saturating (type-II)
functional response,

    f(u, v) = u(1 - u/a) - b u v / (1 + u)
    g(u, v) = b u v / (1 + u) - c v

posed on the interval (0, ell*pi) with Fickian diffusivities d11, d22, a
memory-based cross-diffusion coefficient d21 and memory delay tau acting on
the prey gradient.

Parameters supplied as :class:`fractions.Fraction` are propagated exactly
through every algebraic quantity here (equilibrium, Jacobian entries,
derivative values, thresholds); conversion to floating point happens at the
boundary to the spectral/normal-form analysis, via ``as_float()``.

For a different 2-component model of the same shape, construct
:class:`ReactionDerivatives` directly (or through
:meth:`ReactionDerivatives.from_functions`) and feed it to the normal-form
pipeline; nothing downstream depends on the concrete kinetics.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from fractions import Fraction

from .errors import ConditionC0ViolatedError, NotAdmissibleError

__all__ = [
    "ModelParams",
    "LinearData",
    "ReactionDerivatives",
    "positive_equilibrium",
    "linearize",
    "reaction_derivatives",
    "reaction_rhs",
    "c_star",
    "check_c0",
]


@dataclass(frozen=True)
class ModelParams:
    """Model parameters. Fields accept int, float or Fraction.

    a: prey carrying capacity (> 0)
    b: capture rate (> 0)
    c: predator mortality (> 0)
    d11, d22: Fickian diffusivities (>= 0)
    d21: memory-based cross diffusivity (>= 0)
    ell: domain scale, the domain is (0, ell*pi) (> 0)
    tau: memory delay (>= 0)
    """

    a: float | Fraction
    b: float | Fraction
    c: float | Fraction
    d11: float | Fraction
    d22: float | Fraction
    d21: float | Fraction
    ell: float | Fraction
    tau: float | Fraction = 0

    def __post_init__(self):
        for name in ("a", "b", "c", "ell"):
            val = getattr(self, name)
            if not math.isfinite(float(val)) or val <= 0:
                raise ValueError(f"{name} must be finite and positive, got {val!r}")
        for name in ("d11", "d22", "d21", "tau"):
            val = getattr(self, name)
            if not math.isfinite(float(val)) or val < 0:
                raise ValueError(f"{name} must be finite and nonnegative, got {val!r}")

    @property
    def admissible(self) -> bool:
        """True iff a positive coexistence equilibrium exists: b > c(1+a)/a."""
        return self.b * self.a > self.c * (1 + self.a)

    def with_d21(self, d21) -> "ModelParams":
        return replace(self, d21=d21)

    def with_tau(self, tau) -> "ModelParams":
        return replace(self, tau=tau)


@dataclass(frozen=True)
class LinearData:
    """Equilibrium and linearization data.

    Carries the equilibrium (u_star, v_star), gamma = c/(b-c), the Jacobian
    entries a11..a22 of the reaction at the equilibrium, and the diffusion
    data (d11, d22, ell) needed by the per-mode analysis.  The memory
    coupling enters through ``D2`` whose only nonzero entry is -d21*v_star.
    """

    u_star: float | Fraction
    v_star: float | Fraction
    gamma: float | Fraction
    a11: float | Fraction
    a12: float | Fraction
    a21: float | Fraction
    a22: float | Fraction
    d11: float | Fraction
    d22: float | Fraction
    d21: float | Fraction
    ell: float | Fraction

    @property
    def trace(self):
        return self.a11 + self.a22

    @property
    def det(self):
        return self.a11 * self.a22 - self.a12 * self.a21

    @property
    def D1(self):
        return ((self.d11, 0), (0, self.d22))

    @property
    def D2(self):
        return ((0, 0), (-self.d21 * self.v_star, 0))

    def as_float(self) -> "LinearData":
        """Copy with every field converted to float (analysis boundary)."""
        return LinearData(*(float(getattr(self, f)) for f in (
            "u_star", "v_star", "gamma", "a11", "a12", "a21", "a22",
            "d11", "d22", "d21", "ell")))


_DERIV_FIELDS = (
    "f_u", "f_v", "g_u", "g_v",
    "f_uu", "f_uv", "f_vv", "g_uu", "g_uv", "g_vv",
    "f_uuu", "f_uuv", "f_uvv", "f_vvv", "g_uuu", "g_uuv", "g_uvv", "g_vvv",
)


@dataclass(frozen=True)
class ReactionDerivatives:
    """All partial derivatives of (f, g) at the equilibrium through order 3.

    A custom 2-component model plugs into the normal-form pipeline by
    constructing this directly with its own derivative values.
    """

    f_u: float
    f_v: float
    g_u: float
    g_v: float
    f_uu: float
    f_uv: float
    f_vv: float
    g_uu: float
    g_uv: float
    g_vv: float
    f_uuu: float
    f_uuv: float
    f_uvv: float
    f_vvv: float
    g_uuu: float
    g_uuv: float
    g_uvv: float
    g_vvv: float

    def as_float(self) -> "ReactionDerivatives":
        return ReactionDerivatives(*(float(getattr(self, f)) for f in _DERIV_FIELDS))

    @classmethod
    def from_functions(cls, f, g, u_star, v_star, h=0.015625) -> "ReactionDerivatives":
        """Build the derivative table from plain callables f(u, v), g(u, v).

        4th-order central differences composed per variable, sharpened by one
        Richardson step (h and h/2), so smooth kinetics come out accurate to
        roughly 1e-10 and the downstream normal-form coefficients are
        insensitive to swapping in this table for closed forms.  The default
        step is dyadic (1/64): stencil nodes around dyadic expansion points
        are then exactly representable, which keeps the third-order stencils
        free of node-placement noise; it also balances truncation against
        cancellation in double precision.
        """
        vals = {}
        for name, fun in (("f", f), ("g", g)):
            for du, dv in ((1, 0), (0, 1), (2, 0), (1, 1), (0, 2),
                           (3, 0), (2, 1), (1, 2), (0, 3)):
                suffix = "_" + "u" * du + "v" * dv
                coarse = _mixed_partial(fun, u_star, v_star, du, dv, h)
                fine = _mixed_partial(fun, u_star, v_star, du, dv, h / 2)
                vals[name + suffix] = (16 * fine - coarse) / 15
        return cls(**{k: vals[k] for k in _DERIV_FIELDS})


def _central(fun, x, order, h):
    # 4th-order central stencils for orders 1..3
    if order == 0:
        return fun(x)
    if order == 1:
        return (-fun(x + 2 * h) + 8 * fun(x + h) - 8 * fun(x - h) + fun(x - 2 * h)) / (12 * h)
    if order == 2:
        return (-fun(x + 2 * h) + 16 * fun(x + h) - 30 * fun(x)
                + 16 * fun(x - h) - fun(x - 2 * h)) / (12 * h * h)
    if order == 3:
        return (fun(x - 3 * h) - 8 * fun(x - 2 * h) + 13 * fun(x - h)
                - 13 * fun(x + h) + 8 * fun(x + 2 * h) - fun(x + 3 * h)) / (8 * h ** 3)
    raise ValueError("order must be 0..3")


def _mixed_partial(fun, u, v, du, dv, h):
    inner = lambda uu: _central(lambda vv: fun(uu, vv), v, dv, h)
    return _central(inner, u, du, h)


def positive_equilibrium(params: ModelParams):
    """Coexistence equilibrium (u_star, v_star).

    u_star = c/(b-c) and v_star = (a-u_star)(1+u_star)/(ab); both reaction
    terms vanish there identically.  Exact when the inputs are exact.

    Raises
    ------
    NotAdmissibleError
        when b <= c(1+a)/a, i.e. no positive equilibrium exists.
    """
    a, b, c = params.a, params.b, params.c
    if not params.admissible:
        raise NotAdmissibleError(
            f"no positive equilibrium: require b > c(1+a)/a, got b={b}, c(1+a)/a={c * (1 + a) / a}")
    u = c / (b - c)
    v = (a - u) * (1 + u) / (a * b)
    return u, v


def reaction_rhs(params: ModelParams, u, v):
    """Reaction terms (f, g) at state (u, v).

    Pure arithmetic in the type of the inputs: exact for Fractions, and
    vectorized for numpy arrays when the parameters are floats.
    """
    a, b, c = params.a, params.b, params.c
    pred = b * u * v / (1 + u)
    return u * (1 - u / a) - pred, pred - c * v


def linearize(params: ModelParams) -> LinearData:
    """Equilibrium, gamma, and the reaction Jacobian at the equilibrium.

    a11 = gamma(a - 1 - 2 gamma)/(a(1 + gamma)), a12 = -c,
    a21 = (a - gamma)/(a(1 + gamma)), a22 = 0.
    """
    u, v = positive_equilibrium(params)
    a = params.a
    gamma = u
    a11 = gamma * (a - 1 - 2 * gamma) / (a * (1 + gamma))
    a12 = -params.c
    a21 = (a - gamma) / (a * (1 + gamma))
    a22 = 0 * a11  # exact zero in the input arithmetic
    return LinearData(u, v, gamma, a11, a12, a21, a22,
                      params.d11, params.d22, params.d21, params.ell)


def reaction_derivatives(params: ModelParams) -> ReactionDerivatives:
    """Closed-form partials of (f, g) through order 3 at the equilibrium.

    With s(u) = u/(1+u): s' = 1/(1+u)^2, s'' = -2/(1+u)^3, s''' = 6/(1+u)^4.
    Both reaction terms are affine in v, so every partial with two or more
    v-differentiations is exactly zero.
    """
    u, v = positive_equilibrium(params)
    a, b, c = params.a, params.b, params.c
    w = 1 + u
    s1 = 1 / w ** 2
    s2 = -2 / w ** 3
    s3 = 6 / w ** 4
    zero = 0 * s1
    return ReactionDerivatives(
        f_u=1 - 2 * u / a - b * v * s1,
        f_v=-b * u / w,
        g_u=b * v * s1,
        g_v=b * u / w - c,
        f_uu=-2 / a - b * v * s2,
        f_uv=-b * s1,
        f_vv=zero,
        g_uu=b * v * s2,
        g_uv=b * s1,
        g_vv=zero,
        f_uuu=-b * v * s3,
        f_uuv=-b * s2,
        f_uvv=zero,
        f_vvv=zero,
        g_uuu=b * v * s3,
        g_uuv=b * s2,
        g_uvv=zero,
        g_vvv=zero,
    )


def check_c0(params: ModelParams) -> bool:
    """Sign condition (a-1)/2 < gamma < a.

    When it holds, the per-mode trace is negative and the per-mode
    determinant positive for every mode, so the delay-free equilibrium is
    stable and only the memory term can destabilize it.
    """
    if not params.admissible:
        return False
    gamma = params.c / (params.b - params.c)
    return (params.a - 1) / 2 < gamma < params.a


def c_star(params: ModelParams):
    """Threshold c_star = gamma^2 (a - 1 - 2 gamma)^2 / (2a(1+gamma)(a-gamma)).

    c < c_star guarantees P_n > 0 for every mode (single positive frequency
    root).  Zero exactly when a11 = 0 (gamma = (a-1)/2), which is reported,
    not hidden: the c < c_star guard then fails for every c > 0.

    Raises
    ------
    ConditionC0ViolatedError
        when gamma lies outside ((a-1)/2, a).
    """
    if not check_c0(params):
        gamma = params.c / (params.b - params.c) if params.b > params.c else None
        raise ConditionC0ViolatedError(
            f"require (a-1)/2 < gamma < a, got gamma={gamma}, a={params.a}")
    a = params.a
    gamma = params.c / (params.b - params.c)
    num = gamma ** 2 * (a - 1 - 2 * gamma) ** 2
    return num / (2 * a * (1 + gamma) * (a - gamma))
