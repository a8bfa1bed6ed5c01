"""Bifurcation analysis and simulation of a two-component reaction-diffusion
system with memory-based cross-diffusion.

Layers: :mod:`~memohopf.model` (kinetics, equilibrium, derivatives),
:mod:`~memohopf.spectral` (per-mode crossing analysis and stability region),
:mod:`~memohopf.normalform` (Hopf normal form on the center manifold),
:mod:`~memohopf.pdesim` (method-of-lines simulator and diagnostics) and
:mod:`~memohopf.cli` (JSON-configured command-line driver).
"""

from __future__ import annotations

__version__ = "0.1.0"

from . import errors, model, normalform, pdesim, spectral
from .errors import MemoHopfError
from .model import (
    LinearData,
    ModelParams,
    ReactionDerivatives,
    c_star,
    check_c0,
    linearize,
    positive_equilibrium,
    reaction_derivatives,
)
from .normalform import NormalForm, hopf_normal_form, normal_form_at
from .pdesim import (
    Grid,
    Trajectory,
    classify_attractor,
    mode_amplitudes,
    period_estimate,
    simulate,
)
from .spectral import (
    HopfCritical,
    critical_delay,
    d21_star,
    d21_threshold,
    double_hopf,
    hopf_delays,
    hopf_frequency,
    hopf_point,
    region_scan,
    unstable_mode_set,
)

__all__ = [
    "__version__",
    "errors",
    "model",
    "spectral",
    "normalform",
    "pdesim",
    "MemoHopfError",
    "ModelParams",
    "LinearData",
    "ReactionDerivatives",
    "positive_equilibrium",
    "linearize",
    "reaction_derivatives",
    "c_star",
    "check_c0",
    "HopfCritical",
    "d21_threshold",
    "d21_star",
    "hopf_frequency",
    "hopf_delays",
    "hopf_point",
    "critical_delay",
    "unstable_mode_set",
    "double_hopf",
    "region_scan",
    "NormalForm",
    "hopf_normal_form",
    "normal_form_at",
    "Grid",
    "Trajectory",
    "simulate",
    "mode_amplitudes",
    "classify_attractor",
    "period_estimate",
]
