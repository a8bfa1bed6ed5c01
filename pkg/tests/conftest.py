"""Shared fixtures: exact and float parameter sets for the reference model,
and session-cached long simulations at the benchmark points reused by the
simulator and acceptance tests."""

from __future__ import annotations

import time
from fractions import Fraction as F

import numpy as np
import pytest

from memohopf import ModelParams
from memohopf.pdesim import Grid, simulate


@pytest.fixture(scope="session")
def exact_params():
    # baseline parameter set with exact rational entries
    return ModelParams(a=1, b=F(3, 10), c=F(1, 10), d11=F(6, 10), d22=F(8, 10),
                       d21=F(18, 5), ell=F(2), tau=0)


@pytest.fixture(scope="session")
def float_params():
    return ModelParams(a=1.0, b=0.3, c=0.1, d11=0.6, d22=0.8, d21=3.6, ell=2.0, tau=0.0)


def benchmark_init(base_u=0.2, base_v=2.5, amp_u=0.1, amp_v=0.1, n=1, ell=2.0):
    """Cosine-perturbed initial data used by the benchmark runs."""
    return (lambda x: base_u + amp_u * np.cos(n * x / ell),
            lambda x: base_v + amp_v * np.cos(n * x / ell))


def timed_run(d21, tau, t_end, init, nx=201):
    params = ModelParams(a=1.0, b=0.3, c=0.1, d11=0.6, d22=0.8,
                         d21=d21, ell=2.0, tau=tau)
    grid = Grid(nx=nx, ell=2.0)
    t0 = time.perf_counter()
    traj = simulate(params, grid, None, t_end, init)
    seconds = time.perf_counter() - t0
    return {"traj": traj, "seconds": seconds, "d21": d21, "tau": tau,
            "params": params, "grid": grid}


@pytest.fixture(scope="session")
def run_p1():
    # coupling above the first threshold, delay below the first crossing
    return timed_run(4.0, 2.0, 2000.0, benchmark_init(n=1))


@pytest.fixture(scope="session")
def run_p2():
    # just above the mode-1 first crossing
    return timed_run(3.6, 5.3, 2000.0, benchmark_init(n=1))


@pytest.fixture(scope="session")
def run_p3():
    # above the mode-2 first crossing, below the mode-1 one
    return timed_run(6.0, 2.0, 2000.0, benchmark_init(n=2))


@pytest.fixture(scope="session")
def run_p4():
    # far above both first crossings, seeded with the pure mode-2 cosine
    return timed_run(4.3, 5.2, 6000.0, benchmark_init(amp_u=0.1, amp_v=0.2, n=2))


@pytest.fixture(scope="session")
def run_transition():
    # mode-2 dominant seed plus a tiny mode-1 component; the mode-2 orbit is
    # transversally unstable at this point, so the trajectory trades mode 2
    # for mode 1 midway through the run
    init = (lambda x: 0.2 + 1e-4 * np.cos(x / 2.0) + 0.1 * np.cos(x),
            lambda x: 2.5 + 1e-4 * np.cos(x / 2.0) + 0.15 * np.cos(x))
    return timed_run(3.6, 6.8, 1400.0, init, nx=101)


@pytest.fixture(scope="session")
def run_onset():
    # two percent past the mode-1 first crossing at d21 = 3.6
    from memohopf.model import linearize
    from memohopf.spectral import hopf_delays

    lin = linearize(ModelParams(a=1, b=F(3, 10), c=F(1, 10), d11=F(6, 10),
                                d22=F(8, 10), d21=F(18, 5), ell=F(2), tau=0))
    tau = 1.02 * hopf_delays(lin, 3.6, 1)[0]
    init = (lambda x: 0.5 + 0.05 * np.cos(x / 2.0),
            lambda x: 2.5 + 0.05 * np.cos(x / 2.0))
    return timed_run(3.6, tau, 1200.0, init)
