"""Exception hierarchy shared by all analysis and simulation modules.

Every domain failure derives from :class:`MemoHopfError` so callers (and the
command-line front end) can distinguish model/analysis problems from plain
programming errors.  Exceptions raised inside a multi-stage pipeline carry a
``stage`` attribute naming the stage that failed.
"""

from __future__ import annotations


class MemoHopfError(Exception):
    """Base class for all domain errors raised by this package."""

    #: name of the pipeline stage that raised, when applicable
    stage: str | None = None


class NotAdmissibleError(MemoHopfError):
    """No positive coexistence equilibrium exists for these parameters."""


class ConditionC0ViolatedError(MemoHopfError):
    """gamma lies outside ((a-1)/2, a), so the sign structure assumed by the
    stability analysis does not hold."""


class InvalidModeError(MemoHopfError):
    """Mode index outside the valid range for the requested quantity."""


class NoPositiveRootError(MemoHopfError):
    """The mode's frequency quartic has no positive root: no Hopf frequency."""


class DegenerateRootError(MemoHopfError):
    """The critical root is not simple; implicit differentiation breaks down."""


class StableForAllTauError(MemoHopfError):
    """No mode is destabilized at this memory diffusivity; the equilibrium
    stays stable for every delay."""


class NoSignChangeError(MemoHopfError):
    """Bracketing interval does not straddle a curve intersection."""


class SingularNormalizationError(MemoHopfError):
    """Adjoint pairing of the raw eigenvectors vanishes; eigenpair cannot be
    normalized."""


class ResonantMatrixError(MemoHopfError):
    """A center-manifold solve matrix is singular (resonance); the normal form
    is not valid at this point."""


class BlowUpError(MemoHopfError):
    """Simulated field exceeded the overflow guard or became non-finite."""

    def __init__(self, message: str, t: float):
        super().__init__(message)
        self.t = t


class InvalidStepError(MemoHopfError):
    """Requested time step violates the delay-divisibility or diffusion
    stability constraint."""


class WindowTooShortError(MemoHopfError):
    """Classification window shorter than the required number of oscillation
    periods, or outside the trajectory span."""


class TooFewPeaksError(MemoHopfError):
    """Fewer than the minimum number of oscillation peaks in the window."""


class ConfigError(MemoHopfError):
    """Run configuration is unparseable or invalid; message names the key."""
