"""Exception hierarchy for physically or numerically degenerate inputs."""


class DuctwaveError(Exception):
    """Base class for all ductwave-specific failures."""


class NegativeDiscriminant(DuctwaveError):
    """The mean-velocity quadratic has no real root: no subsonic steady flow
    exists for this temperature profile and inlet state."""


class NonPositiveRoot(DuctwaveError):
    """The selected mean-velocity root is not positive; inlet data inconsistent."""


class SonicSingularity(DuctwaveError):
    """gamma*M^2 is too close to 1, where the density-gradient formula blows up."""


class DegenerateDenominator(DuctwaveError):
    """2*a1*ubar + a2 vanished; the curvature chain for the mean pressure is singular."""


class ZeroMeanFlow(DuctwaveError):
    """Momentum-equation coefficients are undefined for ubar <= 0."""


class NonFiniteLoss(DuctwaveError):
    """A loss or gradient evaluation produced NaN or infinity."""


class LineSearchFailure(DuctwaveError):
    """Strong-Wolfe line search could not find an acceptable step.

    Training reports this as a termination reason rather than raising; the
    exception exists for callers that drive the optimizer directly.
    """


class ZeroReference(DuctwaveError):
    """Relative error is undefined against an identically zero reference field."""


class ZeroC(DuctwaveError):
    """The momentum coefficient C is (numerically) zero; velocity elimination fails."""


class SingularZeta1(DuctwaveError):
    """Leading coefficient of the governing equation vanished on the domain."""


class DegenerateHomogeneous(DuctwaveError):
    """The homogeneous shooting solution vanishes at the far boundary (resonance
    of the shooting basis)."""


class DegenerateBoundarySystem(DuctwaveError):
    """The 2x2 boundary system of the closed-form uniform solution is singular
    (duct resonance of the exponential basis)."""
