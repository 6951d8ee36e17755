"""Exception types shared across the library."""


class LightconeError(Exception):
    """Base class for all library errors."""


class DegenerateChain(LightconeError):
    """Spectral decomposition of the closed chain is degenerate (d = 0)."""


class ChiralityViolated(LightconeError):
    """A jet required to be chirally symmetric fails the trace conditions."""


class OnLightCone(LightconeError):
    """Kernel with a logarithmic singularity evaluated on the cone boundary."""


class ZeroMomentum(LightconeError):
    """Kernel evaluated at vanishing spatial momentum."""


class TooCloseToSingularSet(LightconeError):
    """Evaluation point too close to a singular set for the requested scheme."""


class QuadratureNotConverged(LightconeError):
    """Successive quadrature refinements disagree beyond tolerance."""


class UnsupportedKernel(LightconeError):
    """Operation not defined for this kernel id."""


class SpacelikeQ(LightconeError):
    """Query momentum is spacelike where a timelike one is required."""


class OutsideUpperCone(LightconeError):
    """Query momentum is outside the open upper mass cone."""


class FitUnstable(LightconeError):
    """Least-squares scaling fit did not stabilize."""


class InvalidMode(LightconeError):
    """Field mode violates its on-shell or transversality constraints."""


class ShellViolation(LightconeError):
    """Fermionic mode on the wrong mass shell for the requested pairing."""


class OffShellField(LightconeError):
    """Maxwell field contains an off-shell mode."""


class ZeroMomentumMode(LightconeError):
    """Maxwell mode with vanishing spatial momentum where 1/|k| is needed."""


class TailNotNegligible(LightconeError):
    """Truncated tail of an unbounded integral exceeds tolerance."""


class ConfigInvalid(LightconeError):
    """Run configuration failed validation."""


class SuiteFailed(LightconeError):
    """At least one verification check failed."""


class IoError(LightconeError):
    """Could not read or write a requested file."""
