"""Exception types shared across the engine.

The CLI maps these onto exit codes: InputError -> 2, UnsupportedConfiguration
-> 3.  EngineDefect signals an internal verification failure (a catalog entry
that does not forward-verify, for instance) and is never a valid answer.
"""


class FreeTorusError(Exception):
    """Base class for engine errors."""

    def __init__(self, message, diagnostics=None):
        super().__init__(message)
        self.message = message
        self.diagnostics = diagnostics or {}


class InputError(FreeTorusError):
    """Malformed payloads and invariant violations in inputs."""


class NonPrimitiveEulerError(InputError):
    """Euler class/matrix does not define a simply-connected total space."""


class UnsupportedConfiguration(FreeTorusError):
    """Base/Euler pairs outside the supported knowledge base."""


class InfeasibleError(FreeTorusError):
    """A construction was requested for an input that fails its feasibility test."""


class EngineDefect(FreeTorusError):
    """Internal cross-verification failed; indicates a bug, not an answer."""
