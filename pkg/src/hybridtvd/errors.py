"""Exception types shared across the package."""


class ConfigurationError(ValueError):
    """Invalid run, scheme, grid or sensor configuration."""


class PositivityError(RuntimeError):
    """Density or pressure became non-positive.

    ``index`` is the offending cell (interior numbering) and ``state`` an
    optional dict of primitive values dumped for diagnosis.
    """

    def __init__(self, message, index=None, state=None):
        super().__init__(message)
        self.index = index
        self.state = state


class UnsupportedTimeError(ValueError):
    """The exact-solution oracle is not valid at the requested time."""


class NoBreakingError(ValueError):
    """Initial data never steepens (min u0' >= 0), so no breaking time."""


class DegenerateSpeedError(ValueError):
    """A bound function was evaluated at a zero CFL number."""


class TVDViolation(RuntimeError):
    """Total variation increased during a run in strict mode."""

    def __init__(self, message, step=None, increase=None):
        super().__init__(message)
        self.step = step
        self.increase = increase
