"""Exception types shared across the package."""


class SingularityError(ValueError):
    """Two ions coincide under the minimal image, so 1/r is undefined."""


class IntegrationBlowupError(RuntimeError):
    """The integrator produced a non-finite state."""

    def __init__(self, step_index: int, detail: str = ""):
        self.step_index = step_index
        msg = f"integration blew up at step {step_index}"
        if detail:
            msg += f" ({detail})"
        super().__init__(msg)


class IntegralityError(ValueError):
    """A winding-number sum did not land on an integer within tolerance."""

    def __init__(self, residual: float):
        self.residual = residual
        super().__init__(
            f"winding sum off an integer by {residual:.3e}; "
            "phase tie at +/-pi or corrupted input"
        )


class ChainOrderError(RuntimeError):
    """Ion labels are no longer in ascending-x order around the ring."""


class ConfigError(ValueError):
    """Invalid, inconsistent or unknown configuration input."""


class ExperimentAborted(RuntimeError):
    """Too many trajectories failed for the ensemble to be trusted."""
