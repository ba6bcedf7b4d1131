"""Exception hierarchy shared across the package.

The CLI maps these onto distinct exit codes (see ``dampnet.cli``):
schema errors -> 2, network validation -> 3, control infeasibility -> 4,
numerical failures -> 5.
"""

from __future__ import annotations


class DampnetError(Exception):
    """Base class for all package-specific errors."""


class SchemaError(DampnetError):
    """Scenario file is malformed or violates the config schema."""


class NetworkValidationError(DampnetError):
    """A network operation was attempted on an invalid network."""

    def __init__(self, violations: list[str]):
        self.violations = list(violations)
        super().__init__("invalid network: " + "; ".join(self.violations))


class NumericsError(DampnetError):
    """A numerical routine failed (non-convergence, negative state, ...)."""


class NonInvertibleError(NumericsError):
    """An antiderivative could not be inverted because the integrand is
    not strictly positive on the search bracket."""


class CouplingError(NumericsError):
    """Junction coupling could not obtain a distribution parameter or an
    arriving-flux sample for a required time."""


class InfeasibleError(DampnetError):
    """Backward damping inversion has no finite solution.

    For super-linear damping the backward ODE blows up in finite time once
    the accumulated damping mass exceeds the capacity of the prescribed
    downstream quantity; no finite inflow can deliver the target. Carries
    enough context to report the offending arc and injection time when
    raised from the control recursion.
    """

    def __init__(
        self,
        message: str,
        *,
        damping_mass: float | None = None,
        z_end: float | None = None,
        arc_id: str | None = None,
        t_in: float | None = None,
    ):
        self.damping_mass = damping_mass
        self.z_end = z_end
        self.arc_id = arc_id
        self.t_in = t_in
        super().__init__(message)

    def __str__(self) -> str:  # keep annotations visible in CLI output
        base = super().__str__()
        extra = []
        if self.arc_id is not None:
            extra.append(f"arc={self.arc_id}")
        if self.t_in is not None:
            extra.append(f"t_in={self.t_in:.6g}")
        if self.damping_mass is not None:
            extra.append(f"damping_mass={self.damping_mass:.6g}")
        if self.z_end is not None:
            extra.append(f"z_end={self.z_end:.6g}")
        return base + (" [" + ", ".join(extra) + "]" if extra else "")
