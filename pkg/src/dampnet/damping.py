"""Nonlinear damping shapes and the exact solution of the damping ODE.

Along a characteristic curve the transported quantity obeys
``dz/dt = -mu(t) * g_hat(z)`` with a separable right-hand side. Writing
``potential(z)`` for an antiderivative of ``1/g_hat``, separation of
variables gives ``potential(z(t1)) = potential(z(t0)) - integral(mu, t0, t1)``,
so one damping step reduces to shifting the potential by the accumulated
damping mass and inverting. Both directions are exact for the supported
shapes.

Supported shapes are "none" and monomials ``coefficient * z**degree``. The
default monomial coefficients (1, 15, 200, 2500 for degrees 1..4) are
normalized so that the integral of the shape over [0, 0.1] equals 1/200
for every degree, which makes runs with different degrees comparable.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InfeasibleError
from .timefuncs import TimeFunction

__all__ = [
    "DampingShape",
    "DEFAULT_MONOMIAL_COEFFS",
    "g_hat",
    "damping_potential",
    "damping_potential_inv",
    "apply_damping_mass",
    "invert_damping_mass",
    "forward_damp",
    "backward_damp",
]

# Degree -> coefficient normalized to integral 1/200 over [0, 0.1].
DEFAULT_MONOMIAL_COEFFS = {1: 1.0, 2: 15.0, 3: 200.0, 4: 2500.0}


@dataclass(frozen=True)
class DampingShape:
    """State-dependent damping factor g_hat(z).

    kind "none" means g_hat == 0 (no damping); kind "monomial" means
    ``g_hat(z) = coefficient * z**degree`` with ``degree >= 1`` and
    ``coefficient > 0``, so g_hat(0) = 0 and g_hat > 0 for z > 0.
    """

    kind: str = "none"
    degree: int = 0
    coefficient: float = 0.0

    def __post_init__(self):
        if self.kind == "none":
            return
        if self.kind != "monomial":
            raise ValueError(f"unknown damping kind {self.kind!r}")
        if self.degree < 1:
            raise ValueError("monomial degree must be >= 1")
        if self.coefficient <= 0.0:
            raise ValueError("monomial coefficient must be > 0")

    @classmethod
    def none(cls) -> "DampingShape":
        return cls(kind="none")

    @classmethod
    def monomial(cls, degree: int, coefficient: float | None = None) -> "DampingShape":
        if coefficient is None:
            try:
                coefficient = DEFAULT_MONOMIAL_COEFFS[degree]
            except KeyError:
                raise ValueError(
                    f"no default coefficient for degree {degree}; pass one explicitly"
                ) from None
        return cls(kind="monomial", degree=int(degree), coefficient=float(coefficient))

    def to_dict(self) -> dict:
        if self.kind == "none":
            return {"kind": "none"}
        return {"kind": "monomial", "degree": self.degree, "coefficient": self.coefficient}

    @classmethod
    def from_dict(cls, d: dict) -> "DampingShape":
        if d["kind"] == "none":
            return cls.none()
        return cls.monomial(int(d["degree"]), d.get("coefficient"))


def g_hat(shape: DampingShape, z):
    """Evaluate the damping shape at ``z >= 0`` (scalar or array)."""
    z = np.asarray(z, dtype=float)
    if np.any(z < 0.0):
        raise ValueError("damping shape domain is z >= 0")
    if shape.kind == "none":
        out = np.zeros_like(z)
    else:
        out = shape.coefficient * z**shape.degree
    return float(out) if out.ndim == 0 else out


def damping_potential(shape: DampingShape, z):
    """Antiderivative at ``z > 0`` of the reciprocal shape ``1/g_hat``.

    Strictly increasing, hence invertible on its range: all reals for
    degree 1, the negative half-line for degree >= 2.
    """
    _require_monomial(shape)
    z = np.asarray(z, dtype=float)
    if np.any(z <= 0.0):
        raise ValueError("damping potential requires z > 0")
    n, c = shape.degree, shape.coefficient
    if n == 1:
        out = np.log(z) / c
    else:
        out = z ** (1 - n) / (c * (1 - n))
    return float(out) if out.ndim == 0 else out


def damping_potential_inv(shape: DampingShape, y):
    """Inverse of :func:`damping_potential`; raises on values outside its range."""
    _require_monomial(shape)
    y = np.asarray(y, dtype=float)
    n, c = shape.degree, shape.coefficient
    if n == 1:
        out = np.exp(c * y)
    else:
        if np.any(y >= 0.0):
            raise ValueError(
                f"value outside the potential range (-inf, 0) for degree {n}"
            )
        out = (c * (1 - n) * y) ** (1.0 / (1 - n))
    return float(out) if out.ndim == 0 else out


def apply_damping_mass(shape: DampingShape, z_start, mass):
    """Damp ``z_start >= 0`` forward by accumulated damping mass ``mass >= 0``.

    Always well defined: damping shrinks z toward 0 and the potential range
    is approached but never exited. Zero is a fixed point.
    """
    z_start = np.asarray(z_start, dtype=float)
    mass = np.asarray(mass, dtype=float)
    if np.any(z_start < 0.0):
        raise ValueError("z_start must be non-negative")
    if np.any(mass < 0.0):
        raise ValueError("damping mass must be non-negative")
    if shape.kind == "none":
        out = np.broadcast_arrays(z_start, mass)[0].astype(float, copy=True)
        return float(out) if out.ndim == 0 else out
    z_b, m_b = np.broadcast_arrays(z_start, mass)
    out = np.zeros(z_b.shape, dtype=float)
    pos = z_b > 0.0
    if np.any(pos):
        y = damping_potential(shape, z_b[pos]) - m_b[pos]
        out[pos] = damping_potential_inv(shape, y)
    return float(out) if out.ndim == 0 else out


def invert_damping_mass(shape: DampingShape, z_end, mass):
    """Upstream quantity that damps down to ``z_end`` over damping mass ``mass``.

    Exact inverse of :func:`apply_damping_mass`. For degree >= 2 the result
    blows up in finite mass: if ``potential(z_end) + mass`` leaves the
    potential range there is no finite upstream value and InfeasibleError
    is raised (the caller annotates it with the offending arc).
    """
    z_end = np.asarray(z_end, dtype=float)
    mass = np.asarray(mass, dtype=float)
    if np.any(z_end < 0.0):
        raise ValueError("z_end must be non-negative")
    if np.any(mass < 0.0):
        raise ValueError("damping mass must be non-negative")
    if shape.kind == "none":
        out = np.broadcast_arrays(z_end, mass)[0].astype(float, copy=True)
        return float(out) if out.ndim == 0 else out
    z_b, m_b = np.broadcast_arrays(z_end, mass)
    out = np.zeros(z_b.shape, dtype=float)
    pos = z_b > 0.0
    if np.any(pos):
        y = damping_potential(shape, z_b[pos]) + m_b[pos]
        if shape.degree >= 2 and np.any(y >= 0.0):
            k = int(np.argmax(y >= 0.0))
            raise InfeasibleError(
                "backward damping blows up: damping mass exceeds the "
                "capacity of the downstream quantity",
                damping_mass=float(m_b[pos][k]),
                z_end=float(z_b[pos][k]),
            )
        out[pos] = damping_potential_inv(shape, y)
    return float(out) if out.ndim == 0 else out


def forward_damp(shape: DampingShape, mu: TimeFunction, t_start, t_end, z_start):
    """Solve ``dz/dt = -mu(t) g_hat(z)`` from ``t_start`` to ``t_end >= t_start``."""
    _check_order(t_start, t_end)
    return apply_damping_mass(shape, z_start, mu.integral(t_start, t_end))


def backward_damp(shape: DampingShape, mu: TimeFunction, t_start, t_end, z_end):
    """End-value problem: the quantity at ``t_start`` that damps to ``z_end``
    at ``t_end``. Raises InfeasibleError when no finite value exists."""
    _check_order(t_start, t_end)
    return invert_damping_mass(shape, z_end, mu.integral(t_start, t_end))


def _check_order(t_start, t_end):
    if np.any(np.asarray(t_start) > np.asarray(t_end)):
        raise ValueError("t_start must not exceed t_end")


def _require_monomial(shape: DampingShape):
    if shape.kind != "monomial":
        raise ValueError("damping potential is only defined for monomial shapes")
