"""Constant-plus-sinusoid time functions with exact antiderivatives.

All time-dependent coefficients in this package (arc velocities, damping
factors, demand mean-reversion levels) belong to the family

    f(t) = constant + sum_k amplitude_k * sin(angular_factor_k * pi * t + phase_k)

which is closed under antidifferentiation (each sinusoid integrates to a
cosine), so definite integrals are exact and the running integral can be
inverted robustly. Piecewise or symbolic user functions are deliberately
not supported; exactness of the antiderivative is part of the contract.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import NonInvertibleError, NumericsError

__all__ = ["SinTerm", "TimeFunction", "advance_by_integral"]

_PI = math.pi


@dataclass(frozen=True)
class SinTerm:
    """One sinusoid ``amplitude * sin(angular_factor * pi * t + phase)``.

    ``angular_factor`` multiplies ``pi * t``; a function written as
    ``sin(2*pi*t)`` has ``angular_factor=2``.
    """

    amplitude: float
    angular_factor: float
    phase: float = 0.0


@dataclass(frozen=True)
class TimeFunction:
    """Deterministic scalar function of time, total on all finite t."""

    constant: float = 0.0
    terms: tuple[SinTerm, ...] = field(default_factory=tuple)

    def __post_init__(self):
        object.__setattr__(self, "terms", tuple(self.terms))

    @classmethod
    def const(cls, value: float) -> "TimeFunction":
        return cls(constant=float(value))

    def __call__(self, t):
        """Evaluate at scalar ``t`` or elementwise on an ndarray."""
        if isinstance(t, np.ndarray):
            out = np.full(t.shape, self.constant, dtype=float)
            for term in self.terms:
                out += term.amplitude * np.sin(term.angular_factor * _PI * t + term.phase)
            return out
        value = self.constant
        for term in self.terms:
            value += term.amplitude * math.sin(term.angular_factor * _PI * t + term.phase)
        return value

    def antiderivative(self, t):
        """Value at ``t`` of the antiderivative that vanishes nowhere special.

        Only differences of this function are meaningful; the integration
        constant is fixed arbitrarily (zero cosine offset).
        """
        if isinstance(t, np.ndarray):
            out = self.constant * t.astype(float, copy=True)
            for term in self.terms:
                w = term.angular_factor * _PI
                if w == 0.0:
                    out += term.amplitude * math.sin(term.phase) * t
                else:
                    out -= (term.amplitude / w) * np.cos(w * t + term.phase)
            return out
        value = self.constant * t
        for term in self.terms:
            w = term.angular_factor * _PI
            if w == 0.0:
                value += term.amplitude * math.sin(term.phase) * t
            else:
                value -= (term.amplitude / w) * math.cos(w * t + term.phase)
        return value

    def integral(self, a, b):
        """Exact value of the integral from ``a`` to ``b`` (scalars or arrays).

        Raises ValueError if any ``a > b``.
        """
        if np.any(np.asarray(a) > np.asarray(b)):
            raise ValueError("integral bounds out of order: a > b")
        return self.antiderivative(b) - self.antiderivative(a)

    def lower_bound(self) -> float:
        """Rigorous global lower bound (amplitude bound)."""
        lo = self.constant
        for term in self.terms:
            if term.angular_factor == 0.0:
                lo += term.amplitude * math.sin(term.phase)
            else:
                lo -= abs(term.amplitude)
        return lo

    def upper_bound(self) -> float:
        """Rigorous global upper bound (amplitude bound)."""
        hi = self.constant
        for term in self.terms:
            if term.angular_factor == 0.0:
                hi += term.amplitude * math.sin(term.phase)
            else:
                hi += abs(term.amplitude)
        return hi

    def to_dict(self) -> dict:
        d = {"constant": self.constant}
        if self.terms:
            d["terms"] = [
                {"amplitude": s.amplitude, "angular_factor": s.angular_factor, "phase": s.phase}
                for s in self.terms
            ]
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "TimeFunction":
        terms = tuple(
            SinTerm(
                amplitude=float(s["amplitude"]),
                angular_factor=float(s["angular_factor"]),
                phase=float(s.get("phase", 0.0)),
            )
            for s in d.get("terms", ())
        )
        return cls(constant=float(d.get("constant", 0.0)), terms=terms)


def advance_by_integral(f: TimeFunction, t_start, target):
    """Smallest ``t_end >= t_start`` with ``integral(f, t_start, t_end) == target``.

    Requires ``target >= 0`` and ``f`` strictly positive on the bracket.
    Accepts scalars or broadcastable arrays; the result satisfies
    ``|integral - target| <= 1e-12 * max(1, target)`` and is monotone in
    both arguments.
    """
    if np.any(np.asarray(target) < 0):
        raise ValueError("target must be non-negative")
    return solve_integral(f, t_start, target)


def solve_integral(f: TimeFunction, t_start, target):
    """Solve ``integral(f, t_start, t) == target`` for ``t``; ``target`` may be
    negative (then ``t <= t_start``). Internal workhorse behind
    :func:`advance_by_integral` and the backward characteristic maps."""
    t0 = np.asarray(t_start, dtype=float)
    tg = np.asarray(target, dtype=float)
    scalar = t0.ndim == 0 and tg.ndim == 0
    t0, tg = np.broadcast_arrays(t0, tg)
    t0 = np.ascontiguousarray(t0, dtype=float)
    tg = np.ascontiguousarray(tg, dtype=float)

    flb = f.lower_bound()
    if flb <= 0.0:
        # No rigorous positivity bound: fall back to sampled brackets per element.
        flat = [
            _solve_scalar_sampled(f, float(a), float(b))
            for a, b in zip(t0.ravel(), tg.ravel())
        ]
        out = np.array(flat).reshape(t0.shape)
        return float(out) if scalar else out

    width = np.abs(tg) / flb * (1.0 + 1e-12) + 1e-15
    lo = np.where(tg >= 0.0, t0, t0 - width)
    hi = np.where(tg >= 0.0, t0 + width, t0)
    x = _newton_bisect(f, t0, tg, lo, hi)
    return float(x) if scalar else x


def _newton_bisect(f, t0, tg, lo, hi):
    """Safeguarded Newton on the antiderivative, vectorized.

    The antiderivative is smooth and strictly increasing on the bracket, so
    Newton from a constant-speed initial guess converges quadratically; any
    iterate leaving its bracket is replaced by the midpoint.
    """
    goal = f.antiderivative(t0) + tg
    tol = 1e-13 * np.maximum(1.0, np.abs(tg))
    lo = lo.copy()
    hi = hi.copy()
    x = np.clip(t0 + tg / f(t0), lo, hi)
    for _ in range(200):
        res = f.antiderivative(x) - goal
        done = np.abs(res) <= tol
        if done.all():
            return x
        high = res > 0.0
        hi = np.where(high & ~done, np.minimum(hi, x), hi)
        lo = np.where(~high & ~done, np.maximum(lo, x), lo)
        with np.errstate(divide="ignore", invalid="ignore"):
            cand = x - res / f(x)
            inside = (cand > lo) & (cand < hi)
        x = np.where(done, x, np.where(inside, cand, 0.5 * (lo + hi)))
        if np.all((hi - lo) <= 1e-15 * np.maximum(1.0, np.abs(x)) + 5e-324):
            return x
    raise NumericsError("integral inversion did not converge")


def _solve_scalar_sampled(f: TimeFunction, t_start: float, target: float) -> float:
    """Scalar fallback when no amplitude bound certifies positivity.

    Grows the bracket geometrically from ``t_start``, checks a sampled lower
    bound of ``f`` on it, and then runs the safeguarded Newton iteration.
    """
    if target == 0.0:
        return t_start
    sign = 1.0 if target > 0.0 else -1.0
    f0 = f(t_start)
    if f0 <= 0.0:
        raise NonInvertibleError(f"f({t_start}) <= 0; integral not invertible")
    width = abs(target) / f0
    for _ in range(80):
        a, b = (t_start, t_start + width) if sign > 0 else (t_start - width, t_start)
        samples = f(np.linspace(a, b, 65))
        if samples.min() <= 0.0:
            raise NonInvertibleError(
                "f is not strictly positive on the integration bracket "
                f"[{a:.6g}, {b:.6g}]"
            )
        if abs(f.integral(a, b)) >= abs(target):
            x = _newton_bisect(
                f,
                np.asarray(t_start, dtype=float),
                np.asarray(target, dtype=float),
                np.asarray(a, dtype=float),
                np.asarray(b, dtype=float),
            )
            return float(x)
        width *= 2.0
    raise NonInvertibleError("could not bracket the integral target")
