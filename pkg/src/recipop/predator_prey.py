"""Closed-form solution and orbit classification for the explosive
predator-prey model

    x' = x^2 (b/y - 1),     y' = -y^2 (d/x - 1),      b, d > 0,

whose rest point is (d, b).  In the scaled reciprocal coordinates
X = sqrt(d/b)/x, Y = 1/y the flow is a rigid counterclockwise rotation at
angular rate sqrt(b*d) around the center (1/sqrt(b*d), 1/b).  Orbits are
therefore circles: a circle inside the open first quadrant gives a periodic
solution, while a circle reaching an axis gives finite-time blow-up of one
population at the first axis crossing.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import BlowUpPassedError, DomainError
from .model_core import LinearSystem2D, PopulationState

__all__ = [
    "OrbitConstants",
    "PeriodicOrbit",
    "OrbitBlowUp",
    "DegenerateOrbit",
    "orbit_constants",
    "closed_solution",
    "closed_reciprocal",
    "classify_orbit",
    "period_bounds_check",
    "scaled_reciprocal_system",
    "to_scaled",
    "from_scaled",
]

TANGENCY_RTOL = 1e-12

_TWO_PI = 2.0 * math.pi


def _check_params(b, d):
    if not (b > 0 and d > 0):
        raise DomainError(f"parameters must be positive, got b={b}, d={d}")


@dataclass(frozen=True)
class OrbitConstants:
    """Circle data of one orbit in scaled reciprocal coordinates.

    The orbit is center + R*(cos(phi0 + w t), sin(phi0 + w t)) with
    w = sqrt(b*d); c1, c2 are the cosine/sine amplitudes fixed by the
    initial populations.
    """

    c1: float
    c2: float
    R: float
    center: tuple
    phi0: float


@dataclass(frozen=True)
class PeriodicOrbit:
    period: float
    x_lower_bound: float  # d/2
    y_lower_bound: float  # b/2
    constants: OrbitConstants


@dataclass(frozen=True)
class OrbitBlowUp:
    species: str  # "x" or "y"
    time: float
    other_limit: float
    hit_angle: float
    constants: OrbitConstants


@dataclass(frozen=True)
class DegenerateOrbit:
    """Circle tangent to an axis within tolerance: not classifiable."""

    axis: str  # "x-axis", "y-axis" or "both"
    gap: float  # signed R - distance for the nearest tangency
    constants: OrbitConstants


def orbit_constants(b: float, d: float, x0: float, y0: float) -> OrbitConstants:
    """Circle constants of the orbit through the initial populations."""
    _check_params(b, d)
    if not (x0 > 0 and y0 > 0):
        raise DomainError(f"initial populations must be positive, got ({x0}, {y0})")
    w = math.sqrt(b * d)
    c1 = math.sqrt(d / b) / x0 - 1.0 / w
    c2 = 1.0 / y0 - 1.0 / b
    R = math.hypot(c1, c2)
    phi0 = math.atan2(c2, c1) % _TWO_PI if R > 0.0 else 0.0
    return OrbitConstants(c1=c1, c2=c2, R=R, center=(1.0 / w, 1.0 / b), phi0=phi0)


def closed_reciprocal(b: float, d: float, consts: OrbitConstants, t: float) -> tuple:
    """Scaled reciprocal coordinates (X, Y)(t) of the closed-form orbit."""
    _check_params(b, d)
    w = math.sqrt(b * d)
    c, s = math.cos(w * t), math.sin(w * t)
    X = consts.center[0] + consts.c1 * c - consts.c2 * s
    Y = consts.center[1] + consts.c1 * s + consts.c2 * c
    return (X, Y)


def closed_solution(b: float, d: float, consts: OrbitConstants, t: float) -> PopulationState:
    """Populations (x, y)(t) from the closed form; defined while both
    reciprocal coordinates stay positive."""
    X, Y = closed_reciprocal(b, d, consts, t)
    if X <= 0.0 or Y <= 0.0:
        raise BlowUpPassedError(
            f"closed form evaluated at t={t}, at or beyond a blow-up "
            f"(reciprocal state ({X}, {Y}))"
        )
    return PopulationState(math.sqrt(d / b) / X, 1.0 / Y)


def classify_orbit(b: float, d: float, x0: float, y0: float):
    """Classify the orbit through (x0, y0).

    Returns ``PeriodicOrbit`` when the circle stays strictly inside the
    first quadrant, ``OrbitBlowUp`` when it crosses an axis (the first
    crossing counterclockwise from the initial angle decides which species
    explodes and when), and ``DegenerateOrbit`` when the circle is tangent
    to an axis within ``TANGENCY_RTOL`` - the strict dichotomy does not
    cover tangency, so it is surfaced instead of silently resolved.
    """
    consts = orbit_constants(b, d, x0, y0)
    Xc, Yc = consts.center
    R = consts.R
    w = math.sqrt(b * d)
    dmin = min(Xc, Yc)
    tol = TANGENCY_RTOL * dmin

    tangent_y_axis = abs(R - Xc) <= tol
    tangent_x_axis = abs(R - Yc) <= tol
    if tangent_x_axis or tangent_y_axis:
        if tangent_x_axis and tangent_y_axis:
            return DegenerateOrbit("both", R - dmin, consts)
        if tangent_x_axis:
            return DegenerateOrbit("x-axis", R - Yc, consts)
        return DegenerateOrbit("y-axis", R - Xc, consts)

    if R < dmin:
        return PeriodicOrbit(
            period=_TWO_PI / w,
            x_lower_bound=d / 2.0,
            y_lower_bound=b / 2.0,
            constants=consts,
        )

    # Axis crossings as angles on the circle, taken counterclockwise from
    # the start angle; the earliest one is the blow-up.
    candidates = []
    if R > Xc:  # X = 0 is reachable: the x population explodes there
        base = math.acos(-Xc / R)
        candidates += [(base, "x"), (_TWO_PI - base, "x")]
    if R > Yc:  # Y = 0 is reachable: the y population explodes there
        alpha = math.asin(Yc / R)
        candidates += [((math.pi + alpha) % _TWO_PI, "y"), ((_TWO_PI - alpha) % _TWO_PI, "y")]

    best = None
    for phi, species in candidates:
        delta = (phi - consts.phi0) % _TWO_PI
        if delta <= 0.0:
            delta += _TWO_PI
        if best is None or delta < best[0]:
            best = (delta, phi, species)
    delta, phi_hit, species = best
    T = delta / w
    if species == "x":
        other = 1.0 / (Yc + R * math.sin(phi_hit))
    else:
        other = math.sqrt(d / b) / (Xc + R * math.cos(phi_hit))
    return OrbitBlowUp(species=species, time=T, other_limit=other, hit_angle=phi_hit, constants=consts)


def period_bounds_check(b: float, d: float, orbit, samples) -> bool:
    """True iff every sample of a periodic orbit satisfies x > d/2, y > b/2."""
    if not isinstance(orbit, PeriodicOrbit):
        raise DomainError("period_bounds_check applies to periodic orbits only")
    for s in samples:
        x, y = (s.x, s.y) if isinstance(s, PopulationState) else (s[0], s[1])
        if not (x > d / 2.0 and y > b / 2.0):
            return False
    return True


def scaled_reciprocal_system(b: float, d: float) -> LinearSystem2D:
    """The rotation system X' = -w Y + sqrt(d/b), Y' = w X - 1, w = sqrt(bd)."""
    _check_params(b, d)
    w = math.sqrt(b * d)
    return LinearSystem2D(0.0, -w, w, 0.0, math.sqrt(d / b), -1.0)


def to_scaled(b: float, d: float, x: float, y: float) -> tuple:
    if x == 0.0 or y == 0.0:
        raise DomainError("populations must be nonzero")
    return (math.sqrt(d / b) / x, 1.0 / y)


def from_scaled(b: float, d: float, X: float, Y: float) -> tuple:
    if X == 0.0 or Y == 0.0:
        raise DomainError("reciprocal coordinates must be nonzero")
    return (math.sqrt(d / b) / X, 1.0 / Y)
