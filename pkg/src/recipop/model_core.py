"""Core model family and its exact reciprocal linearization.

The models treated by this package couple two species through their
limitation coefficients:

    x' = a*x + x^2 * (b/y + e)
    y' = d*y + y^2 * (c/x + f)

Dividing by x^2 (resp. y^2) and substituting u = 1/x, v = 1/y turns this
into the linear system

    u' = -a*u - b*v - e
    v' = -c*u - d*v - f

so every downstream analysis works in reciprocal coordinates, where a
population exploding to infinity is simply a coordinate crossing zero.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .errors import DomainError

_TWO_PI = 2.0 * math.pi


def _require_finite(**values):
    for name, v in values.items():
        if not math.isfinite(v):
            raise DomainError(f"{name} must be finite, got {v!r}")


@dataclass(frozen=True)
class PeriodicFunction:
    """Truncated Fourier series, periodic by construction.

    Evaluates ``mean + sum_k cos_coeffs[k-1]*cos(2*pi*k*t/period)
    + sin_coeffs[k-1]*sin(2*pi*k*t/period)``.  The phase is reduced with
    ``math.fmod`` before the trig calls so evaluation stays accurate for
    large ``t``.
    """

    period: float
    mean: float = 0.0
    cos_coeffs: tuple = ()
    sin_coeffs: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "period", float(self.period))
        object.__setattr__(self, "mean", float(self.mean))
        object.__setattr__(self, "cos_coeffs", tuple(float(a) for a in self.cos_coeffs))
        object.__setattr__(self, "sin_coeffs", tuple(float(b) for b in self.sin_coeffs))
        if not (self.period > 0.0 and math.isfinite(self.period)):
            raise DomainError(f"period must be positive and finite, got {self.period!r}")
        _require_finite(mean=self.mean)
        for a in self.cos_coeffs + self.sin_coeffs:
            _require_finite(coefficient=a)

    @property
    def harmonics(self) -> int:
        return max(len(self.cos_coeffs), len(self.sin_coeffs))

    @property
    def is_zero(self) -> bool:
        return self.mean == 0.0 and not any(self.cos_coeffs) and not any(self.sin_coeffs)

    def amplitude_bound(self) -> float:
        """Upper bound on sup |f| - |mean|, i.e. the oscillation size."""
        return sum(map(abs, self.cos_coeffs)) + sum(map(abs, self.sin_coeffs))

    def __call__(self, t: float) -> float:
        phase = _TWO_PI * math.fmod(t, self.period) / self.period
        acc = self.mean
        for k, a in enumerate(self.cos_coeffs, start=1):
            if a:
                acc += a * math.cos(k * phase)
        for k, b in enumerate(self.sin_coeffs, start=1):
            if b:
                acc += b * math.sin(k * phase)
        return acc

    def __neg__(self) -> "PeriodicFunction":
        return PeriodicFunction(
            self.period,
            -self.mean,
            tuple(-a for a in self.cos_coeffs),
            tuple(-b for b in self.sin_coeffs),
        )

    def shifted(self, offset: float) -> "PeriodicFunction":
        """Same oscillation with the mean shifted by ``offset``."""
        return PeriodicFunction(self.period, self.mean + offset, self.cos_coeffs, self.sin_coeffs)

    @classmethod
    def constant(cls, value: float, period: float = 1.0) -> "PeriodicFunction":
        return cls(period, value)


@dataclass(frozen=True)
class GeneralModel:
    """Six-coefficient interaction model; signs select the interaction type."""

    a: float
    b: float
    c: float
    d: float
    e: float
    f: float

    def __post_init__(self):
        _require_finite(a=self.a, b=self.b, c=self.c, d=self.d, e=self.e, f=self.f)

    @classmethod
    def predator_prey(cls, b: float, d: float) -> "GeneralModel":
        """Explosive predator-prey specialization.

        x' = x^2 (b/y - 1),  y' = -y^2 (d/x - 1); growth terms scaled out.
        """
        if not (b > 0 and d > 0):
            raise DomainError(f"predator_prey requires b>0 and d>0, got b={b}, d={d}")
        return cls(a=0.0, b=float(b), c=-float(d), d=0.0, e=-1.0, f=1.0)

    @classmethod
    def competing(cls, a: float, b: float, c: float, d: float) -> "GeneralModel":
        """Explosive competing-species specialization.

        x' = a x + x^2 (b/y - 1),  y' = d y + y^2 (c/x - 1).
        """
        if not (a > 0 and b > 0 and c > 0 and d > 0):
            raise DomainError(
                f"competing requires positive a,b,c,d, got ({a}, {b}, {c}, {d})"
            )
        return cls(a=float(a), b=float(b), c=float(c), d=float(d), e=-1.0, f=-1.0)


@dataclass(frozen=True)
class PopulationState:
    """Positive population pair (x, y)."""

    x: float
    y: float

    def __post_init__(self):
        object.__setattr__(self, "x", float(self.x))
        object.__setattr__(self, "y", float(self.y))
        if not (self.x > 0 and math.isfinite(self.x)) or not (self.y > 0 and math.isfinite(self.y)):
            raise DomainError(f"populations must be positive and finite, got ({self.x}, {self.y})")


@dataclass(frozen=True)
class ReciprocalState:
    """Reciprocal coordinates (X, Y) = (1/x, 1/y).

    A coordinate reaching zero encodes blow-up of the matching population,
    so zero is representable here even though it has no population preimage.
    """

    X: float
    Y: float

    def __post_init__(self):
        object.__setattr__(self, "X", float(self.X))
        object.__setattr__(self, "Y", float(self.Y))
        _require_finite(X=self.X, Y=self.Y)


def to_reciprocal(state):
    """Map a state to its coordinate-wise reciprocal.

    ``PopulationState`` maps to ``ReciprocalState`` and vice versa, so the
    map is an involution.  Components must be strictly positive.
    """
    if isinstance(state, PopulationState):
        return ReciprocalState(1.0 / state.x, 1.0 / state.y)
    if isinstance(state, ReciprocalState):
        if not (state.X > 0 and state.Y > 0):
            raise DomainError(
                f"cannot invert a reciprocal state on or past the axes: ({state.X}, {state.Y})"
            )
        return PopulationState(1.0 / state.X, 1.0 / state.Y)
    raise DomainError(f"expected PopulationState or ReciprocalState, got {type(state).__name__}")


@dataclass(frozen=True)
class LinearSystem2D:
    """Planar affine system u' = M u + g.

    Entries are floats or :class:`PeriodicFunction` values; the latter make
    the system periodically forced.
    """

    m11: object
    m12: object
    m21: object
    m22: object
    g1: object = 0.0
    g2: object = 0.0
    entries: tuple = field(init=False, repr=False)

    def __post_init__(self):
        vals = []
        for name in ("m11", "m12", "m21", "m22", "g1", "g2"):
            v = getattr(self, name)
            if isinstance(v, PeriodicFunction):
                vals.append(v)
            else:
                v = float(v)
                _require_finite(**{name: v})
                object.__setattr__(self, name, v)
                vals.append(v)
        object.__setattr__(self, "entries", tuple(vals))

    @property
    def is_constant(self) -> bool:
        return all(not isinstance(v, PeriodicFunction) for v in self.entries)

    def matrix(self, t: float = 0.0):
        ev = lambda v: v(t) if isinstance(v, PeriodicFunction) else v
        return ((ev(self.m11), ev(self.m12)), (ev(self.m21), ev(self.m22)))

    def forcing(self, t: float = 0.0):
        ev = lambda v: v(t) if isinstance(v, PeriodicFunction) else v
        return (ev(self.g1), ev(self.g2))

    def field(self):
        """Return ``f(t, u) -> (u1', u2')`` suitable for the integrator."""
        if self.is_constant:
            m11, m12, m21, m22, g1, g2 = self.entries

            def constant_field(t, u):
                return (m11 * u[0] + m12 * u[1] + g1, m21 * u[0] + m22 * u[1] + g2)

            return constant_field

        ev = lambda v, t: v(t) if isinstance(v, PeriodicFunction) else v
        m11, m12, m21, m22, g1, g2 = self.entries

        def periodic_field(t, u):
            return (
                ev(m11, t) * u[0] + ev(m12, t) * u[1] + ev(g1, t),
                ev(m21, t) * u[0] + ev(m22, t) * u[1] + ev(g2, t),
            )

        return periodic_field


def linearize(model: GeneralModel) -> LinearSystem2D:
    """Exact linearization of the model in reciprocal coordinates.

    Returns the system u' = -a u - b v - e, v' = -c u - d v - f obtained by
    dividing the population equations by x^2 and y^2.
    """
    return LinearSystem2D(
        m11=-model.a,
        m12=-model.b,
        m21=-model.c,
        m22=-model.d,
        g1=-model.e,
        g2=-model.f,
    )


def vector_field(model: GeneralModel, state) -> tuple:
    """Population-space derivatives (dx/dt, dy/dt) at ``state``.

    ``state`` may be a :class:`PopulationState` or an (x, y) pair; both
    components must be nonzero (the couplings divide by them).
    """
    if isinstance(state, PopulationState):
        x, y = state.x, state.y
    else:
        x, y = float(state[0]), float(state[1])
    if x == 0.0 or y == 0.0:
        raise DomainError(f"vector_field undefined on the axes, got ({x}, {y})")
    dx = model.a * x + x * x * (model.b / y + model.e)
    dy = model.d * y + y * y * (model.c / x + model.f)
    return (dx, dy)
