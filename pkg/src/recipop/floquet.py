"""Periodically forced explosive predator-prey model

    x' = x^2 ((b + beta(t))/y - 1),    y' = -y^2 ((d + delta(t))/x - 1),

with beta, delta of common period p.  The reciprocal coordinates X = 1/x,
Y = 1/y satisfy the affine periodic system

    X' = -(b + beta(t)) Y + 1,     Y' = (d + delta(t)) X - 1,

whose homogeneous part has a zero-trace coefficient matrix: the monodromy
matrix F(p) therefore has unit determinant, and its eigenvalues (the
multipliers) satisfy rho1*rho2 = 1.  Away from resonance (sqrt(bd)*p a
multiple of 2*pi) neither multiplier equals one, so the forced system has a
unique p-periodic solution, found by solving (I - F(p)) z0 = z_part(p).
Positivity of that solution is the part that genuinely needs the
perturbation to be small, so it is checked on samples and reported rather
than assumed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, NearResonanceError, NumericalFailure, ResonanceError
from .model_core import PeriodicFunction
from .ode_engine import IntegratorConfig, dense_eval, integrate

__all__ = [
    "PeriodicModel",
    "FundamentalMatrix",
    "FloquetReport",
    "analytic_F0",
    "analytic_fundamental_matrix",
    "fundamental_matrix",
    "floquet_multipliers",
    "periodic_solution",
]

RESONANCE_ATOL = 1e-6
_COND_LIMIT = 1e12
_DEFAULT_CFG = IntegratorConfig(rtol=1e-11, atol=1e-13)


@dataclass(frozen=True)
class PeriodicModel:
    """Base rates b, d > 0 plus periodic perturbations of common period.

    No smallness is enforced on the perturbations: smallness is what makes
    the constructed periodic solution positive, and that conclusion is
    checked a posteriori.
    """

    b: float
    d: float
    beta: PeriodicFunction
    delta: PeriodicFunction

    def __post_init__(self):
        if not (self.b > 0 and self.d > 0):
            raise DomainError(f"rates must be positive, got b={self.b}, d={self.d}")
        if self.beta.period != self.delta.period:
            raise DomainError(
                f"perturbation periods differ: {self.beta.period} vs {self.delta.period}"
            )

    @property
    def period(self) -> float:
        return self.beta.period

    @classmethod
    def unperturbed(cls, b: float, d: float, period: float) -> "PeriodicModel":
        zero = PeriodicFunction(period, 0.0)
        return cls(b, d, zero, zero)

    def homogeneous_field(self):
        b, d, beta, delta = self.b, self.d, self.beta, self.delta

        def field(t, z):
            return (-(b + beta(t)) * z[1], (d + delta(t)) * z[0])

        return field

    def forced_field(self):
        b, d, beta, delta = self.b, self.d, self.beta, self.delta

        def field(t, z):
            return (-(b + beta(t)) * z[1] + 1.0, (d + delta(t)) * z[0] - 1.0)

        return field


@dataclass(frozen=True)
class FundamentalMatrix:
    """Normalized fundamental matrix at the period, F(0) = I."""

    matrix: np.ndarray
    period: float
    method: str  # "numeric" or "analytic-unperturbed"

    @property
    def det(self) -> float:
        m = self.matrix
        return float(m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0])

    @property
    def trace(self) -> float:
        return float(self.matrix[0, 0] + self.matrix[1, 1])


def analytic_F0(b: float, d: float, t: float) -> np.ndarray:
    """Fundamental matrix of the unperturbed homogeneous system.

    A rotation at rate w = sqrt(bd) conjugated by the axis scaling
    diag(sqrt(b/d), 1)-style stretch; determinant is identically one.
    """
    if not (b > 0 and d > 0):
        raise DomainError(f"rates must be positive, got b={b}, d={d}")
    w = math.sqrt(b * d)
    cw, sw = math.cos(w * t), math.sin(w * t)
    return np.array([[cw, -math.sqrt(b / d) * sw], [math.sqrt(d / b) * sw, cw]])


def analytic_fundamental_matrix(b: float, d: float, period: float) -> FundamentalMatrix:
    return FundamentalMatrix(analytic_F0(b, d, period), period, "analytic-unperturbed")


def fundamental_matrix(model: PeriodicModel, cfg: IntegratorConfig | None = None) -> FundamentalMatrix:
    """Integrate the homogeneous system columnwise over one period."""
    cfg = cfg or _DEFAULT_CFG
    field = model.homogeneous_field()
    p = model.period
    cols = []
    for init in ((1.0, 0.0), (0.0, 1.0)):
        tr = integrate(field, init, (0.0, p), cfg)
        if tr.termination != "reached_t_end":
            raise NumericalFailure(
                f"fundamental-matrix integration terminated early: {tr.termination}"
            )
        cols.append(tr.states[-1])
    return FundamentalMatrix(np.column_stack(cols), p, "numeric")


def floquet_multipliers(F: FundamentalMatrix) -> tuple:
    """Eigenvalues of F(p) via the quadratic formula; complex pair allowed.

    Ordering: a complex pair comes with positive imaginary part first, a
    real pair in ascending order.
    """
    tr, det = F.trace, F.det
    disc = tr * tr - 4.0 * det
    if disc >= 0.0:
        root = math.sqrt(disc)
        lo, hi = 0.5 * (tr - root), 0.5 * (tr + root)
        return (complex(lo, 0.0), complex(hi, 0.0))
    root = math.sqrt(-disc)
    return (complex(0.5 * tr, 0.5 * root), complex(0.5 * tr, -0.5 * root))


@dataclass(frozen=True)
class FloquetReport:
    model: PeriodicModel
    fundamental: FundamentalMatrix
    multipliers: tuple
    multiplier_product: complex
    trace: float
    resonance_margin: float
    nearest_resonance_m: int
    initial: tuple  # periodic initial condition (X_p(0), Y_p(0))
    closure_residual: float
    times: np.ndarray
    X: np.ndarray
    Y: np.ndarray
    x: np.ndarray
    y: np.ndarray
    positive: bool


def resonance_margin(b: float, d: float, period: float) -> tuple:
    """Distance from sqrt(bd)*period to the nearest multiple of 2*pi."""
    w = math.sqrt(b * d)
    m = round(w * period / (2.0 * math.pi))
    return abs(w * period - 2.0 * math.pi * m), int(m)


def periodic_solution(
    model: PeriodicModel,
    n_samples: int = 256,
    cfg: IntegratorConfig | None = None,
) -> FloquetReport:
    """Construct the unique periodic solution of the forced system.

    Raises ResonanceError when sqrt(bd)*p is within ``RESONANCE_ATOL`` of a
    multiple of 2*pi, and NearResonanceError when I - F(p) is numerically
    singular anyway.  A non-positive sample is reported through the
    ``positive`` flag, not raised: it signals that the perturbation is too
    large for the positivity conclusion, which is a result, not a failure.
    """
    cfg = cfg or _DEFAULT_CFG
    if n_samples < 2:
        raise DomainError("n_samples must be at least 2")
    p = model.period
    margin, m_near = resonance_margin(model.b, model.d, p)
    if margin <= RESONANCE_ATOL:
        raise ResonanceError(
            f"sqrt(b*d)*p = {math.sqrt(model.b * model.d) * p:.12g} is within "
            f"{RESONANCE_ATOL} of 2*pi*{m_near}: no unique periodic solution"
        )

    F = fundamental_matrix(model, cfg)
    rho = floquet_multipliers(F)
    closure_matrix = np.eye(2) - F.matrix
    if np.linalg.cond(closure_matrix) > _COND_LIMIT:
        raise NearResonanceError(
            f"I - F(p) has condition number above {_COND_LIMIT:.0e}: "
            f"multipliers {rho} are too close to one"
        )

    forced = model.forced_field()
    part = integrate(forced, (0.0, 0.0), (0.0, p), cfg)
    if part.termination != "reached_t_end":
        raise NumericalFailure("particular-solution integration terminated early")
    w_end = part.states[-1]
    z0 = np.linalg.solve(closure_matrix, w_end)

    orbit = integrate(forced, tuple(z0), (0.0, p), cfg)
    if orbit.termination != "reached_t_end":
        raise NumericalFailure("periodic-orbit integration terminated early")
    residual = float(np.max(np.abs(orbit.states[-1] - z0)))
    if residual >= 1e-8 * (1.0 + float(np.max(np.abs(z0)))):
        raise NumericalFailure(
            f"periodic closure failed: |z(p) - z0| = {residual:.3e}"
        )

    times = np.linspace(0.0, p, n_samples)
    samples = np.array([dense_eval(orbit, t) for t in times])
    X, Y = samples[:, 0], samples[:, 1]
    positive = bool(np.all(X > 0.0) and np.all(Y > 0.0))
    with np.errstate(divide="ignore"):
        x = np.where(X != 0.0, 1.0 / X, np.inf)
        y = np.where(Y != 0.0, 1.0 / Y, np.inf)

    return FloquetReport(
        model=model,
        fundamental=F,
        multipliers=rho,
        multiplier_product=rho[0] * rho[1],
        trace=F.trace,
        resonance_margin=margin,
        nearest_resonance_m=m_near,
        initial=(float(z0[0]), float(z0[1])),
        closure_residual=residual,
        times=times,
        X=X,
        Y=Y,
        x=x,
        y=y,
        positive=positive,
    )
