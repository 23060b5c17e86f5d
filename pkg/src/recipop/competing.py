"""Explosive competing-species model

    x' = a x + x^2 (b/y - 1),    y' = d y + y^2 (c/x - 1),    a,b,c,d > 0.

In reciprocal coordinates X = 1/x, Y = 1/y the system is affine,

    X' = -a X - b Y + 1,     Y' = -c X - d Y + 1,

with rest point (X0, Y0) = ((d-b)/(ad-bc), (a-c)/(ad-bc)).  The coefficient
matrix [[-a,-b],[-c,-d]] always has two distinct real eigenvalues, so
trajectories are explicit two-exponential curves.  Outcomes: a stable node
inside the first quadrant means coexistence (unless the transient exits the
quadrant first, which is blow-up), a saddle inside the quadrant means one
species always explodes in finite time.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .errors import (
    DegenerateClassificationError,
    DomainError,
    NumericalFailure,
    SingularSystemError,
)

__all__ = [
    "RestPoint",
    "EigenStructure",
    "InteractionClass",
    "LinearSolution",
    "Coexistence",
    "OutcomeBlowUp",
    "rest_point",
    "eigen_structure",
    "classify_interaction",
    "solve_linear",
    "predict_outcome",
]

_BOUNDARY_RTOL = 1e-14


def _check_positive(**params):
    for name, v in params.items():
        if not (v > 0 and math.isfinite(v)):
            raise DomainError(f"{name} must be positive and finite, got {v}")


@dataclass(frozen=True)
class RestPoint:
    X0: float
    Y0: float

    @property
    def in_first_quadrant(self) -> bool:
        return self.X0 > 0 and self.Y0 > 0

    def populations(self) -> tuple:
        """Coexistence populations (1/X0, 1/Y0); only meaningful when the
        rest point lies in the open first quadrant."""
        if not self.in_first_quadrant:
            raise DomainError("rest point outside the first quadrant has no population image")
        return (1.0 / self.X0, 1.0 / self.Y0)


@dataclass(frozen=True)
class EigenStructure:
    """Eigen-decomposition of A = [[-a,-b],[-c,-d]].

    lambda1 <= lambda2; eigenvectors are unit length with positive second
    component.  The discriminant (a-d)^2 + 4bc is positive for positive
    parameters, so the eigenvalues are always real and distinct.
    """

    lambda1: float
    lambda2: float
    xi1: tuple
    xi2: tuple
    discriminant: float


class InteractionClass(enum.Enum):
    STABLE_NODE = "stable_node"
    SADDLE = "saddle"
    REST_POINT_OUTSIDE_QUADRANT = "rest_point_outside_quadrant"


@dataclass(frozen=True)
class Coexistence:
    limits: tuple  # (1/X0, 1/Y0)
    rest: RestPoint


@dataclass(frozen=True)
class OutcomeBlowUp:
    species: str  # "x" or "y"
    time: float
    other_limit: float


def rest_point(a: float, b: float, c: float, d: float) -> RestPoint:
    """Unique rest point of the reciprocal system; requires ad != bc."""
    det = a * d - b * c
    if abs(det) <= _BOUNDARY_RTOL * max(1.0, abs(a * d) + abs(b * c)):
        raise SingularSystemError(f"ad - bc = {det}: no isolated rest point")
    return RestPoint((d - b) / det, (a - c) / det)


def eigen_structure(a: float, b: float, c: float, d: float) -> EigenStructure:
    _check_positive(a=a, b=b, c=c, d=d)
    disc = a * a - 2.0 * a * d + 4.0 * b * c + d * d  # (a-d)^2 + 4bc > 0
    root = math.sqrt(disc)

    def _pair(sign):
        lam = 0.5 * (-a - d + sign * root)
        v = -(-a + d + sign * root) / (2.0 * c)
        n = math.hypot(v, 1.0)
        return lam, (v / n, 1.0 / n)

    lam1, xi1 = _pair(-1.0)
    lam2, xi2 = _pair(+1.0)
    for lam, xi in ((lam1, xi1), (lam2, xi2)):
        r1 = -a * xi[0] - b * xi[1] - lam * xi[0]
        r2 = -c * xi[0] - d * xi[1] - lam * xi[1]
        if math.hypot(r1, r2) > 1e-10 * (1.0 + abs(lam)):
            raise NumericalFailure(f"eigenpair residual too large for ({a},{b},{c},{d})")
    return EigenStructure(lam1, lam2, xi1, xi2, disc)


def classify_interaction(a: float, b: float, c: float, d: float) -> InteractionClass:
    """Strict-inequality classification of the rest point.

    d > b and a > c: stable node in the first quadrant.
    d < b and a < c: saddle in the first quadrant.
    Anything else with strict inequalities: rest point outside the quadrant.
    Boundary ties (d = b or a = c) are refused: the dichotomy is strict.
    """
    _check_positive(a=a, b=b, c=c, d=d)
    if abs(d - b) <= _BOUNDARY_RTOL * max(d, b) or abs(a - c) <= _BOUNDARY_RTOL * max(a, c):
        raise DegenerateClassificationError(
            f"boundary parameters (a={a}, b={b}, c={c}, d={d}): "
            "classification requires d != b and a != c"
        )
    if d > b and a > c:
        return InteractionClass.STABLE_NODE
    if d < b and a < c:
        return InteractionClass.SADDLE
    return InteractionClass.REST_POINT_OUTSIDE_QUADRANT


@dataclass(frozen=True)
class LinearSolution:
    """Reciprocal-plane trajectory (X, Y)(t) = rest + c1 e^{l1 t} xi1 + c2 e^{l2 t} xi2."""

    rest: RestPoint
    eigen: EigenStructure
    c1: float
    c2: float

    def evaluate(self, t: float) -> tuple:
        e1 = self.c1 * math.exp(self.eigen.lambda1 * t)
        e2 = self.c2 * math.exp(self.eigen.lambda2 * t)
        return (
            self.rest.X0 + e1 * self.eigen.xi1[0] + e2 * self.eigen.xi2[0],
            self.rest.Y0 + e1 * self.eigen.xi1[1] + e2 * self.eigen.xi2[1],
        )

    def evaluate_many(self, ts) -> np.ndarray:
        ts = np.asarray(ts, dtype=float)
        e1 = self.c1 * np.exp(self.eigen.lambda1 * ts)
        e2 = self.c2 * np.exp(self.eigen.lambda2 * ts)
        X = self.rest.X0 + e1 * self.eigen.xi1[0] + e2 * self.eigen.xi2[0]
        Y = self.rest.Y0 + e1 * self.eigen.xi1[1] + e2 * self.eigen.xi2[1]
        return np.column_stack([X, Y])


def solve_linear(a: float, b: float, c: float, d: float, X_init: float, Y_init: float) -> LinearSolution:
    """Expand the reciprocal initial state over the eigenbasis."""
    _check_positive(a=a, b=b, c=c, d=d)
    rp = rest_point(a, b, c, d)
    es = eigen_structure(a, b, c, d)
    rhs = (X_init - rp.X0, Y_init - rp.Y0)
    det = es.xi1[0] * es.xi2[1] - es.xi2[0] * es.xi1[1]
    if det == 0.0:
        raise NumericalFailure("eigenvector matrix numerically singular")
    c1 = (rhs[0] * es.xi2[1] - es.xi2[0] * rhs[1]) / det
    c2 = (es.xi1[0] * rhs[1] - rhs[0] * es.xi1[1]) / det
    sol = LinearSolution(rp, es, c1, c2)
    X0_chk, Y0_chk = sol.evaluate(0.0)
    scale = 1.0 + abs(X_init) + abs(Y_init)
    if max(abs(X0_chk - X_init), abs(Y0_chk - Y_init)) > 1e-12 * scale:
        raise NumericalFailure("eigenbasis expansion failed to reproduce the initial state")
    return sol


def _first_axis_crossing(sol: LinearSolution):
    """Smallest t > 0 where X(t) = 0 or Y(t) = 0 on the closed form, or None.

    Bracketed scan at resolution min(1, 1/|lambda2|)/64 - two-exponential
    coordinates change sign at most twice and are monotone between sign
    changes at that resolution - followed by bisection.
    """
    es = sol.eigen
    rp = sol.rest
    C = abs(sol.c1) + abs(sol.c2)
    lam2 = es.lambda2

    if lam2 < 0.0:
        floor = min(rp.X0, rp.Y0)
        if floor > 0.0 and C < floor:
            return None  # deviation can never reach an axis
        target = floor if floor > 0.0 else max(-rp.X0, -rp.Y0)
        target = max(target, 1e-12 * (1.0 + C))
        t_hi = math.log(2.0 * C / target) / (-lam2) if C > 0.5 * target else 0.0
        t_hi = max(t_hi, 1.0 / -lam2)
    else:
        min_comp = min(abs(es.xi2[0]), abs(es.xi2[1]))
        denom = abs(sol.c2) * min_comp
        if denom <= 1e-13 * (1.0 + C + abs(rp.X0) + abs(rp.Y0)):
            if rp.in_first_quadrant:
                raise DegenerateClassificationError(
                    "initial state lies on the stable manifold of the saddle: "
                    "the generic finite-time blow-up dichotomy does not apply"
                )
            # Growing mode absent; the decay toward the rest point outside
            # the quadrant forces the crossing instead.
            target = max(-rp.X0, -rp.Y0, 1e-12 * (1.0 + C))
            t_hi = math.log(2.0 * max(C, target) / target) / (-es.lambda1)
        else:
            amp = abs(rp.X0) + abs(rp.Y0) + abs(sol.c1) + 1.0
            t_hi = math.log(amp / denom) / lam2 if amp > denom else 0.0
            t_hi = max(t_hi, 1.0 / lam2) + 1.0 / lam2

    step = min(1.0, 1.0 / abs(lam2)) / 64.0
    n = max(2, int(math.ceil(t_hi / step)) + 1)

    def crossing_in(lo, hi, coord):
        f = lambda t: sol.evaluate(t)[coord]
        f_lo, f_hi = f(lo), f(hi)
        if f_lo > 0.0 and f_hi > 0.0:
            return None
        for _ in range(200):
            mid = 0.5 * (lo + hi)
            if hi - lo <= 1e-14 * max(1.0, hi):
                break
            if f(mid) > 0.0:
                lo = mid
            else:
                hi = mid
        return 0.5 * (lo + hi)

    t_prev = 0.0
    X_prev, Y_prev = sol.evaluate(0.0)
    for i in range(1, n + 1):
        t_cur = i * step
        X_cur, Y_cur = sol.evaluate(t_cur)
        hits = []
        if X_prev > 0.0 >= X_cur:
            hits.append((crossing_in(t_prev, t_cur, 0), "x"))
        if Y_prev > 0.0 >= Y_cur:
            hits.append((crossing_in(t_prev, t_cur, 1), "y"))
        hits = [(t, s) for t, s in hits if t is not None]
        if hits:
            return min(hits)
        t_prev, X_prev, Y_prev = t_cur, X_cur, Y_cur
    return None


def predict_outcome(a: float, b: float, c: float, d: float, x0: float, y0: float):
    """Outcome for the competing model from positive initial populations.

    Follows the closed-form reciprocal trajectory: its first axis crossing,
    if any, is a finite-time blow-up of the matching species; a stable node
    with no crossing means coexistence at (1/X0, 1/Y0).  A saddle always
    produces a crossing (generic initial data).
    """
    _check_positive(a=a, b=b, c=c, d=d, x0=x0, y0=y0)
    cls = classify_interaction(a, b, c, d)
    sol = solve_linear(a, b, c, d, 1.0 / x0, 1.0 / y0)
    hit = _first_axis_crossing(sol)
    if hit is not None:
        T, species = hit
        X_T, Y_T = sol.evaluate(T)
        other = 1.0 / Y_T if species == "x" else 1.0 / X_T
        if not (other > 0.0 and math.isfinite(other)):
            raise NumericalFailure(
                f"surviving population not finite-positive at blow-up: {other}"
            )
        return OutcomeBlowUp(species=species, time=T, other_limit=other)
    if cls is InteractionClass.STABLE_NODE:
        rp = sol.rest
        return Coexistence(limits=rp.populations(), rest=rp)
    raise NumericalFailure(
        f"no axis crossing found for class {cls.value}, which contradicts the "
        "escape geometry; widen the scan horizon"
    )
