"""Adaptive explicit Runge-Kutta integration with dense output and events.

A Dormand-Prince 5(4) embedded pair drives all simulations in this package.
The free fourth-order interpolant is stored per accepted step, which makes
event location (bisection on the interpolant) and trajectory resampling
independent of the step sequence.  States are plain tuples of floats: every
system here is one- or two-dimensional and the Poincare-map machinery calls
the integrator tens of thousands of times, so avoiding array overhead in the
stepper matters far more than vectorization would.

Blow-up of the original population variables is never integrated through:
callers integrate in reciprocal coordinates, where blow-up is a terminal
zero-crossing event, and the magnitude guard (``blow_up_threshold``) exists
for genuinely escaping scalar problems.
"""

from __future__ import annotations

import bisect as _bisect
import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, NumericalFailure

__all__ = [
    "IntegratorConfig",
    "EventSpec",
    "EventRecord",
    "Trajectory",
    "integrate",
    "dense_eval",
]

# Dormand-Prince 5(4) tableau.
_C2, _C3, _C4, _C5 = 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0
_A21 = 1.0 / 5.0
_A31, _A32 = 3.0 / 40.0, 9.0 / 40.0
_A41, _A42, _A43 = 44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0
_A51, _A52, _A53, _A54 = 19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0
_A61, _A62, _A63, _A64, _A65 = (
    9017.0 / 3168.0,
    -355.0 / 33.0,
    46732.0 / 5247.0,
    49.0 / 176.0,
    -5103.0 / 18656.0,
)
_B1, _B3, _B4, _B5, _B6 = 35.0 / 384.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0
_E1, _E3, _E4, _E5, _E6, _E7 = (
    71.0 / 57600.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
)
# Coefficients of the quartic interpolant, row s gives the polynomial
# multiplying stage s:  y(t0 + th*h) = y0 + h * sum_s k_s * P_s(th),
# P_s(th) = th*(P[s][0] + th*(P[s][1] + th*(P[s][2] + th*P[s][3]))).
_P = (
    (1.0, -8048581381.0 / 2820520608.0, 8663915743.0 / 2820520608.0, -12715105075.0 / 11282082432.0),
    (0.0, 0.0, 0.0, 0.0),
    (0.0, 131558114200.0 / 32700410799.0, -68118460800.0 / 10900136933.0, 87487479700.0 / 32700410799.0),
    (0.0, -1754552775.0 / 470086768.0, 14199869525.0 / 1410260304.0, -10690763975.0 / 1880347072.0),
    (0.0, 127303824393.0 / 49829197408.0, -318862633887.0 / 49829197408.0, 701980252875.0 / 199316789632.0),
    (0.0, -282668133.0 / 205662961.0, 2019193451.0 / 616988883.0, -1453857185.0 / 822651844.0),
    (0.0, 40617522.0 / 29380423.0, -110615467.0 / 29380423.0, 69997945.0 / 29380423.0),
)

_SAFETY = 0.9
_MIN_FACTOR = 0.2
_MAX_FACTOR = 10.0


@dataclass(frozen=True)
class IntegratorConfig:
    rtol: float = 1e-9
    atol: float = 1e-12
    max_step: float = math.inf
    blow_up_threshold: float = 1e8
    max_steps: int = 10_000_000

    def __post_init__(self):
        if not (self.rtol > 0 and self.atol > 0):
            raise DomainError("tolerances must be positive")
        if not self.max_step > 0:
            raise DomainError("max_step must be positive")
        if not self.blow_up_threshold > 1:
            raise DomainError("blow_up_threshold must exceed 1")
        if not self.max_steps > 0:
            raise DomainError("max_steps must be positive")


@dataclass(frozen=True)
class EventSpec:
    """Scalar event g(t, state); fires on sign changes of g along the flow.

    direction: "any", "increasing" (- to +) or "decreasing" (+ to -).
    Terminal events stop the integration at the located crossing.
    """

    func: object
    direction: str = "any"
    terminal: bool = False

    def __post_init__(self):
        if self.direction not in ("any", "increasing", "decreasing"):
            raise DomainError(f"unknown event direction {self.direction!r}")


@dataclass(frozen=True)
class EventRecord:
    index: int
    time: float
    state: tuple


class Trajectory:
    """Integration result: samples at accepted steps plus dense output."""

    __slots__ = ("times", "states", "termination", "events", "terminal_event",
                 "_seg_starts", "_segments", "_t_final")

    def __init__(self, ts, ys, segments, termination, events, terminal_event):
        self.times = np.asarray(ts, dtype=float)
        self.states = np.asarray(ys, dtype=float)
        self.termination = termination
        self.events = events
        self.terminal_event = terminal_event
        self._segments = segments
        self._seg_starts = [s[0] for s in segments]
        self._t_final = float(ts[-1])

    @property
    def t_start(self) -> float:
        return float(self.times[0])

    @property
    def t_final(self) -> float:
        return self._t_final

    def __len__(self):
        return len(self.times)

    def _eval_tuple(self, t: float) -> tuple:
        if not self._segments:
            if t == self._t_final:
                return tuple(self.states[0])
            raise DomainError("trajectory has no interior: only the initial time is covered")
        if t < self.times[0] or t > self._t_final:
            raise DomainError(
                f"time {t} outside trajectory range [{self.times[0]}, {self._t_final}]"
            )
        i = _bisect.bisect_right(self._seg_starts, t) - 1
        if i < 0:
            i = 0
        return _eval_segment(self._segments[i], t)

    def sample(self, ts) -> np.ndarray:
        """Dense-evaluate at an array of times (each within the covered range)."""
        return np.asarray([self._eval_tuple(float(t)) for t in np.atleast_1d(ts)])


def dense_eval(trajectory: Trajectory, t: float):
    """Continuous interpolant of the trajectory at time ``t``."""
    return np.asarray(trajectory._eval_tuple(float(t)))


def _eval_segment(seg, t):
    t0, h, y0, coeffs = seg
    th = (t - t0) / h
    return tuple(
        y0[i] + h * (th * (c[0] + th * (c[1] + th * (c[2] + th * c[3]))))
        for i, c in enumerate(coeffs)
    )


def _initial_step(field, t0, y0, f0, rtol, atol, max_step, span):
    scale = [atol + rtol * abs(v) for v in y0]
    d0 = math.sqrt(sum((v / s) ** 2 for v, s in zip(y0, scale)) / len(y0))
    d1 = math.sqrt(sum((v / s) ** 2 for v, s in zip(f0, scale)) / len(y0))
    h0 = 1e-6 if d0 < 1e-5 or d1 < 1e-5 else 0.01 * d0 / d1
    h0 = min(h0, span)
    y1 = tuple(y + h0 * f for y, f in zip(y0, f0))
    f1 = field(t0 + h0, y1)
    d2 = math.sqrt(sum(((a - b) / s) ** 2 for a, b, s in zip(f1, f0, scale)) / len(y0)) / h0
    dm = max(d1, d2)
    h1 = max(1e-6, h0 * 1e-3) if dm <= 1e-15 else (0.01 / dm) ** 0.2
    return min(100.0 * h0, h1, max_step, span)


def _fires(direction, g_old, g_new):
    if g_old < 0.0 and g_new >= 0.0:
        return direction != "decreasing"
    if g_old > 0.0 and g_new <= 0.0:
        return direction != "increasing"
    return False


def _locate_event(func, seg, t_lo, t_hi, g_lo, time_tol):
    """Bisection on the dense interpolant; returns the crossing time."""
    sign_lo = 1.0 if g_lo > 0.0 else -1.0
    while t_hi - t_lo > time_tol:
        t_mid = 0.5 * (t_lo + t_hi)
        if t_mid <= t_lo or t_mid >= t_hi:
            break
        g_mid = func(t_mid, _eval_segment(seg, t_mid))
        if g_mid * sign_lo > 0.0:
            t_lo = t_mid
        else:
            t_hi = t_mid
    return 0.5 * (t_lo + t_hi)


def integrate(field, init, t_span, cfg: IntegratorConfig | None = None, events=()) -> Trajectory:
    """Integrate y' = field(t, y) over t_span with adaptive error control.

    Parameters
    ----------
    field : callable
        ``field(t, y) -> sequence`` of the same length as ``y``.
    init : sequence of float
        Initial state.
    t_span : (t0, t_end)
        Forward, nondegenerate time interval.
    cfg : IntegratorConfig, optional
    events : iterable of EventSpec
        Event functions, located by bracketing each accepted step and
        bisecting the dense interpolant to a time tolerance of
        ``1e-12 * (t_end - t0)``.

    Returns
    -------
    Trajectory
        Termination reason is ``"reached_t_end"``, ``"event"`` (a terminal
        event fired) or ``"blow_up"`` (state magnitude exceeded the
        configured threshold).

    Raises
    ------
    NumericalFailure
        On step-size underflow or step-count exhaustion; the partial
        trajectory is attached to the exception.
    """
    cfg = cfg or IntegratorConfig()
    events = tuple(events)
    t0, t_end = float(t_span[0]), float(t_span[1])
    span = t_end - t0
    if not (span > 0.0 and math.isfinite(span)):
        raise DomainError(f"t_span must be a forward nondegenerate interval, got {t_span!r}")
    y = tuple(float(v) for v in init)
    dim = len(y)
    if dim == 0:
        raise DomainError("state must have at least one component")
    for v in y:
        if not math.isfinite(v):
            raise DomainError(f"initial state must be finite, got {init!r}")

    rtol, atol = cfg.rtol, cfg.atol
    time_tol = 1e-12 * span
    k1 = tuple(field(t0, y))

    ts = [t0]
    ys = [y]
    segments = []
    found = []
    terminal_event = None
    termination = None
    g_prev = [ev.func(t0, y) for ev in events]

    t = t0
    h = _initial_step(field, t0, y, k1, rtol, atol, cfg.max_step, span)
    n_steps = 0

    def _partial(msg):
        return NumericalFailure(
            msg, Trajectory(ts, ys, segments, "step_failure", found, None)
        )

    while True:
        n_steps += 1
        if n_steps > cfg.max_steps:
            raise _partial(f"step budget exhausted after {cfg.max_steps} steps at t={t}")
        h = min(h, cfg.max_step)
        hit_end = False
        if t + h >= t_end:
            h = t_end - t
            hit_end = True
        if h <= abs(t) * 1e-15 or h < 1e-300:
            raise _partial(f"step size underflow (h={h}) at t={t}")

        # Stages (first-same-as-last: k1 carried over from the previous step).
        y2 = tuple(yi + h * (_A21 * a) for yi, a in zip(y, k1))
        k2 = field(t + _C2 * h, y2)
        y3 = tuple(yi + h * (_A31 * a + _A32 * b) for yi, a, b in zip(y, k1, k2))
        k3 = field(t + _C3 * h, y3)
        y4 = tuple(yi + h * (_A41 * a + _A42 * b + _A43 * c) for yi, a, b, c in zip(y, k1, k2, k3))
        k4 = field(t + _C4 * h, y4)
        y5 = tuple(
            yi + h * (_A51 * a + _A52 * b + _A53 * c + _A54 * d)
            for yi, a, b, c, d in zip(y, k1, k2, k3, k4)
        )
        k5 = field(t + _C5 * h, y5)
        y6 = tuple(
            yi + h * (_A61 * a + _A62 * b + _A63 * c + _A64 * d + _A65 * e)
            for yi, a, b, c, d, e in zip(y, k1, k2, k3, k4, k5)
        )
        k6 = field(t + h, y6)
        y_new = tuple(
            yi + h * (_B1 * a + _B3 * c + _B4 * d + _B5 * e + _B6 * f)
            for yi, a, c, d, e, f in zip(y, k1, k3, k4, k5, k6)
        )
        t_new = t_end if hit_end else t + h
        k7 = field(t_new, y_new)

        err = 0.0
        for i in range(dim):
            e_i = h * (
                _E1 * k1[i] + _E3 * k3[i] + _E4 * k4[i] + _E5 * k5[i] + _E6 * k6[i] + _E7 * k7[i]
            )
            sc = atol + rtol * max(abs(y[i]), abs(y_new[i]))
            err += (e_i / sc) ** 2
        err = math.sqrt(err / dim)

        if err > 1.0 or not math.isfinite(err):
            factor = _MIN_FACTOR if not math.isfinite(err) else max(
                _MIN_FACTOR, _SAFETY * err ** -0.2
            )
            h *= factor
            continue

        ks = (k1, k2, k3, k4, k5, k6, k7)
        coeffs = tuple(
            (
                sum(ks[s][i] * _P[s][0] for s in range(7)),
                sum(ks[s][i] * _P[s][1] for s in range(7)),
                sum(ks[s][i] * _P[s][2] for s in range(7)),
                sum(ks[s][i] * _P[s][3] for s in range(7)),
            )
            for i in range(dim)
        )
        seg = (t, h, y, coeffs)
        segments.append(seg)

        # Event handling on the accepted step.
        stop_at = None
        if events:
            fired = []
            for idx, ev in enumerate(events):
                g_new = ev.func(t_new, y_new)
                if _fires(ev.direction, g_prev[idx], g_new):
                    t_ev = _locate_event(ev.func, seg, t, t_new, g_prev[idx], time_tol)
                    fired.append((t_ev, idx))
                g_prev[idx] = g_new
            fired.sort()
            for t_ev, idx in fired:
                rec = EventRecord(idx, t_ev, _eval_segment(seg, t_ev))
                if events[idx].terminal:
                    found.append(rec)
                    terminal_event = rec
                    stop_at = rec
                    break
                found.append(rec)

        if stop_at is not None:
            ts.append(stop_at.time)
            ys.append(stop_at.state)
            termination = "event"
            break

        ts.append(t_new)
        ys.append(y_new)

        if max(abs(v) for v in y_new) > cfg.blow_up_threshold:
            termination = "blow_up"
            break
        if hit_end:
            termination = "reached_t_end"
            break

        t = t_new
        y = y_new
        k1 = k7
        h *= min(_MAX_FACTOR, max(_MIN_FACTOR, _SAFETY * (err ** -0.2 if err > 0.0 else math.inf)))

    return Trajectory(ts, ys, segments, termination, found, terminal_event)
