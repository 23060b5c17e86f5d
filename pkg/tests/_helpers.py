"""Shared test utilities: orbit generators and numeric measurement oracles."""

import math

import numpy as np

from recipop.ode_engine import EventSpec, IntegratorConfig, integrate
from recipop.predator_prey import orbit_constants, scaled_reciprocal_system, to_scaled

TIGHT = IntegratorConfig(rtol=1e-12, atol=1e-14)


def random_periodic_initial(rng, b, d, radius_frac=(0.05, 0.85)):
    """Initial populations whose orbit circle stays inside the quadrant."""
    w = math.sqrt(b * d)
    Xc, Yc = 1.0 / w, 1.0 / b
    dmin = min(Xc, Yc)
    r = rng.uniform(*radius_frac) * dmin
    phi = rng.uniform(0.0, 2.0 * math.pi)
    X0 = Xc + r * math.cos(phi)
    Y0 = Yc + r * math.sin(phi)
    return math.sqrt(d / b) / X0, 1.0 / Y0


def random_blowup_initial(rng, b, d, radius_frac=(1.1, 2.5)):
    """Initial populations whose orbit circle leaves the quadrant; the start
    point itself is kept strictly inside."""
    w = math.sqrt(b * d)
    Xc, Yc = 1.0 / w, 1.0 / b
    dmin = min(Xc, Yc)
    while True:
        r = rng.uniform(*radius_frac) * dmin
        phi = rng.uniform(0.0, 2.0 * math.pi)
        X0 = Xc + r * math.cos(phi)
        Y0 = Yc + r * math.sin(phi)
        if X0 > 1e-3 and Y0 > 1e-3:
            return math.sqrt(d / b) / X0, 1.0 / Y0


def integrate_scaled(b, d, x0, y0, t_end, cfg=TIGHT, axis_events=True):
    """Integrate the scaled reciprocal rotation system from populations."""
    field = scaled_reciprocal_system(b, d).field()
    events = ()
    if axis_events:
        events = (
            EventSpec(lambda t, s: s[0], "decreasing", True),
            EventSpec(lambda t, s: s[1], "decreasing", True),
        )
    return integrate(field, to_scaled(b, d, x0, y0), (0.0, t_end), cfg, events)


def measure_return_time(b, d, x0, y0, cfg=TIGHT):
    """Numeric Poincare return time of a periodic orbit, via the event of
    re-crossing the initial radius ray with positive orientation."""
    consts = orbit_constants(b, d, x0, y0)
    Xc, Yc = consts.center
    X0, Y0 = to_scaled(b, d, x0, y0)
    r0x, r0y = X0 - Xc, Y0 - Yc

    def cross(t, s):
        return r0x * (s[1] - Yc) - r0y * (s[0] - Xc)

    guess = 2.0 * math.pi / math.sqrt(b * d)
    tr = integrate(
        scaled_reciprocal_system(b, d).field(),
        (X0, Y0),
        (0.0, 1.5 * guess),
        cfg,
        (EventSpec(cross, "increasing", True),),
    )
    assert tr.termination == "event", f"no return detected for ({x0}, {y0})"
    return tr.terminal_event.time


def max_rel_err(a, b):
    a, b = np.asarray(a, dtype=float), np.asarray(b, dtype=float)
    return float(np.max(np.abs(a - b) / np.maximum(np.abs(b), 1e-300)))
