import math

import numpy as np
import pytest

from recipop.errors import DomainError, NumericalFailure
from recipop.ode_engine import (
    EventSpec,
    IntegratorConfig,
    dense_eval,
    integrate,
)
from recipop.predator_prey import scaled_reciprocal_system

from _helpers import TIGHT, integrate_scaled

B, D = 3.0, 2.0
OMEGA = math.sqrt(B * D)
PERIOD = 2.0 * math.pi / OMEGA
# First axis crossing from (x0, y0) = (20, 30), frozen from the
# crossing-angle computation in the closed-form plane (see module tests).
T_CROSS = 0.03858189827097935


class TestBasics:
    def test_exponential_decay(self):
        tr = integrate(lambda t, y: (-y[0],), (1.0,), (0.0, 1.0))
        assert tr.termination == "reached_t_end"
        assert tr.states[-1, 0] == pytest.approx(math.exp(-1.0), rel=1e-8)

    def test_rest_point_constant_trajectory(self):
        init = (1.0 / OMEGA, 1.0 / B)
        tr = integrate(scaled_reciprocal_system(B, D).field(), init, (0.0, 3.0))
        assert np.max(np.abs(tr.states - np.asarray(init))) < 1e-10

    def test_rejects_degenerate_span(self):
        with pytest.raises(DomainError):
            integrate(lambda t, y: (0.0,), (1.0,), (1.0, 1.0))
        with pytest.raises(DomainError):
            integrate(lambda t, y: (0.0,), (1.0,), (2.0, 1.0))

    def test_rejects_nonfinite_init(self):
        with pytest.raises(DomainError):
            integrate(lambda t, y: (0.0,), (math.nan,), (0.0, 1.0))

    def test_scipy_cross_check(self):
        # Independent oracle: same problem through scipy's adaptive solver.
        from scipy.integrate import solve_ivp

        field = scaled_reciprocal_system(B, D).field()
        init = (0.2, 0.25)
        tr = integrate(field, init, (0.0, 4.0))
        ref = solve_ivp(
            lambda t, y: field(t, y), (0.0, 4.0), init, rtol=1e-11, atol=1e-13
        )
        assert tr.states[-1] == pytest.approx(ref.y[:, -1], rel=1e-7, abs=1e-9)


class TestEvents:
    def test_axis_event_matches_analytic_crossing(self):
        tr = integrate_scaled(B, D, 20.0, 30.0, 5.0)
        assert tr.termination == "event"
        assert tr.terminal_event.index == 1  # Y coordinate crossed: y explodes
        assert tr.terminal_event.time == pytest.approx(T_CROSS, rel=1e-8)

    def test_event_independent_of_step_sequence(self):
        times = []
        for max_step in (math.inf, 0.003):
            cfg = IntegratorConfig(rtol=1e-12, atol=1e-14, max_step=max_step)
            tr = integrate_scaled(B, D, 20.0, 30.0, 5.0, cfg=cfg)
            times.append(tr.terminal_event.time)
        assert abs(times[0] - times[1]) < 1e-10

    def test_direction_filters(self):
        # y = sin(t) crosses zero downward at pi, upward at 2*pi.
        field = lambda t, y: (math.cos(t),)
        ev_dec = EventSpec(lambda t, y: y[0], "decreasing", True)
        ev_inc = EventSpec(lambda t, y: y[0], "increasing", True)
        tr = integrate(field, (0.0,), (0.0, 8.0), events=(ev_dec,))
        assert tr.terminal_event.time == pytest.approx(math.pi, abs=1e-9)
        tr = integrate(field, (0.0,), (0.0, 8.0), events=(ev_inc,))
        assert tr.terminal_event.time == pytest.approx(2.0 * math.pi, abs=1e-9)

    def test_nonterminal_events_recorded(self):
        field = lambda t, y: (math.cos(t),)
        ev = EventSpec(lambda t, y: y[0], "any", False)
        tr = integrate(field, (0.0,), (0.0, 8.0), events=(ev,))
        assert tr.termination == "reached_t_end"
        ts = [rec.time for rec in tr.events]
        assert ts == pytest.approx([math.pi, 2.0 * math.pi], abs=1e-9)

    def test_event_not_fired_at_start_zero(self):
        # Event function vanishes at t0; must not fire there.
        field = lambda t, y: (1.0,)
        ev = EventSpec(lambda t, y: y[0], "any", True)
        tr = integrate(field, (0.0,), (0.0, 1.0), events=(ev,))
        assert tr.termination == "reached_t_end"


class TestDenseOutput:
    def test_reproduces_samples(self):
        field = scaled_reciprocal_system(B, D).field()
        tr = integrate(field, (0.5, 0.2), (0.0, 3.0))
        for i in range(0, len(tr), 7):
            v = dense_eval(tr, tr.times[i])
            assert v == pytest.approx(tr.states[i], rel=1e-12, abs=1e-13)

    def test_constant_trajectory(self):
        tr = integrate(lambda t, y: (0.0, 0.0), (1.5, -2.5), (0.0, 2.0))
        assert dense_eval(tr, 1.234) == pytest.approx([1.5, -2.5], rel=1e-14)

    def test_half_period_matches_closed_form(self):
        from recipop.predator_prey import closed_reciprocal, orbit_constants

        consts = orbit_constants(B, D, 10.0, 3.0)
        tr = integrate_scaled(B, D, 10.0, 3.0, PERIOD, cfg=IntegratorConfig())
        t_half = PERIOD / 2.0
        assert dense_eval(tr, t_half) == pytest.approx(
            closed_reciprocal(B, D, consts, t_half), rel=1e-7
        )

    def test_range_error(self):
        tr = integrate(lambda t, y: (1.0,), (0.0,), (0.0, 1.0))
        with pytest.raises(DomainError):
            dense_eval(tr, -0.1)
        with pytest.raises(DomainError):
            dense_eval(tr, 1.1)


class TestAccuracy:
    def _endpoint_error(self, cfg):
        from recipop.predator_prey import closed_reciprocal, orbit_constants

        consts = orbit_constants(B, D, 10.0, 3.0)
        tr = integrate_scaled(B, D, 10.0, 3.0, PERIOD, cfg=cfg, axis_events=False)
        exact = closed_reciprocal(B, D, consts, tr.t_final)
        return float(np.max(np.abs(tr.states[-1] - exact)))

    def test_order_check_step_halving(self):
        # At loose tolerance and bound step the scheme is in its fixed-step
        # regime: halving max_step must cut the error at least fourfold
        # (fifth-order propagation gives ~32x).
        e_h = self._endpoint_error(IntegratorConfig(rtol=1e-3, atol=1e-3, max_step=0.1))
        e_h2 = self._endpoint_error(IntegratorConfig(rtol=1e-3, atol=1e-3, max_step=0.05))
        assert e_h / e_h2 >= 4.0

    def test_tolerance_tightening(self):
        e_loose = self._endpoint_error(IntegratorConfig(rtol=1e-6, atol=1e-9))
        e_tight = self._endpoint_error(IntegratorConfig(rtol=1e-9, atol=1e-12))
        assert e_loose / e_tight >= 4.0

    def test_circle_conservation_one_period(self):
        tr = integrate_scaled(B, D, 10.0, 3.0, PERIOD, cfg=IntegratorConfig(), axis_events=False)
        Xc, Yc = 1.0 / OMEGA, 1.0 / B
        r2 = (tr.states[:, 0] - Xc) ** 2 + (tr.states[:, 1] - Yc) ** 2
        assert np.max(np.abs(r2 - r2[0])) / r2[0] < 1e-7


class TestFailureModes:
    def test_blow_up_termination(self):
        cfg = IntegratorConfig(blow_up_threshold=1e6)
        tr = integrate(lambda t, y: (y[0] * y[0],), (1.0,), (0.0, 2.0), cfg)
        assert tr.termination == "blow_up"
        assert tr.t_final < 1.0001  # the solution pole sits at t = 1
        assert abs(tr.states[-1, 0]) > 1e6

    def test_step_underflow_carries_partial_trajectory(self):
        # Integrable singularity of the field at t = 1 starves the step size.
        field = lambda t, y: (1.0 / (1.0 - t),)
        with pytest.raises(NumericalFailure) as exc_info:
            integrate(field, (0.0,), (0.0, 2.0))
        tr = exc_info.value.trajectory
        assert tr is not None
        assert tr.termination == "step_failure"
        assert 0.9 < tr.t_final <= 1.0

    def test_max_steps_budget(self):
        cfg = IntegratorConfig(max_step=1e-5, max_steps=100)
        with pytest.raises(NumericalFailure) as exc_info:
            integrate(lambda t, y: (-y[0],), (1.0,), (0.0, 1.0), cfg)
        assert exc_info.value.trajectory is not None
        assert len(exc_info.value.trajectory) > 50

    def test_config_validation(self):
        with pytest.raises(DomainError):
            IntegratorConfig(rtol=0.0)
        with pytest.raises(DomainError):
            IntegratorConfig(blow_up_threshold=0.5)
        with pytest.raises(DomainError):
            IntegratorConfig(max_steps=0)
