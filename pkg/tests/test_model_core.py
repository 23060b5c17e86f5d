import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from recipop.errors import DomainError
from recipop.model_core import (
    GeneralModel,
    LinearSystem2D,
    PeriodicFunction,
    PopulationState,
    ReciprocalState,
    linearize,
    to_reciprocal,
    vector_field,
)

positive_floats = st.floats(min_value=1e-6, max_value=1e6, allow_nan=False, allow_infinity=False)


class TestReciprocal:
    def test_unit_fixed_point(self):
        r = to_reciprocal(PopulationState(1, 1))
        assert (r.X, r.Y) == (1.0, 1.0)

    def test_direct_arithmetic(self):
        r = to_reciprocal(PopulationState(2, 3))
        assert r.X == 0.5
        assert r.Y == pytest.approx(1.0 / 3.0, rel=1e-15)

    def test_involution_example(self):
        s = PopulationState(20, 30)
        back = to_reciprocal(to_reciprocal(s))
        assert (back.x, back.y) == (20.0, 30.0)

    @given(x=positive_floats, y=positive_floats)
    @settings(max_examples=100)
    def test_involution_property(self, x, y):
        s = PopulationState(x, y)
        back = to_reciprocal(to_reciprocal(s))
        assert back.x == pytest.approx(x, rel=1e-15)
        assert back.y == pytest.approx(y, rel=1e-15)

    def test_rejects_nonpositive(self):
        with pytest.raises(DomainError):
            PopulationState(0, 1)
        with pytest.raises(DomainError):
            PopulationState(1, -2)
        with pytest.raises(DomainError):
            to_reciprocal(ReciprocalState(0.0, 1.0))


class TestConstructors:
    def test_predator_prey_coefficients(self):
        m = GeneralModel.predator_prey(3, 2)
        assert (m.a, m.b, m.c, m.d, m.e, m.f) == (0.0, 3.0, -2.0, 0.0, -1.0, 1.0)

    def test_competing_coefficients(self):
        m = GeneralModel.competing(4, 1, 1, 5)
        assert (m.a, m.b, m.c, m.d, m.e, m.f) == (4.0, 1.0, 1.0, 5.0, -1.0, -1.0)

    def test_sign_conventions_enforced(self):
        with pytest.raises(DomainError):
            GeneralModel.predator_prey(-3, 2)
        with pytest.raises(DomainError):
            GeneralModel.competing(4, 1, 0, 5)

    def test_general_model_accepts_any_signs(self):
        GeneralModel(a=-1, b=2, c=-3, d=4, e=5, f=-6)

    def test_rejects_nonfinite(self):
        with pytest.raises(DomainError):
            GeneralModel(math.inf, 0, 0, 0, 0, 0)


class TestLinearize:
    def test_predator_prey(self):
        sys = linearize(GeneralModel.predator_prey(3, 2))
        assert sys.matrix() == ((0.0, -3.0), (2.0, 0.0))
        assert sys.forcing() == (1.0, -1.0)

    def test_competing(self):
        sys = linearize(GeneralModel.competing(4, 1, 1, 5))
        assert sys.matrix() == ((-4.0, -1.0), (-1.0, -5.0))
        assert sys.forcing() == (1.0, 1.0)
        f = sys.field()
        X, Y = 0.3, 0.2
        assert f(0.0, (X, Y)) == (-4 * X - Y + 1, -X - 5 * Y + 1)

    def test_zero_model(self):
        sys = linearize(GeneralModel(0, 0, 0, 0, 0, 0))
        assert sys.field()(0.0, (0.7, -0.3)) == (0.0, 0.0)


class TestVectorField:
    def test_rest_point(self):
        m = GeneralModel.predator_prey(3, 2)
        assert vector_field(m, PopulationState(2, 3)) == (0.0, 0.0)

    def test_off_rest_point(self):
        m = GeneralModel.predator_prey(3, 2)
        dx, dy = vector_field(m, PopulationState(1, 3))
        assert dx == 0.0
        assert dy == pytest.approx(-9.0, rel=1e-15)

    def test_competing_rest_point(self):
        m = GeneralModel.competing(4, 1, 1, 5)
        dx, dy = vector_field(m, (19 / 4, 19 / 3))
        assert abs(dx) < 1e-12 and abs(dy) < 1e-12

    def test_rejects_axis(self):
        m = GeneralModel.competing(4, 1, 1, 5)
        with pytest.raises(DomainError):
            vector_field(m, (0.0, 1.0))

    @given(
        a=st.floats(-3, 3), b=st.floats(-3, 3), c=st.floats(-3, 3),
        d=st.floats(-3, 3), e=st.floats(-3, 3), f=st.floats(-3, 3),
        x=st.floats(0.1, 10), y=st.floats(0.1, 10),
    )
    @settings(max_examples=100)
    def test_chain_rule_consistency(self, a, b, c, d, e, f, x, y):
        # The linearized field must equal -(population field)/pop^2 exactly.
        m = GeneralModel(a, b, c, d, e, f)
        dx, dy = vector_field(m, (x, y))
        dU = linearize(m).field()(0.0, (1.0 / x, 1.0 / y))
        assert dU[0] == pytest.approx(-dx / x**2, rel=1e-12, abs=1e-12)
        assert dU[1] == pytest.approx(-dy / y**2, rel=1e-12, abs=1e-12)

    def test_chain_rule_finite_difference(self):
        # d(1/x)/dt along a short numeric trajectory matches the linear field.
        from recipop.ode_engine import IntegratorConfig, dense_eval, integrate

        m = GeneralModel.competing(4, 1, 1, 5)
        pop_field = lambda t, s: vector_field(m, s)
        cfg = IntegratorConfig(rtol=1e-12, atol=1e-14)
        tr = integrate(pop_field, (0.8, 5.0), (0.0, 0.2), cfg)
        lin = linearize(m).field()
        h = 1e-5
        for t in (0.05, 0.1, 0.15):
            xm, ym = dense_eval(tr, t - h)
            xp, yp = dense_eval(tr, t + h)
            x0, y0 = dense_eval(tr, t)
            dX_fd = (1 / xp - 1 / xm) / (2 * h)
            dY_fd = (1 / yp - 1 / ym) / (2 * h)
            dX, dY = lin(t, (1 / x0, 1 / y0))
            assert dX_fd == pytest.approx(dX, rel=1e-8)
            assert dY_fd == pytest.approx(dY, rel=1e-8)


class TestPeriodicFunction:
    def test_constant(self):
        f = PeriodicFunction.constant(2.5, period=3.0)
        assert f(0.0) == 2.5 and f(17.3) == 2.5

    def test_rejects_bad_period(self):
        with pytest.raises(DomainError):
            PeriodicFunction(0.0, 1.0)
        with pytest.raises(DomainError):
            PeriodicFunction(-1.0, 1.0)

    @given(
        period=st.floats(0.1, 10),
        mean=st.floats(-2, 2),
        cos=st.lists(st.floats(-1, 1), max_size=4),
        sin=st.lists(st.floats(-1, 1), max_size=4),
        t=st.floats(-30, 30),
    )
    @settings(max_examples=150)
    def test_periodicity(self, period, mean, cos, sin, t):
        f = PeriodicFunction(period, mean, tuple(cos), tuple(sin))
        size = abs(mean) + f.amplitude_bound() + 1.0
        # Rounding of t + period perturbs the reduced phase by one ulp of t.
        tol = 64.0 * 2.220446049250313e-16 * size * (1.0 + abs(t) / period + 1.0 / period)
        assert abs(f(t + period) - f(t)) <= tol

    def test_negation_and_shift(self):
        f = PeriodicFunction(2.0, 0.5, (0.3,), (0.1, -0.2))
        g = -f
        s = f.shifted(3.0)
        for t in (0.0, 0.3, 1.7):
            assert g(t) == pytest.approx(-f(t), rel=1e-15)
            assert s(t) == pytest.approx(f(t) + 3.0, rel=1e-15)

    def test_amplitude_bound(self):
        f = PeriodicFunction(1.0, 0.0, (0.3, -0.1), (0.2,))
        assert f.amplitude_bound() == pytest.approx(0.6)
        assert not f.is_zero
        assert PeriodicFunction(1.0, 0.0).is_zero


class TestLinearSystem2D:
    def test_periodic_entries(self):
        beta = PeriodicFunction(1.0, 0.0, (), (0.1,))
        sys = LinearSystem2D(0.0, beta.shifted(-3.0).__neg__(), 2.0, 0.0, 1.0, -1.0)
        assert not sys.is_constant
        m = sys.matrix(0.25)
        assert m[0][1] == pytest.approx(3.0 - 0.1 * math.sin(math.pi / 2), rel=1e-12)

    def test_rejects_nonfinite_entry(self):
        with pytest.raises(DomainError):
            LinearSystem2D(math.nan, 0, 0, 0)
