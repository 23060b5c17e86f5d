"""Scalar periodic equations x' = f(t, x): Poincare map, periodic-solution
counting, convexity checks, and the reciprocal / shift transforms.

The counting machinery targets equations whose third x-derivative has one
sign (cubic-in-x equations with a sign-definite leading coefficient are the
motivating family): such equations admit at most three periodic solutions,
and at most two positive ones when f(t, 0) = 0.  Fixed points of the period
map x(0) -> x(p) are exactly the periodic solutions, so counting reduces to
sign changes of P(x0) - x0 over a bracket, with explosive escape before
t = p recorded as a blow-up verdict for that initial value rather than an
error - escape is expected behavior for cubic growth.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DomainError, NoDataError
from .model_core import PeriodicFunction
from .ode_engine import IntegratorConfig, integrate

__all__ = [
    "ScalarPeriodicRHS",
    "CallableRHS",
    "AbelPolynomial",
    "ReciprocalRHS",
    "ShiftedRHS",
    "PoincareAnalysis",
    "poincare_map",
    "count_periodic",
    "check_hypothesis",
    "lemma_Q",
    "reciprocal_rhs",
    "shift_rhs",
    "periodic_orbit_interpolant",
]

_DEFAULT_CFG = IntegratorConfig()
FIXED_POINT_RESIDUAL = 1e-10
DEDUP_RTOL = 1e-7
SIGN_TOL = 1e-6


class ScalarPeriodicRHS:
    """Right-hand side of a scalar p-periodic equation x' = f(t, x).

    Subclasses provide ``f`` and optionally exact x-derivatives up to third
    order; missing derivatives fall back to central finite differences with
    step max(1e-4, 1e-4*|x|) (third order uses the five-point stencil).
    """

    period: float

    def f(self, t: float, x: float) -> float:
        raise NotImplementedError

    # Exact derivatives; None means "not available, use finite differences".
    def fx(self, t, x):
        return None

    def fxx(self, t, x):
        return None

    def fxxx(self, t, x):
        return None

    @property
    def has_exact_derivatives(self) -> bool:
        return self.fx(0.0, 1.0) is not None

    # Finite-difference fallbacks.
    def _h(self, x):
        return max(1e-4, 1e-4 * abs(x))

    def d1(self, t, x):
        v = self.fx(t, x)
        if v is not None:
            return v
        h = self._h(x)
        return (self.f(t, x + h) - self.f(t, x - h)) / (2.0 * h)

    def d2(self, t, x):
        v = self.fxx(t, x)
        if v is not None:
            return v
        h = self._h(x)
        return (self.f(t, x + h) - 2.0 * self.f(t, x) + self.f(t, x - h)) / (h * h)

    def d3(self, t, x):
        v = self.fxxx(t, x)
        if v is not None:
            return v
        h = self._h(x)
        return (
            self.f(t, x + 2.0 * h)
            - 2.0 * self.f(t, x + h)
            + 2.0 * self.f(t, x - h)
            - self.f(t, x - 2.0 * h)
        ) / (2.0 * h ** 3)

    def ode_field(self):
        f = self.f

        def field(t, y):
            return (f(t, y[0]),)

        return field


class CallableRHS(ScalarPeriodicRHS):
    """Wrap an arbitrary callable f(t, x), with optional exact derivatives."""

    def __init__(self, func, period, dfdx=None, d2fdx2=None, d3fdx3=None):
        if not period > 0:
            raise DomainError(f"period must be positive, got {period}")
        self._func = func
        self.period = float(period)
        self._dfdx = dfdx
        self._d2fdx2 = d2fdx2
        self._d3fdx3 = d3fdx3

    def f(self, t, x):
        return self._func(t, x)

    def fx(self, t, x):
        return None if self._dfdx is None else self._dfdx(t, x)

    def fxx(self, t, x):
        return None if self._d2fdx2 is None else self._d2fdx2(t, x)

    def fxxx(self, t, x):
        return None if self._d3fdx3 is None else self._d3fdx3(t, x)


class AbelPolynomial(ScalarPeriodicRHS):
    """Cubic-in-x equation with periodic coefficients:

        x' = a0(t) x^3 + a1(t) x^2 + a2(t) x + a3(t).

    Derivatives are exact.  Coefficients may be floats (constants) or
    :class:`PeriodicFunction` values sharing the equation period.
    """

    def __init__(self, a0, a1=0.0, a2=0.0, a3=0.0, period=None):
        coeffs = []
        periods = set()
        for v in (a0, a1, a2, a3):
            if isinstance(v, PeriodicFunction):
                periods.add(v.period)
            coeffs.append(v)
        if period is None:
            if not periods:
                raise DomainError("period required when all coefficients are constants")
            period = max(periods)
        if any(p != period for p in periods):
            raise DomainError(f"coefficient periods {periods} differ from period {period}")
        self.period = float(period)
        self.a0, self.a1, self.a2, self.a3 = [
            v if isinstance(v, PeriodicFunction) else PeriodicFunction(period, float(v))
            for v in coeffs
        ]
        self._poly = self._build_fast_eval()

    def _build_fast_eval(self):
        """Fused coefficient evaluation: the period map machinery calls the
        right-hand side tens of thousands of times per analysis, so the four
        Fourier series share one phase reduction and one trig pair per
        harmonic instead of four independent evaluations."""
        p = self.period
        two_pi = 2.0 * math.pi
        coeffs = (self.a0, self.a1, self.a2, self.a3)
        means = tuple(c.mean for c in coeffs)
        rows = []
        for k in range(1, max(c.harmonics for c in coeffs) + 1):
            row = []
            for c in coeffs:
                A = c.cos_coeffs[k - 1] if k <= len(c.cos_coeffs) else 0.0
                B = c.sin_coeffs[k - 1] if k <= len(c.sin_coeffs) else 0.0
                row += [A, B]
            if any(row):
                rows.append((float(k), tuple(row)))
        harmonics = tuple(rows)
        fmod, cos, sin = math.fmod, math.cos, math.sin
        m0, m1, m2, m3 = means

        if not harmonics:
            def poly(t, x):
                return ((m0 * x + m1) * x + m2) * x + m3
            return poly

        def poly(t, x):
            phase = two_pi * fmod(t, p) / p
            c0, c1, c2, c3 = m0, m1, m2, m3
            for k, (A0, B0, A1, B1, A2, B2, A3, B3) in harmonics:
                ck = cos(k * phase)
                sk = sin(k * phase)
                c0 += A0 * ck + B0 * sk
                c1 += A1 * ck + B1 * sk
                c2 += A2 * ck + B2 * sk
                c3 += A3 * ck + B3 * sk
            return ((c0 * x + c1) * x + c2) * x + c3

        return poly

    def f(self, t, x):
        return self._poly(t, x)

    def ode_field(self):
        poly = self._poly

        def field(t, y):
            return (poly(t, y[0]),)

        return field

    def fx(self, t, x):
        return (3.0 * self.a0(t) * x + 2.0 * self.a1(t)) * x + self.a2(t)

    def fxx(self, t, x):
        return 6.0 * self.a0(t) * x + 2.0 * self.a1(t)

    def fxxx(self, t, x):
        return 6.0 * self.a0(t)


class ReciprocalRHS(ScalarPeriodicRHS):
    """Reciprocal transform of an inner equation.

    With g(t, y) = y^2 * f_inner(t, 1/y), the substitution y = 1/x maps
    solutions of x' = f_inner to solutions of y' = -g(t, y); the minus sign
    is carried here, so ``f`` is the right-hand side actually integrated
    and positive periodic solutions correspond one-to-one.
    """

    def __init__(self, inner: ScalarPeriodicRHS):
        self.inner = inner
        self.period = inner.period

    def g(self, t, y):
        """Transform value y^2 * f_inner(t, 1/y) (no sign flip)."""
        if y == 0.0:
            raise DomainError("reciprocal transform undefined at y = 0")
        return y * y * self.inner.f(t, 1.0 / y)

    def f(self, t, y):
        return -self.g(t, y)

    def fx(self, t, y):
        if y == 0.0:
            raise DomainError("reciprocal transform undefined at y = 0")
        fi = self.inner.fx(t, 1.0 / y)
        if fi is None:
            return None
        return -(2.0 * y * self.inner.f(t, 1.0 / y) - fi)

    def fxx(self, t, y):
        # g_yy(t, y) equals Q(t, 1/y) of the inner equation; that identity is
        # what transports one-signed convexity through the transform.
        if y == 0.0:
            raise DomainError("reciprocal transform undefined at y = 0")
        x = 1.0 / y
        f1 = self.inner.fx(t, x)
        f2 = self.inner.fxx(t, x)
        if f1 is None or f2 is None:
            return None
        return -(2.0 * self.inner.f(t, x) - 2.0 * x * f1 + x * x * f2)

    def fxxx(self, t, y):
        if y == 0.0:
            raise DomainError("reciprocal transform undefined at y = 0")
        x = 1.0 / y
        f3 = self.inner.fxxx(t, x)
        if f3 is None:
            return None
        return x * x * x * x * f3


class ShiftedRHS(ScalarPeriodicRHS):
    """Translate the unknown by a reference solution xi(t):

        z' = f_inner(t, z + xi(t)) - f_inner(t, xi(t)),

    so z = 0 is a solution by construction and the third x-derivative keeps
    its sign.  ``xi`` is any callable of t (e.g. a dense periodic
    interpolant of a numerically found periodic solution).
    """

    def __init__(self, inner: ScalarPeriodicRHS, xi):
        self.inner = inner
        self.xi = xi
        self.period = inner.period

    def f(self, t, z):
        s = self.xi(t)
        return self.inner.f(t, z + s) - self.inner.f(t, s)

    def fx(self, t, z):
        return self.inner.fx(t, z + self.xi(t))

    def fxx(self, t, z):
        return self.inner.fxx(t, z + self.xi(t))

    def fxxx(self, t, z):
        return self.inner.fxxx(t, z + self.xi(t))


def poincare_map(rhs: ScalarPeriodicRHS, x0: float, cfg: IntegratorConfig | None = None):
    """Period map x0 -> x(p), or None when the solution escapes before p.

    Escape means the magnitude guard of the integrator tripped; integration
    failures other than escape propagate as NumericalFailure.
    """
    cfg = cfg or _DEFAULT_CFG
    from .errors import NumericalFailure

    try:
        tr = integrate(rhs.ode_field(), (x0,), (0.0, rhs.period), cfg)
    except NumericalFailure as exc:
        # Step collapse while the state is already huge is the blow-up
        # funnel, not a solver defect.
        if exc.trajectory is not None and len(exc.trajectory) > 1:
            last = abs(exc.trajectory.states[-1, 0])
            if last > 0.01 * cfg.blow_up_threshold:
                return None
        raise
    if tr.termination == "blow_up":
        return None
    return float(tr.states[-1, 0])


@dataclass(frozen=True)
class PoincareAnalysis:
    """Fixed points of the period map over a bracket, with diagnostics."""

    fixed_points: tuple
    residuals: tuple
    bracket: tuple
    grid_n: int
    blow_up_intervals: tuple
    hypothesis: str  # "positive" | "negative" | "indefinite" | "unchecked"
    grid: tuple
    map_values: tuple  # None entries mark escaping initial values


def _grid_scan(rhs, x_lo, x_hi, n, cfg):
    xs = [x_lo + (x_hi - x_lo) * i / n for i in range(n + 1)]
    return xs, [poincare_map(rhs, x, cfg) for x in xs]


def count_periodic(
    rhs: ScalarPeriodicRHS,
    bracket,
    grid_n: int = 512,
    cfg: IntegratorConfig | None = None,
    hypothesis_samples: int = 81,
) -> PoincareAnalysis:
    """Locate all fixed points of the period map inside ``bracket``.

    The displacement D(x0) = P(x0) - x0 is evaluated on a uniform grid;
    escaping grid points are recorded and excluded; each sign change is
    refined by bisection until |D| < 1e-10*(1+|x0|) (or the bracket hits
    width eps).  One doubling refinement pass runs when two sign changes
    fall within four grid cells of each other, since clustered roots are
    the only way a too-coarse grid can miss the true count.
    """
    cfg = cfg or _DEFAULT_CFG
    x_lo, x_hi = float(bracket[0]), float(bracket[1])
    if not x_lo < x_hi:
        raise DomainError(f"bracket must satisfy lo < hi, got {bracket!r}")
    if grid_n < 2:
        raise DomainError(f"grid_n must be at least 2, got {grid_n}")

    xs, vals = _grid_scan(rhs, x_lo, x_hi, grid_n, cfg)

    def sign_change_cells(xs_, vals_):
        cells = []
        for i in range(len(xs_) - 1):
            d_a = None if vals_[i] is None else vals_[i] - xs_[i]
            d_b = None if vals_[i + 1] is None else vals_[i + 1] - xs_[i + 1]
            if d_a is None or d_b is None:
                continue
            if d_a == 0.0 or d_b == 0.0:
                continue  # exact grid roots handled separately
            if (d_a < 0.0) != (d_b < 0.0):
                cells.append(i)
        return cells

    cells = sign_change_cells(xs, vals)
    if any(b - a < 4 for a, b in zip(cells, cells[1:])) and grid_n * 2 >= 4:
        grid_n *= 2
        xs, vals = _grid_scan(rhs, x_lo, x_hi, grid_n, cfg)
        cells = sign_change_cells(xs, vals)

    roots = []
    # Grid points that are fixed points to within the target residual.
    for x, v in zip(xs, vals):
        if v is not None and abs(v - x) < FIXED_POINT_RESIDUAL * (1.0 + abs(x)):
            roots.append((x, abs(v - x)))

    for i in cells:
        lo, hi = xs[i], xs[i + 1]
        d_lo = vals[i] - lo
        root = None
        best_resid = math.inf
        for _ in range(200):
            mid = 0.5 * (lo + hi)
            if mid <= lo or mid >= hi:
                # Bracket collapsed to adjacent floats; keep the best point.
                root = (mid, best_resid)
                break
            p_mid = poincare_map(rhs, mid, cfg)
            if p_mid is None:
                # Escape inside the cell: the apparent sign change straddles
                # the escape boundary, not a genuine fixed point.
                root = None
                break
            d_mid = p_mid - mid
            best_resid = min(best_resid, abs(d_mid))
            if abs(d_mid) < FIXED_POINT_RESIDUAL * (1.0 + abs(mid)):
                root = (mid, abs(d_mid))
                break
            if (d_mid < 0.0) == (d_lo < 0.0):
                lo, d_lo = mid, d_mid
            else:
                hi = mid
            root = (0.5 * (lo + hi), best_resid)
        if root is not None:
            roots.append(root)

    roots.sort()
    deduped = []
    for x, r in roots:
        if deduped and abs(x - deduped[-1][0]) <= DEDUP_RTOL * (1.0 + abs(x)):
            if r < deduped[-1][1]:
                deduped[-1] = (x, r)
            continue
        deduped.append((x, r))

    blow_intervals = []
    run_start = None
    for x, v in zip(xs, vals):
        if v is None:
            if run_start is None:
                run_start = x
            run_end = x
        elif run_start is not None:
            blow_intervals.append((run_start, run_end))
            run_start = None
    if run_start is not None:
        blow_intervals.append((run_start, run_end))

    if all(v is None for v in vals):
        raise NoDataError("every grid point escaped before the period: nothing to count")

    verdict = check_hypothesis(rhs, (0.0, rhs.period, x_lo, x_hi), hypothesis_samples)

    return PoincareAnalysis(
        fixed_points=tuple(x for x, _ in deduped),
        residuals=tuple(r for _, r in deduped),
        bracket=(x_lo, x_hi),
        grid_n=grid_n,
        blow_up_intervals=tuple(blow_intervals),
        hypothesis=verdict,
        grid=tuple(xs),
        map_values=tuple(vals),
    )


def check_hypothesis(rhs: ScalarPeriodicRHS, box, n_samples: int = 81, sign_tol: float = SIGN_TOL) -> str:
    """Sampled sign verdict for the third x-derivative over a (t, x) box.

    Exact derivatives are used when the equation provides them; otherwise a
    five-point central difference.  Returns "positive" when every sample
    exceeds +sign_tol, "negative" when every sample is below -sign_tol,
    else "indefinite".  For sampled callables this is evidence, not proof.
    """
    t_lo, t_hi, x_lo, x_hi = map(float, box)
    if n_samples < 1:
        raise DomainError("n_samples must be positive")
    side = max(2, int(math.ceil(math.sqrt(n_samples))))
    pos = neg = 0
    for i in range(side):
        t = t_lo + (t_hi - t_lo) * i / (side - 1)
        for j in range(side):
            x = x_lo + (x_hi - x_lo) * j / (side - 1)
            v = rhs.d3(t, x)
            if v > sign_tol:
                pos += 1
            elif v < -sign_tol:
                neg += 1
            else:
                return "indefinite"
    if pos and not neg:
        return "positive"
    if neg and not pos:
        return "negative"
    return "indefinite"


def lemma_Q(rhs: ScalarPeriodicRHS, t: float, x: float) -> float:
    """The convexity-transport functional Q = 2 f - 2 x f_x + x^2 f_xx.

    Q vanishes on the span of x and x^2, equals twice the odd part
    (leading cubic plus forcing) for cubic equations, and coincides with
    the second y-derivative of the reciprocal transform at y = 1/x.
    """
    return 2.0 * rhs.f(t, x) - 2.0 * x * rhs.d1(t, x) + x * x * rhs.d2(t, x)


def reciprocal_rhs(rhs: ScalarPeriodicRHS) -> ReciprocalRHS:
    """Reciprocal transform; see :class:`ReciprocalRHS` for the sign
    convention that preserves positive periodic solutions one-to-one."""
    return ReciprocalRHS(rhs)


def shift_rhs(rhs: ScalarPeriodicRHS, xi, cfg: IntegratorConfig | None = None) -> ShiftedRHS:
    """Shift the unknown by a periodic reference solution ``xi``.

    ``xi`` must be (numerically) a periodic solution of ``rhs``:
    |P(xi(0)) - xi(0)| < 1e-8 is enforced before the transform is built.
    """
    if isinstance(xi, (int, float)):
        const = float(xi)
        xi = lambda t: const
    x0 = xi(0.0)
    p_val = poincare_map(rhs, x0, cfg)
    if p_val is None or abs(p_val - x0) >= 1e-8:
        raise DomainError(
            "shift reference is not a periodic solution: "
            f"|P(xi(0)) - xi(0)| = {None if p_val is None else abs(p_val - x0)}"
        )
    return ShiftedRHS(rhs, xi)


def periodic_orbit_interpolant(rhs: ScalarPeriodicRHS, x0: float, cfg: IntegratorConfig | None = None):
    """Dense periodic interpolant of the solution starting at ``x0``.

    Integrates once over [0, p] and wraps the dense output periodically;
    useful as the ``xi`` argument of :func:`shift_rhs`.
    """
    cfg = cfg or _DEFAULT_CFG
    tr = integrate(rhs.ode_field(), (x0,), (0.0, rhs.period), cfg)
    if tr.termination != "reached_t_end":
        raise DomainError(f"reference orbit did not reach the period: {tr.termination}")
    p = rhs.period

    def xi(t):
        tau = math.fmod(t, p)
        if tau < 0.0:
            tau += p
        return tr._eval_tuple(tau)[0]

    return xi
