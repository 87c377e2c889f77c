"""Special-function and quadrature kernel.

Closed-form evaluators (upper incomplete gamma, exponential-moment series,
the h-function) plus the double-exponential quadrature oracle that every
closed form in the package is cross-checked against.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

__all__ = [
    "EULER_GAMMA",
    "DomainError",
    "QuadratureError",
    "QuadratureResult",
    "HEvaluator",
    "integrate",
    "integrate_log_singular",
    "gamma_upper",
    "exp_moment",
    "h_eval",
    "digamma",
]

EULER_GAMMA = 0.5772156649015329

_HALF_PI = math.pi / 2.0
_TINY = 1e-300
# Trellis caps: beyond these |u| every weight underflows (finite map) or the
# abscissa overflows (half-infinite map).
_U_CAP_FINITE = 6.3
_U_CAP_INF = 6.8


class DomainError(ValueError):
    """Argument outside the supported domain of a kernel function."""


class _PanelFailure(Exception):
    """A quadrature panel cannot be completed; the caller should bisect."""


@dataclass(frozen=True)
class QuadratureResult:
    value: float
    error_estimate: float
    evaluations: int


class QuadratureError(RuntimeError):
    """Raised when the panel budget is exhausted before the tolerance is met.

    The best estimate so far is attached as ``partial``.
    """

    def __init__(self, message: str, partial: QuadratureResult):
        super().__init__(message)
        self.partial = partial


def _de_pass(terms_at, tol, max_level, u_cap):
    """Shared level-doubling driver for the double-exponential rules.

    ``terms_at(u)`` returns the weighted integrand value at trellis
    coordinate u (already including the jacobian).  Returns
    (value, error, evaluations, converged).
    """
    evals = 0

    def sweep(h, odd_only):
        nonlocal evals
        total = 0.0
        for sign in (1.0, -1.0):
            small = 0
            j = 1
            while j * h <= u_cap:
                if odd_only and j % 2 == 0:
                    j += 1
                    continue
                term = terms_at(sign * j * h)
                evals += 1
                total += term
                if abs(term) <= 1e-18 * (abs(total) + _TINY):
                    small += 1
                    if small >= 2:
                        break
                else:
                    small = 0
                j += 1
        return total

    center = terms_at(0.0)
    evals += 1
    h = 1.0
    value = h * (center + sweep(h, odd_only=False))
    err = abs(value) + 1.0
    for _ in range(max_level):
        h *= 0.5
        new = sweep(h, odd_only=True)
        prev = value
        value = 0.5 * value + h * new
        err = abs(value - prev)
        if err <= max(tol, 1e-16 * abs(value)):
            return value, err, evals, True
    return value, err, evals, False


def _tanh_sinh_panel(f, a, b, tol, max_level=8):
    """Double-exponential rule on the finite interval (a, b).

    Endpoint-singular integrands are fine: nodes are placed by their
    distance to the nearer endpoint, so no evaluation lands on a or b.
    """
    half = 0.5 * (b - a)
    mid = 0.5 * (a + b)

    def term(u):
        z = _HALF_PI * math.sinh(u)
        if z >= 0.0:
            ez = math.exp(-2.0 * z)
            if ez == 0.0:
                return 0.0
            delta = 2.0 * ez / (1.0 + ez)  # 1 - tanh(z)
            x = b - half * delta
            if x >= b:
                return 0.0
            sech2 = 2.0 * delta - delta * delta  # 1 - tanh^2
        else:
            ez = math.exp(2.0 * z)
            if ez == 0.0:
                return 0.0
            delta = 2.0 * ez / (1.0 + ez)
            x = a + half * delta
            if x <= a:
                return 0.0
            sech2 = 2.0 * delta - delta * delta
        w = half * _HALF_PI * math.cosh(u) * sech2
        if w == 0.0:
            return 0.0
        try:
            fx = f(x)
        except (ValueError, ZeroDivisionError, OverflowError):
            raise _PanelFailure  # e.g. a node landed on an interior singularity
        out = w * fx
        if not math.isfinite(out):
            # integrable blow-up met a negligible weight: drop the node
            if w < 1e-30:
                return 0.0
            raise _PanelFailure
        return out

    return _de_pass(term, tol, max_level, _U_CAP_FINITE)


def _exp_sinh_panel(f, a, tol, max_level=8):
    """Double-exponential rule on (a, infinity)."""

    def term(u):
        z = _HALF_PI * math.sinh(u)
        if z > 700.0:
            return 0.0
        ez = math.exp(z)
        if ez == 0.0:
            return 0.0
        x = a + ez
        if x <= a or not math.isfinite(x):
            return 0.0
        w = _HALF_PI * math.cosh(u) * ez
        try:
            fx = f(x)
        except (ValueError, ZeroDivisionError, OverflowError):
            raise _PanelFailure
        out = w * fx
        if not math.isfinite(out):
            if abs(fx) < 1.0 and not math.isfinite(w):
                return 0.0
            raise _PanelFailure
        return out

    return _de_pass(term, tol, max_level, _U_CAP_INF)


def _eval_panel(f, a, b, off, tol):
    try:
        if b == math.inf:
            value, err, n, ok = _exp_sinh_panel(f, a, tol)
        else:
            value, err, n, ok = _tanh_sinh_panel(f, a, b, tol)
    except _PanelFailure:
        return 0.0, math.inf, 1, False
    if not ok:
        err = max(err, tol)
    return value, err, n, ok


def integrate(f, lo, hi, tol=1e-10, max_panels=512):
    """Adaptive quadrature of ``f`` over (lo, hi); hi may be math.inf.

    Panels are refined worst-error-first; an unconverged panel is bisected
    (an infinite panel is cut into a finite head plus a farther tail).
    Raises QuadratureError with the partial estimate when the panel budget
    runs out.
    """
    if not lo < hi:
        raise DomainError(f"empty integration interval ({lo}, {hi})")
    if tol <= 0.0:
        raise DomainError("tol must be positive")

    off0 = max(1.0, abs(lo))
    value, err, n, _ = _eval_panel(f, lo, hi, off0, tol)
    # (err, seq, a, b, tail_offset, value); seq breaks ties deterministically
    panels = [(err, 0, lo, hi, off0, value)]
    evals = n
    seq = 1
    splits = 0

    def refinable(entry):
        e, _, a, b, _, _ = entry
        if e <= 0.0:
            return False
        if b == math.inf:
            return True
        return b - a > 1e-14 * (1.0 + abs(a) + abs(b))

    while True:
        total = math.fsum(p[5] for p in panels)
        total_err = math.fsum(p[0] for p in panels)
        if total_err <= max(tol, tol * abs(total)):
            break
        candidates = [p for p in panels if refinable(p)]
        if not candidates:
            break  # nothing left to refine; settle for the current estimate
        if splits >= max_panels:
            raise QuadratureError(
                f"no convergence within {max_panels} panel splits "
                f"(error {total_err:.3e}, target {max(tol, tol * abs(total)):.3e})",
                QuadratureResult(total, total_err, evals),
            )
        worst = max(candidates, key=lambda t: (t[0], -t[1]))
        panels.remove(worst)
        _, _, a, b, off, _ = worst
        if b == math.inf:
            cut = a + off
            kids = [(a, cut, off), (cut, math.inf, 2.0 * off)]
        else:
            mid = 0.5 * (a + b)
            kids = [(a, mid, off), (mid, b, off)]
        for ka, kb, koff in kids:
            v, e, n, _ = _eval_panel(f, ka, kb, koff, 0.5 * tol)
            panels.append((e, seq, ka, kb, koff, v))
            seq += 1
            evals += n
        splits += 1

    return QuadratureResult(total, total_err, evals)


def integrate_log_singular(f, tol=1e-10):
    """Integrate ``f`` over (0, 1) after substituting x = exp(-y).

    The substitution turns a logarithmic blow-up of f at 0 into plain
    exponential decay: the result equals integrate(f, 0, 1, tol) computed
    as the integral of f(exp(-y)) exp(-y) over (0, infinity).
    """

    def g(y):
        w = math.exp(-y)
        if w == 0.0:
            return 0.0
        return f(w) * w

    return integrate(g, 0.0, math.inf, tol)


def _gamma_upper_series(a, x):
    # lower regularized incomplete gamma by power series
    ap = a
    term = 1.0 / a
    total = term
    for _ in range(500):
        ap += 1.0
        term *= x / ap
        total += term
        if abs(term) < abs(total) * 1e-17:
            break
    return total * math.exp(-x + a * math.log(x) - math.lgamma(a))


def _gamma_upper_cf(a, x):
    # modified Lentz continued fraction; returns F with
    # Gamma(a, x) = exp(-x) * x**a * F
    tiny = 1e-308
    b = x + 1.0 - a
    c = 1.0 / tiny
    d = 1.0 / b
    h = d
    for i in range(1, 500):
        an = -i * (i - a)
        b += 2.0
        d = an * d + b
        if abs(d) < tiny:
            d = tiny
        c = b + an / c
        if abs(c) < tiny:
            c = tiny
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < 1e-16:
            break
    return h


def gamma_upper(a, x):
    """Upper incomplete gamma integral of t**(a-1) exp(-t) over (x, inf).

    Series below the x = a + 1 crossover, continued fraction above it;
    both branches hold relative error near machine precision on
    a in (0, 20], x in [0, 50].
    """
    if a <= 0.0:
        raise DomainError(f"gamma_upper requires a > 0, got a={a}")
    if x < 0.0:
        raise DomainError(f"gamma_upper requires x >= 0, got x={x}")
    if x == 0.0:
        return math.gamma(a)
    if x < a + 1.0:
        return math.gamma(a) * (1.0 - _gamma_upper_series(a, x))
    return math.exp(-x + a * math.log(x)) * _gamma_upper_cf(a, x)


def exp_moment(s, p, series_tol=1e-15, max_terms=200):
    """Integral of t**p * exp(t) over (0, s), summed as a power series.

    The summand s**(p+k+1) / (k! (p+k+1)) decays factorially, so the term
    cap is never binding for s <= 10.
    """
    if s < 0.0:
        raise DomainError(f"exp_moment requires s >= 0, got s={s}")
    if p <= -1.0:
        raise DomainError(f"exp_moment requires p > -1, got p={p}")
    if s == 0.0:
        return 0.0
    lead = math.exp((p + 1.0) * math.log(s))
    coeff = 1.0  # s**k / k!
    total = coeff / (p + 1.0)
    for k in range(1, max_terms):
        coeff *= s / k
        term = coeff / (p + k + 1.0)
        total += term
        if term < series_tol * total:
            break
    return lead * total


@dataclass(frozen=True)
class HEvaluator:
    """Evaluator for h(r) = e^r * integral of |y-1|**p e^(-y) over (r, inf).

    Immutable after construction; Gamma(p+1) is cached so per-call work is
    one incomplete-gamma or one short series.
    """

    p: float
    gamma_p1: float = 0.0
    series_tol: float = 1e-15

    def __post_init__(self):
        if self.p <= 0.0:
            raise DomainError(f"HEvaluator requires p > 0, got p={self.p}")
        if self.series_tol <= 0.0:
            raise DomainError("series_tol must be positive")
        object.__setattr__(self, "gamma_p1", math.gamma(self.p + 1.0))

    def __call__(self, r):
        return h_eval(self, r)


def h_eval(ev: HEvaluator, r):
    """Evaluate h at r >= 0.

    For r >= 1 the tail is a pure upper incomplete gamma,
    h(r) = e^(r-1) Gamma(p+1, r-1); for r < 1 the piece of the integral
    below y = 1 is the exponential-moment series.  The exponential factor
    is folded into the continued fraction for large r so nothing overflows.
    """
    p = ev.p
    if r < 0.0:
        raise DomainError(f"h_eval requires r >= 0, got r={r}")
    if r >= 1.0:
        x = r - 1.0
        if x == 0.0:
            return ev.gamma_p1
        if x < p + 2.0:
            return math.exp(x) * gamma_upper(p + 1.0, x)
        # e^x * Gamma(p+1, x) = x**(p+1) * CF(p+1, x); exact cancellation
        return math.exp((p + 1.0) * math.log(x)) * _gamma_upper_cf(p + 1.0, x)
    return math.exp(r - 1.0) * (ev.gamma_p1 + exp_moment(1.0 - r, p, ev.series_tol))


def digamma(x):
    """Logarithmic derivative of the gamma function for x > 0."""
    if x <= 0.0:
        raise DomainError(f"digamma requires x > 0, got x={x}")
    acc = 0.0
    while x < 10.0:
        acc -= 1.0 / x
        x += 1.0
    inv2 = 1.0 / (x * x)
    # asymptotic series with Bernoulli-number coefficients
    tail = inv2 * (
        1.0 / 12.0
        - inv2 * (
            1.0 / 120.0
            - inv2 * (
                1.0 / 252.0
                - inv2 * (
                    1.0 / 240.0
                    - inv2 * (1.0 / 132.0 - inv2 * (691.0 / 32760.0 - inv2 / 12.0))
                )
            )
        )
    )
    return acc + math.log(x) - 0.5 / x - tail
