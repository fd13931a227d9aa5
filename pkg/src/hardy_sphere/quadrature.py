"""Gamma/beta kernel and a singular-endpoint 1-D quadrature engine.

The engine is a tanh-sinh (double-exponential) rule with node count
doubling per level.  Endpoint singularities are declared, not discovered:

* a plain algebraic endpoint ``offset**sigma`` with ``sigma > -1`` is
  integrated after a power substitution ``offset = v**(1/(1+sigma))`` that
  makes the transformed integrand bounded;
* an endpoint of the exact form ``offset**-1 * y**(-mu)`` with ``mu > 1``,
  where ``y = 1 + log(range/offset)`` is the canonical endpoint logarithm,
  is integrated in the variable ``w = y**(1-mu)``;
* anything at or below ``offset**-1`` without such a logarithmic rescue is
  refused up front.

The substitutions are not an optimisation.  In IEEE double arithmetic an
integrand ``(1-t)**(-1+eps)`` keeps a fraction ``delta**eps`` of its mass
within ``delta`` of the endpoint; at ``eps = 1e-3`` roughly a third of the
integral sits below the smallest representable offset, where no quadrature
that samples ``f(t)`` at double-precision abscissae can see it.  Node
offsets and all monomial endpoint factors are therefore carried in log
space end to end, and only the declared bounded remainder of the integrand
is ever evaluated in ordinary arithmetic.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

__all__ = [
    "QuadratureError",
    "NonIntegrableError",
    "NumericalFailureError",
    "QuadratureSpec",
    "QuadratureResult",
    "WeightedIntegrand",
    "ZonalIntegrand",
    "log_gamma",
    "gamma",
    "surface_constant",
    "sphere_area",
    "half_moment_closed",
    "integrate_line",
    "integrate_zonal",
]


class QuadratureError(Exception):
    """Base class for quadrature failures."""


class NonIntegrableError(QuadratureError):
    """Declared endpoint behavior is not integrable."""


class NumericalFailureError(QuadratureError):
    """Non-finite interior evaluation or a failed internal cross-check."""


# --------------------------------------------------------------------------
# gamma / beta kernel
# --------------------------------------------------------------------------

def log_gamma(x: float) -> float:
    """Natural log of Gamma(x) for x > 0."""
    if not (x > 0.0) or not math.isfinite(x):
        raise NonIntegrableError(f"log_gamma requires x > 0, got {x}")
    return math.lgamma(x)


def gamma(x: float) -> float:
    return math.exp(log_gamma(x))


def surface_constant(n: int) -> float:
    """Reduction constant 2*pi^((n-1)/2) / Gamma((n-1)/2) for the sphere in R^n."""
    if n < 2:
        raise NonIntegrableError(f"surface_constant requires ambient dimension >= 2, got {n}")
    return math.exp(math.log(2.0) + 0.5 * (n - 1) * math.log(math.pi) - log_gamma(0.5 * (n - 1)))


def sphere_area(n: int) -> float:
    """Total surface measure of the unit sphere in R^n."""
    if n < 2:
        raise NonIntegrableError(f"sphere_area requires ambient dimension >= 2, got {n}")
    return math.exp(math.log(2.0) + 0.5 * n * math.log(math.pi) - log_gamma(0.5 * n))


def half_moment_closed(a: float, b: float) -> float:
    """Exact value of the moment integral of t^a (1-t^2)^b over (0, 1).

    Beta identity: the value is Gamma((a+1)/2) Gamma(b+1) / (2 Gamma((a+1)/2 + b + 1)).
    """
    if a <= -1.0 or b <= -1.0:
        raise NonIntegrableError(f"half moment needs a > -1 and b > -1, got a={a}, b={b}")
    h = 0.5 * (a + 1.0)
    return 0.5 * math.exp(log_gamma(h) + log_gamma(b + 1.0) - log_gamma(h + b + 1.0))


# --------------------------------------------------------------------------
# engine configuration and result types
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class QuadratureSpec:
    """Tolerances, level limits and endpoint-exponent hints.

    ``endpoint_exponents`` is an optional pair describing the integrand near
    (lo, hi): each entry is either a bare power sigma, or a ``(sigma, mu)``
    pair declaring an extra factor ``y**(-mu)`` of the canonical endpoint
    logarithm.  Integrability requires sigma > -1, or sigma == -1 together
    with mu > 1.
    """

    rel_tol: float = 1e-10
    abs_tol: float = 1e-14
    max_level: int = 12
    endpoint_exponents: tuple | None = None

    def __post_init__(self):
        if self.rel_tol <= 0.0 or self.abs_tol <= 0.0:
            raise ValueError("tolerances must be positive")
        if self.max_level < 3:
            raise ValueError("max_level must be at least 3")


@dataclass(frozen=True)
class QuadratureResult:
    value: float
    error_estimate: float
    levels_used: int
    converged: bool

    def __add__(self, other: "QuadratureResult") -> "QuadratureResult":
        return QuadratureResult(
            self.value + other.value,
            self.error_estimate + other.error_estimate,
            max(self.levels_used, other.levels_used),
            self.converged and other.converged,
        )

    def scaled(self, c: float) -> "QuadratureResult":
        return QuadratureResult(c * self.value, abs(c) * self.error_estimate,
                                self.levels_used, self.converged)


@dataclass(frozen=True)
class WeightedIntegrand:
    """Integrand on (lo, hi) with declared endpoint factors.

    Total integrand =
        dlo**lo_pow * dhi**hi_pow * ylo**lo_log_pow * yhi**hi_log_pow * rest(...)
    with dlo = x - lo, dhi = hi - x, ylo = 1 + log((hi-lo)/dlo) and yhi
    analogous.  ``rest`` receives numpy arrays (x, dlo, dhi, ln_dlo, ln_dhi,
    ylo, yhi); it must stay bounded near singular endpoints (offsets may have
    underflowed to zero there, the log channels never do).
    """

    lo_pow: float = 0.0
    hi_pow: float = 0.0
    lo_log_pow: float = 0.0
    hi_log_pow: float = 0.0
    rest: Callable[..., np.ndarray] | None = None


_LOG2 = math.log(2.0)
_T_MAX = 6.11          # |offsets| underflow double range beyond this abscissa
_MIN_LEVEL = 3         # guard against spuriously early two-level agreement
_node_cache: dict[int, tuple[np.ndarray, np.ndarray, np.ndarray]] = {}


def _nodes(level: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Positive-side abscissae for one refinement level.

    Returns (u, ln(1-u), ln weight); level 0 includes t = 0, later levels
    contribute only the odd multiples of the halved step.
    """
    cached = _node_cache.get(level)
    if cached is not None:
        return cached
    h = 2.0 ** (-level)
    if level == 0:
        ks = np.arange(0, int(_T_MAX) + 1)
    else:
        ks = np.arange(1, int(_T_MAX / h) + 1, 2)
    ts = ks * h
    w = 0.5 * math.pi * np.sinh(ts)
    u = np.tanh(w)
    e = np.exp(-2.0 * w)
    ln_one_minus_u = _LOG2 - 2.0 * w - np.log1p(e)
    ln_cosh_w = w + np.log1p(e) - _LOG2
    ln_weight = math.log(0.5 * math.pi) + np.log(np.cosh(ts)) - 2.0 * ln_cosh_w
    _node_cache[level] = (u, ln_one_minus_u, ln_weight)
    return _node_cache[level]


def _coerce_hint(entry) -> tuple[float, float]:
    if entry is None:
        return 0.0, 0.0
    if isinstance(entry, (int, float)):
        return float(entry), 0.0
    sigma, mu = entry
    return float(sigma), float(mu)


def _check_integrable(sigma: float, mu: float, where: str) -> None:
    mu = mu + 0.0 if mu != 0.0 else 0.0
    if sigma < -1.0 - 1e-12:
        raise NonIntegrableError(
            f"endpoint exponent sigma = {sigma} at {where} is not integrable (needs sigma > -1)")
    if abs(sigma + 1.0) <= 1e-12 and mu <= 1.0 + 1e-12:
        raise NonIntegrableError(
            f"endpoint sigma = -1 at {where} with log power {mu} is not integrable "
            f"(sigma = -1 needs a logarithmic factor with power > 1)")


def _is_near_minus_one(p: float) -> bool:
    return abs(p + 1.0) <= 1e-12


# --------------------------------------------------------------------------
# core tanh-sinh loop
# --------------------------------------------------------------------------

def _run_levels(contrib_fn, spec: QuadratureSpec) -> QuadratureResult:
    """Sum tanh-sinh levels until two successive estimates agree.

    ``contrib_fn(level)`` returns (sum of new node contributions, sum of
    |contributions|, largest |contribution| among the deepest nodes) at that
    level.  A non-negligible deepest-node contribution means the trapezoid
    was truncated by the abscissa range rather than by decay (an undeclared
    endpoint singularity); successive levels would then agree on a wrong
    value, so it blocks the convergence verdict.
    """
    total = 0.0
    total_abs = 0.0
    prev = None
    value = 0.0
    est = math.inf
    converged = False
    levels = 0
    for level in range(spec.max_level + 1):
        s, s_abs, tail = contrib_fn(level)
        total += s
        total_abs += s_abs
        h = 2.0 ** (-level)
        value = h * total
        levels = level + 1
        if prev is not None:
            diff = abs(value - prev)
            floor = 4.0 * np.finfo(float).eps * max(abs(value), h * total_abs)
            est = max(diff, floor, 0.25 * spec.abs_tol)
            tol = max(spec.rel_tol * abs(value), spec.abs_tol)
            # converged implies error_estimate within the requested tolerances
            if level >= _MIN_LEVEL and est <= tol and h * tail <= tol:
                converged = True
                break
        prev = value
    return QuadratureResult(value, est, levels, converged)


def _direct_weighted(wi: WeightedIntegrand, lo: float, hi: float,
                     spec: QuadratureSpec) -> QuadratureResult:
    length = hi - lo
    half = 0.5 * length
    ln_half = math.log(half)
    ln_range = math.log(length)

    def level_contrib(level: int):
        u, ln_omu, ln_wt = _nodes(level)
        # saturating exp/log on dead tail nodes is intended; genuine trouble
        # is caught by the finite-value check below
        with np.errstate(divide="ignore", over="ignore", under="ignore", invalid="ignore"):
            return _level_body(level, u, ln_omu, ln_wt)

    def _level_body(level, u, ln_omu, ln_wt):
        s = 0.0
        s_abs = 0.0
        tail = 0.0
        for side in (+1, -1):
            if level == 0 and side == -1:
                sel = slice(1, None)  # t = 0 is shared by both sides
            else:
                sel = slice(None)
            uu = u[sel]
            ln_near = ln_half + ln_omu[sel]
            d_near = np.exp(ln_near)
            d_far = half * (1.0 + uu)
            ln_far = ln_half + np.log1p(uu)
            if side == +1:
                x = hi - d_near
                dlo, dhi = d_far, d_near
                ln_dlo, ln_dhi = ln_far, ln_near
            else:
                x = lo + d_near
                dlo, dhi = d_near, d_far
                ln_dlo, ln_dhi = ln_near, ln_far
            ylo = 1.0 + ln_range - ln_dlo
            yhi = 1.0 + ln_range - ln_dhi
            ln_c = ln_wt[sel] + ln_half
            if wi.lo_pow != 0.0:
                ln_c = ln_c + wi.lo_pow * ln_dlo
            if wi.hi_pow != 0.0:
                ln_c = ln_c + wi.hi_pow * ln_dhi
            if wi.lo_log_pow != 0.0:
                ln_c = ln_c + wi.lo_log_pow * np.log(ylo)
            if wi.hi_log_pow != 0.0:
                ln_c = ln_c + wi.hi_log_pow * np.log(yhi)
            vals = np.exp(ln_c)
            if wi.rest is not None:
                r = np.asarray(wi.rest(x, dlo, dhi, ln_dlo, ln_dhi, ylo, yhi), dtype=float)
                bad = ~np.isfinite(r)
                if bad.any():
                    if np.any(bad & (vals > 0.0)):
                        raise NumericalFailureError(
                            "non-finite integrand value at an interior node")
                    r = np.where(bad, 0.0, r)
                vals = vals * r
            s += float(vals.sum())
            s_abs += float(np.abs(vals).sum())
            if vals.size:
                tail = max(tail, abs(float(vals[-1])))
        return s, s_abs, tail

    return _run_levels(level_contrib, spec)


def _direct_plain(f: Callable, lo: float, hi: float, spec: QuadratureSpec,
                  three_arg: bool) -> QuadratureResult:
    half = 0.5 * (hi - lo)
    ln_half = math.log(half)
    eps = np.finfo(float).eps

    def level_contrib(level: int):
        u, ln_omu, ln_wt = _nodes(level)
        s = 0.0
        s_abs = 0.0
        tail = 0.0
        for side in (+1, -1):
            rng = range(1 if (level == 0 and side == -1) else 0, len(u))
            last_c = 0.0
            for i in rng:
                ln_near = ln_half + ln_omu[i]
                d_near = math.exp(ln_near)
                if d_near == 0.0:
                    continue
                d_far = half * (1.0 + u[i])
                if side == +1:
                    x, dlo, dhi = hi - d_near, d_far, d_near
                else:
                    x, dlo, dhi = lo + d_near, d_near, d_far
                if not three_arg and min(dlo, dhi) < 4.0 * eps * (hi - lo):
                    continue  # plain f(x) cannot resolve offsets below rounding
                fx = f(x, dlo, dhi) if three_arg else f(x)
                w = math.exp(ln_wt[i] + ln_half)
                if not math.isfinite(fx):
                    if ln_near < -600.0:
                        continue  # negligible tail node of a declared singular end
                    raise NumericalFailureError(
                        f"non-finite integrand value at interior node x = {x}")
                c = w * fx
                s += c
                s_abs += abs(c)
                last_c = c
            # deepest evaluated node on this side flags range truncation
            tail = max(tail, abs(last_c))
        return s, s_abs, tail

    return _run_levels(level_contrib, spec)


# --------------------------------------------------------------------------
# endpoint substitutions
# --------------------------------------------------------------------------

def _power_transformed(wi: WeightedIntegrand, lo: float, hi: float,
                       end: str) -> WeightedIntegrand:
    """Regularize an algebraic endpoint sigma in (-1, 0) by offset = v**q.

    Returns an integrand on (0, 1) whose v = 0 end maps to the singular end.
    The exact cancellation sigma*q + q - 1 = 0 is done in exponent algebra,
    never in floating subtraction.
    """
    length = hi - lo
    ln_len = math.log(length)
    if end == "hi":
        sigma, slog = wi.hi_pow, wi.hi_log_pow
        far_pow, far_log = wi.lo_pow, wi.lo_log_pow
    else:
        sigma, slog = wi.lo_pow, wi.lo_log_pow
        far_pow, far_log = wi.hi_pow, wi.hi_log_pow
    q = 1.0 / (1.0 + sigma)
    rest = wi.rest

    def rest2(v, dvlo, dvhi, ln_dvlo, ln_dvhi, yvlo, yvhi):
        # near v = 1 the lower-offset channel loses the distance to 1;
        # rebuild ln v from the exact upper offset there
        ln_v = np.where(dvhi < 0.5, np.log1p(-dvhi), ln_dvlo)
        ln_near = ln_len + q * ln_v
        d_near = np.exp(ln_near)
        one_minus_vq = -np.expm1(q * ln_v)
        d_far = length * one_minus_vq
        ln_far = ln_len + np.log(one_minus_vq)
        if end == "hi":
            x = hi - d_near
            dlo, dhi, ln_dlo, ln_dhi = d_far, d_near, ln_far, ln_near
        else:
            x = lo + d_near
            dlo, dhi, ln_dlo, ln_dhi = d_near, d_far, ln_near, ln_far
        ylo = 1.0 + ln_len - ln_dlo
        yhi = 1.0 + ln_len - ln_dhi
        out = np.full_like(np.asarray(ln_v, dtype=float), q * math.exp((1.0 + sigma) * ln_len))
        if rest is not None:
            out = out * np.asarray(rest(x, dlo, dhi, ln_dlo, ln_dhi, ylo, yhi), dtype=float)
        # far-end offset factor relative to the transformed coordinate
        if far_pow != 0.0:
            out = out * np.exp(far_pow * (ln_far - ln_dvhi))
        y_near = yhi if end == "hi" else ylo
        y_far = ylo if end == "hi" else yhi
        if slog != 0.0:
            out = out * np.exp(slog * np.log(y_near))
        if far_log != 0.0:
            out = out * np.exp(far_log * np.log(y_far))
        return out

    return WeightedIntegrand(lo_pow=0.0, hi_pow=far_pow, rest=rest2)


def _log_transformed(wi: WeightedIntegrand, lo: float, hi: float,
                     end: str) -> WeightedIntegrand:
    """Integrate an offset**-1 * y**(-mu) endpoint (mu > 1) in w = y**(1-mu).

    The measure identity offset**-1 dx * y**(-mu) = dw/(mu-1) is exact; the
    remaining factors are bounded and evaluated from the log channels.
    """
    length = hi - lo
    ln_len = math.log(length)
    if end == "hi":
        mu = -wi.hi_log_pow
        far_pow, far_log = wi.lo_pow, wi.lo_log_pow
    else:
        mu = -wi.lo_log_pow
        far_pow, far_log = wi.hi_pow, wi.hi_log_pow
    rest = wi.rest
    inv = 1.0 / (mu - 1.0)

    def rest2(v, dvlo, dvhi, ln_dvlo, ln_dvhi, yvlo, yvhi):
        # w = dvlo on (0, 1); near w = 1 rebuild ln w from the upper offset
        ln_w = np.where(dvhi < 0.5, np.log1p(-dvhi), ln_dvlo)
        # y - 1 tracked separately: it vanishes at the regular end and the
        # exponent is capped so downstream exp() saturates harmlessly
        ym1 = np.expm1(np.minimum(-inv * ln_w, 690.0))
        y = 1.0 + ym1
        ln_near = ln_len - ym1
        d_near = np.exp(ln_near)
        one_minus = -np.expm1(-ym1)  # length - d_near without cancellation
        d_far = length * one_minus
        ln_far = ln_len + np.log(one_minus)
        if end == "hi":
            x = hi - d_near
            dlo, dhi, ln_dlo, ln_dhi = d_far, d_near, ln_far, ln_near
        else:
            x = lo + d_near
            dlo, dhi, ln_dlo, ln_dhi = d_near, d_far, ln_near, ln_far
        ylo = 1.0 + ln_len - ln_dlo
        yhi = 1.0 + ln_len - ln_dhi
        out = np.full_like(np.asarray(ln_w, dtype=float), inv)
        if rest is not None:
            out = out * np.asarray(rest(x, dlo, dhi, ln_dlo, ln_dhi, ylo, yhi), dtype=float)
        if far_pow != 0.0:
            out = out * np.exp(far_pow * ln_far)
        if far_log != 0.0:
            y_far = ylo if end == "hi" else yhi
            out = out * np.exp(far_log * np.log(y_far))
        return out

    return WeightedIntegrand(rest=rest2)


def _restrict(wi: WeightedIntegrand, lo: float, hi: float,
              new_lo: float, new_hi: float) -> WeightedIntegrand:
    """Restrict to a subinterval, absorbing now-interior endpoint factors."""
    length = hi - lo
    ln_len = math.log(length)
    keep_lo = new_lo == lo
    keep_hi = new_hi == hi
    rest = wi.rest

    def rest2(x, dlo, dhi, ln_dlo, ln_dhi, ylo, yhi):
        o_dlo = dlo if keep_lo else x - lo
        o_dhi = dhi if keep_hi else hi - x
        o_ln_dlo = ln_dlo if keep_lo else np.log(o_dlo)
        o_ln_dhi = ln_dhi if keep_hi else np.log(o_dhi)
        o_ylo = 1.0 + ln_len - o_ln_dlo
        o_yhi = 1.0 + ln_len - o_ln_dhi
        out = np.ones_like(np.asarray(x, dtype=float))
        if rest is not None:
            out = out * np.asarray(rest(x, o_dlo, o_dhi, o_ln_dlo, o_ln_dhi, o_ylo, o_yhi),
                                   dtype=float)
        if not keep_lo and wi.lo_pow != 0.0:
            out = out * np.exp(wi.lo_pow * o_ln_dlo)
        if not keep_lo and wi.lo_log_pow != 0.0:
            out = out * np.exp(wi.lo_log_pow * np.log(o_ylo))
        if not keep_hi and wi.hi_pow != 0.0:
            out = out * np.exp(wi.hi_pow * o_ln_dhi)
        if not keep_hi and wi.hi_log_pow != 0.0:
            out = out * np.exp(wi.hi_log_pow * np.log(o_yhi))
        return out

    return WeightedIntegrand(
        lo_pow=wi.lo_pow if keep_lo else 0.0,
        lo_log_pow=wi.lo_log_pow if keep_lo else 0.0,
        hi_pow=wi.hi_pow if keep_hi else 0.0,
        hi_log_pow=wi.hi_log_pow if keep_hi else 0.0,
        rest=rest2,
    )


def _integrate_weighted(wi: WeightedIntegrand, lo: float, hi: float,
                        spec: QuadratureSpec) -> QuadratureResult:
    _check_integrable(wi.lo_pow, -wi.lo_log_pow, "the lower endpoint")
    _check_integrable(wi.hi_pow, -wi.hi_log_pow, "the upper endpoint")

    def needs(pow_: float) -> bool:
        return pow_ < -1e-9 or _is_near_minus_one(pow_)

    if needs(wi.lo_pow) and needs(wi.hi_pow):
        mid = 0.5 * (lo + hi)
        left = _integrate_weighted(_restrict(wi, lo, hi, lo, mid), lo, mid, spec)
        right = _integrate_weighted(_restrict(wi, lo, hi, mid, hi), mid, hi, spec)
        return left + right
    if _is_near_minus_one(wi.lo_pow):
        return _direct_weighted(_log_transformed(wi, lo, hi, "lo"), 0.0, 1.0, spec)
    if _is_near_minus_one(wi.hi_pow):
        return _direct_weighted(_log_transformed(wi, lo, hi, "hi"), 0.0, 1.0, spec)
    if wi.lo_pow < -1e-9:
        return _direct_weighted(_power_transformed(wi, lo, hi, "lo"), 0.0, 1.0, spec)
    if wi.hi_pow < -1e-9:
        return _direct_weighted(_power_transformed(wi, lo, hi, "hi"), 0.0, 1.0, spec)
    return _direct_weighted(wi, lo, hi, spec)


def integrate_line(f, lo: float, hi: float,
                   spec: QuadratureSpec | None = None) -> QuadratureResult:
    """Integrate f over (lo, hi).

    ``f`` is a ``WeightedIntegrand`` (full singular-endpoint support), a
    callable ``f(x, dlo, dhi)`` receiving exact endpoint offsets, or a bare
    callable ``f(x)`` for mild integrands.  Hints in ``spec`` are mandatory
    for singular plain callables and are validated either way.
    """
    if spec is None:
        spec = QuadratureSpec()
    if not (math.isfinite(lo) and math.isfinite(hi) and lo < hi):
        raise NonIntegrableError(f"invalid interval ({lo}, {hi})")

    if isinstance(f, WeightedIntegrand):
        if spec.endpoint_exponents is not None:
            s0, m0 = _coerce_hint(spec.endpoint_exponents[0])
            s1, m1 = _coerce_hint(spec.endpoint_exponents[1])
            _check_integrable(s0, m0, "the lower endpoint")
            _check_integrable(s1, m1, "the upper endpoint")
        return _integrate_weighted(f, lo, hi, spec)

    sigma0, mu0 = 0.0, 0.0
    sigma1, mu1 = 0.0, 0.0
    if spec.endpoint_exponents is not None:
        sigma0, mu0 = _coerce_hint(spec.endpoint_exponents[0])
        sigma1, mu1 = _coerce_hint(spec.endpoint_exponents[1])
    _check_integrable(sigma0, mu0, "the lower endpoint")
    _check_integrable(sigma1, mu1, "the upper endpoint")
    if _is_near_minus_one(sigma0) or _is_near_minus_one(sigma1):
        raise NonIntegrableError(
            "sigma = -1 endpoints require the factored WeightedIntegrand form")

    three_arg = False
    try:
        import inspect

        nparams = len(inspect.signature(f).parameters)
        three_arg = nparams >= 3
    except (TypeError, ValueError):
        pass
    return _direct_plain(f, lo, hi, spec, three_arg)


# --------------------------------------------------------------------------
# zonal reduction
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class ZonalIntegrand:
    """Reduced integrand of a zonal surface integral, in t = cos(d).

    Total integrand (before the reduction weight) =
        scale * |t|**t_pow * sin(d)**sin_pow * (1+t)**plus_pow
              * L**log_pow * smooth(t, 1-t^2, L)
    with L = log(e / sin d).  ``smooth`` must stay bounded at t in {-1, 0, 1}.
    """

    t_pow: float = 0.0
    sin_pow: float = 0.0
    plus_pow: float = 0.0
    log_pow: float = 0.0
    smooth: Callable[[np.ndarray, np.ndarray, np.ndarray], np.ndarray] | None = None
    scale: float = 1.0


def _zonal_half(zi: ZonalIntegrand, n: int, positive: bool,
                spec: QuadratureSpec) -> QuadratureResult:
    """Integrate one half of (-1, 1); ``positive`` selects (0, 1).

    Each half has one pole-image endpoint (t = +1 or t = -1) where the
    sin-power and reduction weight are singular, and the regular equator
    endpoint t = 0 carrying the |t| power.  Both subintervals have unit
    length, so the canonical endpoint logarithm satisfies ln(offset) =
    1 - y exactly; the zonal logarithm L = log(e/sin d) is reconstructed
    from it as L = (y_edge + 1 - ln(bounded_factor)) / 2, which stays
    finite however deep the node.
    """
    w_half = 0.5 * (zi.sin_pow + (n - 3))
    if positive:
        edge_pow = w_half                    # exponent on (1 - t)
        bounded_pow = w_half + zi.plus_pow   # exponent on (1 + t), in (1, 2) here
    else:
        edge_pow = w_half + zi.plus_pow      # exponent on (1 + t)
        bounded_pow = w_half                 # exponent on (1 - t), in (1, 2) here
    log_as_field = _is_near_minus_one(edge_pow)
    smooth = zi.smooth
    log_pow = zi.log_pow

    def rest(x, dlo, dhi, ln_dlo, ln_dhi, ylo, yhi):
        if positive:
            d_edge, y_edge = dhi, yhi
        else:
            d_edge, y_edge = dlo, ylo
        bounded = 2.0 - d_edge               # the non-vanishing one of 1 -+ t
        ln_bounded = np.log(bounded)
        lam = 0.5 * (y_edge + 1.0 - ln_bounded)
        out = np.ones_like(np.asarray(x, dtype=float))
        if bounded_pow != 0.0:
            out = out * np.exp(bounded_pow * ln_bounded)
        if log_pow != 0.0:
            if log_as_field:
                # engine already applies y_edge**log_pow; supply (L/y_edge)**log_pow
                ratio = 0.5 * (1.0 + (1.0 - ln_bounded) / y_edge)
                out = out * np.exp(log_pow * np.log(ratio))
            else:
                out = out * np.exp(log_pow * np.log(lam))
        if smooth is not None:
            omt2 = d_edge * bounded
            out = out * np.asarray(smooth(x, omt2, lam), dtype=float)
        return out

    if positive:
        wi = WeightedIntegrand(
            lo_pow=zi.t_pow,
            hi_pow=edge_pow,
            hi_log_pow=log_pow if log_as_field else 0.0,
            rest=rest,
        )
        res = _integrate_weighted(wi, 0.0, 1.0, spec)
    else:
        wi = WeightedIntegrand(
            lo_pow=edge_pow,
            lo_log_pow=log_pow if log_as_field else 0.0,
            hi_pow=zi.t_pow,
            rest=rest,
        )
        res = _integrate_weighted(wi, -1.0, 0.0, spec)
    return res.scaled(zi.scale)


def integrate_zonal(g, n: int, spec: QuadratureSpec | None = None) -> QuadratureResult:
    """Surface integral of a zonal function over the sphere in R^n.

    Reduces to C_n * int_{-1}^{1} g(t) (1-t^2)^((n-3)/2) dt and splits at
    t = 0 so equator kinks of |t|-type factors sit at an interval endpoint.
    ``g`` is a ZonalIntegrand, a callable ``g(t, one_minus_t2)``, or a bare
    callable ``g(t)``.
    """
    if spec is None:
        spec = QuadratureSpec()
    if n < 2:
        raise NonIntegrableError(f"ambient dimension must be >= 2, got {n}")
    if not isinstance(g, ZonalIntegrand):
        fn = g
        try:
            import inspect

            two_arg = len(inspect.signature(fn).parameters) >= 2
        except (TypeError, ValueError):
            two_arg = False
        if two_arg:
            g = ZonalIntegrand(smooth=lambda t, omt2, lam: fn(t, omt2))
        else:
            g = ZonalIntegrand(smooth=lambda t, omt2, lam: fn(t))
    if g.t_pow <= -1.0:
        raise NonIntegrableError(
            f"|t| exponent {g.t_pow} at the equator is not integrable (needs > -1)")
    c_n = surface_constant(n)
    res = _zonal_half(g, n, True, spec) + _zonal_half(g, n, False, spec)
    return res.scaled(c_n)
