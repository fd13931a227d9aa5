"""Extremal profile families, their gamma-function oracles, sharpness
sweeps with extrapolation, and the counterexample scan.

Five one-parameter families drive every optimality statement:

* ``COT_COS``        g = |cot d|^kappa cos d
* ``COT``            g = |cot d|^kappa
* ``INV_SIN``        g = sin^(-kappa) d
* ``HALF_ANGLE_COT`` g = ((1 + cos d)/sin d)^kappa  (= cot(d/2)^kappa)
* ``LOG_POWER``      g = log(e/sin d)^lam           (critical regime)

with kappa = (n - p - 1 - 2*eps)/p and lam = (q - 1 - eps)/q.  Their
weighted energies have exact values or proven bounds in terms of gamma
functions; sweeps evaluate each ratio both by quadrature and from the
closed forms where they exist, cross-check the two, and extrapolate the
limit in eps.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from ._parallel import parallel_map
from .functionals import (
    ExponentConfig,
    Functional,
    Regime,
    ReducedTerm,
    ZonalProfile,
    eval_functional,
    sharpness_target,
)
from .quadrature import (
    NumericalFailureError,
    QuadratureSpec,
    WeightedIntegrand,
    integrate_line,
    log_gamma,
    surface_constant,
)

__all__ = [
    "moment_quadrature",
    "FamilyId",
    "make_profile",
    "admissible_eps_upper",
    "Quantity",
    "closed_form",
    "log_unit_correction",
    "log_cos_correction",
    "crit_tan_correction",
    "default_schedule",
    "SWEEP_PAIRINGS",
    "SweepRow",
    "SharpnessReport",
    "sharpness_sweep",
    "CounterexampleResult",
    "find_counterexample",
]


class FamilyId(Enum):
    COT_COS = "cot_cos"
    COT = "cot"
    INV_SIN = "inv_sin"
    HALF_ANGLE_COT = "half_cot"
    LOG_POWER = "log_pow"


_SUBCRITICAL_FAMILIES = {FamilyId.COT_COS, FamilyId.COT, FamilyId.INV_SIN,
                         FamilyId.HALF_ANGLE_COT}


def admissible_eps_upper(family: FamilyId, cfg: ExponentConfig) -> float:
    """Largest admissible eps (exclusive); inf in the critical regime."""
    if family in _SUBCRITICAL_FAMILIES:
        return 0.5 * (cfg.ambient_dim - cfg.exponent - 1.0)
    return math.inf


def make_profile(family: FamilyId, cfg: ExponentConfig, eps: float) -> ZonalProfile:
    """Construct one member of an extremal family.

    Subcritical families need 0 < eps < (n - p - 1)/2 so the gradient-bearing
    energies stay finite; the critical family accepts any eps > 0.
    """
    if family in _SUBCRITICAL_FAMILIES:
        if cfg.regime is not Regime.SUBCRITICAL:
            raise ValueError(f"family {family.value} requires a subcritical configuration")
    elif cfg.regime is not Regime.CRITICAL:
        raise ValueError(f"family {family.value} requires a critical configuration")
    hi = admissible_eps_upper(family, cfg)
    if not 0.0 < eps < hi:
        raise ValueError(
            f"eps = {eps} outside the admissible range (0, {hi}) for {family.value}")

    if family is FamilyId.LOG_POWER:
        q = cfg.exponent
        lam = (q - 1.0 - eps) / q

        def value(d: float) -> float:
            return (1.0 - math.log(math.sin(d))) ** lam

        def derivative(d: float) -> float:
            big = 1.0 - math.log(math.sin(d))
            return -lam * big ** (lam - 1.0) * math.cos(d) / math.sin(d)

        return ZonalProfile(
            label=f"log_pow[eps={eps:g}]",
            value=value,
            derivative=derivative,
            magnitude=ReducedTerm(log_pow=lam),
            gradient_magnitude=ReducedTerm(t_pow=1.0, sin_pow=-1.0,
                                           log_pow=lam - 1.0, coeff=lam),
        )

    n, p = cfg.ambient_dim, cfg.exponent
    kappa = (n - p - 1.0 - 2.0 * eps) / p
    k = kappa

    if family is FamilyId.COT_COS:
        def value(d: float) -> float:
            return abs(math.cos(d) / math.sin(d)) ** k * math.cos(d)

        def derivative(d: float) -> float:
            s = math.sin(d)
            return -abs(math.cos(d) / s) ** k * (k / s + s)

        return ZonalProfile(
            label=f"cot_cos[eps={eps:g}]",
            value=value,
            derivative=derivative,
            magnitude=ReducedTerm(t_pow=k + 1.0, sin_pow=-k),
            gradient_magnitude=ReducedTerm(
                t_pow=k, sin_pow=-k - 1.0,
                extra=lambda t, omt2, lam: k + omt2),
            equator_kink=True,
        )

    if family is FamilyId.COT:
        def value(d: float) -> float:
            return abs(math.cos(d) / math.sin(d)) ** k

        def derivative(d: float) -> float:
            c, s = math.cos(d), math.sin(d)
            return -math.copysign(1.0, c) * k * abs(c / s) ** (k - 1.0) / (s * s)

        return ZonalProfile(
            label=f"cot[eps={eps:g}]",
            value=value,
            derivative=derivative,
            magnitude=ReducedTerm(t_pow=k, sin_pow=-k),
            gradient_magnitude=ReducedTerm(t_pow=k - 1.0, sin_pow=-k - 1.0, coeff=k),
            equator_kink=True,
        )

    if family is FamilyId.INV_SIN:
        def value(d: float) -> float:
            return math.sin(d) ** (-k)

        def derivative(d: float) -> float:
            return -k * math.sin(d) ** (-k - 1.0) * math.cos(d)

        return ZonalProfile(
            label=f"inv_sin[eps={eps:g}]",
            value=value,
            derivative=derivative,
            magnitude=ReducedTerm(sin_pow=-k),
            gradient_magnitude=ReducedTerm(t_pow=1.0, sin_pow=-k - 1.0, coeff=k),
        )

    # HALF_ANGLE_COT
    def value(d: float) -> float:
        return ((1.0 + math.cos(d)) / math.sin(d)) ** k

    def derivative(d: float) -> float:
        s = math.sin(d)
        return -k * (1.0 + math.cos(d)) ** k * s ** (-k - 1.0)

    return ZonalProfile(
        label=f"half_cot[eps={eps:g}]",
        value=value,
        derivative=derivative,
        magnitude=ReducedTerm(sin_pow=-k, plus_pow=k),
        gradient_magnitude=ReducedTerm(sin_pow=-k - 1.0, plus_pow=k, coeff=k),
    )


# --------------------------------------------------------------------------
# gamma-function oracles
# --------------------------------------------------------------------------

class Quantity(Enum):
    """Closed forms, exact limits and proven bounds for the family energies."""

    U_SIN_FULL = "u_sin_full"                # sin-weighted energy of COT_COS
    U_SIN_REDUCED = "u_sin_reduced"
    U_COS_SIN_MOMENT = "u_cos_sin_moment"    # companion moment of the gradient bound
    U_GRADCOS_BOUND = "u_gradcos_bound"      # proven ceiling for GRAD_COS of COT_COS
    U_GRADCOS_RATIO = "u_gradcos_ratio"      # vanishing factor inside that ceiling
    UT_SIN_FULL = "ut_sin_full"              # COT family
    UT_SIN_REDUCED = "ut_sin_reduced"
    UT_GRADCOS = "ut_gradcos"
    V_TAN_FULL = "v_tan_full"                # INV_SIN family
    V_TAN_REDUCED = "v_tan_reduced"
    V_GRAD = "v_grad"
    W_SIN_FULL = "w_sin_full"                # HALF_ANGLE_COT family
    W_SIN_REDUCED = "w_sin_reduced"
    W_GRAD = "w_grad"
    W_GAP = "w_gap"                          # alpha^p * sin-energy minus gradient energy
    W_GAP_LIMIT = "w_gap_limit"
    W_REDUCED_LIMIT = "w_reduced_limit"
    LOG_UNIT = "log_unit"                    # integral of 1/(s log^(1+eps)(e/s)) = 1/eps
    LOG_UNIT_CORRECTION_BOUND = "log_unit_correction_bound"      # <= 1
    LOG_COS_CORRECTION_BOUND = "log_cos_correction_bound"        # alternating binomial sum
    CRIT_TAN_CORRECTION_BOUND = "crit_tan_correction_bound"      # alternating binomial sum
    CRIT_TAN_FULL_LEAD = "crit_tan_full_lead"                    # 2C/eps leading term
    CRIT_TAN_REDUCED_LIMIT = "crit_tan_reduced_limit"            # 2C/(q-1)


def _g(x: float) -> float:
    return log_gamma(x)


def closed_form(quantity: Quantity, cfg: ExponentConfig, eps: float | None = None) -> float:
    """Evaluate one oracle quantity.

    Exact gamma forms and exact limits are returned as values; *_BOUND
    quantities return the proven bound, not the (unknown) exact value.
    """
    q = quantity
    if q in (Quantity.LOG_UNIT, Quantity.LOG_UNIT_CORRECTION_BOUND):
        if q is Quantity.LOG_UNIT:
            if eps is None or eps <= 0.0:
                raise ValueError("LOG_UNIT needs eps > 0")
            return 1.0 / eps
        return 1.0

    n = cfg.ambient_dim
    if cfg.regime is Regime.CRITICAL:
        sd = cfg.sphere_dim
        c_n = surface_constant(n)
        if q is Quantity.LOG_COS_CORRECTION_BOUND:
            top = 2 * sd - 1
            return sum(math.comb(top, r) * (-1.0) ** (r + 1) / (2.0 * r + 1.0)
                       for r in range(1, top + 1))
        if q is Quantity.CRIT_TAN_CORRECTION_BOUND:
            top = sd - 1
            return 0.5 * sum(math.comb(top, r) * (-1.0) ** (r + 1) / r
                             for r in range(1, top + 1))
        if q is Quantity.CRIT_TAN_FULL_LEAD:
            if eps is None or eps <= 0.0:
                raise ValueError("CRIT_TAN_FULL_LEAD needs eps > 0")
            return 2.0 * c_n / eps
        if q is Quantity.CRIT_TAN_REDUCED_LIMIT:
            return 2.0 * c_n / (sd - 1.0)
        raise ValueError(f"{q.value} is a subcritical quantity")

    p = cfg.exponent
    a = cfg.alpha
    c_n = surface_constant(n)
    if q in (Quantity.W_GAP_LIMIT, Quantity.W_REDUCED_LIMIT):
        if q is Quantity.W_GAP_LIMIT:
            return 2.0 ** (n - p - 1.0) * c_n * a ** (p - 1.0)
        return 2.0 ** (n - p) * c_n * a ** (p - 1.0) / (n - p)

    if eps is None:
        raise ValueError(f"{q.value} needs eps")
    if eps <= 0.0:
        raise ValueError(f"{q.value} needs eps > 0")
    kap = a - 2.0 * eps / p
    # quantities built from the gradient of a family member also need the
    # family exponent kappa to stay positive; pure moments only need their
    # gamma arguments in range, which log_gamma enforces
    if q in (Quantity.U_GRADCOS_RATIO, Quantity.U_GRADCOS_BOUND,
             Quantity.UT_GRADCOS, Quantity.V_GRAD, Quantity.W_GRAD,
             Quantity.W_GAP) and kap <= 0.0:
        raise ValueError(
            f"{q.value} needs eps < (n - p - 1)/2 = {0.5 * (n - p - 1.0)}, got {eps}")

    if q is Quantity.U_SIN_FULL:
        return c_n * math.exp(_g(eps) + _g(0.5 * n - eps) - _g(0.5 * n))
    if q is Quantity.U_SIN_REDUCED:
        return c_n * eps / (0.5 * n) * math.exp(_g(eps) + _g(0.5 * n - eps) - _g(0.5 * n))
    if q is Quantity.U_COS_SIN_MOMENT:
        return c_n * math.exp(_g(0.5 * n - eps) + _g(p + eps) - _g(0.5 * n + p))
    if q is Quantity.U_GRADCOS_RATIO:
        ln_lam_p = (_g(p + eps) + _g(0.5 * n) - _g(0.5 * n + p)
                    - p * math.log(kap) - _g(eps))
        return math.exp(ln_lam_p / p)
    if q is Quantity.U_GRADCOS_BOUND:
        lam = closed_form(Quantity.U_GRADCOS_RATIO, cfg, eps)
        return (kap ** p * closed_form(Quantity.U_SIN_FULL, cfg, eps)
                * (1.0 + lam) ** p)
    if q is Quantity.UT_SIN_FULL:
        h = 0.5 * (n - p)
        return c_n * math.exp(_g(eps) + _g(h - eps) - _g(h))
    if q is Quantity.UT_SIN_REDUCED:
        h = 0.5 * (n - p)
        return c_n * eps / h * math.exp(_g(eps) + _g(h - eps) - _g(h))
    if q is Quantity.UT_GRADCOS:
        return kap ** p * closed_form(Quantity.UT_SIN_FULL, cfg, eps)
    if q is Quantity.V_TAN_FULL:
        h = 0.5 * (p + 1.0)
        return c_n * math.exp(_g(eps) + _g(h) - _g(h + eps))
    if q is Quantity.V_TAN_REDUCED:
        return c_n * eps * math.exp(_g(eps) + _g(0.5 * (p - 1.0)) - _g(0.5 * (p + 1.0) + eps))
    if q is Quantity.V_GRAD:
        return kap ** p * closed_form(Quantity.V_TAN_FULL, cfg, eps)
    if q is Quantity.W_SIN_FULL:
        return (2.0 ** (n - p - 2.0) * c_n
                * math.exp(_g(eps) + _g(n - p - 1.0 - eps) - _g(n - p - 1.0)))
    if q is Quantity.W_SIN_REDUCED:
        return (2.0 ** (n - p) * c_n / (n - p)
                * math.exp(_g(1.0 + eps) + _g(n - p - eps) - _g(n - p)))
    if q is Quantity.W_GRAD:
        return kap ** p * closed_form(Quantity.W_SIN_FULL, cfg, eps)
    if q is Quantity.W_GAP:
        return (a ** p - kap ** p) * closed_form(Quantity.W_SIN_FULL, cfg, eps)
    raise ValueError(f"unhandled quantity {q}")


_MOMENT_TEMPLATES = {
    # quantity -> (t_pow, sin_pow, plus_pow) as functions of (n, p, eps)
    Quantity.U_SIN_FULL: lambda n, p, e: (n - 1.0 - 2.0 * e, -(n - 1.0 - 2.0 * e), 0.0),
    Quantity.U_SIN_REDUCED: lambda n, p, e: (n - 1.0 - 2.0 * e, -(n - 3.0 - 2.0 * e), 0.0),
    Quantity.U_COS_SIN_MOMENT: lambda n, p, e: (n - 1.0 - 2.0 * e,
                                                -(n - 2.0 * p - 1.0 - 2.0 * e), 0.0),
    Quantity.UT_SIN_FULL: lambda n, p, e: (n - p - 1.0 - 2.0 * e, -(n - 1.0 - 2.0 * e), 0.0),
    Quantity.UT_SIN_REDUCED: lambda n, p, e: (n - p - 1.0 - 2.0 * e,
                                              -(n - 3.0 - 2.0 * e), 0.0),
    Quantity.V_TAN_FULL: lambda n, p, e: (p, -(n - 1.0 - 2.0 * e), 0.0),
    Quantity.V_TAN_REDUCED: lambda n, p, e: (p - 2.0, -(n - 3.0 - 2.0 * e), 0.0),
    Quantity.W_SIN_FULL: lambda n, p, e: (0.0, -(n - 1.0 - 2.0 * e), n - p - 1.0 - 2.0 * e),
    Quantity.W_SIN_REDUCED: lambda n, p, e: (0.0, -(n - 3.0 - 2.0 * e),
                                             n - p - 1.0 - 2.0 * e),
}


def moment_quadrature(quantity: Quantity, cfg: ExponentConfig, eps: float,
                      spec: QuadratureSpec | None = None) -> float:
    """Direct quadrature of a closed-form moment, bypassing the profiles.

    Every exact gamma form is the reduction of a single weighted moment;
    integrating that moment directly keeps the oracle comparison meaningful
    even where a family member itself is inadmissible (for example eps at
    the top of the family range).  LOG_UNIT integrates the canonical
    logarithmic moment on (0, 1).
    """
    if quantity is Quantity.LOG_UNIT:
        if eps <= 0.0:
            raise ValueError("LOG_UNIT needs eps > 0")
        wi = WeightedIntegrand(lo_pow=-1.0, lo_log_pow=-(1.0 + eps))
        res = integrate_line(wi, 0.0, 1.0, spec)
        if not res.converged:
            raise NumericalFailureError("LOG_UNIT quadrature did not converge")
        return res.value
    template = _MOMENT_TEMPLATES.get(quantity)
    if template is None:
        raise ValueError(f"{quantity.value} has no direct moment template")
    if eps <= 0.0:
        raise ValueError("moments need eps > 0")
    t_pow, sin_pow, plus_pow = template(cfg.ambient_dim, cfg.exponent, eps)
    from .quadrature import ZonalIntegrand, integrate_zonal

    res = integrate_zonal(ZonalIntegrand(t_pow=t_pow, sin_pow=sin_pow,
                                         plus_pow=plus_pow),
                          cfg.ambient_dim, spec)
    if not res.converged:
        raise NumericalFailureError(f"{quantity.value} quadrature did not converge")
    return res.value


# --------------------------------------------------------------------------
# tame correction integrals of the critical family (quadrature, no gammas)
# --------------------------------------------------------------------------

def log_unit_correction(eps: float, spec: QuadratureSpec | None = None) -> float:
    """Positive correction pairing with LOG_UNIT; proven <= 1 uniformly."""
    def rest(x, dlo, dhi, ln_dlo, ln_dhi, ylo, yhi):
        root = np.sqrt(dhi * (2.0 - dhi))
        return x / ((1.0 + root) * ylo ** (1.0 + eps)) * (2.0 - dhi) ** -0.5

    wi = WeightedIntegrand(hi_pow=-0.5, rest=rest)
    res = integrate_line(wi, 0.0, 1.0, spec)
    if not res.converged:
        raise NumericalFailureError("log_unit_correction did not converge")
    return res.value


def log_cos_correction(sphere_dim: int, eps: float,
                       spec: QuadratureSpec | None = None) -> float:
    """Positive correction subtracted from LOG_UNIT in the weighted-gradient
    energy of the critical family; bounded by LOG_COS_CORRECTION_BOUND."""
    m = sphere_dim - 0.5

    def rest(x, dlo, dhi, ln_dlo, ln_dhi, ylo, yhi):
        num = -np.expm1(m * np.log1p(-(x * x)))
        return np.where(dlo > 0.0, num / np.maximum(dlo, 1e-300), 0.0) / ylo ** (1.0 + eps)

    res = integrate_line(WeightedIntegrand(rest=rest), 0.0, 1.0, spec)
    if not res.converged:
        raise NumericalFailureError("log_cos_correction did not converge")
    return res.value


def crit_tan_correction(sphere_dim: int, eps: float,
                        spec: QuadratureSpec | None = None) -> float:
    """Signed correction pairing with LOG_UNIT in the tangent-weighted
    energy; absolutely bounded by CRIT_TAN_CORRECTION_BOUND."""
    m = 0.5 * (sphere_dim - 1.0)

    def rest(x, dlo, dhi, ln_dlo, ln_dhi, ylo, yhi):
        num = np.expm1(m * np.log1p(-(x * x)))
        return np.where(dlo > 0.0, num / np.maximum(dlo, 1e-300), 0.0) / ylo ** (1.0 + eps)

    res = integrate_line(WeightedIntegrand(rest=rest), 0.0, 1.0, spec)
    if not res.converged:
        raise NumericalFailureError("crit_tan_correction did not converge")
    return res.value


# --------------------------------------------------------------------------
# sharpness sweeps
# --------------------------------------------------------------------------

def default_schedule(start: float = 0.2, factor: float = 0.5, steps: int = 8) -> tuple[float, ...]:
    """Geometric eps schedule; first-order limits extrapolate cleanly on it."""
    if not 0.0 < factor < 1.0:
        raise ValueError("factor must lie in (0, 1)")
    if steps < 2:
        raise ValueError("need at least two schedule entries")
    return tuple(start * factor ** k for k in range(steps))


SWEEP_PAIRINGS: dict[str, FamilyId] = {
    "f1shrp1": FamilyId.COT_COS,
    "f1shrp2": FamilyId.COT_COS,
    "f1shrp3": FamilyId.COT,
    "f3shrp1": FamilyId.INV_SIN,
    "f3shrp2": FamilyId.INV_SIN,
    "f3shrp3": FamilyId.INV_SIN,
    "fc1shrp1": FamilyId.LOG_POWER,
    "fc1shrp2": FamilyId.LOG_POWER,
    "fc2shrp1": FamilyId.LOG_POWER,
    "fc2shrp2": FamilyId.LOG_POWER,
    "fc2shrp3": FamilyId.LOG_POWER,
}


@dataclass(frozen=True)
class SweepRow:
    eps: float
    ratio_quadrature: float
    ratio_closed_form: float   # nan when no closed route exists
    rel_gap: float             # nan when no closed route exists


@dataclass(frozen=True)
class SharpnessReport:
    form: str
    family: str
    ambient_dim: int
    exponent: float
    regime: str
    schedule: tuple[float, ...]
    rows: tuple[SweepRow, ...]
    extrapolated: float
    consistency_residual: float
    target: float
    relative_gap: float
    verdict: bool
    notes: tuple[str, ...] = ()


def _closed_ratio(form: str, cfg: ExponentConfig, eps: float) -> float:
    """Ratio from exact closed forms; nan where one side has none."""
    if cfg.regime is Regime.SUBCRITICAL:
        p, n, a = cfg.exponent, cfg.ambient_dim, cfg.alpha
        kap = a - 2.0 * eps / p
        if form == "f1shrp3":
            s_full = closed_form(Quantity.UT_SIN_FULL, cfg, eps)
            s_red = closed_form(Quantity.UT_SIN_REDUCED, cfg, eps)
            grad = closed_form(Quantity.UT_GRADCOS, cfg, eps)
            return (a ** p * s_full - grad) / s_red
        if form.startswith("f3"):
            t_full = closed_form(Quantity.V_TAN_FULL, cfg, eps)
            t_red = closed_form(Quantity.V_TAN_REDUCED, cfg, eps)
            grad = closed_form(Quantity.V_GRAD, cfg, eps)
            if form == "f3shrp1":
                return a ** p * t_full / (grad + (p - 1.0) * a ** (p - 1.0) * t_red)
            if form == "f3shrp2":
                return (a * t_full - (p - 1.0) * t_red) / grad
            return (a ** p * t_full - grad) / t_red
    return math.nan


def _semi_closed_ratio(form: str, cfg: ExponentConfig, eps: float,
                       spec: QuadratureSpec | None) -> float:
    """Critical-route ratio from the exact 1/eps split plus tame corrections.

    Rebuilds each critical energy as 2*C*(1/eps +- correction) with the
    corrections integrated in a variable where they are bounded; fully
    independent of the logarithmic-endpoint machinery of the direct route.
    """
    if cfg.regime is not Regime.CRITICAL:
        return math.nan
    q = cfg.sphere_dim
    g = cfg.gamma
    two_c = 2.0 * surface_constant(cfg.ambient_dim)
    coef = (g - eps / q) ** q
    inv = 1.0 / eps
    if form.startswith("fc1"):
        u_full = two_c * (inv + log_unit_correction(eps, spec))
        grad_cos = coef * two_c * (inv - log_cos_correction(q, eps, spec))
        prof = make_profile(FamilyId.LOG_POWER, cfg, eps)
        u_red = eval_functional(Functional.LOG_SIN_REDUCED, prof, cfg, spec)
        if form == "fc1shrp1":
            return g ** q * u_full / (grad_cos + q * g ** (q - 1.0) * u_red)
        return (g * u_full - q * u_red) / grad_cos
    v_full = two_c * (inv + crit_tan_correction(q, eps, spec))
    grad = coef * v_full
    prof = make_profile(FamilyId.LOG_POWER, cfg, eps)
    v_red = eval_functional(Functional.LOG_TAN_REDUCED, prof, cfg, spec)
    if form == "fc2shrp1":
        return g ** q * v_full / (grad + (q - 1.0) * g ** (q - 1.0) * v_red)
    if form == "fc2shrp2":
        return (g * v_full - (q - 1.0) * v_red) / grad
    return (g ** q * v_full - grad) / v_red


def _quad_ratio(form: str, cfg: ExponentConfig, eps: float,
                spec: QuadratureSpec | None) -> float:
    from .functionals import sharpness_ratio

    prof = make_profile(SWEEP_PAIRINGS[form], cfg, eps)
    return sharpness_ratio(form, prof, cfg, spec)


def _extrapolate(schedule, ratios) -> tuple[float, float]:
    """First-order Richardson limit from the two smallest eps entries, with a
    consistency residual from the preceding pair."""
    e1, e0 = schedule[-2], schedule[-1]
    r1, r0 = ratios[-2], ratios[-1]
    limit = r0 + (r0 - r1) * e0 / (e1 - e0)
    e2, r2 = schedule[-3], ratios[-3]
    prev = r1 + (r1 - r2) * e1 / (e2 - e1)
    return limit, abs(limit - prev)


def sharpness_sweep(form: str, family: FamilyId, cfg: ExponentConfig,
                    schedule=None, spec: QuadratureSpec | None = None,
                    gap_threshold: float = 0.01) -> SharpnessReport:
    """Evaluate a sharpness quotient along an eps schedule and extrapolate.

    Both evaluation routes are recorded per entry; a disagreement beyond the
    cancellation-adjusted tolerance is a numerical failure.  The verdict
    requires the extrapolated limit within ``gap_threshold`` of the proven
    supremum and no ratio above it beyond 1e-8.
    """
    if form not in SWEEP_PAIRINGS:
        raise ValueError(f"unknown sharpness form {form!r}")
    if SWEEP_PAIRINGS[form] is not family:
        raise ValueError(
            f"form {form} is proven along family "
            f"{SWEEP_PAIRINGS[form].value}, not {family.value}")
    if schedule is None:
        schedule = default_schedule()
    schedule = tuple(float(e) for e in schedule)
    if len(schedule) < 3:
        raise ValueError("schedule needs at least three entries for extrapolation")
    if any(b >= a for a, b in zip(schedule, schedule[1:])):
        raise ValueError("schedule must be strictly decreasing")
    hi = admissible_eps_upper(family, cfg)
    if schedule[0] >= hi:
        raise ValueError(f"schedule starts at {schedule[0]}, admissible range is (0, {hi})")

    target = sharpness_target(form, cfg)
    notes: list[str] = []

    def one_row(eps: float) -> SweepRow:
        rq = _quad_ratio(form, cfg, eps, spec)
        if cfg.regime is Regime.SUBCRITICAL:
            rc = _closed_ratio(form, cfg, eps)
        else:
            rc = _semi_closed_ratio(form, cfg, eps, spec)
        if math.isnan(rc):
            gap = math.nan
        else:
            gap = abs(rq - rc) / max(abs(rc), 1e-300)
            tol = max(1e-8, 3e-10 / eps)  # difference forms cancel ~eps of the values
            if gap > tol:
                raise NumericalFailureError(
                    f"{form} at eps = {eps}: quadrature ratio {rq} and closed-form "
                    f"ratio {rc} disagree (relative gap {gap:.3e} > {tol:.1e})")
        if rq > target + 1e-8:
            raise NumericalFailureError(
                f"{form} at eps = {eps}: ratio {rq} exceeds the proven supremum {target}")
        return SweepRow(eps, rq, rc, gap)

    rows = parallel_map(one_row, schedule)

    if form == "f1shrp1" or form == "f1shrp2":
        # sanity ceiling for the gradient energy of the cot*cos family
        for eps in (schedule[0], schedule[-1]):
            prof = make_profile(family, cfg, eps)
            gc = eval_functional(Functional.GRAD_COS, prof, cfg, spec)
            bound = closed_form(Quantity.U_GRADCOS_BOUND, cfg, eps)
            if gc > bound * (1.0 + 1e-8):
                raise NumericalFailureError(
                    f"gradient energy {gc} exceeds its proven ceiling {bound} at eps = {eps}")
            full_q = eval_functional(Functional.SIN_FULL, prof, cfg, spec)
            red_q = eval_functional(Functional.SIN_REDUCED, prof, cfg, spec)
            for got, want, name in (
                    (full_q, closed_form(Quantity.U_SIN_FULL, cfg, eps), "sin energy"),
                    (red_q, closed_form(Quantity.U_SIN_REDUCED, cfg, eps), "reduced sin energy")):
                if abs(got - want) > 1e-8 * abs(want):
                    raise NumericalFailureError(
                        f"{name} quadrature {got} vs closed form {want} at eps = {eps}")
        notes.append("gradient energy checked against its proven ceiling; "
                     "sin energies cross-checked against closed forms")

    ratios = [r.ratio_quadrature for r in rows]
    limit, resid = _extrapolate(schedule, ratios)
    rel_gap = abs(limit - target) / abs(target)
    verdict = rel_gap <= gap_threshold
    return SharpnessReport(
        form=form,
        family=family.value,
        ambient_dim=cfg.ambient_dim,
        exponent=cfg.exponent,
        regime=cfg.regime.value,
        schedule=schedule,
        rows=tuple(rows),
        extrapolated=limit,
        consistency_residual=resid,
        target=target,
        relative_gap=rel_gap,
        verdict=verdict,
        notes=tuple(notes),
    )


# --------------------------------------------------------------------------
# counterexample scan
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class CounterexampleResult:
    status: str                      # "found" | "undetermined" | "negative"
    ambient_dim: int
    exponent: float
    eps_star: float | None
    margin: float | None             # closed-form violation margin at eps_star
    margin_quadrature: float | None
    oracle_rel_gap: float | None
    gap_limit: float                 # limit of the strengthened-inequality gap
    reduced_limit: float             # limit of the competing lower-order term
    note: str


def find_counterexample(cfg: ExponentConfig, schedule=None,
                        spec: QuadratureSpec | None = None) -> CounterexampleResult:
    """Scan the half-angle cotangent family for a violation of the
    strengthened inequality (full gradient, lower-order coefficient one).

    The limiting comparison is decisive exactly when n - p > 2; at
    n - p = 2 the two limits coincide (on this family the violation margin
    vanishes identically) and the scan reports "undetermined" rather than
    manufacturing a sign from rounding noise.
    """
    if cfg.regime is not Regime.SUBCRITICAL:
        raise ValueError("the counterexample scan is posed in the subcritical regime")
    if schedule is None:
        schedule = default_schedule()
    schedule = tuple(float(e) for e in schedule)
    hi = admissible_eps_upper(FamilyId.HALF_ANGLE_COT, cfg)
    schedule = tuple(e for e in schedule if e < hi)
    if not schedule:
        raise ValueError("no admissible schedule entries below the eps ceiling")

    n, p, a = cfg.ambient_dim, cfg.exponent, cfg.alpha
    gap_limit = closed_form(Quantity.W_GAP_LIMIT, cfg)
    reduced_limit = closed_form(Quantity.W_REDUCED_LIMIT, cfg)
    scale = max(gap_limit, reduced_limit)

    decisive = gap_limit - reduced_limit > 1e-12 * scale
    tied = abs(gap_limit - reduced_limit) <= 1e-12 * scale

    # the limiting comparison guarantees a violation for small enough eps, so
    # a decisive configuration may extend the scan below the schedule floor
    scan: list[float] = list(schedule)
    if decisive:
        factor = schedule[1] / schedule[0] if len(schedule) > 1 else 0.5
        eps = schedule[-1] * factor
        while eps > 1e-6:
            scan.append(eps)
            eps *= factor
    extended = False

    best = None
    for eps in scan:
        extended = extended or eps not in schedule
        gap_c = closed_form(Quantity.W_GAP, cfg, eps)
        red_c = a ** (p - 1.0) * closed_form(Quantity.W_SIN_REDUCED, cfg, eps)
        margin_c = gap_c - red_c

        prof = make_profile(FamilyId.HALF_ANGLE_COT, cfg, eps)
        s_full = eval_functional(Functional.SIN_FULL, prof, cfg, spec)
        grad = eval_functional(Functional.GRAD, prof, cfg, spec)
        s_red = eval_functional(Functional.SIN_REDUCED, prof, cfg, spec)
        for got, want, name in (
                (s_full, closed_form(Quantity.W_SIN_FULL, cfg, eps), "sin energy"),
                (grad, closed_form(Quantity.W_GRAD, cfg, eps), "gradient energy"),
                (s_red, closed_form(Quantity.W_SIN_REDUCED, cfg, eps), "reduced sin energy")):
            rel = abs(got - want) / abs(want)
            if rel > 1e-6:
                raise NumericalFailureError(
                    f"counterexample scan at eps = {eps}: {name} quadrature {got} "
                    f"vs closed form {want} (relative gap {rel:.3e})")
        margin_q = a ** p * s_full - grad - a ** (p - 1.0) * s_red
        oracle_gap = abs(margin_q - margin_c) / max(abs(margin_c), 1e-12 * scale)

        # a genuine violation must clear quadrature noise on both routes
        floor = 1e-8 * scale
        if margin_c > floor and margin_q > floor:
            best = (eps, margin_c, margin_q, oracle_gap)
            break

    if best is not None:
        eps_star, margin_c, margin_q, oracle_gap = best
        note = "strengthened inequality violated; largest violating eps in " \
               "the schedule reported"
        if extended:
            note = ("strengthened inequality violated below the requested "
                    "schedule; the scan was extended since the limit "
                    "comparison is decisive")
        return CounterexampleResult(
            "found", n, p, eps_star, margin_c, margin_q, oracle_gap,
            gap_limit, reduced_limit, note=note)
    if tied:
        return CounterexampleResult(
            "undetermined", n, p, None, None, None, None, gap_limit, reduced_limit,
            note="the two limits coincide (n - p = 2); on this family the "
                 "violation margin vanishes identically and no sign can be "
                 "certified")
    if decisive:
        raise NumericalFailureError(
            "limit comparison is decisive but no scanned eps showed a "
            "violation above the noise floor; the limits are too close to "
            "separate at achievable eps")
    return CounterexampleResult(
        "negative", n, p, None, None, None, None, gap_limit, reduced_limit,
        note="limit comparison is negative (n - p < 2); this family exhibits "
             "no violation")
