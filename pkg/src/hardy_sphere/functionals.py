"""Hardy-type functionals on zonal profiles and their inequality margins.

Every functional of a zonal profile reduces to a weighted one-dimensional
integral in t = cos(d).  Profiles carry explicit reduced templates of |g|
and |g'| (powers of |t|, sin d, 1 + cos d and L = log(e/sin d) times a
bounded factor), so the composed integrand hands the quadrature engine its
exact endpoint exponents instead of asking it to discover them.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from enum import Enum
from typing import Callable

import numpy as np

from .quadrature import (
    NonIntegrableError,
    NumericalFailureError,
    QuadratureResult,
    QuadratureSpec,
    ZonalIntegrand,
    integrate_zonal,
)

__all__ = [
    "Regime",
    "ExponentConfig",
    "ReducedTerm",
    "ZonalProfile",
    "profile_from_t_poly",
    "constant_profile",
    "Functional",
    "eval_functional",
    "Margin",
    "INEQUALITIES",
    "inequality_margin",
    "SHARPNESS_FORMS",
    "sharpness_ratio",
    "sharpness_target",
    "DegenerateInputError",
    "divergent_log_tangent_moment",
]


class DegenerateInputError(Exception):
    """Ratio undefined: vanishing denominator with positive numerator."""


class Regime(Enum):
    SUBCRITICAL = "sub"
    CRITICAL = "crit"


@dataclass(frozen=True)
class ExponentConfig:
    """Ambient dimension and integrability exponent.

    Subcritical: functionals live on the sphere in R^ambient_dim with
    1 < exponent < ambient_dim - 1 (ambient_dim >= 4).  Critical: the
    exponent equals the sphere dimension q = ambient_dim - 1 >= 2 and the
    weights carry logarithmic corrections.
    """

    ambient_dim: int
    exponent: float
    regime: Regime

    def __post_init__(self):
        n, p = self.ambient_dim, self.exponent
        if self.regime is Regime.SUBCRITICAL:
            if n < 4:
                raise ValueError(f"subcritical regime requires ambient_dim >= 4, got {n}")
            if not 1.0 < p < n - 1:
                raise ValueError(
                    f"subcritical regime requires 1 < p < {n - 1}, got p = {p}")
        else:
            if n < 3:
                raise ValueError(f"critical regime requires ambient_dim >= 3, got {n}")
            if p != n - 1:
                raise ValueError(
                    f"critical regime fixes the exponent to the sphere dimension "
                    f"{n - 1}, got p = {p}")

    @classmethod
    def subcritical(cls, ambient_dim: int, p: float) -> "ExponentConfig":
        return cls(ambient_dim, float(p), Regime.SUBCRITICAL)

    @classmethod
    def critical(cls, ambient_dim: int) -> "ExponentConfig":
        return cls(ambient_dim, float(ambient_dim - 1), Regime.CRITICAL)

    @property
    def sphere_dim(self) -> int:
        return self.ambient_dim - 1

    @property
    def alpha(self) -> float:
        """Sharp subcritical constant (n - p - 1)/p."""
        if self.regime is not Regime.SUBCRITICAL:
            raise ValueError("alpha is a subcritical constant")
        return (self.ambient_dim - self.exponent - 1.0) / self.exponent

    @property
    def gamma(self) -> float:
        """Sharp critical constant (q - 1)/q for sphere dimension q."""
        if self.regime is not Regime.CRITICAL:
            raise ValueError("gamma is a critical constant")
        q = self.sphere_dim
        return (q - 1.0) / q


# --------------------------------------------------------------------------
# profiles
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class ReducedTerm:
    """A nonnegative zonal quantity |t|^a sin^s (1+t)^e L^c * extra * coeff.

    ``extra(t, one_minus_t2, lam)`` must stay bounded and nonnegative at the
    singular endpoints; unbounded behavior belongs in the exponents.
    """

    t_pow: float = 0.0
    sin_pow: float = 0.0
    plus_pow: float = 0.0
    log_pow: float = 0.0
    coeff: float = 1.0
    extra: Callable[[np.ndarray, np.ndarray, np.ndarray], np.ndarray] | None = None

    def raised(self, p: float) -> "ReducedTerm":
        ex = self.extra
        new_extra = None if ex is None else (lambda t, omt2, lam: ex(t, omt2, lam) ** p)
        return ReducedTerm(self.t_pow * p, self.sin_pow * p, self.plus_pow * p,
                           self.log_pow * p, self.coeff ** p, new_extra)


@dataclass(frozen=True)
class ZonalProfile:
    """A radial profile g(d) with derivative and reduced endpoint templates."""

    label: str
    value: Callable[[float], float]
    derivative: Callable[[float], float]
    magnitude: ReducedTerm
    gradient_magnitude: ReducedTerm
    equator_kink: bool = False


def _dist_from_t(t: np.ndarray, omt2: np.ndarray) -> np.ndarray:
    """Geodesic distance from t = cos d, accurate at both poles."""
    t = np.asarray(t, dtype=float)
    s = np.sqrt(np.clip(omt2, 0.0, 1.0))
    near = np.arcsin(s)
    mid = np.arccos(np.clip(t, -1.0, 1.0))
    return np.where(t > 0.7, near, np.where(t < -0.7, math.pi - near, mid))


def profile_from_t_poly(label: str, coeffs) -> ZonalProfile:
    """Profile g(d) = P(cos d) for a polynomial P; smooth on the sphere."""
    poly = np.polynomial.Polynomial(coeffs)
    dpoly = poly.deriv()

    def value(d: float) -> float:
        return float(poly(math.cos(d)))

    def derivative(d: float) -> float:
        return float(-math.sin(d) * dpoly(math.cos(d)))

    return ZonalProfile(
        label=label,
        value=value,
        derivative=derivative,
        magnitude=ReducedTerm(extra=lambda t, omt2, lam: np.abs(poly(t))),
        gradient_magnitude=ReducedTerm(
            sin_pow=1.0, extra=lambda t, omt2, lam: np.abs(dpoly(t))),
    )


def constant_profile(c: float = 1.0) -> ZonalProfile:
    return ZonalProfile(
        label=f"constant[{c:g}]",
        value=lambda d: c,
        derivative=lambda d: 0.0,
        magnitude=ReducedTerm(coeff=abs(c)),
        gradient_magnitude=ReducedTerm(coeff=0.0),
    )


# --------------------------------------------------------------------------
# functionals
# --------------------------------------------------------------------------

class Functional(Enum):
    """The twelve weighted energies; names state the weight shape."""

    SIN_FULL = "sin_full"              # |u|^p / sin^p d
    SIN_REDUCED = "sin_reduced"        # |u|^p / sin^(p-2) d
    TAN_FULL = "tan_full"              # |u|^p / |tan d|^p
    TAN_REDUCED = "tan_reduced"        # |u|^p / |tan d|^(p-2)
    GRAD = "grad"                      # |grad u|^p
    GRAD_COS = "grad_cos"              # |grad u|^p |cos d|^p
    LOG_SIN_FULL = "log_sin_full"      # |u|^q / (sin^q d L^q)
    LOG_SIN_REDUCED = "log_sin_reduced"    # |u|^q / (sin^(q-2) d L^(q-1))
    LOG_TAN_FULL = "log_tan_full"      # |u|^q / (|tan d|^q L^q)
    LOG_TAN_REDUCED = "log_tan_reduced"    # |u|^q / (|tan d|^(q-2) L^(q-1))
    GRAD_CRIT = "grad_crit"            # |grad u|^q
    GRAD_COS_CRIT = "grad_cos_crit"    # |grad u|^q |cos d|^q


_SUBCRITICAL_KINDS = {Functional.SIN_FULL, Functional.SIN_REDUCED,
                      Functional.TAN_FULL, Functional.TAN_REDUCED,
                      Functional.GRAD, Functional.GRAD_COS}
_GRADIENT_KINDS = {Functional.GRAD, Functional.GRAD_COS,
                   Functional.GRAD_CRIT, Functional.GRAD_COS_CRIT}


def _weight_pows(kind: Functional, p: float) -> tuple[float, float, float]:
    """(t_pow, sin_pow, log_pow) of the weight for exponent p."""
    if kind in (Functional.SIN_FULL,):
        return 0.0, -p, 0.0
    if kind in (Functional.SIN_REDUCED,):
        return 0.0, 2.0 - p, 0.0
    if kind in (Functional.TAN_FULL,):
        return p, -p, 0.0
    if kind in (Functional.TAN_REDUCED,):
        return p - 2.0, 2.0 - p, 0.0
    if kind in (Functional.GRAD, Functional.GRAD_CRIT):
        return 0.0, 0.0, 0.0
    if kind in (Functional.GRAD_COS, Functional.GRAD_COS_CRIT):
        return p, 0.0, 0.0
    if kind is Functional.LOG_SIN_FULL:
        return 0.0, -p, -p
    if kind is Functional.LOG_SIN_REDUCED:
        return 0.0, 2.0 - p, 1.0 - p
    if kind is Functional.LOG_TAN_FULL:
        return p, -p, -p
    if kind is Functional.LOG_TAN_REDUCED:
        return p - 2.0, 2.0 - p, 1.0 - p
    raise ValueError(kind)


def eval_functional(kind: Functional, u: ZonalProfile, cfg: ExponentConfig,
                    spec: QuadratureSpec | None = None) -> float:
    return eval_functional_result(kind, u, cfg, spec).value


def eval_functional_result(kind: Functional, u: ZonalProfile, cfg: ExponentConfig,
                           spec: QuadratureSpec | None = None) -> QuadratureResult:
    """Reduced-variable evaluation; independent of the zonal pole by construction."""
    if (kind in _SUBCRITICAL_KINDS) != (cfg.regime is Regime.SUBCRITICAL):
        raise ValueError(
            f"functional {kind.value} does not apply in the {cfg.regime.value} regime")
    p = cfg.exponent
    base = u.gradient_magnitude if kind in _GRADIENT_KINDS else u.magnitude
    raised = base.raised(p)
    if raised.coeff == 0.0:
        return QuadratureResult(0.0, 0.0, 0, True)
    wt, ws, wl = _weight_pows(kind, p)
    zi = ZonalIntegrand(
        t_pow=raised.t_pow + wt,
        sin_pow=raised.sin_pow + ws,
        plus_pow=raised.plus_pow,
        log_pow=raised.log_pow + wl,
        smooth=raised.extra,
        scale=raised.coeff,
    )
    try:
        res = integrate_zonal(zi, cfg.ambient_dim, spec)
    except NonIntegrableError as exc:
        raise NonIntegrableError(
            f"functional {kind.value} of profile {u.label} is not integrable: {exc}"
        ) from exc
    if not res.converged:
        raise NumericalFailureError(
            f"quadrature did not converge for {kind.value} of {u.label}")
    return res


def divergent_log_tangent_moment(cfg: ExponentConfig, log_exponent: float,
                                 scale_c: float = 1.0,
                                 spec: QuadratureSpec | None = None) -> float:
    """Moment of 1 / (|tan d|^q |log(c |tan d|)|^m): refused for every m.

    The reduced integrand carries the pole offset to the power exactly -1,
    and the |log(c |tan d|)| factor vanishes inside the domain, so it is not
    an admissible logarithmic rescue.  The declared exponents are rejected
    before any integrand evaluation.
    """
    if cfg.regime is not Regime.CRITICAL:
        raise ValueError("the divergent moment family is posed in the critical regime")
    q = cfg.exponent
    c = float(scale_c)
    m = float(log_exponent)
    if c <= 0.0:
        raise ValueError("the log scale must be positive")

    def extra(t, omt2, lam):  # pragma: no cover - never reached
        tan_abs = np.sqrt(omt2) / np.abs(t)
        return np.abs(np.log(c * tan_abs)) ** (-m)

    zi = ZonalIntegrand(t_pow=q, sin_pow=-q, smooth=extra)
    res = integrate_zonal(zi, cfg.ambient_dim, spec)
    return res.value  # pragma: no cover


# --------------------------------------------------------------------------
# inequalities and sharpness ratios
# --------------------------------------------------------------------------

INEQUALITIES = ("f1", "f3", "fc1", "fc2", "inqfls")


@dataclass(frozen=True)
class Margin:
    inequality: str
    lhs: float
    rhs: float
    profile_label: str
    ambient_dim: int
    exponent: float
    regime: str

    @property
    def margin(self) -> float:
        return self.rhs - self.lhs

    def violates(self, rel_tol: float = 1e-9, abs_tol: float = 1e-12) -> bool:
        return self.margin < -max(rel_tol * abs(self.rhs), abs_tol)


def _require_regime(inequality: str, cfg: ExponentConfig) -> None:
    sub = inequality in ("f1", "f3", "inqfls")
    if sub and cfg.regime is not Regime.SUBCRITICAL:
        raise ValueError(f"{inequality} requires a subcritical configuration")
    if not sub and cfg.regime is not Regime.CRITICAL:
        raise ValueError(f"{inequality} requires a critical configuration")
    if inequality == "f3" and cfg.exponent < 2.0:
        raise ValueError(f"f3 requires p >= 2, got p = {cfg.exponent}")


def inequality_margin(inequality: str, u: ZonalProfile, cfg: ExponentConfig,
                      spec: QuadratureSpec | None = None) -> Margin:
    """Left and right sides of one of the proven (or refuted) inequalities."""
    if inequality not in INEQUALITIES:
        raise ValueError(f"unknown inequality id {inequality!r}")
    _require_regime(inequality, cfg)
    p = cfg.exponent
    ev = lambda kind: eval_functional(kind, u, cfg, spec)
    if inequality == "f1":
        a = cfg.alpha
        lhs = a ** p * ev(Functional.SIN_FULL)
        rhs = (ev(Functional.GRAD_COS)
               + (cfg.ambient_dim - p) * a ** (p - 1.0) * ev(Functional.SIN_REDUCED))
    elif inequality == "f3":
        a = cfg.alpha
        lhs = a ** p * ev(Functional.TAN_FULL)
        rhs = (ev(Functional.GRAD)
               + (p - 1.0) * a ** (p - 1.0) * ev(Functional.TAN_REDUCED))
    elif inequality == "inqfls":
        a = cfg.alpha
        lhs = a ** p * ev(Functional.SIN_FULL)
        rhs = ev(Functional.GRAD) + a ** (p - 1.0) * ev(Functional.SIN_REDUCED)
    elif inequality == "fc1":
        g = cfg.gamma
        q = cfg.sphere_dim
        lhs = g ** q * ev(Functional.LOG_SIN_FULL)
        rhs = (ev(Functional.GRAD_COS_CRIT)
               + q * g ** (q - 1.0) * ev(Functional.LOG_SIN_REDUCED))
    else:  # fc2
        g = cfg.gamma
        q = cfg.sphere_dim
        lhs = g ** q * ev(Functional.LOG_TAN_FULL)
        rhs = (ev(Functional.GRAD_CRIT)
               + (q - 1.0) * g ** (q - 1.0) * ev(Functional.LOG_TAN_REDUCED))
    return Margin(inequality, lhs, rhs, u.label, cfg.ambient_dim, p,
                  cfg.regime.value)


SHARPNESS_FORMS = ("f1shrp1", "f1shrp2", "f1shrp3",
                   "f3shrp1", "f3shrp2", "f3shrp3",
                   "fc1shrp1", "fc1shrp2",
                   "fc2shrp1", "fc2shrp2", "fc2shrp3")


def sharpness_target(form: str, cfg: ExponentConfig) -> float:
    """The proven supremum of the given sharpness quotient."""
    if form not in SHARPNESS_FORMS:
        raise ValueError(f"unknown sharpness form {form!r}")
    if form.startswith("f1") or form.startswith("f3"):
        a, p, n = cfg.alpha, cfg.exponent, cfg.ambient_dim
        if form.endswith("shrp1"):
            return 1.0
        if form.endswith("shrp2"):
            return a ** (1.0 - p)
        if form == "f1shrp3":
            return (n - p) * a ** (p - 1.0)
        return (p - 1.0) * a ** (p - 1.0)
    g, q = cfg.gamma, cfg.sphere_dim
    if form.endswith("shrp1"):
        return 1.0
    if form.endswith("shrp2"):
        return g ** (1.0 - q)
    return (q - 1.0) * g ** (q - 1.0)


def sharpness_ratio(form: str, u: ZonalProfile, cfg: ExponentConfig,
                    spec: QuadratureSpec | None = None) -> float:
    """Value of the sharpness quotient on one profile.

    A vanishing denominator with nonpositive numerator yields -inf (such a
    profile cannot approach the supremum); with positive numerator it is a
    degenerate input.
    """
    if form not in SHARPNESS_FORMS:
        raise ValueError(f"unknown sharpness form {form!r}")
    _require_regime("f1" if form.startswith("f1") else
                    "f3" if form.startswith("f3") else
                    "fc1" if form.startswith("fc1") else "fc2", cfg)
    p = cfg.exponent
    ev = lambda kind: eval_functional(kind, u, cfg, spec)
    if form.startswith(("f1", "f3")):
        a = cfg.alpha
        n = cfg.ambient_dim
        if form.startswith("f1"):
            full, red, grad = (Functional.SIN_FULL, Functional.SIN_REDUCED,
                               Functional.GRAD_COS)
            k_red = n - p
        else:
            full, red, grad = (Functional.TAN_FULL, Functional.TAN_REDUCED,
                               Functional.GRAD)
            k_red = p - 1.0
        if form == "f1shrp3" and p >= 0.5 * n:
            # still meaningful: the supremum is then taken over profiles with
            # gradient merely in the |cos d|^p-weighted space
            warnings.warn(
                f"f1shrp3 with p = {p} >= n/2: weighted-gradient interpretation",
                RuntimeWarning, stacklevel=2)
        if form.endswith("shrp1"):
            num = a ** p * ev(full)
            den = ev(grad) + k_red * a ** (p - 1.0) * ev(red)
        elif form.endswith("shrp2"):
            num = a * ev(full) - k_red * ev(red)
            den = ev(grad)
        else:
            num = a ** p * ev(full) - ev(grad)
            den = ev(red)
    else:
        g = cfg.gamma
        q = cfg.sphere_dim
        if form.startswith("fc1"):
            full, red, grad = (Functional.LOG_SIN_FULL, Functional.LOG_SIN_REDUCED,
                               Functional.GRAD_COS_CRIT)
            k_red = float(q)
        else:
            full, red, grad = (Functional.LOG_TAN_FULL, Functional.LOG_TAN_REDUCED,
                               Functional.GRAD_CRIT)
            k_red = q - 1.0
        if form.endswith("shrp1"):
            num = g ** q * ev(full)
            den = ev(grad) + k_red * g ** (q - 1.0) * ev(red)
        elif form.endswith("shrp2"):
            num = g * ev(full) - k_red * ev(red)
            den = ev(grad)
        else:
            num = g ** q * ev(full) - ev(grad)
            den = ev(red)
    if den <= 0.0:
        if num > 0.0:
            raise DegenerateInputError(
                f"{form}: zero denominator with positive numerator for {u.label}")
        return -math.inf
    return num / den
