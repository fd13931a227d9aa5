"""Spherical-coordinate calculus on the unit sphere in R^n.

A point is parametrized by n-1 angles, the first n-2 in [0, pi] and the
last in [0, 2*pi].  Scalar fields are functions of the raw angle array, so
finite-difference stencils can step across chart boundaries without
revalidation.  The surface gradient is expressed in the orthonormal angular
frame; the Laplace-Beltrami operator is realized as the nested
divergence-form sum of per-angle flux differences.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

__all__ = [
    "SphericalPoint",
    "PoleProximityError",
    "embed",
    "lambda_inner",
    "geodesic_distance",
    "grad_coordinate_analytic",
    "surface_gradient_fd",
    "laplace_beltrami_fd",
    "coordinate_field",
    "inner_field",
    "distance_field",
    "IdentityReport",
    "verify_identities",
    "sample_points",
]

_EPS = np.finfo(float).eps
GRAD_STEP = (3.0 * _EPS) ** (1.0 / 3.0)   # central first difference optimum
LAP_STEP = 2.0e-4                          # flux-form second difference, tuned
DEFAULT_POLE_GUARD = 1e-3


class PoleProximityError(Exception):
    """Evaluation point too close to a coordinate pole for the FD stencil."""


@dataclass(frozen=True)
class SphericalPoint:
    """Angles of a point on the unit sphere in R^{ambient_dim}."""

    angles: tuple[float, ...]
    ambient_dim: int

    def __post_init__(self):
        if self.ambient_dim < 2:
            raise ValueError(f"ambient_dim must be >= 2, got {self.ambient_dim}")
        if len(self.angles) != self.ambient_dim - 1:
            raise ValueError(
                f"expected {self.ambient_dim - 1} angles for ambient_dim "
                f"{self.ambient_dim}, got {len(self.angles)}")
        for j, a in enumerate(self.angles[:-1]):
            if not 0.0 <= a <= math.pi:
                raise ValueError(f"angle {j + 1} = {a} outside [0, pi]")
        last = self.angles[-1]
        if not 0.0 <= last <= 2.0 * math.pi:
            raise ValueError(f"last angle = {last} outside [0, 2*pi]")
        object.__setattr__(self, "angles", tuple(float(a) for a in self.angles))

    @property
    def array(self) -> np.ndarray:
        return np.asarray(self.angles, dtype=float)


def _embed_array(angles: np.ndarray) -> np.ndarray:
    """Cartesian coordinates from raw angles (no validation)."""
    n = len(angles) + 1
    x = np.empty(n)
    sines = np.sin(angles)
    cosines = np.cos(angles)
    prod = 1.0
    for m in range(n - 1):
        x[m] = prod * cosines[m]
        prod *= sines[m]
    x[n - 1] = prod
    return x


def embed(point: SphericalPoint) -> np.ndarray:
    """Unit vector in R^n for the given angles."""
    return _embed_array(point.array)


def lambda_inner(a: SphericalPoint, b: SphericalPoint) -> float:
    """Euclidean inner product of the two embeddings, clamped to [-1, 1].

    Clamping absorbs rounding of order 1e-16 that would otherwise leave the
    domain of arccos.
    """
    if a.ambient_dim != b.ambient_dim:
        raise ValueError(
            f"dimension mismatch: {a.ambient_dim} vs {b.ambient_dim}")
    v = float(np.dot(embed(a), embed(b)))
    return min(1.0, max(-1.0, v))


def geodesic_distance(a: SphericalPoint, b: SphericalPoint) -> float:
    """Arc length between two points, in [0, pi]."""
    return math.acos(lambda_inner(a, b))


def grad_coordinate_analytic(m: int, point: SphericalPoint) -> np.ndarray:
    """Frame components of the surface gradient of the m-th coordinate.

    ``m`` is 1-based.  The same product rule covers every branch: component
    j < m is cos(theta_j) * prod(sin(theta_k), j < k < m) * cos(theta_m),
    component m is -sin(theta_m), where for m = n the trailing cosine factor
    is absent.  Components with j > m vanish; for m <= 2 this reduces to the
    three-dimensional table padded with zeros.
    """
    n = point.ambient_dim
    if not 1 <= m <= n:
        raise ValueError(f"coordinate index {m} out of range 1..{n}")
    ang = point.array
    sines = np.sin(ang)
    cosines = np.cos(ang)
    g = np.zeros(n - 1)
    tail = cosines[m - 1] if m <= n - 1 else 1.0
    top = m - 1 if m <= n - 1 else n - 1
    for j in range(1, top + 1):
        prod = 1.0
        for k in range(j, min(m, n) - 1):  # sin(theta_k), j < k < m, 1-based
            prod *= sines[k]
        g[j - 1] = cosines[j - 1] * prod * tail
    if m <= n - 1:
        g[m - 1] = -sines[m - 1]
    return g


def coordinate_field(m: int, n: int) -> Callable[[np.ndarray], float]:
    """Scalar field: the m-th (1-based) Cartesian coordinate."""
    if not 1 <= m <= n:
        raise ValueError(f"coordinate index {m} out of range 1..{n}")
    return lambda ang: float(_embed_array(ang)[m - 1])


def inner_field(pole: SphericalPoint) -> Callable[[np.ndarray], float]:
    """Scalar field: inner product with the embedding of a fixed point."""
    x_pole = embed(pole)
    return lambda ang: float(np.dot(_embed_array(ang), x_pole))


def distance_field(pole: SphericalPoint) -> Callable[[np.ndarray], float]:
    """Scalar field: geodesic distance from a fixed point."""
    x_pole = embed(pole)

    def f(ang: np.ndarray) -> float:
        v = float(np.dot(_embed_array(ang), x_pole))
        return math.acos(min(1.0, max(-1.0, v)))

    return f


def _prefactors(ang: np.ndarray) -> np.ndarray:
    """Inverse metric factors 1 / prod(sin(theta_k), k < j) per frame slot."""
    n1 = len(ang)
    pref = np.empty(n1)
    prod = 1.0
    for j in range(n1):
        pref[j] = 1.0 / prod
        if j < n1 - 1:
            prod *= math.sin(ang[j])
    return pref


def _check_guard(ang: np.ndarray, pole_guard: float) -> None:
    # only the sines that actually enter a metric prefactor are constrained
    for j in range(len(ang) - 1):
        if abs(math.sin(ang[j])) < pole_guard:
            raise PoleProximityError(
                f"sin(theta_{j + 1}) = {math.sin(ang[j]):.2e} below guard {pole_guard}")


def surface_gradient_fd(f: Callable[[np.ndarray], float], point: SphericalPoint,
                        step: float | None = None,
                        pole_guard: float = DEFAULT_POLE_GUARD) -> np.ndarray:
    """Frame components of the surface gradient by central differences.

    Truncation is O(step^2); the default step balances it against rounding
    for smooth fields.
    """
    h = GRAD_STEP if step is None else float(step)
    if h <= 0.0:
        raise ValueError("step must be positive")
    ang = point.array
    _check_guard(ang, pole_guard)
    pref = _prefactors(ang)
    g = np.empty(len(ang))
    for j in range(len(ang)):
        up = ang.copy()
        dn = ang.copy()
        up[j] += h
        dn[j] -= h
        fu, fd = f(up), f(dn)
        if not (math.isfinite(fu) and math.isfinite(fd)):
            raise ValueError(f"non-finite field value near angle index {j}")
        g[j] = pref[j] * (fu - fd) / (2.0 * h)
    return g


def laplace_beltrami_fd(f: Callable[[np.ndarray], float], point: SphericalPoint,
                        step: float | None = None,
                        pole_guard: float = DEFAULT_POLE_GUARD) -> float:
    """Surface Laplacian by second-order flux differences per angle.

    Each angular term is (w(theta+h/2)(f(theta+h)-f(theta)) -
    w(theta-h/2)(f(theta)-f(theta-h))) / (h^2 w(theta)) with w the sine
    power of the divergence form, scaled by the accumulated inverse
    squared-sine prefactor.
    """
    h = LAP_STEP if step is None else float(step)
    if h <= 0.0:
        raise ValueError("step must be positive")
    ang = point.array
    _check_guard(ang, pole_guard)
    n = len(ang) + 1
    f0 = f(ang)
    if not math.isfinite(f0):
        raise ValueError("non-finite field value at the evaluation point")
    total = 0.0
    pref2 = 1.0
    for j in range(len(ang)):
        power = n - 2 - j  # sine exponent of the divergence form, 0 for the last angle
        up = ang.copy()
        dn = ang.copy()
        up[j] += h
        dn[j] -= h
        fu, fd = f(up), f(dn)
        if not (math.isfinite(fu) and math.isfinite(fd)):
            raise ValueError(f"non-finite field value near angle index {j}")
        if power == 0:
            flux = fu - 2.0 * f0 + fd
        else:
            w0 = math.sin(ang[j]) ** power
            wp = math.sin(ang[j] + 0.5 * h) ** power
            wm = math.sin(ang[j] - 0.5 * h) ** power
            flux = (wp * (fu - f0) - wm * (f0 - fd)) / w0
        total += pref2 * flux / (h * h)
        if j < len(ang) - 1:
            pref2 /= math.sin(ang[j]) ** 2
    return total


# --------------------------------------------------------------------------
# identity verification
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class IdentityReport:
    identity: str
    samples: int
    max_abs_deviation: float
    tolerance: float
    passed: bool
    excluded: int
    note: str = ""


def _accept_surface_uniform(rng: np.random.Generator, n: int) -> np.ndarray:
    """One surface-uniform draw: polar angles by rejection, last uniform."""
    ang = np.empty(n - 1)
    for j in range(n - 2):
        power = n - 2 - j  # density of angle j is sin^power
        while True:
            a = rng.uniform(0.0, math.pi)
            if rng.uniform() <= math.sin(a) ** power:
                ang[j] = a
                break
    ang[n - 2] = rng.uniform(0.0, 2.0 * math.pi)
    return ang


def sample_points(n: int, count: int, seed: int,
                  pole_guard: float = DEFAULT_POLE_GUARD,
                  prefactor_guard: float = 0.04,
                  distance_guard: float = 0.05):
    """Surface-uniform sample pairs (point, pole) with FD-safety guards.

    Redraws (counted as excluded) any pair where a chart sine is below
    ``pole_guard``, an accumulated sine product underlying a Laplacian
    prefactor is below ``prefactor_guard``, or sin of the mutual distance
    is below ``distance_guard``; FD stencils lose the criterion tolerances
    outside those margins.
    """
    rng = np.random.default_rng(seed)
    points: list[tuple[SphericalPoint, SphericalPoint]] = []
    excluded = 0

    def ok(ang: np.ndarray) -> bool:
        prod = 1.0
        for j in range(n - 2):
            s = math.sin(ang[j])
            if s < pole_guard:
                return False
            prod *= s
            if prod < prefactor_guard:
                return False
        return True

    while len(points) < count:
        a = _accept_surface_uniform(rng, n)
        b = _accept_surface_uniform(rng, n)
        if not (ok(a) and ok(b)):
            excluded += 1
            continue
        pa = SphericalPoint(tuple(a), n)
        pb = SphericalPoint(tuple(b), n)
        if math.sin(geodesic_distance(pa, pb)) < distance_guard:
            excluded += 1
            continue
        points.append((pa, pb))
    return points, excluded


def verify_identities(n: int, samples: int = 200, tol: float = 1e-6,
                      seed: int = 42) -> list[IdentityReport]:
    """Check the differential identities of the coordinate functions, the
    pairwise inner product and the geodesic distance at random points.

    Gradient-level identities are held to ``tol``, Laplacian-level ones to
    ``10 * tol``, and the distance Laplacian to ``100 * tol * (1 + |cot d|)``
    per sample, reflecting the extra rounding amplification of second
    differences.  For n = 2 the distance-Laplacian identity degenerates to
    the trivial statement that the second derivative vanishes and is
    reported as passed without sampling.
    """
    if n < 2:
        raise ValueError("ambient dimension must be >= 2")
    if samples < 1:
        raise ValueError("samples must be >= 1")
    pairs, excluded = sample_points(n, samples, seed)
    lap_tol = 10.0 * tol

    dev = {
        "coordinate_pythagoras": 0.0,
        "coordinate_cross": 0.0,
        "coordinate_eigenfunction": 0.0,
        "inner_gradient": 0.0,
        "inner_eigenfunction": 0.0,
        "distance_gradient": 0.0,
        "distance_laplacian": 0.0,
    }
    dist_lap_ok = True

    for pt, pole in pairs:
        x = embed(pt)
        grads = []
        for m in range(1, n + 1):
            fm = coordinate_field(m, n)
            gm = surface_gradient_fd(fm, pt)
            grads.append(gm)
            dev["coordinate_pythagoras"] = max(
                dev["coordinate_pythagoras"],
                abs(x[m - 1] ** 2 + float(np.dot(gm, gm)) - 1.0))
            lap = laplace_beltrami_fd(fm, pt)
            dev["coordinate_eigenfunction"] = max(
                dev["coordinate_eigenfunction"], abs(lap + (n - 1) * x[m - 1]))
        for l in range(n):
            for m in range(l + 1, n):
                cross = x[l] * x[m] + float(np.dot(grads[l], grads[m]))
                dev["coordinate_cross"] = max(dev["coordinate_cross"], abs(cross))

        lam_f = inner_field(pole)
        lam = lam_f(pt.array)
        glam = surface_gradient_fd(lam_f, pt)
        dev["inner_gradient"] = max(
            dev["inner_gradient"],
            abs(float(np.dot(glam, glam)) - (1.0 - lam * lam)))
        dev["inner_eigenfunction"] = max(
            dev["inner_eigenfunction"],
            abs(laplace_beltrami_fd(lam_f, pt) + (n - 1) * lam))

        d_f = distance_field(pole)
        d = d_f(pt.array)
        gd = surface_gradient_fd(d_f, pt)
        dev["distance_gradient"] = max(
            dev["distance_gradient"],
            abs(float(np.linalg.norm(gd)) - 1.0))
        if n > 2:
            cot = math.cos(d) / math.sin(d)
            resid = abs(laplace_beltrami_fd(d_f, pt) - (n - 2) * cot)
            scaled = resid / (1.0 + abs(cot))
            dev["distance_laplacian"] = max(dev["distance_laplacian"], scaled)
            if resid > 100.0 * tol * (1.0 + abs(cot)):
                dist_lap_ok = False

    reports = []
    for key in ("coordinate_pythagoras", "coordinate_cross", "inner_gradient",
                "distance_gradient"):
        reports.append(IdentityReport(key, samples, float(dev[key]), tol,
                                      bool(dev[key] <= tol), excluded))
    for key in ("coordinate_eigenfunction", "inner_eigenfunction"):
        reports.append(IdentityReport(key, samples, float(dev[key]), lap_tol,
                                      bool(dev[key] <= lap_tol), excluded))
    if n == 2:
        reports.append(IdentityReport(
            "distance_laplacian", 0, 0.0, 100.0 * tol, True, 0,
            note="n = 2: coefficient n - 2 = 0 makes this the trivial "
                 "statement that the distance has vanishing Laplacian; "
                 "skipped"))
    else:
        reports.append(IdentityReport(
            "distance_laplacian", samples, float(dev["distance_laplacian"]),
            100.0 * tol, bool(dist_lap_ok), excluded,
            note="deviation and tolerance scaled by 1 + |cot d| per sample"))
    return reports
