#!/usr/bin/env python3
"""Residuals of the distance-Laplacian identity as the FD step varies.

Small experiment behind the default step choices: sweeps the flux-form step
across four decades at a fixed point and prints the residual, showing the
truncation/rounding trade-off floor.
"""

from __future__ import annotations

import math

from hardy_sphere.geometry import (
    SphericalPoint,
    distance_field,
    geodesic_distance,
    laplace_beltrami_fd,
)


def run() -> None:
    pt = SphericalPoint((1.15, 0.85, 2.6), 4)
    pole = SphericalPoint((1.9, 1.4, 0.6), 4)
    d = geodesic_distance(pt, pole)
    want = 2.0 * math.cos(d) / math.sin(d)
    f = distance_field(pole)
    print(f"{'step':>12}  {'residual':>12}")
    h = 1e-1
    while h > 1e-5:
        resid = abs(laplace_beltrami_fd(f, pt, step=h) - want)
        print(f"{h:12.2e}  {resid:12.3e}")
        h /= 2.0


if __name__ == "__main__":
    run()
