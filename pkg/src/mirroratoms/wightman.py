"""Numerical Fourier transform of the boundary (image) part of the vacuum
two-point function on a uniformly accelerated worldline.

This is a validation oracle for the closed-form spectra in ``correlations``:
the mirror-image contribution to the same-atom spectrum must come out as

    -(lam/4pi) (coth(pi*lam/a) + 1) f(lam, z).

On the worldline the image kernel depends only on the proper-time lag u,

    W_img(u) = (1/4pi^2) / [ (4/a^2) sinh^2(a u / 2) - 4 z^2 ],

with light-cone poles at u = +/- (2/a) asinh(a z). The standard prescription
shifts the lag into the lower half plane, u -> u - i*eps, which moves the
poles off the integration path; the transform is evaluated for a decreasing
schedule of regulators and Richardson-extrapolated to eps -> 0.
"""

from __future__ import annotations

import cmath
import math
from typing import Sequence

from scipy.integrate import quad

from .correlations import SystemParams
from .errors import ConvergenceError, DomainError

# exp(-a*T) < 1e-10 makes the truncated tail negligible at the 1e-2 target
_TAIL_LOG = math.log(1e10) + 5.0
_DEFAULT_EPS_STEPS = (0.1, 0.05, 0.025, 0.0125)


def default_epsilon_schedule(accel: float) -> list[float]:
    """Regulator schedule {0.1, 0.05, 0.025, 0.0125}/a."""
    if accel <= 0.0:
        raise DomainError("epsilon schedule needs accel > 0")
    return [e / accel for e in _DEFAULT_EPS_STEPS]


def image_wightman_ft_oracle(lam: float, params: SystemParams,
                             epsilon_schedule: Sequence[float] | None = None,
                             *, window: float | None = None,
                             tol: float = 1e-2,
                             quad_limit: int = 400) -> float:
    """Boundary correction to the same-atom spectrum at frequency lam.

    Integrates exp(i*lam*u) * W_img(u - i*eps) over |u| <= window for each
    regulator in the schedule (adaptive quadrature with a breakpoint at the
    light-cone peak), then applies two-point Richardson steps in eps. Raises
    ConvergenceError when successive extrapolants differ by more than tol
    (relative). The window defaults to the proper-time lag at which the
    integrand's exp(-a|u|) envelope has decayed below 1e-10.
    """
    a, z = params.accel, params.z
    if a <= 0.0:
        raise DomainError("the truncation window rule requires accel > 0")
    if lam == 0.0 or not math.isfinite(lam):
        raise DomainError("frequency must be nonzero")
    if epsilon_schedule is None:
        epsilon_schedule = default_epsilon_schedule(a)
    eps = list(epsilon_schedule)
    if len(eps) < 3:
        raise DomainError("epsilon schedule needs at least 3 entries")
    if any(e <= 0.0 for e in eps) or any(e2 >= e1 for e1, e2 in zip(eps, eps[1:])):
        raise DomainError("epsilon schedule must be strictly decreasing and positive")
    T = window if window is not None else _TAIL_LOG / a

    u_peak = (2.0 / a) * math.asinh(a * z)
    pref = 1.0 / (4.0 * math.pi ** 2)
    four_z2 = 4.0 * z * z
    inv_a2 = 4.0 / (a * a)

    def transform(e: float) -> float:
        def integrand(u: float) -> float:
            w = pref / (inv_a2 * cmath.sinh(0.5 * a * complex(u, -e)) ** 2 - four_z2)
            # Re W is even and Im W odd in u, so the full transform is real
            return math.cos(lam * u) * w.real - math.sin(lam * u) * w.imag

        points = [u_peak] if u_peak < T else None
        val, _ = quad(integrand, 0.0, T, points=points, limit=quad_limit,
                      epsabs=1e-13, epsrel=1e-11)
        return 2.0 * val

    values = [transform(e) for e in eps]
    extrapolants = [2.0 * values[i + 1] - values[i] for i in range(len(values) - 1)]
    last = extrapolants[-1]
    diff = abs(extrapolants[-1] - extrapolants[-2])
    if diff > tol * max(abs(last), 1e-12):
        raise ConvergenceError(
            f"Richardson extrapolants not converged: last diff {diff:.3e} "
            f"against value {last:.3e} (tol {tol:g})")
    return last
