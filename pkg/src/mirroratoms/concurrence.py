"""Concurrence of the two-atom state, entanglement-generation rate, and the
maximum of concurrence over an evolution.

For X-form states the concurrence reduces to two closed-form candidates
(k1 from the single-excitation block, k2 from the ground/doubly-excited
block); a general 4x4 spin-flip construction is kept as a validation oracle.
"""

from __future__ import annotations

import math
import warnings

import numpy as np

from .correlations import CoefficientSet, SystemParams, compute_coefficients
from .errors import DomainError, InvariantError
from .evolution import (XState, _PopulationPropagator, default_horizon,
                        prepare_initial)

_INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0

# coupled-basis kets (columns) written in the product basis |00>,|01>,|10>,|11>
_SQ = 1.0 / math.sqrt(2.0)
_COUPLED_TO_PRODUCT = np.array([
    [1.0, 0.0, 0.0, 0.0],
    [0.0, -_SQ, _SQ, 0.0],
    [0.0, _SQ, _SQ, 0.0],
    [0.0, 0.0, 0.0, 1.0],
])

_SPIN_FLIP = np.array([
    [0.0, 0.0, 0.0, -1.0],
    [0.0, 0.0, 1.0, 0.0],
    [0.0, 1.0, 0.0, 0.0],
    [-1.0, 0.0, 0.0, 0.0],
])


class ConcurrenceReport:
    """Concurrence candidates k1, k2 and the value max{0, k1, k2} in [0, 1]."""

    __slots__ = ("k1", "k2", "value")

    def __init__(self, k1: float, k2: float):
        self.k1 = k1
        self.k2 = k2
        self.value = min(max(0.0, k1, k2), 1.0)

    def __repr__(self):
        return f"ConcurrenceReport(k1={self.k1:.6g}, k2={self.k2:.6g}, value={self.value:.6g})"


class GenerationReport:
    """Initial entanglement-generation rate (units of gamma0) and whether
    entanglement is generated near tau = 0 (rate > 0)."""

    __slots__ = ("rate", "generates")

    def __init__(self, rate: float):
        self.rate = rate
        self.generates = rate > 0.0

    def __repr__(self):
        return f"GenerationReport(rate={self.rate:.6g}, generates={self.generates})"


def concurrence_x(state: XState) -> ConcurrenceReport:
    """Closed-form concurrence of an X state.

    k1 = sqrt((p_aa - p_ss)^2 + 4 Im(c_as)^2) - 2 sqrt(p_gg p_ee)
    k2 = 2 |c_ge| - sqrt((p_aa + p_ss)^2 - 4 Re(c_as)^2)
    """
    diff2 = (state.p_aa - state.p_ss) ** 2 + 4.0 * state.c_as.imag ** 2
    k1 = math.sqrt(diff2) - 2.0 * math.sqrt(max(state.p_gg * state.p_ee, 0.0))
    rad2 = (state.p_aa + state.p_ss) ** 2 - 4.0 * state.c_as.real ** 2
    # a coherence excess of eps within the state's own tolerance can push the
    # radicand down to -4*eps, so the breach threshold scales with it
    if rad2 < -4.0 * state.tol:
        raise InvariantError(f"negative k2 radicand {rad2:.3e}; upstream invariant breach")
    k2 = 2.0 * abs(state.c_ge) - math.sqrt(max(rad2, 0.0))
    return ConcurrenceReport(k1, k2)


def to_product_matrix(state: XState) -> np.ndarray:
    """X state as a full 4x4 density matrix in the product basis |00>,|01>,|10>,|11>."""
    rho_c = np.array([
        [state.p_gg, 0.0, 0.0, state.c_ge],
        [0.0, state.p_aa, state.c_as, 0.0],
        [0.0, np.conj(state.c_as), state.p_ss, 0.0],
        [np.conj(state.c_ge), 0.0, 0.0, state.p_ee],
    ], dtype=complex)
    u = _COUPLED_TO_PRODUCT
    return u @ rho_c @ u.T


def concurrence_general(rho: np.ndarray) -> float:
    """Spin-flip concurrence of an arbitrary two-qubit density matrix
    (product basis): max{0, l1 - l2 - l3 - l4} with l_i the decreasing
    square roots of the eigenvalues of rho * (sy x sy) rho^* (sy x sy)."""
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (4, 4):
        raise DomainError("density matrix must be 4x4")
    if np.max(np.abs(rho - rho.conj().T)) > 1e-10:
        raise DomainError("density matrix must be Hermitian")
    if abs(np.trace(rho).real - 1.0) > 1e-10:
        raise DomainError("density matrix must have unit trace")
    w, u = np.linalg.eigh(rho)
    if w.min() < -1e-10:
        raise DomainError("density matrix must be positive semidefinite")
    # the square roots of eig(rho * flipped) equal the singular values of
    # sqrt(rho) Y sqrt(rho)^*, which avoids losing half the precision to
    # the square root of near-zero eigenvalues
    sqrt_rho = (u * np.sqrt(np.clip(w, 0.0, None))) @ u.conj().T
    roots = np.linalg.svd(sqrt_rho @ _SPIN_FLIP @ sqrt_rho.conj(),
                          compute_uv=False)
    return max(0.0, roots[0] - roots[1] - roots[2] - roots[3])


def generation_rate(coeffs: CoefficientSet) -> GenerationReport:
    """Initial growth rate of the concurrence from the separable '10' state:
    rate = 4 sqrt(a2^2 + d^2) - 4 sqrt(a1^2 - b1^2)."""
    disc = coeffs.a1 ** 2 - coeffs.b1 ** 2
    if disc < -1e-12 * max(coeffs.a1 ** 2, coeffs.b1 ** 2, 1e-300):
        raise DomainError(f"a1^2 - b1^2 = {disc:.3e} < 0; invalid coefficient set")
    rate = 4.0 * math.hypot(coeffs.a2, coeffs.d) - 4.0 * math.sqrt(max(disc, 0.0))
    return GenerationReport(rate)


def k1_closed(tau: float, populations, coeffs: CoefficientSet) -> float:
    """Analytic k1 for the '10' initial state, where the coherence is known:
    sqrt((p_aa - p_ss)^2 + sin^2(4 d tau) exp(-8 a1 tau)) - 2 sqrt(p_gg p_ee).

    `populations` is the tuple (p_aa, p_ss, p_gg, p_ee) at time tau.
    """
    p_aa, p_ss, p_gg, p_ee = populations
    osc = math.sin(4.0 * coeffs.d * tau) ** 2 * math.exp(-8.0 * coeffs.a1 * tau)
    return math.sqrt((p_aa - p_ss) ** 2 + osc) - 2.0 * math.sqrt(max(p_gg * p_ee, 0.0))


def _concurrence_on_grid(prop: _PopulationPropagator, initial: XState,
                         coeffs: CoefficientSet, taus: np.ndarray) -> np.ndarray:
    """Vectorized concurrence along a closed-form trajectory (no state objects)."""
    pops = prop.propagate(initial.populations, taus)
    c_as = initial.c_as * np.exp(-4.0 * (coeffs.a1 + 1j * coeffs.d) * taus)
    c_ge = np.abs(initial.c_ge) * np.exp(-4.0 * coeffs.a1 * taus)
    k1 = (np.sqrt((pops[2] - pops[3]) ** 2 + 4.0 * c_as.imag ** 2)
          - 2.0 * np.sqrt(np.clip(pops[0] * pops[1], 0.0, None)))
    k2 = 2.0 * c_ge - np.sqrt(np.clip((pops[2] + pops[3]) ** 2 - 4.0 * c_as.real ** 2,
                                      0.0, None))
    return np.clip(np.maximum(k1, k2), 0.0, 1.0)


def _golden_max(fun, lo: float, hi: float, tol: float):
    """Golden-section maximization on [lo, hi] down to bracket width tol."""
    a, b = lo, hi
    c = b - _INV_PHI * (b - a)
    d = a + _INV_PHI * (b - a)
    fc, fd = fun(c), fun(d)
    while b - a > tol:
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - _INV_PHI * (b - a)
            fc = fun(c)
        else:
            a, c, fc = c, d, fd
            d = a + _INV_PHI * (b - a)
            fd = fun(d)
    t = 0.5 * (a + b)
    return t, fun(t)


def max_concurrence(params: SystemParams, horizon: float | None = None,
                    tol: float = 1e-8, *, coeffs: CoefficientSet | None = None,
                    initial="ten", samples_per_scale: int = 40) -> tuple[float, float]:
    """Global maximum of the concurrence over [0, horizon] for an evolution
    started from `initial` (default the separable '10' state).

    Dense grid scan (`samples_per_scale` points per oscillation/decay scale)
    followed by golden-section refinement of every local bracket; ties
    resolve to the smallest time. The default horizon outlasts both the
    coherence decay and the population relaxation. Warns when the maximum
    sits at the horizon. Returns (tau_star, c_max).
    """
    if not (1e-10 <= tol <= 1e-4):
        raise DomainError(f"tol must lie in [1e-10, 1e-4], got {tol}")
    if coeffs is None:
        coeffs = compute_coefficients(params)
    state0 = prepare_initial(initial)
    if horizon is None:
        horizon = default_horizon(coeffs, state0)
    if horizon <= 0.0 or not math.isfinite(horizon):
        raise DomainError(f"horizon must be finite and > 0, got {horizon}")

    scale = horizon
    if coeffs.d != 0.0:
        scale = min(scale, math.pi / (2.0 * abs(coeffs.d)))
    if coeffs.a1 > 0.0:
        scale = min(scale, 1.0 / (4.0 * coeffs.a1))
    n = int(math.ceil(samples_per_scale * horizon / scale))
    n = min(max(n, 100), 500_000)
    taus = np.linspace(0.0, horizon, n + 1)

    prop = _PopulationPropagator(coeffs)
    curve = _concurrence_on_grid(prop, state0, coeffs, taus)

    def point(t: float) -> float:
        return float(_concurrence_on_grid(prop, state0, coeffs, np.array([t]))[0])

    candidates = [(taus[0], curve[0])]
    interior = np.nonzero((curve[1:-1] >= curve[:-2]) & (curve[1:-1] >= curve[2:])
                          & (curve[1:-1] > 0.0))[0] + 1
    prev_i = -2
    for i in interior:
        if i == prev_i + 1:  # flat run; the first bracket already covers it
            prev_i = i
            continue
        prev_i = i
        candidates.append(_golden_max(point, taus[i - 1], taus[i + 1], tol))
    candidates.append((taus[-1], curve[-1]))

    tau_star, c_max = candidates[0]
    for t, c in candidates[1:]:
        if c > c_max:
            tau_star, c_max = t, c
    if c_max <= 1e-13:  # below the roundoff floor of the k1 formula
        return 0.0, 0.0
    if tau_star >= taus[-2] and curve[-1] >= curve[-2]:
        warnings.warn("concurrence maximum sits at the horizon; extend it",
                      RuntimeWarning)
    return float(tau_star), float(c_max)
