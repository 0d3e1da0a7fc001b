"""Classical Riemann solver for the strictly hyperbolic system (k > 0).

The wave curves in the (u, sigma) plane are straight lines of slope +-k
through the left state; shocks take the branch u < u_left, rarefactions
the branch u > u_left.  The intermediate state is the intersection of
the 1-family line through the left state with the 2-family line through
the right state.  Data inside the overcompressive window is flagged as
the singular-front regime and handled by :mod:`deltashock.dynamics`;
data admitting neither construction yields a no-solution-constructed
outcome.  The solver refuses k = 0, where no bounded-variation solution
carries a stress jump.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .ansatz import RiemannJumpData, SingularSolution
from .dynamics import (
    AdmissibilityError,
    NotApplicableError,
    overcompressivity,
    solve_front,
)
from .pairing import TestFunction

__all__ = [
    "CLASSICAL",
    "DELTA_REGIME",
    "NO_SOLUTION",
    "State",
    "Wave",
    "RiemannSolution",
    "intermediate_state",
    "classify_waves",
    "solve",
    "eval_riemann",
    "delta_regime_test",
    "k_limit_gap",
    "regime_sweep",
]

CLASSICAL = "classical"
DELTA_REGIME = "delta-shock-regime"
NO_SOLUTION = "no-solution-constructed"

# Waves with velocity strength below this are treated as absent, keeping
# the classification stable under perturbations at rounding level.
ZERO_STRENGTH_TOL = 1e-11


@dataclass(frozen=True)
class State:
    u: float
    sigma: float


@dataclass(frozen=True)
class Wave:
    """One wave of the self-similar pattern.

    Shocks carry a speed; rarefactions carry the fan interval
    (head, tail) in the similarity variable xi = x/t.
    """

    family: int
    kind: str  # "shock" | "rarefaction" | "none"
    speed: float | None = None
    fan: tuple[float, float] | None = None

    @property
    def fastest(self) -> float:
        if self.kind == "shock":
            return self.speed
        if self.kind == "rarefaction":
            return self.fan[1]
        return -math.inf if self.family == 1 else math.inf

    @property
    def slowest(self) -> float:
        if self.kind == "shock":
            return self.speed
        if self.kind == "rarefaction":
            return self.fan[0]
        return -math.inf if self.family == 1 else math.inf


@dataclass(frozen=True)
class RiemannSolution:
    left: State
    right: State
    k: float
    regime: str
    u_star: float | None = None
    sigma_star: float | None = None
    wave1: Wave | None = None
    wave2: Wave | None = None


def intermediate_state(left: State, right: State, k: float) -> tuple[float, float]:
    """Intersection of the two straight wave curves.

    As k -> 0 with a stress jump the intersection escapes to infinity,
    which is why the degenerate system has no classical solution.
    """
    if k <= 0.0:
        raise ValueError("classical wave curves need k > 0")
    u_star = 0.5 * (left.u + right.u) + (right.sigma - left.sigma) / (2.0 * k)
    sigma_star = left.sigma + k * (u_star - left.u)
    return u_star, sigma_star


def _wave1(left: State, u_star: float, k: float, tol: float) -> Wave:
    if abs(u_star - left.u) <= tol:
        return Wave(1, "none")
    if u_star > left.u:
        return Wave(1, "rarefaction", fan=(left.u - k, u_star - k))
    return Wave(1, "shock", speed=0.5 * (left.u + u_star) - k)


def _wave2(right: State, u_star: float, k: float, tol: float) -> Wave:
    if abs(right.u - u_star) <= tol:
        return Wave(2, "none")
    if right.u > u_star:
        return Wave(2, "rarefaction", fan=(u_star + k, right.u + k))
    return Wave(2, "shock", speed=0.5 * (u_star + right.u) + k)


def classify_waves(left: State, right: State, k: float,
                   strength_tol: float = ZERO_STRENGTH_TOL) -> RiemannSolution:
    """Classical two-wave construction with its ordering check."""
    u_star, sigma_star = intermediate_state(left, right, k)
    w1 = _wave1(left, u_star, k, strength_tol)
    w2 = _wave2(right, u_star, k, strength_tol)
    ordered = w1.fastest <= w2.slowest + 1e-12
    regime = CLASSICAL if ordered else NO_SOLUTION
    return RiemannSolution(left, right, float(k), regime,
                           u_star, sigma_star, w1, w2)


def delta_regime_test(left: State, right: State, k: float) -> bool:
    """True iff the data falls in the overcompressive singular-front window."""
    u1 = left.u - right.u
    if u1 == 0.0:
        return False
    data = RiemannJumpData(right.u, u1, right.sigma, left.sigma - right.sigma,
                           0.0, k)
    return overcompressivity(data).admissible


def solve(left: State, right: State, k: float) -> RiemannSolution:
    """Full regime dispatch: singular front, classical, or neither."""
    if delta_regime_test(left, right, k):
        return RiemannSolution(left, right, float(k), DELTA_REGIME)
    return classify_waves(left, right, k)


def eval_riemann(solution: RiemannSolution, x, t: float):
    """Self-similar evaluation (u, sigma) of a classical solution.

    Inside a family-1 fan u = xi + k and sigma follows the 1-family line;
    inside a family-2 fan u = xi - k and sigma follows the 2-family line.
    """
    if solution.regime != CLASSICAL:
        raise NotApplicableError(
            f"pointwise evaluation needs a classical solution, got {solution.regime}")
    if not t > 0.0:
        raise ValueError("self-similar evaluation needs t > 0")
    xi = np.asarray(x, dtype=float) / float(t)
    scalar = xi.ndim == 0
    xi = np.atleast_1d(xi)
    u = np.empty_like(xi)
    sigma = np.empty_like(xi)
    left, right = solution.left, solution.right
    w1, w2 = solution.wave1, solution.wave2
    k = solution.k
    lo1, hi1 = w1.slowest, w1.fastest
    lo2, hi2 = w2.slowest, w2.fastest
    m_left = xi < lo1
    m_fan1 = (w1.kind == "rarefaction") & (xi >= lo1) & (xi <= hi1)
    m_right = xi > hi2
    m_fan2 = (w2.kind == "rarefaction") & (xi >= lo2) & (xi <= hi2)
    m_mid = ~(m_left | m_fan1 | m_fan2 | m_right)
    u[m_left] = left.u
    sigma[m_left] = left.sigma
    u[m_right] = right.u
    sigma[m_right] = right.sigma
    u[m_mid] = solution.u_star
    sigma[m_mid] = solution.sigma_star
    if np.any(m_fan1):
        uf = xi[m_fan1] + k
        u[m_fan1] = uf
        sigma[m_fan1] = left.sigma + k * (uf - left.u)
    if np.any(m_fan2):
        uf = xi[m_fan2] - k
        u[m_fan2] = uf
        sigma[m_fan2] = solution.sigma_star - k * (uf - solution.u_star)
    if scalar:
        return float(u[0]), float(sigma[0])
    return u, sigma


def region_labels(solution: RiemannSolution, xi_grid) -> list[str]:
    """Region of each similarity coordinate, for profile exports."""
    labels = []
    w1, w2 = solution.wave1, solution.wave2
    for xi in np.asarray(xi_grid, dtype=float):
        if xi < w1.slowest:
            labels.append("left")
        elif w1.kind == "rarefaction" and xi <= w1.fastest:
            labels.append("fan-1")
        elif xi > w2.fastest:
            labels.append("right")
        elif w2.kind == "rarefaction" and xi >= w2.slowest:
            labels.append("fan-2")
        else:
            labels.append("middle")
    return labels


def _require_admissible(data: RiemannJumpData) -> None:
    adm = overcompressivity(data)
    if not adm.admissible:
        raise AdmissibilityError(
            f"data inadmissible at k={data.k:g}: violated margin(s) "
            + "; ".join(adm.violated()))


def k_limit_gap(data: RiemannJumpData, k: float, t: float,
                phi_test: TestFunction, component: str = "sigma") -> float:
    """Pairing gap between the singular solutions at parameter k and at 0.

    The front speed is k-independent, so the bounded parts cancel exactly
    and the stress gap reduces to the amplitude difference at the front:
    -k^2 u1 t phi_test(front).  The velocity gap vanishes identically.
    """
    if not k > 0.0:
        raise ValueError("k must be positive")
    data_k = replace(data, k=float(k))
    data_0 = replace(data, k=0.0)
    _require_admissible(data_k)
    _require_admissible(data_0)
    sol_k = SingularSolution(data_k, solve_front(data_k))
    sol_0 = SingularSolution(data_0, solve_front(data_0))
    if component == "sigma":
        return sol_k.sigma_pairing(t, phi_test) - sol_0.sigma_pairing(t, phi_test)
    if component == "u":
        return sol_k.u_pairing(t, phi_test) - sol_0.u_pairing(t, phi_test)
    raise ValueError(f"unknown component {component!r}")


def regime_sweep(u1_values, sigma1_values, k_values,
                 u0: float = 0.0, sigma0: float = 0.0):
    """Regime classification over a grid of jumps, for phase diagrams."""
    rows = []
    for k in k_values:
        for u1 in u1_values:
            for s1 in sigma1_values:
                left = State(u0 + u1, sigma0 + s1)
                right = State(u0, sigma0)
                if k <= 0.0:
                    regime = DELTA_REGIME if delta_regime_test(left, right, k) else NO_SOLUTION
                else:
                    regime = solve(left, right, k).regime
                rows.append((float(u1), float(s1), float(k), regime))
    return rows
