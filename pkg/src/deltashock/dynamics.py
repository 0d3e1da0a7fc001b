"""Closed-form singular-front dynamics and jump-relation checks.

The front position and point-mass amplitude obey constant-rate ODEs, so
the trajectories are exact linear functions of time:

    phi(t) = (u0 + u1/2 - sigma1/u1) * t
    e(t)   = (sigma1^2/u1 - k^2 u1) * t + e0

and the correction amplitude solves p(t)^2 * omega0 / 2 = e(t) on the
principal branch (real and nonnegative while e >= 0, purely imaginary
with nonnegative imaginary part while e < 0).  A numerical ODE
integration exists only as a test oracle.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .ansatz import DegenerateDataError, RiemannJumpData, SmoothAnsatz
from .kernels import MollifierKernel, make_kernel
from .pairing import Piecewise, TestFunction, extrapolate_limit, pair

__all__ = [
    "AdmissibilityError",
    "NotApplicableError",
    "FrontTrajectory",
    "LinearTrajectory",
    "front_speed",
    "e_rate",
    "solve_front",
    "Admissibility",
    "overcompressivity",
    "volpert_relations",
    "volpert_scan",
    "volpert_product_pairing",
    "trajectory_rows",
]

_SHOCK_TOL = 1e-12


class AdmissibilityError(ValueError):
    """Raised when jump data violates the overcompressivity window."""


class NotApplicableError(ValueError):
    """Raised when an operation is queried outside its regime."""


def front_speed(data: RiemannJumpData) -> float:
    """Front speed (mean of the velocity states minus sigma1/u1).

    Shared by the k > 0 and k = 0 systems.
    """
    if data.u1 == 0.0:
        raise DegenerateDataError("front speed undefined for u1 = 0")
    return data.u0 + 0.5 * data.u1 - data.sigma1 / data.u1


def e_rate(data: RiemannJumpData) -> float:
    """Growth rate of the point-mass amplitude: sigma1^2/u1 - k^2 u1."""
    if data.u1 == 0.0:
        raise DegenerateDataError("amplitude rate undefined for u1 = 0")
    return data.sigma1**2 / data.u1 - data.k**2 * data.u1


def _principal_p(e_val: float, omega0: float) -> complex:
    return cmath.sqrt(complex(2.0 * e_val / omega0, 0.0))


@dataclass(frozen=True)
class FrontTrajectory:
    """Exactly linear front trajectory with the solved correction amplitude."""

    phi_dot: float
    e_rate: float
    e0: float
    omega0: float

    def phi(self, t):
        return self.phi_dot * np.asarray(t, dtype=float)

    def e(self, t):
        return self.e0 + self.e_rate * np.asarray(t, dtype=float)

    def p(self, t) -> complex:
        e_val = self.e(t)
        if np.ndim(e_val) == 0:
            return _principal_p(float(e_val), self.omega0)
        return np.sqrt(np.asarray(2.0 * e_val / self.omega0, dtype=complex))

    def p_dot(self, t) -> complex:
        p_val = self.p(t)
        if p_val == 0:
            if self.e_rate == 0.0:
                return 0.0 + 0.0j
            raise ZeroDivisionError(
                "p_dot is singular where e(t) crosses zero with nonzero rate")
        return self.e_rate / (self.omega0 * p_val)

    def defect(self, t) -> complex:
        """Residual of the defining relation p^2 omega0 / 2 - e (should be 0)."""
        p_val = self.p(t)
        return 0.5 * p_val * p_val * self.omega0 - self.e(t)


@dataclass(frozen=True)
class LinearTrajectory:
    """Trajectory with freely chosen coefficients (for derivation replay).

    Unlike :class:`FrontTrajectory`, ``p`` is an unconstrained linear
    function of time, so the defining relation between p and e can be
    violated on purpose.
    """

    phi_dot: float
    e0: float = 0.0
    e_rate: float = 0.0
    p0: complex = 0.0
    p_rate: complex = 0.0

    def phi(self, t):
        return self.phi_dot * np.asarray(t, dtype=float)

    def e(self, t):
        return self.e0 + self.e_rate * np.asarray(t, dtype=float)

    def p(self, t) -> complex:
        return self.p0 + self.p_rate * complex(t)

    def p_dot(self, t) -> complex:
        return complex(self.p_rate)


def solve_front(data: RiemannJumpData, omega0: float | None = None) -> FrontTrajectory:
    """Closed-form trajectory through phi(0) = 0, e(0) = e0."""
    if omega0 is None:
        omega0 = make_kernel().omega0
    return FrontTrajectory(front_speed(data), e_rate(data), data.e0, float(omega0))


_MARGIN_LABELS = ("u1 - 2k", "sigma1/u1 + (u1/2 - k)", "(u1/2 - k) - sigma1/u1")


@dataclass(frozen=True)
class Admissibility:
    """Overcompressivity verdict with the three signed slack quantities."""

    admissible: bool
    margins: tuple[float, float, float]
    labels: tuple[str, str, str] = _MARGIN_LABELS

    def violated(self) -> list[str]:
        return [f"{lab} = {m:.6g}" for lab, m in zip(self.labels, self.margins)
                if not m > 0.0]


def overcompressivity(data: RiemannJumpData) -> Admissibility:
    """Check that all characteristics on both sides run into the front.

    For k > 0 this is u1 > 2k together with |sigma1/u1| < u1/2 - k; the
    k = 0 conditions are the same formulas with k set to zero.  All
    inequalities are strict, so boundary data is inadmissible.
    """
    u1, s1, k = data.u1, data.sigma1, data.k
    m1 = u1 - 2.0 * k
    if u1 == 0.0:
        return Admissibility(False, (m1, math.nan, math.nan))
    half_window = 0.5 * u1 - k
    ratio = s1 / u1
    m2 = ratio + half_window
    m3 = half_window - ratio
    ok = (m1 > 0.0) and (m2 > 0.0) and (m3 > 0.0)
    return Admissibility(bool(ok), (m1, m2, m3))


def volpert_relations(u_left: float, u_right: float, sigma_left: float,
                      sigma_right: float, s: float) -> tuple[float, float]:
    """Residuals of the two averaged jump relations at candidate speed s.

    The second residual with a nonzero stress jump forces s to the mean
    velocity, after which the first forces the stress jump to vanish:
    no bounded-variation solution carries a stress jump when k = 0.
    """
    du = u_left - u_right
    dsigma = sigma_left - sigma_right
    r1 = -s * du + 0.5 * (u_left**2 - u_right**2) - dsigma
    r2 = -s * dsigma + 0.5 * (u_left + u_right) * dsigma
    return (r1, r2)


def volpert_scan(u_left: float, u_right: float, sigma_left: float,
                 sigma_right: float, s_min: float = -10.0, s_max: float = 10.0,
                 n: int = 2001) -> tuple[float, float]:
    """Minimum over a speed grid of max(|r1|, |r2|), with its argmin."""
    ss = np.linspace(s_min, s_max, n)
    du = u_left - u_right
    dsigma = sigma_left - sigma_right
    r1 = np.abs(-ss * du + 0.5 * (u_left**2 - u_right**2) - dsigma)
    r2 = np.abs(-ss * dsigma + 0.5 * (u_left + u_right) * dsigma)
    worst = np.maximum(r1, r2)
    i = int(np.argmin(worst))
    return float(worst[i]), float(ss[i])


def volpert_product_pairing(data: RiemannJumpData, t: float,
                            phi_test: TestFunction | None = None,
                            kernel: MollifierKernel | None = None,
                            eps_grid=None) -> float:
    """Measured point-mass coefficient of u * dsigma/dx in the shock case.

    Only defined when the point mass is absent for all time (e0 = 0 and
    zero amplitude rate); the extrapolated coefficient then realizes the
    averaged product -sigma1 (u0 + u1/2).
    """
    from .pairing import default_eps_grid

    kernel = kernel or make_kernel()
    eps_grid = tuple(eps_grid) if eps_grid is not None else default_eps_grid()
    rate = e_rate(data)
    scale = max(abs(data.sigma1**2 / data.u1), abs(data.k**2 * data.u1), 1.0)
    if abs(data.e0) > 1e-12 or abs(rate) > 1e-12 * scale:
        raise NotApplicableError(
            "the averaged-product identity is only claimed for pure shocks "
            f"(e0 = {data.e0}, e rate = {rate})")
    traj = solve_front(data, kernel.omega0)
    ansatz = SmoothAnsatz(data, traj, kernel)
    front = float(traj.phi(t))
    phi_test = phi_test or TestFunction(front, 1.0)
    weight = float(phi_test.value(front))
    if weight == 0.0:
        raise ValueError("test function must not vanish at the front")

    def integrand(eps):
        def fn(x):
            u, _ = ansatz.eval_fields(x, t, eps)
            _, _, _, s_x = ansatz.eval_derivatives(x, t, eps)
            return np.real(u) * s_x
        return Piecewise(fn, front - 4 * eps, front + 4 * eps,
                         ansatz.breakpoints(t, eps)[1:-1])

    values = [pair(integrand(eps), phi_test) for eps in eps_grid]
    return float(extrapolate_limit(eps_grid, values)) / weight


def trajectory_rows(traj, t_grid) -> list[tuple[float, float, float, float, float]]:
    """Rows (t, phi, e, Re p, Im p) for table export."""
    rows = []
    for t in np.asarray(t_grid, dtype=float):
        p_val = complex(traj.p(float(t)))
        rows.append((float(t), float(traj.phi(float(t))), float(traj.e(float(t))),
                     p_val.real, p_val.imag))
    return rows
