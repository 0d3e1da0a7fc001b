"""Singular front solution, jump initial data, and the smooth eps-family.

The singular solution carries a bounded jump in the velocity u and a
bounded jump plus a traveling point mass e(t) * delta(x - phi(t)) in the
stress sigma.  The smooth ansatz regularizes both fields with a shared
plateau step profile, adds the sqrt(eps)-scaled correction p(t) * R to
the velocity, and replaces the point mass by the regularized delta.  The
velocity is complex-valued throughout so that trajectories with negative
delta amplitude (imaginary p) need no special casing; the stress stays
real.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .kernels import (
    MollifierKernel,
    StepProfile,
    eval_correction,
    eval_correction_dx,
    eval_delta_reg,
    eval_delta_reg_dx,
    make_kernel,
    plateau_constant,
)
from .pairing import Piecewise, TestFunction, pair

__all__ = [
    "DegenerateDataError",
    "RiemannJumpData",
    "SingularSolution",
    "SmoothAnsatz",
    "singular_limit_pairing",
]


class DegenerateDataError(ValueError):
    """Jump data on which the front dynamics is undefined (u1 = 0)."""


@dataclass(frozen=True)
class RiemannJumpData:
    """Constant background plus a single jump at x = 0.

    Convention: jumps are left minus right, so the left states are
    (u0 + u1, sigma0 + sigma1) and the right states (u0, sigma0).  ``e0``
    is the initial amplitude of the point mass in the stress, ``k`` the
    system parameter (k = 0 selects the degenerate system).
    """

    u0: float
    u1: float
    sigma0: float
    sigma1: float
    e0: float = 0.0
    k: float = 0.0

    def __post_init__(self):
        if self.k < 0.0:
            raise ValueError("k must be nonnegative")

    @property
    def left_state(self) -> tuple[float, float]:
        return (self.u0 + self.u1, self.sigma0 + self.sigma1)

    @property
    def right_state(self) -> tuple[float, float]:
        return (self.u0, self.sigma0)

    def plateau(self) -> float:
        if self.u1 == 0.0:
            raise DegenerateDataError("plateau level undefined for u1 = 0")
        return plateau_constant(self.u1, self.sigma1)


def _indicator_left(threshold: float) -> Piecewise:
    return Piecewise(lambda x: np.ones_like(x), -math.inf, threshold)


_FULL_LINE = Piecewise(lambda x: np.ones_like(x), -math.inf, math.inf)


@dataclass(frozen=True)
class SingularSolution:
    """Distributional front solution determined by a trajectory.

    ``front`` must expose ``phi(t)`` and ``e(t)``.  Pairings against test
    functions are assembled from three primitives: the full integral of
    the test function, its integral left of the front, and its value at
    the front.
    """

    data: RiemannJumpData
    front: "object"

    def u_pairing(self, t: float, phi_test: TestFunction) -> float:
        full = pair(_FULL_LINE, phi_test)
        left = pair(_indicator_left(float(self.front.phi(t))), phi_test)
        return float(self.data.u0 * full + self.data.u1 * left)

    def sigma_pairing(self, t: float, phi_test: TestFunction) -> float:
        full = pair(_FULL_LINE, phi_test)
        front = float(self.front.phi(t))
        left = pair(_indicator_left(front), phi_test)
        atom = float(self.front.e(t)) * float(phi_test.value(front))
        return float(self.data.sigma0 * full + self.data.sigma1 * left + atom)


def singular_limit_pairing(solution: SingularSolution, t: float,
                           phi_test: TestFunction) -> tuple[float, float]:
    """Pair both components of the singular solution with a test function."""
    if t < 0.0:
        raise ValueError("t must be nonnegative")
    return (solution.u_pairing(t, phi_test), solution.sigma_pairing(t, phi_test))


@dataclass(frozen=True)
class SmoothAnsatz:
    """Smooth eps-family regularizing the singular front solution.

    ``front`` supplies the trajectory: attributes ``phi_dot`` and
    ``e_rate`` plus accessors ``phi(t)``, ``e(t)``, ``p(t)`` and
    ``p_dot(t)``.  The velocity and stress share one step profile; the
    plateau level defaults to the value pinned by the jump data and can
    be overridden to study the cancellation mechanism it provides.
    """

    data: RiemannJumpData
    front: "object"
    kernel: MollifierKernel | None = None
    c: float | None = None

    def __post_init__(self):
        if self.kernel is None:
            object.__setattr__(self, "kernel", make_kernel())

    @property
    def c_effective(self) -> float:
        return self.data.plateau() if self.c is None else self.c

    def step(self, eps: float) -> StepProfile:
        return StepProfile(self.c_effective, eps, self.kernel)

    def singular(self) -> SingularSolution:
        return SingularSolution(self.data, self.front)

    def eval_fields(self, x, t: float, eps: float):
        """Pointwise (u, sigma) at fixed time; u is complex."""
        d = self.data
        prof = self.step(eps)
        phi = self.front.phi(t)
        x = np.asarray(x, dtype=float)
        scalar = x.ndim == 0
        step_val = prof.value(phi - x)
        u = (d.u0 + d.u1 * np.asarray(step_val)
             + complex(self.front.p(t)) * np.asarray(eval_correction(x - phi, eps, self.kernel)))
        sigma = (d.sigma0 + d.sigma1 * np.asarray(step_val)
                 + self.front.e(t) * np.asarray(eval_delta_reg(x - phi, eps, self.kernel)))
        u = np.asarray(u, dtype=complex)
        if scalar:
            return complex(u[()]), float(np.asarray(sigma)[()])
        return u, sigma

    def eval_derivatives(self, x, t: float, eps: float):
        """Exact chain-rule derivatives (du/dt, du/dx, dsigma/dt, dsigma/dx)."""
        d = self.data
        prof = self.step(eps)
        phi = self.front.phi(t)
        phi_dot = self.front.phi_dot
        e = self.front.e(t)
        e_dot = self.front.e_rate
        p = complex(self.front.p(t))
        p_dot = complex(self.front.p_dot(t))
        x = np.asarray(x, dtype=float)
        scalar = x.ndim == 0
        h_prime = np.asarray(prof.deriv(phi - x))
        r_val = np.asarray(eval_correction(x - phi, eps, self.kernel))
        r_prime = np.asarray(eval_correction_dx(x - phi, eps, self.kernel))
        d_val = np.asarray(eval_delta_reg(x - phi, eps, self.kernel))
        d_prime = np.asarray(eval_delta_reg_dx(x - phi, eps, self.kernel))
        u_t = d.u1 * phi_dot * h_prime + p_dot * r_val - p * phi_dot * r_prime
        u_x = -d.u1 * h_prime + p * r_prime
        s_t = d.sigma1 * phi_dot * h_prime + e_dot * d_val - e * phi_dot * d_prime
        s_x = -d.sigma1 * h_prime + e * d_prime
        u_t = np.asarray(u_t, dtype=complex)
        u_x = np.asarray(u_x, dtype=complex)
        if scalar:
            return (complex(u_t[()]), complex(u_x[()]),
                    float(np.asarray(s_t)[()]), float(np.asarray(s_x)[()]))
        return u_t, u_x, np.asarray(s_t, dtype=float), np.asarray(s_x, dtype=float)

    def breakpoints(self, t: float, eps: float) -> tuple[float, ...]:
        """Edges of the regularization bands around the front."""
        phi = self.front.phi(t)
        return tuple(phi + s * eps for s in (-4.0, -3.0, -1.0, 1.0, 3.0, 4.0))

    def u_integrand(self, t: float, eps: float) -> Piecewise:
        return Piecewise(lambda x: self.eval_fields(x, t, eps)[0],
                         -math.inf, math.inf, self.breakpoints(t, eps))

    def sigma_integrand(self, t: float, eps: float) -> Piecewise:
        return Piecewise(lambda x: self.eval_fields(x, t, eps)[1],
                         -math.inf, math.inf, self.breakpoints(t, eps))

    def snapshot_rows(self, t: float, eps: float, x_grid) -> list[tuple[float, float, float, float]]:
        """Rows (x, Re u, Im u, sigma) on a grid, ready for CSV export."""
        xs = np.asarray(x_grid, dtype=float)
        u, sigma = self.eval_fields(xs, t, eps)
        return [(float(x), float(np.real(uu)), float(np.imag(uu)), float(ss))
                for x, uu, ss in zip(xs, u, sigma)]
