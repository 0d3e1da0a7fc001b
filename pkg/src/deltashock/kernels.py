"""Mollifier kernels and the three regularized profiles built from them.

A kernel is an even, non-negative bump with unit mass supported in (-1, 1).
From a kernel and a regularization length ``eps`` we build

* the correction profile  R(x, eps) = eps^{-1/2} * omega((x - 2 eps)/eps),
  supported exactly on (eps, 3 eps),
* the regularized delta   d(x, eps) = eps^{-1} * omega((x + 2 eps)/eps),
  supported exactly on (-3 eps, -eps), with unit mass,
* a C^1 step profile with an intermediate plateau at level ``c`` on
  |xi| <= 3 eps and smooth ramps on the bands (-4 eps, -3 eps) and
  (3 eps, 4 eps), built as affinely rescaled kernel antiderivatives.

All evaluators are pure functions of immutable parameters and accept
scalars or numpy arrays in the spatial argument.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from numpy.polynomial import chebyshev as _cheb

__all__ = [
    "QUARTIC",
    "EXPONENTIAL",
    "KERNEL_KINDS",
    "MollifierKernel",
    "canonical_kind",
    "make_kernel",
    "eval_correction",
    "eval_correction_dx",
    "eval_delta_reg",
    "eval_delta_reg_dx",
    "StepProfile",
    "step_from_data",
    "plateau_constant",
    "eval_step",
    "eval_step_dx",
]

QUARTIC = "quartic-polynomial-bump"
EXPONENTIAL = "smooth-exponential-bump"
KERNEL_KINDS = (QUARTIC, EXPONENTIAL)

_ALIASES = {
    QUARTIC: QUARTIC,
    EXPONENTIAL: EXPONENTIAL,
    "quartic": QUARTIC,
    "exponential": EXPONENTIAL,
}

# Unit-mass constant for the quartic bump: integral of (1-x^2)^2 over
# (-1, 1) is 16/15.
_QUARTIC_NORM = 15.0 / 16.0
# omega0 = int omega^2 = (15/16)^2 * 256/315 = 5/7 for the quartic bump.
_QUARTIC_OMEGA0 = 5.0 / 7.0

_CDF_CHEB_DEGREE = 128
_CDF_PANELS = 48


def _as_array(x):
    arr = np.asarray(x, dtype=float)
    return arr, arr.ndim == 0


def _maybe_scalar(out, scalar):
    return float(out[()]) if scalar else out


@dataclass(frozen=True)
class MollifierKernel:
    """Even unit-mass bump supported in (-1, 1).

    ``normalization`` is the multiplicative constant making the mass one
    and ``omega0`` is the integral of the squared kernel.  For the quartic
    bump both are exact rationals; for the exponential bump they are
    computed once by adaptive quadrature and cached on the instance.
    """

    kind: str
    normalization: float
    omega0: float

    def value(self, y):
        y, scalar = _as_array(y)
        out = np.zeros_like(y)
        m = np.abs(y) < 1.0
        if self.kind == QUARTIC:
            out[m] = self.normalization * (1.0 - y[m] ** 2) ** 2
        else:
            out[m] = self.normalization * np.exp(-1.0 / (1.0 - y[m] ** 2))
        return _maybe_scalar(out, scalar)

    def deriv(self, y):
        y, scalar = _as_array(y)
        out = np.zeros_like(y)
        m = np.abs(y) < 1.0
        ym = y[m]
        if self.kind == QUARTIC:
            out[m] = self.normalization * (-4.0) * ym * (1.0 - ym**2)
        else:
            out[m] = (
                self.normalization
                * np.exp(-1.0 / (1.0 - ym**2))
                * (-2.0 * ym / (1.0 - ym**2) ** 2)
            )
        return _maybe_scalar(out, scalar)

    def cdf(self, y):
        """Antiderivative of the kernel, 0 at -1 and 1 at +1."""
        y, scalar = _as_array(y)
        out = np.empty_like(y)
        lo = y <= -1.0
        hi = y >= 1.0
        mid = ~(lo | hi)
        out[lo] = 0.0
        out[hi] = 1.0
        ym = y[mid]
        if self.kind == QUARTIC:
            out[mid] = 0.5 + _QUARTIC_NORM * (ym - 2.0 * ym**3 / 3.0 + ym**5 / 5.0)
        else:
            out[mid] = np.clip(_exp_cdf_interpolant()(ym), 0.0, 1.0)
        return _maybe_scalar(out, scalar)


def _exp_raw(x):
    x = np.asarray(x, dtype=float)
    out = np.zeros_like(x)
    m = np.abs(x) < 1.0
    out[m] = np.exp(-1.0 / (1.0 - x[m] ** 2))
    return out


@lru_cache(maxsize=1)
def _exp_constants():
    from scipy.integrate import quad

    mass, _ = quad(lambda x: float(_exp_raw(np.asarray(x))), -1.0, 1.0,
                   epsabs=1e-15, epsrel=1e-13, limit=200)
    norm = 1.0 / mass
    sq, _ = quad(lambda x: (norm * float(_exp_raw(np.asarray(x)))) ** 2,
                 -1.0, 1.0, epsabs=1e-15, epsrel=1e-13, limit=200)
    return norm, sq


@lru_cache(maxsize=1)
def _exp_cdf_interpolant():
    """Chebyshev fit of the exponential-bump antiderivative.

    Sample values come from cumulative composite Gauss-Legendre so the fit
    is limited by the interpolant, not by sample noise.
    """
    norm, _ = _exp_constants()
    nodes, weights = np.polynomial.legendre.leggauss(16)
    deg = _CDF_CHEB_DEGREE
    # Chebyshev points of the second kind on [-1, 1], ascending.
    pts = np.cos(np.pi * np.arange(deg + 1) / deg)[::-1]
    vals = np.empty_like(pts)
    acc = 0.0
    prev = -1.0
    for i, y in enumerate(pts):
        if y > prev:
            edges = np.linspace(prev, y, _CDF_PANELS + 1)
            a = edges[:-1]
            b = edges[1:]
            xs = 0.5 * (b - a)[:, None] * nodes[None, :] + 0.5 * (a + b)[:, None]
            acc += float(np.sum(0.5 * (b - a)[:, None] * weights[None, :]
                                * norm * _exp_raw(xs)))
            prev = y
        vals[i] = acc
    return _cheb.Chebyshev.fit(pts, vals, deg, domain=[-1.0, 1.0])


def canonical_kind(kind: str) -> str:
    """Resolve a kernel-kind name or alias to its canonical form."""
    canonical = _ALIASES.get(kind)
    if canonical is None:
        raise ValueError(f"unknown kernel kind {kind!r}; choose from {KERNEL_KINDS}")
    return canonical


@lru_cache(maxsize=None)
def _kernel_for(canonical: str) -> MollifierKernel:
    if canonical == QUARTIC:
        return MollifierKernel(QUARTIC, _QUARTIC_NORM, _QUARTIC_OMEGA0)
    norm, omega0 = _exp_constants()
    return MollifierKernel(EXPONENTIAL, norm, omega0)


def make_kernel(kind: str = QUARTIC) -> MollifierKernel:
    """Build a kernel of the requested family with its constants cached."""
    return _kernel_for(canonical_kind(kind))


def _check_eps(eps: float) -> float:
    eps = float(eps)
    if not eps > 0.0:
        raise ValueError(f"eps must be positive, got {eps}")
    return eps


def eval_correction(x, eps, kernel: MollifierKernel):
    """Correction profile R(x, eps); support exactly (eps, 3 eps)."""
    eps = _check_eps(eps)
    return kernel.value((np.asarray(x, dtype=float) - 2.0 * eps) / eps) / math.sqrt(eps)


def eval_correction_dx(x, eps, kernel: MollifierKernel):
    eps = _check_eps(eps)
    return kernel.deriv((np.asarray(x, dtype=float) - 2.0 * eps) / eps) / eps**1.5


def eval_delta_reg(x, eps, kernel: MollifierKernel):
    """Regularized delta d(x, eps); support exactly (-3 eps, -eps), mass 1."""
    eps = _check_eps(eps)
    return kernel.value((np.asarray(x, dtype=float) + 2.0 * eps) / eps) / eps


def eval_delta_reg_dx(x, eps, kernel: MollifierKernel):
    eps = _check_eps(eps)
    return kernel.deriv((np.asarray(x, dtype=float) + 2.0 * eps) / eps) / eps**2


def plateau_constant(u1: float, sigma1: float) -> float:
    """Plateau level 1/2 - sigma1/u1^2 that cancels the stress dipole terms."""
    if u1 == 0.0:
        raise ValueError("plateau constant needs a nonzero velocity jump u1")
    return 0.5 - sigma1 / u1**2


@dataclass(frozen=True)
class StepProfile:
    """C^1 regularized step with a plateau at ``c`` on |xi| <= 3 eps.

    With ``increasing`` true (the orientation used by the singular-front
    ansatz) the value is exactly 0 for xi <= -4 eps and exactly 1 for
    xi >= 4 eps.  The mirrored orientation (1 on the left) is available
    for completeness; the ramps are the same rescaled kernel
    antiderivatives either way, so the profile stays C^1 with derivative
    vanishing outside the two transition bands.
    """

    c: float
    eps: float
    kernel: MollifierKernel
    increasing: bool = True

    def __post_init__(self):
        _check_eps(self.eps)

    @property
    def breakpoints(self) -> tuple[float, float, float, float]:
        e = self.eps
        return (-4.0 * e, -3.0 * e, 3.0 * e, 4.0 * e)

    def value(self, xi):
        xi, scalar = _as_array(xi)
        out = self._value_increasing(xi if self.increasing else -xi)
        return _maybe_scalar(out, scalar)

    def deriv(self, xi):
        xi, scalar = _as_array(xi)
        if self.increasing:
            out = self._deriv_increasing(xi)
        else:
            out = -self._deriv_increasing(-xi)
        return _maybe_scalar(out, scalar)

    def _value_increasing(self, xi):
        e = self.eps
        c = self.c
        out = np.empty_like(xi)
        out[xi <= -4.0 * e] = 0.0
        out[xi >= 4.0 * e] = 1.0
        out[np.abs(xi) <= 3.0 * e] = c
        left = (xi > -4.0 * e) & (xi < -3.0 * e)
        out[left] = c * self.kernel.cdf((2.0 * xi[left] + 7.0 * e) / e)
        right = (xi > 3.0 * e) & (xi < 4.0 * e)
        out[right] = c + (1.0 - c) * self.kernel.cdf((2.0 * xi[right] - 7.0 * e) / e)
        return out

    def _deriv_increasing(self, xi):
        e = self.eps
        c = self.c
        out = np.zeros_like(xi)
        left = (xi > -4.0 * e) & (xi < -3.0 * e)
        out[left] = c * self.kernel.value((2.0 * xi[left] + 7.0 * e) / e) * 2.0 / e
        right = (xi > 3.0 * e) & (xi < 4.0 * e)
        out[right] = (1.0 - c) * self.kernel.value((2.0 * xi[right] - 7.0 * e) / e) * 2.0 / e
        return out


def step_from_data(u1: float, sigma1: float, eps: float,
                   kernel: MollifierKernel, increasing: bool = True) -> StepProfile:
    """Step profile whose plateau is pinned to the jump data."""
    return StepProfile(plateau_constant(u1, sigma1), eps, kernel, increasing)


def eval_step(xi, profile: StepProfile):
    return profile.value(xi)


def eval_step_dx(xi, profile: StepProfile):
    return profile.deriv(xi)
