"""Numerical laboratory for singular-front solutions of a 2x2
nonconservative hyperbolic system and its degenerate limit.

Subpackages:

* :mod:`deltashock.kernels`   mollifier kernels and regularized profiles
* :mod:`deltashock.pairing`   distributional pairing and coefficient extraction
* :mod:`deltashock.ansatz`    singular solution and smooth eps-family
* :mod:`deltashock.dynamics`  closed-form front dynamics and admissibility
* :mod:`deltashock.riemann`   classical Riemann solver and small-k limit study
* :mod:`deltashock.verifier`  weak-solution verification and derivation replay
* :mod:`deltashock.cli`       config-driven command line front end
"""

from .kernels import EXPONENTIAL, QUARTIC, MollifierKernel, StepProfile, make_kernel
from .pairing import TestFunction, default_eps_grid, pair, verify_lemma31

__all__ = [
    "EXPONENTIAL",
    "QUARTIC",
    "MollifierKernel",
    "StepProfile",
    "make_kernel",
    "TestFunction",
    "default_eps_grid",
    "pair",
    "verify_lemma31",
]

__version__ = "0.1.0"
