"""Special functions: log-Gamma, modified Bessel I_nu, and the ratio I_nu / I_{nu-1}.

The ratio is what the Barut-Girardello moments depend on, and it is computed
by a continued fraction so that it stays finite where I_nu itself overflows.
"""
from __future__ import annotations

import math
from typing import NamedTuple

import numpy as np

from su11squeeze import kernels
from su11squeeze.errors import NumericalOverflowError

BESSEL_OVERFLOW_X = 713.0


class BesselRatioResult(NamedTuple):
    ratio: float
    est_error: float


def log_gamma(x: float) -> float:
    return kernels.log_gamma(float(x))


def log_gamma_array(x) -> np.ndarray:
    return kernels.log_gamma_array(np.asarray(x, dtype=float))


def bessel_i(nu: float, x: float) -> float:
    """Modified Bessel function of the first kind, real order nu >= 0."""
    nu = float(nu)
    x = float(x)
    if not (nu >= 0 and math.isfinite(nu)):
        raise ValueError("nu must be finite and >= 0")
    if not (x >= 0 and math.isfinite(x)):
        raise ValueError("x must be finite and >= 0")
    val = kernels.bessel_i(nu, x)
    if math.isinf(val):
        raise NumericalOverflowError("I_%g(%g) overflows double precision" % (nu, x))
    return val


def bessel_i_ratio(nu: float, x: float) -> BesselRatioResult:
    nu = float(nu)
    x = float(x)
    if not nu >= 0.5:
        raise ValueError("bessel_i_ratio requires nu >= 1/2")
    if not (x >= 0 and math.isfinite(x)):
        raise ValueError("x must be finite and >= 0")
    ratio, err = kernels.bessel_i_ratio(nu, x)
    return BesselRatioResult(ratio, err)
