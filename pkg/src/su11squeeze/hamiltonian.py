"""Parametric-amplifier Hamiltonian H = 2 omega K_z + 2 lambda K_x.

Heisenberg-picture transport of the generator triple (K_x, K_y, K_z) is a
3x3 real matrix in SO(2,1); means and symmetrised covariances move as
``mean -> M mean`` and ``cov -> M cov M^T``.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from su11squeeze.errors import NumericalOverflowError

ETA = np.diag([1.0, 1.0, -1.0])

# below this |g t| the closed forms lose digits; use the series instead
TAYLOR_SEAM = 1e-4
HYPERBOLIC_LIMIT = 350.0


class Regime(enum.Enum):
    OSCILLATORY = "oscillatory"
    HYPERBOLIC = "hyperbolic"
    RESONANCE = "resonance"


@dataclass(frozen=True)
class CouplingParams:
    omega: float
    lambda_: float
    regime_epsilon: float = 1e-12

    def __post_init__(self):
        if not (math.isfinite(self.omega) and self.omega > 0):
            raise ValueError("omega must be finite and > 0")
        if not (math.isfinite(self.lambda_) and self.lambda_ >= 0):
            raise ValueError("lambda_ must be finite and >= 0")
        if not self.regime_epsilon >= 0:
            raise ValueError("regime_epsilon must be >= 0")

    @property
    def g_squared(self) -> float:
        """omega^2 - lambda^2, signed; negative in the hyperbolic regime."""
        return (self.omega - self.lambda_) * (self.omega + self.lambda_)

    @property
    def g(self) -> float:
        """Effective frequency sqrt(|omega^2 - lambda^2|)."""
        return math.sqrt(abs(self.g_squared))

    @property
    def regime(self) -> Regime:
        return classify_regime(self)


def classify_regime(params: CouplingParams) -> Regime:
    w, l = params.omega, params.lambda_
    if abs(w - l) <= params.regime_epsilon * max(w, l):
        return Regime.RESONANCE
    return Regime.OSCILLATORY if w > l else Regime.HYPERBOLIC


class PropagatorCoefficients(NamedTuple):
    r1: float
    r2: float
    r3: float
    j: float
    s: float
    v: float
    t: float


def _shape_functions(u: float):
    """(cos 2y, sin^2 y / y^2, sin 2y / 2y) for u = y^2, continued to u < 0."""
    if abs(u) < TAYLOR_SEAM**2:
        cos2 = 1.0 + u * (-2.0 + u * (2.0 / 3.0 + u * (-4.0 / 45.0 + u * 2.0 / 315.0)))
        sq = 1.0 + u * (-1.0 / 3.0 + u * (2.0 / 45.0 + u * (-1.0 / 315.0 + u * 2.0 / 14175.0)))
        sc = 1.0 + u * (-2.0 / 3.0 + u * (2.0 / 15.0 + u * (-4.0 / 315.0 + u * 2.0 / 2835.0)))
        return cos2, sq, sc
    if u > 0:
        y = math.sqrt(u)
        s = math.sin(y) / y
        return math.cos(2.0 * y), s * s, math.sin(2.0 * y) / (2.0 * y)
    y = math.sqrt(-u)
    if y > HYPERBOLIC_LIMIT:
        raise NumericalOverflowError(
            "hyperbolic growth parameter gamma*t = %.6g exceeds %g" % (y, HYPERBOLIC_LIMIT)
        )
    s = math.sinh(y) / y
    return math.cosh(2.0 * y), s * s, math.sinh(2.0 * y) / (2.0 * y)


def coefficients(params: CouplingParams, t: float) -> PropagatorCoefficients:
    """Time-dependent transport coefficients R1, R2, R3, J, S, V at time t.

    All three regimes share one code path: the closed forms are written as
    even functions of g*t, so the hyperbolic branch is the analytic
    continuation g^2 -> -gamma^2 and resonance is the g -> 0 series.
    """
    t = float(t)
    if not math.isfinite(t):
        raise ValueError("t must be finite")
    w, l = params.omega, params.lambda_
    if params.regime is Regime.RESONANCE:
        u = 0.0
    else:
        u = params.g_squared * t * t
    cos2, sq, sc = _shape_functions(u)
    t2sq = t * t * sq
    return PropagatorCoefficients(
        r1=cos2 - 2.0 * l * l * t2sq,
        r2=cos2,
        r3=cos2 + 2.0 * w * w * t2sq,
        j=2.0 * w * t * sc,
        s=2.0 * w * l * t2sq,
        v=2.0 * l * t * sc,
        t=t,
    )


def adjoint_matrix(coeffs: PropagatorCoefficients) -> np.ndarray:
    c = coeffs
    return np.array(
        [
            [c.r1, -c.j, -c.s],
            [c.j, c.r2, c.v],
            [c.s, c.v, c.r3],
        ]
    )


def transport_matrix(params: CouplingParams, t: float) -> np.ndarray:
    return adjoint_matrix(coefficients(params, t))


@dataclass(frozen=True)
class MomentState:
    """First moments of (K_x, K_y, K_z) and their symmetrised covariance."""

    mean: np.ndarray
    cov: np.ndarray

    def __post_init__(self):
        mean = np.asarray(self.mean, dtype=float).reshape(3)
        cov = np.asarray(self.cov, dtype=float).reshape(3, 3)
        object.__setattr__(self, "mean", mean)
        object.__setattr__(self, "cov", cov)

    @property
    def var_x(self) -> float:
        return float(self.cov[0, 0])

    @property
    def var_y(self) -> float:
        return float(self.cov[1, 1])

    @property
    def mean_kz(self) -> float:
        return float(self.mean[2])

    def uncertainty_margin(self) -> float:
        """Var(K_x) Var(K_y) - <K_z>^2 / 4; non-negative for physical states."""
        return self.var_x * self.var_y - 0.25 * self.mean_kz**2


def propagate_moments(m: np.ndarray, state0: MomentState) -> MomentState:
    m = np.asarray(m, dtype=float)
    cov = m @ state0.cov @ m.T
    return MomentState(mean=m @ state0.mean, cov=0.5 * (cov + cov.T))
