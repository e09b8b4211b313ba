"""Perelomov coherent states |xi; k> with xi = -tanh(r/2) exp(-i phi).

Two routes to the squeezing factors are kept side by side:

``paper``
    the printed closed forms for the variances (in terms of xi and the
    transport coefficients), evaluated literally;
``transport``
    the exact initial moments of the state pushed through the 3x3 adjoint
    matrix.  This route agrees with the Fock-basis oracle.

The two agree at t = 0 and on the K_y / K_z lines for all t; the printed K_x
line pairs xi* with f where the Heisenberg solution pairs xi with f, so it
drifts from the oracle once J(t) != 0.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from su11squeeze.hamiltonian import (
    ETA,
    CouplingParams,
    MomentState,
    PropagatorCoefficients,
    Regime,
    adjoint_matrix,
    coefficients,
    propagate_moments,
    transport_matrix,
)

PAPER = "paper"
TRANSPORT = "transport"
ORACLE = "oracle"


@dataclass(frozen=True)
class PcsParams:
    r: float
    phi: float
    k: float = 0.5

    def __post_init__(self):
        if not self.k > 0:
            raise ValueError("Bargmann index k must be > 0")

    @property
    def xi(self) -> complex:
        return -math.tanh(0.5 * self.r) * complex(math.cos(self.phi), -math.sin(self.phi))

    @property
    def boost(self) -> np.ndarray:
        """Unit hyperboloid vector <K>/k of the state."""
        return np.array(
            [
                -math.sinh(self.r) * math.cos(self.phi),
                -math.sinh(self.r) * math.sin(self.phi),
                math.cosh(self.r),
            ]
        )


class SqueezingReport(NamedTuple):
    f_x: float
    f_y: float
    var_x: float
    var_y: float
    mean_kz: float
    path: str


def squeezing_factor(var, mean_kz):
    half = 0.5 * np.abs(mean_kz)
    return (var - half) / half


def report_from_moments(state: MomentState, path: str) -> SqueezingReport:
    kz = state.mean_kz
    return SqueezingReport(
        f_x=float(squeezing_factor(state.var_x, kz)),
        f_y=float(squeezing_factor(state.var_y, kz)),
        var_x=state.var_x,
        var_y=state.var_y,
        mean_kz=kz,
        path=path,
    )


def pcs_moments0(params: PcsParams) -> MomentState:
    """Exact t = 0 moments: mean k*n, covariance (k/2)(eta + n n^T)."""
    n = params.boost
    return MomentState(mean=params.k * n, cov=0.5 * params.k * (ETA + np.outer(n, n)))


def literal_variances(r, phi, k, coeffs: PropagatorCoefficients):
    """Printed closed forms for Var K_x, Var K_y, <K_z>; broadcasts over r, phi."""
    r = np.asarray(r, dtype=float)
    phi = np.asarray(phi, dtype=float)
    c = coeffs
    th = np.tanh(0.5 * r)
    xi = -th * np.exp(-1j * phi)
    d = 1.0 - th * th
    f = 0.5 * (c.r1 - 1j * c.j)
    g = 0.5 * (c.j - 1j * c.r2)
    h = 0.5 * (c.s - 1j * c.v)
    xf = 2.0 * np.real(np.conj(xi) * f)
    xg = 2.0 * np.real(np.conj(xi) * g)
    xh = 2.0 * np.real(np.conj(xi) * h)
    var_x = 2.0 * k * (abs(f) ** 2 + (c.s - xf) ** 2 / d**2 + c.s * (xf - c.s) / d)
    var_y = 2.0 * k * (abs(g) ** 2 + (c.v + xg) ** 2 / d**2 - c.v * (xg + c.v) / d)
    kz = k / d * ((1.0 + th * th) * c.r3 + 2.0 * xh)
    return var_x, var_y, kz


def transport_variances(r, phi, k, coeffs: PropagatorCoefficients):
    """Exact Var K_x, Var K_y, <K_z> by moment transport; broadcasts over r, phi.

    A Perelomov state stays coherent, so with m = M n the moments are
    Var K_j = (k/2)(1 + m_j^2) and <K_z> = k m_z.
    """
    r = np.asarray(r, dtype=float)
    phi = np.asarray(phi, dtype=float)
    c = coeffs
    nx = -np.sinh(r) * np.cos(phi)
    ny = -np.sinh(r) * np.sin(phi)
    nz = np.cosh(r)
    mx = c.r1 * nx - c.j * ny - c.s * nz
    my = c.j * nx + c.r2 * ny + c.v * nz
    mz = c.s * nx + c.v * ny + c.r3 * nz
    return 0.5 * k * (1.0 + mx * mx), 0.5 * k * (1.0 + my * my), k * mz


def factors(r, phi, k, coeffs: PropagatorCoefficients, path: str = PAPER):
    """Squeezing factors (F_x, F_y) on a grid for the analytic paths."""
    if path == PAPER:
        vx, vy, kz = literal_variances(r, phi, k, coeffs)
    elif path == TRANSPORT:
        vx, vy, kz = transport_variances(r, phi, k, coeffs)
    else:
        raise ValueError("unknown analytic path %r" % (path,))
    return squeezing_factor(vx, kz), squeezing_factor(vy, kz)


def pcs_variances(params: PcsParams, coeffs: PropagatorCoefficients) -> SqueezingReport:
    """Paper-literal variances; tagged ``path='paper'``."""
    vx, vy, kz = (float(a) for a in literal_variances(params.r, params.phi, params.k, coeffs))
    return SqueezingReport(
        float(squeezing_factor(vx, kz)), float(squeezing_factor(vy, kz)), vx, vy, kz, PAPER
    )


def pcs_transport(params: PcsParams, coeffs: PropagatorCoefficients) -> SqueezingReport:
    state = propagate_moments(adjoint_matrix(coeffs), pcs_moments0(params))
    return report_from_moments(state, TRANSPORT)


def pcs_initial_factors(params: PcsParams):
    """Printed t = 0 closed forms for (F_x, F_y).

    These carry a prefactor tanh^2(r/2) / (1 - tanh^4(r/2)); the exact t = 0
    factors have (cosh r - 1) / cosh r instead.  Same sign pattern, different
    magnitude except at cosh r = 3.
    """
    return initial_factors_literal(params.r, params.phi)


def initial_factors_literal(r, phi):
    t2 = np.tanh(0.5 * np.asarray(r, dtype=float)) ** 2
    pref = t2 / (1.0 - t2 * t2)
    ch = np.cosh(r)
    fx = pref * ((1.0 + ch) * np.cos(phi) ** 2 - 1.0)
    fy = pref * ((1.0 + ch) * np.sin(phi) ** 2 - 1.0)
    if np.ndim(fx) == 0:
        return float(fx), float(fy)
    return fx, fy


def initial_factors_exact(r, phi):
    ch = np.cosh(r)
    pref = (ch - 1.0) / ch
    fx = pref * ((1.0 + ch) * np.cos(phi) ** 2 - 1.0)
    fy = pref * ((1.0 + ch) * np.sin(phi) ** 2 - 1.0)
    if np.ndim(fx) == 0:
        return float(fx), float(fy)
    return fx, fy


def pcs_squeeze_condition(params: PcsParams, quadrature: str) -> bool:
    """1 + trig^2(phi) sinh^2(2r) <= cosh(2r), equality included.

    Written as trig^2 sinh^2(2r) <= 2 sinh^2(r) to avoid cancellation near r = 0.
    """
    if quadrature == "x":
        trig2 = math.cos(params.phi) ** 2
    elif quadrature == "y":
        trig2 = math.sin(params.phi) ** 2
    else:
        raise ValueError("quadrature must be 'x' or 'y'")
    return trig2 * math.sinh(2.0 * params.r) ** 2 <= 2.0 * math.sinh(params.r) ** 2


def pcs_resonance_variances(params: PcsParams, tau: float) -> SqueezingReport:
    """Resonance (omega = lambda) polynomials in tau = omega t."""
    if tau < 0:
        raise ValueError("tau must be >= 0")
    r, phi, k = params.r, params.phi, params.k
    sh = math.sinh(r)
    chi = math.cosh(r) - sh * math.cos(phi)

    def eps(p):
        return 0.25 * (1.0 + sh * sh * math.cos(p) ** 2)

    var_x = 2.0 * k * (
        tau**4 * chi * chi
        + tau**2 * (chi * sh * math.cos(phi) + sh * sh * math.sin(phi) ** 2)
        - 2.0 * tau**3 * chi * sh * math.sin(phi)
        - 0.5 * tau * sh * sh * math.sin(2.0 * phi)
        + eps(phi)
    )
    var_y = 2.0 * k * (tau**2 * chi * chi - tau * chi * sh * math.sin(phi) + eps(phi + 0.5 * math.pi))
    kz = 2.0 * k * (tau**2 * chi - tau * sh * math.sin(phi) + 0.5 * math.cosh(r))
    return SqueezingReport(
        float(squeezing_factor(var_x, kz)), float(squeezing_factor(var_y, kz)), var_x, var_y, kz, PAPER
    )


def pcs_resonance_fy_asymptote(params: PcsParams) -> float:
    """Long-time limit of F_y at resonance: 2 (cosh r - sinh r cos phi) - 1."""
    return 2.0 * (math.cosh(params.r) - math.sinh(params.r) * math.cos(params.phi)) - 1.0


def pcs_weak_coupling_check(params: PcsParams, omega: float, lambda_: float, t: float) -> float:
    """max_j |F_j(r, phi, t) - F_j(r, phi + 2 omega t, 0)| on the exact path.

    ``params.r`` and ``params.phi`` may be arrays; the maximum is then taken
    over the whole grid as well.
    """
    if not (omega > 0 and 0 <= lambda_ <= 0.2 * omega):
        raise ValueError("weak-coupling check needs 0 <= lambda/omega <= 0.2")
    coeffs = coefficients(CouplingParams(omega, lambda_), t)
    fx, fy = factors(params.r, params.phi, params.k, coeffs, TRANSPORT)
    start = coefficients(CouplingParams(omega, 0.0), 0.0)
    shifted = np.asarray(params.phi) + 2.0 * omega * t
    fx0, fy0 = factors(params.r, shifted, params.k, start, TRANSPORT)
    return float(max(np.max(np.abs(fx - fx0)), np.max(np.abs(fy - fy0))))


class StrongCouplingSlopes(NamedTuple):
    slope_var_x: float
    slope_var_y: float
    slope_kz: float


def pcs_strong_coupling_exponents(
    params: PcsParams, omega: float, lambda_: float, t_window=(4.0, 6.0), samples: int = 41, path: str = TRANSPORT
) -> StrongCouplingSlopes:
    """Least-squares slopes of log Var_j and log <K_z> against tau = gamma t."""
    coupling = CouplingParams(omega, lambda_)
    if coupling.regime is not Regime.HYPERBOLIC:
        raise ValueError("strong-coupling exponents need lambda > omega")
    lo, hi = t_window
    if not (3.0 <= lo < hi):
        raise ValueError("window must satisfy 3 <= start < end (in units of gamma t)")
    gamma = coupling.g
    taus = np.linspace(lo, hi, samples)
    logs = []
    for tau in taus:
        c = coefficients(coupling, tau / gamma)
        if path == PAPER:
            vx, vy, kz = literal_variances(params.r, params.phi, params.k, c)
        else:
            vx, vy, kz = transport_variances(params.r, params.phi, params.k, c)
        logs.append((math.log(vx), math.log(vy), math.log(kz)))
    logs = np.array(logs)
    slopes = np.polyfit(taus, logs, 1)[0]
    return StrongCouplingSlopes(*(float(s) for s in slopes))


def pcs_moments_at(params: PcsParams, coupling: CouplingParams, t: float) -> MomentState:
    return propagate_moments(transport_matrix(coupling, t), pcs_moments0(params))
