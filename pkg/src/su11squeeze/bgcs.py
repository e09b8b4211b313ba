"""Barut-Girardello coherent states: eigenstates of K_- with eigenvalue Z.

All moment formulas depend on the Bessel functions only through
rho = I_{2k}(2|Z|) / I_{2k-1}(2|Z|), which is taken from the continued
fraction so |Z| in the hundreds is fine.

At t = 0 the exact moments are

    <K> = (Re Z, -Im Z, k + |Z| rho)
    cov = [[<K_z>/2, 0, Re Z/2], [0, <K_z>/2, -Im Z/2], [Re Z/2, -Im Z/2, W]]

with W = |Z| (|Z| (1 - rho^2) + (1 - 2k) rho).  ``transport_variances``
propagates these; ``literal_variances`` evaluates the printed closed forms.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from su11squeeze.hamiltonian import (
    CouplingParams,
    MomentState,
    PropagatorCoefficients,
    Regime,
    coefficients,
)
from su11squeeze.pcs import PAPER, TRANSPORT, SqueezingReport, squeezing_factor
from su11squeeze.special import bessel_i_ratio


@dataclass(frozen=True)
class BgcsParams:
    zmag: float
    phi: float
    k: float = 0.5

    def __post_init__(self):
        if not self.zmag >= 0:
            raise ValueError("|Z| must be >= 0")
        if not self.k >= 0.25:
            raise ValueError("Bargmann index must be >= 1/4 for the Bessel ratio")

    @property
    def z(self) -> complex:
        return self.zmag * complex(math.cos(self.phi), math.sin(self.phi))


def bessel_weight(zmag, k):
    """rho = I_{2k}(2|Z|) / I_{2k-1}(2|Z|), elementwise over zmag."""
    zmag = np.asarray(zmag, dtype=float)
    flat = zmag.ravel()
    uniq, inverse = np.unique(flat, return_inverse=True)
    vals = np.array([bessel_i_ratio(2.0 * k, 2.0 * z).ratio for z in uniq])
    out = vals[inverse].reshape(zmag.shape)
    return float(out) if out.ndim == 0 else out


def _weights(zmag, k):
    rho = bessel_weight(zmag, k)
    kz0 = k + zmag * rho
    w = zmag * (zmag * (1.0 - rho * rho) + (1.0 - 2.0 * k) * rho)
    return kz0, w


def bgcs_moments0(params: BgcsParams) -> MomentState:
    z = params.z
    kz0, w = _weights(params.zmag, params.k)
    mean = np.array([z.real, -z.imag, kz0])
    cov = np.array(
        [
            [0.5 * kz0, 0.0, 0.5 * z.real],
            [0.0, 0.5 * kz0, -0.5 * z.imag],
            [0.5 * z.real, -0.5 * z.imag, w],
        ]
    )
    return MomentState(mean=mean, cov=cov)


def _fgh(c: PropagatorCoefficients):
    return 0.5 * (c.r1 - 1j * c.j), 0.5 * (c.j - 1j * c.r2), 0.5 * (c.s - 1j * c.v)


def literal_variances(zmag, phi, k, coeffs: PropagatorCoefficients):
    """Printed closed forms for Var K_x, Var K_y, <K_z>; broadcasts."""
    zmag = np.asarray(zmag, dtype=float)
    z = zmag * np.exp(1j * np.asarray(phi, dtype=float))
    c = coeffs
    f, g, h = _fgh(c)
    kz0, w = _weights(zmag, k)
    var_x = 2.0 * abs(f) ** 2 * kz0 - c.s * 2.0 * np.real(np.conj(z) * f) + c.s**2 * w
    var_y = 2.0 * abs(g) ** 2 * kz0 - c.v * 2.0 * np.real(np.conj(z) * g) + c.v**2 * w
    kz = c.r3 * kz0 + 2.0 * np.real(np.conj(z) * h)
    return var_x, var_y, kz


def transport_variances(zmag, phi, k, coeffs: PropagatorCoefficients):
    """Exact Var K_x, Var K_y, <K_z> from the t = 0 moments; broadcasts."""
    zmag = np.asarray(zmag, dtype=float)
    phi = np.asarray(phi, dtype=float)
    c = coeffs
    x = zmag * np.cos(phi)
    y = zmag * np.sin(phi)
    kz0, w = _weights(zmag, k)
    var_x = 0.5 * (c.r1**2 + c.j**2) * kz0 - c.s * (c.r1 * x + c.j * y) + c.s**2 * w
    var_y = 0.5 * (c.j**2 + c.r2**2) * kz0 + c.v * (c.j * x - c.r2 * y) + c.v**2 * w
    kz = c.s * x - c.v * y + c.r3 * kz0
    return var_x, var_y, kz


def weak_variances(zmag, phi, k, coeffs: PropagatorCoefficients):
    """Small-|Z| approximation of the printed forms."""
    zmag = np.asarray(zmag, dtype=float)
    z = zmag * np.exp(1j * np.asarray(phi, dtype=float))
    c = coeffs
    f, g, h = _fgh(c)
    z2 = zmag**2 / (2.0 * k)
    var_x = (2.0 * abs(f) ** 2 + c.s**2) * z2 + 2.0 * k * abs(f) ** 2 - c.s * 2.0 * np.real(np.conj(z) * f)
    var_y = (2.0 * abs(g) ** 2 + c.v**2) * z2 + 2.0 * k * abs(g) ** 2 - c.v * 2.0 * np.real(np.conj(z) * g)
    kz = c.r3 * (k + z2) + 2.0 * np.real(np.conj(z) * h)
    return var_x, var_y, kz


def strong_variances(zmag, phi, k, coeffs: PropagatorCoefficients):
    """Large-|Z| approximation of the printed forms (first order in |Z|)."""
    zmag = np.asarray(zmag, dtype=float)
    z = zmag * np.exp(1j * np.asarray(phi, dtype=float))
    c = coeffs
    f, g, h = _fgh(c)
    var_x = 2.0 * abs(f) ** 2 * (k + zmag) - c.s * 2.0 * np.real(np.conj(z) * f) + zmag * (1 - 2 * k) * c.s**2
    var_y = 2.0 * abs(g) ** 2 * (k + zmag) - c.v * 2.0 * np.real(np.conj(z) * g) + zmag * (1 - 2 * k) * c.v**2
    kz = c.r3 * (k + zmag) + 2.0 * np.real(np.conj(z) * h)
    return var_x, var_y, kz


_ROUTES = {
    PAPER: literal_variances,
    TRANSPORT: transport_variances,
    "weak": weak_variances,
    "strong": strong_variances,
}


def factors(zmag, phi, k, coeffs: PropagatorCoefficients, path: str = PAPER):
    try:
        route = _ROUTES[path]
    except KeyError:
        raise ValueError("unknown analytic path %r" % (path,)) from None
    vx, vy, kz = route(zmag, phi, k, coeffs)
    return squeezing_factor(vx, kz), squeezing_factor(vy, kz)


def _report(route, tag, params: BgcsParams, coeffs):
    vx, vy, kz = (float(a) for a in route(params.zmag, params.phi, params.k, coeffs))
    return SqueezingReport(float(squeezing_factor(vx, kz)), float(squeezing_factor(vy, kz)), vx, vy, kz, tag)


def bgcs_variances(params: BgcsParams, coeffs: PropagatorCoefficients) -> SqueezingReport:
    return _report(literal_variances, PAPER, params, coeffs)


def bgcs_transport(params: BgcsParams, coeffs: PropagatorCoefficients) -> SqueezingReport:
    return _report(transport_variances, TRANSPORT, params, coeffs)


def bgcs_variances_weak(params: BgcsParams, coeffs: PropagatorCoefficients) -> SqueezingReport:
    return _report(weak_variances, "weak", params, coeffs)


def bgcs_variances_strong(params: BgcsParams, coeffs: PropagatorCoefficients) -> SqueezingReport:
    return _report(strong_variances, "strong", params, coeffs)


def bgcs_zero_intensity_factors(omega: float, lambda_: float, t: float):
    """Printed |Z| -> 0 closed forms for (F_x, F_y) in each regime."""
    coupling = CouplingParams(omega, lambda_)
    regime = coupling.regime
    r3 = coefficients(coupling, t).r3
    if regime is Regime.RESONANCE:
        tau = lambda_ * t
        d = 2.0 * tau**2 + 1.0
        return 2.0 * tau**2 * (2.0 * tau**2 - 1.0) / d, tau**2 / d
    g2 = coupling.g**2
    tau = coupling.g * t
    if regime is Regime.OSCILLATORY:
        s2 = math.sin(tau) ** 2
        c2 = math.cos(2.0 * tau)
    else:
        s2 = math.sinh(tau) ** 2
        c2 = math.cosh(2.0 * tau)
    pref = 2.0 * lambda_**2 / (g2 * r3)
    return pref * (2.0 * omega**2 / g2 * s2 - 1.0) * s2, pref * c2 * s2


def zero_intensity_factors_exact(omega: float, lambda_: float, t: float):
    """The |Z| -> 0 limit of the exact dynamics: ((1+S^2)/R3 - 1, (1+V^2)/R3 - 1)."""
    c = coefficients(CouplingParams(omega, lambda_), t)
    return (1.0 + c.s**2) / c.r3 - 1.0, (1.0 + c.v**2) / c.r3 - 1.0


def bgcs_strong_coupling_window(omega: float, lambda_: float) -> float:
    """Largest tau = gamma t with F_x < 0 at |Z| -> 0: asinh(gamma / (sqrt2 omega))."""
    if not lambda_ > omega:
        raise ValueError("strong-coupling window needs lambda > omega")
    gamma = math.sqrt((lambda_ - omega) * (lambda_ + omega))
    return math.asinh(gamma / (math.sqrt(2.0) * omega))
