"""Truncated number-basis oracle for the discrete-series representation.

Basis |m; k>, m = 0 .. n-1, with

    K_z |m> = (m + k) |m>
    K_+ |m> = sqrt((m + 1)(m + 2k)) |m + 1>
    K_- |m> = sqrt(m (m + 2k - 1)) |m - 1>

States are built from their series definitions in log space, evolved exactly
by diagonalising the real symmetric tridiagonal H = 2 omega K_z + 2 lambda K_x,
and measured.  Nothing here uses the transport matrix or the closed-form
moment formulas, so it can arbitrate between them.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from functools import lru_cache
from typing import Callable, NamedTuple

import numpy as np
import scipy.sparse as sp
from scipy.linalg import eigh_tridiagonal

from su11squeeze.errors import ConvergenceFailure, TruncationInsufficient
from su11squeeze.hamiltonian import CouplingParams, MomentState
from su11squeeze.special import log_gamma_array

N_MAX = 2**16
# dense eigenvectors beyond this size do not fit comfortably in memory
DENSE_LIMIT = 8192
DRIFT_TOL = 1e-9


@dataclass(frozen=True)
class FockBasisSpec:
    k: float
    n_trunc: int
    tail_tol: float = 1e-12

    def __post_init__(self):
        if not self.k > 0:
            raise ValueError("Bargmann index k must be > 0")
        if self.n_trunc < 4:
            raise ValueError("n_trunc must be >= 4")
        if not (0 < self.tail_tol <= 1e-6):
            raise ValueError("tail_tol must lie in (0, 1e-6]")

    @property
    def window_start(self) -> int:
        return self.n_trunc - self.n_trunc // 8

    def resized(self, n_trunc: int) -> "FockBasisSpec":
        return replace(self, n_trunc=n_trunc)


@dataclass(frozen=True)
class FockVector:
    amps: np.ndarray
    spec: FockBasisSpec = field(compare=False)

    @property
    def tail_mass(self) -> float:
        return tail_mass(self.amps, self.spec)

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.amps))


class Generators(NamedTuple):
    kz: sp.spmatrix
    kplus: sp.spmatrix
    kminus: sp.spmatrix
    kx: sp.spmatrix
    ky: sp.spmatrix


def tail_mass(amps, spec: FockBasisSpec):
    """Probability in the top eighth of the basis (per column for 2-D input)."""
    return np.sum(np.abs(amps[spec.window_start :]) ** 2, axis=0)


def raising_elements(k: float, n: int) -> np.ndarray:
    """sqrt((m + 1)(m + 2k)) for m = 0 .. n-2."""
    m = np.arange(n - 1, dtype=float)
    return np.sqrt((m + 1.0) * (m + 2.0 * k))


def build_generators(spec: FockBasisSpec) -> Generators:
    n = spec.n_trunc
    kz = sp.diags(np.arange(n) + spec.k).tocsr()
    kplus = sp.diags(raising_elements(spec.k, n), -1).tocsr()
    kminus = kplus.T.tocsr()
    kx = (0.5 * (kplus + kminus)).tocsr()
    ky = ((kplus - kminus) / 2j).tocsr()
    return Generators(kz, kplus, kminus, kx, ky)


def _finish(log_mag, phase_step, spec: FockBasisSpec, what: str) -> FockVector:
    log_mag = log_mag - log_mag.max()
    mag = np.exp(log_mag)
    mag /= np.linalg.norm(mag)
    amps = mag * np.exp(1j * phase_step * np.arange(spec.n_trunc))
    vec = FockVector(amps, spec)
    tm = vec.tail_mass
    if tm >= spec.tail_tol:
        raise TruncationInsufficient(
            "%s needs more than %d levels (tail mass %.3e)" % (what, spec.n_trunc, tm),
            tail_mass=tm,
            n_trunc=spec.n_trunc,
        )
    return vec


def pcs_fock_vector(params, spec: FockBasisSpec) -> FockVector:
    """Perelomov state from its series; ``params`` needs r, phi (k from spec)."""
    n = spec.n_trunc
    mod = math.tanh(0.5 * abs(params.r))
    if mod == 0.0:
        amps = np.zeros(n, dtype=complex)
        amps[0] = 1.0
        return FockVector(amps, spec)
    # xi = -tanh(r/2) e^{-i phi}
    arg = math.atan2(math.sin(-params.phi), math.cos(-params.phi))
    if params.r > 0:
        arg += math.pi
    m = np.arange(n, dtype=float)
    two_k = 2.0 * spec.k
    log_mag = 0.5 * (log_gamma_array(m + two_k) - log_gamma_array(m + 1.0)) + m * math.log(mod)
    return _finish(log_mag, arg, spec, "Perelomov state")


def bgcs_fock_vector(params, spec: FockBasisSpec) -> FockVector:
    """Barut-Girardello state from its series; ``params`` needs zmag, phi."""
    n = spec.n_trunc
    if params.zmag == 0.0:
        amps = np.zeros(n, dtype=complex)
        amps[0] = 1.0
        return FockVector(amps, spec)
    m = np.arange(n, dtype=float)
    log_mag = m * math.log(params.zmag) - 0.5 * (
        log_gamma_array(m + 1.0) + log_gamma_array(m + 2.0 * spec.k)
    )
    return _finish(log_mag, params.phi, spec, "Barut-Girardello state")


class Propagator:
    """exp(-i H t) for one (spec, coupling), factorised once."""

    def __init__(self, spec: FockBasisSpec, coupling: CouplingParams):
        n = spec.n_trunc
        if n > DENSE_LIMIT:
            raise ConvergenceFailure(
                "dense eigendecomposition limited to %d levels, asked for %d" % (DENSE_LIMIT, n),
                n_trunc=n,
            )
        self.spec = spec
        self.coupling = coupling
        diag = 2.0 * coupling.omega * (np.arange(n) + spec.k)
        off = 2.0 * coupling.lambda_ * 0.5 * raising_elements(spec.k, n)
        self.energies, self.modes = eigh_tridiagonal(diag, off)
        self.modes_t = np.ascontiguousarray(self.modes.T)

    def apply(self, amps: np.ndarray, t: float) -> np.ndarray:
        """Evolve one vector or the columns of a matrix by time t."""
        q, qt = self.modes, self.modes_t
        # strided real/imag views miss the BLAS fast path, so copy them
        re = np.ascontiguousarray(amps.real)
        im = np.ascontiguousarray(amps.imag)
        c = qt @ re + 1j * (qt @ im)
        phase = np.exp(-1j * self.energies * t)
        c = c * (phase[:, None] if c.ndim == 2 else phase)
        return q @ np.ascontiguousarray(c.real) + 1j * (q @ np.ascontiguousarray(c.imag))


@lru_cache(maxsize=4)
def propagator(spec: FockBasisSpec, coupling: CouplingParams) -> Propagator:
    return Propagator(spec, coupling)


def evolve(spec: FockBasisSpec, coupling: CouplingParams, v: FockVector, t: float) -> FockVector:
    if t == 0:
        return v
    out = FockVector(propagator(spec, coupling).apply(v.amps, t), spec)
    tm = out.tail_mass
    if tm >= spec.tail_tol:
        raise TruncationInsufficient(
            "evolved state leaks into the top levels (tail mass %.3e at n=%d)" % (tm, spec.n_trunc),
            tail_mass=tm,
            n_trunc=spec.n_trunc,
        )
    return out


def _apply_generators(amps: np.ndarray, k: float):
    """(K_x a, K_y a, K_z a) computed exactly on a one-level-padded basis."""
    n = amps.shape[0]
    pad = np.zeros((n + 1,) + amps.shape[1:], dtype=complex)
    pad[:n] = amps
    el = raising_elements(k, n + 1)
    el = el.reshape((-1,) + (1,) * (amps.ndim - 1))
    up = np.zeros_like(pad)
    up[1:] = el * pad[:-1]
    down = np.zeros_like(pad)
    down[:-1] = el * pad[1:]
    levels = (np.arange(n + 1) + k).reshape((-1,) + (1,) * (amps.ndim - 1))
    return pad, 0.5 * (up + down), (up - down) / 2j, levels * pad


def moments_of(amps: np.ndarray, k: float):
    """Means (3, ...) and symmetrised covariances (3, 3, ...) of vectors in columns."""
    pad, kx, ky, kz = _apply_generators(amps, k)
    ops = (kx, ky, kz)
    norm2 = np.sum(np.abs(pad) ** 2, axis=0)
    # all-zero placeholder columns come back as NaN
    norm2 = np.where(norm2 > 0, norm2, np.nan)
    with np.errstate(invalid="ignore"):
        return _moments_from(pad, ops, norm2)


def _moments_from(pad, ops, norm2):
    raw_mean = np.array([np.sum(np.conj(pad) * o, axis=0) for o in ops]) / norm2
    mean = raw_mean.real
    second = np.empty((3, 3) + mean.shape[1:])
    for i in range(3):
        for j in range(i, 3):
            val = np.sum(np.conj(ops[i]) * ops[j], axis=0).real / norm2
            second[i, j] = second[j, i] = val
    cov = second - mean[:, None] * mean[None, :]
    return mean, cov, raw_mean.imag


def expectations(v: FockVector) -> MomentState:
    mean, cov, imag = moments_of(v.amps, v.spec.k)
    scale = max(1.0, float(np.max(np.abs(mean))))
    if np.max(np.abs(imag)) > 1e-10 * scale:
        raise ArithmeticError("generator expectations are not real (residue %.3e)" % np.max(np.abs(imag)))
    return MomentState(mean=mean, cov=cov)


def casimir(v: FockVector) -> float:
    """<K_z^2 - K_x^2 - K_y^2>; equals k(k - 1) for any vector in the irrep."""
    pad, kx, ky, kz = _apply_generators(v.amps, v.spec.k)
    n2 = np.vdot(pad, pad).real
    return float((np.vdot(kz, kz).real - np.vdot(kx, kx).real - np.vdot(ky, ky).real) / n2)


def lowering_residual(v: FockVector, z: complex) -> float:
    """||K_- v - z v|| / ||v|| on the padded basis."""
    pad, kx, ky, _ = _apply_generators(v.amps, v.spec.k)
    kminus = kx - 1j * ky
    return float(np.linalg.norm(kminus - z * pad) / np.linalg.norm(pad))


def _drift(new, old):
    scale = np.maximum(1.0, np.abs(new))
    return float(np.max(np.abs(new - old) / scale))


def adaptive_truncation(
    initial_spec: FockBasisSpec,
    builder: Callable[[FockBasisSpec], FockVector],
    evolver: Callable[[FockBasisSpec, FockVector], FockVector] | None = None,
    observables: Callable[[FockVector], np.ndarray] | None = None,
    n_max: int = N_MAX,
):
    """Double the basis until the tail is below tolerance and the observables settle.

    Returns ``(spec, MomentState)`` of the evolved state at the converged size.
    Observable shifts are measured relative to max(1, |value|).
    """
    if observables is None:

        def observables(v):
            st = expectations(v)
            return np.concatenate([st.mean, st.cov.ravel()])

    spec = initial_spec
    previous = None
    last_tail = None
    drift = math.inf
    while True:
        try:
            vec = builder(spec)
            if evolver is not None:
                vec = evolver(spec, vec)
        except TruncationInsufficient as exc:
            last_tail = exc.tail_mass
            previous = None
        else:
            obs = np.asarray(observables(vec), dtype=float)
            last_tail = vec.tail_mass
            if previous is not None:
                drift = _drift(obs, previous)
                if drift < DRIFT_TOL:
                    return spec, expectations(vec)
            previous = obs
        nxt = spec.n_trunc * 2
        if nxt > min(n_max, DENSE_LIMIT):
            raise ConvergenceFailure(
                "no convergence up to n=%d (drift %.3e, tail mass %s)"
                % (spec.n_trunc, drift, "%.3e" % last_tail if last_tail is not None else "n/a"),
                drift=drift,
                n_trunc=spec.n_trunc,
                tail_mass=last_tail,
            )
        spec = spec.resized(nxt)


def _family_builder(family: str):
    if family == "pcs":
        return pcs_fock_vector
    if family == "bgcs":
        return bgcs_fock_vector
    raise ValueError("family must be 'pcs' or 'bgcs'")


def oracle_moments(family, params, coupling: CouplingParams, t: float, tail_tol=1e-12, n0=64, n_max=N_MAX):
    """Converged oracle moments of a PCS or BGCS evolved to time t."""
    build = _family_builder(family)
    spec0 = FockBasisSpec(params.k, n0, tail_tol)

    def evolver(spec, vec):
        return evolve(spec, coupling, vec, t)

    return adaptive_truncation(spec0, lambda s: build(params, s), evolver, n_max=n_max)[1]


def start_size(mean_kz, var_kz, k, n0=64):
    """Power-of-two basis size at which a state may first pass the tail test.

    Sized from <K_z> + 28 sd(K_z), which reaches a 1e-12 tail for a geometric
    occupation and overshoots for narrower ones.  The oracle re-checks tail and
    drift itself, so a poor hint costs time, never accuracy.
    """
    needed = 8.0 / 7.0 * (mean_kz - k + 28.0 * math.sqrt(max(var_kz, 0.0)))
    if not math.isfinite(needed):
        return 2 * DENSE_LIMIT
    n = n0
    while n < needed and n <= DENSE_LIMIT:
        n *= 2
    return n


def oracle_moments_batch(
    family, params_list, coupling: CouplingParams, t: float, tail_tol=1e-12, n0=64, chunk=512, start_sizes=None, n_cap=DENSE_LIMIT
):
    """Oracle means/covariances for many states sharing k, coupling and t.

    Each state is carried up the doubling ladder, from ``start_sizes[i]`` if
    given, until its tail passes and its moments agree with the previous size
    to DRIFT_TOL.  Returns ``(mean (P, 3), cov (P, 3, 3), error mask (P,))``;
    states that cannot converge below DENSE_LIMIT are flagged rather than
    raising.
    """
    build = _family_builder(family)
    count = len(params_list)
    if count == 0:
        return np.empty((0, 3)), np.empty((0, 3, 3)), np.zeros(0, dtype=bool)
    k = params_list[0].k
    means = np.full((count, 3), np.nan)
    covs = np.full((count, 3, 3), np.nan)
    prev = np.full((count, 12), np.nan)
    first = np.full(count, n0) if start_sizes is None else np.maximum(np.asarray(start_sizes), n0)
    # convergence needs a second rung at twice the size
    n_cap = min(n_cap, DENSE_LIMIT)
    first[2 * first > n_cap] = 2 * n_cap
    pending = np.arange(count)
    n = n0
    while pending.size and n <= n_cap:
        active = pending[first[pending] <= n]
        still = list(pending[first[pending] > n])
        if active.size == 0:
            n *= 2
            continue
        spec = FockBasisSpec(k, n, tail_tol)
        prop = Propagator(spec, coupling) if t != 0 else None
        for start in range(0, active.size, chunk):
            idx = active[start : start + chunk]
            cols = []
            ok = []
            for i in idx:
                try:
                    cols.append(build(params_list[i], spec).amps)
                    ok.append(True)
                except TruncationInsufficient:
                    cols.append(np.zeros(n, dtype=complex))
                    ok.append(False)
            ok = np.array(ok)
            mat = np.array(cols).T
            if prop is not None:
                mat = prop.apply(mat, t)
            ok &= tail_mass(mat, spec) < tail_tol
            mean, cov, _ = moments_of(mat, k)
            obs = np.concatenate([mean.T, cov.reshape(9, -1).T], axis=1)
            for col, i in enumerate(idx):
                if not ok[col]:
                    prev[i] = np.nan
                    still.append(i)
                    continue
                if np.all(np.isfinite(prev[i])) and _drift(obs[col], prev[i]) < DRIFT_TOL:
                    means[i] = mean[:, col]
                    covs[i] = cov[:, :, col]
                else:
                    prev[i] = obs[col]
                    still.append(i)
        pending = np.sort(np.array(still, dtype=int))
        n *= 2
    failed = np.zeros(count, dtype=bool)
    failed[pending] = True
    return means, covs, failed
