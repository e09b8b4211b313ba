"""Phase-plane scans, zero contours and the figure presets."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from su11squeeze import bgcs, pcs
from su11squeeze.errors import NumericalOverflowError
from su11squeeze.fock import oracle_moments_batch, start_size
from su11squeeze.hamiltonian import CouplingParams, adjoint_matrix, coefficients, propagate_moments
from su11squeeze.kernels import marching_segments
from su11squeeze.pcs import ORACLE, PAPER, TRANSPORT, squeezing_factor

TOL_BOUNDARY = 1e-9
ORACLE_MAX_POINTS = 64 * 64
# largest basis a scan point may use; keeps full preset sweeps within minutes
SCAN_N_CAP = 4096

SQUEEZED = "squeezed"
UNSQUEEZED = "unsqueezed"
BOUNDARY = "boundary"
MASK_ERROR = "error"

# per-point error codes
OK = 0
OVERFLOW = 1
TRUNCATION = 2
NONFINITE = 3

FAMILIES = ("pcs", "bgcs")
PLANE_AXES = {"pcs": ("r", "phi"), "bgcs": ("zmag", "phi")}
TIME_UNITS = ("t", "tl", "tw", "gt")
PATHS = (PAPER, TRANSPORT, ORACLE)


@dataclass(frozen=True)
class Axis:
    name: str
    min: float
    max: float
    steps: int

    def __post_init__(self):
        if self.steps < 2:
            raise ValueError("axis %s needs steps >= 2" % self.name)
        if not self.min < self.max:
            raise ValueError("axis %s needs min < max" % self.name)

    def values(self) -> np.ndarray:
        return np.linspace(self.min, self.max, self.steps)

    def as_dict(self):
        return {"name": self.name, "min": self.min, "max": self.max, "steps": self.steps}


@dataclass(frozen=True)
class GridSpec:
    axis1: Axis
    axis2: Axis
    family: str
    k: float = 0.5
    omega: float = 1.0
    lambda_: float = 1.0
    time: float = 0.0
    time_unit: str = "t"

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValueError("family must be one of %s" % (FAMILIES,))
        if self.time_unit not in TIME_UNITS:
            raise ValueError("time unit must be one of %s" % (TIME_UNITS,))
        names = {self.axis1.name, self.axis2.name}
        if names != set(PLANE_AXES[self.family]):
            raise ValueError(
                "a %s grid spans %s, got %s"
                % (self.family, " and ".join(PLANE_AXES[self.family]), ", ".join(sorted(names)))
            )

    @property
    def coupling(self) -> CouplingParams:
        return CouplingParams(self.omega, self.lambda_)

    @property
    def physical_time(self) -> float:
        return physical_time(self.time, self.time_unit, self.coupling)

    @property
    def shape(self):
        return (self.axis1.steps, self.axis2.steps)

    def as_dict(self):
        return {
            "axis1": self.axis1.as_dict(),
            "axis2": self.axis2.as_dict(),
            "family": self.family,
            "fixed": {
                "k": self.k,
                "omega": self.omega,
                "lambda": self.lambda_,
                "time": self.time,
                "time_unit": self.time_unit,
            },
        }


def physical_time(value: float, unit: str, coupling: CouplingParams) -> float:
    """Convert a normalised time (t, t*lambda, t*omega, g*t) to t."""
    if unit == "t":
        return value
    if unit == "tl":
        scale = coupling.lambda_
    elif unit == "tw":
        scale = coupling.omega
    elif unit == "gt":
        scale = coupling.g
    else:
        raise ValueError("unknown time unit %r" % (unit,))
    if scale == 0:
        if value == 0:
            return 0.0
        raise ValueError("time unit %r is undefined for these couplings" % (unit,))
    return value / scale


@dataclass
class RegionMap:
    grid: GridSpec
    path: str
    fx: np.ndarray
    fy: np.ndarray
    sign_mask_x: np.ndarray
    sign_mask_y: np.ndarray
    error_code: np.ndarray
    contours_x: list = field(default_factory=list)
    contours_y: list = field(default_factory=list)

    @property
    def axis1(self):
        return self.grid.axis1.values()

    @property
    def axis2(self):
        return self.grid.axis2.values()


class Profile(NamedTuple):
    """F_x, F_y along one axis with everything else fixed (Fig. 7)."""

    grid: GridSpec
    path: str
    axis: str
    values: np.ndarray
    fixed_axis: str
    fixed_value: float
    fx: np.ndarray
    fy: np.ndarray
    sign_mask_x: np.ndarray
    sign_mask_y: np.ndarray
    error_code: np.ndarray
    crossings_x: list
    crossings_y: list


def sign_mask(f: np.ndarray, tol: float = TOL_BOUNDARY) -> np.ndarray:
    out = np.full(f.shape, MASK_ERROR, dtype=object)
    finite = np.isfinite(f)
    out[finite & (f < -tol)] = SQUEEZED
    out[finite & (f > tol)] = UNSQUEEZED
    out[finite & (np.abs(f) <= tol)] = BOUNDARY
    return out


def _edge_point(edge, field_, a1, a2):
    n2 = field_.shape[1]
    base, vertical = divmod(int(edge), 2)
    i, j = divmod(base, n2)
    i2, j2 = (i + 1, j) if vertical else (i, j + 1)
    f0 = field_[i, j]
    f1 = field_[i2, j2]
    s = f0 / (f0 - f1)
    return (a1[i] + s * (a1[i2] - a1[i]), a2[j] + s * (a2[j2] - a2[j]))


def zero_contours(field_: np.ndarray, a1: np.ndarray, a2: np.ndarray) -> list:
    """Zero-level polylines in axis coordinates, linked across cells.

    Open chains come first, then closed loops (first vertex repeated at the
    end); ordering is fixed by the smallest edge id so output is stable.
    """
    segs = marching_segments(np.ascontiguousarray(field_, dtype=float))
    if len(segs) == 0:
        return []
    links: dict = {}
    for idx, (e0, e1) in enumerate(segs):
        links.setdefault(int(e0), []).append(idx)
        links.setdefault(int(e1), []).append(idx)
    used = np.zeros(len(segs), dtype=bool)

    def walk(start_edge, first_seg):
        chain = [start_edge]
        edge, seg = start_edge, first_seg
        while seg is not None and not used[seg]:
            used[seg] = True
            e0, e1 = int(segs[seg][0]), int(segs[seg][1])
            edge = e1 if e0 == edge else e0
            chain.append(edge)
            seg = next((s for s in links[edge] if not used[s]), None)
        return chain

    chains = []
    for edge in sorted(e for e, s in links.items() if len(s) == 1):
        seg = links[edge][0]
        if not used[seg]:
            chains.append(walk(edge, seg))
    for idx in range(len(segs)):
        if not used[idx]:
            chains.append(walk(int(segs[idx][0]), idx))
    return [np.array([_edge_point(e, field_, a1, a2) for e in chain]) for chain in chains]


def _plane_arrays(grid: GridSpec):
    a1 = grid.axis1.values()
    a2 = grid.axis2.values()
    g1, g2 = np.meshgrid(a1, a2, indexing="ij")
    first = PLANE_AXES[grid.family][0]
    if grid.axis1.name == first:
        return g1, g2
    return g2, g1


def _analytic(grid: GridSpec, path: str, amp, phi):
    coeffs = coefficients(grid.coupling, grid.physical_time)
    module = pcs if grid.family == "pcs" else bgcs
    with np.errstate(over="ignore", invalid="ignore"):
        return module.factors(amp, phi, grid.k, coeffs, path)


def _oracle(grid: GridSpec, amp, phi):
    flat_amp = amp.ravel()
    flat_phi = phi.ravel()
    if grid.family == "pcs":
        plist = [pcs.PcsParams(float(a), float(p), grid.k) for a, p in zip(flat_amp, flat_phi)]
    else:
        plist = [bgcs.BgcsParams(float(a), float(p), grid.k) for a, p in zip(flat_amp, flat_phi)]
    # size hints from transported moments; the oracle re-checks convergence itself
    m = adjoint_matrix(coefficients(grid.coupling, grid.physical_time))
    moments0 = pcs.pcs_moments0 if grid.family == "pcs" else bgcs.bgcs_moments0
    starts = []
    for p in plist:
        st = propagate_moments(m, moments0(p))
        starts.append(start_size(st.mean[2], st.cov[2, 2], grid.k))
    mean, cov, failed = oracle_moments_batch(
        grid.family, plist, grid.coupling, grid.physical_time, tail_tol=1e-12, start_sizes=starts, n_cap=SCAN_N_CAP
    )
    kz = mean[:, 2]
    fx = squeezing_factor(cov[:, 0, 0], kz).reshape(amp.shape)
    fy = squeezing_factor(cov[:, 1, 1], kz).reshape(amp.shape)
    return fx, fy, failed.reshape(amp.shape)


def evaluate_points(grid: GridSpec, path: str, amp, phi):
    """(fx, fy, error_code) at arbitrary (amplitude, phi) arrays; never raises per point."""
    if path not in PATHS:
        raise ValueError("path must be one of %s" % (PATHS,))
    amp = np.asarray(amp, dtype=float)
    phi = np.asarray(phi, dtype=float)
    shape = amp.shape
    code = np.zeros(shape, dtype=np.int64)
    try:
        if path == ORACLE:
            fx, fy, failed = _oracle(grid, amp, phi)
            code[failed] = TRUNCATION
        else:
            fx, fy = _analytic(grid, path, amp, phi)
    except NumericalOverflowError:
        nan = np.full(shape, np.nan)
        return nan, nan.copy(), np.full(shape, OVERFLOW, dtype=np.int64)
    fx = np.array(fx, dtype=float)
    fy = np.array(fy, dtype=float)
    bad = ~(np.isfinite(fx) & np.isfinite(fy)) & (code == OK)
    code[bad] = NONFINITE
    fx[code != OK] = np.nan
    fy[code != OK] = np.nan
    return fx, fy, code


def evaluate_grid(grid: GridSpec, path: str, allow_large_oracle: bool = False):
    """(fx, fy, error_code) arrays of shape grid.shape."""
    amp, phi = _plane_arrays(grid)
    if path == ORACLE and amp.size > ORACLE_MAX_POINTS and not allow_large_oracle:
        raise ValueError("oracle scans are limited to %d points by default" % ORACLE_MAX_POINTS)
    return evaluate_points(grid, path, amp, phi)


def scan_plane(grid: GridSpec, path: str = PAPER, allow_large_oracle: bool = False) -> RegionMap:
    fx, fy, code = evaluate_grid(grid, path, allow_large_oracle)
    a1 = grid.axis1.values()
    a2 = grid.axis2.values()
    return RegionMap(
        grid=grid,
        path=path,
        fx=fx,
        fy=fy,
        sign_mask_x=sign_mask(fx),
        sign_mask_y=sign_mask(fy),
        error_code=code,
        contours_x=zero_contours(fx, a1, a2),
        contours_y=zero_contours(fy, a1, a2),
    )


def zero_crossings(values: np.ndarray, f: np.ndarray) -> list:
    """Linearly interpolated positions where f changes sign (< 0 vs >= 0)."""
    out = []
    for i in range(len(f) - 1):
        a, b = f[i], f[i + 1]
        if np.isfinite(a) and np.isfinite(b) and (a < 0) != (b < 0):
            out.append(float(values[i] + a / (a - b) * (values[i + 1] - values[i])))
    return out


def profile(grid: GridSpec, path: str, fixed_axis: str, fixed_value: float) -> Profile:
    """1-D cut of a plane: ``grid.axis2`` is swept, ``fixed_axis`` pinned."""
    if grid.axis2.name != "phi" or fixed_axis != grid.axis1.name:
        raise ValueError("profiles sweep phi with the amplitude axis pinned")
    vals = grid.axis2.values()
    fx, fy, code = evaluate_points(grid, path, np.full(vals.shape, float(fixed_value)), vals)
    return Profile(
        grid, path, grid.axis2.name, vals, fixed_axis, fixed_value, fx, fy,
        sign_mask(fx), sign_mask(fy), code, zero_crossings(vals, fx), zero_crossings(vals, fy),
    )


TWO_PI = 2.0 * math.pi
R_AXIS = Axis("r", -3.0, 3.0, 201)
Z_AXIS = Axis("zmag", 0.0, 2.0, 201)
PHI_AXIS = Axis("phi", 0.0, TWO_PI, 201)

# (family, omega, lambda, time, time unit) per figure; resonance uses omega = lambda = 1
PRESETS = {
    1: ("pcs", 3.0, 1.0, 0.0, "t"),
    2: ("pcs", 3.0, 1.0, math.pi / 2, "tl"),
    3: ("pcs", 10.0, 1.0, math.pi / 2, "tl"),
    4: ("pcs", 1.0, 2.0, math.pi / 4, "tw"),
    5: ("pcs", 1.0, 1.0, 3.0 * math.pi, "tl"),
    6: ("bgcs", 3.0, 1.0, 1.0, "tl"),
    7: ("bgcs", 3.0, 1.0, math.pi / 2, "tl"),
    8: ("bgcs", 1.0, 10.0, math.pi / 20, "tw"),
    9: ("bgcs", 1.0, 1.0, math.pi / 6, "tl"),
}
FIG7_ZMAG = 200.0
DEFAULT_FIGURE_PATH = TRANSPORT


def preset_grid(n: int, steps: int = 201) -> GridSpec:
    if n not in PRESETS:
        raise ValueError("figure number must be 1..9")
    family, omega, lam, time, unit = PRESETS[n]
    first = Axis(R_AXIS.name, R_AXIS.min, R_AXIS.max, steps) if family == "pcs" else Axis(
        Z_AXIS.name, Z_AXIS.min, Z_AXIS.max, steps
    )
    phi = Axis(PHI_AXIS.name, PHI_AXIS.min, PHI_AXIS.max, steps)
    return GridSpec(first, phi, family, 0.5, omega, lam, time, unit)


def figure(n: int, path: str = DEFAULT_FIGURE_PATH, steps: int | None = None):
    """Dataset behind figure ``n``: a RegionMap, or a Profile over phi for n = 7."""
    if steps is None:
        steps = 64 if path == ORACLE else 201
    grid = preset_grid(n, steps)
    if n == 7:
        return profile(grid, path, "zmag", FIG7_ZMAG)
    return scan_plane(grid, path, allow_large_oracle=True)
