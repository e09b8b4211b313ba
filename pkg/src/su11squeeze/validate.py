"""Reconciliation of every printed closed form against the number-basis oracle.

Each check evaluates one formula over a fixed sample set, measures its worst
deviation from the oracle and classifies it as AGREES (deviation below the
check tolerance) or DISCREPANT.  The classifications and measured deviations
are then compared with the committed discrepancy ledger: a run is clean only
when every measurement matches its ledger entry.
"""
from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass
from importlib import resources
from typing import Callable

import numpy as np

from su11squeeze import bgcs, pcs
from su11squeeze._version import __version__
from su11squeeze.fock import (
    FockBasisSpec,
    bgcs_fock_vector,
    build_generators,
    casimir,
    evolve,
    lowering_residual,
    oracle_moments_batch,
    pcs_fock_vector,
)
from su11squeeze.hamiltonian import ETA, CouplingParams, coefficients, transport_matrix

AGREES = "AGREES"
DISCREPANT = "DISCREPANT"
TOL = 1e-8
# measured deviations of DISCREPANT entries must reproduce to this relative precision
LEDGER_RTOL = 1e-6

PCS_SAMPLES = [(r, phi) for r in (-1.5, -0.4, 0.7, 1.0) for phi in (0.0, 0.8, 2.2, 4.1)]
BGCS_SAMPLES = [(z, phi) for z in (0.3, 1.0, 2.0) for phi in (0.0, 1.0, 2.5, 4.1)]
# (omega, lambda, t): oscillatory, oscillatory, hyperbolic, resonance
DYNAMIC_COUPLINGS = [(1.0, 0.3, 0.9), (3.0, 1.0, 1.0), (1.0, 2.0, 0.5), (1.0, 1.0, 0.7)]


@dataclass
class Check:
    check_id: str
    equation: str
    description: str
    samples: int
    deviation: float
    tolerance: float
    status: str
    worst_case: dict
    ledger_status: str | None = None
    ledger_deviation: float | None = None
    consistent: bool | None = None


def _oracle(family, samples, k, coupling, t):
    """(var_x, var_y, kz) arrays from the oracle; raises if any point fails."""
    if family == "pcs":
        plist = [pcs.PcsParams(a, p, k) for a, p in samples]
    else:
        plist = [bgcs.BgcsParams(a, p, k) for a, p in samples]
    mean, cov, failed = oracle_moments_batch(family, plist, coupling, t)
    if failed.any():
        raise ArithmeticError("oracle did not converge for %d sample(s)" % failed.sum())
    return cov[:, 0, 0], cov[:, 1, 1], mean[:, 2]


def _scaled_gap(a, b):
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    return np.abs(a - b) / np.maximum(1.0, np.abs(b))


def _worst(gaps, labels):
    gaps = np.asarray(gaps, dtype=float)
    i = int(np.argmax(gaps))
    return float(gaps[i]), labels[i]


def _moment_gaps(pred, ref, which):
    return np.max([_scaled_gap(pred[j], ref[j]) for j in which], axis=0)


def _variance_check(family, route, which, settings, k=0.5):
    gaps, labels = [], []
    for omega, lam, t in settings:
        coupling = CouplingParams(omega, lam)
        samples = PCS_SAMPLES if family == "pcs" else BGCS_SAMPLES
        ref = _oracle(family, samples, k, coupling, t)
        amp = np.array([s[0] for s in samples])
        phi = np.array([s[1] for s in samples])
        pred = route(amp, phi, k, coefficients(coupling, t))
        g = _moment_gaps(pred, ref, which)
        gaps.extend(g)
        labels.extend(
            {"amplitude": float(a), "phi": float(p), "omega": omega, "lambda": lam, "t": t, "k": k}
            for a, p in samples
        )
    return _worst(gaps, labels), len(gaps)


def check_eq13_t0():
    (dev, worst), n = _variance_check("pcs", pcs.literal_variances, (0, 1, 2), [(1.0, 0.3, 0.0)])
    return "Eq. 13", "PCS variances and <K_z> at t = 0", n, dev, worst


def check_eq13_kx():
    (dev, worst), n = _variance_check("pcs", pcs.literal_variances, (0,), DYNAMIC_COUPLINGS)
    return "Eq. 13", "PCS Var K_x for t > 0", n, dev, worst


def check_eq13_ky_kz():
    (dev, worst), n = _variance_check("pcs", pcs.literal_variances, (1, 2), DYNAMIC_COUPLINGS)
    return "Eq. 13", "PCS Var K_y and <K_z> for t > 0", n, dev, worst


def check_eq15_16():
    coupling = CouplingParams(1.0, 0.3)
    vx, vy, kz = _oracle("pcs", PCS_SAMPLES, 0.5, coupling, 0.0)
    fx = pcs.squeezing_factor(vx, kz)
    fy = pcs.squeezing_factor(vy, kz)
    gaps, labels = [], []
    for (r, phi), ox, oy in zip(PCS_SAMPLES, fx, fy):
        px, py = pcs.initial_factors_literal(r, phi)
        gaps.append(max(abs(px - ox), abs(py - oy)))
        labels.append({"r": r, "phi": phi, "k": 0.5, "oracle": [float(ox), float(oy)], "formula": [px, py]})
    dev, worst = _worst(gaps, labels)
    return "Eqs. 15-16", "PCS initial squeezing factors", len(gaps), dev, worst


RESONANCE_SAMPLES = [(1.0, 1.0, tau) for tau in (0.0, 0.5, 1.0)] + [
    (r, phi, tau) for r in (-0.8, 0.4) for phi in (0.3, 2.0, 5.0) for tau in (0.3, 1.5)
]


def _resonance_check(index, label):
    gaps, labels = [], []
    coupling = CouplingParams(1.0, 1.0)
    for r, phi, tau in RESONANCE_SAMPLES:
        ref = _oracle("pcs", [(r, phi)], 0.5, coupling, tau)
        rep = pcs.pcs_resonance_variances(pcs.PcsParams(r, phi, 0.5), tau)
        pred = (rep.var_x, rep.var_y, rep.mean_kz)[index]
        gaps.append(float(_scaled_gap(pred, ref[index][0])))
        labels.append({"r": r, "phi": phi, "tau": tau, "k": 0.5})
    dev, worst = _worst(gaps, labels)
    return label, "resonance polynomial vs oracle", len(gaps), dev, worst


def check_eq23():
    return _resonance_check(0, "Eq. 23")


def check_eq24():
    return _resonance_check(1, "Eq. 24")


def check_eq25():
    return _resonance_check(2, "Eq. 25")


def check_eq27():
    # the oracle cannot reach tau >> 1, so the long-time form is checked as
    # the limit of the resonance polynomials, which are oracle-checked above
    gaps, labels = [], []
    for r, phi in PCS_SAMPLES:
        p = pcs.PcsParams(r, phi, 0.5)
        f_inf = pcs.pcs_resonance_variances(p, 1e10).f_y
        gaps.append(abs(f_inf - pcs.pcs_resonance_fy_asymptote(p)))
        labels.append({"r": r, "phi": phi, "tau": 1e10})
    dev, worst = _worst(gaps, labels)
    return "Eq. 27", "long-time F_y against the tau -> inf limit of Eqs. 24-25", len(gaps), dev, worst


def check_eq29_t0():
    (dev, worst), n = _variance_check("bgcs", bgcs.literal_variances, (0, 1, 2), [(3.0, 1.0, 0.0)])
    return "Eq. 29", "BGCS minimum-uncertainty moments at t = 0", n, dev, worst


def check_eq29():
    (dev, worst), n = _variance_check("bgcs", bgcs.literal_variances, (0, 1, 2), DYNAMIC_COUPLINGS)
    return "Eq. 29", "BGCS variances and <K_z> for t > 0", n, dev, worst


def check_eq29_kz():
    (dev, worst), n = _variance_check("bgcs", bgcs.literal_variances, (2,), DYNAMIC_COUPLINGS)
    return "Eq. 29", "BGCS <K_z> for t > 0", n, dev, worst


def _zmag_check(route, zmags, label, desc):
    gaps, labels = [], []
    k = 0.5
    for omega, lam, t in DYNAMIC_COUPLINGS:
        coupling = CouplingParams(omega, lam)
        samples = [(z, phi) for z in zmags for phi in (0.0, 1.0, 4.1)]
        ref = _oracle("bgcs", samples, k, coupling, t)
        amp = np.array([s[0] for s in samples])
        phi = np.array([s[1] for s in samples])
        pred = route(amp, phi, k, coefficients(coupling, t))
        fx_p, fy_p = (pcs.squeezing_factor(pred[j], pred[2]) for j in (0, 1))
        fx_o, fy_o = (pcs.squeezing_factor(ref[j], ref[2]) for j in (0, 1))
        gaps.extend(np.maximum(np.abs(fx_p - fx_o), np.abs(fy_p - fy_o)))
        labels.extend({"zmag": a, "phi": p, "omega": omega, "lambda": lam, "t": t} for a, p in samples)
    dev, worst = _worst(gaps, labels)
    return label, desc, len(gaps), dev, worst


def check_eq30():
    return _zmag_check(bgcs.weak_variances, (0.01, 0.05), "Eq. 30", "weak-intensity BGCS factors, |Z| << 1")


def check_eq31():
    return _zmag_check(bgcs.strong_variances, (50.0, 100.0), "Eq. 31", "strong-intensity BGCS factors, |Z| >> 1")


def _vacuum_factors(omega, lam, t):
    ref = _oracle("bgcs", [(0.0, 0.0)], 0.5, CouplingParams(omega, lam), t)
    return float(pcs.squeezing_factor(ref[0][0], ref[2][0])), float(pcs.squeezing_factor(ref[1][0], ref[2][0]))


def _zero_intensity_check(settings, label, desc, which=(0, 1)):
    gaps, labels = [], []
    for omega, lam, t in settings:
        printed = bgcs.bgcs_zero_intensity_factors(omega, lam, t)
        oracle = _vacuum_factors(omega, lam, t)
        gaps.append(max(abs(printed[j] - oracle[j]) for j in which))
        labels.append({"omega": omega, "lambda": lam, "t": t, "oracle": oracle, "formula": list(printed)})
    dev, worst = _worst(gaps, labels)
    return label, desc, len(gaps), dev, worst


def check_eq32():
    settings = [(3.0, 1.0, t) for t in (0.2, 0.7, 1.3)] + [(1.0, 0.5, 2.0), (2.0, 1.9, 1.0)]
    return _zero_intensity_check(settings, "Eq. 32", "|Z| -> 0 factors, oscillatory regime")


def check_eq33():
    settings = [(1.0, 2.0, t) for t in (0.2, 0.5, 0.9)] + [(1.0, 10.0, math.pi / 20), (0.5, 0.8, 1.5)]
    return _zero_intensity_check(settings, "Eq. 33", "|Z| -> 0 factors, hyperbolic regime (g^2 read as gamma^2)")


def check_eq34():
    gaps, labels = [], []
    for omega, lam in ((1.0, 2.0), (1.0, 10.0), (0.5, 0.8)):
        tau = bgcs.bgcs_strong_coupling_window(omega, lam)
        gamma = math.sqrt(lam * lam - omega * omega)
        t = tau / gamma
        fx_printed = bgcs.bgcs_zero_intensity_factors(omega, lam, t)[0]
        fx_oracle = _vacuum_factors(omega, lam, t)[0]
        gaps.append(max(abs(fx_printed), abs(fx_oracle)))
        labels.append({"omega": omega, "lambda": lam, "tau": tau})
    dev, worst = _worst(gaps, labels)
    return "Eq. 34", "F_x of Eq. 33 and of the oracle vanish on the window boundary", len(gaps), dev, worst


RESONANCE_TAUS = (0.2, 0.5, 1.0, 1.7)


def check_eq35_fx():
    return _zero_intensity_check([(1.0, 1.0, tau) for tau in RESONANCE_TAUS], "Eq. 35", "resonance |Z| -> 0 F_x", (0,))


def check_eq35_fy():
    return _zero_intensity_check([(1.0, 1.0, tau) for tau in RESONANCE_TAUS], "Eq. 35", "resonance |Z| -> 0 F_y", (1,))


def check_eq35_zero():
    tau = 1.0 / math.sqrt(2.0)
    printed = bgcs.bgcs_zero_intensity_factors(1.0, 1.0, tau)[0]
    oracle = _vacuum_factors(1.0, 1.0, tau)[0]
    dev = max(abs(printed), abs(oracle))
    return "Eq. 35", "F_x vanishes at tau = 1/sqrt(2)", 1, dev, {"tau": tau, "formula": printed, "oracle": oracle}


def check_transport_group():
    rng = np.random.default_rng(20240601)
    worst = 0.0
    label = {}
    for _ in range(50):
        omega = float(rng.uniform(0.1, 3.0))
        lam = float(rng.choice([rng.uniform(0.0, 3.0), omega]))
        t = float(rng.uniform(0.0, 2.0))
        s = float(rng.uniform(0.0, 2.0))
        c = CouplingParams(omega, lam)
        m = transport_matrix(c, t)
        err = max(
            float(np.max(np.abs(m.T @ ETA @ m - ETA)) / np.max(np.abs(m)) ** 2),
            float(np.max(np.abs(transport_matrix(c, t + s) - m @ transport_matrix(c, s))) / np.max(np.abs(m)) ** 2),
        )
        if err > worst:
            worst = err
            label = {"omega": omega, "lambda": lam, "t": t, "s": s}
    return "Eqs. 7-8", "transport matrix is an SO(2,1) one-parameter group", 50, worst, label, 1e-10


def check_oracle_algebra():
    tail_tol = 1e-12
    worst = 0.0
    label = {}
    for k in (0.25, 0.5, 1.0, 2.0):
        spec = FockBasisSpec(k, 256, tail_tol)
        kz, kp, km, kx, ky = (g.toarray() for g in build_generators(spec))
        inner = slice(0, 255)
        comm = (kx @ ky - ky @ kx)[inner, inner]
        errs = {"commutator": float(np.max(np.abs(comm + 1j * kz[inner, inner])) / np.max(np.abs(kz)))}
        v = evolve(spec, CouplingParams(1.0, 0.3), pcs_fock_vector(pcs.PcsParams(0.8, 1.0, k), spec), 0.9)
        errs["casimir"] = abs(casimir(v) - k * (k - 1.0))
        errs["unitarity"] = abs(v.norm - 1.0)
        w = bgcs_fock_vector(bgcs.BgcsParams(2.0, 0.4, k), spec)
        errs["eigenrelation"] = lowering_residual(w, 2.0 * complex(math.cos(0.4), math.sin(0.4)))
        for name, err in errs.items():
            if err > worst:
                worst, label = err, {"k": k, "n_trunc": 256, "quantity": name}
    return "Eqs. 2-4", "oracle commutators, Casimir, unitarity and eigenrelation", 4, worst, label, 10 * tail_tol


CHECKS: dict[str, Callable] = {
    "transport_group": check_transport_group,
    "oracle_algebra": check_oracle_algebra,
    "eq13_t0": check_eq13_t0,
    "eq13_kx": check_eq13_kx,
    "eq13_ky_kz": check_eq13_ky_kz,
    "eq15_16": check_eq15_16,
    "eq23": check_eq23,
    "eq24": check_eq24,
    "eq25": check_eq25,
    "eq27": check_eq27,
    "eq29_t0": check_eq29_t0,
    "eq29": check_eq29,
    "eq29_kz": check_eq29_kz,
    "eq30": check_eq30,
    "eq31": check_eq31,
    "eq32": check_eq32,
    "eq33": check_eq33,
    "eq34": check_eq34,
    "eq35_fx": check_eq35_fx,
    "eq35_fy": check_eq35_fy,
    "eq35_zero": check_eq35_zero,
}


def run_check(check_id: str) -> Check:
    equation, description, samples, dev, worst, *rest = CHECKS[check_id]()
    tolerance = rest[0] if rest else TOL
    status = AGREES if dev < tolerance else DISCREPANT
    return Check(check_id, equation, description, samples, float(dev), tolerance, status, _plain(worst))


def _plain(obj):
    if isinstance(obj, dict):
        return {k: _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if isinstance(obj, (np.floating, np.integer)):
        return obj.item()
    return obj


def load_ledger(path=None) -> dict:
    if path is None:
        text = resources.files("su11squeeze").joinpath("discrepancy_ledger.json").read_text()
    else:
        with open(path) as fh:
            text = fh.read()
    return json.loads(text)["entries"]


def reconcile(check: Check, ledger: dict) -> Check:
    entry = ledger.get(check.check_id)
    if entry is None:
        check.consistent = check.status == AGREES
        return check
    check.ledger_status = entry["status"]
    check.ledger_deviation = entry.get("deviation")
    if check.status != entry["status"]:
        check.consistent = False
    elif check.status == DISCREPANT and check.ledger_deviation is not None:
        ref = check.ledger_deviation
        check.consistent = abs(check.deviation - ref) <= LEDGER_RTOL * max(abs(ref), 1e-300)
    else:
        check.consistent = True
    return check


@dataclass
class ValidationReport:
    tool_version: str
    checks: list

    @property
    def clean(self) -> bool:
        return all(c.consistent for c in self.checks)

    def as_dict(self):
        return {
            "tool_version": self.tool_version,
            "clean": self.clean,
            "checks": [asdict(c) for c in self.checks],
        }


def validate(report_path=None, ledger_path=None, only=None) -> ValidationReport:
    """Run every check, reconcile with the ledger and optionally write JSON."""
    ledger = load_ledger(ledger_path)
    ids = list(CHECKS) if only is None else list(only)
    report = ValidationReport(__version__, [reconcile(run_check(i), ledger) for i in ids])
    if report_path is not None:
        with open(report_path, "w") as fh:
            json.dump(report.as_dict(), fh, indent=2, sort_keys=True)
            fh.write("\n")
    return report
