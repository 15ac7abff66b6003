"""Verification suites shared by the CLI and the acceptance tests.

Each suite draws ``samples`` random inputs from ``seed`` and returns one check
per sample. A check passes iff its value lies within the suite tolerance.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
import json
import time

import numpy as np

from .automorphisms import apply, differential_at, normalizer
from .curvature import (
    base_hessian,
    bisectional,
    bisectional_bounds,
    bounds,
    fd_bisectional_oracle,
    fd_sectional_oracle,
    inputs_digest,
    kahler_berwald_residual,
    sectional,
)
from .domains import DomainSpec, sample_point, sample_tangent
from .errors import BadParams
from .metrics import metric
from .norms import hessian_IV, hessian_origin, minkowski_f2
from .numdiff import wirtinger_hessian
from .tolerances import DEFAULT

SUITES = ("invariance", "pseudoconvexity", "kahler-berwald", "curvature-oracle", "bounds")

DEFAULT_TOL = {
    "invariance": 1e-8,
    "pseudoconvexity": 1e-9,
    "kahler-berwald": 1e-5,
    "curvature-oracle": 5e-4,
    "bounds": 1e-9,
}


@dataclass
class Check:
    name: str
    passed: bool
    value: float
    margin: float
    digest: str
    detail: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        out = {
            "name": self.name,
            "pass": self.passed,
            "value": self.value,
            "margin": self.margin,
            "worst_case_inputs_digest": self.digest,
        }
        out.update(self.detail)
        return out


@dataclass
class VerificationReport:
    suite: str
    spec: DomainSpec
    samples: int
    seed: int
    tol: float
    fd_step: float
    checks: list
    wall_time: float | None = None

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def to_json(self) -> dict:
        worst = max(self.checks, key=lambda c: -c.margin) if self.checks else None
        return {
            "suite": self.suite,
            "spec": self.spec.to_json(),
            "samples": self.samples,
            "seed": self.seed,
            "tolerances": {"tol": self.tol, "fd_step": self.fd_step},
            "pass": self.passed,
            "n_checks": len(self.checks),
            "n_failed": sum(not c.passed for c in self.checks),
            "worst_margin": None if worst is None else worst.margin,
            "checks": [c.to_json() for c in self.checks],
            "wall_time": self.wall_time,
        }


def sample_seed(seed: int, i: int, stream: int = 0) -> int:
    return int(np.random.SeedSequence([int(seed), int(i), int(stream)]).generate_state(1)[0])


def _rel(a: float, b: float) -> float:
    return abs(a - b) / max(abs(b), 1e-300)


def _invariance(spec, seed, i, tol, h):
    Z0 = sample_point(spec, sample_seed(seed, i, 0))
    Z = sample_point(spec, sample_seed(seed, i, 1))
    V = sample_tangent(spec, sample_seed(seed, i, 2))
    aut = normalizer(spec, Z0)
    before = metric(spec, Z, V).F
    after = metric(spec, apply(aut, Z), differential_at(aut, Z, V)).F
    drift = _rel(after, before)
    return Check("aut-invariance", drift < tol, drift, tol - drift, inputs_digest(spec, Z, V, None, seed))


def vertical_hessian_fd(spec: DomainSpec, V, h: float) -> np.ndarray:
    """Central-difference vertical Hessian of F^2(0; .) at V in chart coordinates."""
    chart = spec.chart
    zero = np.zeros(spec.shape)
    return wirtinger_hessian(lambda v: metric(spec, zero, chart.unflatten(v)).F_squared, chart.flatten(V), h)


def vertical_hessian(spec: DomainSpec, V):
    """Analytic vertical Hessian of F^2(0; .) at V, plus the predicted spectrum for kind IV."""
    if spec.kind == "IV":
        H, sp = hessian_IV(np.asarray(V).reshape(-1), spec.profile)
        return spec.scale * H, sp
    return hessian_origin(spec, V), None


def _pseudoconvexity(spec, seed, i, tol, h):
    V = sample_tangent(spec, sample_seed(seed, i, 2))
    H, sp = vertical_hessian(spec, V)
    Hfd = vertical_hessian_fd(spec, V, h)
    lam = np.linalg.eigvalsh(0.5 * (H + H.conj().T))
    lam_fd = np.linalg.eigvalsh(0.5 * (Hfd + Hfd.conj().T))
    ratio = min(lam[0] / np.linalg.norm(H, 2), lam_fd[0] / np.linalg.norm(Hfd, 2))
    spectral_err = 0.0
    if sp is not None:
        spectral_err = float(np.abs(lam / spec.scale - np.array(sp.predicted)).max())
    ok = ratio > 1e-10 and spectral_err < tol
    detail = {"min_eig_ratio": float(ratio), "spectrum_error": spectral_err}
    margin = min(ratio - 1e-10, tol - spectral_err)
    return Check("strong-pseudoconvexity", bool(ok), float(ratio), float(margin), inputs_digest(spec, np.zeros(spec.shape), V, None, seed), detail)


def _kahler_berwald(spec, seed, i, tol, h):
    V = sample_tangent(spec, sample_seed(seed, i, 2))
    r = kahler_berwald_residual(spec, V, h)
    return Check("kahler-berwald", r < tol, r, tol - r, inputs_digest(spec, np.zeros(spec.shape), V, None, seed))


def _curvature_oracle(spec, seed, i, tol, h):
    V = sample_tangent(spec, sample_seed(seed, i, 2))
    W = sample_tangent(spec, sample_seed(seed, i, 3))
    zero = np.zeros(spec.shape)
    H = base_hessian(spec, V, h)
    K, Kf = sectional(spec, zero, V), fd_sectional_oracle(spec, V, h, H)
    B, Bf = bisectional(spec, zero, V, W), fd_bisectional_oracle(spec, V, W, h, H)
    eK = _rel(Kf, K)
    # bisectional can vanish; measure it relative to the sectional scale
    eB = abs(Bf - B) / max(abs(B), abs(K))
    err = max(eK, eB)
    return Check("curvature-oracle", err < tol, err, tol - err, inputs_digest(spec, zero, V, W, seed),
                 {"K": K, "K_fd": Kf, "B": B, "B_fd": Bf})


def phi_nondecreasing(spec: DomainSpec, grid: int = DEFAULT.phi_grid) -> bool:
    s = np.linspace(0.0, 1.0, grid)
    with np.errstate(all="ignore"):
        d = np.array([spec.profile.d1(float(x)) for x in s])
    return bool(np.all(np.nan_to_num(d, nan=-1.0) >= 0))


_BOUND_CACHE: dict = {}


def _bound_constants(spec: DomainSpec):
    key = json.dumps(spec.to_json(), sort_keys=True)
    if key not in _BOUND_CACHE:
        # the kind-IV bisectional sign and floor need phi' >= 0
        bis = spec.kind != "IV" or phi_nondecreasing(spec)
        _BOUND_CACHE[key] = (bounds(spec), bisectional_bounds(spec), bis)
    return _BOUND_CACHE[key]


def _bounds(spec, seed, i, tol, h):
    sb, bb, bis = _bound_constants(spec)
    Z = sample_point(spec, sample_seed(seed, i, 1))
    V = sample_tangent(spec, sample_seed(seed, i, 2))
    W = sample_tangent(spec, sample_seed(seed, i, 3))
    K = sectional(spec, Z, V)
    m = min(K - (sb.lower - tol), (sb.upper + tol) - K, -K)
    detail = {"K": K}
    if bis:
        B = bisectional(spec, Z, V, W)
        m = min(m, 1e-10 - B, B - (bb.lower - tol))
        detail["B"] = B
    return Check("pinching-and-sign", m > 0, K, m, inputs_digest(spec, Z, V, W, seed), detail)


_RUNNERS = {
    "invariance": _invariance,
    "pseudoconvexity": _pseudoconvexity,
    "kahler-berwald": _kahler_berwald,
    "curvature-oracle": _curvature_oracle,
    "bounds": _bounds,
}


def run_suite(suite: str, spec: DomainSpec, samples: int, seed: int, tol: float | None = None,
              fd_step: float = DEFAULT.fd_step, jobs: int = 1, timing: bool = False) -> VerificationReport:
    if suite not in _RUNNERS:
        raise BadParams(f"unknown suite {suite!r}; choose from {', '.join(SUITES)}")
    if samples < 1:
        raise BadParams("samples must be positive")
    tol = DEFAULT_TOL[suite] if tol is None else float(tol)
    fn = _RUNNERS[suite]
    start = time.perf_counter()
    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as ex:
            checks = list(ex.map(lambda i: fn(spec, seed, i, tol, fd_step), range(samples)))
    else:
        checks = [fn(spec, seed, i, tol, fd_step) for i in range(samples)]
    checks.sort(key=lambda c: c.digest)
    wall = time.perf_counter() - start if timing else None
    return VerificationReport(suite, spec, samples, seed, tol, fd_step, checks, wall)
