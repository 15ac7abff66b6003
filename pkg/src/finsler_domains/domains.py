"""Domain specifications, membership, sampling and flattening charts.

Points and tangents are numpy arrays in the domain's matrix shape: m x n for
R_I, p x p symmetric for R_II, q x q skew-symmetric for R_III and 1 x N row
vectors for R_IV.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
import math

import numpy as np

from .errors import BadParams, SamplerExhausted, ShapeMismatch, SymmetryViolation
from .profiles import PhiProfile, get_profile
from .tolerances import DEFAULT

KINDS = ("I", "II", "III", "IV")
_MIN_DIMS = {"II": 2, "III": 4, "IV": 5}
_RELAXED_MIN = {"II": 1, "III": 2, "IV": 1}
MAX_ATTEMPTS = 10000


@dataclass(frozen=True)
class DomainSpec:
    """A classical domain together with the metric parameters.

    ``dims`` is ``(m, n)`` for kind I and a one-tuple otherwise. ``t`` and
    ``k`` parametrize kinds I-III; ``profile`` parametrizes kind IV.
    ``relaxed`` admits dimensions below the standing assumptions
    (p >= 2, q >= 4, N >= 5).
    """

    kind: str
    dims: tuple
    t: float = 0.0
    k: int = 2
    profile: PhiProfile | None = field(default=None, compare=False)
    relaxed: bool = False

    def __post_init__(self):
        if self.kind not in KINDS:
            raise BadParams(f"unknown domain kind {self.kind!r}")
        dims = tuple(int(d) for d in np.atleast_1d(self.dims))
        object.__setattr__(self, "dims", dims)
        if self.kind == "I":
            if len(dims) != 2:
                raise BadParams("kind I needs dims (m, n)")
            m, n = dims
            if not 1 <= m <= n:
                raise BadParams(f"kind I needs 1 <= m <= n, got {dims}")
        else:
            if len(dims) != 1:
                raise BadParams(f"kind {self.kind} needs a single dimension")
            lo = (_RELAXED_MIN if self.relaxed else _MIN_DIMS)[self.kind]
            if dims[0] < lo:
                flag = "" if self.relaxed else " (set relaxed=True for small cases)"
                raise BadParams(f"kind {self.kind} needs dimension >= {lo}{flag}")
        if self.kind == "IV":
            prof = get_profile(self.profile if self.profile is not None else "bergman")
            object.__setattr__(self, "profile", prof)
        else:
            if not (math.isfinite(self.t) and self.t >= 0):
                raise BadParams(f"t must be a nonnegative real, got {self.t}")
            if int(self.k) != self.k or self.k < 2:
                raise BadParams(f"k must be an integer >= 2, got {self.k}")
            object.__setattr__(self, "t", float(self.t))
            object.__setattr__(self, "k", int(self.k))

    @property
    def shape(self) -> tuple:
        if self.kind == "I":
            return self.dims
        if self.kind == "IV":
            return (1, self.dims[0])
        return (self.dims[0], self.dims[0])

    @property
    def dim(self) -> int:
        """Complex dimension of the domain."""
        d = self.dims
        return {
            "I": lambda: d[0] * d[1],
            "II": lambda: d[0] * (d[0] + 1) // 2,
            "III": lambda: d[0] * (d[0] - 1) // 2,
            "IV": lambda: d[0],
        }[self.kind]()

    @property
    def scale(self) -> int:
        """Bergman constant: m+n, p+1, q-1 or 2N."""
        d = self.dims
        return {"I": sum(d), "II": d[0] + 1, "III": d[0] - 1, "IV": 2 * d[0]}[self.kind]

    @property
    def rank(self) -> int:
        return min(self.shape) if self.kind != "IV" else 2

    @cached_property
    def chart(self) -> "FlatteningChart":
        return FlatteningChart.for_spec(self)

    def dims_dict(self) -> dict:
        names = {"I": ("m", "n"), "II": ("p",), "III": ("q",), "IV": ("N",)}[self.kind]
        return dict(zip(names, self.dims))

    def to_json(self) -> dict:
        out = {"kind": self.kind, "dims": self.dims_dict()}
        if self.kind == "IV":
            out["phi"] = self.profile.to_json()
        else:
            out["t"] = self.t
            out["k"] = self.k
        if self.relaxed:
            out["relaxed"] = True
        return out

    @classmethod
    def from_json(cls, obj: dict) -> "DomainSpec":
        try:
            kind = obj["kind"]
            dims = obj["dims"]
        except (KeyError, TypeError):
            raise BadParams("spec JSON needs 'kind' and 'dims'") from None
        order = {"I": ("m", "n"), "II": ("p",), "III": ("q",), "IV": ("N",)}.get(kind)
        if order is None:
            raise BadParams(f"unknown domain kind {kind!r}")
        if isinstance(dims, dict):
            try:
                dims = tuple(dims[k] for k in order)
            except KeyError as exc:
                raise BadParams(f"missing dimension {exc}") from None
        return cls(
            kind,
            dims,
            t=float(obj.get("t", 0.0)),
            k=int(obj.get("k", 2)),
            profile=obj.get("phi"),
            relaxed=bool(obj.get("relaxed", False)),
        )


@dataclass(frozen=True)
class Membership:
    inside: bool
    margin: float

    def __bool__(self) -> bool:
        return self.inside


def as_point(spec: DomainSpec, Z, tol: float = DEFAULT.symmetry) -> np.ndarray:
    """Coerce Z to the spec's matrix shape and symmetrize it exactly.

    Kind IV accepts a flat length-N vector as well as a 1 x N matrix.
    """
    Z = np.asarray(Z, dtype=complex)
    if spec.kind == "IV" and Z.ndim == 1:
        Z = Z.reshape(1, -1)
    if Z.shape != spec.shape:
        raise ShapeMismatch(f"expected shape {spec.shape}, got {Z.shape}")
    if not np.all(np.isfinite(Z)):
        raise ShapeMismatch("non-finite entries")
    if spec.kind == "II":
        d = np.abs(Z - Z.T).max(initial=0.0)
        if d > tol:
            raise SymmetryViolation(f"kind II needs a symmetric matrix (defect {d:.2e})")
        Z = 0.5 * (Z + Z.T)
    elif spec.kind == "III":
        d = np.abs(Z + Z.T).max(initial=0.0)
        if d > tol:
            raise SymmetryViolation(f"kind III needs a skew-symmetric matrix (defect {d:.2e})")
        Z = 0.5 * (Z - Z.T)
    return Z


def delta_IV(z: np.ndarray) -> float:
    """1 + |zz'|^2 - 2 z z^* for a flat vector z."""
    c = z @ z
    return float(1.0 + abs(c) ** 2 - 2.0 * np.vdot(z, z).real)


def contains(spec: DomainSpec, Z) -> Membership:
    """Membership test; the margin is the minimum eigenvalue or scalar slack."""
    Z = as_point(spec, Z)
    if spec.kind == "IV":
        z = Z[0]
        margin = min(delta_IV(z), 1.0 - abs(z @ z))
    else:
        # I - Z Z^* covers all three kinds: Z^* = Z-bar for II and -Z-bar for III
        sigma = np.linalg.norm(Z, 2) if Z.size else 0.0
        margin = 1.0 - sigma**2
    return Membership(bool(margin > 0), float(margin))


def _symmetry_class(spec: DomainSpec, G: np.ndarray) -> np.ndarray:
    if spec.kind == "II":
        return 0.5 * (G + G.T)
    if spec.kind == "III":
        return 0.5 * (G - G.T)
    return G


def _gaussian(spec: DomainSpec, rng: np.random.Generator) -> np.ndarray:
    shape = spec.shape
    G = rng.normal(size=shape) + 1j * rng.normal(size=shape)
    return _symmetry_class(spec, G)


def sample_point(spec: DomainSpec, seed: int, relaxed_margin: float = DEFAULT.sample_margin) -> np.ndarray:
    """Deterministic interior point with membership margin above ``relaxed_margin``.

    Kinds I-III: a Gaussian matrix of the right symmetry class rescaled to
    spectral norm u**(1/r), u ~ U(0, 0.98), r the rank. Kind IV: rejection
    sampling in the Euclidean ball of radius 0.9.
    """
    rng = np.random.default_rng([int(seed), 0])
    for _ in range(MAX_ATTEMPTS):
        G = _gaussian(spec, rng)
        norm = np.linalg.norm(G, 2) if spec.kind != "IV" else np.linalg.norm(G)
        if norm == 0:
            continue
        if spec.kind == "IV":
            Z = G * (0.9 * rng.uniform() / norm)
        else:
            Z = G * (rng.uniform(0.0, 0.98) ** (1.0 / spec.rank) / norm)
        if contains(spec, Z).margin > relaxed_margin:
            return Z
    raise SamplerExhausted(f"no interior point found in {MAX_ATTEMPTS} attempts")


def sample_tangent(spec: DomainSpec, seed: int) -> np.ndarray:
    """Deterministic nonzero tangent of unit Frobenius norm."""
    rng = np.random.default_rng([int(seed), 1])
    for _ in range(MAX_ATTEMPTS):
        G = _gaussian(spec, rng)
        norm = np.linalg.norm(G)
        if norm > 0:
            return G / norm
    raise SamplerExhausted("could not draw a nonzero tangent")


@dataclass(frozen=True)
class FlatteningChart:
    """Linear chart between matrix coordinates and C^d.

    Kind II uses v_ii = Z_ii and v_ij = sqrt(2) Z_ij (i < j); kind III keeps
    the strict upper triangle; kinds I and IV flatten row-major.
    """

    kind: str
    shape: tuple
    dim: int
    index: tuple  # (i, j) matrix slot for each flat coordinate
    weights: tuple  # v = weight * Z[i, j]

    @classmethod
    def for_spec(cls, spec: DomainSpec) -> "FlatteningChart":
        r, c = spec.shape
        if spec.kind in ("I", "IV"):
            idx = [(i, j) for i in range(r) for j in range(c)]
            w = [1.0] * len(idx)
        elif spec.kind == "II":
            idx = [(i, j) for i in range(r) for j in range(i, r)]
            w = [1.0 if i == j else math.sqrt(2.0) for i, j in idx]
        else:
            idx = [(i, j) for i in range(r) for j in range(i + 1, r)]
            w = [1.0] * len(idx)
        return cls(spec.kind, (r, c), len(idx), tuple(idx), tuple(w))

    @cached_property
    def _rows(self) -> np.ndarray:
        return np.array([i for i, _ in self.index], dtype=int)

    @cached_property
    def _cols(self) -> np.ndarray:
        return np.array([j for _, j in self.index], dtype=int)

    @cached_property
    def _w(self) -> np.ndarray:
        return np.array(self.weights)

    def flatten(self, V, tol: float = DEFAULT.symmetry) -> np.ndarray:
        V = np.asarray(V, dtype=complex)
        if self.kind == "IV" and V.ndim == 1:
            V = V.reshape(1, -1)
        if V.shape != self.shape:
            raise ShapeMismatch(f"expected shape {self.shape}, got {V.shape}")
        if self.kind == "II" and np.abs(V - V.T).max(initial=0.0) > tol:
            raise SymmetryViolation("kind II tangent must be symmetric")
        if self.kind == "III" and np.abs(V + V.T).max(initial=0.0) > tol:
            raise SymmetryViolation("kind III tangent must be skew-symmetric")
        return V[self._rows, self._cols] * self._w

    def unflatten(self, v) -> np.ndarray:
        v = np.asarray(v, dtype=complex).reshape(-1)
        if v.shape[0] != self.dim:
            raise ShapeMismatch(f"expected {self.dim} coordinates, got {v.shape[0]}")
        V = np.zeros(self.shape, dtype=complex)
        vals = v / self._w
        V[self._rows, self._cols] = vals
        if self.kind == "II":
            V[self._cols, self._rows] = vals
        elif self.kind == "III":
            V[self._cols, self._rows] = -vals
        return V

    def basis(self) -> list:
        return [self.unflatten(np.eye(self.dim)[a]) for a in range(self.dim)]


def flatten(chart: FlatteningChart, V) -> np.ndarray:
    return chart.flatten(V)


def unflatten(chart: FlatteningChart, v) -> np.ndarray:
    return chart.unflatten(v)
