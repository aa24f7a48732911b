"""The map families: evaluation, branch Jacobians, and orbit sampling.

All families are piecewise affine except the logistic map, which is kept
around as the smooth reference family.  Points that land exactly on a
switching boundary evaluate through the left/lower branch; both branches
agree there, so the convention only matters for itineraries and Jacobians.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "TENT",
    "SKEW_TENT",
    "GENERAL_SKEW_TENT",
    "COUPLED_SKEW_TENT",
    "LOGISTIC",
    "LOZI",
    "BCNF",
    "MapSpec",
    "DomainError",
    "BoundaryPointError",
    "Orbit",
    "tent",
    "skew_tent",
    "general_skew_tent",
    "coupled_skew_tent",
    "logistic",
    "lozi",
    "bcnf",
    "evaluate",
    "step_many",
    "jacobian",
    "orbit",
    "critical_point",
    "is_unimodal",
]

TENT = "tent"
SKEW_TENT = "skewtent"
GENERAL_SKEW_TENT = "genskewtent"
COUPLED_SKEW_TENT = "coupledskewtent"
LOGISTIC = "logistic"
LOZI = "lozi"
BCNF = "bcnf"

_PARAM_NAMES = {
    TENT: ("s",),
    SKEW_TENT: ("s",),
    GENERAL_SKEW_TENT: ("s", "t"),
    COUPLED_SKEW_TENT: ("s", "omega"),
    LOGISTIC: ("r",),
    LOZI: ("a", "b"),
    BCNF: ("tau_l", "delta_l", "tau_r", "delta_r"),
}

_DIMENSION = {
    TENT: 1,
    SKEW_TENT: 1,
    GENERAL_SKEW_TENT: 1,
    COUPLED_SKEW_TENT: 2,
    LOGISTIC: 1,
    LOZI: 2,
    BCNF: 2,
}

# families whose domain is [0,1]^dim rather than all of R^dim
_UNIT_DOMAIN = {TENT, SKEW_TENT, GENERAL_SKEW_TENT, COUPLED_SKEW_TENT, LOGISTIC}

_DOMAIN_TOL = 1e-9


class DomainError(ValueError):
    """Point lies outside the family's domain."""


class BoundaryPointError(ValueError):
    """Jacobian requested exactly on a switching boundary without a side."""


@dataclass(frozen=True)
class MapSpec:
    """A named map family with a fixed parameter vector."""

    family: str
    params: tuple

    def __post_init__(self):
        if self.family not in _PARAM_NAMES:
            raise ValueError(f"unknown family {self.family!r}")
        p = tuple(float(v) for v in self.params)
        names = _PARAM_NAMES[self.family]
        if len(p) != len(names):
            raise ValueError(f"{self.family} takes parameters {names}, got {len(p)} values")
        if not all(math.isfinite(v) for v in p):
            raise ValueError("parameters must be finite")
        _validate_params(self.family, p)
        object.__setattr__(self, "params", p)

    @property
    def dim(self) -> int:
        return _DIMENSION[self.family]

    @property
    def param_dict(self) -> dict:
        return dict(zip(_PARAM_NAMES[self.family], self.params))

    def __str__(self) -> str:
        pars = ", ".join(f"{k}={v:g}" for k, v in self.param_dict.items())
        return f"{self.family}({pars})"

    def to_json(self) -> dict:
        return {"family": self.family, "params": self.param_dict}

    @classmethod
    def from_json(cls, obj) -> "MapSpec":
        if isinstance(obj, str):
            obj = json.loads(obj)
        family = obj["family"]
        names = _PARAM_NAMES.get(family)
        if names is None:
            raise ValueError(f"unknown family {family!r}")
        params = obj["params"]
        missing = [n for n in names if n not in params]
        if missing:
            raise ValueError(f"{family} is missing parameters {missing}")
        return cls(family, tuple(params[n] for n in names))


def _validate_params(family, p):
    if family == TENT:
        s = p[0]
        if not 1.0 < s <= 2.0:
            raise ValueError("tent map requires 1 < s <= 2")
    elif family == SKEW_TENT:
        s = p[0]
        if not 1.0 < s < 2.0:
            raise ValueError("skew tent map requires 1 < s < 2")
    elif family == GENERAL_SKEW_TENT:
        s, t = p
        if s <= 1.0:
            raise ValueError("generalized skew tent map requires s > 1")
        if not 0.0 < t < 1.0 / s:
            raise ValueError("generalized skew tent map requires 0 < t < 1/s")
    elif family == COUPLED_SKEW_TENT:
        s, omega = p
        if not 1.0 < s < 2.0:
            raise ValueError("coupled skew tent map requires 1 < s < 2")
        if not 0.0 <= omega <= 0.5:
            raise ValueError("coupled skew tent map requires 0 <= omega <= 1/2")
    elif family == LOGISTIC:
        r = p[0]
        if not 0.0 < r <= 4.0:
            raise ValueError("logistic map requires 0 < r <= 4")


def tent(s: float) -> MapSpec:
    return MapSpec(TENT, (s,))


def skew_tent(s: float) -> MapSpec:
    return MapSpec(SKEW_TENT, (s,))


def general_skew_tent(s: float, t: float) -> MapSpec:
    return MapSpec(GENERAL_SKEW_TENT, (s, t))


def coupled_skew_tent(s: float, omega: float) -> MapSpec:
    return MapSpec(COUPLED_SKEW_TENT, (s, omega))


def logistic(r: float) -> MapSpec:
    return MapSpec(LOGISTIC, (r,))


def lozi(a: float, b: float) -> MapSpec:
    return MapSpec(LOZI, (a, b))


def bcnf(tau_l: float, delta_l: float, tau_r: float, delta_r: float) -> MapSpec:
    return MapSpec(BCNF, (tau_l, delta_l, tau_r, delta_r))


# ---------------------------------------------------------------------------
# evaluation kernels (vectorized, no domain checks)
# ---------------------------------------------------------------------------


def _skew_tent_1d(s, z):
    return np.where(z <= 1.0 / s, s * z, s / (s - 1.0) * (1.0 - z))


def step_many(spec: MapSpec, X: np.ndarray) -> np.ndarray:
    """Apply the map to an (n, dim) batch of points; no domain checks."""
    fam = spec.family
    p = spec.params
    if fam == TENT:
        s = p[0]
        x = X[:, 0]
        return np.where(x <= 0.5, s * x, s * (1.0 - x))[:, None]
    if fam == SKEW_TENT:
        return _skew_tent_1d(p[0], X[:, 0])[:, None]
    if fam == GENERAL_SKEW_TENT:
        s, t = p
        z = X[:, 0]
        return np.where(z <= t, s * z, s * t / (1.0 - t) * (1.0 - z))[:, None]
    if fam == LOGISTIC:
        r = p[0]
        x = X[:, 0]
        return (r * x * (1.0 - x))[:, None]
    if fam == COUPLED_SKEW_TENT:
        s, omega = p
        u = _skew_tent_1d(s, X[:, 0])
        v = _skew_tent_1d(s, X[:, 1])
        return np.column_stack([(1.0 - omega) * u + omega * v, omega * u + (1.0 - omega) * v])
    if fam == LOZI:
        a, b = p
        x1, x2 = X[:, 0], X[:, 1]
        return np.column_stack([1.0 - a * np.abs(x1) + x2, b * x1])
    if fam == BCNF:
        tau_l, delta_l, tau_r, delta_r = p
        x1, x2 = X[:, 0], X[:, 1]
        left = x1 <= 0.0
        tau = np.where(left, tau_l, tau_r)
        delta = np.where(left, delta_l, delta_r)
        return np.column_stack([tau * x1 + x2 + 1.0, -delta * x1])
    raise ValueError(f"unknown family {fam!r}")


def _check_domain(spec: MapSpec, X: np.ndarray):
    if spec.family in _UNIT_DOMAIN:
        if np.any(X < -_DOMAIN_TOL) or np.any(X > 1.0 + _DOMAIN_TOL):
            raise DomainError(f"point outside [0,1]^{spec.dim} domain of {spec.family}")


def _as_state(spec: MapSpec, x) -> np.ndarray:
    arr = np.atleast_1d(np.asarray(x, dtype=float))
    if arr.shape != (spec.dim,):
        raise ValueError(f"{spec.family} takes points of dimension {spec.dim}")
    return arr


def evaluate(spec: MapSpec, x):
    """Image of a single point under the map.

    Scalars are accepted for 1-D families; the return type mirrors the input
    (scalar in, scalar out).  For unit-domain families the input must lie in
    [0,1]^dim and the output is clipped back to the domain to absorb rounding.
    """
    arr = _as_state(spec, x)
    _check_domain(spec, arr)
    out = step_many(spec, arr[None, :])[0]
    if spec.family in _UNIT_DOMAIN:
        out = np.clip(out, 0.0, 1.0)
    if spec.dim == 1 and np.isscalar(x):
        return float(out[0])
    return out


def _branch_sides(spec: MapSpec, x: np.ndarray) -> list[float]:
    """Signed position relative to each switching boundary (one per boundary)."""
    fam = spec.family
    if fam == TENT:
        return [x[0] - 0.5]
    if fam == SKEW_TENT:
        return [x[0] - 1.0 / spec.params[0]]
    if fam == GENERAL_SKEW_TENT:
        return [x[0] - spec.params[1]]
    if fam == COUPLED_SKEW_TENT:
        c = 1.0 / spec.params[0]
        return [x[0] - c, x[1] - c]
    if fam in (LOZI, BCNF):
        return [x[0]]
    return []  # logistic: smooth


def jacobian(spec: MapSpec, x, side=None) -> np.ndarray:
    """Branch derivative at x as a (dim, dim) matrix.

    Exactly on a switching boundary the branch is ambiguous: pass
    side="left"/"right" (applied to every boundary coordinate) or get
    BoundaryPointError.
    """
    arr = _as_state(spec, x)
    sides = _branch_sides(spec, arr)
    resolved = []
    for value in sides:
        if value == 0.0:
            if side is None:
                raise BoundaryPointError(f"{spec.family} Jacobian at switching boundary, pick a side")
            resolved.append(side == "right")
        else:
            resolved.append(value > 0.0)

    fam = spec.family
    p = spec.params
    if fam == TENT:
        s = p[0]
        return np.array([[-s if resolved[0] else s]])
    if fam == SKEW_TENT:
        s = p[0]
        return np.array([[-s / (s - 1.0) if resolved[0] else s]])
    if fam == GENERAL_SKEW_TENT:
        s, t = p
        return np.array([[-s * t / (1.0 - t) if resolved[0] else s]])
    if fam == LOGISTIC:
        r = p[0]
        return np.array([[r * (1.0 - 2.0 * arr[0])]])
    if fam == COUPLED_SKEW_TENT:
        s, omega = p
        slopes = [(-s / (s - 1.0) if hi else s) for hi in resolved]
        return np.array(
            [
                [(1.0 - omega) * slopes[0], omega * slopes[1]],
                [omega * slopes[0], (1.0 - omega) * slopes[1]],
            ]
        )
    if fam == LOZI:
        a, b = p
        return np.array([[-a if resolved[0] else a, 1.0], [b, 0.0]])
    if fam == BCNF:
        tau_l, delta_l, tau_r, delta_r = p
        if resolved[0]:
            return np.array([[tau_r, 1.0], [-delta_r, 0.0]])
        return np.array([[tau_l, 1.0], [-delta_l, 0.0]])
    raise ValueError(f"unknown family {fam!r}")


def bcnf_branch_matrix(tau: float, delta: float) -> np.ndarray:
    """The affine part of one border-collision branch."""
    return np.array([[tau, 1.0], [-delta, 0.0]])


@dataclass(frozen=True)
class Orbit:
    """Sampled orbit segment with divergence bookkeeping."""

    points: np.ndarray  # (n_kept, dim)
    escaped: bool
    escape_index: int | None = None

    def __len__(self):
        return self.points.shape[0]


def orbit(
    spec: MapSpec,
    x0,
    n_transient: int,
    n_keep: int,
    escape_radius: float = 1e6,
) -> Orbit:
    """Iterates f^(n_transient+1)(x0) ... f^(n_transient+n_keep)(x0).

    Stops early and sets the escape flag if an iterate leaves the ball of
    escape_radius around the origin.
    """
    if n_keep < 1:
        raise ValueError("n_keep must be at least 1")
    x = _as_state(spec, x0)
    _check_domain(spec, x)
    clip = spec.family in _UNIT_DOMAIN
    out = np.empty((n_keep, spec.dim))
    total = n_transient + n_keep
    for i in range(total):
        x = step_many(spec, x[None, :])[0]
        if clip:
            np.clip(x, 0.0, 1.0, out=x)
        elif not np.all(np.abs(x) <= escape_radius):
            kept = max(0, i - n_transient)
            return Orbit(points=out[:kept].copy(), escaped=True, escape_index=i + 1)
        if i >= n_transient:
            out[i - n_transient] = x
    return Orbit(points=out, escaped=False)


def orbit_many(
    spec: MapSpec,
    X0: np.ndarray,
    n_transient: int,
    n_keep: int,
    escape_radius: float = 1e6,
    keep_every: int = 1,
) -> tuple[np.ndarray, np.ndarray]:
    """Lockstep orbits of a batch of seeds.

    Returns (samples, alive): samples stacks the per-step states kept after
    the transient (shape (n_stored, n_seeds, dim)), alive marks seeds whose
    orbit never left the escape radius.  Escaped seeds hold NaN from the
    escape step onwards.
    """
    X = np.array(np.atleast_2d(X0), dtype=float)
    clip = spec.family in _UNIT_DOMAIN
    n_seeds = X.shape[0]
    alive = np.ones(n_seeds, dtype=bool)
    stored = []
    for i in range(n_transient + n_keep):
        X = step_many(spec, X)
        if clip:
            np.clip(X, 0.0, 1.0, out=X)
        else:
            bad = alive & ~(np.max(np.abs(X), axis=1) <= escape_radius)
            if np.any(bad):
                alive &= ~bad
                X[~alive] = np.nan
        if i >= n_transient and (i - n_transient) % keep_every == 0:
            stored.append(X.copy())
    return np.array(stored), alive


def critical_point(spec: MapSpec) -> float:
    """Location of the peak for the unimodal 1-D families."""
    fam = spec.family
    if fam == TENT or fam == LOGISTIC:
        return 0.5
    if fam == SKEW_TENT:
        return 1.0 / spec.params[0]
    if fam == GENERAL_SKEW_TENT:
        return spec.params[1]
    raise ValueError(f"{fam} is not a unimodal interval family")


def is_unimodal(spec: MapSpec) -> bool:
    return spec.family in (TENT, SKEW_TENT, GENERAL_SKEW_TENT, LOGISTIC)
