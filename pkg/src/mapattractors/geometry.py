"""Compact subsets of R^1/R^2 and Hausdorff-metric distances between them.

Three set representations are supported: finite point clouds, finite unions
of closed intervals, and filled convex polygons.  Distances between clouds
are exact; 1-D computations are exact via endpoint arithmetic; anything
involving a polygon is computed on a boundary + interior sampling of the
polygon and carries a one-resolution error bar.
"""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass

import numpy as np
from scipy.spatial import cKDTree
from scipy.spatial.distance import cdist

__all__ = [
    "CompactSet",
    "PointCloud",
    "IntervalUnion",
    "ConvexPolygon",
    "DimensionMismatchError",
    "as_compact_set",
    "merge_intervals",
    "semi_distance",
    "hausdorff_distance",
    "inflate",
    "connected_components",
    "set_to_json",
    "set_from_json",
    "read_set",
    "write_set",
]

DEFAULT_RELATIVE_RESOLUTION = 1e-3

# Clouds below this size skip the KD-tree; brute force is faster there.
_BRUTE_FORCE_CUTOFF = 64


class DimensionMismatchError(ValueError):
    """Sets live in different phase-space dimensions."""


class CompactSet:
    """Base class for the three compact-set representations."""

    dim: int

    def to_cloud(self, resolution: float | None = None) -> np.ndarray:
        """Sample the set as an (n, dim) array of points."""
        raise NotImplementedError

    def diameter(self) -> float:
        raise NotImplementedError

    def bounds(self) -> np.ndarray:
        """Axis-aligned bounding box, shape (dim, 2)."""
        raise NotImplementedError


def _as_points(points, dim=None) -> np.ndarray:
    pts = np.asarray(points, dtype=float)
    if pts.ndim == 1:
        pts = pts[:, None]
    if pts.ndim != 2 or pts.shape[0] == 0:
        raise ValueError("point cloud must be a nonempty (n, d) array")
    if pts.shape[1] not in (1, 2):
        raise ValueError(f"only dimensions 1 and 2 are supported, got {pts.shape[1]}")
    if dim is not None and pts.shape[1] != dim:
        raise DimensionMismatchError(f"expected dimension {dim}, got {pts.shape[1]}")
    if not np.all(np.isfinite(pts)):
        raise ValueError("point coordinates must be finite")
    return pts


@dataclass(frozen=True)
class PointCloud(CompactSet):
    """Finite set of points in R^1 or R^2."""

    points: np.ndarray

    def __post_init__(self):
        pts = _as_points(self.points)
        pts.flags.writeable = False
        object.__setattr__(self, "points", pts)

    @property
    def dim(self) -> int:
        return self.points.shape[1]

    def __len__(self) -> int:
        return self.points.shape[0]

    def to_cloud(self, resolution=None) -> np.ndarray:
        return self.points

    def diameter(self) -> float:
        lo = self.points.min(axis=0)
        hi = self.points.max(axis=0)
        return float(np.linalg.norm(hi - lo))

    def bounds(self) -> np.ndarray:
        return np.stack([self.points.min(axis=0), self.points.max(axis=0)], axis=1)


@dataclass(frozen=True)
class IntervalUnion(CompactSet):
    """Finite union of pairwise-disjoint closed intervals, sorted ascending."""

    intervals: np.ndarray

    def __post_init__(self):
        iv = np.asarray(self.intervals, dtype=float)
        if iv.ndim != 2 or iv.shape[1] != 2 or iv.shape[0] == 0:
            raise ValueError("intervals must be a nonempty (m, 2) array")
        if not np.all(np.isfinite(iv)):
            raise ValueError("interval endpoints must be finite")
        if np.any(iv[:, 0] > iv[:, 1]):
            raise ValueError("intervals must satisfy lo <= hi")
        if np.any(iv[1:, 0] <= iv[:-1, 1]):
            raise ValueError("intervals must be sorted and pairwise disjoint")
        iv.flags.writeable = False
        object.__setattr__(self, "intervals", iv)

    @property
    def dim(self) -> int:
        return 1

    def __len__(self) -> int:
        return self.intervals.shape[0]

    def to_cloud(self, resolution=None) -> np.ndarray:
        if resolution is None:
            resolution = max(self.diameter(), 1.0) * DEFAULT_RELATIVE_RESOLUTION
        pieces = []
        for lo, hi in self.intervals:
            n = max(2, int(math.ceil((hi - lo) / resolution)) + 1)
            pieces.append(np.linspace(lo, hi, n))
        return np.concatenate(pieces)[:, None]

    def diameter(self) -> float:
        return float(self.intervals[-1, 1] - self.intervals[0, 0])

    def bounds(self) -> np.ndarray:
        return np.array([[self.intervals[0, 0], self.intervals[-1, 1]]])

    def measure(self) -> float:
        """Total length of the union."""
        return float(np.sum(self.intervals[:, 1] - self.intervals[:, 0]))


def merge_intervals(intervals, gap_tol: float = 0.0) -> IntervalUnion:
    """Sort raw intervals and merge any that overlap or sit within gap_tol."""
    iv = np.asarray(intervals, dtype=float).reshape(-1, 2)
    iv = iv[np.argsort(iv[:, 0])]
    merged = [list(iv[0])]
    for lo, hi in iv[1:]:
        if lo <= merged[-1][1] + gap_tol:
            merged[-1][1] = max(merged[-1][1], hi)
        else:
            merged.append([lo, hi])
    return IntervalUnion(np.array(merged))


@dataclass(frozen=True)
class ConvexPolygon(CompactSet):
    """Filled strictly-convex polygon with counter-clockwise vertices."""

    vertices: np.ndarray

    def __post_init__(self):
        v = _as_points(self.vertices, dim=2)
        if v.shape[0] < 3:
            raise ValueError("polygon needs at least 3 vertices")
        edges = np.roll(v, -1, axis=0) - v
        cross = np.cross(edges, np.roll(edges, -1, axis=0))
        if np.any(cross <= 0):
            raise ValueError("vertices must be strictly convex in counter-clockwise order")
        v.flags.writeable = False
        object.__setattr__(self, "vertices", v)

    @property
    def dim(self) -> int:
        return 2

    def diameter(self) -> float:
        return float(np.max(cdist(self.vertices, self.vertices)))

    def bounds(self) -> np.ndarray:
        return np.stack([self.vertices.min(axis=0), self.vertices.max(axis=0)], axis=1)

    def area(self) -> float:
        v = self.vertices
        w = np.roll(v, -1, axis=0)
        return float(0.5 * np.sum(v[:, 0] * w[:, 1] - w[:, 0] * v[:, 1]))

    def contains(self, points: np.ndarray, tol: float = 0.0) -> np.ndarray:
        """Boolean mask of points inside (or within tol of) the filled polygon."""
        pts = np.atleast_2d(np.asarray(points, dtype=float))
        v = self.vertices
        e = np.roll(v, -1, axis=0) - v
        # signed distance to each edge line, positive inside for CCW order
        rel = pts[:, None, :] - v[None, :, :]
        cross = e[None, :, 0] * rel[:, :, 1] - e[None, :, 1] * rel[:, :, 0]
        lengths = np.linalg.norm(e, axis=1)
        return np.all(cross / lengths[None, :] >= -tol, axis=1)

    def boundary_cloud(self, resolution: float) -> np.ndarray:
        pieces = []
        v = self.vertices
        for a, b in zip(v, np.roll(v, -1, axis=0)):
            n = max(2, int(math.ceil(np.linalg.norm(b - a) / resolution)) + 1)
            t = np.linspace(0.0, 1.0, n, endpoint=False)[:, None]
            pieces.append(a + t * (b - a))
        return np.concatenate(pieces)

    def to_cloud(self, resolution=None) -> np.ndarray:
        if resolution is None:
            resolution = self.diameter() * DEFAULT_RELATIVE_RESOLUTION
        (x0, x1), (y0, y1) = self.bounds()
        xs = np.arange(x0, x1 + resolution, resolution)
        ys = np.arange(y0, y1 + resolution, resolution)
        gx, gy = np.meshgrid(xs, ys)
        grid = np.column_stack([gx.ravel(), gy.ravel()])
        inside = grid[self.contains(grid)]
        return np.concatenate([self.vertices, self.boundary_cloud(resolution), inside])


def as_compact_set(obj) -> CompactSet:
    """Coerce arrays and scalars to a PointCloud; pass CompactSets through."""
    if isinstance(obj, CompactSet):
        return obj
    if np.isscalar(obj):
        return PointCloud(np.array([[float(obj)]]))
    return PointCloud(_as_points(obj))


# ---------------------------------------------------------------------------
# distance kernels
# ---------------------------------------------------------------------------


def _cloud_semi_distance(X: np.ndarray, Y: np.ndarray, method: str) -> float:
    """sup over X of the distance to the nearest point of Y; exact."""
    if method == "brute" or (method == "auto" and len(X) * len(Y) <= _BRUTE_FORCE_CUTOFF**2):
        return float(np.max(np.min(cdist(X, Y), axis=1)))
    d, _ = cKDTree(Y).query(X, k=1)
    return float(np.max(d))


def _as_interval_array(S: CompactSet) -> np.ndarray:
    """1-D set as an (m, 2) array of closed intervals (points degenerate)."""
    if isinstance(S, IntervalUnion):
        return S.intervals
    pts = np.sort(S.to_cloud().ravel())
    return np.column_stack([pts, pts])


def _dist_to_union_1d(x: np.ndarray, iv: np.ndarray) -> np.ndarray:
    """Distance from each x to a sorted disjoint union of closed intervals."""
    x = np.atleast_1d(x)
    edges = iv.ravel()
    idx = np.searchsorted(edges, x)
    inside = (idx % 2 == 1) | ((idx < edges.size) & (edges[np.minimum(idx, edges.size - 1)] == x))
    left = np.where(idx > 0, x - edges[np.maximum(idx - 1, 0)], np.inf)
    right = np.where(idx < edges.size, edges[np.minimum(idx, edges.size - 1)] - x, np.inf)
    return np.where(inside, 0.0, np.minimum(left, right))


def _semi_distance_1d(A: CompactSet, B: CompactSet) -> float:
    """Exact sup-inf distance between 1-D sets via endpoint arithmetic.

    dist(., B) is piecewise linear with slope +-1, so over each interval of A
    it attains its maximum at an endpoint of A or at a midpoint of a gap of B.
    """
    ia = _as_interval_array(A)
    ib = _as_interval_array(B)
    candidates = [ia.ravel()]
    if ib.shape[0] > 1:
        mids = 0.5 * (ib[:-1, 1] + ib[1:, 0])
        inside = _dist_to_union_1d(mids, ia) == 0.0
        candidates.append(mids[inside])
    cand = np.concatenate(candidates)
    return float(np.max(_dist_to_union_1d(cand, ib)))


def _point_to_polygon_distance(pts: np.ndarray, poly: ConvexPolygon) -> np.ndarray:
    """Exact Euclidean distance from each point to the filled polygon."""
    pts = np.atleast_2d(pts)
    v = poly.vertices
    w = np.roll(v, -1, axis=0)
    e = w - v
    ee = np.sum(e * e, axis=1)
    rel = pts[:, None, :] - v[None, :, :]
    t = np.clip(np.sum(rel * e[None, :, :], axis=2) / ee[None, :], 0.0, 1.0)
    proj = v[None, :, :] + t[:, :, None] * e[None, :, :]
    d_edges = np.min(np.linalg.norm(pts[:, None, :] - proj, axis=2), axis=1)
    return np.where(poly.contains(pts), 0.0, d_edges)


def _resolution_for(X: CompactSet, Y: CompactSet, resolution: float | None) -> float:
    if resolution is not None:
        return resolution
    diam = max(X.diameter(), Y.diameter(), 1e-12)
    return diam * DEFAULT_RELATIVE_RESOLUTION


def semi_distance(X, Y, method: str = "auto", resolution: float | None = None) -> float:
    """One-sided distance from X to Y: sup over x in X of inf over y in Y.

    Exact for point clouds (any method) and for 1-D sets.  When X is a
    polygon it is replaced by a filled sampling at `resolution`, so the
    result carries a +-resolution error bar.

    method: "auto" picks brute force or a KD-tree by problem size;
    "brute" forces the O(nm) double loop; "kdtree" forces the index.
    """
    X = as_compact_set(X)
    Y = as_compact_set(Y)
    if X.dim != Y.dim:
        raise DimensionMismatchError(f"dimension mismatch: {X.dim} vs {Y.dim}")
    if X.dim == 1:
        return _semi_distance_1d(X, Y)
    res = _resolution_for(X, Y, resolution)
    xs = X.to_cloud(res)
    if isinstance(Y, ConvexPolygon):
        return float(np.max(_point_to_polygon_distance(xs, Y)))
    return _cloud_semi_distance(xs, Y.to_cloud(res), method)


def hausdorff_distance(X, Y, method: str = "auto", resolution: float | None = None) -> float:
    """Symmetric Hausdorff distance: the max of the two semi-distances."""
    return max(
        semi_distance(X, Y, method=method, resolution=resolution),
        semi_distance(Y, X, method=method, resolution=resolution),
    )


def inflate(X, r: float, ring_count: int = 16) -> CompactSet:
    """Closed r-neighborhood of X (exact in 1-D, discretized ring cloud in 2-D)."""
    if r <= 0:
        raise ValueError("inflation radius must be positive")
    X = as_compact_set(X)
    if X.dim == 1:
        iv = _as_interval_array(X)
        return merge_intervals(np.column_stack([iv[:, 0] - r, iv[:, 1] + r]))
    pts = X.to_cloud()
    angles = np.linspace(0.0, 2.0 * math.pi, ring_count, endpoint=False)
    ring = r * np.column_stack([np.cos(angles), np.sin(angles)])
    return PointCloud(np.concatenate([pts, (pts[:, None, :] + ring[None, :, :]).reshape(-1, 2)]))


def connected_components(X, gap_tol: float) -> list[CompactSet]:
    """Split a 1-D set into maximal pieces separated by gaps larger than gap_tol."""
    X = as_compact_set(X)
    if X.dim != 1:
        raise DimensionMismatchError("connected_components supports 1-D sets only")
    if isinstance(X, IntervalUnion):
        groups = []
        current = [X.intervals[0]]
        for iv in X.intervals[1:]:
            if iv[0] - current[-1][1] <= gap_tol:
                current.append(iv)
            else:
                groups.append(current)
                current = [iv]
        groups.append(current)
        return [IntervalUnion(np.array(g)) for g in groups]
    pts = np.sort(X.to_cloud().ravel())
    breaks = np.nonzero(np.diff(pts) > gap_tol)[0]
    return [PointCloud(chunk[:, None]) for chunk in np.split(pts, breaks + 1)]


# ---------------------------------------------------------------------------
# serialization
# ---------------------------------------------------------------------------


def set_to_json(S: CompactSet) -> dict:
    if isinstance(S, PointCloud):
        return {"type": "cloud", "data": S.points.tolist()}
    if isinstance(S, IntervalUnion):
        return {"type": "intervals", "data": S.intervals.tolist()}
    if isinstance(S, ConvexPolygon):
        return {"type": "polygon", "data": S.vertices.tolist()}
    raise TypeError(f"unknown set type {type(S)!r}")


def set_from_json(obj: dict) -> CompactSet:
    kind = obj.get("type")
    data = obj.get("data")
    if kind == "cloud":
        return PointCloud(np.asarray(data, dtype=float))
    if kind == "intervals":
        return IntervalUnion(np.asarray(data, dtype=float))
    if kind == "polygon":
        return ConvexPolygon(np.asarray(data, dtype=float))
    raise ValueError(f"unknown set type {kind!r}")


def write_set(S: CompactSet, path: str) -> None:
    """Write a set to disk: .json keeps the representation, .csv writes a cloud."""
    path = str(path)
    if path.endswith(".json"):
        with open(path, "w") as fh:
            json.dump(set_to_json(S), fh)
        return
    pts = S.to_cloud() if not isinstance(S, PointCloud) else S.points
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["x1", "x2"][: pts.shape[1]])
        for row in pts:
            writer.writerow([repr(float(c)) for c in row])


def read_set(path: str) -> CompactSet:
    path = str(path)
    if path.endswith(".json"):
        with open(path) as fh:
            return set_from_json(json.load(fh))
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    if rows and rows[0] and rows[0][0].strip().lower() in ("x1", "x"):
        rows = rows[1:]
    pts = np.array([[float(c) for c in row] for row in rows if row])
    return PointCloud(pts)
