"""Core geometry: point containers, exact k-NN index, plane fitting, angles.

Conventions used throughout the library:

* points are float64 arrays of shape (N, 3)
* normals are unit vectors, sign-canonicalized so the component of largest
  absolute value is positive (normals are unoriented, the sign is only a
  deterministic representative)
* k-NN results are sorted by ascending distance, ties broken by ascending
  point index, and never include the query point when querying by index
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from scipy.spatial import cKDTree

from .errors import DegenerateSample

# relative eigenvalue gap below which a point set is treated as collinear
DEGENERACY_RTOL = 1e-12


def as_points(a) -> np.ndarray:
    """Coerce input to a float64 (N, 3) array, validating finiteness."""
    pts = np.asarray(a, dtype=np.float64)
    if pts.ndim == 1:
        pts = pts.reshape(1, 3)
    if pts.ndim != 2 or pts.shape[1] != 3:
        raise ValueError(f"expected (N, 3) point array, got shape {pts.shape}")
    if not np.isfinite(pts).all():
        raise ValueError("points must be finite")
    return pts


def canonical_sign(v: np.ndarray) -> np.ndarray:
    """Flip v so its largest-magnitude component is positive.

    Works on a single vector (3,) or a batch (M, 3).
    """
    v = np.asarray(v, dtype=np.float64)
    if v.ndim == 1:
        i = int(np.argmax(np.abs(v)))
        return -v if v[i] < 0 else v
    i = np.argmax(np.abs(v), axis=1)
    lead = v[np.arange(len(v)), i]
    return np.where((lead < 0)[:, None], -v, v)


def normalize(v: np.ndarray) -> np.ndarray:
    n = np.linalg.norm(v)
    if n == 0:
        raise ValueError("cannot normalize zero vector")
    return v / n


@dataclass(frozen=True)
class Plane:
    """A plane given by a unit normal and a point on the plane."""

    normal: np.ndarray
    anchor: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "normal", np.asarray(self.normal, dtype=np.float64))
        object.__setattr__(self, "anchor", np.asarray(self.anchor, dtype=np.float64))
        if abs(np.linalg.norm(self.normal) - 1.0) > 1e-9:
            raise ValueError("plane normal must be unit length")


@dataclass
class PointCloud:
    """Positions plus optional per-point unit normals."""

    points: np.ndarray
    normals: Optional[np.ndarray] = None

    def __post_init__(self):
        self.points = as_points(self.points)
        if len(self.points) < 1:
            raise ValueError("point cloud must contain at least one point")
        if self.normals is not None:
            self.normals = as_points(self.normals)
            if len(self.normals) != len(self.points):
                raise ValueError("normals length must match points length")
            norms = np.linalg.norm(self.normals, axis=1)
            if np.any(np.abs(norms - 1.0) > 1e-9):
                raise ValueError("normals must be unit length")

    def __len__(self):
        return len(self.points)

    def bbox_diagonal(self) -> float:
        lo = self.points.min(axis=0)
        hi = self.points.max(axis=0)
        return float(np.linalg.norm(hi - lo))


class NeighborIndex:
    """Immutable exact k-NN index over one PointCloud.

    Queries are exact under the Euclidean metric; equal distances are
    resolved by ascending point index so results are fully deterministic.
    Safe for concurrent read-only use.
    """

    def __init__(self, cloud: PointCloud):
        if len(cloud) < 1:
            raise ValueError("cannot index an empty cloud")
        self._points = cloud.points
        self._tree = cKDTree(self._points)

    @property
    def n_points(self) -> int:
        return len(self._points)

    def _query_raw(self, xyz, kq):
        d, idx = self._tree.query(xyz, k=kq)
        return np.atleast_1d(d), np.atleast_1d(idx)

    def query_point(self, xyz, k: int, exclude: Optional[int] = None):
        """k nearest neighbors of an arbitrary position.

        Returns (indices, distances) sorted by (distance, index).  When
        `exclude` is given that point index is omitted from the result.
        """
        n = self.n_points
        budget = n - (1 if exclude is not None else 0)
        if not 1 <= k <= budget:
            raise ValueError(f"k={k} out of range for {n} points")
        xyz = np.asarray(xyz, dtype=np.float64).reshape(3)
        kq = min(n, k + (2 if exclude is None else 3))
        while True:
            d, idx = self._query_raw(xyz, kq)
            if exclude is not None:
                keep = idx != exclude
                dk, ik = d[keep], idx[keep]
            else:
                dk, ik = d, idx
            order = np.lexsort((ik, dk))
            dk, ik = dk[order], ik[order]
            # safe to cut at k only if every point at the k-th distance was
            # returned by the tree; otherwise widen the query
            if kq == n or dk[k - 1] < d[-1]:
                return ik[:k].copy(), dk[:k].copy()
            kq = min(n, kq * 2)

    def knn(self, query_idx: int, k: int):
        """k nearest neighbors of point `query_idx`, excluding itself."""
        return self.query_point(self._points[query_idx], k, exclude=query_idx)

    def knn_batch(self, k: int):
        """k-NN of every point at once, self excluded.

        Returns (indices, distances) arrays of shape (N, k) obeying the
        same (distance, index) ordering as `knn`.
        """
        n = self.n_points
        if not 1 <= k <= n - 1:
            raise ValueError(f"k={k} out of range for {n} points")
        kq = min(n, k + 3)
        d, idx = self._tree.query(self._points, k=kq)
        out_i = np.empty((n, k), dtype=np.intp)
        out_d = np.empty((n, k), dtype=np.float64)
        for t in range(n):
            keep = idx[t] != t
            dk, ik = d[t][keep], idx[t][keep]
            order = np.lexsort((ik, dk))
            dk, ik = dk[order], ik[order]
            if kq < n and not dk[k - 1] < d[t][-1]:
                # boundary tie: fall back to the widening single query
                ik, dk = self.knn(t, k)
                out_i[t], out_d[t] = ik, dk
            else:
                out_i[t], out_d[t] = ik[:k], dk[:k]
        return out_i, out_d


def build_index(cloud: PointCloud) -> NeighborIndex:
    return NeighborIndex(cloud)


def covariance(points) -> tuple[np.ndarray, np.ndarray]:
    """Centered second-moment matrix sum((p-c)(p-c)^T)/n and the centroid."""
    pts = as_points(points)
    c = pts.mean(axis=0)
    q = pts - c
    cov = q.T @ q / len(pts)
    return cov, c


def eigen_sym3(m) -> tuple[np.ndarray, np.ndarray]:
    """Eigen-decomposition of a symmetric 3x3 matrix.

    Returns (eigenvalues ascending, eigenvectors as columns).
    """
    m = np.asarray(m, dtype=np.float64)
    w, v = np.linalg.eigh(m)
    return w, v


def fit_plane(points) -> Plane:
    """Total-least-squares plane through >= 3 points.

    Anchor is the centroid; the normal is the smallest-eigenvalue direction
    of the covariance, sign-canonicalized.  Raises DegenerateSample when the
    points are (numerically) collinear or coincident.
    """
    pts = as_points(points)
    if len(pts) < 3:
        raise ValueError("need at least 3 points to fit a plane")
    cov, c = covariance(pts)
    w, v = eigen_sym3(cov)
    if w[1] <= DEGENERACY_RTOL * max(w[2], 0.0) or w[2] <= 0.0:
        raise DegenerateSample("points are collinear or coincident")
    return Plane(normal=canonical_sign(v[:, 0]), anchor=c)


def fit_planes_batch(pts: np.ndarray):
    """Vectorized plane fits for a batch of small point sets.

    `pts` has shape (M, k, 3).  Returns (normals (M,3), anchors (M,3),
    degenerate mask (M,)).  Degenerate rows carry an arbitrary normal and
    must be discarded by the caller.
    """
    c = pts.mean(axis=1)
    q = pts - c[:, None, :]
    cov = np.einsum("mki,mkj->mij", q, q) / pts.shape[1]
    w, v = np.linalg.eigh(cov)
    degenerate = (w[:, 1] <= DEGENERACY_RTOL * np.maximum(w[:, 2], 0.0)) | (w[:, 2] <= 0.0)
    normals = canonical_sign(v[:, :, 0])
    return normals, c, degenerate


def point_plane_distance(p, plane: Plane) -> float:
    p = np.asarray(p, dtype=np.float64).reshape(3)
    return float(abs((p - plane.anchor) @ plane.normal))


def angle_unoriented(u, v) -> float:
    """Unoriented angle between two unit vectors, in degrees within [0, 90]."""
    u = np.asarray(u, dtype=np.float64)
    v = np.asarray(v, dtype=np.float64)
    c = min(1.0, abs(float(u @ v)))
    return float(np.degrees(np.arccos(c)))


def angles_unoriented(u: np.ndarray, v: np.ndarray) -> np.ndarray:
    """Row-wise unoriented angles in degrees between two (N, 3) arrays."""
    c = np.minimum(1.0, np.abs(np.einsum("ij,ij->i", u, v)))
    return np.degrees(np.arccos(c))
