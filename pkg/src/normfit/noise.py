"""Noise-scale estimation and the adaptive neighborhood size lookup.

The per-point noise level is the surface variation of a small covariance
neighborhood: lam1 / (lam1 + lam2 + lam3), which is 0 on an exact plane and
1/3 for isotropic scatter.  The cloud-level mean selects one of four
neighborhood sizes and decides whether low-score candidates get rejected.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .geometry import NeighborIndex, PointCloud, covariance, eigen_sym3

# size of the covariance neighborhood used for noise estimation; fixed and
# independent of the adaptive size to avoid circularity
DEFAULT_NOISE_K = 64


@dataclass(frozen=True)
class AdaptiveConfig:
    """Thresholds on the cloud noise level and the sizes they select."""

    thresholds: tuple = (0.0, 0.02, 0.14, 0.16, 0.3)
    sizes: tuple = (32, 128, 256, 450)
    rejection_interval_max: int = 2

    def __post_init__(self):
        if list(self.thresholds) != sorted(self.thresholds):
            raise ValueError("thresholds must be strictly increasing")
        if list(self.sizes) != sorted(self.sizes):
            raise ValueError("sizes must be strictly increasing")
        if len(self.thresholds) != len(self.sizes) + 1:
            raise ValueError("need one more threshold than sizes")


@dataclass
class NoiseProfile:
    per_point_f: np.ndarray
    cloud_f: float


def _surface_variation(eigvals: np.ndarray) -> float:
    total = float(eigvals.sum())
    if total <= 0.0:
        return 0.0
    return float(eigvals[0] / total)


def point_noise_level(cloud: PointCloud, index: NeighborIndex, t: int, k_f: int = DEFAULT_NOISE_K) -> float:
    """Surface variation of point t's k_f neighbors plus the point itself."""
    idx, _ = index.knn(t, k_f)
    pts = np.vstack([cloud.points[idx], cloud.points[t]])
    cov, _ = covariance(pts)
    w, _ = eigen_sym3(cov)
    return _surface_variation(w)


def cloud_noise_scale(cloud: PointCloud, index: NeighborIndex, k_f: int = DEFAULT_NOISE_K) -> NoiseProfile:
    """Per-point noise levels and their mean, computed in one vectorized pass."""
    n = len(cloud)
    k_eff = min(k_f, n - 1)
    idx, _ = index.knn_batch(k_eff)
    nbrs = cloud.points[idx]                                   # (N, k, 3)
    pts = np.concatenate([nbrs, cloud.points[:, None, :]], axis=1)
    c = pts.mean(axis=1)
    q = pts - c[:, None, :]
    cov = np.einsum("nki,nkj->nij", q, q) / pts.shape[1]
    w = np.linalg.eigvalsh(cov)
    total = w.sum(axis=1)
    f = np.where(total > 0.0, w[:, 0] / np.where(total > 0.0, total, 1.0), 0.0)
    return NoiseProfile(per_point_f=f, cloud_f=float(f.mean()))


def adaptive_k(f: float, cfg: AdaptiveConfig = AdaptiveConfig()) -> int:
    """Neighborhood size for a cloud noise level f (half-open intervals).

    Values at or above the last threshold clamp to the largest size.
    """
    if f < 0:
        raise ValueError("noise level must be nonnegative")
    th = cfg.thresholds
    for i, size in enumerate(cfg.sizes):
        if th[i] <= f < th[i + 1]:
            return size
    return cfg.sizes[-1]


def rejection_enabled(f: float, cfg: AdaptiveConfig = AdaptiveConfig()) -> bool:
    """Candidate rejection only helps at low noise: first two intervals."""
    if f < 0:
        raise ValueError("noise level must be nonnegative")
    return f < cfg.thresholds[cfg.rejection_interval_max]
