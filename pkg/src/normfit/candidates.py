"""Random candidate generation and kernel-score rejection.

Stage 1 samples many plane hypotheses (or position hypotheses for
denoising) from a query point's neighborhood.  Stage 2 scores each
hypothesis by how many neighbors it explains, via a Gaussian kernel on the
point-to-plane (point-to-candidate) distance, and drops a fixed fraction of
the lowest-scoring ones.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import PersistentDegeneracy, TooFewNeighbors
from .geometry import Plane, as_points, fit_planes_batch


@dataclass(frozen=True)
class SamplingParams:
    k_s: int = 4
    n_candidates: int = 100
    rejection_fraction_normals: float = 0.20
    rejection_fraction_positions: float = 0.10
    max_resample_attempts: int = 20

    def __post_init__(self):
        if self.k_s < 3:
            raise ValueError("k_s must be >= 3")
        if self.n_candidates < 1:
            raise ValueError("n_candidates must be >= 1")
        for frac in (self.rejection_fraction_normals, self.rejection_fraction_positions):
            if not 0.0 <= frac < 1.0:
                raise ValueError("rejection fractions must lie in [0, 1)")
        if self.max_resample_attempts < 1:
            raise ValueError("max_resample_attempts must be >= 1")


@dataclass
class CandidatePlanes:
    """A batch of sampled plane hypotheses (array-of-struct layout)."""

    normals: np.ndarray            # (M, 3), unit, sign-canonicalized
    anchors: np.ndarray            # (M, 3)
    scores: Optional[np.ndarray] = None

    def __len__(self):
        return len(self.normals)

    def plane(self, i: int) -> Plane:
        return Plane(normal=self.normals[i], anchor=self.anchors[i])


@dataclass
class PositionCandidates:
    positions: np.ndarray          # (M, 3)
    scores: Optional[np.ndarray] = None

    def __len__(self):
        return len(self.positions)


def _draw_index_sets(rng: np.random.Generator, n_sets: int, pool: int, k: int) -> np.ndarray:
    """n_sets rows of k distinct indices drawn uniformly from range(pool)."""
    # argsort of i.i.d. uniforms gives a uniform random k-subset per row
    keys = rng.random((n_sets, pool))
    return np.argsort(keys, axis=1, kind="stable")[:, :k]


def sample_normal_candidates(neighbors, params: SamplingParams, rng: np.random.Generator) -> CandidatePlanes:
    """Fit one plane per candidate to k_s randomly chosen neighbors.

    Degenerate draws (collinear/coincident points) are redrawn up to
    max_resample_attempts times per slot; if any slot stays degenerate the
    neighborhood itself is pathological and PersistentDegeneracy is raised.
    """
    nbrs = as_points(neighbors)
    if len(nbrs) < params.k_s:
        raise TooFewNeighbors(f"{len(nbrs)} neighbors < k_s={params.k_s}")
    m = params.n_candidates
    normals = np.empty((m, 3))
    anchors = np.empty((m, 3))
    pending = np.arange(m)
    for _ in range(params.max_resample_attempts):
        sets = _draw_index_sets(rng, len(pending), len(nbrs), params.k_s)
        nrm, anc, bad = fit_planes_batch(nbrs[sets])
        ok = ~bad
        normals[pending[ok]] = nrm[ok]
        anchors[pending[ok]] = anc[ok]
        pending = pending[bad]
        if len(pending) == 0:
            return CandidatePlanes(normals=normals, anchors=anchors)
    raise PersistentDegeneracy(
        f"{len(pending)} candidate slots stayed degenerate after "
        f"{params.max_resample_attempts} attempts"
    )


def rejection_sigma(neighbor_distances) -> float:
    """Kernel bandwidth: one percent of the neighborhood radius."""
    d = np.asarray(neighbor_distances, dtype=np.float64)
    if d.size == 0:
        raise ValueError("need at least one neighbor distance")
    return 0.01 * float(d.max())


def score_candidates(neighbors, cands: CandidatePlanes, sigma: float) -> np.ndarray:
    """Gaussian-kernel consensus score of each plane over all neighbors."""
    if sigma <= 0:
        raise ValueError("sigma must be positive")
    nbrs = as_points(neighbors)
    diff = nbrs[None, :, :] - cands.anchors[:, None, :]
    d = np.abs(np.einsum("mkc,mc->mk", diff, cands.normals))
    return np.exp(-(d / sigma) ** 2).sum(axis=1)


def score_candidate(neighbors, plane: Plane, sigma: float) -> float:
    """Score of a single plane hypothesis; see score_candidates."""
    single = CandidatePlanes(normals=plane.normal[None, :], anchors=plane.anchor[None, :])
    return float(score_candidates(neighbors, single, sigma)[0])


def rejection_order(scores: np.ndarray, fraction: float) -> np.ndarray:
    """Indices of survivors, sorted by descending score (stable on ties).

    The lowest floor(fraction * n) scorers are dropped.
    """
    if not 0.0 <= fraction < 1.0:
        raise ValueError("fraction must lie in [0, 1)")
    n = len(scores)
    order = np.argsort(-scores, kind="stable")
    n_drop = int(np.floor(fraction * n))
    return order[: n - n_drop]


def reject_candidates(cands: CandidatePlanes, fraction: float) -> CandidatePlanes:
    """Drop the lowest-scoring fraction; survivors keep descending order."""
    if cands.scores is None:
        raise ValueError("scores must be computed before rejection")
    keep = rejection_order(cands.scores, fraction)
    return CandidatePlanes(
        normals=cands.normals[keep],
        anchors=cands.anchors[keep],
        scores=cands.scores[keep],
    )


def sample_position_candidates(neighbors, params: SamplingParams, rng: np.random.Generator) -> PositionCandidates:
    """Denoising hypotheses: centroids of 4 distinct random neighbors."""
    nbrs = as_points(neighbors)
    if len(nbrs) < 4:
        raise TooFewNeighbors(f"{len(nbrs)} neighbors < 4")
    sets = _draw_index_sets(rng, params.n_candidates, len(nbrs), 4)
    return PositionCandidates(positions=nbrs[sets].mean(axis=1))


def score_position_candidates(neighbors, cands: PositionCandidates, sigma: float) -> np.ndarray:
    """Gaussian-kernel density of neighbors around each candidate position."""
    if sigma <= 0:
        raise ValueError("sigma must be positive")
    nbrs = as_points(neighbors)
    d2 = ((cands.positions[:, None, :] - nbrs[None, :, :]) ** 2).sum(axis=2)
    return np.exp(-d2 / sigma**2).sum(axis=1)


def reject_position_candidates(cands: PositionCandidates, fraction: float) -> PositionCandidates:
    if cands.scores is None:
        raise ValueError("scores must be computed before rejection")
    keep = rejection_order(cands.scores, fraction)
    return PositionCandidates(positions=cands.positions[keep], scores=cands.scores[keep])
