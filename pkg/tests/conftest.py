import numpy as np
import pytest

from normfit.consensus import ccn_loss


def random_units(rng, n):
    v = rng.normal(size=(n, 3))
    return v / np.linalg.norm(v, axis=1, keepdims=True)


def sphere_grid(step_deg):
    """Directions covering the sphere on a (theta, phi) lattice."""
    thetas = np.radians(np.arange(0.0, 180.0 + step_deg / 2, step_deg))
    dirs = [np.array([0.0, 0.0, 1.0]), np.array([0.0, 0.0, -1.0])]
    for th in thetas[1:-1]:
        phis = np.radians(np.arange(0.0, 360.0, step_deg))
        st, ct = np.sin(th), np.cos(th)
        dirs.append(np.stack([st * np.cos(phis), st * np.sin(phis),
                              np.full(len(phis), ct)], axis=1))
    return np.vstack([np.atleast_2d(d) for d in dirs])


def grid_min_normal(candidates, tau, step_deg):
    """Brute-force ccn_loss minimizer over a sphere grid (independent oracle)."""
    grid = sphere_grid(step_deg)
    sin2 = 1.0 - (grid @ candidates.T) ** 2
    losses = -np.exp(-sin2 / tau**2).sum(axis=1)
    return grid[int(np.argmin(losses))], float(losses.min())


def brute_force_knn(points, query_idx, k):
    """O(N) reference k-NN with the (distance, index) tie rule."""
    d = np.linalg.norm(points - points[query_idx], axis=1)
    idx = np.arange(len(points))
    keep = idx != query_idx
    d, idx = d[keep], idx[keep]
    order = np.lexsort((idx, d))
    return idx[order][:k], d[order][:k]


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)
