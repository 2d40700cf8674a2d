"""Synthetic benchmark suite: shapes x noise levels x seeds x candidate counts."""

from __future__ import annotations

from dataclasses import replace

import numpy as np

from .candidates import SamplingParams
from .metrics import rms_angle
from .pipeline import EstimationParams, estimate_all
from .synth import SHAPE_KINDS, NoiseSpec, ShapeSpec, add_noise, gen_shape

SUITE_SHAPES = SHAPE_KINDS
SUITE_NOISE = (0.0, 0.5, 1.0)            # percent of bbox diagonal


def suite_clouds(points_per_cloud=600, seeds=(0, 1, 2), noise_levels=SUITE_NOISE,
                 shapes=SUITE_SHAPES):
    """Yield (label, noisy cloud with GT normals) for the whole suite."""
    for shape in shapes:
        for noise in noise_levels:
            for seed in seeds:
                spec = ShapeSpec(kind=shape, n_points=points_per_cloud, seed=seed)
                clean = gen_shape(spec)
                noisy = add_noise(clean, NoiseSpec(std_pct_bbox_diag=noise, seed=seed))
                yield f"{shape}/noise{noise:g}/seed{seed}", noisy


def run_suite(points_per_cloud=600, candidate_counts=(20, 100, 400), seeds=(0, 1, 2),
              noise_levels=SUITE_NOISE, shapes=SUITE_SHAPES, base_params=None,
              n_threads=1, verbose=False):
    """Mean RMS angle error over the suite for each candidate count."""
    base = base_params or EstimationParams()
    results = {}
    for count in candidate_counts:
        params = replace(base, sampling=replace(base.sampling, n_candidates=count))
        errs = []
        for label, cloud in suite_clouds(points_per_cloud, seeds, noise_levels, shapes):
            est, _ = estimate_all(cloud, params, n_threads=n_threads)
            rms = rms_angle(est.normals, cloud.normals)
            errs.append(rms)
            if verbose:
                print(f"  [{count:4d} candidates] {label}: rms = {rms:.3f} deg")
        results[count] = float(np.mean(errs))
        if verbose:
            print(f"candidates={count}: mean rms = {results[count]:.4f} deg")
    return results
