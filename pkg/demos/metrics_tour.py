"""Tour of the synthetic shapes and the evaluation metrics.

Generates each built-in shape, perturbs it, estimates normals, and prints
the full report: RMS, capped RMS_tau, PGP at several thresholds, chamfer
distance, and point-to-surface distance.
"""

from normfit import (
    EstimationParams,
    NoiseSpec,
    ShapeSpec,
    add_noise,
    chamfer,
    estimate_all,
    evaluate_normals,
    gen_shape,
    p2s,
)
from normfit.metrics import CSV_HEADER


def main():
    print("shape," + CSV_HEADER)
    for kind in ("plane", "sphere", "cylinder", "cube", "wedge"):
        spec = ShapeSpec(kind=kind, n_points=1500, seed=7)
        clean = gen_shape(spec)
        noisy = add_noise(clean, NoiseSpec(std_pct_bbox_diag=0.5, seed=8))
        est, _ = estimate_all(noisy, EstimationParams(seed=9), n_threads=4)
        report = evaluate_normals(est, clean,
                                  cd=chamfer(est, clean),
                                  p2s_val=p2s(est, spec))
        print(f"{kind}," + report.as_csv_row())


if __name__ == "__main__":
    main()
