"""Denoise a noisy plane by mean-shift over random centroid candidates.

Each point gathers its 64 nearest neighbors, draws many 4-point centroids
as position candidates, drops the lowest-scoring 10%, and moves to the
kernel mode of the survivors.  Chamfer distance (CD) to the clean cloud and
mean distance to the analytic surface (P2S) both drop sharply.
"""

from normfit import (
    EstimationParams,
    NoiseSpec,
    ShapeSpec,
    add_noise,
    chamfer,
    denoise_all,
    gen_shape,
    p2s,
)


def main():
    spec = ShapeSpec(kind="plane", n_points=10000, seed=4)
    clean = gen_shape(spec)
    noisy = add_noise(clean, NoiseSpec(std_pct_bbox_diag=1.0, seed=5))
    print(f"plane with {len(noisy)} points, 1% Gaussian noise")

    out = denoise_all(noisy, EstimationParams(seed=6), n_threads=4)

    cd0, cd1 = chamfer(noisy, clean), chamfer(out, clean)
    p0, p1 = p2s(noisy, spec), p2s(out, spec)
    print(f"cd  : {cd0:.3e} -> {cd1:.3e}  ({1 - cd1 / cd0:.0%} reduction)")
    print(f"p2s : {p0:.3e} -> {p1:.3e}  ({1 - p1 / p0:.0%} reduction)")


if __name__ == "__main__":
    main()
