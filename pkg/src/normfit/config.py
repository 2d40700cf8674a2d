"""Flat key-value run configuration mirroring every pipeline parameter.

The file format is one `key = value` per line with '#' comments; unknown
keys are errors so typos never pass silently.  Defaults are the method's
standard hyperparameters (k_s=4, 100 candidates, tau=0.5, 20%/10%
rejection, the four-interval neighborhood table, 64/12-NN denoise scales).
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

from .candidates import SamplingParams
from .consensus import ConsensusParams
from .errors import ConfigError
from .noise import AdaptiveConfig
from .pipeline import EstimationParams


@dataclass
class RunConfig:
    params: EstimationParams = field(default_factory=EstimationParams)
    threads: int = 1
    input_path: str = ""
    output_path: str = ""


def _items(cfg: RunConfig):
    p = cfg.params
    a, s, c = p.adaptive, p.sampling, p.consensus
    out = [
        ("seed", p.seed),
        ("input_k", p.input_k),
        ("denoise_k", p.denoise_k),
        ("noise_k", p.noise_k),
        ("threads", cfg.threads),
    ]
    out += [(f"adaptive_l{i}", a.thresholds[i]) for i in range(len(a.thresholds))]
    out += [(f"adaptive_k{i + 1}", a.sizes[i]) for i in range(len(a.sizes))]
    out += [
        ("k_s", s.k_s),
        ("n_candidates", s.n_candidates),
        ("rejection_fraction_normals", s.rejection_fraction_normals),
        ("rejection_fraction_positions", s.rejection_fraction_positions),
        ("max_resample_attempts", s.max_resample_attempts),
        ("tau_normal", c.tau_normal),
        ("max_iters", c.max_iters),
        ("tol_deg", c.tol_deg),
        ("tol_pos", c.tol_pos),
        ("input_path", cfg.input_path),
        ("output_path", cfg.output_path),
    ]
    return out


def serialize(cfg: RunConfig) -> str:
    lines = [f"{k} = {v!r}" if isinstance(v, str) else f"{k} = {v}" for k, v in _items(cfg)]
    return "\n".join(lines) + "\n"


_INT_KEYS = {"seed", "input_k", "denoise_k", "noise_k", "threads", "k_s",
             "n_candidates", "max_resample_attempts", "max_iters",
             "adaptive_k1", "adaptive_k2", "adaptive_k3", "adaptive_k4"}
_FLOAT_KEYS = {"rejection_fraction_normals", "rejection_fraction_positions",
               "tau_normal", "tol_deg", "tol_pos",
               "adaptive_l0", "adaptive_l1", "adaptive_l2", "adaptive_l3", "adaptive_l4"}
_STR_KEYS = {"input_path", "output_path"}


def parse(text: str) -> RunConfig:
    values = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected 'key = value', got {raw!r}")
        key, _, val = (part.strip() for part in line.partition("="))
        if key in _INT_KEYS:
            try:
                values[key] = int(val)
            except ValueError:
                raise ConfigError(f"line {lineno}: {key} needs an integer, got {val!r}")
        elif key in _FLOAT_KEYS:
            try:
                values[key] = float(val)
            except ValueError:
                raise ConfigError(f"line {lineno}: {key} needs a number, got {val!r}")
        elif key in _STR_KEYS:
            values[key] = val.strip("'\"")
        else:
            raise ConfigError(f"line {lineno}: unknown key {key!r}")
    return from_values(values)


def from_values(values: dict) -> RunConfig:
    """Build a RunConfig from a flat key/value mapping over the defaults."""
    base = RunConfig()
    v = dict(values)

    def take(key, default):
        return v.pop(key, default)

    try:
        adaptive = AdaptiveConfig(
            thresholds=tuple(take(f"adaptive_l{i}", base.params.adaptive.thresholds[i]) for i in range(5)),
            sizes=tuple(take(f"adaptive_k{i + 1}", base.params.adaptive.sizes[i]) for i in range(4)),
        )
        sampling = SamplingParams(
            k_s=take("k_s", base.params.sampling.k_s),
            n_candidates=take("n_candidates", base.params.sampling.n_candidates),
            rejection_fraction_normals=take("rejection_fraction_normals",
                                            base.params.sampling.rejection_fraction_normals),
            rejection_fraction_positions=take("rejection_fraction_positions",
                                              base.params.sampling.rejection_fraction_positions),
            max_resample_attempts=take("max_resample_attempts",
                                       base.params.sampling.max_resample_attempts),
        )
        consensus = ConsensusParams(
            tau_normal=take("tau_normal", base.params.consensus.tau_normal),
            max_iters=take("max_iters", base.params.consensus.max_iters),
            tol_deg=take("tol_deg", base.params.consensus.tol_deg),
            tol_pos=take("tol_pos", base.params.consensus.tol_pos),
        )
        params = EstimationParams(
            adaptive=adaptive, sampling=sampling, consensus=consensus,
            input_k=take("input_k", base.params.input_k),
            seed=take("seed", base.params.seed),
            denoise_k=take("denoise_k", base.params.denoise_k),
            noise_k=take("noise_k", base.params.noise_k),
        )
    except ValueError as exc:
        raise ConfigError(str(exc))
    cfg = RunConfig(
        params=params,
        threads=take("threads", base.threads),
        input_path=take("input_path", base.input_path),
        output_path=take("output_path", base.output_path),
    )
    if v:
        raise ConfigError(f"unknown keys: {sorted(v)}")
    return cfg
