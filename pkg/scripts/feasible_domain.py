"""Feasible (r, cos theta) domain of a diagonal normalizing operator.

Writes the boundary curve and Haar-sampled points to two CSV files.
"""
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from _config import parse_config

from qopdist import feasible_boundary, min_cos_theta, normalizing_distance
from qopdist.cli import fmt, write_csv
from qopdist.sampling import contraction_and_rotation, haar_states, in_feasible_domain


@dataclass
class Config:
    lambdas: str = "0.9,0.8,0.6,0.5,0.3"
    samples: int = 100_000
    points: int = 200
    seed: int = 0
    out_dir: str = "results"


def run(cfg: Config):
    lam = np.array([float(x) for x in cfg.lambdas.split(",")])
    boundary = feasible_boundary(lam, cfg.points)
    states = haar_states(cfg.samples, lam.size, np.random.default_rng(cfg.seed))
    r, cos = contraction_and_rotation(lam, states)
    inside = in_feasible_domain(lam, r, cos)
    print(f"min cos theta: {min_cos_theta(lam):.6f}  normalizing distance: {normalizing_distance(lam):.6f}")
    print(f"sampled points inside the domain: {int(inside.sum())}/{inside.size}")
    return boundary, r, cos


if __name__ == "__main__":
    cfg = parse_config(Config, __doc__)
    out = Path(cfg.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    boundary, r, cos = run(cfg)
    write_csv(([fmt(p.r), fmt(p.cos_theta)] for p in boundary), ["r", "cos_theta"],
              out / "domain_boundary.csv")
    write_csv(([fmt(a), fmt(b)] for a, b in zip(r, cos)), ["r", "cos_theta"], out / "domain_samples.csv")
