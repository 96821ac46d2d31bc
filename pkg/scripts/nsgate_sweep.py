"""Bound and Monte Carlo estimate for the NS gate with dark counts versus the dark count rate."""
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from _config import parse_config

from qopdist import NsGateParams, bound, mc_lower_bound, ns_gate_pair
from qopdist.cli import fmt, write_csv


@dataclass
class Config:
    mu_min: float = 0.0
    mu_max: float = 0.5
    points: int = 21
    samples: int = 100_000
    seed: int = 0
    out: str = "results/nsgate_sweep.csv"


def run(cfg: Config):
    rows = []
    for mu in np.linspace(cfg.mu_min, cfg.mu_max, cfg.points):
        ideal, faulty = ns_gate_pair(NsGateParams(mu))
        b = bound(ideal, faulty)
        mc = mc_lower_bound(ideal, faulty, cfg.samples, seed=cfg.seed)
        rows.append([fmt(mu), fmt(b.diamond_part), fmt(b.normalizing_part), fmt(b.total),
                     fmt(mc.max_distance)])
        print(f"mu={mu:.3f}  bound={b.total:.6f}  mc_max={mc.max_distance:.6f}")
    return rows


if __name__ == "__main__":
    cfg = parse_config(Config, __doc__)
    Path(cfg.out).parent.mkdir(parents=True, exist_ok=True)
    header = ["mu", "diamond_part", "normalizing_part", "bound_total", "mc_max"]
    write_csv(run(cfg), header, cfg.out)
