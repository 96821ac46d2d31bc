"""Acceptance suite: one test per criterion, each with its runtime budget.

Every test records a PASS/FAIL line that is printed in the "acceptance
criteria" section at the end of the pytest run.
"""
import time

import numpy as np
import pytest

from helpers import criterion, haar_unitary, random_full_rank_pair, random_operation, unitary_diamond_oracle
from qopdist.cli import main
from qopdist.diamond import diamond_distance
from qopdist.io import save_operation
from qopdist.models import BeamSplitterParams, NsGateParams, beam_splitter, beam_splitter_closed_form, ns_gate_pair
from qopdist.operations import QuantumOperation
from qopdist.renormalization import bound, normalizing_distance
from qopdist.sampling import (contraction_and_rotation, haar_states, in_feasible_domain,
                              maximize_normalizing_distance, mc_lower_bound, min_cos_theta)

pytestmark = pytest.mark.acceptance

LAMBDAS = [0.3, 0.5, 0.6, 0.8, 0.9]


class Budget:
    def __init__(self, seconds):
        self.seconds = seconds
        self.start = time.perf_counter()

    def check(self, info):
        elapsed = time.perf_counter() - self.start
        info["runtime"] = f"{elapsed:.1f}s/{self.seconds}s"
        assert elapsed < self.seconds, f"runtime {elapsed:.1f}s exceeds {self.seconds}s"


def test_ac01_beam_splitter_exactness():
    with criterion(1, "beam splitter bound equals closed form") as info:
        budget = Budget(10)
        worst, worst_norm = 0.0, 0.0
        for theta in (np.pi / 8, np.pi / 4, 3 * np.pi / 8):
            ideal = beam_splitter(BeamSplitterParams(theta, 0.0))
            for gamma_r in (0.25, 0.5, 0.75, 1.0):
                b = bound(ideal, beam_splitter(BeamSplitterParams(theta, 0.0, gamma_r, 1.0)))
                worst = max(worst, abs(b.total - beam_splitter_closed_form(theta, gamma_r, 1.0)))
                worst_norm = max(worst_norm, b.normalizing_part)
        info.update(max_error=f"{worst:.2e}", max_normalizing=f"{worst_norm:.2e}")
        assert worst < 1e-6
        assert worst_norm < 1e-9
        budget.check(info)


def test_ac02_balanced_loss_zero():
    with criterion(2, "balanced loss gives zero") as info:
        budget = Budget(5)
        worst = 0.0
        ideal = beam_splitter(BeamSplitterParams())
        for gamma in (0.3, 0.6, 0.9):
            lossy = beam_splitter(BeamSplitterParams(gamma_r=gamma, gamma_t=gamma))
            total = bound(ideal, lossy).total
            mc = mc_lower_bound(ideal, lossy, 10_000, seed=0).max_distance
            worst = max(worst, total, mc)
        info["max_value"] = f"{worst:.2e}"
        assert worst < 1e-9
        budget.check(info)


def test_ac03_monte_carlo_tightness():
    with criterion(3, "Monte Carlo reaches the beam splitter closed form") as info:
        budget = Budget(30)
        p = BeamSplitterParams.from_loss_ratio(0.5)
        cf = beam_splitter_closed_form(p.theta, p.gamma_r, p.gamma_t)
        mc = mc_lower_bound(beam_splitter(BeamSplitterParams()), beam_splitter(p), 100_000, seed=0)
        info.update(closed_form=f"{cf:.6f}", mc_max=f"{mc.max_distance:.6f}")
        assert cf - 0.005 <= mc.max_distance <= cf
        budget.check(info)


def test_ac04_ns_gate_soundness_and_gap():
    with criterion(4, "NS gate bound is sound with a visible gap") as info:
        budget = Budget(120)
        gaps = []
        for mu in (0.05, 0.1, 0.2, 0.4):
            ideal, faulty = ns_gate_pair(NsGateParams(mu))
            total = bound(ideal, faulty).total
            mc = mc_lower_bound(ideal, faulty, 100_000, seed=0).max_distance
            assert total >= mc, f"mu={mu}: bound {total} < MC {mc}"
            gaps.append(total - mc)
        info["gaps"] = "/".join(f"{g:.4f}" for g in gaps)
        assert max(gaps) > 0.01
        budget.check(info)


def test_ac05_normalizing_distance():
    with criterion(5, "normalizing distance closed form") as info:
        budget = Budget(10)
        d = normalizing_distance(LAMBDAS)
        est = maximize_normalizing_distance(LAMBDAS, n_states=100_000, seed=0)
        info.update(formula=f"{d:.12f}", random_max=f"{est:.6f}")
        assert d == pytest.approx(0.5, abs=1e-12)
        assert est >= 0.495
        assert abs(min_cos_theta(LAMBDAS) - np.sqrt(1 - 0.5**2)) < 1e-12
        budget.check(info)


def test_ac06_feasible_domain_containment():
    with criterion(6, "sampled (r, cos theta) points lie in the feasible domain") as info:
        budget = Budget(20)
        states = haar_states(100_000, len(LAMBDAS), np.random.default_rng(0))
        r, cos = contraction_and_rotation(LAMBDAS, states)
        inside = in_feasible_domain(LAMBDAS, r, cos, slack=1e-9)
        info["inside"] = f"{int(inside.sum())}/{inside.size}"
        assert inside.all()
        budget.check(info)


def test_ac07_diamond_oracle_suite():
    with criterion(7, "diamond distance matches unitary oracle") as info:
        budget = Budget(60)
        rng = np.random.default_rng(7)
        worst = 0.0
        for i in range(20):
            n = 2 + i % 2
            u, v = haar_unitary(rng, n), haar_unitary(rng, n)
            got = diamond_distance(QuantumOperation([u]), QuantumOperation([v])).value
            worst = max(worst, abs(got - unitary_diamond_oracle(u, v)))
        x = diamond_distance(QuantumOperation([np.eye(2)]),
                             QuantumOperation([np.array([[0.0, 1.0], [1.0, 0.0]])])).value
        ch = QuantumOperation([haar_unitary(rng, 3)])
        self_dist = diamond_distance(ch, ch).value
        info.update(max_error=f"{worst:.2e}", pauli_x=f"{x:.9f}", self=f"{self_dist:.2e}")
        assert worst < 1e-6
        assert abs(x - 1.0) < 1e-6
        assert self_dist < 1e-7
        budget.check(info)


def test_ac08_global_soundness():
    with criterion(8, "bound dominates Monte Carlo on random pairs") as info:
        budget = Budget(600)
        rng = np.random.default_rng(8)
        slack = []
        for i in range(50):
            e, f = random_full_rank_pair(rng)
            total = bound(e, f).total
            mc = mc_lower_bound(e, f, 20_000, seed=i).max_distance
            assert total + 1e-6 >= mc, f"pair {i}: bound {total} < MC {mc}"
            slack.append(total - mc)
        info.update(pairs=len(slack), min_slack=f"{min(slack):.2e}")
        budget.check(info)


def test_ac09_ancilla_stability():
    with criterion(9, "larger ancilla does not raise the Monte Carlo max") as info:
        budget = Budget(180)
        rng = np.random.default_rng(9)
        diffs = []
        for i in range(10):
            e = random_operation(rng, 2, 2, int(rng.integers(1, 4)))
            f = random_operation(rng, 2, 2, int(rng.integers(1, 4)))
            d2 = mc_lower_bound(e, f, 50_000, ancilla_dim=2, seed=i).max_distance
            d4 = mc_lower_bound(e, f, 50_000, ancilla_dim=4, seed=i).max_distance
            diffs.append(d4 - d2)
        info["max_excess"] = f"{max(diffs):.4f}"
        assert max(diffs) < 0.01
        budget.check(info)


def test_ac10_cli_determinism(tmp_path, capsys):
    with criterion(10, "mc CSV is byte-identical across runs and workers") as info:
        ideal, faulty = ns_gate_pair(NsGateParams(0.2))
        save_operation(ideal, tmp_path / "e.json")
        save_operation(faulty, tmp_path / "f.json")
        outputs = []
        for run, workers in enumerate((1, 1, 4)):
            path = tmp_path / f"run{run}.csv"
            code = main(["mc", str(tmp_path / "e.json"), str(tmp_path / "f.json"),
                         "--samples", "20000", "--seed", "123", "--workers", str(workers),
                         "--csv", str(path)])
            assert code == 0
            outputs.append(path.read_bytes())
        capsys.readouterr()
        info["bytes"] = len(outputs[0])
        assert outputs[0] == outputs[1], "two runs differ"
        assert outputs[0] == outputs[2], "worker counts 1 and 4 differ"
