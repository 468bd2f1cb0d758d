"""Acceptance gate: every criterion at its stated tolerance and runtime.

Run with ``pytest tests/test_acceptance.py -v -s`` to see one PASS/FAIL
line per criterion.
"""

import subprocess
import sys
import time
from contextlib import contextmanager
from pathlib import Path

import numpy as np

from zaqlms.adaptive import FilterState, cost_gradient_conj, step
from zaqlms.cli import load_config, main
from zaqlms.experiment import (ALGO_QLMS, ALGO_ZA_QLMS, ScenarioConfig,
                               convergence_iteration, resolve_system,
                               run_scenario, steady_state_mse)
from zaqlms.experiment import _simulate
from zaqlms.qcalculus import check_product_rule, num_grad, num_grad_conj
from zaqlms.quaternion import I, J, K, ONE, Quaternion
from zaqlms.qvector import QVector, dot_t, l1_norm
from zaqlms.signal import SparseSystemSpec

Q = Quaternion
CONFIGS = Path(__file__).resolve().parents[1] / "configs"
STEADY_TAIL = 0.2


@contextmanager
def criterion(num: int, text: str):
    start = time.perf_counter()
    try:
        yield
    except BaseException:
        print(f"FAIL  criterion {num}: {text}")
        raise
    else:
        print(f"PASS  criterion {num}: {text}  [{time.perf_counter() - start:.2f}s]")


def _rand_q(rng, scale=1.0):
    return Q(*(scale * rng.normal(size=4)))


# -- 1: algebra ---------------------------------------------------------------

BASIS = {"1": ONE, "i": I, "j": J, "k": K}
BASIS_TABLE = {
    ("1", "1"): ONE, ("1", "i"): I, ("1", "j"): J, ("1", "k"): K,
    ("i", "1"): I, ("j", "1"): J, ("k", "1"): K,
    ("i", "i"): -ONE, ("j", "j"): -ONE, ("k", "k"): -ONE,
    ("i", "j"): K, ("j", "k"): I, ("k", "i"): J,
    ("j", "i"): -K, ("k", "j"): -I, ("i", "k"): -J,
}


def test_criterion_1_algebra_suite():
    with criterion(1, "basis table exact; assoc/antihom/norm-mult on 1e4 "
                      "samples within 1e-10, under 1 s"):
        start = time.perf_counter()
        for (left, right), expected in BASIS_TABLE.items():
            assert BASIS[left] * BASIS[right] == expected
        rng = np.random.default_rng(1)
        triples = rng.normal(size=(10_000, 3, 4))
        for row in triples:
            p, q, r = (Q(*c) for c in row)
            lhs, rhs = (p * q) * r, p * (q * r)
            diff = lhs - rhs
            assert max(abs(diff.a), abs(diff.b), abs(diff.c), abs(diff.d)) < 1e-10
            conj_diff = (p * q).conj() - q.conj() * p.conj()
            assert max(abs(conj_diff.a), abs(conj_diff.b),
                       abs(conj_diff.c), abs(conj_diff.d)) < 1e-10
            norms = abs((p * q).norm() - p.norm() * q.norm())
            assert norms <= 1e-10 * max(1.0, p.norm() * q.norm())
        assert time.perf_counter() - start < 1.0


# -- 2: calculus oracle --------------------------------------------------------

def test_criterion_2_calculus_oracle():
    with criterion(2, "dq/dq = 1 and dq/dq* = -1/2 within 1e-6; product-rule "
                      "residual < 1e-5, under 1 s"):
        start = time.perf_counter()
        rng = np.random.default_rng(2)
        for h in (1e-4, 1e-5):
            w = QVector([_rand_q(rng)])
            g = num_grad(lambda v: v[0], w, h)[0]
            gc = num_grad_conj(lambda v: v[0], w, h)[0]
            dg = g - ONE
            dgc = gc - Q(-0.5)
            assert max(abs(dg.a), abs(dg.b), abs(dg.c), abs(dg.d)) < 1e-6
            assert max(abs(dgc.a), abs(dgc.b), abs(dgc.c), abs(dgc.d)) < 1e-6
        for _ in range(20):
            alpha, beta, gamma0, delta = (_rand_q(rng) for _ in range(4))
            f = lambda v: alpha * v[0] * beta + gamma0
            g = lambda v: delta * v[0] + v[0].conj() * alpha
            w = QVector([_rand_q(rng)])
            comp = "abcd"[int(rng.integers(4))]
            assert check_product_rule(f, g, w, 0, comp, h=1e-5) < 1e-5
        assert time.perf_counter() - start < 1.0


# -- 3: gradient equivalence ----------------------------------------------------

def test_criterion_3_gradient_equivalence():
    with criterion(3, "closed-form -(1/2)e x* + (1/4)g sgn(w) matches the "
                      "numeric conjugate gradient within 1e-5 rel, 100 trials, "
                      "under 5 s"):
        start = time.perf_counter()
        rng = np.random.default_rng(3)
        for trial in range(100):
            length = int(rng.choice([2, 4, 8]))
            gamma = 0.0 if trial % 2 == 0 else 0.01
            comps = rng.normal(size=(length, 4))
            comps += np.sign(comps) * 0.15  # keep |w_m| well above 0.1
            w = QVector.from_components(comps)
            x = QVector.from_components(rng.normal(size=(length, 4)))
            d = _rand_q(rng)

            def cost(v):
                e = d - dot_t(v, x)
                return e.norm_squared() + gamma * l1_norm(v)

            numeric = num_grad_conj(cost, w)
            closed = cost_gradient_conj(w, x, d, gamma)
            diff = np.abs(numeric.components - closed.components).max()
            assert diff <= 1e-5 * np.abs(closed.components).max()
        assert time.perf_counter() - start < 5.0


# -- 4: reduction to QLMS --------------------------------------------------------

def test_criterion_4_zero_rho_reduction():
    with criterion(4, "with rho = 0 the ZA-QLMS learning curve is bit-identical "
                      "to QLMS"):
        cfg = ScenarioConfig(
            system=SparseSystemSpec(8, (1, 6)),
            mu=0.01, rho=0.0, snr_db=30.0,
            num_iterations=600, num_runs=8, coloring_len=5,
            input_power=1.0, master_seed=404)
        curves = {c.algorithm: c for c in run_scenario(cfg)}
        assert np.array_equal(curves[ALGO_QLMS].mse_linear,
                              curves[ALGO_ZA_QLMS].mse_linear)
        assert np.array_equal(curves[ALGO_QLMS].mse_db,
                              curves[ALGO_ZA_QLMS].mse_db)


# -- 5: identification correctness ------------------------------------------------

def test_criterion_5_identification_correctness():
    with criterion(5, "noiseless L=8 white-input run recovers the true system "
                      "within 1e-3 per component after 5000 iterations, "
                      "under 5 s"):
        start = time.perf_counter()
        mu = 0.01 / (8 * 1.0)  # 0.01 / (L * P_x)
        cfg = ScenarioConfig(
            system=SparseSystemSpec(
                8, (2, 5),
                (Q(0.2, -0.2, 0.1, 0.1), Q(0.1, 0.2, -0.2, 0.1))),
            mu=mu, rho=0.0, snr_db=float("inf"),
            num_iterations=5000, num_runs=1, coloring_len=1,
            input_power=1.0, master_seed=505)
        _, final_w = _simulate(cfg, (0,), 0.0)
        truth = resolve_system(cfg).components
        max_err = np.abs(final_w[0] - truth).max()
        assert max_err < 1e-3, f"max per-component error {max_err:.2e}"
        assert time.perf_counter() - start < 5.0


# -- 6 and 7: scenario reproductions ----------------------------------------------

def _scenario_stats(config_name):
    cfg = load_config(CONFIGS / config_name)
    curves = {c.algorithm: c for c in run_scenario(cfg)}
    stats = {}
    for name, curve in curves.items():
        steady = steady_state_mse(curve, STEADY_TAIL)
        stats[name] = (steady, convergence_iteration(curve, steady + 3.0))
    return stats


def test_criterion_6_scenario_one_reproduction():
    with criterion(6, "scenario one (desk scale, rho/mu = 5/3): ZA-QLMS "
                      "converges earlier and steady states agree within 2 dB, "
                      "under 2 min"):
        start = time.perf_counter()
        stats = _scenario_stats("scenario1_desk.cfg")
        (s_q, c_q), (s_z, c_z) = stats[ALGO_QLMS], stats[ALGO_ZA_QLMS]
        assert c_q is not None and c_z is not None
        assert c_z < c_q, f"ZA-QLMS at {c_z}, QLMS at {c_q}"
        assert abs(s_z - s_q) <= 2.0, f"steady gap {abs(s_z - s_q):.3f} dB"
        assert time.perf_counter() - start < 120.0


def test_criterion_7_scenario_two_reproduction():
    with criterion(7, "scenario two (desk scale, rho/mu = 1): ZA-QLMS "
                      "converges earlier with steady state no more than "
                      "0.5 dB above QLMS, under 1 min"):
        start = time.perf_counter()
        stats = _scenario_stats("scenario2_desk.cfg")
        (s_q, c_q), (s_z, c_z) = stats[ALGO_QLMS], stats[ALGO_ZA_QLMS]
        assert c_q is not None and c_z is not None
        assert c_z < c_q, f"ZA-QLMS at {c_z}, QLMS at {c_q}"
        assert s_z <= s_q + 0.5, f"ZA-QLMS steady {s_z:.3f} vs QLMS {s_q:.3f}"
        assert time.perf_counter() - start < 60.0


# -- 8: CLI determinism --------------------------------------------------------------

DETERMINISM_CONFIG = """\
length          = 8
active_taps     = 1, 6
mu              = 0.01
rho             = 0.001
snr_db          = 30
num_iterations  = 1500
num_runs        = 10
coloring_len    = 5
input_power     = 1.0
master_seed     = 808
algorithms      = qlms, za-qlms
"""


def test_criterion_8_cli_determinism(tmp_path):
    with criterion(8, "repeated CLI invocations (serial or batched) emit "
                      "byte-identical CSV"):
        cfg_path = tmp_path / "det.cfg"
        cfg_path.write_text(DETERMINISM_CONFIG)
        outs = [tmp_path / f"out{i}.csv" for i in range(4)]
        assert main(["--config", str(cfg_path), "--out", str(outs[0]),
                     "--quiet"]) == 0
        assert main(["--config", str(cfg_path), "--out", str(outs[1]),
                     "--quiet"]) == 0
        assert main(["--config", str(cfg_path), "--out", str(outs[2]),
                     "--quiet", "--chunk-size", "1"]) == 0
        proc = subprocess.run(
            [sys.executable, "-m", "zaqlms.cli",
             "--config", str(cfg_path), "--out", str(outs[3]), "--quiet",
             "--chunk-size", "3"],
            capture_output=True, text=True)
        assert proc.returncode == 0, proc.stderr
        blobs = [p.read_bytes() for p in outs]
        assert blobs[0] == blobs[1] == blobs[2] == blobs[3]


# -- 9: zero-attractor micro-property --------------------------------------------------

def test_criterion_9_zero_attractor_micro_property():
    with criterion(9, "with e = 0 one step shrinks each nonzero |w_m| by "
                      "exactly rho (1e-12) and leaves zeros at zero"):
        rng = np.random.default_rng(9)
        comps = rng.normal(size=(6, 4)) * 0.5
        comps[2] = 0.0
        comps[4] = 0.0
        w = QVector.from_components(comps)
        rho = 0.5 * min(w[m].norm() for m in (0, 1, 3, 5))
        state = FilterState(w=w, mu=1e-15, rho=rho)
        x = QVector.from_components(rng.normal(size=(6, 4)))
        d = dot_t(w, x)  # forces e = 0
        new_state, rec = step(state, x, d)
        assert rec.e == Q()
        for m in range(6):
            before, after = w[m].norm(), new_state.w[m].norm()
            if before == 0.0:
                assert new_state.w[m] == Q()
            else:
                assert abs(after - (before - rho)) < 1e-12
