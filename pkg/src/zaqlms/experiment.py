"""Monte-Carlo learning-curve experiments comparing QLMS and ZA-QLMS.

Each run index owns its private input and noise streams derived from the
master seed, so both algorithms consume bit-identical realizations (a
paired comparison) and results do not depend on execution order.  Runs
advance in lockstep through a batched numpy kernel; lanes never interact,
so per-run results are bit-identical whether runs execute one at a time
or all at once (``chunk_size`` only trades memory for speed).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .adaptive import DivergenceError
from .qvector import QVector, hamilton, sgn_components
from .signal import (SparseSystemSpec, build_system, coloring_stream,
                     fir_filter, gen_coloring_filter, input_stream,
                     noise_stream, random_unit_taps, scale_noise_to_snr,
                     system_stream, white_qgauss)

__all__ = [
    "ALGO_QLMS", "ALGO_ZA_QLMS", "ALGORITHMS",
    "ScenarioConfig", "LearningCurve",
    "run_single", "run_scenario", "steady_state_mse", "convergence_iteration",
    "resolve_system",
]

ALGO_QLMS = "QLMS"
ALGO_ZA_QLMS = "ZA-QLMS"
ALGORITHMS = (ALGO_QLMS, ALGO_ZA_QLMS)

# A run is declared diverged when its squared error exceeds this multiple of
# the level seen over the first few iterations.
DIVERGENCE_FACTOR = 1e6
_INITIAL_WINDOW = 10

# Debounce used by convergence_iteration: after crossing, the curve must stay
# within this many dB above the threshold for this many iterations.
DEBOUNCE_ITERATIONS = 100
DEBOUNCE_SLACK_DB = 3.0


@dataclass(frozen=True)
class ScenarioConfig:
    """Full description of one sparse-identification experiment."""

    system: SparseSystemSpec
    mu: float
    rho: float
    snr_db: float
    num_iterations: int
    num_runs: int
    coloring_len: int = 5
    input_power: float = 1.0
    master_seed: int = 0
    algorithms: tuple[str, ...] = ALGORITHMS
    coloring_quaternion: bool = True

    def __post_init__(self):
        object.__setattr__(self, "algorithms", tuple(self.algorithms))
        if not self.mu > 0.0:
            raise ValueError(f"mu: must be > 0, got {self.mu}")
        if not self.rho >= 0.0:
            raise ValueError(f"rho: must be >= 0, got {self.rho}")
        if math.isnan(self.snr_db) or self.snr_db == -math.inf:
            # +inf is the documented noiseless sentinel.
            raise ValueError(f"snr_db: must be a real number or +inf, got {self.snr_db}")
        if self.num_iterations < 1:
            raise ValueError(f"num_iterations: must be >= 1, got {self.num_iterations}")
        if self.num_runs < 1:
            raise ValueError(f"num_runs: must be >= 1, got {self.num_runs}")
        if self.coloring_len < 1:
            raise ValueError(f"coloring_len: must be >= 1, got {self.coloring_len}")
        if not self.input_power > 0.0:
            raise ValueError(f"input_power: must be > 0, got {self.input_power}")
        if not 0 <= self.master_seed < 2 ** 64:
            raise ValueError(f"master_seed: must be an unsigned 64-bit integer, "
                             f"got {self.master_seed}")
        if not self.algorithms:
            raise ValueError("algorithms: at least one algorithm is required")
        for name in self.algorithms:
            if name not in ALGORITHMS:
                raise ValueError(f"algorithms: unknown algorithm {name!r} "
                                 f"(expected one of {ALGORITHMS})")
        if len(set(self.algorithms)) != len(self.algorithms):
            raise ValueError(f"algorithms: duplicate entries in {self.algorithms}")


@dataclass(frozen=True, eq=False)
class LearningCurve:
    """Per-iteration MSE averaged over runs, linear and in dB."""

    algorithm: str
    mse_linear: np.ndarray
    mse_db: np.ndarray

    @classmethod
    def from_linear(cls, algorithm: str, mse_linear: np.ndarray) -> LearningCurve:
        mse_linear = np.asarray(mse_linear, dtype=np.float64)
        with np.errstate(divide="ignore"):
            mse_db = 10.0 * np.log10(mse_linear)
        mse_linear.flags.writeable = False
        mse_db.flags.writeable = False
        return cls(algorithm=algorithm, mse_linear=mse_linear, mse_db=mse_db)

    def __len__(self) -> int:
        return self.mse_linear.shape[0]


def resolve_system(config: ScenarioConfig) -> QVector:
    """The true sparse weight vector, drawing tap values if the config omits them."""
    spec = config.system
    if spec.tap_values is None:
        values = random_unit_taps(system_stream(config.master_seed),
                                  len(spec.active_taps))
        spec = SparseSystemSpec(spec.length, spec.active_taps, values)
    return build_system(spec)


def _coloring_filter(config: ScenarioConfig) -> QVector:
    return gen_coloring_filter(coloring_stream(config.master_seed),
                               config.coloring_len,
                               quaternion_valued=config.coloring_quaternion)


def _run_signals(config: ScenarioConfig, run_index: int) -> tuple[np.ndarray, np.ndarray]:
    """Colored input and reference ``d`` for one run, as (N, 4) component arrays.

    Pure in (config, run_index): both algorithms see identical realizations.
    """
    n = config.num_iterations
    white = white_qgauss(input_stream(config.master_seed, run_index),
                         n, config.input_power)
    colored = fir_filter(_coloring_filter(config), white)

    # The regressor is x[n] = [x[n-1], ..., x[n-L]], so the clean system
    # output is the system convolution delayed by one sample (zero padded).
    full = fir_filter(resolve_system(config), colored).components
    clean = np.zeros((n, 4))
    clean[1:] = full[:-1]

    if config.snr_db == math.inf:
        d = clean
    else:
        raw_noise = white_qgauss(noise_stream(config.master_seed, run_index), n, 1.0)
        noise = scale_noise_to_snr(QVector.from_components(clean), raw_noise,
                                   config.snr_db)
        d = clean + noise.components
    return colored.components, d


def _simulate(config: ScenarioConfig, run_indices: tuple[int, ...],
              rho_eff: float) -> tuple[np.ndarray, np.ndarray]:
    """Advance the given runs in lockstep; returns (|e|^2 per run/iteration, final weights).

    The per-lane arithmetic is identical to :func:`zaqlms.adaptive.step`:
    same Hamilton-product expressions, same zero-start accumulation order
    over taps, so object-level and batched trajectories agree bitwise.
    """
    length = config.system.length
    n = config.num_iterations
    r = len(run_indices)

    padded = np.zeros((r, n + length, 4))
    d = np.empty((r, n, 4))
    for lane, run_index in enumerate(run_indices):
        colored, d_run = _run_signals(config, run_index)
        padded[lane, length:] = colored
        d[lane] = d_run

    mu = config.mu
    w = np.zeros((r, length, 4))
    err2 = np.empty((r, n))
    # Divergence is detected from the recorded errors afterwards; keep numpy
    # quiet about the overflows a runaway run produces along the way.
    with np.errstate(over="ignore", invalid="ignore"):
        for it in range(n):
            win = np.flip(padded[:, it:it + length, :], axis=1)
            prod = hamilton(w, win)
            acc = np.zeros((r, 4))
            for m in range(length):
                acc = acc + prod[:, m, :]
            e = d[:, it, :] - acc
            upd = hamilton(e[:, None, :], win, conj_q=True)
            if rho_eff != 0.0:
                w = (w + mu * upd) - rho_eff * sgn_components(w)
            else:
                w = w + mu * upd
            err2[:, it] = e[:, 0] ** 2 + e[:, 1] ** 2 + e[:, 2] ** 2 + e[:, 3] ** 2

    _check_divergence(err2, w, run_indices)
    return err2, w


def _check_divergence(err2: np.ndarray, final_w: np.ndarray,
                      run_indices: tuple[int, ...]) -> None:
    n = err2.shape[1]
    initial = err2[:, :min(_INITIAL_WINDOW, n)].mean(axis=1)
    limit = np.where(initial > 0.0, DIVERGENCE_FACTOR * initial, np.inf)
    for lane, run_index in enumerate(run_indices):
        row = err2[lane]
        bad = ~np.isfinite(row) | (row > limit[lane])
        if bad.any():
            it = int(np.flatnonzero(bad)[0])
            raise DivergenceError(
                f"run {run_index} diverged at iteration {it}: "
                f"|e|^2 = {row[it]:.6g} (initial level {initial[lane]:.6g})")
        if not np.isfinite(final_w[lane]).all():
            raise DivergenceError(f"run {run_index}: non-finite weights after "
                                  f"final update")


def _effective_rho(config: ScenarioConfig, algorithm: str) -> float:
    if algorithm == ALGO_QLMS:
        return 0.0
    if algorithm == ALGO_ZA_QLMS:
        return config.rho
    raise ValueError(f"unknown algorithm {algorithm!r} (expected one of {ALGORITHMS})")


def run_single(config: ScenarioConfig, run_index: int, algorithm: str) -> np.ndarray:
    """Per-iteration squared-error magnitudes ``|e[n]|^2`` for one run."""
    if not 0 <= run_index:
        raise ValueError(f"run_index must be >= 0, got {run_index}")
    err2, _ = _simulate(config, (run_index,), _effective_rho(config, algorithm))
    out = err2[0]
    out.flags.writeable = False
    return out


def run_scenario(config: ScenarioConfig,
                 chunk_size: int | None = None) -> list[LearningCurve]:
    """Averaged learning curves for each configured algorithm, in config order.

    ``chunk_size`` bounds how many runs advance at once (None = all); it
    affects memory and speed only, never the result.  Any diverged run
    aborts the scenario with a :class:`DivergenceError` naming it.
    """
    if chunk_size is not None and chunk_size < 1:
        raise ValueError(f"chunk_size must be >= 1, got {chunk_size}")
    runs = config.num_runs
    step_size = runs if chunk_size is None else chunk_size

    curves = []
    for algorithm in config.algorithms:
        rho_eff = _effective_rho(config, algorithm)
        err2 = np.empty((runs, config.num_iterations))
        for start in range(0, runs, step_size):
            indices = tuple(range(start, min(start + step_size, runs)))
            chunk_err2, _ = _simulate(config, indices, rho_eff)
            err2[start:start + len(indices)] = chunk_err2
        curves.append(LearningCurve.from_linear(algorithm, err2.mean(axis=0)))
    return curves


def steady_state_mse(curve: LearningCurve, tail_fraction: float) -> float:
    """Mean of ``mse_db`` over the final ``tail_fraction`` of iterations."""
    if not 0.0 < tail_fraction <= 1.0:
        raise ValueError(f"tail_fraction must be in (0, 1], got {tail_fraction}")
    n = len(curve)
    k = int(n * tail_fraction)
    if k < 1:
        raise ValueError(f"empty tail: {tail_fraction} of {n} iterations rounds to 0")
    return float(curve.mse_db[n - k:].mean())


def convergence_iteration(curve: LearningCurve, threshold_db: float) -> int | None:
    """First iteration at or below ``threshold_db`` that holds (debounced).

    The crossing counts only if the curve stays within
    ``DEBOUNCE_SLACK_DB`` above the threshold for the following
    ``DEBOUNCE_ITERATIONS`` iterations (or to the end of the curve).
    Returns None when the curve never qualifies.
    """
    db = curve.mse_db
    n = db.shape[0]
    stay = db <= threshold_db + DEBOUNCE_SLACK_DB
    bad_cumsum = np.zeros(n + 1, dtype=np.int64)
    bad_cumsum[1:] = np.cumsum(~stay)
    lo = np.arange(1, n + 1)
    hi = np.minimum(lo + DEBOUNCE_ITERATIONS, n)
    window_clean = (bad_cumsum[hi] - bad_cumsum[lo]) == 0
    candidates = (db <= threshold_db) & window_clean
    hits = np.flatnonzero(candidates)
    return int(hits[0]) if hits.size else None
