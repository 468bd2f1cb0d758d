"""Deterministic, seedable generation of the simulation's stochastic inputs.

Randomness is drawn from counter-based Philox generators keyed by a
64-bit master seed plus an integer stream id, so every consumer (input
signal, coloring filter, unknown system, observation noise, each
Monte-Carlo run) owns an independent, reproducible stream regardless of
execution order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .quaternion import Quaternion
from .qvector import QVector, hamilton

__all__ = [
    "RngStream", "SparseSystemSpec",
    "coloring_stream", "system_stream", "input_stream", "noise_stream",
    "white_qgauss", "gen_coloring_filter", "fir_filter",
    "scale_noise_to_snr", "build_system", "random_unit_taps",
]

_MAX_SEED = 2 ** 64

# Stream-id encoding: low two bits select the domain, the rest the run index.
_DOM_COLORING = 0
_DOM_SYSTEM = 1
_DOM_INPUT = 2
_DOM_NOISE = 3


@dataclass(frozen=True)
class RngStream:
    """A (seed, stream-id) pair naming one reproducible random stream."""

    seed: int
    stream: int

    def __post_init__(self):
        if not 0 <= self.seed < _MAX_SEED:
            raise ValueError(f"seed must be an unsigned 64-bit integer, got {self.seed}")
        if self.stream < 0:
            raise ValueError(f"stream id must be >= 0, got {self.stream}")

    def generator(self) -> np.random.Generator:
        seq = np.random.SeedSequence(entropy=self.seed, spawn_key=(self.stream,))
        return np.random.Generator(np.random.Philox(seq))


def coloring_stream(seed: int) -> RngStream:
    return RngStream(seed, _DOM_COLORING)


def system_stream(seed: int) -> RngStream:
    return RngStream(seed, _DOM_SYSTEM)


def input_stream(seed: int, run_index: int) -> RngStream:
    return RngStream(seed, (run_index << 2) | _DOM_INPUT)


def noise_stream(seed: int, run_index: int) -> RngStream:
    return RngStream(seed, (run_index << 2) | _DOM_NOISE)


@dataclass(frozen=True)
class SparseSystemSpec:
    """Description of a sparse FIR system: which taps are active, and with what values.

    ``tap_values`` may be None, meaning the experiment draws unit-modulus
    values from the system stream once per experiment.
    """

    length: int
    active_taps: tuple[int, ...]
    tap_values: tuple[Quaternion, ...] | None = None

    def __post_init__(self):
        object.__setattr__(self, "active_taps", tuple(self.active_taps))
        if self.tap_values is not None:
            object.__setattr__(self, "tap_values", tuple(self.tap_values))
        if self.length < 1:
            raise ValueError(f"length: must be >= 1, got {self.length}")
        if not self.active_taps:
            raise ValueError("active_taps: at least one active tap is required")
        for t in self.active_taps:
            if not 0 <= t < self.length:
                raise ValueError(f"active_taps: index {t} out of range [0, {self.length})")
        if any(b <= a for a, b in zip(self.active_taps, self.active_taps[1:])):
            raise ValueError(f"active_taps: indices must be strictly increasing, "
                             f"got {self.active_taps}")
        if self.tap_values is not None and len(self.tap_values) != len(self.active_taps):
            raise ValueError(f"tap_values: expected {len(self.active_taps)} values, "
                             f"got {len(self.tap_values)}")


def white_qgauss(rng: RngStream, n: int, sigma2: float) -> QVector:
    """``n`` quaternion white Gaussian samples with total power ``E|q|^2 = sigma2``.

    The four real components are i.i.d. zero-mean Gaussians of variance
    ``sigma2 / 4``.
    """
    if n < 1:
        raise ValueError(f"sample count must be >= 1, got {n}")
    if not sigma2 > 0.0:
        raise ValueError(f"sigma2 must be > 0, got {sigma2}")
    comps = rng.generator().normal(0.0, math.sqrt(sigma2 / 4.0), size=(n, 4))
    return QVector.from_components(comps)


def gen_coloring_filter(rng: RngStream, length: int,
                        quaternion_valued: bool = True) -> QVector:
    """Random FIR coloring filter with unit energy ``sum |h_m|^2 = 1``.

    Taps have i.i.d. Gaussian components; with ``quaternion_valued=False``
    only the real parts are drawn (a real-coefficient filter).
    """
    if length < 1:
        raise ValueError(f"filter length must be >= 1, got {length}")
    g = rng.generator()
    comps = np.zeros((length, 4))
    if quaternion_valued:
        comps[:] = g.normal(size=(length, 4))
    else:
        comps[:, 0] = g.normal(size=length)
    energy = float((comps ** 2).sum())
    comps /= math.sqrt(energy)
    return QVector.from_components(comps)


def fir_filter(h: QVector, x: QVector) -> QVector:
    """Convolve: ``y[n] = sum_m h_m * x[n-m]`` with zero padding for n-m < 0.

    Output has the input's length; products are taken in ``h_m * x`` order,
    matching the filter's ``w^T x`` convention.
    """
    hc = h.components
    xc = x.components
    n = xc.shape[0]
    y = np.zeros((n, 4))
    for m in range(hc.shape[0]):
        if m >= n:
            break
        y[m:] += hamilton(hc[m], xc[:n - m])
    return QVector.from_components(y)


def scale_noise_to_snr(signal: QVector, noise: QVector, snr_db: float) -> QVector:
    """Rescale ``noise`` so the empirical SNR against ``signal`` is ``snr_db``.

    Powers are empirical means of ``|.|^2`` over each sequence.  A
    ``snr_db`` of ``+inf`` returns exactly zero noise (the noiseless
    sentinel).  Zero signal or noise power is an error.
    """
    if len(signal) != len(noise):
        raise ValueError(f"length mismatch: {len(signal)} vs {len(noise)}")
    if math.isnan(snr_db) or snr_db == -math.inf:
        raise ValueError(f"snr_db must be a real number or +inf, got {snr_db}")
    if snr_db == math.inf:
        return QVector.from_components(np.zeros((len(noise), 4)))
    p_signal = float((signal.components ** 2).sum(axis=1).mean())
    if p_signal == 0.0:
        raise ValueError("zero signal power: SNR scaling is undefined")
    p_noise = float((noise.components ** 2).sum(axis=1).mean())
    if p_noise == 0.0:
        raise ValueError("zero noise power: nothing to rescale")
    target = p_signal / 10.0 ** (snr_db / 10.0)
    return math.sqrt(target / p_noise) * noise


def build_system(spec: SparseSystemSpec) -> QVector:
    """Materialize the sparse system as a dense weight vector."""
    if spec.tap_values is None:
        raise ValueError("tap_values not resolved; draw them before building the system")
    comps = np.zeros((spec.length, 4))
    for idx, q in zip(spec.active_taps, spec.tap_values):
        comps[idx] = (q.a, q.b, q.c, q.d)
    return QVector.from_components(comps)


def random_unit_taps(rng: RngStream, count: int) -> tuple[Quaternion, ...]:
    """Draw ``count`` independent unit-modulus quaternions."""
    if count < 1:
        raise ValueError(f"count must be >= 1, got {count}")
    comps = rng.generator().normal(size=(count, 4))
    nrm = np.sqrt((comps ** 2).sum(axis=1, keepdims=True))
    comps = comps / nrm
    return tuple(Quaternion(*row) for row in comps)
