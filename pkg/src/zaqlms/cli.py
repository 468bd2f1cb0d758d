"""Command-line front end: parse a scenario config, run it, emit CSV curves.

Config files are flat ``key = value`` lines (``#`` starts a comment).
Lists are comma separated; quaternion literals use the ``a+bi+cj+dk``
form.  Exit codes: 0 success, 2 config error, 3 diverged run, 4 I/O
error writing results.
"""

from __future__ import annotations

import argparse
import math
import os
import sys
import tempfile
from dataclasses import replace
from pathlib import Path

from .adaptive import DivergenceError
from .experiment import (ALGO_QLMS, ALGO_ZA_QLMS, LearningCurve,
                         ScenarioConfig, convergence_iteration, run_scenario,
                         steady_state_mse)
from .quaternion import Quaternion
from .signal import SparseSystemSpec

__all__ = ["ConfigError", "parse_config", "render_config", "load_config",
           "emit_csv", "main", "entry",
           "EXIT_OK", "EXIT_CONFIG", "EXIT_DIVERGENCE", "EXIT_IO"]

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_DIVERGENCE = 3
EXIT_IO = 4

# Run-summary conventions: steady state is the mean dB over this tail
# fraction, and a curve counts as converged at steady state + 3 dB.
SUMMARY_TAIL = 0.2
SUMMARY_THRESHOLD_DB = 3.0


class ConfigError(ValueError):
    """Malformed or invalid scenario configuration."""


_ALGO_NAMES = {
    "qlms": ALGO_QLMS,
    "za-qlms": ALGO_ZA_QLMS,
    "za_qlms": ALGO_ZA_QLMS,
}

_REQUIRED_KEYS = ("length", "active_taps", "mu", "rho", "snr_db",
                  "num_iterations", "num_runs", "coloring_len",
                  "input_power", "master_seed", "algorithms")
_OPTIONAL_KEYS = ("tap_values", "coloring_quaternion")
_ALL_KEYS = frozenset(_REQUIRED_KEYS) | frozenset(_OPTIONAL_KEYS)


def _parse_int(text: str) -> int:
    try:
        return int(text, 10)
    except ValueError:
        raise ValueError(f"expected an integer, got {text!r}") from None


def _parse_float(text: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise ValueError(f"expected a number, got {text!r}") from None
    if math.isnan(value):
        raise ValueError("nan is not a valid value")
    return value


def _parse_bool(text: str) -> bool:
    lowered = text.strip().lower()
    if lowered in ("true", "yes", "1"):
        return True
    if lowered in ("false", "no", "0"):
        return False
    raise ValueError(f"expected true/false, got {text!r}")


def _parse_int_list(text: str) -> tuple[int, ...]:
    items = [item.strip() for item in text.split(",")]
    if any(not item for item in items):
        raise ValueError(f"expected a comma-separated integer list, got {text!r}")
    return tuple(_parse_int(item) for item in items)


def _parse_quat_list(text: str) -> tuple[Quaternion, ...]:
    items = [item.strip() for item in text.split(",")]
    if any(not item for item in items):
        raise ValueError(f"expected a comma-separated quaternion list, got {text!r}")
    return tuple(Quaternion.parse(item) for item in items)


def _parse_algorithms(text: str) -> tuple[str, ...]:
    names = []
    for item in text.split(","):
        key = item.strip().lower()
        if key not in _ALGO_NAMES:
            raise ValueError(f"unknown algorithm {item.strip()!r} "
                             f"(expected qlms and/or za-qlms)")
        names.append(_ALGO_NAMES[key])
    return tuple(names)


def parse_config(text: str) -> ScenarioConfig:
    """Parse the flat key/value config format into a validated ScenarioConfig.

    Unknown keys, duplicates, and malformed lines are reported with their
    line (and column, where meaningful); invariant violations carry the
    offending field's name.
    """
    raw: dict[str, tuple[str, int, int]] = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.split("#", 1)[0]
        if not stripped.strip():
            continue
        if "=" not in stripped:
            raise ConfigError(f"line {lineno}, col 1: expected 'key = value'")
        key_part, value_part = stripped.split("=", 1)
        key = key_part.strip()
        value = value_part.strip()
        value_col = stripped.index("=") + 2 + (len(value_part) - len(value_part.lstrip()))
        if key not in _ALL_KEYS:
            raise ConfigError(f"line {lineno}, col 1: unknown key {key!r}")
        if key in raw:
            raise ConfigError(f"line {lineno}, col 1: duplicate key {key!r} "
                              f"(first set on line {raw[key][1]})")
        if not value:
            raise ConfigError(f"line {lineno}, col {value_col}: missing value for {key!r}")
        raw[key] = (value, lineno, value_col)

    missing = [key for key in _REQUIRED_KEYS if key not in raw]
    if missing:
        raise ConfigError(f"missing required keys: {', '.join(missing)}")

    def parsed(key, parser, default=None):
        if key not in raw:
            return default
        value, lineno, col = raw[key]
        try:
            return parser(value)
        except ValueError as exc:
            raise ConfigError(f"line {lineno}, col {col}: {key}: {exc}") from None

    try:
        system = SparseSystemSpec(
            length=parsed("length", _parse_int),
            active_taps=parsed("active_taps", _parse_int_list),
            tap_values=parsed("tap_values", _parse_quat_list),
        )
        return ScenarioConfig(
            system=system,
            mu=parsed("mu", _parse_float),
            rho=parsed("rho", _parse_float),
            snr_db=parsed("snr_db", _parse_float),
            num_iterations=parsed("num_iterations", _parse_int),
            num_runs=parsed("num_runs", _parse_int),
            coloring_len=parsed("coloring_len", _parse_int),
            input_power=parsed("input_power", _parse_float),
            master_seed=parsed("master_seed", _parse_int),
            algorithms=parsed("algorithms", _parse_algorithms),
            coloring_quaternion=parsed("coloring_quaternion", _parse_bool, True),
        )
    except ConfigError:
        raise
    except ValueError as exc:
        raise ConfigError(str(exc)) from None


def render_config(config: ScenarioConfig) -> str:
    """Canonical text form; ``parse_config(render_config(c)) == c``."""
    lines = [
        f"length = {config.system.length}",
        f"active_taps = {', '.join(str(t) for t in config.system.active_taps)}",
    ]
    if config.system.tap_values is not None:
        lines.append("tap_values = "
                     + ", ".join(str(q) for q in config.system.tap_values))
    lines += [
        f"mu = {config.mu!r}",
        f"rho = {config.rho!r}",
        f"snr_db = {config.snr_db!r}",
        f"num_iterations = {config.num_iterations}",
        f"num_runs = {config.num_runs}",
        f"coloring_len = {config.coloring_len}",
        f"input_power = {config.input_power!r}",
        f"master_seed = {config.master_seed}",
        f"algorithms = {', '.join(a.lower() for a in config.algorithms)}",
        f"coloring_quaternion = {'true' if config.coloring_quaternion else 'false'}",
    ]
    return "\n".join(lines) + "\n"


def load_config(path: str | Path) -> ScenarioConfig:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from None
    return parse_config(text)


def _algo_slug(name: str) -> str:
    return name.lower().replace("-", "_")


def emit_csv(curves: list[LearningCurve], path: str | Path) -> None:
    """Write curves as CSV: header then one row per iteration, full precision.

    The file appears atomically (written to a temp file, then renamed), so
    a crash never leaves a truncated file at ``path``.  LF line endings;
    byte-identical output for identical curves.
    """
    if not curves:
        raise ValueError("no curves to write")
    n = len(curves[0])
    if any(len(curve) != n for curve in curves):
        raise ValueError("curves have differing lengths")

    header = "iteration," + ",".join(
        f"{_algo_slug(c.algorithm)}_mse,{_algo_slug(c.algorithm)}_mse_db"
        for c in curves)
    path = Path(path)
    fd, tmp_name = tempfile.mkstemp(dir=path.parent, prefix=path.name, suffix=".tmp")
    try:
        with os.fdopen(fd, "w", newline="") as handle:
            handle.write(header + "\n")
            for it in range(n):
                row = [str(it)]
                for curve in curves:
                    row.append(repr(float(curve.mse_linear[it])))
                    row.append(repr(float(curve.mse_db[it])))
                handle.write(",".join(row) + "\n")
        os.replace(tmp_name, path)
    except BaseException:
        try:
            os.unlink(tmp_name)
        except OSError:
            pass
        raise


def _summary_lines(curves: list[LearningCurve]) -> list[str]:
    lines = []
    for curve in curves:
        if int(len(curve) * SUMMARY_TAIL) < 1:
            lines.append(f"{curve.algorithm}: curve too short for a "
                         f"steady-state estimate")
            continue
        steady = steady_state_mse(curve, SUMMARY_TAIL)
        threshold = steady + SUMMARY_THRESHOLD_DB
        conv = convergence_iteration(curve, threshold)
        conv_text = f"iteration {conv}" if conv is not None else "never (within run)"
        lines.append(f"{curve.algorithm}: steady-state MSE {steady:.2f} dB; "
                     f"converged at {conv_text} "
                     f"(threshold {threshold:.2f} dB)")
    return lines


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qlms-sparse",
        description="Run a QLMS / ZA-QLMS sparse-identification scenario and "
                    "write the averaged learning curves as CSV.")
    parser.add_argument("--config", required=True, help="scenario config file")
    parser.add_argument("--out", required=True, help="output CSV path")
    parser.add_argument("--seed", type=int, default=None,
                        help="override the config's master seed")
    parser.add_argument("--runs", type=int, default=None,
                        help="override the config's number of runs")
    parser.add_argument("--quiet", action="store_true",
                        help="suppress the run summary")
    parser.add_argument("--chunk-size", type=int, default=None,
                        help="advance at most this many runs at once "
                             "(execution knob; never changes the output)")
    return parser


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        config = load_config(args.config)
        overrides = {}
        if args.seed is not None:
            overrides["master_seed"] = args.seed
        if args.runs is not None:
            overrides["num_runs"] = args.runs
        if overrides:
            config = replace(config, **overrides)
        if args.chunk_size is not None and args.chunk_size < 1:
            raise ConfigError(f"--chunk-size must be >= 1, got {args.chunk_size}")
    except (ConfigError, ValueError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG

    try:
        curves = run_scenario(config, chunk_size=args.chunk_size)
    except DivergenceError as exc:
        print(f"divergence: {exc}", file=sys.stderr)
        return EXIT_DIVERGENCE

    try:
        emit_csv(curves, args.out)
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return EXIT_IO

    if not args.quiet:
        print(f"wrote {args.out} ({len(curves[0])} iterations, "
              f"{config.num_runs} runs)")
        for line in _summary_lines(curves):
            print(line)
    return EXIT_OK


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
