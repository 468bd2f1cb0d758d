#!/usr/bin/env python3
"""Run both desk-scale scenarios and write their learning curves to results/.

Pass --published to also run the verbatim published-parameter configs
(their step sizes are far from plateau at this iteration count; the CSVs
mainly document the early transient).
"""

import argparse
import sys
from pathlib import Path

from zaqlms.cli import main as cli_main

ROOT = Path(__file__).resolve().parents[1]


def run(config: str, out: Path) -> int:
    print(f"== {config} -> {out}")
    return cli_main(["--config", str(ROOT / "configs" / config), "--out", str(out)])


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--published", action="store_true",
                        help="also run the verbatim published-parameter configs")
    parser.add_argument("--results", default=ROOT / "results", type=Path)
    args = parser.parse_args()

    args.results.mkdir(parents=True, exist_ok=True)
    configs = ["scenario1_desk.cfg", "scenario2_desk.cfg"]
    if args.published:
        configs += ["scenario1.cfg", "scenario2.cfg"]
    for config in configs:
        code = run(config, args.results / config.replace(".cfg", ".csv"))
        if code != 0:
            return code
    return 0


if __name__ == "__main__":
    sys.exit(main())
