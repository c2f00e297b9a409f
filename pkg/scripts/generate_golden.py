#!/usr/bin/env python3
"""Regenerate the committed golden report for the bundled fixture config.

Run after any intentional change to the pipeline, fixtures, or rendering:

    python scripts/generate_golden.py

then review the diff and hand-verify spot values before committing (the
test suite cross-checks the statistics against independent oracles).
The golden files are environment-pinned: regenerate them when the
scikit-learn version changes.
"""

from __future__ import annotations

import shutil
import sys
from pathlib import Path

from mentorminer.report import RENDER_FORMATS, load_config, render, run_pipeline, write_bundle

GOLDEN = Path(__file__).resolve().parent.parent / "src" / "mentorminer" / "data" / "golden"


def main() -> int:
    config = load_config("fixture")
    bundle = run_pipeline(config)
    if bundle.partial:
        for name, error in bundle.failed_stages:
            print(f"stage failed: {name}: {error}", file=sys.stderr)
        return 1
    if GOLDEN.exists():
        shutil.rmtree(GOLDEN)
    GOLDEN.mkdir(parents=True)
    write_bundle(bundle, GOLDEN / "bundle.json")
    for fmt in RENDER_FORMATS:
        render(bundle, fmt, GOLDEN)
    print(f"golden report written to {GOLDEN}")
    print(f"config hash: {bundle.config_hash}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
