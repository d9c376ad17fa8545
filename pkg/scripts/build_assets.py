"""Regenerate the JSON tables under src/tubeknots/data.

Every table is a cache of a deterministic search in tubeknots.blocks; the
package falls back to the search when a table is missing.

    python3 scripts/build_assets.py [--only stretch,closures,...]
"""

import argparse
import json
import time
from pathlib import Path

from tubeknots import blocks

DATA = Path(__file__).resolve().parent.parent / "src" / "tubeknots" / "data"


def build_blocks():
    return blocks.braid_assets_json()


def build_stretch():
    out = {}
    for stubs, h in blocks._end_configs():
        start = blocks.Tail(stubs, frozenset(blocks._se((0,) + a, (0,) + b) for a, b in h))
        out[blocks._tail_key(start)] = blocks.stretch_tail(stubs, h).to_json()
    return out


def build_closures():
    return blocks.build_closure_table()


def build_patterns():
    return {"trefoil": blocks.make_trefoil_pattern().block.to_json()}


def build_constants():
    return {
        "C": blocks.C_STRETCH,
        "D": blocks.SPLIT_D,
        "E": blocks.COMBINE_E,
        "plain_added": blocks.PLAIN_ADDED,
        "braid_boundary": blocks.braid_assets_json()["boundary"],
        "standard_pair": blocks._pads()[0],
        "pattern_increase": blocks.pattern_increase(blocks.make_trefoil_pattern()),
    }


BUILDERS = {
    "blocks": build_blocks,
    "stretch": build_stretch,
    "closures": build_closures,
    "patterns": build_patterns,
    "constants": build_constants,
}


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--only", default=",".join(BUILDERS))
    args = ap.parse_args()
    DATA.mkdir(parents=True, exist_ok=True)
    for name in args.only.split(","):
        t = time.time()
        table = BUILDERS[name]()
        (DATA / f"{name}.json").write_text(json.dumps(table, indent=1, sort_keys=True) + "\n")
        print(f"{name}: {len(table)} entries, {time.time() - t:.1f}s")


if __name__ == "__main__":
    main()
