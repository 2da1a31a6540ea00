#!/usr/bin/env python3
"""Regenerate the structure-constant fixture files shipped with the package."""

import json
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

from tamelab.liealg import (
    abelian_table,
    quaternion_table,
    sl2_table,
    sl_table,
    solvable2_table,
)

FIXTURES = {
    "sl2": sl2_table(),
    "sl3": sl_table(3),
    "sl4": sl_table(4),
    "quaternion_a2_p5": quaternion_table(2, 5),
    "quaternion_a2_p3": quaternion_table(2, 3),
    "abelian2": abelian_table(2),
    "solvable2": solvable2_table(),
}


def main():
    out_dir = Path(__file__).resolve().parents[1] / "src" / "tamelab" / "fixtures"
    out_dir.mkdir(parents=True, exist_ok=True)
    for name, algebra in FIXTURES.items():
        path = out_dir / f"{name}.json"
        with open(path, "w") as fh:
            json.dump(algebra.to_json(), fh, indent=1, sort_keys=True)
            fh.write("\n")
        print(f"wrote {path}")


if __name__ == "__main__":
    main()
