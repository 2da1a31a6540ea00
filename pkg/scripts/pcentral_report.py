#!/usr/bin/env python3
"""Enumerate a congruence quotient and print its filtration profile.

Usage: python scripts/pcentral_report.py [--m 2] [--p 3] [--prec 4] [--window 2]
"""

import argparse
import sys
import time
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

from tamelab.matgrp import sl_standard_generators
from tamelab.pcentral import closure, pcentral_series, uniformity_check


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--m", type=int, default=2)
    parser.add_argument("--p", type=int, default=3)
    parser.add_argument("--prec", type=int, default=4)
    parser.add_argument("--window", type=int, default=2)
    args = parser.parse_args()

    t0 = time.monotonic()
    G = closure(sl_standard_generators(args.m, args.p, args.prec))
    chain = pcentral_series(G)
    print(f"group order: {G.order} (p={args.p}, prec={args.prec}, m={args.m})")
    for n, level in enumerate(chain.levels, start=1):
        print(f"  |P_{n}| = {len(level)}")
    print(f"layer dims: {chain.dims}")
    for n in (2, 3):
        if n < len(chain.levels) + 1:
            same = chain.level(n) == chain.depth_filtration(n)
            print(f"  P_{n} == depth-{n} filtration: {same}")
    report = uniformity_check(G, args.window, chain)
    print(f"frattini quotient abelian: {report.frattini_abelian}")
    print(f"power maps bijective:      {report.power_map_bijective}")
    print(f"uniform on window {args.window}:       {report.uniform}")
    print(f"elapsed: {time.monotonic() - t0:.2f}s")


if __name__ == "__main__":
    main()
