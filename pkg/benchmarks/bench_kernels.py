#!/usr/bin/env python3
"""Benchmark the compiled enumeration kernel against its pure twins.

Usage: python benchmarks/bench_kernels.py [--bound B]
"""

import argparse
import time

import numpy as np

from aupoly import _fallback
from aupoly.lattice import GramMatrix3, ShiftVector, coset
from aupoly.oracle import _int64_safe, _permuted_inputs

try:
    from aupoly import _speedups
except ImportError:
    _speedups = None

CASES = [
    ("25x^2+y^2+z^2+10x", GramMatrix3.diagonal(25, 1, 1),
     ShiftVector((1, 0, 0), 5)),
    ("diag(9,3,3)+e1/3", GramMatrix3.diagonal(9, 3, 3),
     ShiftVector((1, 0, 0), 3)),
    ("diag(98,21,49)+e1/7", GramMatrix3.diagonal(98, 21, 49),
     ShiftVector((1, 0, 0), 7)),
]


def run(fill, cs, bound):
    d, gp, r, _ = _permuted_inputs(cs)
    assert _int64_safe(gp, d, bound)
    bits = np.zeros(bound + 1, dtype=np.uint8)
    args = (gp[0][0], gp[0][1], gp[0][2], gp[1][1], gp[1][2], gp[2][2],
            r[0], r[1], r[2], d, bound, bits)
    t0 = time.perf_counter()
    visited = fill(*args)
    return time.perf_counter() - t0, visited, bits


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--bound", type=int, default=3 * 10**5)
    args = parser.parse_args()

    kernels = [("python-bigint", _fallback.fill_represented_bigint),
               ("python-numpy", _fallback.fill_represented)]
    if _speedups is not None:
        kernels.append(("cython", _speedups.fill_represented))

    print(f"bound = {args.bound}")
    print(f"{'case':24s} {'kernel':14s} {'points':>12s} {'time':>9s} {'Mpts/s':>8s}")
    for name, gram, shift in CASES:
        cs = coset(gram, shift)
        reference = None
        for kname, fill in kernels:
            elapsed, visited, bits = run(fill, cs, args.bound)
            if reference is None:
                reference = bits.tobytes()
            elif bits.tobytes() != reference:
                raise SystemExit(f"kernel {kname} disagrees on {name}")
            rate = visited / elapsed / 1e6
            print(f"{name:24s} {kname:14s} {visited:12d} {elapsed:8.3f}s {rate:8.1f}")
    print("all kernels produced identical membership arrays")


if __name__ == "__main__":
    main()
