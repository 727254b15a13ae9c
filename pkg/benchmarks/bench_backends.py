"""Compare the compiled and pure-numpy oracle kernels.

Usage: python benchmarks/bench_backends.py [--vocab V] [--calls N]

Times mix64, prefix_fold and raw_logits in both backends and checks that
their outputs agree bit-for-bit on the benchmarked inputs.
"""

import argparse
import time

import numpy as np

from entropix import _kernels_py as kpy

try:
    from entropix import _kernels_c as kc
except ImportError:
    kc = None


def bench(label, fn, n):
    start = time.perf_counter()
    for _ in range(n):
        fn()
    per = (time.perf_counter() - start) / n * 1e6
    print(f"  {label:<10s} {per:8.2f} us/call")
    return per


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--vocab", type=int, default=1024)
    ap.add_argument("--calls", type=int, default=2000)
    args = ap.parse_args()

    if kc is None:
        print("compiled backend not built; run pip install -e . first")
        return

    rng = np.random.default_rng(0)
    xs = rng.integers(0, 1 << 64, size=256, dtype=np.uint64)
    toks = rng.integers(0, 1024, size=512, dtype=np.uint64)
    idxs = rng.integers(0, 4096, size=512, dtype=np.uint64)
    pk = int(xs[0])
    ctx = int(xs[1])

    # correctness first: bit-identical outputs on the benchmark inputs
    assert all(kpy.mix64(int(x)) == kc.mix64(int(x)) for x in xs)
    assert kpy.prefix_fold(toks, idxs) == kc.prefix_fold(toks, idxs)
    np.testing.assert_array_equal(
        kpy.raw_logits(pk, ctx, 0.7, args.vocab, 3, 21.0),
        kc.raw_logits(pk, ctx, 0.7, args.vocab, 3, 21.0))
    print("backends agree bit-for-bit\n")

    results = {}
    print("mix64 (256 scalar calls per op):")
    results["mix64"] = (
        bench("python", lambda: [kpy.mix64(int(x)) for x in xs], args.calls // 4),
        bench("cython", lambda: [kc.mix64(int(x)) for x in xs], args.calls // 4))
    print("prefix_fold (512 pairs):")
    results["fold"] = (
        bench("python", lambda: kpy.prefix_fold(toks, idxs), args.calls),
        bench("cython", lambda: kc.prefix_fold(toks, idxs), args.calls))
    print(f"raw_logits (V={args.vocab}):")
    results["logits"] = (
        bench("python", lambda: kpy.raw_logits(pk, ctx, 0.7, args.vocab, 3, 21.0),
              args.calls),
        bench("cython", lambda: kc.raw_logits(pk, ctx, 0.7, args.vocab, 3, 21.0),
              args.calls))

    print()
    for name, (py, cy) in results.items():
        print(f"{name}: compiled is {py / cy:.2f}x the pure-python speed")


if __name__ == "__main__":
    main()
