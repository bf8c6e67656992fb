"""Benchmark the compiled trajectory kernel against the NumPy fallback.

Runs the same seeded ensemble on every available backend, checks that the
outputs are bit-identical, and reports throughput.

    python benchmarks/bench_backends.py --trials 20000 --steps 100 --q 0.25
"""

import argparse
import time

import numpy as np

from binqwalk import _kernels
from binqwalk.decoherence import DecoherenceConfig, run_ensemble


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--p", type=float, default=0.5)
    parser.add_argument("--q", type=float, default=0.25)
    parser.add_argument("--steps", type=int, default=100)
    parser.add_argument("--trials", type=int, default=20_000)
    parser.add_argument("--seed", type=int, default=42)
    parser.add_argument("--workers", type=int, default=1)
    parser.add_argument("--repeat", type=int, default=3)
    args = parser.parse_args()

    config = DecoherenceConfig(
        p=args.p, q=args.q, t_max=args.steps, trials=args.trials,
        master_seed=args.seed,
    )
    backends = ["python"] + (["cython"] if _kernels.HAVE_EXTENSION else [])
    print(
        f"config: p={args.p} q={args.q} t_max={args.steps} "
        f"trials={args.trials} seed={args.seed} workers={args.workers}"
    )
    if not _kernels.HAVE_EXTENSION:
        print("note: compiled kernel not built, benchmarking the fallback only")

    timings = {}
    outputs = {}
    for name in backends:
        best = float("inf")
        for _ in range(args.repeat):
            start = time.perf_counter()
            result = run_ensemble(config, workers=args.workers, backend=name)
            best = min(best, time.perf_counter() - start)
        timings[name] = best
        outputs[name] = result.empirical_pmf.mass
        print(
            f"{name:>7}: {best:8.3f} s  "
            f"({args.trials / best:10.0f} trajectories/s)  "
            f"mean={result.mean:+.4f} var={result.variance:.3f}"
        )

    if len(backends) == 2:
        identical = np.array_equal(outputs["python"], outputs["cython"])
        print(f"outputs bit-identical: {identical}")
        print(f"speedup: {timings['python'] / timings['cython']:.1f}x")
        if not identical:
            return 1
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
