"""Compare the compiled kernels with the pure-Python fallback.

    python3 benchmarks/bench_kernels.py [--repeat N]

Times (1) tracking every path of the total-degree homotopy for a generic
spectrum of degree d, and (2) enumerating the zero-sum subsets of a random
integer vector of length n.  Both backends are fed identical inputs and the
results are checked to agree before any timing is reported.
"""

import argparse
import random
import sys
import time

import numpy as np

from polyfiber import _pykernels
from polyfiber.oracle.homotopy import _float_residues, _start_points
from polyfiber.sampling import random_generic_residues

try:
    from polyfiber import _ckernels
except ImportError:
    _ckernels = None


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t = time.perf_counter()
        out = fn()
        times.append(time.perf_counter() - t)
    return min(times), out


def tracking_case(d, seed):
    m = random_generic_residues(d, random.Random(seed))
    mf = list(_float_residues(m)[: d - 1])
    rng = np.random.default_rng(seed)
    gamma = complex(*rng.normal(size=2))
    gamma /= abs(gamma)
    patch = [complex(*v) for v in rng.normal(size=(d - 1, 2))]
    starts = list(_start_points(d - 1, patch))

    def run(mod):
        return lambda: [mod.track_path(mf, patch, gamma, s) for s in starts]

    return len(starts), run


def subset_case(n, seed):
    rng = random.Random(seed)
    re = [rng.randint(-6, 6) or 1 for _ in range(n)]
    re[-1] = -sum(re[:-1]) or 1
    im = [0] * n

    def run(mod):
        return lambda: mod.zero_sum_masks(re, im)

    return run


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--seed", type=int, default=1)
    args = ap.parse_args(argv)
    if _ckernels is None:
        print("compiled extension not built; run `pip install --no-build-isolation -e .`")
        return 1
    print(f"{'kernel':<28}{'python [s]':>12}{'cython [s]':>12}{'speed-up':>10}")
    for d in (5, 6, 7):
        paths, run = tracking_case(d, args.seed)
        tp, out_p = best_of(run(_pykernels), args.repeat)
        tc, out_c = best_of(run(_ckernels), args.repeat)
        worst = max(max(abs(a - b) for a, b in zip(p[0], c[0])) for p, c in zip(out_p, out_c))
        assert [p[2] for p in out_p] == [c[2] for c in out_c] and worst < 1e-8, "backends disagree"
        print(f"{f'track {paths} paths (d={d})':<28}{tp:>12.4f}{tc:>12.4f}{tp / tc:>9.1f}x")
    for n in (14, 17, 20):
        run = subset_case(n, args.seed)
        tp, out_p = best_of(run(_pykernels), args.repeat)
        tc, out_c = best_of(run(_ckernels), args.repeat)
        assert list(out_p) == list(out_c), "backends disagree"
        print(f"{f'zero-sum subsets (n={n})':<28}{tp:>12.4f}{tc:>12.4f}{tp / tc:>9.1f}x")
    return 0


if __name__ == "__main__":
    sys.exit(main())
