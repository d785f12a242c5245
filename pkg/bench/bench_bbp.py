"""Time the compiled and pure-Python BBP kernels side by side.

    python bench/bench_bbp.py [--positions 1000 100000 1000000] [--repeat 3]

Reports the head-sum kernel alone and a full 24-digit extraction at each
position, with the speedup of the compiled kernel.
"""

import argparse
import time

from pifrac import _bbp_py, bbp

try:
    from pifrac import _bbp_core
except ImportError:
    _bbp_core = None


def best_time(fn, repeat):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def extract_with(kernel, position):
    saved = bbp._kernel
    bbp._kernel = kernel
    try:
        return bbp.hex_digits_at(position, 24).digits
    finally:
        bbp._kernel = saved


def main():
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--positions", type=int, nargs="+", default=[1_000, 100_000, 1_000_000])
    p.add_argument("--repeat", type=int, default=3)
    args = p.parse_args()

    kernels = [("python", _bbp_py)]
    if _bbp_core is None:
        print("compiled kernel not built; timing the pure-Python kernel only")
    else:
        kernels.insert(0, ("cython", _bbp_core))

    print(f"{'position':>10} {'what':>8} " + " ".join(f"{name:>10}" for name, _ in kernels) + "   speedup")
    for pos in args.positions:
        d = pos - 1
        rows = {
            "head": [best_time(lambda k=k: k.head_sum(d, 1, 192), args.repeat) for _, k in kernels],
            "digits": [best_time(lambda k=k: extract_with(k, pos), args.repeat) for _, k in kernels],
        }
        if len(kernels) == 2:
            assert extract_with(_bbp_core, pos) == extract_with(_bbp_py, pos)
        for what, times in rows.items():
            speed = f"{times[-1] / times[0]:9.1f}x" if len(times) == 2 else ""
            print(f"{pos:>10} {what:>8} " + " ".join(f"{t:9.4f}s" for t in times) + "  " + speed)


if __name__ == "__main__":
    main()
