"""Compare the compiled and numpy kernel backends.

    python benchmarks/bench_kernels.py [--sizes 256 512 1024 2048] [--repeat 5]

Prints the best-of-``repeat`` time for K* assembly, the Hausdorff kernel and
a full order-6 GPT computation, and the largest difference between backends.
"""

import argparse
import time

import numpy as np

from gptshape import conformal, kernels, potential, tensors


def best(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        times.append(time.perf_counter() - t0)
    return min(times), out


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sizes", type=int, nargs="+", default=[256, 512, 1024, 2048])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--shape", default="straight", choices=conformal.CATALOG_NAMES)
    args = ap.parse_args()
    backends = kernels.available()
    if "compiled" not in backends:
        print("compiled extension not built; only the python backend is available")
    print(f"{'n':>6} {'task':>10} " + " ".join(f"{b:>10}" for b in backends) + f" {'speedup':>8} {'max diff':>9}")
    for n in args.sizes:
        frame = conformal.boundary_frame(conformal.catalog(args.shape), n)
        tasks = {
            "kstar": lambda: potential.assemble(frame).kstar,
            "hausdorff": lambda: kernels.directed_max_min(frame.points, 1.01 * frame.points),
            "gpt": lambda: tensors.gpt_forward(frame, 0.75, 6).N2,
        }
        for task, fn in tasks.items():
            times, outs = [], []
            for b in backends:
                kernels.use(b)
                t, out = best(fn, args.repeat)
                times.append(t)
                outs.append(np.asarray(out))
            speed = times[0] / times[-1]
            diff = float(np.max(np.abs(outs[0] - outs[-1])))
            cols = " ".join(f"{t * 1e3:>8.2f}ms" for t in times)
            print(f"{n:>6} {task:>10} {cols} {speed:>7.1f}x {diff:>9.1e}")


if __name__ == "__main__":
    main()
