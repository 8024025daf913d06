"""Time the compiled and numpy kernel backends on a 512x512 cover.

    python3 benchmarks/bench_kernels.py [--repeat 5]
"""

import argparse
import timeit

import numpy as np

from wavemark import kernels
from wavemark.attacks import median_filter
from wavemark.codec import Watermark, embed
from wavemark.complexity import _gradient_bins, canny


def _image():
    try:
        from wavemark.covers import load_cover

        return load_cover("camera")
    except RuntimeError:
        rng = np.random.default_rng(0)
        return np.clip(rng.normal(128, 40, (512, 512)), 0, 255).astype(np.uint8)


def _cases(img):
    x = img.astype(np.float64)
    gx, gy = np.gradient(x)
    mag, bins = np.hypot(gx, gy), _gradient_bins(gx, gy)
    strong, weak = mag > np.percentile(mag, 90), mag > np.percentile(mag, 70)
    wm = Watermark.random(128, 0)
    return {
        "block_analysis": lambda k: k.block_analysis(x),
        "nms": lambda k: k.nms(mag, bins),
        "hysteresis": lambda k: k.hysteresis(strong, weak),
        "median 3x3": lambda k: median_filter(img, 3, backend=k),
        "median 5x5": lambda k: median_filter(img, 5, backend=k),
        "canny": lambda k: canny(img, backend=k),
        "embed (calibrated)": lambda k: embed(img, wm),
    }


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    img = _image()
    backends = kernels.available_backends()
    if "cython" not in backends:
        print("compiled extension not built; timing the numpy fallback only")
    names = sorted(backends, reverse=True)
    print(f"{'kernel':<20}" + "".join(f"{n + ' ms':>14}" for n in names) + f"{'speedup':>10}")
    for label, fn in _cases(img).items():
        times = {}
        for name in names:
            mod = backends[name]
            kernels.backend = mod  # embed resolves the backend at call time
            times[name] = min(timeit.repeat(lambda: fn(mod), number=1, repeat=args.repeat)) * 1e3
        speed = f"{times['python'] / times['cython']:>9.1f}x" if len(names) == 2 else ""
        print(f"{label:<20}" + "".join(f"{times[n]:>14.2f}" for n in names) + speed)


if __name__ == "__main__":
    main()
