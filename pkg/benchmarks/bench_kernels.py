"""Time the compiled kernels against their pure-Python twins.

    python3 benchmarks/bench_kernels.py [--steps N] [--repeat R]

Both backends run on the same noise realization; the script also confirms the
outputs are bit-identical before reporting timings.
"""

import argparse
import math
import timeit

import numpy as np

from jumplab import kernels
from jumplab.model import builtin
from jumplab.noise import LevyMeasure, TimeGrid, realize


def cases(steps):
    m = LevyMeasure("stable_positive", 0.1, 10.0, 1.5)
    specs = {
        "gbm": builtin("gbm", mu=0.05, vol=0.3),
        "spectrally_positive": builtin("spectrally_positive", measure=m, g="clamp:1", vol=0.5),
        "sqrt_jump": builtin("sqrt_jump", measure=m, g="clamp:1"),
    }
    for name, spec in specs.items():
        nz = realize(TimeGrid.uniform(1.0, 1.0 / steps), spec.measure, 0)
        yield name, spec, nz


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--steps", type=int, default=10_000)
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args(argv)
    backends = kernels.backends()
    if "compiled" not in backends:
        print("compiled extension not built; only the Python backend is available")
    print(f"{'kernel':<40}{'backend':<10}{'best of ' + str(args.repeat):>14}")
    for name, spec, nz in cases(args.steps):
        dt, dw, is_atom, z = nz.increments()
        form = spec.native
        call = (form.kinds, form.param_array, 0.3, dt, dw, is_atom, z, 1e6, math.inf)
        outputs = {}
        for bname, mod in backends.items():
            outputs[bname] = mod.euler_native(*call)
            number = 1 if bname == "python" else 20
            t = min(timeit.repeat(lambda: mod.euler_native(*call), number=number, repeat=args.repeat)) / number
            print(f"{'euler_native/' + name:<40}{bname:<10}{t * 1e3:>12.3f} ms")
        if len(outputs) == 2:
            a, b = outputs.values()
            assert all(np.asarray(x).tobytes() == np.asarray(y).tobytes() for x, y in zip(a[:3], b[:3]))
        values, pre, delta, _ = outputs["python"]
        atom = np.zeros(values.size, dtype=np.uint8)
        atom[1:] = is_atom[: values.size - 1]
        for bname, mod in backends.items():
            number = 5 if bname == "python" else 50
            t = min(timeit.repeat(lambda: mod.tanaka_terms(values, pre, delta, atom, 0.3), number=number,
                                  repeat=args.repeat)) / number
            print(f"{'tanaka_terms/' + name:<40}{bname:<10}{t * 1e3:>12.3f} ms")


if __name__ == "__main__":
    main()
