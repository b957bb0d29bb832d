"""Time the compiled and pure-Python recurrence kernels on the same inputs.

Run from the repository root after installing:

    python benchmarks/bench_kernels.py [--repeat 5]

Each kernel is also timed inside a full phase-shift calculation, which is
where the radial quadrature spends its time.
"""

import argparse
import timeit

import numpy as np

from minlen_scatter import kernels
from minlen_scatter.context import DeformationParams
from minlen_scatter.partial_waves import born_sin_delta
from minlen_scatter.potentials import RadialPotential


def kernel_cases():
    rng = np.random.default_rng(0)
    x_bessel = np.sort(rng.uniform(0.01, 60.0, 15 * 64))
    x_leg = np.cos(np.linspace(0.0, np.pi, 512))
    coef = rng.normal(size=(2, 11))
    return {
        "spherical_jn_table l=8": lambda m: m.spherical_jn_table(8, x_bessel, np.sin(x_bessel), np.cos(x_bessel)),
        "spherical_yn_table l=8": lambda m: m.spherical_yn_table(8, x_bessel, np.sin(x_bessel), np.cos(x_bessel)),
        "legendre_table l=10": lambda m: m.legendre_table(10, x_leg),
        "legendre_series l=10": lambda m: m.legendre_series(coef[0], coef[1], x_leg),
    }


def best_time(func, repeat, number):
    return min(timeit.repeat(func, repeat=repeat, number=number)) / number


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=5)
    parser.add_argument("--number", type=int, default=200)
    args = parser.parse_args(argv)

    found = kernels.backends()
    names = list(found)
    print(f"backends: {', '.join(names)} (active: {kernels.BACKEND})")
    print(f"{'case':<28}" + "".join(f"{n:>14}" for n in names) + (f"{'speedup':>10}" if len(names) > 1 else ""))
    for label, case in kernel_cases().items():
        times = [best_time(lambda m=found[n]: case(m), args.repeat, args.number) for n in names]
        line = f"{label:<28}" + "".join(f"{t * 1e6:>11.1f} us" for t in times)
        if len(times) > 1:
            line += f"{times[0] / times[1]:>9.1f}x"
        print(line)

    # End to end: swap the active backend inside the phase-shift code.
    pot = RadialPotential.yukawa(1.0, 0.5)
    params = DeformationParams(0.0, 0.01)
    saved = {n: getattr(kernels, n) for n in ("spherical_jn_table", "spherical_yn_table")}
    times = []
    for n in names:
        for attr in saved:
            setattr(kernels, attr, getattr(found[n], attr))
        times.append(best_time(lambda: [born_sin_delta(l, 1.0, pot, params) for l in range(9)],
                               args.repeat, 3))
    for attr, fn in saved.items():
        setattr(kernels, attr, fn)
    line = f"{'born phases l=0..8':<28}" + "".join(f"{t * 1e3:>11.2f} ms" for t in times)
    if len(times) > 1:
        line += f"{times[0] / times[1]:>9.1f}x"
    print(line)


if __name__ == "__main__":
    main()
