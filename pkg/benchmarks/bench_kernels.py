"""Compare the compiled kernels against the numpy fallback.

    python benchmarks/bench_kernels.py [--repeat N]
"""

import argparse
import timeit

import numpy as np

from eadsim import _fallback, kernels
from eadsim.linalg import DensityMatrix
from eadsim.ree import ree_numeric
from eadsim.states import evolved_ab


def _random_hermitian(rng, dim):
    g = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    return g + g.conj().T


def _cases(rng):
    rho = evolved_ab(0.6).matrix.copy()
    w = np.linalg.eigvalsh(rho)
    w = w[w > 0]
    entropy = float(np.sum(w * np.log(w)))
    x = rng.normal(size=80)
    h4, h8 = _random_hermitian(rng, 4), _random_hermitian(rng, 8)
    state = DensityMatrix(rho, ("A", "B"))
    return {
        "jacobi_eigh 4x4": lambda k: k.jacobi_eigh(h4),
        "jacobi_eigh 8x8": lambda k: k.jacobi_eigh(h8),
        "separable_objective k=16": lambda k: k.separable_objective(x, rho, entropy, 1e-10),
        "ree_numeric (8 restarts)": lambda k: ree_numeric(state, kernels=k),
    }


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=5)
    args = parser.parse_args(argv)
    if kernels.compiled is None:
        parser.exit(1, "compiled extension not available; build with `pip install -e .`\n")

    backends = {"compiled": kernels.compiled, "python": _fallback}
    print(f"{'case':<28}{'compiled':>14}{'python':>14}{'speedup':>10}")
    for name, fn in _cases(np.random.default_rng(0)).items():
        times = {}
        for label, mod in backends.items():
            timer = timeit.Timer(lambda: fn(mod))
            number, _ = timer.autorange()
            times[label] = min(timer.repeat(args.repeat, number)) / number
        print(f"{name:<28}{times['compiled'] * 1e6:>12.1f}us{times['python'] * 1e6:>12.1f}us"
              f"{times['python'] / times['compiled']:>9.1f}x")


if __name__ == "__main__":
    main()
