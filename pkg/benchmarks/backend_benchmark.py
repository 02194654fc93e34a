"""Compare the compiled kernel against the pure-numpy fallback.

Times the batched forward pass (the annealer's hot operation) and a full
training-iteration equivalent (forward + cost evaluation) for both
backends across batch sizes.

Run: python benchmarks/backend_benchmark.py
"""

import time

import numpy as np

from lubench import _pycore, costs, metrics
from lubench.network import init_weights

try:
    from lubench import _fastcore
except ImportError:
    _fastcore = None


def time_call(fn, repeats=200):
    fn()  # warm up
    start = time.perf_counter()
    for _ in range(repeats):
        fn()
    return (time.perf_counter() - start) / repeats


def main():
    rng = np.random.default_rng(0)
    hidden = 10
    model = init_weights(5, hidden, seed=0)
    w = np.ascontiguousarray(model.weights)
    spec = costs.CostSpec(kind="cwfdc", alpha=0.10)

    backends = [("python", _pycore)]
    if _fastcore is not None:
        backends.append(("cython", _fastcore))
    else:
        print("compiled extension not built; benchmarking fallback only")

    print(f"{'n':>7} {'backend':>8} {'forward us':>11} {'fwd+cost us':>12}")
    for n in (500, 3500, 20000):
        X = rng.uniform(0.0, 1.0, size=(n, 5))
        t = rng.uniform(-1.0, 1.0, size=n)
        for name, mod in backends:
            fwd = lambda: mod.forward_batch(w, X, hidden, 0)

            def step():
                lo, up = mod.forward_batch(w, X, hidden, 0)
                costs.evaluate(spec, t, (lo, up), 2.0)

            t_fwd = time_call(fwd)
            t_step = time_call(step)
            print(f"{n:>7} {name:>8} {1e6 * t_fwd:>11.1f} {1e6 * t_step:>12.1f}")

    if _fastcore is not None:
        # agreement check between backends
        X = rng.uniform(0.0, 1.0, size=(1000, 5))
        lo_p, up_p = _pycore.forward_batch(w, X, hidden, 0)
        lo_c, up_c = _fastcore.forward_batch(w, X, hidden, 0)
        err = max(np.abs(lo_p - lo_c).max(), np.abs(up_p - up_c).max())
        print(f"max |python - cython| on 1000 samples: {err:.3e}")


if __name__ == "__main__":
    main()
