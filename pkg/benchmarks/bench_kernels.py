"""Compare the compiled and numpy jet kernels.

Two measurements per order: one kernel evaluation on a random jet, and a full
order-k monodromy of the FRW field around the upper hexagon.  Both backends
must agree to round-off before timings are reported.

    python benchmarks/bench_kernels.py [--orders 1 3 5] [--repeat 200]
"""
from __future__ import annotations

import argparse
import time

import numpy as np

from varjet import kernels
from varjet.cpath import hexagon_path
from varjet.frwmodel import FrwParams, frw_field, mu, sol1
from varjet.jetflow import integrate_jet


def _best(fn, repeat: int) -> float:
    best = float("inf")
    for _ in range(3):
        t0 = time.perf_counter()
        for _ in range(repeat):
            fn()
        best = min(best, (time.perf_counter() - t0) / repeat)
    return best


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--orders", type=int, nargs="+", default=[1, 3, 5])
    ap.add_argument("--repeat", type=int, default=200)
    ap.add_argument("--p", type=int, default=3)
    args = ap.parse_args(argv)
    if not kernels.compiled_available():
        print("compiled kernel not built; run `pip install -e . --no-build-isolation` first")
        return 1
    P = FrwParams(1, mu(args.p), mu(args.p))
    X = frw_field(P)
    sol = sol1(P.L)
    loop = hexagon_path(1)
    rng = np.random.default_rng(0)
    print(f"{'order':>5} {'jet size':>8} {'eval cy [us]':>13} {'eval py [us]':>13} {'x':>6} "
          f"{'loop cy [s]':>11} {'loop py [s]':>11} {'x':>6} {'max diff':>9}")
    for k in args.orders:
        M = kernels.jet_layout(4, k).size
        state = rng.normal(size=(4, M)) + 1j * rng.normal(size=(4, M))
        outs = {}
        ev = {}
        for be in ("cython", "python"):
            kern = X.kernel(k, be)
            out = np.empty((4, M), dtype=complex)
            ev[be] = _best(lambda: kern(state, 0.5, out), args.repeat)
            outs[be] = out.copy()
        loop_t, jets = {}, {}
        for be in ("cython", "python"):
            t0 = time.perf_counter()
            jets[be] = integrate_jet(X, sol.ivp, loop, k, backend=be)
            loop_t[be] = time.perf_counter() - t0
        diff = max(
            float(np.max(np.abs(outs["cython"] - outs["python"]))),
            max(float(np.max(np.abs(a.entries - b.entries))) for a, b in zip(jets["cython"].blocks, jets["python"].blocks)),
        )
        print(f"{k:>5} {M:>8} {ev['cython'] * 1e6:>13.2f} {ev['python'] * 1e6:>13.2f} "
              f"{ev['python'] / ev['cython']:>6.1f} {loop_t['cython']:>11.3f} {loop_t['python']:>11.3f} "
              f"{loop_t['python'] / loop_t['cython']:>6.1f} {diff:>9.1e}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
