"""Benchmark the compiled integration core against the pure-Python fallback.

Usage: python benchmarks/bench_integrator.py [--steps N]
"""

import argparse
import time

import numpy as np

import twobody.coefficients as cf
import twobody.dynamics as dyn
from twobody.algebra import build_adapted_basis, realize_algebra
from twobody.spaces import Family, make_space

CASES = {
    "S2": (Family.SPHERE, 2, 1.0, dict(m1=1.0, m2=1.5, alpha=0.45),
           (1.0, 0.2, (0.4, 0.3, 0.2))),
    "CP2": (Family.COMPLEX_PROJECTIVE, 2, 1.0, dict(m1=1.0, m2=2.0, alpha=0.55),
            (0.8, 0.1, (0.3, 0.2, 0.1, 0.15, 0.05, 0.2, 0.1, 0.12))),
}


def run(steps: int):
    print(f"{'case':<6s} {'backend':<10s} {'steps/s':>12s} {'elapsed':>9s}")
    for name, (fam, n, R, pd, (r, pr, mu)) in CASES.items():
        space = make_space(fam, n, R)
        basis = build_adapted_basis(space, realize_algebra(space))
        params = cf.TwoBodyParams(**pd)
        state = dyn.PhaseState(r=r, p_r=pr, mu=np.array(mu))
        timings = {}
        backends = ["python"] + (["compiled"] if dyn.HAVE_COMPILED else [])
        for backend in backends:
            t0 = time.perf_counter()
            traj = dyn.integrate(space, basis, params, state, 1e-3,
                                 steps * 1e-3, sample_every=100,
                                 backend=backend)
            el = time.perf_counter() - t0
            timings[backend] = el
            print(f"{name:<6s} {backend:<10s} {steps / el:12.0f} {el:8.3f}s"
                  f"   (energy drift {traj.energy_drift():.1e})")
        if "compiled" in timings:
            print(f"{name:<6s} speedup   {timings['python'] / timings['compiled']:10.1f}x")
    if not dyn.HAVE_COMPILED:
        print("compiled core not built; showing fallback only")


if __name__ == "__main__":
    ap = argparse.ArgumentParser()
    ap.add_argument("--steps", type=int, default=20000)
    run(ap.parse_args().steps)
