"""PPA on the example312 function constrained to the clover sublevel set."""

import argparse

import numpy as np

from starqc.analysis import estimate_modulus
from starqc.func_zoo import make_example312
from starqc.sampling import plan_for
from starqc.sets import clover_set
from starqc.solvers import SolverConfig, ppa


def parse_args():
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--x0", default="1.5,0.3")
    p.add_argument("--betas", default="0.01,0.05,0.1,1")
    return p.parse_args()


if __name__ == "__main__":
    args = parse_args()
    f = make_example312(0.3, 2, args.seed)
    K = clover_set(10.0)
    g = estimate_modulus(f, plan_for(f, args.seed, 10_000))
    x0 = np.array([float(v) for v in args.x0.split(",")])
    print(f"gamma_hat = {g:.6f}")
    for beta in (float(b) for b in args.betas.split(",")):
        tr = ppa(f, K, x0, SolverConfig("ppa", beta=beta, max_iter=500))
        d2 = tr.dist_to_min**2
        ratio = np.max(d2[1:] / d2[:-1]) if len(d2) > 1 and d2[0] > 0 else float("nan")
        print(f"beta={beta:<5g} iterations={len(tr) - 1:<4d} final dist={tr.dist_to_min[-1]:.2e} "
              f"worst ratio={ratio:.4f} bound 1/(1+beta*gamma_hat)={1 / (1 + beta * g):.4f}")
