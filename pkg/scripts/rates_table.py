"""Theoretical vs empirical linear rates over a small grid of solver settings."""

import argparse
import contextlib
import io
import json

from starqc.cli import main

CASES = [
    ("gradient", ["--alpha", "0", "--beta", "0.4"]),
    ("heavy_ball", ["--alpha", "0.2", "--beta", "0.35"]),
    ("heavy_ball", ["--alpha", "0.5", "--beta", "0.2"]),
    ("nesterov", ["--alpha", "auto", "--beta", "0.2", "--eta", "1.5", "--epsilon", "0.1"]),
    ("ppa", ["--beta", "0.5"]),
    ("ppa", ["--beta", "2"]),
]


def parse_args():
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--fn", default="quadratic:2:1")
    p.add_argument("--x0", default="3")
    p.add_argument("--max-iter", default="200")
    return p.parse_args()


if __name__ == "__main__":
    args = parse_args()
    print(f"{'method':<11} {'settings':<44} {'theory':>9} {'empirical':>10} {'ok':>4}")
    for method, extra in CASES:
        buf = io.StringIO()
        with contextlib.redirect_stdout(buf):
            code = main(["rates", "--fn", args.fn, "--method", method, "--x0", args.x0,
                         "--max-iter", args.max_iter, *extra])
        if code == 2:
            print(f"{method:<11} {' '.join(extra):<44} config error")
            continue
        rep = json.loads(buf.getvalue())
        print(f"{method:<11} {' '.join(extra):<44} {rep['theoretical_rate']:>9.4f} "
              f"{rep['empirical_rate']:>10.4f} {str(rep['passed']):>4}")
