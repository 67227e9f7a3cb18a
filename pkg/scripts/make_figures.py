"""Write SVG sublevel plots (with solver trajectories) into a directory."""

import argparse
from pathlib import Path

from starqc.cli import main

FIGURES = {
    "quadratic.svg": ["--fn", "quadratic:2:2", "--delta", "1,4,9"],
    "clover.svg": ["--fn", "clover", "--delta", "2,5,10"],
    "example312.svg": ["--fn", "example312:0.3:2:0", "--delta", "2,5,10"],
    "example312_ppa.svg": ["--fn", "example312:0.3:2:0", "--delta", "5,10", "--method", "ppa",
                           "--set", "clover:10", "--beta", "0.05", "--x0", "1.5,0.3"],
    "quadratic_heavy_ball.svg": ["--fn", "quadratic:2:2", "--delta", "1,4,9", "--method", "heavy_ball",
                                 "--alpha", "0.5", "--beta", "0.2", "--x0", "2.5,-1.5"],
}


def parse_args():
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--out-dir", default="figures")
    return p.parse_args()


if __name__ == "__main__":
    out = Path(parse_args().out_dir)
    out.mkdir(parents=True, exist_ok=True)
    for name, argv in FIGURES.items():
        code = main(["plot", *argv, "--out", str(out / name)])
        print(f"{name}: exit {code}")
