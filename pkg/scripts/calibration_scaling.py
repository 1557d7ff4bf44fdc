"""Median Frobenius error of the calibration estimate against the shot count.

    python3 scripts/calibration_scaling.py [--transformation rx] [--seeds 10]

Prints one row per shot count; the error should fall roughly like 1/sqrt(N).
"""

import argparse

import numpy as np

from optheory import calibration, models


def cli():
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--model", default="qubit")
    p.add_argument("--transformation", default="rx")
    p.add_argument("--seeds", type=int, default=10)
    p.add_argument("--fiducials", choices=("pauli", "tetrahedral"), default="pauli")
    args = p.parse_args()
    th = models.build_model(args.model)
    R = th.transformation(args.transformation)
    f = None
    if args.fiducials == "tetrahedral":
        f = models.tetrahedral_fiducials()
    print(f"{'shots':>9}  {'median':>9}  {'max':>9}  median*sqrt(N)")
    for shots in (10**3, 10**4, 10**5, 10**6):
        errs = [calibration.calibrate(th, R, shots, seed, f, f).errors["frobenius"] for seed in range(args.seeds)]
        med = float(np.median(errs))
        print(f"{shots:>9}  {med:9.5f}  {max(errs):9.5f}  {med * np.sqrt(shots):.3f}")


if __name__ == "__main__":
    cli()
