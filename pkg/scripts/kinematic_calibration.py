"""Knife-edge calibration curve and retrieval error across the calibrated range."""

import argparse

import numpy as np

from cvcorr.polarimetry import KinematicSensor


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--points", type=int, default=13)
    args = ap.parse_args()
    sensor = KinematicSensor()
    print(f"{'x0':>7} {'S0':>9} {'S1':>9} {'x0_hat':>9} {'error':>9}")
    for x0 in np.linspace(-2.5, 2.5, args.points):
        s, est = sensor.sense(float(x0))
        print(f"{x0:7.3f} {s.s0:9.5f} {s.s1:9.5f} {est:9.5f} {est - x0:9.1e}")


if __name__ == "__main__":
    main()
