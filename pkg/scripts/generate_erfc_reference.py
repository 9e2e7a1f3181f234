#!/usr/bin/env python3
"""Generate the frozen high-precision erfc reference set used by the tests.

Writes tests/data/erfc_reference.csv: 1000 complex points with 40-digit
mpmath values, stratified over |z| <= 10 with extra density on the real and
imaginary axes and around the series/rational crossover ring |z| = 2.
Rerunning reproduces the file byte-for-byte (fixed seed).
"""

import csv
import pathlib

import mpmath as mp
import numpy as np

mp.mp.dps = 40

OUT = pathlib.Path(__file__).resolve().parent.parent / "tests" / "data" / "erfc_reference.csv"


def sample_points() -> list[complex]:
    rng = np.random.default_rng(20260810)
    pts: list[complex] = []
    # bulk: uniform in angle, stratified in radius
    for radius_lo, radius_hi, count in [
        (1e-3, 1.0, 150), (1.0, 2.5, 200), (2.5, 5.0, 200), (5.0, 10.0, 150),
    ]:
        r = rng.uniform(radius_lo, radius_hi, count)
        th = rng.uniform(0.0, 2.0 * np.pi, count)
        pts.extend(r * np.exp(1j * th))
    # crossover ring
    th = rng.uniform(0.0, 2.0 * np.pi, 120)
    r = rng.uniform(1.85, 2.15, 120)
    pts.extend(r * np.exp(1j * th))
    # axes
    pts.extend(np.linspace(-9.5, 9.5, 90) + 0.0j)
    pts.extend(1j * np.linspace(-9.5, 9.5, 80))
    # small-argument corner
    pts.extend(
        rng.uniform(-0.1, 0.1, 10) + 1j * rng.uniform(-0.1, 0.1, 10)
    )
    return [complex(p) for p in pts[:1000]]


def main():
    points = sample_points()
    assert len(points) == 1000
    OUT.parent.mkdir(parents=True, exist_ok=True)
    with OUT.open("w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["z_re", "z_im", "erfc_re", "erfc_im"])
        for z in points:
            val = mp.erfc(mp.mpc(z.real, z.imag))
            writer.writerow([
                repr(z.real), repr(z.imag),
                mp.nstr(val.real, 25), mp.nstr(val.imag, 25),
            ])
    print(f"wrote {OUT} ({len(points)} points)")


if __name__ == "__main__":
    main()
