#!/usr/bin/env python3
"""Reference values of the free two-body Hamiltonian on the Case 7 section.

The phase point is built from the explicit double-angle section formula and
H = |p1|^2/2 + |p2|^2/2 is evaluated in 40-digit arithmetic. Nothing from the
C++ library is used. Rerun with

    python3 gen_case7_free.py > case7_free.inc
"""
import random

import mpmath as mp

mp.mp.dps = 40


def section(nu, r, mu, lam, u03):
    c2, s2 = mp.cos(2 * nu), mp.sin(2 * nu)
    h = r / 2
    q1 = ((lam - 1) * h + (lam - 1) * h * c2 - mu * h * s2,
          (lam - 1) * h * s2 - mu * h + mu * h * c2,
          0 * u03)
    q2 = (lam * h + lam * h * c2 - mu * h * s2,
          lam * h * s2 - mu * h + mu * h * c2,
          mu * u03)
    p1 = (h * s2, h - h * c2, lam * u03)
    p2 = (-h * s2, -h + h * c2, (1 - lam) * u03)
    return q1, q2, p1, p2


def free_h(p1, p2):
    return (sum(x * x for x in p1) + sum(x * x for x in p2)) / 2


def main():
    rng = random.Random(7)
    print("// Generated by gen_case7_free.py; columns: nu, r, mu, lambda, u03, H.")
    print("// clang-format off")
    for _ in range(1000):
        row = [rng.uniform(0.01, 3.13), rng.uniform(0.1, 3.0), rng.uniform(-3.0, 3.0),
               rng.uniform(-2.0, 2.0), rng.uniform(0.2, 3.0)]
        nu, r, mu, lam, u03 = (mp.mpf(x) for x in row)
        _, _, p1, p2 = section(nu, r, mu, lam, u03)
        h = free_h(p1, p2)
        print("{" + ", ".join(repr(x) for x in row) + ", " + mp.nstr(h, 20) + "},")
    print("// clang-format on")


if __name__ == "__main__":
    main()
