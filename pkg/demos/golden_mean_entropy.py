"""Entropy of the golden-mean shift from four angles.

The subshift forbids adjacent ones.  Its entropy is the log of the golden
ratio: enumeration of admissible labelings under a rotation model, the trace
of powers of the adjacency transfer matrix, the Perron eigenvalue, and the
classical pattern-count curve along intervals all converge on it.
"""

import math

from soficpressure import (
    CoordinateMetric,
    IntegerLine,
    MapSpaceQuery,
    Observable,
    amenable_pressure,
    cyclic_approximation,
    evaluate_cell,
    golden_mean_shift,
    transfer_cell,
)

Z = IntegerLine()
LOG_PHI = math.log((1 + math.sqrt(5)) / 2)


def main():
    X = golden_mean_shift(Z)
    f0 = Observable.single_site(Z, [0.0, 0.0])
    print(f"log golden ratio: {LOG_PHI:.12f}\n")

    print("admissible-labeling counts (cyclic strings, no adjacent ones):")
    print(f"{'d':>4} {'enumerated':>12} {'trace':>12} {'(1/d) log':>14}")
    for d in (8, 12, 16, 20):
        sigma = cyclic_approximation(Z, d, 2)
        query = MapSpaceQuery(F=Z.ball(1), delta=0.5, eps=0.5, sigma=sigma,
                              metric=CoordinateMetric(), sft_tolerance=0.0)
        est = evaluate_cell(query, X, f0)
        oracle = transfer_cell(X, f0, d, 1, 0.5, 0.5)
        print(f"{d:>4} {est.map_size:>12} {oracle.map_size:>12} "
              f"{est.normalized:>14.10f}")

    print("\ntrace oracle far beyond enumeration:")
    for d in (64, 256, 1024):
        oracle = transfer_cell(X, f0, d, 1, 0.5, 0.5)
        print(f"{d:>5} normalized {oracle.normalized:.12f} "
              f"(error {abs(oracle.normalized - LOG_PHI):.2e})")

    result = amenable_pressure(X, f0, 16)
    print(f"\nspectral value: {result.exact:.12f}")
    print("classical interval curve (1/n) log K_n:")
    for n, value in result.curve[3::4]:
        print(f"  n={n:>3}  {value:.8f}  (error {abs(value - LOG_PHI):.1e})")


if __name__ == "__main__":
    main()
