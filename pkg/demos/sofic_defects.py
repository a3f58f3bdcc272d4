"""How close are finite permutation models to honest group actions?

Rotation and torus models are exact inside their period.  The random model
for a free group assigns an independent uniform permutation to each
generator; multiplicativity is then exact by freeness, and the only defect is
near-collisions between distinct word images, which scale like 1/d.
"""

import numpy as np

from soficpressure import (
    FreeGroup,
    IntegerLattice,
    IntegerLine,
    cyclic_approximation,
    defect_report,
    random_approximation,
    torus_approximation,
)
from soficpressure.sofic import parse_sofic_map, serialize_sofic_map


def main():
    Z = IntegerLine()
    sigma = cyclic_approximation(Z, 50, 5)
    rep = defect_report(sigma, Z.ball(5))
    print(f"rotation model d=50, ball(5): max defect {rep.max_defect()}")

    L = IntegerLattice(2)
    rep = defect_report(torus_approximation(L, 7, 2), L.ball(2))
    print(f"torus model 7x7, ball(2):    max defect {rep.max_defect()}\n")

    F2 = FreeGroup(2)
    ball2 = F2.ball(2)
    print("random free-group model, ball(2), growing d:")
    print(f"{'d':>6} {'mult':>8} {'freeness':>10}")
    for d in (100, 400, 1600, 6400):
        rep = defect_report(random_approximation(F2, d, 2, seed=1), ball2)
        print(f"{d:>6} {rep.multiplicativity_defect:>8.4f} "
              f"{rep.freeness_defect:>10.4f}")

    print("\nfreeness defect across seeds at d=1000:")
    worst = [defect_report(random_approximation(F2, 1000, 2, seed=s),
                           ball2).freeness_defect for s in range(20)]
    print(f"  min {min(worst):.4f}  max {max(worst):.4f}  "
          f"mean {np.mean(worst):.4f}")

    sigma = random_approximation(F2, 8, 1, seed=3)
    text = serialize_sofic_map(sigma)
    print("\nserialized 8-point model:\n" + text)
    assert serialize_sofic_map(parse_sofic_map(F2, text)) == text
    print("round-trip: byte-identical")


if __name__ == "__main__":
    main()
