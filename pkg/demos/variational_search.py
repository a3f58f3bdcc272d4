"""The variational inequality in action: entropy plus integral never beats
the pressure, and searching the right family closes the gap.

On a full shift the optimal product measure is the normalized exponential of
the potential's coefficients.  On the golden-mean shift product measures are
nearly useless (only the point mass at 0 lives on it), while one-step Markov
chains contain the equilibrium state and drive the gap to zero.
"""

import math

import numpy as np

from soficpressure import (
    IntegerLine,
    MarkovMeasure,
    Observable,
    full_shift,
    gibbs_measure,
    golden_mean_shift,
    transfer_cell,
    variational_gap,
    variational_objective,
    variational_search,
)

Z = IntegerLine()


def main():
    rng = np.random.default_rng(42)

    a = [0.4, -0.2, 0.1]
    X = full_shift(Z, len(a))
    f = Observable.single_site(Z, a)
    pressure = math.log(sum(math.exp(x) for x in a))
    best, value = variational_search(X, f, "product", 100)
    print("full shift, three symbols:")
    print(f"  pressure            {pressure:.12f}")
    print(f"  best product value  {value:.12f}")
    print(f"  best p              {np.round(best.p, 8)}")
    print(f"  softmax reference   {np.round(gibbs_measure(a).p, 8)}\n")

    gm = golden_mean_shift(Z)
    fb = Observable.single_site(Z, [0.0, 0.35])
    p64 = transfer_cell(gm, fb, 64, 1, 0.5, 0.5).normalized
    print("golden-mean shift, weighted ones:")
    print(f"  pressure (d=64 trace)  {p64:.12f}")

    best_prod, v_prod = variational_search(gm, fb, "product", 100)
    print(f"  product family best    {v_prod:.12f}  "
          f"(gap {variational_gap(p64, v_prod).gap:+.6f})  p={best_prod.p}")

    best_markov, v_markov = variational_search(gm, fb, "markov", 200)
    print(f"  markov family best     {v_markov:.12f}  "
          f"(gap {variational_gap(p64, v_markov).gap:+.2e})")
    print(f"  best transition rows   {np.round(best_markov.P, 6).tolist()}\n")

    print("random admissible chains never exceed the pressure:")
    worst = -math.inf
    for _ in range(500):
        q = float(rng.uniform(0.02, 0.98))
        mu = MarkovMeasure(np.array([[1 - q, q], [1.0, 0.0]]))
        worst = max(worst, variational_objective(mu, fb) - p64)
    print(f"  max(objective - pressure) over 500 draws: {worst:+.2e}")


if __name__ == "__main__":
    main()
