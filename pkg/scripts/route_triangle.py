"""Refinement study of the three solution routes on a two-term benchmark.

The system carries a leading order 1.5 plus an atom of order 0.5 with the
half-weighted identity symbol, a 2 x 2 operator with eigenvalues {1, 2},
and linear-in-time forcing.  Pairwise max-relative errors should shrink
roughly by half per grid doubling.
"""

import argparse

import numpy as np

from fraccauchy import (
    Atom,
    CauchyProblem,
    Forcing,
    MatrixOperator,
    OrderMeasure,
    Polynomial,
    TimeGrid,
    compare,
    duhamel_caputo,
    identity_symbol,
    oracle_caputo,
    solve_repr,
)


def benchmark(n: int) -> CauchyProblem:
    rng = np.random.default_rng(3)
    p = rng.normal(size=(2, 2)) + np.eye(2)
    op = MatrixOperator.from_eigensystem([1.0, 2.0], p)
    measure = OrderMeasure(1.5, (Atom(0.5, 0.5, identity_symbol()),))
    return CauchyProblem(
        op,
        measure,
        [np.zeros(2), np.zeros(2)],
        Forcing(Polynomial([0.0, 1.0]), np.array([1.0, 0.5])),
        TimeGrid(1.0, n),
    )


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--sizes", type=int, nargs="+", default=[256, 512, 1024, 2048])
    args = ap.parse_args()

    print(f"{'n':>6} {'repr-duhamel':>14} {'repr-oracle':>13} {'duhamel-oracle':>16}")
    for n in args.sizes:
        prob = benchmark(n)
        a = solve_repr(prob)
        b = duhamel_caputo(prob)
        c = oracle_caputo(prob)
        print(
            f"{n:6d} {compare(a, b).max_rel:14.3e} "
            f"{compare(a, c).max_rel:13.3e} {compare(b, c).max_rel:16.3e}"
        )


if __name__ == "__main__":
    main()
