"""Fractional relaxation benchmark: kernel route vs stepping oracle.

Solves D_*^mu u + u = 0 with u(0) = 1 for a few leading orders and prints
the error of both routes against the scaled-erfc closed form (mu = 1/2) or
against each other.
"""

import argparse

import numpy as np
from scipy.special import erfc

from fraccauchy import (
    Atom,
    CauchyProblem,
    MatrixOperator,
    OrderMeasure,
    TimeGrid,
    compare,
    identity_symbol,
    ml_array,
    oracle_caputo,
    solve_repr,
)


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--t-end", type=float, default=2.0)
    ap.add_argument("--n", type=int, default=1024)
    args = ap.parse_args()

    op = MatrixOperator(np.array([[1.0]]))
    grid = TimeGrid(args.t_end, args.n)
    print(f"grid: [0, {args.t_end}] with n = {args.n}")
    print(f"{'mu':>5} {'repr vs exact':>15} {'oracle vs exact':>17} {'repr vs oracle':>16}")
    for mu in (0.3, 0.5, 0.8):
        measure = OrderMeasure(mu, (Atom(0.0, 1.0, identity_symbol()),))
        prob = CauchyProblem(op, measure, [np.array([1.0])], None, grid)
        kernel = solve_repr(prob)
        stepped = oracle_caputo(prob)
        if mu == 0.5:
            exact = np.concatenate(
                [[1.0], np.exp(grid.nodes[1:]) * erfc(np.sqrt(grid.nodes[1:]))]
            )
        else:
            exact = ml_array(mu, 1.0, -grid.nodes**mu).real
        e_kernel = np.max(np.abs(kernel.states[:, 0] - exact))
        e_oracle = np.max(np.abs(stepped.states[:, 0] - exact))
        e_cross = compare(kernel, stepped).max_abs
        print(f"{mu:5.2f} {e_kernel:15.3e} {e_oracle:17.3e} {e_cross:16.3e}")


if __name__ == "__main__":
    main()
