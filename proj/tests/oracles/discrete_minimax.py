"""Discrete minimax of exp on [-1, 1] by linear programming.

Minimizes E subject to |exp(x_i) - p(x_i)| <= E on 10^4 equispaced points,
p in the Chebyshev basis. Prints E_n for n = 0..6; the values are frozen into
tests/test_approx.cpp and tests/acceptance.cpp.
"""
import numpy as np
from numpy.polynomial import chebyshev as C
from scipy.optimize import linprog

GRID = 10_000


def discrete_minimax(n, grid=GRID):
    x = np.linspace(-1.0, 1.0, grid)
    f = np.exp(x)
    v = C.chebvander(x, n)
    ones = np.ones((grid, 1))
    # Variables: c_0..c_n, E. Minimize E.
    a_ub = np.vstack([np.hstack([v, -ones]), np.hstack([-v, -ones])])
    b_ub = np.concatenate([f, -f])
    cost = np.zeros(n + 2)
    cost[-1] = 1.0
    bounds = [(None, None)] * (n + 1) + [(0, None)]
    res = linprog(cost, A_ub=a_ub, b_ub=b_ub, bounds=bounds, method="highs",
                  options={"primal_feasibility_tolerance": 1e-10, "dual_feasibility_tolerance": 1e-10})
    assert res.status == 0, res.message
    return res.x[-1], res.x[:-1]


if __name__ == "__main__":
    for n in range(7):
        e, c = discrete_minimax(n)
        dense = np.linspace(-1, 1, 2_000_001)
        cont = np.max(np.abs(np.exp(dense) - C.chebval(dense, c)))
        print(f"n={n} E_grid={e:.17e} max_dense={cont:.17e} gap={cont - e:.3e}")
