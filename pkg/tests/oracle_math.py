"""Numeric oracles shared by the unit and acceptance tests."""

import math

import numpy as np


def phi_by_maximisation(eps: float) -> float:
    """Grid search then golden-section refinement of theta + 1 - eps - (1-eps) e^theta."""

    def f(theta):
        return theta + 1 - eps - (1 - eps) * math.exp(theta)

    grid = np.linspace(1e-12, 20.0, 200_001)
    vals = grid + 1 - eps - (1 - eps) * np.exp(grid)
    i = int(np.argmax(vals))
    lo, hi = grid[max(i - 1, 0)], grid[min(i + 1, grid.size - 1)]
    g = (math.sqrt(5) - 1) / 2
    a, b = lo, hi
    c, d = b - g * (b - a), a + g * (b - a)
    while b - a > 1e-12:
        if f(c) > f(d):
            b, d = d, c
            c = b - g * (b - a)
        else:
            a, c = c, d
            d = a + g * (b - a)
    return max(f((a + b) / 2), float(vals[i]))
