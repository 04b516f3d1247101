"""Finite-difference stencil helpers shared by the numeric cross-checks.

Nothing in here knows about fractional orders; these are plain classical
difference formulas on small point sets.
"""

from __future__ import annotations

from typing import Callable, Sequence

#: double-precision machine epsilon
EPS = 2.220446049250313e-16


def fd_weights(z: float, nodes: Sequence[float], order: int) -> list[list[float]]:
    """Differentiation weights on an arbitrary node set (Fornberg's recursion).

    Returns a table ``c`` where ``c[j][i]`` is the weight of ``f(nodes[i])``
    in the approximation of the j-th derivative of ``f`` at ``z``, for every
    j up to ``order``.
    """
    if order < 0:
        raise ValueError(f"derivative order must be >= 0, got {order}")
    n = len(nodes)
    if n < order + 1:
        raise ValueError(f"need at least {order + 1} nodes for order {order}, got {n}")
    c = [[0.0] * n for _ in range(order + 1)]
    c1 = 1.0
    c4 = nodes[0] - z
    c[0][0] = 1.0
    for i in range(1, n):
        mn = min(i, order)
        c2 = 1.0
        c5 = c4
        c4 = nodes[i] - z
        for j in range(i):
            c3 = nodes[i] - nodes[j]
            c2 *= c3
            if j == i - 1:
                for k in range(mn, 0, -1):
                    c[k][i] = c1 * (k * c[k - 1][i - 1] - c5 * c[k][i - 1]) / c2
                c[0][i] = -c1 * c5 * c[0][i - 1] / c2
            for k in range(mn, 0, -1):
                c[k][j] = (c4 * c[k][j] - k * c[k - 1][j]) / c3
            c[0][j] = c4 * c[0][j] / c3
        c1 = c2
    return c


def five_point_first(f: Callable[[float], float], t: float, h: float) -> float:
    """Fourth-order central estimate of f'(t) on the 5-point stencil."""
    return (f(t - 2.0 * h) - 8.0 * f(t - h) + 8.0 * f(t + h) - f(t + 2.0 * h)) / (12.0 * h)


def nested_first(f: Callable[[float], float], t: float, h: float, depth: int) -> float:
    """Apply the 5-point first-derivative stencil ``depth`` times at t.

    Each level widens the sampled window by 2h on both sides; the caller is
    responsible for keeping every sample inside the domain of f.
    """
    if depth < 1:
        raise ValueError(f"stencil depth must be >= 1, got {depth}")
    if depth == 1:
        return five_point_first(f, t, h)

    def inner(s: float) -> float:
        return nested_first(f, s, h, depth - 1)

    return five_point_first(inner, t, h)
