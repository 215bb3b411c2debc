"""Named example multi-sections and a random generator of valid data."""
from __future__ import annotations

from typing import List, Optional, Sequence

import numpy as np

from .bundle import KaneyamaBundle, kaneyama_tropicalize
from .errors import NotCartier
from .fan import Fan, LatticeVector, ToricDivisor, cross_fan, divisor_character, hexagon_fan, p2_fan, perp, solve_character
from .multisection import MAXIMAL, SPLIT, TropicalMultiSection, default_adjacency, from_sheets


def e111() -> TropicalMultiSection:
    return kaneyama_tropicalize(KaneyamaBundle(1, 1, 1))


def split_from_divisors(fan: Fan, D_lower: ToricDivisor, D_upper: ToricDivisor) -> TropicalMultiSection:
    """Two sections given by the support functions of two divisors."""
    table = [[divisor_character(fan, D_lower, j), divisor_character(fan, D_upper, j)] for j in range(fan.n)]
    return from_sheets(fan, table, SPLIT)


def split_trivial() -> TropicalMultiSection:
    """Two copies of the zero section over the coordinate cross."""
    return from_sheets(cross_fan(), [[(0, 0), (0, 0)]] * 4, SPLIT)


def split_cross_n2() -> TropicalMultiSection:
    """Sheets with constant slopes (0,0) and (1,0); they cross where cos vanishes."""
    return from_sheets(cross_fan(), [[(0, 0), (1, 0)]] * 4, SPLIT)


def split_cross_n4() -> TropicalMultiSection:
    """Zero section against the support function of D1 - D2 + D3 - D4."""
    fan = cross_fan()
    return split_from_divisors(fan, ToricDivisor(), ToricDivisor.from_list(fan, [1, -1, 1, -1]))


def split_hexagon_n6() -> TropicalMultiSection:
    """Zero section against an alternating divisor on the hexagon fan."""
    fan = hexagon_fan()
    return split_from_divisors(fan, ToricDivisor(), ToricDivisor.from_list(fan, [1, -1, 1, -1, 1, -1]))


def coinciding_pair() -> TropicalMultiSection:
    return from_sheets(p2_fan(), [[(1, 0), (1, 0)]] * 3, SPLIT)


# Maximal 2-fold data on the P^2 fan whose sheets cross only once.
N1_TABLE = [[(-2, -1), (0, 0)], [(0, -1), (-2, 0)], [(0, -1), (-2, 0)]]

# 3-fold data on the P^2 fan with a 3-cycle monodromy.  Each window holds at
# most three crossings on a three-cone fan, and the total per turn is even, so
# 8 crossings per turn (window counts 3, 3, 2) is the most P^2 allows.
# Found with random_multisection and frozen.
RANK3_TABLE = [
    [(-1, 1), (1, -1), (0, -1)],
    [(0, 1), (1, -1), (0, -1)],
    [(1, 0), (0, 0), (-1, 0)],
]

# 3-fold data on the cross fan with 10 crossings per turn: N = floor(10/3) = 3,
# matching the local model x^3 = f_2 (2(d + r) = 10).  Found with
# random_multisection and frozen.
RANK3_CROSS_TABLE = [
    [(0, 2), (-3, 3), (1, 1)],
    [(2, 2), (-2, 3), (1, 1)],
    [(2, -1), (-2, 3), (1, 2)],
    [(-3, -1), (1, 3), (0, 2)],
]


def maximal_n1() -> TropicalMultiSection:
    return from_sheets(p2_fan(), N1_TABLE, MAXIMAL)


def rank3_example() -> TropicalMultiSection:
    return from_sheets(p2_fan(), RANK3_TABLE, MAXIMAL)


def rank3_cross_n3() -> TropicalMultiSection:
    return from_sheets(cross_fan(), RANK3_CROSS_TABLE, MAXIMAL)


def random_multisection(
    fan: Fan,
    r: int = 2,
    kind: str = MAXIMAL,
    rng: Optional[np.random.Generator] = None,
    bound: int = 5,
    max_tries: int = 1000,
) -> TropicalMultiSection:
    """Random valid data with slopes in [-bound, bound]^2 and the default gluing.

    Slopes are propagated counterclockwise across rays by adding multiples of
    the ray's perpendicular; the last cone is solved from both of its rays so
    that the cover closes up.  Draws outside the box are rejected.
    """
    rng = rng if rng is not None else np.random.default_rng()
    n = fan.n
    rays = fan.ray_vectors
    for _ in range(max_tries):
        table: List[List[LatticeVector]] = [[
            LatticeVector(*map(int, rng.integers(-bound, bound + 1, size=2))) for _ in range(r)
        ]]
        for j in range(1, n - 1):
            p = perp(rays[j])
            table.append([m + p.scale(int(rng.integers(-bound, bound + 1))) for m in table[-1]])
        shift = 1 if kind == MAXIMAL else 0
        last = []
        try:
            for s in range(r):
                target = table[0][(s + shift) % r]
                last.append(solve_character(rays[n - 1], rays[0],
                                            table[-1][s].pair(rays[n - 1]), target.pair(rays[0])))
        except NotCartier:
            continue
        table.append(last)
        if all(abs(c) <= bound for row in table for m in row for c in m):
            return from_sheets(fan, table, kind)
    raise RuntimeError("random_multisection: no valid draw within max_tries")
