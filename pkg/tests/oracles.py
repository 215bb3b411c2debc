"""Independent reference computations used to derive and freeze expected values.

Nothing here imports the algorithms under test; only plain data accessors
(fan rays, lift slopes, gluing pairs) are read from the objects.
"""
from __future__ import annotations

import math
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
import sympy
from scipy import integrate


# ---------------------------------------------------------------- lattice


def character_by_sympy(v1, v2, b1: int, b2: int) -> Tuple[int, int]:
    """Integer m with <m, v1> = b1, <m, v2> = b2, solved symbolically."""
    x, y = sympy.symbols("x y")
    sol = sympy.solve([v1[0] * x + v1[1] * y - b1, v2[0] * x + v2[1] * y - b2], [x, y], dict=True)[0]
    return int(sol[x]), int(sol[y])


# ---------------------------------------------------------------- sampled potentials


def _ray_angles(rays) -> np.ndarray:
    return np.array([math.atan2(v[1], v[0]) for v in rays])


def sheet_paths(ts) -> Dict[int, List[int]]:
    """For every start sheet over cone 0, the sheet label over each cone j while turning once counterclockwise."""
    n = ts.fan.n
    glue = {}
    for g in ts.adjacency:
        glue.setdefault(g.ray, {})[g.lower] = g.upper
    paths = {}
    for s in range(ts.r):
        cur, path = s, [s]
        for j in range(1, n):
            cur = glue[j][cur]
            path.append(cur)
        paths[s] = path
    return paths


def _wrap_map(ts) -> Dict[int, int]:
    """Sheet over cone n-1 to sheet over cone 0 across ray 0."""
    return {g.lower: g.upper for g in ts.adjacency if g.ray == 0}


def upstairs_potential(ts, n_per_turn: int = 10_000, offset: float = 0.123456789):
    """Sampled tropical potential on the full upstairs circle(s).

    Returns a list of 1d arrays, one per connected component (cycle of the
    monodromy); each covers as many turns as the cycle is long.
    """
    fan = ts.fan
    rays = fan.ray_vectors
    ang = _ray_angles(rays)
    a0 = ang[0]
    rel = np.mod(ang - a0, 2 * math.pi)
    slope = {(l.cone, l.sheet): (l.slope[0], l.slope[1]) for l in ts.lifts}
    t = a0 + offset / n_per_turn + 2 * math.pi * np.arange(n_per_turn) / n_per_turn
    cone_idx = np.searchsorted(rel, np.mod(t - a0, 2 * math.pi), side="right") - 1
    u = np.stack([np.cos(t), np.sin(t)])
    paths = sheet_paths(ts)
    wrap = _wrap_map(ts)
    seen, comps = set(), []
    for s0 in range(ts.r):
        if s0 in seen:
            continue
        turns, s = [], s0
        while s not in seen:
            seen.add(s)
            path = paths[s]
            m = np.array([slope[(int(j), path[int(j)])] for j in cone_idx]).T
            turns.append((m * u).sum(axis=0))
            s = wrap[path[-1]]
        comps.append(np.concatenate(turns))
    return comps


def sign_changes_cyclic(v: np.ndarray) -> int:
    s = np.sign(v)
    return int(np.sum(s != np.roll(s, -1)))


def brute_force_N(ts, n_per_turn: int = 10_000) -> Optional[int]:
    """Crossing count from sign changes of sampled sheet differences.

    r = 2 maximal: zeros of phi - phi(. + one turn) on the double circle, halved.
    split: zeros of the difference of the two sections on one turn.
    rank r: zeros of phi - phi(. + k turns), which must agree for all k, divided by r.
    """
    comps = upstairs_potential(ts, n_per_turn)
    if ts.kind == "split":
        a, b = comps
        return sign_changes_cyclic(a - b)
    (phi,) = comps
    r = ts.r
    totals = {sign_changes_cyclic(phi - np.roll(phi, -k * n_per_turn)) for k in range(1, r)}
    if len(totals) != 1:
        return None
    Z = totals.pop()
    return Z // 2 if r == 2 else Z // r


# ---------------------------------------------------------------- series oracle


def quad_primitive(coeffs: Sequence[float], k: int, r0: float, r1: float, theta: float) -> float:
    """Re of the integral of sqrt(f(l^k)) d(l^k) along the ray at angle theta from r0 to r1.

    The square root branch is the one asymptotic to sqrt(a_d) l^(k d / 2).
    """
    c = np.asarray(coeffs, dtype=float)
    d = len(c) - 1
    u = complex(math.cos(theta), math.sin(theta))
    lead = math.sqrt(c[-1])

    def integrand(rho):
        l = rho * u
        xi = l**k
        w = np.sqrt(complex(np.polynomial.polynomial.polyval(xi, c)))
        ref = lead * l ** (k * d / 2)
        if (w / ref).real < 0:
            w = -w
        return (w * k * l ** (k - 1) * u).real

    val, _ = integrate.quad(integrand, r0, r1, epsabs=0.0, epsrel=1e-13, limit=1000)
    return val


def grid_zeros(fun, P: float, n: int = 10_000) -> np.ndarray:
    """Zeros of a periodic scalar function by sign changes on a grid and bisection."""
    from scipy.optimize import brentq

    th = (math.sqrt(5) - 2) * P / n + P * np.arange(n + 1) / n
    v = np.array([fun(t) for t in th])
    out = [brentq(fun, th[i], th[i + 1], xtol=1e-14) for i in range(n) if v[i] * v[i + 1] < 0]
    return np.sort(np.mod(out, P))


# ---------------------------------------------------------------- angle oracle


def kahler_angles_from_planes(g: complex) -> Tuple[float, float]:
    """Angles between the graphs of v -> conj(g v) and v -> -conj(g v) in C^2 = R^2 + i R^2.

    Each plane gets a real-orthonormal basis by Gram-Schmidt (no matrix square
    root); the angles are half the eigenphases of W W^T with W = U1^* U2.
    """
    a, b = g.real, g.imag

    def plane(sign):
        # tangent vectors (v, sign * A v) in R^4 written as complex vectors v + i A v
        A = sign * np.array([[a, -b], [-b, -a]])
        vs = [np.array([1.0, 0.0]), np.array([0.0, 1.0])]
        cols = [v + 1j * (A @ v) for v in vs]
        M = np.stack(cols, axis=1)
        # orthonormalize over R (Gram-Schmidt with the real inner product)
        q = []
        for c in M.T:
            for p in q:
                c = c - np.real(np.vdot(p, c)) * p
            q.append(c / np.linalg.norm(c))
        return np.stack(q, axis=1)

    U1, U2 = plane(1), plane(-1)
    W = U1.conj().T @ U2
    ev = np.linalg.eigvals(W @ W.T)
    return tuple(sorted(float(np.mod(np.angle(e) / 2, math.pi)) for e in ev))
