"""Smoothing of the tropical potential away from the origin.

On the covering plane with polar coordinates (r, theta) the tropical potential
of a lift arc is r^k (a cos k theta + b sin k theta).  Near every corner angle
alpha it is replaced by a convex combination with the constant m_delta times its
corner value, weighted by a bump in r (theta - alpha); the bump support shrinks
like delta / r, so the smoothing converges to the tropical data at infinity.

Sheets: in the maximal case the two sheets over a point are theta and
theta + pi; in the split case they are the two branches.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import List, Optional, Sequence, Tuple

import numpy as np

from ..errors import GenericityViolated, SignRelationViolated
from ..multisection import MAXIMAL, SPLIT, TropicalMultiSection, circle_restriction

TWO_PI = 2 * math.pi


def smooth_step(x):
    """C-infinity step: 0 for x <= 0, 1 for x >= 1."""
    x = np.clip(np.asarray(x, dtype=float), 0.0, 1.0)
    with np.errstate(divide="ignore", over="ignore", invalid="ignore"):
        a = np.where(x > 0, np.exp(-1.0 / np.where(x > 0, x, 1.0)), 0.0)
        b = np.where(x < 1, np.exp(-1.0 / np.where(x < 1, 1.0 - x, 1.0)), 0.0)
    return a / (a + b)


def bump(t, delta: float):
    """1 on |t| <= delta/2, 0 on |t| >= delta, smooth in between."""
    t = np.abs(np.asarray(t, dtype=float))
    return smooth_step((delta - t) / (delta / 2))


def wrap(x):
    """Representative of x modulo 2 pi in [-pi, pi)."""
    return np.mod(np.asarray(x) + math.pi, TWO_PI) - math.pi


@dataclass(frozen=True)
class PLBranch:
    """Piecewise trigonometric function on one upstairs circle: breakpoints start[i], coefficients (a_i, b_i)."""

    start: Tuple[float, ...]
    a: Tuple[float, ...]
    b: Tuple[float, ...]
    k: int

    def f(self, theta):
        th = np.asarray(theta, dtype=float)
        base = self.start[0]
        t = np.mod(th - base, TWO_PI) + base
        idx = np.searchsorted(np.asarray(self.start), t, side="right") - 1
        a = np.asarray(self.a)[idx]
        b = np.asarray(self.b)[idx]
        return a * np.cos(self.k * th) + b * np.sin(self.k * th)

    def corners(self) -> List[float]:
        out = []
        n = len(self.start)
        for i in range(n):
            j = (i - 1) % n
            if (self.a[i], self.b[i]) != (self.a[j], self.b[j]):
                out.append(self.start[i] % TWO_PI)
        return out


def branches_of(ts: TropicalMultiSection) -> Tuple[List[PLBranch], int]:
    arcs = circle_restriction(ts)
    k = arcs[0].k
    if ts.kind == MAXIMAL:
        arcs = sorted(arcs, key=lambda a: a.theta0)
        return [PLBranch(tuple(a.theta0 for a in arcs), tuple(a.a for a in arcs), tuple(a.b for a in arcs), k)], k
    out = []
    for br in (0, 1):
        sub = sorted((a for a in arcs if a.branch == br), key=lambda a: a.theta0)
        out.append(PLBranch(tuple(a.theta0 for a in sub), tuple(a.a for a in sub), tuple(a.b for a in sub), k))
    return out, k


@dataclass(frozen=True)
class OuterPotential:
    kind: str
    branches: Tuple[PLBranch, ...]
    k: int
    corners: Tuple[float, ...]
    delta: float
    m_delta: float
    R: float

    @property
    def domain(self) -> float:
        """Angular range over which the two sheets are compared."""
        return math.pi if self.kind == MAXIMAL else TWO_PI

    def f_sheet(self, theta, sheet: int):
        if self.kind == MAXIMAL:
            return self.branches[0].f(np.asarray(theta) + math.pi * sheet)
        return self.branches[sheet].f(theta)

    def delta_f(self, theta):
        return self.f_sheet(theta, 0) - self.f_sheet(theta, 1)

    def value(self, r, theta, sheet: int = 0):
        r = np.asarray(r, dtype=float)
        th = np.asarray(theta, dtype=float)
        if self.kind == MAXIMAL:
            th = th + math.pi * sheet
            br = self.branches[0]
        else:
            br = self.branches[sheet]
        r, th = np.broadcast_arrays(r, th)
        acc = np.array(br.f(th), dtype=float)
        for alpha in self.corners:
            u = r * wrap(th - alpha)
            near = np.abs(u) < self.delta
            if not np.any(near):
                continue
            w = bump(u[near], self.delta)
            acc[near] = w * self.m_delta * br.f(alpha) + (1.0 - w) * acc[near]
        return r**self.k * acc

    def with_m_delta(self, m: float) -> "OuterPotential":
        return replace(self, m_delta=m)

    def to_json(self) -> dict:
        return {
            "kind": self.kind,
            "k": self.k,
            "corners": list(self.corners),
            "delta": self.delta,
            "m_delta": self.m_delta,
            "R": self.R,
        }


def _corner_set(branches: Sequence[PLBranch], kind: str) -> List[float]:
    cs = set()
    for br in branches:
        for a in br.corners():
            cs.add(round(a % TWO_PI, 15))
            if kind == MAXIMAL:
                cs.add(round((a + math.pi) % TWO_PI, 15))
    return sorted(cs)


def smooth_outer(ts: TropicalMultiSection, R: float, delta_request: Optional[float] = None,
                 samples_per_window: int = 400) -> OuterPotential:
    branches, k = branches_of(ts)
    corners = _corner_set(branches, ts.kind)
    probe = OuterPotential(ts.kind, tuple(branches), k, tuple(corners), 0.0, 1.0, R)
    if not corners:
        return probe
    for a in corners:
        if abs(float(probe.delta_f(a))) < 1e-12:
            raise GenericityViolated(f"the sheets agree at the corner angle {a:.6g}")
    cyc = sorted(corners) + [corners[0] + TWO_PI]
    gap = min(cyc[i + 1] - cyc[i] for i in range(len(corners))) if len(corners) > 1 else TWO_PI
    delta = delta_request if delta_request is not None else R * gap / 4
    for _ in range(60):
        half = delta / R  # angular half-width at radius R; smaller for r > R
        ok = 2 * half < gap or len(corners) == 1
        ratios = []
        for a in corners:
            th = a + np.linspace(-half, half, samples_per_window)
            base = float(probe.delta_f(a))
            ratio = probe.delta_f(th) / base
            ratios.append(ratio.min())
        if ok and min(ratios) > 0:
            m = min(1.0, 0.9 * min(ratios))
            return OuterPotential(ts.kind, tuple(branches), k, tuple(corners), delta, m, R)
        delta /= 2
    raise GenericityViolated("could not separate the corner windows from the crossings")


@dataclass(frozen=True)
class SignReport:
    samples: int
    checked: int
    ok: bool
    worst: Optional[Tuple[float, float]]

    def to_json(self) -> dict:
        return {"samples": self.samples, "checked": self.checked, "ok": self.ok, "worst": self.worst}


def radial_sign_check(pot, r_range: Tuple[float, float], n_samples: int = 10_000,
                      rng: Optional[np.random.Generator] = None, rel_tol: float = 1e-8,
                      raise_on_violation: bool = True) -> SignReport:
    """sign(phi^0 - phi^1) = sign(d_r phi^0 - d_r phi^1) at random samples with a nonzero difference.

    ``pot`` is anything with value(r, theta, sheet) and a ``domain`` and ``k`` attribute.
    """
    rng = rng if rng is not None else np.random.default_rng(0)
    r = rng.uniform(r_range[0], r_range[1], n_samples)
    th = rng.uniform(0.0, pot.domain, n_samples)
    h = 1e-6 * r
    d0 = pot.value(r, th, 0) - pot.value(r, th, 1)
    dr = ((pot.value(r + h, th, 0) - pot.value(r + h, th, 1))
          - (pot.value(r - h, th, 0) - pot.value(r - h, th, 1))) / (2 * h)
    scale = r ** pot.k
    mask = np.abs(d0) > rel_tol * scale
    bad = mask & (np.sign(d0) != np.sign(dr))
    worst = None
    if np.any(bad):
        i = int(np.flatnonzero(bad)[0])
        worst = (float(r[i]), float(th[i]))
        if raise_on_violation:
            raise SignRelationViolated(f"sign relation fails at r = {worst[0]:.6g}, theta = {worst[1]:.6g}")
    return SignReport(n_samples, int(mask.sum()), worst is None, worst)
