"""Gluing the smoothed outer potential to the reparametrized hyperelliptic model.

    phi = chi(r) phi_outer + (1 - chi(r)) s_b phi_model(r, rho(r, theta))

chi is exactly 0 on [0, R + eps] and exactly 1 on [R + 1, oo).  Sheets: in the
maximal case sheet 1 is theta + pi of sheet 0 (the model is odd under that
shift); in the split case sheet b uses the outer branch b and the model branch
with sign s_b, s_1 = -s_0.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Optional, Sequence

import numpy as np
from scipy import optimize

from ..errors import (GenericityViolated, NotRealizable, ShrinkExhausted, UnsupportedDegree)
from ..multisection import (MAXIMAL, GenericityReport, RealizabilityVerdict, TropicalMultiSection,
                            genericity_count, realizability)
from .hyperelliptic import (HyperellipticModel, choose_R, default_polynomial, find_zeros,
                            series_coefficients)
from .outer import OuterPotential, smooth_outer, smooth_step
from .rho import RhoMap, build_rho

TWO_PI = 2 * math.pi


def chi(r, R: float, eps: float):
    """Cutoff: 0 on [0, R + eps], 1 on [R + 1, oo)."""
    return smooth_step((np.asarray(r, dtype=float) - (R + eps)) / (1.0 - eps))


def tropical_zeros(outer: OuterPotential, n_grid: int = 20_000) -> np.ndarray:
    """Zeros of the sheet difference of the unsmoothed data on [0, domain), by grid and brentq."""
    P = outer.domain
    off = P * (math.sqrt(3) - 1) / n_grid
    th = off + P * np.arange(n_grid + 1) / n_grid
    vals = outer.delta_f(th)
    out = []
    g = lambda t: float(outer.delta_f(t))
    for i in range(n_grid):
        if vals[i] == 0.0:
            out.append(th[i])
        elif vals[i] * vals[i + 1] < 0:
            out.append(optimize.brentq(g, th[i], th[i + 1], xtol=1e-15))
    return np.sort(np.mod(np.asarray(out), P))


def zero_windows(sources: np.ndarray, P: float) -> float:
    """Half-width of the excluded window around each zero: one eighth of the smallest gap."""
    s = np.sort(sources)
    gaps = np.diff(np.concatenate([s, s[:1] + P]))
    return float(gaps.min()) / 8


@dataclass
class GluedPotential:
    kind: str
    outer: OuterPotential
    model: HyperellipticModel  # carries the chosen a_d and the branch sign s_0
    rho: RhoMap
    R: float
    eps: float
    halvings: int = 0
    a_d_initial: float = 1.0

    @property
    def a_d(self) -> float:
        return self.model.a_d

    @property
    def domain(self) -> float:
        return self.outer.domain

    @property
    def k(self) -> float:
        """Growth exponent of the sheet difference, used to scale tolerances."""
        return max(float(self.outer.k), float(self.model.e0))

    def chi(self, r):
        return chi(r, self.R, self.eps)

    def _inner(self, r, th, sign):
        return sign * self.model.phi(r, self.rho(r, th))

    def inner_value(self, r, theta, sheet: int = 0):
        r, th = np.broadcast_arrays(np.asarray(r, dtype=float), np.asarray(theta, dtype=float))
        if self.kind == MAXIMAL:
            return self._inner(r, th + math.pi * sheet, 1)
        return self._inner(r, th, 1 if sheet == 0 else -1)

    def value(self, r, theta, sheet: int = 0):
        r, th = np.broadcast_arrays(np.asarray(r, dtype=float), np.asarray(theta, dtype=float))
        c = self.chi(r)
        out = np.zeros(r.shape)
        inner = c < 1
        outer = c > 0
        if np.any(inner):
            out[inner] = (1 - c[inner]) * self.inner_value(r[inner], th[inner], sheet)
        if np.any(outer):
            out[outer] = out[outer] + c[outer] * self.outer.value(r[outer], th[outer], sheet)
        return out

    def fd_grad(self, r, theta, sheet: int = 0, h_rel: float = 1e-6, h_theta: float = 1e-6):
        """(d phi/dr, d phi/dtheta) by central differences with steps h_rel r and h_theta."""
        r, th = np.broadcast_arrays(np.asarray(r, dtype=float), np.asarray(theta, dtype=float))
        h = h_rel * r
        pr = (self.value(r + h, th, sheet) - self.value(r - h, th, sheet)) / (2 * h)
        pt = (self.value(r, th + h_theta, sheet) - self.value(r, th - h_theta, sheet)) / (2 * h_theta)
        return pr, pt

    def to_json(self) -> dict:
        return {
            "kind": self.kind,
            "R": self.R,
            "eps": self.eps,
            "a_d": self.a_d,
            "a_d_initial": self.a_d_initial,
            "halvings": self.halvings,
            "branch_sign": self.model.sign,
            "outer": self.outer.to_json(),
            "model": self.model.to_json(),
            "rho": self.rho.to_json(),
        }


def branch_sign(outer: OuterPotential, model: HyperellipticModel, rho: RhoMap, R: float, eps: float) -> int:
    """Model sign making the inner and outer sheet differences agree in sign at a probe angle."""
    s = rho.sources
    P = outer.domain
    gaps = np.diff(np.concatenate([s, s[:1] + P]))
    i = int(np.argmax(gaps))
    probe = s[i] + gaps[i] / 2
    r = R + eps + 0.5 * (1 - eps)
    d_out = float(outer.delta_f(probe))
    # both cases: the model difference is twice the model value at rho
    d_in = 2 * float(model.with_sign(1).phi(r, rho(r, probe)))
    if d_out == 0:
        return 1  # degenerate outer data; the shrink loop reports it
    if d_in == 0:
        raise GenericityViolated("the model sheets agree at the sign probe")
    return 1 if d_out * d_in > 0 else -1


def glue(outer: OuterPotential, model: HyperellipticModel, rho: RhoMap, a_d_initial: float = 1.0,
         eps: Optional[float] = None, max_halvings: int = 60, n_r: int = 41, n_theta: int = 2000) -> GluedPotential:
    """Shrink a_d until |inner difference| <= |outer difference| on [R + eps, R + 1] x K.

    K is the circle with a small window around every common zero removed.
    """
    R = rho.R
    eps = rho.eps if eps is None else eps
    model = model.with_leading(a_d_initial)
    sign = branch_sign(outer, model, rho, R, eps)
    model = model.with_sign(sign)
    P = outer.domain
    w = zero_windows(rho.sources, P) if len(rho.sources) else 0.0
    th = np.linspace(0, P, n_theta, endpoint=False)
    if len(rho.sources):
        dist = np.abs((th[:, None] - rho.sources[None, :] + P / 2) % P - P / 2).min(axis=1)
        th = th[dist >= w]
    r = np.linspace(R + eps, R + 1, n_r)
    rr, tt = np.meshgrid(r, th, indexing="ij")
    d_out = np.abs(outer.value(rr, tt, 0) - outer.value(rr, tt, 1))
    # the model difference scales exactly as a_d^(1/q), so one evaluation suffices
    unit = model.with_leading(1.0).with_sign(1)
    rho_t = rho(rr, tt)
    d_unit = np.abs(2 * unit.phi(rr, rho_t))
    a_d = a_d_initial
    for halvings in range(max_halvings + 1):
        if np.all(a_d ** (1.0 / model.q) * d_unit <= d_out):
            gm = replace(model.with_leading(a_d), sign=sign)
            return GluedPotential(outer.kind, outer, gm, rho, R, eps, halvings, a_d_initial)
        a_d /= 2
    raise ShrinkExhausted(f"inner difference still exceeds the outer one after {max_halvings} halvings")


@dataclass
class Realization:
    tropical: TropicalMultiSection
    genericity: GenericityReport
    verdict: RealizabilityVerdict
    model: HyperellipticModel
    outer: OuterPotential
    rho: RhoMap
    glued: GluedPotential
    sources: np.ndarray
    zeros: np.ndarray  # model zeros at R + eps
    R: float
    eps: float

    def to_json(self) -> dict:
        return {
            "N": self.genericity.N,
            "d": self.model.d,
            "R": self.R,
            "eps": self.eps,
            "a_d": self.glued.a_d,
            "halvings": self.glued.halvings,
            "tropical_zeros": list(map(float, self.sources)),
            "model_zeros": list(map(float, self.zeros)),
            "glued": self.glued.to_json(),
        }


def realize(
    ts: TropicalMultiSection,
    f: Optional[Sequence[float]] = None,
    *,
    roots: Optional[Sequence[float]] = None,
    R: Optional[float] = None,
    eps: float = 0.1,
    K: int = 40,
    a_d_initial: float = 1.0,
) -> Realization:
    """Full pipeline: genericity, local model, outer smoothing, rho, gluing."""
    rep = genericity_count(ts)
    if not rep.ok:
        raise GenericityViolated(f"{rep.failure_reason}: {rep.detail}")
    verdict = realizability(ts, rep)
    if ts.r > 2:
        raise UnsupportedDegree("gluing is implemented for 2-sheeted data; rank-r data gets a verdict only")
    if not verdict.realizable:
        raise NotRealizable(f"N = {rep.N}: maximal 2-fold data needs N >= 3 to be realizable")
    if verdict.d is None:
        raise UnsupportedDegree(f"N = {rep.N}: the two sections are already disjoint; no local model to glue")
    d = verdict.d
    if f is None and roots is None:
        f = default_polynomial(d)
    model = series_coefficients(f, K, roots=roots)
    if model.d != d:
        raise NotRealizable(f"local model has degree {model.d}, the data needs d = N - 2 = {d}")
    if R is None:
        R = choose_R(model) + eps
    if R - eps <= model.R0:
        raise NotRealizable(f"R - eps = {R - eps} must exceed the series radius R0 = {model.R0}")
    outer = smooth_outer(ts, R)
    sources = tropical_zeros(outer)
    if len(sources) != d + 2:
        raise GenericityViolated(f"{len(sources)} tropical zeros on the circle, expected {d + 2}")
    rho = build_rho(sources, model, R, eps)
    gp = glue(outer, model, rho, a_d_initial)
    return Realization(ts, rep, verdict, gp.model, outer, rho, gp, sources, rho.base_zeros, R, eps)


def glued_from_parameters(ts: TropicalMultiSection, coefficients: Sequence[float], R: float, eps: float,
                          K: int, sign: int, halvings: int = 0, a_d_initial: float = 1.0) -> GluedPotential:
    """Rebuild a glued potential from stored parameters (the final a_d is in the coefficients)."""
    outer = smooth_outer(ts, R)
    sources = tropical_zeros(outer)
    model = series_coefficients(coefficients, K).with_sign(sign)
    rho = build_rho(sources, model, R, eps)
    return GluedPotential(ts.kind, outer, model, rho, R, eps, halvings, a_d_initial)
