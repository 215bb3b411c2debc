"""The angular reparametrization rho(r, theta) matching model zeros to tropical crossings.

For each radius the knots (theta_i, y_i(r)) with y_i = b(r) T_i(r) + (1 - b(r)) theta_i
are interpolated by a periodic monotone piecewise-cubic Hermite interpolant
(Fritsch-Carlson slopes, as in scipy's PchipInterpolator).  The blend b is 0 on
[R - eps, R] and 1 on [R + eps, oo), so rho is the identity on the inner
collar and hits the model zeros T_i(r) exactly beyond R + eps.  The
interpolant is evaluated with per-radius knot values, which scipy's class does
not vectorize, so the slope formula is reimplemented here and tested against it.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Tuple

import numpy as np

from ..errors import MonotonicityFailure
from .hyperelliptic import HyperellipticModel, find_zeros, newton_zeros
from .outer import smooth_step


def pchip_slopes(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    """Fritsch-Carlson derivatives at the knots; x shape (n,), y shape (..., n)."""
    h = np.diff(x)
    delta = np.diff(y, axis=-1) / h
    d = np.zeros_like(y)
    d0, d1 = delta[..., :-1], delta[..., 1:]
    h0, h1 = h[:-1], h[1:]
    w1 = 2 * h1 + h0
    w2 = h1 + 2 * h0
    same = (np.sign(d0) * np.sign(d1)) > 0
    with np.errstate(divide="ignore", invalid="ignore"):
        whmean = (w1 / d0 + w2 / d1) / (w1 + w2)
        interior = np.where(same, 1.0 / whmean, 0.0)
    d[..., 1:-1] = interior
    d[..., 0] = _edge(h[0], h[1], delta[..., 0], delta[..., 1])
    d[..., -1] = _edge(h[-1], h[-2], delta[..., -1], delta[..., -2])
    return d


def _edge(h0, h1, m0, m1):
    """scipy's one-sided three-point end slope with the monotonicity safeguards."""
    d = ((2 * h0 + h1) * m0 - h0 * m1) / (h0 + h1)
    d = np.where(np.sign(d) != np.sign(m0), 0.0, d)
    flip = (np.sign(m0) != np.sign(m1)) & (np.abs(d) > np.abs(3 * m0))
    return np.where(flip, 3 * m0, d)


def hermite(x: np.ndarray, y: np.ndarray, d: np.ndarray, t: np.ndarray, deriv: bool = False):
    """Evaluate the cubic Hermite interpolant row-wise: y, d shape (m, n); t shape (m,)."""
    idx = np.clip(np.searchsorted(x, t, side="right") - 1, 0, len(x) - 2)
    rows = np.arange(len(t))
    x0, x1 = x[idx], x[idx + 1]
    h = x1 - x0
    s = (t - x0) / h
    y0, y1 = y[rows, idx], y[rows, idx + 1]
    m0, m1 = d[rows, idx], d[rows, idx + 1]
    h00 = (1 + 2 * s) * (1 - s) ** 2
    h10 = s * (1 - s) ** 2
    h01 = s * s * (3 - 2 * s)
    h11 = s * s * (s - 1)
    val = h00 * y0 + h10 * h * m0 + h01 * y1 + h11 * h * m1
    if not deriv:
        return val
    dh00 = 6 * s * s - 6 * s
    dh10 = 3 * s * s - 4 * s + 1
    dh01 = -dh00
    dh11 = 3 * s * s - 2 * s
    dval = (dh00 * y0 + dh01 * y1) / h + dh10 * m0 + dh11 * m1
    return val, dval


def periodic_pchip(S: np.ndarray, Y: np.ndarray, P: float, theta: np.ndarray, deriv: bool = False,
                   rows: np.ndarray | None = None):
    """Monotone interpolant through (S_i + jP, Y_i + jP) over three periods.

    Y has one row of knot values per distinct radius; ``rows`` picks the row for
    each entry of theta (default: row i for theta[i]).
    """
    x = np.concatenate([S - P, S, S + P])
    y = np.concatenate([Y - P, Y, Y + P], axis=-1)
    d = pchip_slopes(x, y)
    if rows is not None:
        y, d = y[rows], d[rows]
    base = S[0]
    t = base + np.mod(theta - base, P)
    shift = theta - t
    out = hermite(x, y, d, t, deriv)
    if deriv:
        return out[0] + shift, out[1]
    return out + shift


@dataclass
class RhoMap:
    sources: np.ndarray  # theta_i, sorted in [0, P)
    P: float
    R: float
    eps: float
    model: HyperellipticModel
    shift: int  # targets T_i are model zeros with index i + shift (periodically extended)
    base_zeros: np.ndarray  # model zeros at R + eps, unwrapped and matched to sources
    identity: bool = False

    def blend(self, r):
        return smooth_step((np.asarray(r, dtype=float) - self.R) / self.eps)

    def targets(self, r) -> np.ndarray:
        """Matched model zeros T_i(r), shape (len(r), n)."""
        r = np.atleast_1d(np.asarray(r, dtype=float))
        return newton_zeros(self.model, r, self.base_zeros)

    def knots(self, r) -> np.ndarray:
        r = np.atleast_1d(np.asarray(r, dtype=float))
        b = self.blend(r)[:, None]
        Y = np.broadcast_to(self.sources, (len(r), len(self.sources))).astype(float)
        moving = b[:, 0] > 0
        if np.any(moving):
            T = self.targets(r[moving])
            Y = Y.copy()
            Y[moving] = b[moving] * T + (1 - b[moving]) * self.sources
        return Y

    def __call__(self, r, theta, deriv: bool = False):
        r = np.asarray(r, dtype=float)
        theta = np.asarray(theta, dtype=float)
        r, theta = np.broadcast_arrays(r, theta)
        out = theta.astype(float).copy()
        dout = np.ones_like(out)
        if self.identity:
            return (out, dout) if deriv else out
        flat_r = r.ravel()
        moving = self.blend(flat_r) > 0
        if np.any(moving):
            ur, inv = np.unique(flat_r[moving], return_inverse=True)
            Y = self.knots(ur)
            res = periodic_pchip(self.sources, Y, self.P, theta.ravel()[moving], deriv, rows=inv)
            o = out.ravel()
            if deriv:
                o[moving] = res[0]
                do = dout.ravel()
                do[moving] = res[1]
                dout = do.reshape(out.shape)
            else:
                o[moving] = res
            out = o.reshape(out.shape)
        return (out, dout) if deriv else out

    def drift_constant(self, r_range: Tuple[float, float], n_r: int = 40, n_theta: int = 200) -> float:
        """Sampled sup of |d rho / dr| r^p on r_range (p = 3 odd, 2 even)."""
        p = 3.0 if self.model.k == 2 else 2.0
        r = np.linspace(r_range[0], r_range[1], n_r)
        th = np.linspace(0, self.P, n_theta, endpoint=False)
        rr, tt = np.meshgrid(r, th, indexing="ij")
        h = 1e-6 * rr
        dr = (self(rr + h, tt) - self(rr - h, tt)) / (2 * h)
        return float(np.max(np.abs(dr) * rr**p))

    def to_json(self) -> dict:
        return {
            "R": self.R,
            "eps": self.eps,
            "sources": list(map(float, self.sources)),
            "targets_at_R_plus_eps": list(map(float, self.base_zeros)),
            "period": self.P,
        }


def match_targets(sources: np.ndarray, zeros: np.ndarray, P: float) -> Tuple[int, np.ndarray]:
    """Cyclic relabeling of zeros (with period lifts) minimizing the largest displacement."""
    n = len(sources)
    ext = np.concatenate([zeros - P, zeros, zeros + P])
    best = None
    for s in range(-n, n + 1):
        T = ext[n + s : 2 * n + s]
        if len(T) != n:
            continue
        cost = float(np.max(np.abs(T - sources)))
        if best is None or cost < best[0]:
            best = (cost, s, T)
    return best[1], best[2].copy()


def build_rho(sources, model: HyperellipticModel, R: float, eps: float,
              n_check_r: int = 24, n_check_theta: int = 10_000) -> RhoMap:
    sources = np.sort(np.mod(np.asarray(sources, dtype=float), model.period))
    P = model.period
    zeros = find_zeros(model, R + eps)
    if len(zeros) != len(sources):
        raise MonotonicityFailure(f"{len(sources)} sources but {len(zeros)} model zeros")
    shift, T = match_targets(sources, zeros, P)
    rho = RhoMap(sources, P, R, eps, model, shift, T)
    # monotonicity of the knots and of the sampled interpolant across the blend
    r = np.linspace(R, R + eps, n_check_r)
    Y = rho.knots(r)
    gaps = np.diff(np.concatenate([Y, Y[:, :1] + P], axis=1), axis=1)
    if np.any(gaps <= 0):
        raise MonotonicityFailure("blended knots are not strictly increasing; shrink eps")
    th = np.linspace(0, P, n_check_theta, endpoint=False)
    rr, tt = np.meshgrid(r, th, indexing="ij")
    _, drho = rho(rr, tt, deriv=True)
    if np.min(drho) <= 0:
        raise MonotonicityFailure(f"sampled d rho / d theta reaches {np.min(drho):.3g}")
    return rho
