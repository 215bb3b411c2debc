"""Grid certificate that the two sheets of a glued potential never share a covector.

For every cell of an (r, theta) grid both residuals

    A = d_theta phi(sheet 0) - d_theta phi(sheet 1)
    B = d_r phi(sheet 0) - d_r phi(sheet 1)

are evaluated at the four corners.  A cell is cleared when one residual stays
away from zero by more than the first-order slack L_r dr / 2 + L_theta dtheta / 2,
with L estimated from the differences over the 3x3 block of neighbouring cells.
Cells that are not cleared are split 4 x 4 (up to three times) and re-checked
with a local estimate.  A cell is Violated when both residuals vanish at a
corner or A + iB winds around its boundary.  This is a sampled Lipschitz bound,
not interval arithmetic.
"""
from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import numpy as np
from scipy.ndimage import maximum_filter

CERTIFIED = "Certified"
VIOLATED = "Violated"
INCONCLUSIVE = "Inconclusive"


def thread_count() -> int:
    env = os.environ.get("TROPLAG_THREADS")
    if env:
        return max(1, int(env))
    return min(8, os.cpu_count() or 1)


@dataclass(frozen=True)
class RegionResult:
    name: str
    r_range: Tuple[float, float]
    resolution: Tuple[int, int]
    margin: float  # min over cells of max(|A| - slack_A, |B| - slack_B)
    verdict: str
    cell: Optional[Tuple[float, float]]  # (r, theta) centre of the worst or offending cell
    n_violated: int
    n_inconclusive: int

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "r_range": list(self.r_range),
            "resolution": list(self.resolution),
            "margin": self.margin,
            "verdict": self.verdict,
            "cell": list(self.cell) if self.cell else None,
            "violated_cells": self.n_violated,
            "inconclusive_cells": self.n_inconclusive,
        }


@dataclass(frozen=True)
class EmbeddednessCertificate:
    resolution: int
    regions: Tuple[RegionResult, ...]

    @property
    def verdict(self) -> str:
        vs = [reg.verdict for reg in self.regions]
        if VIOLATED in vs:
            return VIOLATED
        if INCONCLUSIVE in vs:
            return INCONCLUSIVE
        return CERTIFIED

    @property
    def margin(self) -> float:
        return min(reg.margin for reg in self.regions)

    @property
    def cell(self) -> Optional[Tuple[float, float]]:
        bad = [reg for reg in self.regions if reg.verdict == self.verdict and reg.verdict != CERTIFIED]
        return bad[0].cell if bad else None

    def to_json(self) -> dict:
        return {
            "verdict": self.verdict,
            "margin": self.margin,
            "resolution": self.resolution,
            "cell": list(self.cell) if self.cell else None,
            "regions": [reg.to_json() for reg in self.regions],
        }


def residuals(pot, r, theta, h_rel: float = 1e-6, h_theta: float = 1e-6):
    """Angular and radial sheet-difference residuals by central differences."""
    pr0, pt0 = fd_grad(pot, r, theta, 0, h_rel, h_theta)
    pr1, pt1 = fd_grad(pot, r, theta, 1, h_rel, h_theta)
    return pt0 - pt1, pr0 - pr1


def fd_grad(pot, r, theta, sheet, h_rel=1e-6, h_theta=1e-6):
    h = h_rel * r
    v = pot.value
    pr = (v(r + h, theta, sheet) - v(r - h, theta, sheet)) / (2 * h)
    pt = (v(r, theta + h_theta, sheet) - v(r, theta - h_theta, sheet)) / (2 * h_theta)
    return pr, pt


def _cell_slack(F: np.ndarray, dr: float, dth: float, periodic: bool = True) -> Tuple[np.ndarray, np.ndarray]:
    """Per cell: min |F| over its corners and the Lipschitz slack from a 3x3 cell neighbourhood.

    F has nodes on its last two axes (r, theta); leading axes are batch axes.
    """
    absF = np.abs(F)
    corner_min = np.minimum.reduce([absF[..., :-1, :-1], absF[..., 1:, :-1], absF[..., :-1, 1:], absF[..., 1:, 1:]])
    gr = np.abs(np.diff(F, axis=-2)) / dr
    gt = np.abs(np.diff(F, axis=-1)) / dth
    Lr = np.maximum(gr[..., :-1], gr[..., 1:])
    Lt = np.maximum(gt[..., :-1, :], gt[..., 1:, :])
    size = (1,) * (F.ndim - 2) + (3, 3)
    mode = ("nearest",) * (F.ndim - 1) + ("wrap" if periodic else "nearest",)
    Lr = maximum_filter(Lr, size=size, mode=mode)
    Lt = maximum_filter(Lt, size=size, mode=mode)
    return corner_min, Lr * dr / 2 + Lt * dth / 2


def _winding(A: np.ndarray, B: np.ndarray) -> np.ndarray:
    """Winding number of A + iB around each cell boundary (corners in counterclockwise order)."""
    z = A + 1j * B
    c = [z[..., :-1, :-1], z[..., 1:, :-1], z[..., 1:, 1:], z[..., :-1, 1:]]
    total = np.zeros(c[0].shape)
    for i in range(4):
        total += np.angle(c[(i + 1) % 4] / np.where(c[i] == 0, 1, c[i]))
    return np.rint(total / (2 * math.pi)).astype(int)


def _assess(A, B, r_nodes, dr, dth, k, zero_tol, periodic=True):
    """(margin, violated, inconclusive) per cell."""
    minA, sA = _cell_slack(A, dr, dth, periodic)
    minB, sB = _cell_slack(B, dr, dth, periodic)
    margin = np.maximum(minA - sA, minB - sB)
    scale = np.maximum(1.0, r_nodes[..., :-1, :-1] ** k)
    zero_cell = (minA <= zero_tol * scale) & (minB <= zero_tol * scale)
    violated = zero_cell | (_winding(A, B) != 0)
    return margin, violated, (~violated) & (margin <= 0)


def _refine(pot, r0, t0, dr, dth, depth, split, zero_tol, threads):
    """Subdivide cells with corners (r0, t0) into split x split subcells.

    Returns (margin per input cell, violated flag per input cell, list of still-inconclusive leaves).
    A ring of extra nodes around each cell feeds the Lipschitz estimate of its border subcells.
    """
    s = split
    sdr, sdt = dr / s, dth / s
    off = np.arange(-1, s + 2)
    rr = r0[:, None, None] + sdr * off[None, :, None] + 0 * off[None, None, :]
    tt = t0[:, None, None] + 0 * off[None, :, None] + sdt * off[None, None, :]
    A, B = _eval_flat(pot, rr, tt, threads)
    margin, violated, inconclusive = _assess(A, B, rr, sdr, sdt, pot.k, zero_tol, periodic=False)
    inner = (slice(None), slice(1, s + 1), slice(1, s + 1))
    margin, violated, inconclusive = margin[inner], violated[inner], inconclusive[inner]
    cell_violated = violated.reshape(len(r0), -1).any(axis=1)
    leaves = []
    if depth > 1 and np.any(inconclusive):
        ci, a, b = np.nonzero(inconclusive)
        sub_m, sub_v, sub_leaves = _refine(pot, r0[ci] + a * sdr, t0[ci] + b * sdt, sdr, sdt,
                                           depth - 1, split, zero_tol, threads)
        margin = margin.copy()
        margin[ci, a, b] = sub_m
        np.logical_or.at(cell_violated, ci, sub_v)
        leaves = sub_leaves
    elif np.any(inconclusive):
        ci, a, b = np.nonzero(inconclusive)
        leaves = list(zip(r0[ci] + (a + 0.5) * sdr, t0[ci] + (b + 0.5) * sdt))
    return margin.reshape(len(r0), -1).min(axis=1), cell_violated, leaves


def _eval_flat(pot, rr, tt, threads):
    shape = rr.shape
    r, t = rr.ravel(), tt.ravel()
    chunks = np.array_split(np.arange(len(r)), max(1, min(threads * 4, len(r) // 4096 + 1)))

    def work(idx):
        return residuals(pot, r[idx], t[idx])

    if threads > 1 and len(chunks) > 1:
        with ThreadPoolExecutor(threads) as ex:
            parts = list(ex.map(work, chunks))
    else:
        parts = [work(c) for c in chunks]
    A = np.concatenate([p[0] for p in parts]).reshape(shape)
    B = np.concatenate([p[1] for p in parts]).reshape(shape)
    return A, B


def certify_region(pot, r_range: Tuple[float, float], resolution: int, name: str = "",
                   threads: Optional[int] = None, zero_tol: float = 1e-9,
                   refine_depth: int = 3, split: int = 4) -> RegionResult:
    """Certify one band; inconclusive cells are subdivided up to ``refine_depth`` times."""
    threads = thread_count() if threads is None else threads
    P = pot.domain
    r_nodes = np.linspace(r_range[0], r_range[1], resolution + 1)
    th_nodes = np.linspace(0.0, P, resolution + 1)
    rr, tt = np.meshgrid(r_nodes, th_nodes, indexing="ij")
    A, B = _eval_flat(pot, rr, tt, threads)
    dr = r_nodes[1] - r_nodes[0]
    dth = th_nodes[1] - th_nodes[0]
    margin, violated, inconclusive = _assess(A, B, rr, dr, dth, pot.k, zero_tol)
    leaves = []
    if np.any(inconclusive) and not np.any(violated) and refine_depth > 0:
        ci, cj = np.nonzero(inconclusive)
        m, v, leaves = _refine(pot, r_nodes[ci], th_nodes[cj], dr, dth, refine_depth, split, zero_tol, threads)
        margin = margin.copy()
        margin[ci, cj] = m
        violated = violated.copy()
        violated[ci, cj] = v
        inconclusive = np.zeros_like(inconclusive)
        if leaves:
            inconclusive[ci[np.isnan(m) | (m <= 0)], cj[np.isnan(m) | (m <= 0)]] = True
    centre = lambda i, j: (float(r_nodes[i] + dr / 2), float(th_nodes[j] + dth / 2))
    if np.any(violated):
        i, j = np.argwhere(violated)[0]
        verdict, cell = VIOLATED, centre(i, j)
    elif leaves or np.any(inconclusive):
        verdict = INCONCLUSIVE
        cell = tuple(map(float, leaves[0])) if leaves else centre(*np.argwhere(inconclusive)[0])
    else:
        i, j = np.unravel_index(np.argmin(margin), margin.shape)
        verdict, cell = CERTIFIED, centre(i, j)
    return RegionResult(name, (float(r_range[0]), float(r_range[1])), (resolution, resolution),
                        float(margin.min()), verdict, cell, int(violated.sum()), int(inconclusive.sum()))


def default_regions(pot) -> List[Tuple[str, Tuple[float, float]]]:
    R, eps = pot.R, pot.eps
    return [
        ("transition", (R - eps, R + eps)),
        ("annulus", (R + eps, R + 1)),
        ("outer", (R + 1, 4 * (R + 1))),
    ]


def verify_embedding(pot, resolution: int = 400, regions: Optional[Sequence] = None,
                     threads: Optional[int] = None) -> EmbeddednessCertificate:
    """Certificate over the transition band, the gluing annulus and the outer band.

    ``pot`` is a GluedPotential, or anything with value(r, theta, sheet), domain,
    k and R / eps (or an explicit ``regions`` list of (name, (r0, r1))).
    """
    regions = default_regions(pot) if regions is None else regions
    out = tuple(certify_region(pot, rr, resolution, name, threads) for name, rr in regions)
    return EmbeddednessCertificate(resolution, out)
