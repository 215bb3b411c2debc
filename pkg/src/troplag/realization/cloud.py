"""Point clouds of the realized Lagrangian and a brute-force self-intersection scan.

On the end (|l| >= R - eps) a point of sheet b over l is (x, p(l)) with

    x1 + i x2 = e^{i theta} (phi_r + i phi_theta / r) / conj(p'(l)),

p(l) = l^2 in the maximal case and p(l) = l in the split case.  Over the core
disc the local model is used directly, x = +-conj(s sqrt f(xi)); when f is a
perfect square the polynomial square root is used so that each sheet is a
single-valued section, otherwise the branch is picked as on the end.
"""
from __future__ import annotations

import csv
import io
import math
import warnings
from dataclasses import dataclass
from concurrent.futures import ThreadPoolExecutor
from typing import List, Optional, Sequence, Tuple

import numpy as np

from ..errors import BranchPointSkipped
from ..multisection import MAXIMAL
from .certify import _winding, thread_count

CSV_HEADER = ("r", "theta", "xi1", "xi2", "x1", "x2", "sheet")


@dataclass
class Cloud:
    r: np.ndarray
    theta: np.ndarray
    xi1: np.ndarray
    xi2: np.ndarray
    x1: np.ndarray
    x2: np.ndarray
    sheet: np.ndarray
    region: np.ndarray  # 0 core, 1 end

    def __len__(self) -> int:
        return len(self.r)

    @property
    def xi(self) -> np.ndarray:
        return self.xi1 + 1j * self.xi2

    @property
    def x(self) -> np.ndarray:
        return self.x1 + 1j * self.x2

    def to_csv(self, fmt: str = "{:.6g}") -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(CSV_HEADER)
        for row in zip(self.r, self.theta, self.xi1, self.xi2, self.x1, self.x2, self.sheet):
            w.writerow([fmt.format(v) for v in row[:6]] + [int(row[6])])
        return buf.getvalue()


def _concat(parts: List[Cloud]) -> Cloud:
    return Cloud(*(np.concatenate([getattr(p, f) for p in parts]) for f in
                   ("r", "theta", "xi1", "xi2", "x1", "x2", "sheet", "region")))


def _p_and_dp(kind: str, l):
    if kind == MAXIMAL:
        return l * l, 2 * l
    return l, np.ones_like(l)


def end_covectors(gp, r, theta, sheet: int):
    """(xi, x) as complex arrays for upstairs points of the given sheet."""
    r = np.asarray(r, dtype=float)
    theta = np.asarray(theta, dtype=float)
    pr, pt = gp.fd_grad(r, theta, sheet)
    th = theta + (math.pi * sheet if gp.kind == MAXIMAL else 0.0)
    l = r * np.exp(1j * th)
    xi, dp = _p_and_dp(gp.kind, l)
    x = np.exp(1j * th) * (pr + 1j * pt / r) / np.conj(dp)
    return xi, x


def _sqrt_section(model):
    """Single-valued square root of f when f is a perfect square, else None."""
    if model.roots and all(m == 2 for _, m in model.roots):
        q = np.poly([z for z, _ in model.roots])  # descending, monic
        c = np.real_if_close(q[::-1], tol=1e6)
        if np.iscomplexobj(c):
            return None
        s = math.sqrt(model.a_d)
        return lambda xi: s * np.polynomial.polynomial.polyval(xi, c)
    return None


def core_covectors(gp, xi, sheet: int, l=None):
    """Covectors over the core disc.

    A perfect-square f gives two global sections.  Otherwise each upstairs
    point l takes the root of f(xi) nearest to the asymptotic branch at l, as
    on the end, so the labels agree across |l| = R - eps; in the maximal case
    sheet 1 sits over -l.
    """
    m = gp.model
    xi = np.asarray(xi, dtype=complex)
    sec = _sqrt_section(m)
    if sec is not None:
        return np.conj(m.sign * (1 if sheet == 0 else -1) * sec(xi))
    if gp.kind == MAXIMAL:
        l = np.sqrt(xi) if l is None else np.asarray(l, dtype=complex)
        return np.conj(m.root_branch(xi, l if sheet == 0 else -l))
    w = m.with_sign(1).root_branch(xi, xi)
    return np.conj(m.sign * (1 if sheet == 0 else -1) * w)


def sample_lagrangian(gp, n_r: int = 200, n_theta: int = 200, r_max: Optional[float] = None,
                      n_core: Optional[int] = None, r_min: Optional[float] = None) -> Cloud:
    """Cloud over the end [max(r_min, R - eps), r_max] and the core disc, both sheets."""
    R, eps = gp.R, gp.eps
    r_inner = R - eps
    r_max = 4 * (R + 1) if r_max is None else r_max
    r_lo = r_inner if r_min is None else r_min
    parts = []
    P = gp.domain
    th = np.linspace(0.0, P, n_theta, endpoint=False)
    r_end = np.linspace(max(r_lo, r_inner), r_max, n_r)
    rr, tt = np.meshgrid(r_end, th, indexing="ij")
    rr, tt = rr.ravel(), tt.ravel()
    for b in (0, 1):
        xi, x = end_covectors(gp, rr, tt, b)
        t_out = tt + (math.pi * b if gp.kind == MAXIMAL else 0.0)
        parts.append(Cloud(rr, t_out, xi.real, xi.imag, x.real, x.imag, np.full(len(rr), b), np.ones(len(rr), int)))
    if r_lo < r_inner:
        k = 2 if gp.kind == MAXIMAL else 1
        n_core = n_core or n_r
        r_core = np.linspace(r_lo, r_inner, n_core, endpoint=False)
        skip = r_core <= 1e-9
        if np.any(skip):
            warnings.warn("skipped samples at the branch point l = 0 (p is not a local diffeomorphism there)",
                          BranchPointSkipped)
            r_core = r_core[~skip]
        t_core = np.linspace(0.0, 2 * math.pi / k, n_theta, endpoint=False)
        rr, tt = np.meshgrid(r_core, t_core, indexing="ij")
        rr, tt = rr.ravel(), tt.ravel()
        l = rr * np.exp(1j * tt)
        xi = l**k
        for b in (0, 1):
            x = core_covectors(gp, xi, b, l)
            t_out = tt + (math.pi * b if k == 2 else 0.0)
            parts.append(Cloud(rr, t_out, xi.real, xi.imag, x.real, x.imag, np.full(len(rr), b), np.zeros(len(rr), int)))
    return _concat(parts)


@dataclass(frozen=True)
class ScanReport:
    resolution: int
    off_root: Tuple[Tuple[float, float], ...]  # xi of collisions away from every root of f
    branch_points: Tuple[Tuple[float, float], ...]  # simple roots: the sheets meet, no self-intersection
    double_points: Tuple[Tuple[float, float], ...]  # double roots: transverse self-intersections

    @property
    def ok(self) -> bool:
        return not self.off_root

    def to_json(self) -> dict:
        return {
            "resolution": self.resolution,
            "ok": self.ok,
            "off_root": [list(p) for p in self.off_root],
            "branch_points": [list(p) for p in self.branch_points],
            "double_points": [list(p) for p in self.double_points],
        }


def _collision_cells(D: np.ndarray, tol: float) -> np.ndarray:
    """Cells where the complex field D winds or comes within tol of zero at a corner."""
    absD = np.abs(D)
    small = np.minimum.reduce([absD[:-1, :-1], absD[1:, :-1], absD[:-1, 1:], absD[1:, 1:]]) <= tol
    return small | (_winding(D.real, D.imag) != 0)


def _boundary_winding(field, r0, r1, t0, t1, n: int = 32) -> int:
    """Winding number of a complex field around the rectangle, sampled densely on each edge."""
    s = np.linspace(0.0, 1.0, n, endpoint=False)
    r = np.concatenate([r0 + (r1 - r0) * s, np.full(n, r1), r1 - (r1 - r0) * s, np.full(n, r0)])
    t = np.concatenate([np.full(n, t0), t0 + (t1 - t0) * s, np.full(n, t1), t1 - (t1 - t0) * s])
    z = field(r, t)
    dz = np.angle(np.roll(z, -1) / np.where(z == 0, 1, z))
    return int(np.rint(dz.sum() / (2 * math.pi)))


def _end_difference(gp, r, t):
    _, x0 = end_covectors(gp, r, t, 0)
    _, x1 = end_covectors(gp, r, t, 1)
    return x0 - x1


def _scan_band(gp, r_lo: float, r_hi: float, resolution: int, rel_tol: float) -> List[Tuple[float, float]]:
    P = gp.domain
    r_nodes = np.linspace(r_lo, r_hi, resolution + 1)
    th_nodes = np.linspace(0.0, P, resolution + 1)
    rows = np.array_split(np.arange(len(r_nodes)), max(1, thread_count() * 4))
    D = np.empty((len(r_nodes), len(th_nodes)), dtype=complex)

    def work(idx):
        rr, tt = np.meshgrid(r_nodes[idx], th_nodes, indexing="ij")
        D[idx] = _end_difference(gp, rr, tt)

    with ThreadPoolExecutor(thread_count()) as ex:
        list(ex.map(work, rows))
    tol = rel_tol * np.max(np.abs(D))
    out = []
    for i, j in np.argwhere(_collision_cells(D, tol)):
        r0, r1, t0, t1 = r_nodes[i], r_nodes[i + 1], th_nodes[j], th_nodes[j + 1]
        corners = np.abs(D[i:i + 2, j:j + 2]).min()
        # four-corner winding aliases when the field turns fast; confirm on a dense boundary
        if corners > tol and _boundary_winding(lambda r, t: _end_difference(gp, r, t), r0, r1, t0, t1) == 0:
            continue
        xi, _ = _p_and_dp(gp.kind, (r0 + r1) / 2 * np.exp(1j * (t0 + t1) / 2))
        out.append((float(xi.real), float(xi.imag)))
    return out


def _in_polar_cell(z: complex, rad0, rad1, ang0, ang1, pad: float = 1e-12) -> bool:
    rz = abs(z)
    if not (rad0 - pad <= rz <= rad1 + pad):
        return False
    if rz < pad:
        return True
    az = math.atan2(z.imag, z.real) % (2 * math.pi)
    return any(ang0 - pad <= a <= ang1 + pad for a in (az, az + 2 * math.pi, az - 2 * math.pi))


def scan_self_intersections(gp, resolution: int = 1600, bands: Optional[Sequence] = None,
                            rel_tol: float = 1e-9) -> ScanReport:
    """Compare the two points over every sampled xi (the deck pairs of the double cover).

    End: x(sheet 0) - x(sheet 1) on an (r, theta) node grid per band (by default
    the certificate's bands).  Core: the same difference over a polar grid in
    xi.  Collisions are cells where the difference winds around the cell or
    nearly vanishes at a corner.
    """
    from .certify import default_regions

    bands = default_regions(gp) if bands is None else bands
    off: List[Tuple[float, float]] = []
    for _, (r_lo, r_hi) in bands:
        off.extend(_scan_band(gp, r_lo, r_hi, resolution, rel_tol))
    R, eps = gp.R, gp.eps
    k = 2 if gp.kind == MAXIMAL else 1
    rad = np.linspace(0.0, (R - eps) ** k, resolution + 1)
    ang = np.linspace(0.0, 2 * math.pi, resolution + 1)
    XI = rad[:, None] * np.exp(1j * ang[None, :])
    Dc = core_covectors(gp, XI, 0) - core_covectors(gp, XI, 1)
    # the principal square root has a cut; Dc^2 = 4 conj(f) carries the same zeros without it
    cells = _collision_cells(Dc**2, (rel_tol * np.max(np.abs(Dc))) ** 2)
    branch, double = [], []
    roots = list(gp.model.roots)
    drad, dang = rad[1] - rad[0], ang[1] - ang[0]
    for i, j in np.argwhere(cells):
        hit = next(((z, m) for z, m in roots if _in_polar_cell(z, rad[i], rad[i + 1], ang[j], ang[j + 1])), None)
        if hit is None:
            centre = (rad[i] + drad / 2) * np.exp(1j * (ang[j] + dang / 2))
            off.append((float(centre.real), float(centre.imag)))
        else:
            (branch if hit[1] == 1 else double).append((float(hit[0].real), float(hit[0].imag)))
    uniq = lambda pts: tuple(sorted(set((round(a, 9), round(b, 9)) for a, b in pts)))
    return ScanReport(resolution, tuple(off), uniq(branch), uniq(double))
