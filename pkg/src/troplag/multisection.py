"""Tropical Lagrangian multi-sections over complete rank-2 fans.

A multi-section is stored downstairs: for every maximal cone of the fan a list
of lifts (sheet label, integer slope, multiplicity), together with the gluing
of lifts across each ray.  Going once around the origin composes these gluings
into a monodromy permutation, which tells the maximal (single cycle) and split
(identity) coverings apart.

Genericity is decided exactly.  Two deck-translates of the potential differ,
over a maximal cone sigma, by the linear function <dm, u>; its sign at the
integer ray vectors decides whether a crossing lies inside the cone.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from itertools import combinations
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

from .errors import MultisectionError, NotRealizable, ParityMismatch, UnsupportedDegree
from .fan import (
    Cone,
    ConicalLagrangian,
    Fan,
    LatticeVector,
    Stratum,
    ToricDivisor,
    cone_perp_basis,
    divisor_character,
    fan_from_json,
    strictly_inside,
    vec,
)

MAXIMAL = "maximal"
SPLIT = "split"
KINDS = (MAXIMAL, SPLIT)


@dataclass(frozen=True)
class Lift:
    cone: int
    sheet: int
    slope: LatticeVector
    mult: int = 1


@dataclass(frozen=True)
class Glue:
    """Across ray ``ray``: sheet ``lower`` of cone ray-1 continues as sheet ``upper`` of cone ray."""

    ray: int
    lower: int
    upper: int


@dataclass(frozen=True)
class TropicalMultiSection:
    fan: Fan
    r: int
    lifts: Tuple[Lift, ...]
    adjacency: Tuple[Glue, ...]
    kind: str = MAXIMAL

    def lifts_over(self, cone: int) -> List[Lift]:
        return [l for l in self.lifts if l.cone == cone]

    def slope(self, cone: int, sheet: int) -> LatticeVector:
        for l in self.lifts:
            if l.cone == cone and l.sheet == sheet:
                return l.slope
        raise MultisectionError(f"cone {cone} has no sheet {sheet}")

    def slope_table(self) -> List[Dict[int, LatticeVector]]:
        table: List[Dict[int, LatticeVector]] = [dict() for _ in range(self.fan.n)]
        for l in self.lifts:
            table[l.cone][l.sheet] = l.slope
        return table

    def glue_map(self, ray: int) -> Dict[int, int]:
        return {g.lower: g.upper for g in self.adjacency if g.ray == ray}

    def map_slopes(self, fn) -> "TropicalMultiSection":
        """Apply fn(cone_index, slope) -> slope to every lift; gluing is unchanged."""
        return replace(
            self, lifts=tuple(replace(l, slope=vec(fn(l.cone, l.slope))) for l in self.lifts)
        )

    def twisted(self, D: ToricDivisor) -> "TropicalMultiSection":
        shifts = [divisor_character(self.fan, D, j) for j in range(self.fan.n)]
        return self.map_slopes(lambda j, m: m + shifts[j])

    def negated(self) -> "TropicalMultiSection":
        return self.map_slopes(lambda j, m: -m)

    def to_json(self) -> dict:
        rays: Dict[int, List[List[int]]] = {}
        for g in self.adjacency:
            rays.setdefault(g.ray, []).append([g.lower, g.upper])
        return {
            "fan": self.fan.to_json(),
            "degree": self.r,
            "kind": self.kind,
            "lifts": [
                {"cone": l.cone, "sheet": l.sheet, "slope": list(l.slope), "mult": l.mult}
                for l in self.lifts
            ],
            "adjacency": [{"ray": k, "pairs": sorted(v)} for k, v in sorted(rays.items())],
        }


def default_adjacency(n_cones: int, r: int, kind: str) -> Tuple[Glue, ...]:
    """Sheet s continues as sheet s, except across ray 0 where a maximal cover shifts by one."""
    glues = []
    for ray in range(n_cones):
        for s in range(r):
            up = (s + 1) % r if (ray == 0 and kind == MAXIMAL) else s
            glues.append(Glue(ray, s, up))
    return tuple(glues)


def from_sheets(
    fan: Fan,
    table: Sequence[Sequence],
    kind: str = MAXIMAL,
    adjacency: Optional[Sequence[Glue]] = None,
) -> TropicalMultiSection:
    """Build a multi-section from ``table[cone][sheet] = slope`` (all multiplicities 1)."""
    if len(table) != fan.n:
        raise MultisectionError(f"expected slopes for {fan.n} cones, got {len(table)}")
    r = len(table[0])
    lifts = tuple(
        Lift(j, s, vec(m)) for j, row in enumerate(table) for s, m in enumerate(row)
    )
    adj = tuple(adjacency) if adjacency is not None else default_adjacency(fan.n, r, kind)
    return TropicalMultiSection(fan, r, lifts, adj, kind)


def glue_by_continuity(fan: Fan, table: Sequence[Sequence]) -> Optional[Tuple[Glue, ...]]:
    """Match lifts across each ray by the value <m, v_ray>; None if the match is not a unique bijection."""
    n = fan.n
    glues = []
    for ray in range(n):
        v = fan.ray_vectors[ray]
        lower = table[(ray - 1) % n]
        upper = table[ray]
        lo_vals = [vec(m).pair(v) for m in lower]
        up_vals = [vec(m).pair(v) for m in upper]
        if sorted(lo_vals) != sorted(up_vals) or len(set(lo_vals)) != len(lo_vals):
            return None
        for s, val in enumerate(lo_vals):
            glues.append(Glue(ray, s, up_vals.index(val)))
    return tuple(glues)


# ---------------------------------------------------------------- validation


@dataclass(frozen=True)
class Violation:
    rule: str  # "multiplicity" | "continuity" | "covering" | "structure"
    cone: Optional[str]
    message: str


@dataclass(frozen=True)
class ValidationReport:
    violations: Tuple[Violation, ...]

    @property
    def ok(self) -> bool:
        return not self.violations

    def to_json(self) -> dict:
        return {
            "valid": self.ok,
            "violations": [
                {"rule": v.rule, "cone": v.cone, "message": v.message} for v in self.violations
            ],
        }


def monodromy(ts: TropicalMultiSection) -> Tuple[Optional[Dict[int, int]], List[Dict[int, int]]]:
    """Return (monodromy on cone-0 sheets, per-start-sheet label in every cone).

    The first item is None if some gluing is missing along the way.
    """
    n = ts.fan.n
    maps = [ts.glue_map(ray) for ray in range(n)]
    paths: List[Dict[int, int]] = []
    perm: Dict[int, int] = {}
    for l in ts.lifts_over(0):
        s = l.sheet
        path = {0: s}
        cur = s
        for ray in list(range(1, n)) + [0]:
            if cur not in maps[ray]:
                return None, []
            cur = maps[ray][cur]
            if ray != 0:
                path[ray] = cur
        perm[s] = cur
        paths.append(path)
    return perm, paths


def cycles(perm: Mapping[int, int]) -> List[List[int]]:
    seen, out = set(), []
    for s in sorted(perm):
        if s in seen:
            continue
        cyc = [s]
        seen.add(s)
        t = perm[s]
        while t not in seen:
            cyc.append(t)
            seen.add(t)
            t = perm[t]
        out.append(cyc)
    return out


def validate(ts: TropicalMultiSection) -> ValidationReport:
    """Check multiplicities, continuity across rays and the covering type."""
    out: List[Violation] = []
    fan, n = ts.fan, ts.fan.n
    if ts.r < 1:
        out.append(Violation("structure", None, f"degree must be positive, got {ts.r}"))
    if ts.kind not in KINDS:
        out.append(Violation("structure", None, f"unknown covering kind {ts.kind!r}"))
    if ts.kind == SPLIT and ts.r != 2:
        out.append(Violation("structure", None, "split coverings are only modelled for r = 2"))
    by_cone: Dict[int, List[Lift]] = {}
    for l in ts.lifts:
        if not 0 <= l.cone < n:
            out.append(Violation("structure", None, f"lift refers to unknown cone {l.cone}"))
            continue
        if l.mult < 1:
            out.append(Violation("multiplicity", fan.maximal_cones[l.cone].id, "multiplicity must be positive"))
        by_cone.setdefault(l.cone, []).append(l)
    for j in range(n):
        cid = fan.maximal_cones[j].id
        lifts = by_cone.get(j, [])
        total = sum(l.mult for l in lifts)
        if total != ts.r:
            out.append(Violation("multiplicity", cid, f"sum of multiplicities over {cid} is {total}, expected {ts.r}"))
        sheets = [l.sheet for l in lifts]
        if len(set(sheets)) != len(sheets):
            out.append(Violation("structure", cid, f"duplicate sheet labels over {cid}"))
    for ray in range(n):
        rid = fan.rays[ray].id
        v = fan.ray_vectors[ray]
        lo_cone, up_cone = (ray - 1) % n, ray
        lower = {l.sheet: l for l in by_cone.get(lo_cone, [])}
        upper = {l.sheet: l for l in by_cone.get(up_cone, [])}
        glues = [g for g in ts.adjacency if g.ray == ray]
        used_lo = [g.lower for g in glues]
        used_up = [g.upper for g in glues]
        if sorted(used_lo) != sorted(lower) or sorted(used_up) != sorted(upper):
            out.append(Violation("multiplicity", rid, f"gluing across {rid} is not a bijection of lifts"))
        ray_total = 0
        for g in glues:
            a, b = lower.get(g.lower), upper.get(g.upper)
            if a is None or b is None:
                out.append(Violation("structure", rid, f"gluing across {rid} names a missing sheet"))
                continue
            if a.mult != b.mult:
                out.append(Violation("multiplicity", rid, f"multiplicities disagree across {rid}"))
            ray_total += a.mult
            jump = (a.slope - b.slope).pair(v)
            if jump != 0:
                out.append(Violation(
                    "continuity", rid,
                    f"slopes {tuple(a.slope)} and {tuple(b.slope)} differ on ray {tuple(v)} by {jump}",
                ))
        if ray_total != ts.r and not any(x.rule == "multiplicity" and x.cone == rid for x in out):
            out.append(Violation("multiplicity", rid, f"sum of multiplicities over {rid} is {ray_total}"))
    if not out:
        perm, _ = monodromy(ts)
        if perm is None:
            out.append(Violation("covering", None, "gluing data does not close up around the origin"))
        else:
            cyc = cycles(perm)
            if ts.kind == MAXIMAL and (len(cyc) != 1 or len(perm) != ts.r):
                out.append(Violation("covering", None, f"maximal covering needs one {ts.r}-cycle, got {cyc}"))
            if ts.kind == SPLIT and (len(cyc) != 2 or any(len(c) != 1 for c in cyc)):
                out.append(Violation("covering", None, f"split covering needs two disjoint cycles, got {cyc}"))
    return ValidationReport(tuple(out))


def _require_valid(ts: TropicalMultiSection):
    rep = validate(ts)
    if not rep.ok:
        raise MultisectionError("invalid multi-section: " + "; ".join(v.message for v in rep.violations))


# ---------------------------------------------------------------- circle data


@dataclass(frozen=True)
class Arc:
    """One lift arc: f(theta) = a cos(k theta) + b sin(k theta) on [theta0, theta1].

    ``start``/``end`` are the integer ray vectors bounding the base cone; the
    upstairs angles are floats used only by the numeric engine.
    """

    arc_id: int
    branch: int
    cone: int
    sheet: int
    start: LatticeVector
    end: LatticeVector
    theta0: float
    theta1: float
    a: int
    b: int
    k: int


def _ray_angles(fan: Fan) -> List[float]:
    out = []
    prev = None
    for v in fan.ray_vectors:
        t = math.atan2(v.y, v.x) % (2 * math.pi)
        if prev is not None and t < prev:
            t += 2 * math.pi
        out.append(t)
        prev = t
    return out


def circle_restriction(ts: TropicalMultiSection, allow_rank: bool = False) -> List[Arc]:
    """Arcs of the potential restricted to the unit circle of the covering plane.

    Maximal covers of degree k are parametrized by xi = l^k (so f has frequency k);
    split covers use the identity and two branches, one per sheet.
    """
    _require_valid(ts)
    if ts.r > 2 and not allow_rank:
        raise UnsupportedDegree("degree > 2 needs the rank-r parametrization (allow_rank=True)")
    n = ts.fan.n
    angles = _ray_angles(ts.fan)
    angles.append(angles[0] + 2 * math.pi)
    perm, paths = monodromy(ts)
    rays = ts.fan.ray_vectors
    arcs: List[Arc] = []
    if ts.kind == SPLIT:
        for branch, path in enumerate(paths):
            for j in range(n):
                m = ts.slope(j, path[j])
                arcs.append(Arc(len(arcs), branch, j, path[j], rays[j], rays[(j + 1) % n],
                                angles[j], angles[j + 1], m.x, m.y, 1))
        return arcs
    k = ts.r
    start = paths[0][0]
    order = [start]
    while len(order) < k:
        order.append(perm[order[-1]])
    path_of = {p[0]: p for p in paths}
    for turn, s0 in enumerate(order):
        path = path_of[s0]
        for j in range(n):
            m = ts.slope(j, path[j])
            t0 = (angles[j] + 2 * math.pi * turn) / k
            t1 = (angles[j + 1] + 2 * math.pi * turn) / k
            arcs.append(Arc(len(arcs), 0, j, path[j], rays[j], rays[(j + 1) % n], t0, t1, m.x, m.y, k))
    return arcs


# ---------------------------------------------------------------- genericity

CORNER_HIT = "CornerHit"
COINCIDING = "CoincidingGraphs"
DISAGREE = "PairCountsDisagree"


@dataclass(frozen=True)
class Crossing:
    arc_id: str
    cone: int
    witness: Tuple[LatticeVector, LatticeVector]
    direction: LatticeVector
    transversal: bool
    at_ray: bool
    psi: float  # base angle of the crossing, for display only

    def to_json(self) -> dict:
        return {
            "arc": self.arc_id,
            "cone": self.cone,
            "witness": [list(self.witness[0]), list(self.witness[1])],
            "direction": list(self.direction),
            "transversal": self.transversal,
            "at_ray": self.at_ray,
            "angle": self.psi,
        }


@dataclass(frozen=True)
class GenericityReport:
    N: Optional[int]
    crossings: Tuple[Crossing, ...]
    failure_reason: Optional[str] = None
    pair_counts: Tuple[Tuple[Tuple[int, int], Optional[int]], ...] = ()
    detail: str = ""
    total: Optional[int] = None  # zeros of phi - phi o gamma over the whole upstairs circle

    @property
    def ok(self) -> bool:
        return self.N is not None

    def to_json(self) -> dict:
        return {
            "N": self.N if self.ok else "Fail",
            "failure_reason": self.failure_reason,
            "detail": self.detail,
            "crossings": [c.to_json() for c in self.crossings],
            "pair_counts": [[list(p), c] for p, c in self.pair_counts],
            "total": self.total,
        }


def _count_pair(fan: Fan, d_lo: List[LatticeVector], d_closing: LatticeVector, tag: str):
    """Count zeros of the PL difference whose slope over cone j is d_lo[j].

    ``d_closing`` is the slope just before ray 0 read in the labelling that
    continues into cone 0 (the difference after one full turn).
    Returns (count, crossings, failure, detail).
    """
    n = fan.n
    rays = fan.ray_vectors
    crossings: List[Crossing] = []
    for j in range(n):
        if d_lo[j].is_zero():
            return None, crossings, COINCIDING, f"{tag}: deck-translates coincide over cone {j}"
    # zeros exactly on rays
    for j in range(n):
        v = rays[j]
        val = d_lo[j].pair(v)
        if val != 0:
            continue
        left = d_closing if j == 0 else d_lo[j - 1]
        if left != d_lo[j]:
            return None, crossings, CORNER_HIT, f"{tag}: crossing on ray {tuple(v)} at a corner"
        crossings.append(Crossing(f"{tag}/ray{j}", j, (v, v), v, True, True, math.atan2(v.y, v.x)))
    for j in range(n):
        v1, v2 = rays[j], rays[(j + 1) % n]
        dm = d_lo[j]
        e1, e2 = dm.pair(v1), dm.pair(v2)
        if e1 * e2 < 0:
            w = LatticeVector(-dm.y, dm.x)
            if not strictly_inside(w, v1, v2):
                w = -w
            assert strictly_inside(w, v1, v2)
            crossings.append(Crossing(f"{tag}/cone{j}", j, (v1, v2), w, True, False, math.atan2(w.y, w.x)))
    return len(crossings), crossings, None, ""


def genericity_count(ts: TropicalMultiSection) -> GenericityReport:
    """Exact N-genericity count, or a Fail report naming the obstruction."""
    _require_valid(ts)
    n = ts.fan.n
    if any(l.mult != 1 for l in ts.lifts):
        return GenericityReport(None, (), COINCIDING,
                                detail="a lift of multiplicity > 1 makes two sheets coincide")
    perm, paths = monodromy(ts)
    path_of = {p[0]: p for p in paths}
    if ts.kind == SPLIT:
        a, b = sorted(path_of)
        d = [ts.slope(j, path_of[a][j]) - ts.slope(j, path_of[b][j]) for j in range(n)]
        cnt, cr, fail, det = _count_pair(ts.fan, d, d[n - 1], "pair(0,1)")
        rep = GenericityReport(cnt, tuple(cr), fail, (((0, 1), cnt),), det, total=cnt)
        if rep.ok:
            assert rep.N % 2 == 0, "split coverings must have an even crossing count"
        return rep
    order = [min(path_of)]
    while len(order) < ts.r:
        order.append(perm[order[-1]])
    counts = []
    all_cross: List[Crossing] = []
    for ia, ib in combinations(range(ts.r), 2):
        sa, sb = order[ia], order[ib]
        d = [ts.slope(j, path_of[sa][j]) - ts.slope(j, path_of[sb][j]) for j in range(n)]
        # the closing comparison needs the pair that continues into (sa, sb) at cone 0
        pa, pb = order[(ia - 1) % ts.r], order[(ib - 1) % ts.r]
        d_close = ts.slope(n - 1, path_of[pa][n - 1]) - ts.slope(n - 1, path_of[pb][n - 1])
        cnt, cr, fail, det = _count_pair(ts.fan, d, d_close, f"pair({ia},{ib})")
        counts.append(((ia, ib), cnt))
        if fail:
            return GenericityReport(None, tuple(all_cross + cr), fail, tuple(counts), det)
        all_cross.extend(cr)
    if ts.r == 2:
        N = counts[0][1]
        assert N % 2 == 1, "maximal 2-fold coverings must have an odd crossing count"
        return GenericityReport(N, tuple(all_cross), None, tuple(counts), total=2 * N)
    # Window counts depend on where the fundamental window starts; the number of
    # zeros of phi - phi o gamma^k over the whole circle does not.
    cmap = dict(counts)
    totals = []
    for k in range(1, ts.r):
        totals.append(sum(cmap[tuple(sorted((a, (a + k) % ts.r)))] for a in range(ts.r)))
    if len(set(totals)) != 1:
        return GenericityReport(None, tuple(all_cross), DISAGREE, tuple(counts),
                                f"crossing totals per deck rotation disagree: {totals}")
    Z = totals[0]
    assert Z % 2 == 0, "a difference of continuous functions on a circle has an even number of zeros"
    return GenericityReport(Z // ts.r, tuple(all_cross), None, tuple(counts), total=Z)


# ---------------------------------------------------------------- predictions


@dataclass(frozen=True)
class RealizabilityVerdict:
    realizable: Optional[bool]  # None means unknown
    N: Optional[int]
    d: Optional[int]
    embedded: Optional[bool]
    reason: str

    def to_json(self) -> dict:
        status = {True: "realizable", False: "not_realizable", None: "unknown"}[self.realizable]
        return {"verdict": status, "N": self.N, "d": self.d, "embedded": self.embedded, "reason": self.reason}


def rank_r_degree(r: int, N: int, d_max: Optional[int] = None) -> Optional[int]:
    """Smallest d <= d_max with gcd(r, d) = 1 and floor(2(d/r + 1)) = N."""
    d_max = 8 * r if d_max is None else d_max
    for d in range(1, d_max + 1):
        if math.gcd(r, d) == 1 and (2 * (d + r)) // r == N:
            return d
    return None


def realizability(ts: TropicalMultiSection, report: Optional[GenericityReport] = None,
                  d_max: Optional[int] = None) -> RealizabilityVerdict:
    rep = report if report is not None else genericity_count(ts)
    if not rep.ok:
        return RealizabilityVerdict(False, None, None, None, f"not generic: {rep.failure_reason}")
    N = rep.N
    if ts.r == 2 and ts.kind == MAXIMAL:
        if N >= 3:
            return RealizabilityVerdict(True, N, N - 2, True, "maximal 2-fold data is realizable iff N >= 3")
        return RealizabilityVerdict(False, N, None, None, "maximal 2-fold data with N < 3 is not realizable")
    if ts.kind == SPLIT:
        if N >= 4:
            return RealizabilityVerdict(True, N, N - 2, True, "split data: embedded realization via d = N - 2")
        return RealizabilityVerdict(True, N, None, False, "split data is realized by its two sections")
    d = rank_r_degree(ts.r, N, d_max)
    if d is None:
        return RealizabilityVerdict(None, N, None, None,
                                    "no d with gcd(r,d)=1 and floor(2(d/r+1)) = N; criterion is only sufficient")
    note = "" if rep.total is None or rep.total == 2 * (d + ts.r) else (
        f"; the local model has {2 * (d + ts.r)} crossings per turn, the data {rep.total}")
    return RealizabilityVerdict(True, N, d, True, f"floor(2(d/r+1)) = N with d = {d}, gcd(r,d) = 1{note}")


@dataclass(frozen=True)
class TopologyPrediction:
    b0: int
    b1: int
    b2: int
    genus: int
    punctures: int
    immersed_points_allowed: int

    def to_json(self) -> dict:
        return {
            "betti": [self.b0, self.b1, self.b2],
            "genus": self.genus,
            "punctures": self.punctures,
            "immersed_points_allowed": self.immersed_points_allowed,
        }


def _case(case: str) -> str:
    c = case.upper()[:1] if case else ""
    if case in (MAXIMAL, SPLIT):
        c = "O" if case == MAXIMAL else "E"
    if c not in ("O", "E"):
        raise MultisectionError(f"case must be O or E, got {case!r}")
    return c


def topology_prediction(N: int, case: str) -> TopologyPrediction:
    c = _case(case)
    if (N % 2 == 1) != (c == "O"):
        raise ParityMismatch(f"N = {N} has the wrong parity for case {c}")
    if (c == "O" and N < 3) or (c == "E" and N < 4):
        raise NotRealizable(f"no embedded realization for N = {N} in case {c}")
    d = N - 2
    if c == "O":
        return TopologyPrediction(1, N - 3, 0, (N - 3) // 2, 1, d // 2)
    return TopologyPrediction(1, N - 3, 0, (N - 4) // 2, 2, d // 2)


def ext_prediction(N: int) -> Tuple[int, int, int]:
    if N < 3:
        raise NotRealizable(f"N = {N} < 3")
    return (1, N - 3, 0)


def tropical_conical_lagrangian(ts: TropicalMultiSection) -> ConicalLagrangian:
    """One stratum per lift cone: maximal lifts, ray lifts (from the gluing) and origin lifts."""
    _require_valid(ts)
    fan = ts.fan
    n = fan.n
    strata: List[Stratum] = []
    zero = LatticeVector(0, 0)
    perm, _ = monodromy(ts)
    n_origin = len(cycles(perm))
    for c in range(n_origin):
        strata.append(Stratum(fan.origin, zero, cone_perp_basis(fan.origin), f"o:{c}"))
    for g in ts.adjacency:
        ray = fan.rays[g.ray]
        m = ts.slope((g.ray - 1) % n, g.lower)
        strata.append(Stratum(ray, m, cone_perp_basis(ray), f"{ray.id}:{g.lower}->{g.upper}"))
    for l in ts.lifts:
        cone = fan.maximal_cones[l.cone]
        strata.append(Stratum(cone, l.slope, (), f"{cone.id}:{l.sheet}"))
    return ConicalLagrangian(tuple(strata))


# ---------------------------------------------------------------- JSON


def multisection_from_json(doc: Mapping) -> TropicalMultiSection:
    fan = fan_from_json(doc["fan"])
    r = int(doc.get("degree", 2))
    kind = doc.get("kind", MAXIMAL)
    lifts = tuple(
        Lift(int(l["cone"]), int(l["sheet"]), vec(l["slope"]), int(l.get("mult", 1)))
        for l in doc["lifts"]
    )
    if doc.get("adjacency"):
        adj = tuple(
            Glue(int(e["ray"]), int(p[0]), int(p[1])) for e in doc["adjacency"] for p in e["pairs"]
        )
    else:
        adj = default_adjacency(fan.n, r, kind)
    return TropicalMultiSection(fan, r, lifts, adj, kind)
