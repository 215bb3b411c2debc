"""Kaneyama rank-2 toric bundles on the projective plane.

E_{a,b,c} is the cokernel of O -> O(aD0) + O(bD1) + O(cD2), 1 -> (Z0^a, Z1^b, Z2^c).
At the fixed point of a maximal cone the component whose coordinate does not
vanish is invertible, so the fibre weights are the characters of the other two
summands.  Twisting by D shifts both weights by m_D(sigma); dualizing negates
them before the twist is applied.

Homogeneous coordinates: D0 is the ray (-1,-1), D1 is (1,0), D2 is (0,1).
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

from .errors import AmbiguousMatch, GluingInconsistent, NotInFamily, NotP2Fan
from .fan import Fan, LatticeVector, ToricDivisor, divisor_character, p2_fan, vec
from .multisection import (
    MAXIMAL,
    TropicalMultiSection,
    ext_prediction,
    from_sheets,
    genericity_count,
    glue_by_continuity,
    realizability,
    topology_prediction,
    validate,
)

D0 = LatticeVector(-1, -1)
D1 = LatticeVector(1, 0)
D2 = LatticeVector(0, 1)
HOMOGENEOUS_RAYS = (D0, D1, D2)


def divisor(k0: int = 0, k1: int = 0, k2: int = 0) -> ToricDivisor:
    """k0 D0 + k1 D1 + k2 D2 on the P^2 fan."""
    return ToricDivisor.of({D0: k0, D1: k1, D2: k2})


def ray_coeffs(D: ToricDivisor) -> Tuple[int, int, int]:
    return (D.k(D0), D.k(D1), D.k(D2))


@dataclass(frozen=True)
class KaneyamaBundle:
    a: int
    b: int
    c: int
    twist: ToricDivisor = field(default_factory=ToricDivisor)
    dual: bool = False

    def __post_init__(self):
        if min(self.a, self.b, self.c) < 1:
            raise ValueError(f"a, b, c must be positive, got {(self.a, self.b, self.c)}")
        extra = [v for v, _ in self.twist.coefficients if v not in HOMOGENEOUS_RAYS]
        if extra:
            raise NotP2Fan(f"twist divisor uses rays {extra} outside the P^2 fan")

    def twisted(self, D: ToricDivisor) -> "KaneyamaBundle":
        return KaneyamaBundle(self.a, self.b, self.c, self.twist + D, self.dual)

    def to_json(self) -> dict:
        return {
            "family": "kaneyama",
            "a": self.a,
            "b": self.b,
            "c": self.c,
            "twist": {"ray_coeffs": list(ray_coeffs(self.twist))},
            "dual": self.dual,
        }

    @classmethod
    def from_json(cls, doc: Mapping) -> "KaneyamaBundle":
        k = doc.get("twist", {}).get("ray_coeffs", [0, 0, 0])
        return cls(int(doc["a"]), int(doc["b"]), int(doc["c"]), divisor(*k), bool(doc.get("dual", False)))

    def __str__(self):
        name = "E*" if self.dual else "E"
        tw = ray_coeffs(self.twist)
        if not any(tw):
            return f"{name}_({self.a},{self.b},{self.c})"
        terms = "".join(f"{k:+d}D{i}" for i, k in enumerate(tw) if k).lstrip("+")
        return f"{name}_({self.a},{self.b},{self.c})({terms})"


def _check_p2(fan: Fan):
    if set(fan.ray_vectors) != set(HOMOGENEOUS_RAYS):
        raise NotP2Fan(f"expected the P^2 fan, got rays {[tuple(v) for v in fan.ray_vectors]}")


@lru_cache(maxsize=None)
def _unit_characters(fan: Fan, j: int) -> Tuple[Tuple[LatticeVector, LatticeVector], ...]:
    """(ray, m_{D_ray}(sigma_j)) for the two rays of sigma_j."""
    cone = fan.maximal_cones[j]
    return tuple((v, divisor_character(fan, ToricDivisor.of({v: 1}), j)) for v in cone.generators)


def fixed_point_characters(kb: KaneyamaBundle, sigma, fan: Optional[Fan] = None) -> Tuple[LatticeVector, LatticeVector]:
    """Torus weights of the fibre at the fixed point of sigma, sorted lexicographically."""
    fan = fan or p2_fan()
    _check_p2(fan)
    j = fan.cone_index(sigma)
    summands = {D0: kb.a, D1: kb.b, D2: kb.c}
    shift = divisor_character(fan, kb.twist, j)
    sign = -1 if kb.dual else 1
    out = [unit.scale(sign * summands[ray]) + shift for ray, unit in _unit_characters(fan, j)]
    return tuple(sorted(out))


def kaneyama_tropicalize(kb: KaneyamaBundle) -> TropicalMultiSection:
    fan = p2_fan()
    table = [list(fixed_point_characters(kb, j, fan)) for j in range(fan.n)]
    adj = glue_by_continuity(fan, table)
    if adj is None:
        raise GluingInconsistent(f"weights of {kb} do not glue across the rays")
    ts = from_sheets(fan, table, MAXIMAL, adj)
    rep = validate(ts)
    if not rep.ok:
        raise GluingInconsistent("; ".join(v.message for v in rep.violations))
    return ts


def _slope_sets(ts: TropicalMultiSection) -> List[Tuple[LatticeVector, ...]]:
    """Per-cone sorted slope tuples, cones listed by their generator pair (label-free)."""
    out = {}
    for j, cone in enumerate(ts.fan.maximal_cones):
        out[frozenset(cone.generators)] = tuple(sorted(l.slope for l in ts.lifts_over(j)))
    return [out[k] for k in sorted(out, key=lambda s: sorted(s))]


def same_tropical_data(s: TropicalMultiSection, t: TropicalMultiSection) -> bool:
    """Equality up to relabeling of sheets (the gluing is forced by continuity once slopes differ)."""
    return s.kind == t.kind and s.r == t.r and _slope_sets(s) == _slope_sets(t)


def _solve(ts: TropicalMultiSection, dual: bool) -> Optional[KaneyamaBundle]:
    fan = ts.fan
    W = [sorted(l.slope for l in ts.lifts_over(j)) for j in range(fan.n)]
    if any(len(w) != 2 for w in W):
        return None
    # the untwisted differences are +-(-b, c), +-(a-c, c), +-(b, a-b) in the three charts
    idx = {frozenset(c.generators): j for j, c in enumerate(fan.maximal_cones)}
    j0 = idx[frozenset((D1, D2))]
    j2 = idx[frozenset((D0, D1))]
    d0 = W[j0][0] - W[j0][1]
    d2 = W[j2][0] - W[j2][1]
    b, c = abs(d0.x), abs(d0.y)
    if b < 1 or c < 1 or abs(d2.x) != b:
        return None
    eps = d2.x // b
    a = b + eps * d2.y
    if a < 1:
        return None
    s = -1 if dual else 1
    base = KaneyamaBundle(a, b, c, ToricDivisor(), dual)
    shifts = []
    for j in range(fan.n):
        w = fixed_point_characters(base, j, fan)
        tot = (W[j][0] + W[j][1]) - (w[0] + w[1])
        if tot.x % 2 or tot.y % 2:
            return None
        shifts.append(LatticeVector(tot.x // 2, tot.y // 2))
    # recover D from the characters of two charts: <m_D(sigma), v> = -k_v
    k = {}
    for j, cone in enumerate(fan.maximal_cones):
        for v in cone.generators:
            val = -shifts[j].pair(v)
            if k.setdefault(v, val) != val:
                return None
    cand = KaneyamaBundle(a, b, c, ToricDivisor.of(k), dual)
    return cand if same_tropical_data(kaneyama_tropicalize(cand), ts) else None


def rigidity_invert(ts: TropicalMultiSection, dual: Optional[bool] = None) -> KaneyamaBundle:
    """Recover (a, b, c, D, dual) from tropical data.

    E*_{a,b,c}(D + aD0 + bD1 + cD2) and E_{a,b,c}(D) are isomorphic and share
    their tropical data, so the dual flag is a choice of representative.  With
    ``dual=None`` the non-dual representative is returned.
    """
    _check_p2(ts.fan)
    if ts.r != 2 or ts.kind != MAXIMAL or not validate(ts).ok:
        raise NotInFamily("the Kaneyama family has valid maximal 2-fold tropical data")
    flags = [False, True] if dual is None else [bool(dual)]
    hits = [h for h in (_solve(ts, f) for f in flags) if h is not None]
    if not hits:
        raise NotInFamily("no Kaneyama bundle has these slopes")
    if len(hits) == 2 and dual_twin(hits[0]) != hits[1]:
        raise AmbiguousMatch(f"{hits[0]} and {hits[1]} share tropical data but are not isomorphic")
    return hits[0]


def dual_twin(kb: KaneyamaBundle) -> KaneyamaBundle:
    """The representative with the other dual flag: E(D) = E*(D + aD0 + bD1 + cD2)."""
    det = divisor(kb.a, kb.b, kb.c)
    shift = det if not kb.dual else -det
    return KaneyamaBundle(kb.a, kb.b, kb.c, kb.twist + shift, not kb.dual)


@dataclass(frozen=True)
class MirrorSummary:
    bundle: KaneyamaBundle
    N: int
    d: int
    genus: int
    betti: Tuple[int, int, int]
    ext: Tuple[int, int, int]
    simply_connected: bool
    exact: bool

    def to_json(self) -> dict:
        return {
            "bundle": self.bundle.to_json(),
            "N": self.N,
            "d": self.d,
            "genus": self.genus,
            "betti": list(self.betti),
            "ext": list(self.ext),
            "simply_connected": self.simply_connected,
            "exact": self.exact,
        }


def mirror_summary(kb: KaneyamaBundle) -> MirrorSummary:
    ts = kaneyama_tropicalize(kb)
    rep = genericity_count(ts)
    verdict = realizability(ts, rep)
    topo = topology_prediction(rep.N, "O")
    betti = (topo.b0, topo.b1, topo.b2)
    sc = topo.b1 == 0 and topo.genus == 0
    # a simply connected Lagrangian has H^1 = 0, so it is exact
    return MirrorSummary(kb, rep.N, verdict.d, topo.genus, betti, ext_prediction(rep.N), sc, sc)
