"""Exact rank-2 fans, toric divisors and their characters.

Everything here is integer arithmetic. Angular order of rays is decided by a
half-plane test followed by a cross-product sign, so no floating point angle
is ever compared.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cmp_to_key, lru_cache
from math import gcd
from typing import Dict, Iterable, List, Mapping, NamedTuple, Optional, Sequence, Tuple

from .errors import (
    FanError,
    NonMaximalCone,
    NonPrimitiveRay,
    NotCartier,
    NotComplete,
    ParallelRays,
)


class LatticeVector(NamedTuple):
    """A point of N = Z^2 or of its dual M."""

    x: int
    y: int

    def __add__(self, other):  # tuple concatenation is never what we want
        return LatticeVector(self.x + other[0], self.y + other[1])

    def __sub__(self, other):
        return LatticeVector(self.x - other[0], self.y - other[1])

    def __neg__(self):
        return LatticeVector(-self.x, -self.y)

    def scale(self, k: int) -> "LatticeVector":
        return LatticeVector(k * self.x, k * self.y)

    def pair(self, other) -> int:
        return self.x * other[0] + self.y * other[1]

    def cross(self, other) -> int:
        return self.x * other[1] - self.y * other[0]

    def is_primitive(self) -> bool:
        return gcd(abs(self.x), abs(self.y)) == 1

    def is_zero(self) -> bool:
        return self.x == 0 and self.y == 0


def vec(v) -> LatticeVector:
    """Coerce a pair of integers into a LatticeVector, rejecting non-integers."""
    if isinstance(v, LatticeVector):
        return v
    x, y = v
    if isinstance(x, bool) or isinstance(y, bool):
        raise TypeError("lattice coordinates must be integers")
    if int(x) != x or int(y) != y:
        raise TypeError(f"lattice coordinates must be integers, got {v!r}")
    return LatticeVector(int(x), int(y))


def _half(v: LatticeVector) -> int:
    # 0 for directions with angle in [0, pi), 1 for [pi, 2pi)
    return 0 if (v.y > 0 or (v.y == 0 and v.x > 0)) else 1


def ccw_compare(u: LatticeVector, v: LatticeVector) -> int:
    """Compare the angles of two nonzero vectors in [0, 2pi)."""
    hu, hv = _half(u), _half(v)
    if hu != hv:
        return -1 if hu < hv else 1
    c = u.cross(v)
    return -1 if c > 0 else (1 if c < 0 else 0)


def strictly_inside(w: LatticeVector, v1: LatticeVector, v2: LatticeVector) -> bool:
    """True if w lies in the open cone spanned by v1, v2 (counterclockwise, angle < pi)."""
    return v1.cross(w) > 0 and w.cross(v2) > 0


@dataclass(frozen=True)
class Cone:
    """A cone given by 0, 1 or 2 primitive generators listed counterclockwise."""

    generators: Tuple[LatticeVector, ...]
    id: str

    @property
    def dim(self) -> int:
        return len(self.generators)

    def contains_direction(self, w: LatticeVector) -> bool:
        if self.dim == 0:
            return w.is_zero()
        if self.dim == 1:
            g = self.generators[0]
            return g.cross(w) == 0 and g.pair(w) > 0
        v1, v2 = self.generators
        return v1.cross(w) >= 0 and w.cross(v2) >= 0


@dataclass(frozen=True)
class Fan:
    """A complete fan in Z^2.

    ``rays[i]`` is the ray cone for the i-th primitive generator in
    counterclockwise order starting from angle 0, and ``maximal_cones[i]`` is
    spanned by rays i and i+1 (indices mod n).
    """

    rays: Tuple[Cone, ...]
    maximal_cones: Tuple[Cone, ...]
    origin: Cone

    @property
    def ray_vectors(self) -> Tuple[LatticeVector, ...]:
        return tuple(c.generators[0] for c in self.rays)

    @property
    def n(self) -> int:
        return len(self.rays)

    @property
    def cones(self) -> Tuple[Cone, ...]:
        return (self.origin,) + self.rays + self.maximal_cones

    def ray_index(self, v) -> int:
        v = vec(v)
        for i, r in enumerate(self.ray_vectors):
            if r == v:
                return i
        raise FanError(f"{tuple(v)} is not a ray of this fan")

    def cone(self, key) -> Cone:
        """Look up a maximal cone by index, id or pair of generators."""
        if isinstance(key, Cone):
            if key in self.maximal_cones:
                return key
            key = key.generators
        if isinstance(key, int):
            return self.maximal_cones[key]
        if isinstance(key, str):
            for c in self.maximal_cones:
                if c.id == key:
                    return c
            raise FanError(f"no maximal cone with id {key!r}")
        gens = tuple(vec(g) for g in key)
        for c in self.maximal_cones:
            if c.generators == gens:
                return c
        raise NonMaximalCone(f"{gens} is not a maximal cone of this fan")

    def cone_index(self, key) -> int:
        return self.maximal_cones.index(self.cone(key))

    def cone_of_direction(self, w) -> int:
        """Index of a maximal cone containing the (nonzero) direction w."""
        w = vec(w)
        for i, c in enumerate(self.maximal_cones):
            if c.contains_direction(w):
                return i
        raise FanError("direction not covered; fan is not complete")  # pragma: no cover

    def to_json(self) -> dict:
        return {"rays": [list(v) for v in self.ray_vectors]}

    def __repr__(self):
        return f"Fan(rays={[tuple(v) for v in self.ray_vectors]})"


def build_fan(rays: Iterable) -> Fan:
    """Sort primitive rays counterclockwise and check that they span a complete fan."""
    vs = [vec(v) for v in rays]
    for v in vs:
        if v.is_zero():
            raise NonPrimitiveRay("zero vector is not a ray")
        if not v.is_primitive():
            raise NonPrimitiveRay(f"ray {tuple(v)} is not primitive")
    vs.sort(key=cmp_to_key(ccw_compare))
    for a, b in zip(vs, vs[1:]):
        if ccw_compare(a, b) == 0:
            raise ParallelRays(f"rays {tuple(a)} and {tuple(b)} are parallel")
    if len(vs) < 3:
        raise NotComplete("a complete rank-2 fan needs at least 3 rays")
    n = len(vs)
    for i in range(n):
        a, b = vs[i], vs[(i + 1) % n]
        if a.cross(b) <= 0:
            raise NotComplete(
                f"rays {tuple(a)} and {tuple(b)} bound a sector of angle >= pi"
            )
    ray_cones = tuple(Cone((v,), f"r{i}") for i, v in enumerate(vs))
    max_cones = tuple(Cone((vs[i], vs[(i + 1) % n]), f"s{i}") for i in range(n))
    return Fan(ray_cones, max_cones, Cone((), "o"))


def fan_from_json(doc: Mapping) -> Fan:
    rays = doc["rays"]
    for v in rays:
        if len(v) != 2:
            raise FanError("only rank-2 fans are supported")
    return build_fan(rays)


@lru_cache(maxsize=None)
def p2_fan() -> Fan:
    return build_fan([(1, 0), (0, 1), (-1, -1)])


@lru_cache(maxsize=None)
def cross_fan() -> Fan:
    return build_fan([(1, 0), (0, 1), (-1, 0), (0, -1)])


@lru_cache(maxsize=None)
def hexagon_fan() -> Fan:
    return build_fan([(1, 0), (1, 1), (0, 1), (-1, 0), (-1, -1), (0, -1)])


@dataclass(frozen=True)
class ToricDivisor:
    """D = sum k_rho D_rho, keyed by primitive ray vector."""

    coefficients: Tuple[Tuple[LatticeVector, int], ...] = ()

    @classmethod
    def of(cls, coeffs: Mapping | Iterable = ()) -> "ToricDivisor":
        items = coeffs.items() if isinstance(coeffs, Mapping) else coeffs
        acc: Dict[LatticeVector, int] = {}
        for v, k in items:
            v = vec(v)
            acc[v] = acc.get(v, 0) + int(k)
        return cls(tuple(sorted((v, k) for v, k in acc.items() if k != 0)))

    @classmethod
    def from_list(cls, fan: Fan, coeffs: Sequence[int]) -> "ToricDivisor":
        """Coefficients listed in the fan's counterclockwise ray order."""
        if len(coeffs) != fan.n:
            raise FanError(f"expected {fan.n} coefficients, got {len(coeffs)}")
        return cls.of(zip(fan.ray_vectors, coeffs))

    def k(self, ray) -> int:
        ray = vec(ray)
        for v, c in self.coefficients:
            if v == ray:
                return c
        return 0

    def __add__(self, other: "ToricDivisor") -> "ToricDivisor":
        return ToricDivisor.of(list(self.coefficients) + list(other.coefficients))

    def __neg__(self) -> "ToricDivisor":
        return ToricDivisor.of((v, -k) for v, k in self.coefficients)

    def scale(self, s: int) -> "ToricDivisor":
        return ToricDivisor.of((v, s * k) for v, k in self.coefficients)

    def is_zero(self) -> bool:
        return not self.coefficients


def solve_character(v1: LatticeVector, v2: LatticeVector, b1: int, b2: int) -> LatticeVector:
    """The m in M with <m, v1> = b1 and <m, v2> = b2, by Cramer's rule over Z."""
    det = v1.cross(v2)
    if det == 0:
        raise FanError("cone generators are linearly dependent")
    nx = b1 * v2.y - b2 * v1.y
    ny = b2 * v1.x - b1 * v2.x
    if nx % det or ny % det:
        raise NotCartier(
            f"no integral character with values ({b1},{b2}) on {tuple(v1)},{tuple(v2)}"
        )
    return LatticeVector(nx // det, ny // det)


def divisor_character(fan: Fan, D: ToricDivisor, sigma) -> LatticeVector:
    """Slope m_D(sigma) of the support function: <m, v_rho> = -k_rho on both rays of sigma."""
    if isinstance(sigma, Cone) and sigma.dim != 2:
        raise NonMaximalCone(f"cone {sigma.id} has dimension {sigma.dim}")
    cone = fan.cone(sigma)
    v1, v2 = cone.generators
    return solve_character(v1, v2, -D.k(v1), -D.k(v2))


def perp(v: LatticeVector) -> LatticeVector:
    """Primitive covector vanishing on v, oriented so that <perp(v), next ccw> > 0."""
    return LatticeVector(-v.y, v.x)


@dataclass(frozen=True)
class Stratum:
    """One piece (m + tau^perp + M) x (-tau) of a conical Lagrangian.

    ``perp_basis`` spans tau^perp over Z (two vectors for the origin cone, one
    for a ray, none for a maximal cone).  ``label`` identifies a lift when the
    stratum comes from a multi-section.
    """

    cone: Cone
    base: LatticeVector
    perp_basis: Tuple[LatticeVector, ...]
    label: Optional[str] = None

    def describe(self) -> str:
        gens = ", ".join(str(tuple(g)) for g in self.cone.generators) or "0"
        if not self.perp_basis:
            part = "M" if self.base.is_zero() else f"{tuple(self.base)} + M"
        elif len(self.perp_basis) == 2:
            part = "M_R"
        else:
            part = f"{tuple(self.base)} + R{tuple(self.perp_basis[0])} + M"
        return f"({part}) x -cone({gens})"

    def shifted(self, m: LatticeVector) -> "Stratum":
        return Stratum(self.cone, self.base + m, self.perp_basis, self.label)

    def key(self):
        """Canonical form: base reduced modulo the real span of tau^perp."""
        if len(self.perp_basis) == 2:
            b = (0, 0)
        elif len(self.perp_basis) == 1:
            ray = self.cone.generators[0]
            b = (self.base.pair(ray),)  # the coset is determined by <m, ray>
        else:
            b = tuple(self.base)
        return (self.cone.id, b)


@dataclass(frozen=True)
class ConicalLagrangian:
    strata: Tuple[Stratum, ...]

    def __len__(self):
        return len(self.strata)


def cone_perp_basis(cone: Cone) -> Tuple[LatticeVector, ...]:
    if cone.dim == 0:
        return (LatticeVector(1, 0), LatticeVector(0, 1))
    if cone.dim == 1:
        return (perp(cone.generators[0]),)
    return ()


def conical_lagrangian(fan: Fan) -> ConicalLagrangian:
    """The untwisted Lambda_Sigma: one stratum family per cone of the fan."""
    zero = LatticeVector(0, 0)
    return ConicalLagrangian(
        tuple(Stratum(c, zero, cone_perp_basis(c)) for c in fan.cones)
    )
