"""Stability of dimension-(1,...,1) representations and the toric fan."""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from itertools import combinations

from .model import DimerModel, DimerError, f_term_relations
from .matchings import (HomologyBasis, MatchingPoint, PerfectMatching, Polygon,
                        matching_points_and_polygon, point_on_hull_boundary,
                        polygon_double_area)
from .model import Vec2


class NonGenericTheta(DimerError):
    """Some candidate union is semistable but not stable."""


class Stability(Enum):
    STABLE = "stable"
    SEMISTABLE = "semistable-not-stable"
    UNSTABLE = "unstable"
    RELATION_VIOLATING = "relation-violating"


@dataclass(frozen=True)
class StabilityParam:
    theta: tuple[Fraction, ...]

    def __post_init__(self):
        if sum(self.theta) != 0:
            raise DimerError("stability parameter must sum to zero")

    def of(self, vertices) -> Fraction:
        return sum((self.theta[v] for v in vertices), Fraction(0))


def special_theta(nvertices: int) -> StabilityParam:
    """The distinguished parameter (1-n, 1, ..., 1): stability means every
    vertex is reachable from vertex 0."""
    return StabilityParam((Fraction(1 - nvertices),) + (Fraction(1),) * (nvertices - 1))


def _relations_hold(model: DimerModel, nonzero: frozenset[int],
                    relations: list | None = None) -> bool:
    rels = relations if relations is not None else f_term_relations(model)
    for r in rels:
        plus = all(a in nonzero for a in r.plus_path)
        minus = all(a in nonzero for a in r.minus_path)
        if plus != minus:
            return False
    return True


def _closed_subsets(model: DimerModel, nonzero: frozenset[int]):
    """Proper nonempty vertex subsets closed under nonzero arrows out of
    the subset (the subrepresentations of a (1,...,1) representation)."""
    n = model.nvertices
    out = [[] for _ in range(n)]
    for a in model.arrows:
        if a.id in nonzero:
            out[a.tail].append(a.head)
    for bits in range(1, 2 ** n - 1):
        S = [v for v in range(n) if bits >> v & 1]
        if all(h in S for v in S for h in out[v]):
            yield S


def is_stable_cosupport(model: DimerModel, cosupport: frozenset[int],
                        theta: StabilityParam,
                        relations: list | None = None) -> Stability:
    """Classify the 0/1 representation vanishing exactly on ``cosupport``."""
    nonzero = frozenset(a.id for a in model.arrows) - cosupport
    if not _relations_hold(model, nonzero, relations):
        return Stability.RELATION_VIOLATING
    strict = True
    for S in _closed_subsets(model, nonzero):
        val = theta.of(S)
        if val < 0:
            return Stability.UNSTABLE
        if val == 0:
            strict = False
    return Stability.STABLE if strict else Stability.SEMISTABLE


def stable_matchings(model: DimerModel, matchings: list[PerfectMatching],
                     theta: StabilityParam) -> list[PerfectMatching]:
    rels = f_term_relations(model)
    return [pm for pm in matchings
            if is_stable_cosupport(model, pm, theta, rels) is Stability.STABLE]


Cone = frozenset[int]  # set of ray indices


@dataclass(frozen=True)
class Fan:
    """Triangulated polygon = toric fan of the crepant resolution.

    Rays are indexed 0..R-1 in the canonical order: hull vertices
    counterclockwise starting from the bottom-most right-most one, then the
    remaining lattice points sorted.  Cones are frozensets of ray indices.
    """

    rays: tuple[MatchingPoint, ...]
    triangles: tuple[Cone, ...]
    edges: tuple[Cone, ...]
    polygon: Polygon
    compact_rays: frozenset[int]
    compact_edges: frozenset[Cone]

    def point(self, r: int) -> Vec2:
        return self.rays[r].point

    def ray_at(self, point: Vec2) -> int:
        for i, mp in enumerate(self.rays):
            if mp.point == point:
                return i
        raise KeyError(point)

    def matching(self, r: int) -> PerfectMatching:
        return self.rays[r].matching

    def all_cones(self) -> list[Cone]:
        return ([frozenset([r]) for r in range(len(self.rays))]
                + list(self.edges) + list(self.triangles))

    def cone_dim_of_orbit(self, cone: Cone) -> int:
        """Dimension of the torus orbit of ``cone`` (3 - |cone|)."""
        return 3 - len(cone)


def _tri_double_area(p: Vec2, q: Vec2, r: Vec2) -> int:
    return abs((q[0] - p[0]) * (r[1] - p[1]) - (q[1] - p[1]) * (r[0] - p[0]))


def build_fan(model: DimerModel, matchings: list[PerfectMatching],
              basis: HomologyBasis, theta: StabilityParam,
              anchor: Vec2 | None = None) -> Fan:
    """Fan of the moduli space: rays are the theta-stable matchings, maximal
    cones the ray triples whose matching union is again a stable cosupport.

    Genericity is verified: any semistable-not-stable candidate aborts.
    """
    rels = f_term_relations(model)
    stables = []
    for pm in matchings:
        st = is_stable_cosupport(model, pm, theta, rels)
        if st is Stability.SEMISTABLE:
            raise NonGenericTheta(f"non-generic stability parameter: matching "
                                  f"{sorted(pm)} is semistable but not stable")
        if st is Stability.STABLE:
            stables.append(pm)
    pts, polygon = matching_points_and_polygon(model, stables, basis, anchor)

    by_point: dict[Vec2, list[PerfectMatching]] = {}
    for mp in pts:
        by_point.setdefault(mp.point, []).append(mp.matching)
    for p, pms in by_point.items():
        if len(pms) > 1:
            raise DimerError(f"two distinct stable matchings at lattice point {p}; "
                             f"input dimer is not consistent")
    order = list(polygon.hull) + [p for p in sorted(by_point)
                                  if p not in polygon.hull]
    rays = tuple(MatchingPoint(by_point[p][0], p) for p in order)

    triangles = []
    for i, j, k in combinations(range(len(rays)), 3):
        union = rays[i].matching | rays[j].matching | rays[k].matching
        st = is_stable_cosupport(model, union, theta, rels)
        if st is Stability.SEMISTABLE:
            raise NonGenericTheta("non-generic stability parameter: a cone "
                                  "candidate is strictly semistable")
        if st is Stability.STABLE:
            triangles.append(frozenset((i, j, k)))

    # The triangles must form a unimodular triangulation of the polygon.
    total = 0
    for t in triangles:
        p, q, r = (rays[x].point for x in sorted(t))
        a2 = _tri_double_area(p, q, r)
        if a2 != 1:
            raise DimerError(f"cone {sorted(t)} is not unimodular (2*area={a2})")
        total += a2
    if total != polygon_double_area(polygon.hull):
        raise NonGenericTheta("stable cones do not triangulate the polygon; "
                              "non-generic stability parameter")

    edge_count: dict[Cone, int] = {}
    for t in triangles:
        for e in combinations(sorted(t), 2):
            edge_count[frozenset(e)] = edge_count.get(frozenset(e), 0) + 1
    for e, c in edge_count.items():
        if c > 2:
            raise DimerError(f"edge {sorted(e)} lies in {c} triangles")
        union = frozenset().union(*(rays[x].matching for x in e))
        if is_stable_cosupport(model, union, theta, rels) is not Stability.STABLE:
            raise DimerError(f"edge {sorted(e)} union is not a stable cosupport")

    hull = polygon.hull
    compact_rays = frozenset(r for r in range(len(rays))
                             if not point_on_hull_boundary(rays[r].point, hull))
    compact_edges = frozenset(
        e for e in edge_count
        if not _segment_on_hull(rays, e, hull))
    for e in compact_edges:
        if edge_count[e] != 2:
            raise DimerError(f"interior edge {sorted(e)} lies in {edge_count[e]} != 2 triangles")
    return Fan(rays, tuple(sorted(triangles, key=sorted)),
               tuple(sorted(edge_count, key=sorted)), polygon,
               compact_rays, compact_edges)


def _segment_on_hull(rays, e: Cone, hull) -> bool:
    from .matchings import _on_segment
    a, b = (rays[x].point for x in sorted(e))
    for i in range(len(hull)):
        h1, h2 = hull[i], hull[(i + 1) % len(hull)]
        if _on_segment(a, h1, h2) and _on_segment(b, h1, h2):
            return True
    return False


@dataclass(frozen=True)
class TorusInvariantModule:
    """0/1 representation attached to a cone: arrows of degree 0 on every
    ray of the cone are the nonzero ones."""

    cone: Cone
    nonzero_arrows: frozenset[int]


def orbit_module(model: DimerModel, fan: Fan, cone: Cone) -> TorusInvariantModule:
    cosupp = frozenset().union(*(fan.matching(r) for r in cone))
    nonzero = frozenset(a.id for a in model.arrows) - cosupp
    if not _relations_hold(model, nonzero):
        raise DimerError(f"orbit module of cone {sorted(cone)} violates a relation")
    return TorusInvariantModule(cone, nonzero)


def socle_vertices(model: DimerModel, module: TorusInvariantModule) -> frozenset[int]:
    """Sinks of the nonzero-arrow subquiver (vertices whose simple embeds)."""
    nonsinks = {model.arrows[a].tail for a in module.nonzero_arrows}
    return frozenset(range(model.nvertices)) - frozenset(nonsinks)


@dataclass(frozen=True)
class OriginFibre:
    """Components of the fibre over the singular point, by dimension."""

    cones_in_fibre: tuple[Cone, ...]
    components: tuple[Cone, ...]          # minimal cones = maximal orbit closures
    F1: tuple[Cone, ...]                  # 1-dimensional components (edges)
    F2: tuple[int, ...]                   # 2-dimensional components (rays)
    equidimensional: bool


def origin_fibre(model: DimerModel, fan: Fan) -> OriginFibre:
    """Orbits over the torus-invariant point: the module kills every arrow
    into vertex 0 (valid for the special parameter)."""
    into0 = frozenset(a.id for a in model.arrows if a.head == 0)
    in_fibre = []
    for cone in fan.all_cones():
        mod = orbit_module(model, fan, cone)
        if not (into0 & mod.nonzero_arrows):
            in_fibre.append(cone)
    fset = set(in_fibre)
    components = [c for c in in_fibre
                  if not any(o < c for o in fset)]
    F2 = tuple(sorted(next(iter(c)) for c in components if len(c) == 1))
    F1 = tuple(sorted((c for c in components if len(c) == 2), key=sorted))
    for r in F2:
        if r not in fan.compact_rays:
            raise DimerError(f"fibre contains non-compact divisor ray {r}")
    dims = {fan.cone_dim_of_orbit(c) for c in components}
    return OriginFibre(tuple(sorted(in_fibre, key=lambda c: (len(c), sorted(c)))),
                       tuple(sorted(components, key=lambda c: (len(c), sorted(c)))),
                       F1, F2, len(dims) <= 1)


def chart_section_path(model: DimerModel, fan: Fan, triangle: Cone, j: int) -> list[int]:
    """A path 0 -> j through arrows nonzero on the chart of ``triangle``:
    the local generator of the j-th tautological bundle there."""
    mod = orbit_module(model, fan, triangle)
    if j == 0:
        return []
    prev: dict[int, tuple[int, int]] = {0: (-1, -1)}
    frontier = [0]
    while frontier:
        nxt = []
        for v in frontier:
            for aid in sorted(mod.nonzero_arrows):
                a = model.arrows[aid]
                if a.tail != v or a.head in prev:
                    continue
                prev[a.head] = (v, aid)
                if a.head == j:
                    path = []
                    cur = j
                    while cur != 0:
                        cur, aa = prev[cur]
                        path.append(aa)
                    return list(reversed(path))
                nxt.append(a.head)
        frontier = nxt
    raise DimerError(f"no nonzero path from 0 to {j} on chart {sorted(triangle)}; "
                     f"stability is violated upstream")
