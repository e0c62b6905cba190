"""Torus-invariant divisors over the fan rays: labels, classes, curves."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

from .model import DimerModel, DimerError, WeakPath, Vec2
from .moduli import Cone, Fan


@dataclass(frozen=True)
class TorusDivisor:
    """Integer coefficient vector indexed by the fan rays."""

    coeffs: tuple[int, ...]

    def __add__(self, other: "TorusDivisor") -> "TorusDivisor":
        return TorusDivisor(tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    def __sub__(self, other: "TorusDivisor") -> "TorusDivisor":
        return TorusDivisor(tuple(a - b for a, b in zip(self.coeffs, other.coeffs)))

    def __neg__(self) -> "TorusDivisor":
        return TorusDivisor(tuple(-a for a in self.coeffs))

    def is_zero(self) -> bool:
        return all(a == 0 for a in self.coeffs)

    def is_effective(self) -> bool:
        return all(a >= 0 for a in self.coeffs)

    def support(self) -> frozenset[int]:
        return frozenset(i for i, a in enumerate(self.coeffs) if a != 0)


def zero_divisor(fan: Fan) -> TorusDivisor:
    return TorusDivisor((0,) * len(fan.rays))


def prime_divisor(fan: Fan, ray: int) -> TorusDivisor:
    c = [0] * len(fan.rays)
    c[ray] = 1
    return TorusDivisor(tuple(c))


def divisor_lcm(*divs: TorusDivisor) -> TorusDivisor:
    return TorusDivisor(tuple(max(cs) for cs in zip(*(d.coeffs for d in divs))))


def divisor_gcd(*divs: TorusDivisor) -> TorusDivisor:
    return TorusDivisor(tuple(min(cs) for cs in zip(*(d.coeffs for d in divs))))


def divisor_difference(d: TorusDivisor, e: TorusDivisor,
                       require_effective: bool = True) -> TorusDivisor:
    out = d - e
    if require_effective and not out.is_effective():
        raise DimerError("divisor difference is not effective")
    return out


def contains(fan: Fan, ray: int, d: TorusDivisor) -> bool:
    """E_ray <= d at support level (coefficient at least one)."""
    return d.coeffs[ray] >= 1


def arrow_label(model: DimerModel, fan: Fan, a: int) -> TorusDivisor:
    """Divisor of zeroes of the tautological section of an arrow:
    coefficient 1 exactly on the rays whose stable matching contains it."""
    return TorusDivisor(tuple(1 if a in fan.matching(r) else 0
                              for r in range(len(fan.rays))))


def path_label(model: DimerModel, fan: Fan, path: WeakPath) -> TorusDivisor:
    out = zero_divisor(fan)
    for aid, exp in path:
        lab = arrow_label(model, fan, aid)
        out = out + lab if exp == 1 else out - lab
    return out


def _ray_vector(fan: Fan, r: int) -> tuple[int, int, int]:
    p = fan.point(r)
    return (p[0], p[1], 1)


def is_principal(fan: Fan, d: TorusDivisor) -> bool:
    """Whether d = (<n_rho, m>)_rho for some m in the rank-3 lattice.

    Exact: solve three independent rays for m over Q, then check m is
    integral and matches every ray.
    """
    rays = [_ray_vector(fan, r) for r in range(len(fan.rays))]
    for trip in combinations(range(len(rays)), 3):
        a = [rays[t] for t in trip]
        det = (a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1])
               - a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0])
               + a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0]))
        if det == 0:
            continue
        b = [Fraction(d.coeffs[t]) for t in trip]
        m = _solve3(a, b)
        if any(x.denominator != 1 for x in m):
            return False
        return all(sum(rv[k] * int(m[k]) for k in range(3)) == d.coeffs[r]
                   for r, rv in enumerate(rays))
    raise DimerError("fan rays do not span the lattice")


def _solve3(a, b):
    """Cramer solve of a 3x3 integer system with Fraction right-hand side."""
    def det3(m):
        return (m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
                - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
                + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]))
    D = det3(a)
    cols = []
    for k in range(3):
        mk = [[a[i][j] if j != k else b[i] for j in range(3)] for i in range(3)]
        cols.append(Fraction(det3(mk), 1) / D)
    return cols


@dataclass(frozen=True)
class LineBundleClass:
    """Divisor class modulo the principal lattice of the fan."""

    fan: Fan
    representative: TorusDivisor

    def same_class(self, other: "LineBundleClass") -> bool:
        return is_principal(self.fan, self.representative - other.representative)


def line_bundle_class(model: DimerModel, fan: Fan, i: int) -> LineBundleClass:
    """Class of the i-th tautological bundle: label of any weak path 0 -> i."""
    path = _double_quiver_path(model, 0, i)
    return LineBundleClass(fan, path_label(model, fan, path))


def _double_quiver_path(model: DimerModel, src: int, dst: int) -> WeakPath:
    if src == dst:
        return ()
    prev: dict[int, tuple[int, int, int]] = {src: (-1, -1, 0)}
    frontier = [src]
    steps = []
    for a in model.arrows:
        steps.append((a.id, 1, a.tail, a.head))
        steps.append((a.id, -1, a.head, a.tail))
    steps.sort()
    while frontier:
        nxt = []
        for v in frontier:
            for aid, exp, s, t in steps:
                if s != v or t in prev:
                    continue
                prev[t] = (v, aid, exp)
                if t == dst:
                    path = []
                    cur = dst
                    while cur != src:
                        cur, aa, ee = prev[cur]
                        path.append((aa, ee))
                    return tuple(reversed(path))
                nxt.append(t)
        frontier = nxt
    raise DimerError(f"no weak path {src} -> {dst}; quiver disconnected")


@dataclass(frozen=True)
class OrbitClosure:
    """V(cone): reduced orbit closure; dim = 3 - |cone| - 1 in the fibre of
    compact strata (rays give divisors, edges curves, triangles points)."""

    cone: Cone

    @property
    def dim(self) -> int:
        return 3 - len(self.cone)


def common_zero_support(fan: Fan, divisors: list[TorusDivisor]) -> frozenset[Cone]:
    """Minimal cones whose orbits lie in the common zero locus of the
    divisors: every divisor must be positive on some ray of the cone."""
    if not divisors:
        raise DimerError("common_zero_support needs at least one divisor")
    hit = []
    for cone in fan.all_cones():
        if all(any(d.coeffs[r] >= 1 for r in cone) for d in divisors):
            hit.append(cone)
    hs = set(hit)
    return frozenset(c for c in hit if not any(o < c for o in hs))


@dataclass(frozen=True)
class CurveData:
    """Compact torus curve of an interior edge, with its wall relation
    u1 + u2 = a v1 + b v2 and the divisor intersection numbers."""

    edge: Cone
    opposite: tuple[int, int]
    relation: tuple[int, int]                # (a, b) against sorted edge rays
    intersections: tuple[int, ...]           # E_rho . C for every ray


def curve_intersection_data(fan: Fan, edge: Cone) -> CurveData:
    if edge not in fan.compact_edges:
        raise DimerError(f"edge {sorted(edge)} is not a compact curve")
    tris = [t for t in fan.triangles if edge < t]
    if len(tris) != 2:
        raise DimerError(f"interior edge {sorted(edge)} is not in exactly two triangles")
    u1, u2 = (next(iter(t - edge)) for t in tris)
    v1, v2 = sorted(edge)
    p1, p2 = fan.point(v1), fan.point(v2)
    q = (fan.point(u1)[0] + fan.point(u2)[0], fan.point(u1)[1] + fan.point(u2)[1])
    det = p1[0] * p2[1] - p1[1] * p2[0]
    # Solve q = a p1 + b p2 together with a + b = 2 (all points at height 1).
    if det != 0:
        a_num = q[0] * p2[1] - q[1] * p2[0]
        b_num = p1[0] * q[1] - p1[1] * q[0]
        if a_num % det or b_num % det:
            raise DimerError("edge relation is not integral")
        a, b = a_num // det, b_num // det
    else:
        # p1, p2 collinear with origin cannot happen at height 1 unless equal.
        raise DimerError("degenerate edge")
    if a + b != 2:
        raise DimerError(f"edge relation a+b = {a + b}, expected 2")
    inter = [0] * len(fan.rays)
    inter[u1] += 1
    inter[u2] += 1
    inter[v1] -= a
    inter[v2] -= b
    return CurveData(edge, (min(u1, u2), max(u1, u2)), (a, b), tuple(inter))


def bundle_degree_on_curve(cls: LineBundleClass, curve: CurveData) -> int:
    return sum(c * e for c, e in zip(cls.representative.coeffs, curve.intersections))


def is_minus1_minus1(curve: CurveData) -> bool:
    return curve.relation == (1, 1)


def labels_report(model: DimerModel, fan: Fan) -> dict:
    """Per-arrow sorted ray lists, 1-based to match the usual compact
    notation ("34" -> [3, 4])."""
    rows = []
    for a in model.arrows:
        lab = arrow_label(model, fan, a.id)
        rows.append({"id": a.id, "tail": a.tail, "head": a.head,
                     "label": [r + 1 for r in sorted(lab.support())]})
    return {
        "rays": [{"index": r + 1, "point": list(fan.point(r))} for r in range(len(fan.rays))],
        "arrows": rows,
    }
