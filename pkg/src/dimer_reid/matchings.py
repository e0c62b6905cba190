"""Perfect matchings, degree functions, lattice points and the polygon."""

from __future__ import annotations

from dataclasses import dataclass

from .model import DimerModel, DimerError, WeakPath, Vec2, vadd, vneg

PerfectMatching = frozenset[int]


@dataclass(frozen=True)
class HomologyBasis:
    """Weak cycles at vertex 0 spanning the torus homology, plus a boundary
    cycle through 0 (the central element; every matching has degree 1 on it)."""

    x_path: WeakPath
    y_path: WeakPath
    z_cycle: WeakPath


@dataclass(frozen=True)
class MatchingPoint:
    matching: PerfectMatching
    point: Vec2  # third lattice coordinate is always 1


@dataclass(frozen=True)
class Polygon:
    """Height-1 slice of the lattice cone, translation-normalized.

    ``hull`` lists hull vertices counterclockwise starting from the
    bottom-most, then right-most one; ``interior`` and
    ``boundary_nonvertex`` are sorted.
    """

    hull: tuple[Vec2, ...]
    interior: tuple[Vec2, ...]
    boundary_nonvertex: tuple[Vec2, ...]

    @property
    def lattice_points(self) -> tuple[Vec2, ...]:
        return tuple(sorted(set(self.hull) | set(self.interior) | set(self.boundary_nonvertex)))


def enumerate_perfect_matchings(model: DimerModel) -> list[PerfectMatching]:
    """All arrow subsets meeting each face boundary exactly once.

    Exact cover search: faces are the constraints, an arrow covers its two
    faces.  Result sorted by arrow-id tuple.
    """
    nfaces = len(model.faces)
    face_arrows = [sorted(set(f.boundary)) for f in model.faces]
    arrow_faces = {a.id: frozenset(model.faces_of_arrow(a.id)) for a in model.arrows}
    results: list[PerfectMatching] = []
    chosen: list[int] = []

    def cover(open_faces: frozenset[int], forbidden: frozenset[int]) -> None:
        if not open_faces:
            results.append(frozenset(chosen))
            return
        f = min(open_faces, key=lambda i: sum(1 for a in face_arrows[i] if a not in forbidden))
        for a in face_arrows[f]:
            if a in forbidden:
                continue
            fa = arrow_faces[a]
            if not fa <= open_faces:
                continue
            chosen.append(a)
            newly_forbidden = frozenset(
                b for g in fa for b in face_arrows[g]) - forbidden
            cover(open_faces - fa, forbidden | newly_forbidden)
            chosen.pop()

    cover(frozenset(range(nfaces)), frozenset())
    return sorted(results, key=lambda s: tuple(sorted(s)))


def weak_path_degree(pm: PerfectMatching, path: WeakPath) -> int:
    """Sum over steps of exponent * (arrow in matching)."""
    return sum(exp for aid, exp in path if aid in pm)


def _cover_search(model: DimerModel, target: Vec2) -> WeakPath:
    """BFS in the universal-cover quiver from (0,(0,0)) to (0, target),
    traversing arrows in both directions within a bounded window."""
    bound = len(model.arrows)
    start = (0, 0, 0)
    goal = (0, target[0], target[1])
    if start == goal:
        return ()
    steps: list[tuple[int, int, int, int, int]] = []  # (aid, exp, src, dx, dy)
    for a in model.arrows:
        steps.append((a.id, 1, a.tail, a.wind[0], a.wind[1]))
        steps.append((a.id, -1, a.head, -a.wind[0], -a.wind[1]))
    steps.sort()
    prev: dict[tuple[int, int, int], tuple[tuple[int, int, int], int, int]] = {start: (start, -1, 0)}
    frontier = [start]
    while frontier:
        nxt = []
        for state in frontier:
            v, dx, dy = state
            for aid, exp, src, wx, wy in steps:
                if src != v:
                    continue
                arr = model.arrows[aid]
                nv = arr.head if exp == 1 else arr.tail
                ns = (nv, dx + wx, dy + wy)
                if abs(ns[1]) > bound or abs(ns[2]) > bound or ns in prev:
                    continue
                prev[ns] = (state, aid, exp)
                if ns == goal:
                    path: list[tuple[int, int]] = []
                    cur = ns
                    while cur != start:
                        cur, aid2, exp2 = prev[cur]
                        path.append((aid2, exp2))
                    return tuple(reversed(path))
                nxt.append(ns)
        frontier = nxt
    raise DimerError(f"no weak cycle at vertex 0 with winding {target} "
                     f"within window {bound}; winding data may be corrupt")


def homology_basis(model: DimerModel) -> HomologyBasis:
    """x/y weak cycles at vertex 0 of winding (1,0)/(0,1), and a boundary
    cycle through 0 (first -1 face through 0, rotated to start there)."""
    x_path = _cover_search(model, (1, 0))
    y_path = _cover_search(model, (0, 1))
    z_cycle = None
    for f in model.faces:
        if f.sign != -1:
            continue
        tails = [model.arrows[a].tail for a in f.boundary]
        if 0 in tails:
            k = tails.index(0)
            b = f.boundary
            z_cycle = tuple((b[(k + j) % len(b)], 1) for j in range(len(b)))
            break
    if z_cycle is None:
        raise DimerError("no -1 face passes through vertex 0")
    return HomologyBasis(x_path, y_path, z_cycle)


def convex_hull(points: list[Vec2]) -> list[Vec2]:
    """Integer convex hull, counterclockwise, no collinear vertices
    (monotone chain)."""
    pts = sorted(set(points))
    if len(pts) <= 2:
        return pts

    def cross(o: Vec2, a: Vec2, b: Vec2) -> int:
        return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])

    lower: list[Vec2] = []
    for p in pts:
        while len(lower) >= 2 and cross(lower[-2], lower[-1], p) <= 0:
            lower.pop()
        lower.append(p)
    upper: list[Vec2] = []
    for p in reversed(pts):
        while len(upper) >= 2 and cross(upper[-2], upper[-1], p) <= 0:
            upper.pop()
        upper.append(p)
    return lower[:-1] + upper[:-1]


def _on_segment(p: Vec2, a: Vec2, b: Vec2) -> bool:
    cross = (b[0] - a[0]) * (p[1] - a[1]) - (b[1] - a[1]) * (p[0] - a[0])
    if cross != 0:
        return False
    return min(a[0], b[0]) <= p[0] <= max(a[0], b[0]) and min(a[1], b[1]) <= p[1] <= max(a[1], b[1])


def point_on_hull_boundary(p: Vec2, hull: tuple[Vec2, ...]) -> bool:
    return any(_on_segment(p, hull[i], hull[(i + 1) % len(hull)]) for i in range(len(hull)))


def matching_points_and_polygon(
    model: DimerModel,
    matchings: list[PerfectMatching],
    basis: HomologyBasis,
    anchor: Vec2 | None = None,
) -> tuple[list[MatchingPoint], Polygon]:
    """Lattice points of all matchings and the translation-normalized polygon.

    By default the polygon is translated so the bounding box corner of its
    hull sits at the origin; with ``anchor`` given, so that the
    lexicographically smallest hull vertex sits at ``anchor``.
    """
    raw = [(pm, (weak_path_degree(pm, basis.x_path), weak_path_degree(pm, basis.y_path)))
           for pm in matchings]
    pts = [p for _, p in raw]
    hull = convex_hull(pts)
    if len(hull) <= 2:
        raise DimerError("matching points are collinear; degenerate model")
    if anchor is None:
        minx = min(p[0] for p in hull)
        miny = min(p[1] for p in hull)
        shift = (-minx, -miny)
    else:
        lo = min(hull)
        shift = (anchor[0] - lo[0], anchor[1] - lo[1])
    moved = [MatchingPoint(pm, vadd(p, shift)) for pm, p in raw]
    hull_moved = [vadd(p, shift) for p in hull]
    # Rotate hull to start from the bottom-most, right-most vertex.
    start = min(range(len(hull_moved)), key=lambda i: (hull_moved[i][1], -hull_moved[i][0]))
    hull_cyc = tuple(hull_moved[start:] + hull_moved[:start])
    allpts = sorted({mp.point for mp in moved})
    interior = tuple(p for p in allpts if not point_on_hull_boundary(p, hull_cyc))
    bnv = tuple(p for p in allpts if point_on_hull_boundary(p, hull_cyc) and p not in hull_cyc)
    return moved, Polygon(hull_cyc, interior, bnv)


def polygon_double_area(hull: tuple[Vec2, ...]) -> int:
    s = 0
    for i in range(len(hull)):
        x1, y1 = hull[i]
        x2, y2 = hull[(i + 1) % len(hull)]
        s += x1 * y2 - x2 * y1
    return abs(s)


def matchings_report(points: list[MatchingPoint], polygon: Polygon) -> dict:
    return {
        "matchings": [
            {"matching": sorted(mp.matching), "point": list(mp.point)}
            for mp in sorted(points, key=lambda mp: tuple(sorted(mp.matching)))
        ],
        "polygon": {
            "hull": [list(p) for p in polygon.hull],
            "interior": [list(p) for p in polygon.interior],
            "boundary_nonvertex": [list(p) for p in polygon.boundary_nonvertex],
        },
    }
