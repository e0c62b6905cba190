"""Dimer models on the two-torus: quiver, faces, relations, rotations.

A dimer model is stored combinatorially: a quiver whose arrows carry an
integer winding (the homology contribution of the arrow's lift relative to
chosen vertex lifts) and whose oriented faces are arrow cycles.  No
floating-point geometry is used anywhere; optional vertex positions are
carried only for drawing.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence


class DimerError(Exception):
    """Raised when a document or model violates the dimer axioms."""


Vec2 = tuple[int, int]


def vadd(u: Vec2, v: Vec2) -> Vec2:
    return (u[0] + v[0], u[1] + v[1])


def vneg(u: Vec2) -> Vec2:
    return (-u[0], -u[1])


@dataclass(frozen=True)
class Arrow:
    """Quiver arrow with its torus-homology winding."""

    id: int
    tail: int
    head: int
    wind: Vec2


@dataclass(frozen=True)
class Face:
    """Oriented face: sign +1 (anticlockwise) or -1, boundary an arrow cycle."""

    sign: int
    boundary: tuple[int, ...]


@dataclass(frozen=True)
class FTermRelation:
    """The two complementary boundary paths p+ - p- attached to an arrow.

    Both paths run from head(arrow) to tail(arrow) in traversal order.
    """

    arrow: int
    plus_path: tuple[int, ...]
    minus_path: tuple[int, ...]


# A weak path is a sequence of (arrow id, exponent) steps in the double quiver.
WeakPath = tuple[tuple[int, int], ...]


@dataclass(frozen=True)
class DimerModel:
    """Immutable dimer model: vertex count, arrows, signed faces.

    Vertex ids are 0..nvertices-1 with 0 the distinguished vertex.
    ``positions`` (and ``period``) are optional drawing hints, never used by
    any computation.
    """

    nvertices: int
    arrows: tuple[Arrow, ...]
    faces: tuple[Face, ...]
    positions: dict[int, tuple[float, float]] | None = field(default=None, compare=False)
    period: float | None = field(default=None, compare=False)

    def arrow(self, a: int) -> Arrow:
        return self.arrows[a]

    def out_arrows(self, v: int) -> list[int]:
        return [a.id for a in self.arrows if a.tail == v]

    def in_arrows(self, v: int) -> list[int]:
        return [a.id for a in self.arrows if a.head == v]

    def faces_of_arrow(self, a: int) -> list[int]:
        return [i for i, f in enumerate(self.faces) if a in f.boundary]

    def path_endpoints(self, path: WeakPath) -> tuple[int, int]:
        """(tail, head) of a weak path; raises if the steps do not chain."""
        if not path:
            raise DimerError("empty weak path has no endpoints")
        cur = None
        tail = None
        for aid, exp in path:
            arr = self.arrows[aid]
            s, t = (arr.tail, arr.head) if exp == 1 else (arr.head, arr.tail)
            if cur is None:
                tail = s
            elif cur != s:
                raise DimerError(f"weak path does not chain at arrow {aid}")
            cur = t
        assert tail is not None and cur is not None
        return tail, cur

    def path_winding(self, path: WeakPath) -> Vec2:
        w = (0, 0)
        for aid, exp in path:
            wa = self.arrows[aid].wind
            w = vadd(w, wa if exp == 1 else vneg(wa))
        return w


def _face_chains(model: DimerModel, f: Face) -> bool:
    b = f.boundary
    return all(model.arrows[b[k]].head == model.arrows[b[(k + 1) % len(b)]].tail
               for k in range(len(b)))


def validate_dimer(model: DimerModel) -> list[str]:
    """Return a list of diagnostics; empty iff all dimer invariants hold."""
    diags: list[str] = []
    n = model.nvertices
    if n <= 0:
        return ["vertex count must be positive"]
    for i, a in enumerate(model.arrows):
        if a.id != i:
            diags.append(f"arrow ids must be dense and sorted; slot {i} holds id {a.id}")
        if not (0 <= a.tail < n and 0 <= a.head < n):
            diags.append(f"arrow {a.id} has endpoint outside 0..{n - 1}")
    if diags:
        return diags

    # Two-face condition, one occurrence per sign class.
    for a in model.arrows:
        occ = {1: 0, -1: 0}
        for f in model.faces:
            c = f.boundary.count(a.id)
            if c > 1:
                diags.append(f"arrow {a.id} occurs {c} times in one face boundary")
            occ[f.sign] += c
        if occ[1] != 1:
            diags.append(f"arrow {a.id} has two +1 faces" if occ[1] > 1
                         else f"arrow {a.id} is missing a +1 face")
        if occ[-1] != 1:
            diags.append(f"arrow {a.id} has two -1 faces" if occ[-1] > 1
                         else f"arrow {a.id} is missing a -1 face")

    for i, f in enumerate(model.faces):
        if f.sign not in (1, -1):
            diags.append(f"face {i} has sign {f.sign}, expected +1 or -1")
        if len(f.boundary) < 3:
            diags.append(f"face {i} has length {len(f.boundary)} < 3")
            continue
        if not _face_chains(model, f):
            diags.append(f"face {i} boundary does not chain head-to-tail")
            continue
        w = (0, 0)
        for aid in f.boundary:
            w = vadd(w, model.arrows[aid].wind)
        if w != (0, 0):
            diags.append(f"face {i} has nonzero total winding {w}")

    # Euler characteristic of the torus.
    if n - len(model.arrows) + len(model.faces) != 0:
        diags.append(
            f"Euler characteristic V-E+F = "
            f"{n - len(model.arrows) + len(model.faces)}, expected 0")

    # Connectivity of the underlying graph.
    adj: dict[int, set[int]] = {v: set() for v in range(n)}
    for a in model.arrows:
        adj[a.tail].add(a.head)
        adj[a.head].add(a.tail)
    seen = {0}
    stack = [0]
    while stack:
        for w_ in adj[stack.pop()]:
            if w_ not in seen:
                seen.add(w_)
                stack.append(w_)
    if len(seen) != n:
        diags.append("underlying graph is not connected")

    if not diags:
        for v in range(n):
            if len(model.out_arrows(v)) != len(model.in_arrows(v)):
                diags.append(f"vertex {v} has out-degree != in-degree")
        for v in range(n):
            try:
                vertex_rotation(model, v)
            except DimerError as e:
                diags.append(f"vertex {v}: {e}")
    return diags


def parse_dimer(text: str) -> DimerModel:
    """Parse a JSON dimer document and validate it.

    Schema: {"vertices": int, "arrows": [{"id", "tail", "head", "wind"}],
    "faces": [{"sign": 1|-1, "boundary": [arrow ids]}]}, with optional
    "positions" and "period" drawing hints.
    """
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise DimerError(f"malformed JSON: {e}") from e
    for key in ("vertices", "arrows", "faces"):
        if key not in doc:
            raise DimerError(f"missing top-level key {key!r}")
    try:
        arrows = tuple(Arrow(a["id"], a["tail"], a["head"], (int(a["wind"][0]), int(a["wind"][1])))
                       for a in doc["arrows"])
        faces = tuple(Face(int(f["sign"]), tuple(int(x) for x in f["boundary"]))
                      for f in doc["faces"])
        positions = None
        if "positions" in doc and doc["positions"] is not None:
            positions = {int(k): (float(v[0]), float(v[1])) for k, v in doc["positions"].items()}
        model = DimerModel(int(doc["vertices"]), tuple(sorted(arrows, key=lambda a: a.id)),
                           faces, positions, doc.get("period"))
    except (KeyError, TypeError, ValueError, IndexError) as e:
        raise DimerError(f"malformed dimer document: {e}") from e
    diags = validate_dimer(model)
    if diags:
        raise DimerError("invalid dimer model: " + "; ".join(diags))
    return model


def serialize_dimer(model: DimerModel) -> str:
    """Canonical JSON so that parse(serialize(m)) == m."""
    doc = {
        "vertices": model.nvertices,
        "arrows": [{"id": a.id, "tail": a.tail, "head": a.head, "wind": list(a.wind)}
                   for a in model.arrows],
        "faces": [{"sign": f.sign, "boundary": list(f.boundary)} for f in model.faces],
    }
    if model.positions is not None:
        doc["positions"] = {str(k): list(v) for k, v in sorted(model.positions.items())}
    if model.period is not None:
        doc["period"] = model.period
    return json.dumps(doc, sort_keys=True, indent=2) + "\n"


def f_term_relations(model: DimerModel) -> list[FTermRelation]:
    """One relation per arrow: the two complementary face paths, both from
    head(a) to tail(a) in traversal order."""
    rels = []
    for a in model.arrows:
        paths = {}
        for f in model.faces:
            if a.id in f.boundary:
                k = f.boundary.index(a.id)
                b = f.boundary
                comp = tuple(b[(k + 1 + j) % len(b)] for j in range(len(b) - 1))
                paths[f.sign] = comp
        rels.append(FTermRelation(a.id, paths[1], paths[-1]))
    return rels


def _successor_maps(model: DimerModel, v: int) -> tuple[dict[int, int], dict[int, int]]:
    """For each in-arrow b at v, the arrow following b in its +1 / -1 face."""
    splus: dict[int, int] = {}
    sminus: dict[int, int] = {}
    for f in model.faces:
        b = f.boundary
        for k, aid in enumerate(b):
            if model.arrows[aid].head == v:
                succ = b[(k + 1) % len(b)]
                (splus if f.sign == 1 else sminus)[aid] = succ
    return splus, sminus


def vertex_rotation(model: DimerModel, v: int) -> tuple[list[int], list[int]]:
    """Cyclic interleaving (a_1..a_m outgoing, b_1..b_m incoming) at vertex v.

    Recovered from face incidences: in the -1 face the in-arrow b_j is
    followed by a_j, in the +1 face by a_{j+1}.  The cycle starts at the
    outgoing arrow of smallest id.
    """
    outs = model.out_arrows(v)
    ins = model.in_arrows(v)
    if len(outs) != len(ins):
        raise DimerError(f"vertex {v} has out-degree {len(outs)} != in-degree {len(ins)}")
    m = len(outs)
    if m == 0:
        raise DimerError(f"vertex {v} is isolated")
    splus, sminus = _successor_maps(model, v)
    sminus_inv = {a: b for b, a in sminus.items()}
    if len(sminus_inv) != m or set(sminus_inv) != set(outs):
        raise DimerError(f"vertex {v}: -1 face successors do not pair in/out arrows")
    a_list = [min(outs)]
    b_list: list[int] = []
    for _ in range(m):
        b = sminus_inv[a_list[-1]]
        b_list.append(b)
        nxt = splus[b]
        if nxt == a_list[0]:
            break
        a_list.append(nxt)
    if len(a_list) != m or len(b_list) != m or set(a_list) != set(outs) or set(b_list) != set(ins):
        raise DimerError(f"vertex {v}: rotation is not a single cycle")
    return a_list, b_list


def complementary_path(model: DimerModel, b: int, a: int) -> tuple[int, ...]:
    """The path p with b p a a face cycle, i.e. the boundary of the unique
    face in which b is immediately followed by a, read from head(a) to
    tail(b) in traversal order."""
    for f in model.faces:
        bd = f.boundary
        for k, aid in enumerate(bd):
            if aid == b and bd[(k + 1) % len(bd)] == a:
                L = len(bd)
                return tuple(bd[(k + 2 + j) % L] for j in range(L - 2))
    raise DimerError(f"no face has arrow {b} immediately followed by arrow {a}")


def opposite_model(model: DimerModel) -> DimerModel:
    """Reverse every arrow, negate windings, flip face signs."""
    arrows = tuple(Arrow(a.id, a.head, a.tail, vneg(a.wind)) for a in model.arrows)
    faces = tuple(Face(-f.sign, tuple(reversed(f.boundary))) for f in model.faces)
    return DimerModel(model.nvertices, arrows, faces, model.positions, model.period)
