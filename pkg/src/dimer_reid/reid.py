"""Wheels of line bundles, GIT chamber walls, and the per-vertex
classification of the transforms of the vertex simple modules."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .model import DimerModel, DimerError, complementary_path, vertex_rotation
from .matchings import homology_basis, enumerate_perfect_matchings
from .moduli import (Cone, Fan, StabilityParam, TorusInvariantModule, build_fan,
                     orbit_module, origin_fibre, socle_vertices, special_theta,
                     OriginFibre)
from .divisors import (TorusDivisor, LineBundleClass, arrow_label, path_label,
                       bundle_degree_on_curve, common_zero_support,
                       curve_intersection_data, divisor_gcd, divisor_lcm,
                       divisor_difference, is_minus1_minus1, line_bundle_class,
                       zero_divisor)
from ._simplex import simplex_max


class CrossCheckError(DimerError):
    """Two independent routes to the same quantity disagreed."""


# ---------------------------------------------------------------------------
# Wheels

@dataclass(frozen=True)
class Wheel:
    """Labelled four-term complex resolving the transform of a vertex simple.

    ``in_spokes[j]`` labels the map into the degree-0 slot coming from the
    j-th outgoing arrow a_j; ``out_spokes[j]`` labels the map out of the
    degree-(-3) slot along the j-th incoming arrow b_j; ``rim_lo[j]`` labels
    the rim map from b_j's slot towards a_j, ``rim_hi[j]`` the one towards
    a_{j+1}.
    """

    vertex: int
    a_list: tuple[int, ...]
    b_list: tuple[int, ...]
    in_spokes: tuple[TorusDivisor, ...]
    out_spokes: tuple[TorusDivisor, ...]
    rim_lo: tuple[TorusDivisor, ...]
    rim_hi: tuple[TorusDivisor, ...]

    @property
    def m(self) -> int:
        return len(self.a_list)


def build_wheel(model: DimerModel, fan: Fan, i: int) -> Wheel:
    """Assemble the wheel at vertex i and verify its two label relations."""
    a_list, b_list = vertex_rotation(model, i)
    m = len(a_list)
    ins = tuple(arrow_label(model, fan, a) for a in a_list)
    outs = tuple(arrow_label(model, fan, b) for b in b_list)
    lo = []
    hi = []
    for j in range(m):
        p_lo = complementary_path(model, b_list[j], a_list[j])
        p_hi = complementary_path(model, b_list[j], a_list[(j + 1) % m])
        lo.append(path_label(model, fan, tuple((x, 1) for x in p_lo)))
        hi.append(path_label(model, fan, tuple((x, 1) for x in p_hi)))
    w = Wheel(i, tuple(a_list), tuple(b_list), ins, outs, tuple(lo), tuple(hi))
    for j in range(m):
        if w.rim_hi[j] + w.in_spokes[(j + 1) % m] != w.rim_lo[j] + w.in_spokes[j]:
            raise CrossCheckError(f"wheel at {i}: square relation fails at j={j}")
        if w.rim_hi[(j - 1) % m] + w.out_spokes[(j - 1) % m] != w.rim_lo[j] + w.out_spokes[j]:
            raise CrossCheckError(f"wheel at {i}: fork relation fails at j={j}")
    return w


def h0_support(model: DimerModel, fan: Fan, wheel: Wheel) -> frozenset[Cone]:
    """Support of the degree-0 cohomology: common zero locus of the
    in-spokes, cross-checked against the socle scan over all orbits."""
    divisor_side = common_zero_support(fan, list(wheel.in_spokes))
    socle_cones = [c for c in fan.all_cones()
                   if wheel.vertex in socle_vertices(model, orbit_module(model, fan, c))]
    ss = set(socle_cones)
    socle_side = frozenset(c for c in socle_cones if not any(o < c for o in ss))
    if divisor_side != socle_side:
        raise CrossCheckError(
            f"vertex {wheel.vertex}: divisor-side and socle-side supports differ: "
            f"{sorted(map(sorted, divisor_side))} vs {sorted(map(sorted, socle_side))}")
    return divisor_side


def h2_divisor(wheel: Wheel) -> TorusDivisor:
    """gcd of the out-spoke labels; must vanish for every nonzero vertex."""
    return divisor_gcd(*wheel.out_spokes)


def transposition_order(m: int) -> list[tuple[int, int]]:
    """The ordering of the m(m-1)/2 transpositions driving the degree -1
    filtration: adjacent ones first, then (1,m), then the rest of the
    (1,*) ones, then the remainder lexicographically."""
    if m < 2:
        return []
    seq = [(j, j + 1) for j in range(1, m)]
    seq.append((1, m))
    seq.extend((1, j - m + 2) for j in range(m + 1, 2 * m - 2))
    listed = set(seq)
    seq.extend(sorted((mu, nu) for mu in range(1, m + 1) for nu in range(mu + 1, m + 1)
                      if (mu, nu) not in listed))
    out: list[tuple[int, int]] = []
    for t in seq:
        if t not in out:
            out.append(t)
    assert len(out) == m * (m - 1) // 2
    return out


def _filtration_divisor_lists(wheel: Wheel, fan: Fan) -> list[list[TorusDivisor]]:
    """The per-index divisor sets whose common zero loci carry the graded
    pieces of the degree -1 cohomology."""
    m = wheel.m
    ins = wheel.in_spokes
    grims = [divisor_gcd(wheel.rim_hi[t], wheel.rim_lo[t]) for t in range(m)]
    out: list[list[TorusDivisor]] = []
    for j0, (mu, nu) in enumerate(transposition_order(m), start=1):
        if j0 <= m:
            k = j0 - 1
            big = divisor_lcm(*ins, *(grims[t] for t in range(k + 1, m))) if k + 1 < m \
                else divisor_lcm(*ins)
            small = divisor_lcm(ins[k], ins[(k + 1) % m])
            out.append([grims[k], divisor_difference(big, small)])
        elif j0 <= 2 * m - 3:
            base = divisor_lcm(ins[0], ins[nu - 1])
            d1 = divisor_difference(
                divisor_lcm(ins[0], *(ins[t - 1] for t in range(nu, m + 1))), base)
            d2 = divisor_difference(divisor_lcm(ins[0], ins[nu - 2], ins[nu - 1]), base)
            out.append([d1, d2])
        else:
            base = divisor_lcm(ins[mu - 1], ins[nu - 1])
            idxs = list(range(1, mu)) + [nu - 1]
            out.append([divisor_difference(
                divisor_lcm(ins[t - 1], ins[mu - 1], ins[nu - 1]), base) for t in idxs])
    return out


def _contained(d: TorusDivisor, ray: int) -> bool:
    return d.coeffs[ray] >= 1


def _hminus1_per_divisor(wheel: Wheel, fan: Fan, ray: int) -> bool:
    """Per-divisor membership criterion for the degree -1 support."""
    m = wheel.m
    ins = wheel.in_spokes
    inc = lambda d: _contained(d, ray)
    grim = [divisor_gcd(wheel.rim_hi[t], wheel.rim_lo[t]) for t in range(m)]
    # adjacent-pair case
    for k in range(m):
        if inc(wheel.rim_hi[k]) and inc(wheel.rim_lo[k]) \
                and not inc(ins[k]) and not inc(ins[(k + 1) % m]):
            others = any(inc(ins[t]) for t in range(m) if t not in (k, (k + 1) % m))
            rims = any(inc(grim[t]) for t in range(k + 1, m))
            if others or rims:
                return True
    # (1, nu) case
    for nu in range(3, m):
        if not inc(ins[0]) and not inc(ins[nu - 1]) and inc(ins[nu - 2]) \
                and any(inc(ins[t - 1]) for t in range(nu + 1, m + 1)):
            return True
    # general case
    for mu, nu in transposition_order(m)[2 * m - 3:]:
        if mu == 1:
            continue
        if not inc(ins[mu - 1]) and not inc(ins[nu - 1]) \
                and all(inc(ins[t - 1]) for t in list(range(1, mu)) + [nu - 1]):
            return True
    return False


def hminus1_support(model: DimerModel, fan: Fan, wheel: Wheel) -> frozenset[int]:
    """Rays of the compact divisors supporting the degree -1 cohomology.

    Computed from the filtration supports and, independently, from the
    per-divisor criterion; the two must agree and every component must be a
    compact divisor.
    """
    union_cones: set[Cone] = set()
    for divs in _filtration_divisor_lists(wheel, fan):
        union_cones |= common_zero_support(fan, divs)
    minimal = {c for c in union_cones
               if not any(o < c for o in union_cones)}
    rays = frozenset(next(iter(c)) for c in minimal if len(c) == 1)
    for c in minimal:
        if len(c) > 1:
            raise CrossCheckError(
                f"vertex {wheel.vertex}: degree -1 support has a component of "
                f"dimension {3 - len(c)}, not a divisor: {sorted(c)}")
    for r in rays:
        if r not in fan.compact_rays:
            raise CrossCheckError(
                f"vertex {wheel.vertex}: degree -1 support hits non-compact ray {r}")
    per_divisor = frozenset(r for r in fan.compact_rays
                            if _hminus1_per_divisor(wheel, fan, r))
    if per_divisor != rays:
        raise CrossCheckError(
            f"vertex {wheel.vertex}: filtration route {sorted(rays)} and per-divisor "
            f"route {sorted(per_divisor)} disagree for the degree -1 support")
    return rays


# ---------------------------------------------------------------------------
# Chamber and walls

@dataclass(frozen=True)
class Chamber:
    """GIT chamber of the parameter, cut out by theta(S) > 0 over the
    nontrivial submodules of the torus-invariant stable modules."""

    nvertices: int
    inequalities: frozenset[frozenset[int]]


def chamber_inequalities(model: DimerModel, fan: Fan) -> Chamber:
    ineqs: set[frozenset[int]] = set()
    for t in fan.triangles:
        mod = orbit_module(model, fan, t)
        out = [[] for _ in range(model.nvertices)]
        for a in model.arrows:
            if a.id in mod.nonzero_arrows:
                out[a.tail].append(a.head)
        n = model.nvertices
        for bits in range(1, 2 ** n - 1):
            S = frozenset(v for v in range(n) if bits >> v & 1)
            if all(h in S for v in S for h in out[v]):
                ineqs.add(S)
    return Chamber(model.nvertices, frozenset(ineqs))


def _wall_lp(chamber: Chamber, i: int) -> bool:
    """Exact-LP facet test: the closure of the chamber meets {theta_i = 0}
    in a codimension-one face."""
    n = chamber.nvertices
    ineqs = [S for S in sorted(chamber.inequalities, key=sorted)]
    full = frozenset(range(n))

    # theta_j = u_j - v_j with u, v >= 0.
    def theta_row(S, sign):
        row = [0] * (2 * n)
        for j in S:
            row[j] -= sign
            row[n + j] += sign
        return row

    # Step 1: theta_i must be bounded below by zero on the closed chamber.
    A = []
    b = []
    for S in ineqs:
        A.append(theta_row(S, 1))       # -theta(S) <= 0
        b.append(0)
    A.append(theta_row(full, -1))       # sum theta <= 0
    b.append(0)
    A.append(theta_row(full, 1))        # -sum theta <= 0
    b.append(0)
    for j in range(n):                  # box: -1 <= theta_j <= 1
        row = [0] * (2 * n)
        row[j], row[n + j] = 1, -1
        A.append(row)
        b.append(1)
        row = [0] * (2 * n)
        row[j], row[n + j] = -1, 1
        A.append(row)
        b.append(1)
    c = [0] * (2 * n)
    c[i], c[n + i] = -1, 1              # maximize -theta_i
    if simplex_max(c, A, b) > 0:
        return False

    # Step 2: the slice theta_i = 0 must contain a point where every other
    # inequality is strict (margin variable t).
    nv = 2 * n + 1
    A2 = []
    b2 = []
    degenerate = {frozenset([i]), full - {i}}
    for S in ineqs:
        if S in degenerate:
            continue
        row = theta_row(S, 1) + [1]     # t - theta(S) <= 0
        A2.append(row)
        b2.append(0)
    for sign in (1, -1):
        A2.append(theta_row(full, sign) + [0])
        b2.append(0)
    for sign in (1, -1):                # theta_i = 0
        row = [0] * nv
        row[i], row[n + i] = sign, -sign
        A2.append(row)
        b2.append(0)
    for j in range(n):
        row = [0] * nv
        row[j], row[n + j] = 1, -1
        A2.append(row)
        b2.append(1)
        row = [0] * nv
        row[j], row[n + j] = -1, 1
        A2.append(row)
        b2.append(1)
    row = [0] * nv
    row[-1] = 1                         # t <= 1
    A2.append(row)
    b2.append(1)
    c2 = [0] * nv
    c2[-1] = 1
    return simplex_max(c2, A2, b2) > 0


@dataclass(frozen=True)
class WallInfo:
    vertex: int
    present: bool
    wall_type: str | None              # "0" or "I"
    unstable_locus: frozenset[Cone]


def chamber_and_walls(model: DimerModel, fan: Fan,
                      theta: StabilityParam) -> tuple[Chamber, dict[int, WallInfo]]:
    """Wall flags per nonzero vertex, computed by the socle route and the
    facet route and cross-checked, with the unstable locus attached."""
    chamber = chamber_inequalities(model, fan)
    for S in chamber.inequalities:
        if theta.of(S) <= 0:
            raise DimerError("parameter does not satisfy its own chamber inequalities")
    walls: dict[int, WallInfo] = {}
    for i in range(1, model.nvertices):
        wheel = build_wheel(model, fan, i)
        z = h0_support(model, fan, wheel)
        socle_route = any(
            i in socle_vertices(model, orbit_module(model, fan, t)) for t in fan.triangles)
        facet_route = _wall_lp(chamber, i)
        h0_route = bool(z)
        if not (socle_route == facet_route == h0_route):
            raise CrossCheckError(
                f"vertex {i}: wall routes disagree "
                f"(socle={socle_route}, facet={facet_route}, h0={h0_route})")
        wall_type = None
        if socle_route:
            dims = {3 - len(c) for c in z}
            if dims == {1} and len(z) == 1:
                wall_type = "I"
                (edge,) = z
                if not is_minus1_minus1(curve_intersection_data(fan, edge)):
                    raise CrossCheckError(f"vertex {i}: type I wall curve is not (-1,-1)")
            elif dims == {2}:
                wall_type = "0"
            else:
                raise CrossCheckError(
                    f"vertex {i}: unstable locus is neither a curve nor a divisor union")
        walls[i] = WallInfo(i, socle_route, wall_type, z)
    return chamber, walls


def verify_flop_degrees(model: DimerModel, fan: Fan, i: int, edge: Cone) -> None:
    """On a type-I wall curve for vertex i the i-th tautological bundle has
    degree one and every other one degree zero."""
    curve = curve_intersection_data(fan, edge)
    for j in range(model.nvertices):
        deg = bundle_degree_on_curve(line_bundle_class(model, fan, j), curve)
        want = 1 if j == i else 0
        if deg != want:
            raise CrossCheckError(
                f"flop degree check failed: deg L_{j} on wall curve of vertex {i} "
                f"is {deg}, expected {want}")


# ---------------------------------------------------------------------------
# Structural invariants

def one_of_three_holds(wheel: Wheel, fan: Fan, compact_only: bool = True) -> bool:
    """Each (out-spoke, rim, in-spoke) cycle of the wheel contains a given
    prime divisor in exactly one of its three labels."""
    rays = fan.compact_rays if compact_only else range(len(fan.rays))
    m = wheel.m
    for r in rays:
        for j in range(m):
            lo = [wheel.out_spokes[j], wheel.rim_lo[j], wheel.in_spokes[j]]
            hi = [wheel.out_spokes[j], wheel.rim_hi[j], wheel.in_spokes[(j + 1) % m]]
            for trip in (lo, hi):
                if sum(1 for d in trip if _contained(d, r)) != 1:
                    return False
    return True


def vanishing_pattern_holds(wheel: Wheel, fan: Fan, ray: int) -> bool:
    """For a compact divisor outside the support of the transform, the wheel
    labels containing it must form the one-sided block pattern."""
    m = wheel.m
    ins = frozenset(j for j in range(m) if _contained(wheel.in_spokes[j], ray))
    outs = frozenset(j for j in range(m) if _contained(wheel.out_spokes[j], ray))
    rims = frozenset(("lo", j) for j in range(m) if _contained(wheel.rim_lo[j], ray)) | \
        frozenset(("hi", j) for j in range(m) if _contained(wheel.rim_hi[j], ray))
    for mu in range(m):
        for lin in range(m):
            # in-spoke block of length lin after mu, out-spokes covering the
            # complementary arc, and the two rim labels closing the block;
            # the block sizes always add up to m - 1
            nu = (mu + 1 + lin) % m
            ins_exp = frozenset((mu + 1 + t) % m for t in range(lin))
            outs_exp = frozenset((nu + t) % m for t in range((mu - nu) % m))
            rims_exp = frozenset({("hi", (nu - 1) % m), ("lo", mu)})
            if ins == ins_exp and outs == outs_exp and rims == rims_exp:
                return True
    return False


def support_connected(fan: Fan, cones: frozenset[Cone]) -> bool:
    """Connectivity of a union of orbit closures in the face-incidence
    graph: two closures meet iff some cone contains both index sets."""
    comp = list(cones)
    if len(comp) <= 1:
        return True
    allc = fan.all_cones()
    adj = {k: set() for k in range(len(comp))}
    for a in range(len(comp)):
        for b in range(a + 1, len(comp)):
            u = comp[a] | comp[b]
            if any(u <= c for c in allc):
                adj[a].add(b)
                adj[b].add(a)
    seen = {0}
    stack = [0]
    while stack:
        for w in adj[stack.pop()]:
            if w not in seen:
                seen.add(w)
                stack.append(w)
    return len(seen) == len(comp)


# ---------------------------------------------------------------------------
# Classification

CASE_DIV0 = "div0"
CASE_CURVE0 = "curve0"
CASE_SHEAF_MINUS1 = "sheaf-1"
CASE_DUALIZING = "dualizing"


@dataclass(frozen=True)
class VertexReport:
    vertex: int
    case: str
    support: tuple[Cone, ...]
    bundle: TorusDivisor | None
    wall: WallInfo | None
    checks: dict


@dataclass(frozen=True)
class PsiReport:
    entries: tuple[VertexReport, ...]
    fibre: OriginFibre


def psi_zero_vertex(model: DimerModel, fan: Fan) -> tuple[OriginFibre, dict]:
    """Fibre data for the distinguished vertex: degree -2 support is the
    divisor part, degree -1 support the curve part, purity equals
    equidimensionality.  Cross-checked against the wheel gcd at vertex 0."""
    fib = origin_fibre(model, fan)
    wheel0 = build_wheel(model, fan, 0)
    d2 = h2_divisor(wheel0)
    if frozenset(d2.support()) != frozenset(fib.F2):
        raise CrossCheckError(
            f"vertex 0: wheel gcd support {sorted(d2.support())} differs from "
            f"fibre divisor part {sorted(fib.F2)}")
    checks = {"h2_equals_F2": True, "pure": fib.equidimensional}
    return fib, checks


def classify_psi(model: DimerModel, fan: Fan, theta: StabilityParam) -> PsiReport:
    """Per-vertex classification, with every cross-check enforced."""
    chamber, walls = chamber_and_walls(model, fan, theta)
    entries: list[VertexReport] = []
    for i in range(1, model.nvertices):
        wheel = build_wheel(model, fan, i)
        if not h2_divisor(wheel).is_zero():
            raise CrossCheckError(f"vertex {i}: nonzero degree -2 divisor")
        winfo = walls[i]
        hm1 = hminus1_support(model, fan, wheel)
        checks = {
            "relations": True,
            "h2_zero": True,
            "one_of_three": one_of_three_holds(wheel, fan),
            "socle_eq_facet": True,
        }
        if winfo.present:
            if hm1:
                raise CrossCheckError(
                    f"vertex {i}: wall vertex has nonempty degree -1 support")
            checks["exclusivity"] = True
            support = tuple(sorted(winfo.unstable_locus, key=sorted))
            case = CASE_CURVE0 if winfo.wall_type == "I" else CASE_DIV0
            if winfo.wall_type == "I":
                (edge,) = winfo.unstable_locus
                verify_flop_degrees(model, fan, i, edge)
                checks["flop_degrees"] = True
            bundle = -line_bundle_class(model, fan, i).representative
        else:
            checks["exclusivity"] = True
            support = tuple(frozenset([r]) for r in sorted(hm1))
            case = CASE_SHEAF_MINUS1
            if not support:
                raise CrossCheckError(
                    f"vertex {i}: no wall and empty degree -1 support")
            bundle = None
        sup_set = frozenset(support)
        checks["connectivity"] = support_connected(fan, sup_set)
        if not checks["connectivity"]:
            raise CrossCheckError(f"vertex {i}: support is not connected")
        checks["dimension2"] = all(len(c) == 1 for c in support) \
            if case == CASE_SHEAF_MINUS1 else True
        # A compact divisor lies in the support only in the divisor cases;
        # every other compact divisor must show the block vanishing pattern.
        pattern_ok = True
        for r in fan.compact_rays:
            divisor_in_support = any(len(c) == 1 and r in c for c in support)
            if not divisor_in_support and not vanishing_pattern_holds(wheel, fan, r):
                pattern_ok = False
        checks["vanishing_pattern"] = pattern_ok
        if not pattern_ok:
            raise CrossCheckError(f"vertex {i}: vanishing pattern violated")
        entries.append(VertexReport(i, case, support, bundle, winfo, checks))
    fib, checks0 = psi_zero_vertex(model, fan)
    entries.append(VertexReport(
        0, CASE_DUALIZING,
        tuple([frozenset([r]) for r in fib.F2] + list(fib.F1)),
        None, None, checks0))
    entries.sort(key=lambda e: e.vertex)
    return PsiReport(tuple(entries), fib)


def opposite_dimer_check(model: DimerModel, theta: StabilityParam,
                         anchor=None) -> bool:
    """The fan of the model at theta coincides with the fan of the opposite
    model at -theta (rays and triangles compared as point sets)."""
    from .model import opposite_model
    fan1 = _fan_for(model, theta, anchor)
    neg = StabilityParam(tuple(-t for t in theta.theta))
    fan2 = _fan_for(opposite_model(model), neg, anchor)
    pts1 = {mp.point for mp in fan1.rays}
    pts2 = {mp.point for mp in fan2.rays}
    if pts1 != pts2:
        return False
    tri1 = {frozenset(fan1.point(r) for r in t) for t in fan1.triangles}
    tri2 = {frozenset(fan2.point(r) for r in t) for t in fan2.triangles}
    return tri1 == tri2


def _fan_for(model: DimerModel, theta: StabilityParam, anchor=None) -> Fan:
    pms = enumerate_perfect_matchings(model)
    basis = homology_basis(model)
    return build_fan(model, pms, basis, theta, anchor)


def psi_report_json(model: DimerModel, fan: Fan, report: PsiReport) -> dict:
    def cone_json(c: Cone) -> list[int]:
        return [r + 1 for r in sorted(c)]

    out = []
    for e in report.entries:
        row = {
            "vertex": e.vertex,
            "case": e.case,
            "support": [cone_json(c) for c in e.support],
            "checks": dict(sorted(e.checks.items())),
        }
        if e.bundle is not None:
            row["bundle"] = {"rep": list(e.bundle.coeffs)}
        if e.wall is not None:
            row["wall"] = {"present": e.wall.present, "type": e.wall.wall_type}
        else:
            row["wall"] = {"present": False, "type": None}
        out.append(row)
    return {
        "vertices": out,
        "fibre": {
            "F1": [cone_json(c) for c in report.fibre.F1],
            "F2": [r + 1 for r in report.fibre.F2],
            "equidimensional": report.fibre.equidimensional,
        },
        "notes": [
            "input dimer assumed consistent; necessary conditions checked only",
            "supports are reduced; filtration multiplicities are not reported",
        ],
    }
