"""Exact polyhedral geometry over the rationals.

Polytopes carry both a V-representation (lexicographically sorted vertex
list) and an H-representation (primitive integer facet normals, plus affine
span equations when the polytope is not full-dimensional).  All arithmetic
uses Fraction; reflexivity and face saturation are equality tests, so no
floating point is allowed anywhere.

Duality convention: dual(P) = {m : <m, n> <= 1 for all n in P}.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property

from .errors import (
    DimensionMismatch,
    Empty,
    EmptyInput,
    OriginNotInterior,
    Unbounded,
)
from . import linalg
from .linalg import (
    clear_denominators,
    dot,
    frac_vec,
    hadamard_bound,
    lattice_basis,
    nullspace,
    primitive,
    rank,
    sign_normalized,
    vec_sub,
)

N_LATTICE = "N"
M_LATTICE = "M"


def opposite_lattice(tag: str) -> str:
    return M_LATTICE if tag == N_LATTICE else N_LATTICE


@dataclass(frozen=True)
class LatticeVector:
    """Integer point tagged with the lattice (N or M) it lives in."""

    coords: tuple[int, ...]
    lattice: str = N_LATTICE

    def pairing(self, other: "LatticeVector") -> int:
        """Exact dual pairing; defined only across opposite lattice tags."""
        if self.lattice == other.lattice:
            raise DimensionMismatch(
                f"pairing requires opposite lattice tags, got {self.lattice} twice"
            )
        if len(self.coords) != len(other.coords):
            raise DimensionMismatch("pairing requires equal lattice rank")
        return sum(a * b for a, b in zip(self.coords, other.coords))


@dataclass(frozen=True)
class RationalPoint:
    """Point with exact rational coordinates (Fractions keep lowest terms)."""

    coords: tuple[Fraction, ...]

    @staticmethod
    def of(values) -> "RationalPoint":
        return RationalPoint(frac_vec(values))


@dataclass(frozen=True)
class HalfSpace:
    """{x : <x, normal> <= bound} with a primitive integer normal."""

    normal: tuple[int, ...]
    bound: Fraction

    @staticmethod
    def of(normal, bound) -> "HalfSpace":
        nv = primitive(normal)
        if not any(nv):
            raise EmptyInput("halfspace normal must be nonzero")
        g = linalg.gcd_list(normal) or 1
        return HalfSpace(nv, Fraction(bound) / g)

    def value(self, point) -> Fraction:
        return dot(self.normal, point)

    def holds(self, point) -> bool:
        return self.value(point) <= self.bound

    def saturates(self, point) -> bool:
        return self.value(point) == self.bound


@dataclass(frozen=True)
class Face:
    """Face of a polytope named by its vertex indices and saturated facets."""

    vertex_ids: tuple[int, ...]
    dim: int
    saturated_facets: frozenset[int]


# ---------------------------------------------------------------------------
# vertex enumeration (double description with a bounding-box start)


def _dd_insert(verts, sats, constraints, first_index, k):
    """Cut a vertex-described polytope by further halfspaces (double description).

    `verts`/`sats` describe the current polytope's vertices together with the
    indices of all constraints they saturate.  Returns the updated pair;
    empty lists when the intersection is empty.
    """
    for offset, (normal, bound) in enumerate(constraints):
        idx = first_index + offset
        vals = [dot(normal, v) - bound for v in verts]
        if all(v <= 0 for v in vals):
            for i, v in enumerate(vals):
                if v == 0:
                    sats[i].add(idx)
            continue
        inside = [i for i, v in enumerate(vals) if v < 0]
        on = [i for i, v in enumerate(vals) if v == 0]
        outside = [i for i, v in enumerate(vals) if v > 0]
        if not inside and not on:
            return [], []
        new_pts = []
        new_sats = []
        for i in inside:
            for j in outside:
                common = sats[i] & sats[j]
                if len(common) < k - 1:
                    continue
                blocked = False
                for t, s in enumerate(sats):
                    if t != i and t != j and common <= s:
                        blocked = True
                        break
                if blocked:
                    continue
                t_par = vals[i] / (vals[i] - vals[j])
                pt = tuple(a + t_par * (b - a) for a, b in zip(verts[i], verts[j]))
                new_pts.append(pt)
                new_sats.append(common | {idx})
        keep_pts = [verts[i] for i in inside] + [verts[i] for i in on]
        keep_sats = [sats[i] for i in inside] + [sats[i] | {idx} for i in on]
        merged: dict[tuple, set] = {}
        for p, s in zip(keep_pts + new_pts, keep_sats + new_sats):
            if p in merged:
                merged[p] |= s
            else:
                merged[p] = set(s)
        verts = list(merged.keys())
        sats = [merged[p] for p in verts]
    return verts, sats


def _dd_vertices(constraints, k, box_bound):
    """Vertices of {x in R^k : n.x <= b} intersected with the box [-B, B]^k.

    Returns (points, saturation sets) where saturation sets index into
    `constraints`; box facets use indices >= len(constraints).  Raises
    Unbounded if any final vertex touches the box (the Cramer bound
    guarantees genuine vertices stay strictly inside).
    """
    ncon = len(constraints)
    verts: list[tuple] = []
    sats: list[set] = []
    for corner in itertools.product((Fraction(-box_bound), Fraction(box_bound)), repeat=k):
        verts.append(tuple(corner))
        sats.append({ncon + 2 * i + (0 if c > 0 else 1)
                     for i, c in enumerate(corner)})

    verts, sats = _dd_insert(verts, sats, list(constraints), 0, k)

    for s in sats:
        if any(j >= ncon for j in s):
            raise Unbounded("halfspace intersection is unbounded")
    return verts, sats


def clip_polytope(p: "Polytope", halfspaces) -> list | None:
    """Vertices of p intersected with extra halfspaces; None when empty.

    Seeds the double description run with p's own vertex/facet incidence,
    which is much cheaper than starting from a bounding box.
    """
    base: list[tuple] = [(f.normal, f.bound) for f in p.facets]
    for n, v in p.equations:
        base.append((n, Fraction(v)))
        base.append((tuple(-c for c in n), Fraction(-v)))
    verts = list(p.vertices)
    sats = []
    for vtx in verts:
        sats.append({i for i, (n, b) in enumerate(base) if dot(n, vtx) == b})
    extra = []
    for h in halfspaces:
        if isinstance(h, HalfSpace):
            extra.append((h.normal, h.bound))
        else:
            extra.append((h[0], Fraction(h[1])))
    verts, sats = _dd_insert(verts, sats, extra, len(base), p.ambient_dim)
    return verts or None


# ---------------------------------------------------------------------------
# the Polytope carrier


class Polytope:
    """Bounded rational polytope with exact V- and H-representations.

    Immutable after construction; lower-dimensional polytopes record their
    affine span as equations and compute faces within the span.
    """

    def __init__(self, ambient_dim, lattice, vertices, facets, equations, dim,
                 chart_base, chart_basis, chart_facets):
        self.ambient_dim = ambient_dim
        self.lattice = lattice
        self.vertices = vertices              # sorted tuple of coord tuples
        self.facets = facets                  # tuple of HalfSpace
        self.equations = equations            # tuple of (normal, value) for the span
        self.dim = dim
        self._chart_base = chart_base
        self._chart_basis = chart_basis       # tuple of integer direction vectors
        self._chart_facets = chart_facets     # facets in chart coordinates
        self._chart_rows = None

    # -- basic protocol

    def __eq__(self, other):
        return (
            isinstance(other, Polytope)
            and self.ambient_dim == other.ambient_dim
            and self.lattice == other.lattice
            and self.vertices == other.vertices
        )

    def __hash__(self):
        return hash((self.ambient_dim, self.lattice, self.vertices))

    def __repr__(self):
        return (
            f"Polytope(dim={self.dim}, ambient={self.ambient_dim}, "
            f"lattice={self.lattice}, n_vertices={len(self.vertices)})"
        )

    # -- chart helpers

    def _chart_solver(self):
        """Row selection and inverse for mapping ambient points to the chart."""
        if self._chart_rows is not None:
            return self._chart_rows
        k = self.dim
        basis = self._chart_basis
        rows = []
        chosen = []
        for i in range(self.ambient_dim):
            cand = rows + [[Fraction(basis[j][i]) for j in range(k)]]
            if rank(cand) > len(rows):
                rows = cand
                chosen.append(i)
            if len(rows) == k:
                break
        inv = _invert(rows) if k else []
        self._chart_rows = (chosen, inv)
        return self._chart_rows

    def to_chart(self, point):
        if self.dim == 0:
            return ()
        chosen, inv = self._chart_solver()
        rel = [Fraction(point[i]) - self._chart_base[i] for i in chosen]
        return tuple(dot(row, rel) for row in inv)

    def from_chart(self, y):
        pt = list(self._chart_base)
        for j, c in enumerate(y):
            for i in range(self.ambient_dim):
                pt[i] += c * self._chart_basis[j][i]
        return tuple(pt)

    # -- predicates

    def in_span(self, point) -> bool:
        return all(dot(n, point) == v for n, v in self.equations)

    def contains(self, point) -> bool:
        return self.in_span(point) and all(
            dot(f.normal, point) <= f.bound for f in self.facets
        )

    def contains_interior(self, point) -> bool:
        """Strict ambient interior; False whenever the polytope is degenerate."""
        if self.dim < self.ambient_dim:
            return False
        return all(dot(f.normal, point) < f.bound for f in self.facets)

    def contains_relative_interior(self, point) -> bool:
        if not self.in_span(point):
            return False
        if self.dim == 0:
            return frac_vec(point) == self.vertices[0]
        return all(dot(f.normal, point) < f.bound for f in self.facets)

    # -- derived data

    def barycenter(self):
        n = len(self.vertices)
        return tuple(sum(v[i] for v in self.vertices) / n for i in range(self.ambient_dim))

    @cached_property
    def face_lattice(self) -> "FaceLattice":
        return _build_face_lattice(self)

    def faces(self, k) -> tuple[Face, ...]:
        return self.face_lattice.per_dim.get(k, ())

    def lattice_point_list(self) -> list[tuple[int, ...]]:
        """All integer points, lexicographically ordered."""
        if not self.vertices:
            return []
        lo = []
        hi = []
        for i in range(self.ambient_dim):
            coords = [v[i] for v in self.vertices]
            lo.append(-((-min(coords)).__floor__()))
            hi.append(max(coords).__floor__())
        pts = []
        for cand in itertools.product(*[range(a, b + 1) for a, b in zip(lo, hi)]):
            if self.contains(cand):
                pts.append(cand)
        return pts

    @cached_property
    def volume(self) -> Fraction:
        """Normalized lattice volume (dim! times Euclidean volume in the chart)."""
        memo: dict[frozenset, Fraction] = {}
        return _normalized_volume(self, memo)

    def translate(self, vec) -> "Polytope":
        moved = [tuple(Fraction(a) + Fraction(b) for a, b in zip(v, vec)) for v in self.vertices]
        return convex_hull(moved, self.ambient_dim, lattice=self.lattice)

    def dilate(self, factor) -> "Polytope":
        scaled = [tuple(Fraction(factor) * a for a in v) for v in self.vertices]
        return convex_hull(scaled, self.ambient_dim, lattice=self.lattice)


def _invert(rows):
    n = len(rows)
    aug = [list(rows[i]) + [Fraction(1) if j == i else Fraction(0) for j in range(n)]
           for i in range(n)]
    reduced, pivots = linalg._echelon(aug)
    assert len(pivots) == n and pivots == list(range(n))
    return [row[n:] for row in reduced]


# ---------------------------------------------------------------------------
# construction


def convex_hull(points, ambient_dim=None, lattice=N_LATTICE) -> Polytope:
    """Exact convex hull: V-rep with redundant points dropped, H-rep, span.

    Vertices come out lexicographically sorted; facet normals are primitive
    integer vectors (inequality orientation fixes their sign).
    """
    pts = [frac_vec(p) for p in points]
    if not pts:
        raise EmptyInput("convex hull of an empty point set")
    if ambient_dim is None:
        ambient_dim = len(pts[0])
    for p in pts:
        if len(p) != ambient_dim:
            raise DimensionMismatch(
                f"point of length {len(p)} in ambient dimension {ambient_dim}"
            )
    pts = sorted(set(pts))
    base = pts[0]
    dirs = [vec_sub(p, base) for p in pts[1:]]
    k = rank(dirs)

    basis = lattice_basis(dirs) if k else []
    equations = _span_equations(base, basis, ambient_dim)

    if k == 0:
        return Polytope(ambient_dim, lattice, (base,), (), equations, 0, base, (), ())

    shell = Polytope(ambient_dim, lattice, tuple(pts), (), equations, k, base,
                     tuple(basis), ())
    chart_pts = [shell.to_chart(p) for p in pts]

    chart_facets = _full_dim_facets(chart_pts, k)

    # vertex filter: a point is a vertex iff its saturated facet normals span
    vert_ids = []
    for i, y in enumerate(chart_pts):
        sat = [n for n, b in chart_facets if dot(n, y) == b]
        if rank(sat) == k:
            vert_ids.append(i)
    vertices = tuple(sorted(pts[i] for i in vert_ids))

    facets = []
    for n, b in chart_facets:
        m = _lift_functional(shell, n)
        bound = max(dot(m, v) for v in vertices)
        facets.append(HalfSpace(tuple(m), bound))
    facets = tuple(sorted(facets, key=lambda f: (f.normal, f.bound)))

    return Polytope(ambient_dim, lattice, vertices, facets, equations, k, base,
                    tuple(basis), tuple(sorted(chart_facets)))


def _span_equations(base, basis, ambient_dim):
    if len(basis) == ambient_dim:
        return ()
    ortho = nullspace(basis) if basis else [
        tuple(Fraction(1) if j == i else Fraction(0) for j in range(ambient_dim))
        for i in range(ambient_dim)
    ]
    eqs = []
    for v in ortho:
        n = sign_normalized(clear_denominators(v))
        eqs.append((n, dot(n, base)))
    return tuple(sorted(eqs))


def _full_dim_facets(chart_pts, k):
    """Facets of a full-dimensional hull via the polar double description."""
    m = len(chart_pts)
    centroid = tuple(sum(p[i] for p in chart_pts) / m for i in range(k))
    shifted = [vec_sub(p, centroid) for p in chart_pts]
    constraints = [(q, Fraction(1)) for q in shifted]
    int_rows = [clear_denominators(q + (Fraction(1),)) for q in shifted]
    bound = hadamard_bound(int_rows, k)
    dual_verts, _ = _dd_vertices(constraints, k, bound)
    facets = []
    seen = set()
    for w in dual_verts:
        n = primitive(clear_denominators(w))
        b = max(dot(n, p) for p in chart_pts)
        if (n, b) not in seen:
            seen.add((n, b))
            facets.append((n, b))
    return facets


def _lift_functional(shell, chart_normal):
    """Integer ambient normal restricting to the given chart functional."""
    basis = shell._chart_basis
    rows = [[Fraction(b[i]) for b in basis] for i in range(shell.ambient_dim)]
    # solve basis^T m = chart_normal, i.e. (rows^T) with unknown m of length d
    mat = [[rows[i][j] for i in range(shell.ambient_dim)] for j in range(len(basis))]
    sol = linalg.solve(mat, [Fraction(x) for x in chart_normal])
    assert sol is not None
    return clear_denominators(sol)


def halfspace_intersection(halfspaces, ambient_dim, lattice=N_LATTICE) -> Polytope:
    """Exact V-rep of a bounded nonempty intersection of halfspaces."""
    if not halfspaces:
        raise EmptyInput("no halfspaces given")
    cons = []
    int_rows = []
    for h in halfspaces:
        if isinstance(h, HalfSpace):
            n, b = h.normal, h.bound
        else:
            n, b = h
        if len(n) != ambient_dim:
            raise DimensionMismatch("halfspace normal length mismatch")
        cons.append((frac_vec(n), Fraction(b)))
        int_rows.append(clear_denominators(tuple(n) + (Fraction(b),)))
    bound = hadamard_bound(int_rows, ambient_dim)
    verts, _ = _dd_vertices(cons, ambient_dim, bound)
    if not verts:
        raise Empty("halfspace intersection is empty")
    return convex_hull(verts, ambient_dim, lattice=lattice)


def polar_dual(p: Polytope) -> Polytope:
    """Dual polytope {m : <m, n> <= 1 for all n in P}; flips the lattice tag."""
    if p.dim < p.ambient_dim:
        raise OriginNotInterior("polytope is not full-dimensional")
    if not p.contains_interior([0] * p.ambient_dim):
        raise OriginNotInterior("origin is not interior to the polytope")
    dual_pts = [tuple(Fraction(c) / f.bound for c in f.normal) for f in p.facets]
    return convex_hull(dual_pts, p.ambient_dim, lattice=opposite_lattice(p.lattice))


def is_reflexive(p: Polytope) -> bool:
    """Integral vertices, 0 strictly interior, integral dual vertices."""
    if p.dim < p.ambient_dim:
        return False
    if any(c.denominator != 1 for v in p.vertices for c in v):
        return False
    if not p.contains_interior([0] * p.ambient_dim):
        return False
    for f in p.facets:
        if any(Fraction(c) % f.bound != 0 for c in f.normal):
            return False
    return True


def minkowski_sum(p: Polytope, q: Polytope) -> Polytope:
    """Hull of pairwise vertex sums."""
    if p.ambient_dim != q.ambient_dim:
        raise DimensionMismatch("Minkowski sum needs equal ambient dimension")
    if p.lattice != q.lattice:
        raise DimensionMismatch("Minkowski sum needs matching lattice tags")
    sums = {tuple(a + b for a, b in zip(u, v))
            for u in p.vertices for v in q.vertices}
    return convex_hull(sorted(sums), p.ambient_dim, lattice=p.lattice)


def minkowski_sum_all(polys) -> Polytope:
    polys = list(polys)
    acc = polys[0]
    for q in polys[1:]:
        acc = minkowski_sum(acc, q)
    return acc


def face_lattice(p: Polytope) -> "FaceLattice":
    return p.face_lattice


def lattice_points(p: Polytope) -> list[LatticeVector]:
    return [LatticeVector(pt, p.lattice) for pt in p.lattice_point_list()]


# ---------------------------------------------------------------------------
# face lattice


class FaceLattice:
    """All proper faces of a polytope, grouped by dimension.

    Faces are closed under intersection; each carries the full set of facet
    indices it saturates.  The polytope itself and the empty face are not
    listed.
    """

    def __init__(self, per_dim, by_ids):
        self.per_dim = per_dim            # dim -> tuple of Face
        self.by_ids = by_ids              # frozenset of vertex ids -> Face

    def all_faces(self):
        for d in sorted(self.per_dim):
            yield from self.per_dim[d]

    def euler_characteristic_boundary(self) -> int:
        return sum((-1) ** d * len(fs) for d, fs in self.per_dim.items())


def _build_face_lattice(p: Polytope) -> FaceLattice:
    nv = len(p.vertices)
    if p.dim == 0 or nv == 1:
        return FaceLattice({}, {})
    facet_sets = []
    for f in p.facets:
        facet_sets.append(frozenset(i for i, v in enumerate(p.vertices) if f.saturates(v)))
    todo = set(facet_sets)
    seen = set(facet_sets)
    while todo:
        nxt = set()
        for a in todo:
            for b in facet_sets:
                c = a & b
                if c and c not in seen:
                    seen.add(c)
                    nxt.add(c)
        todo = nxt
    per_dim: dict[int, list[Face]] = {}
    by_ids = {}
    full = frozenset(range(nv))
    for ids in seen:
        if ids == full:
            continue
        coords = [p.vertices[i] for i in sorted(ids)]
        d = rank([vec_sub(c, coords[0]) for c in coords[1:]]) if len(coords) > 1 else 0
        sat = frozenset(i for i, fs in enumerate(facet_sets) if ids <= fs)
        face = Face(tuple(sorted(ids)), d, sat)
        per_dim.setdefault(d, []).append(face)
        by_ids[ids] = face
    for d in per_dim:
        per_dim[d] = tuple(sorted(per_dim[d], key=lambda f: f.vertex_ids))
    return FaceLattice(per_dim, by_ids)


def _normalized_volume(p: Polytope, memo) -> Fraction:
    key = frozenset(p.vertices)
    if key in memo:
        return memo[key]
    if p.dim == 0:
        memo[key] = Fraction(1)
        return memo[key]
    if len(p.vertices) == p.dim + 1:
        base = p.to_chart(p.vertices[0])
        rows = [vec_sub(p.to_chart(v), base) for v in p.vertices[1:]]
        memo[key] = abs(linalg.det(rows))
        return memo[key]
    base_chart = p.to_chart(p.vertices[0])
    total = Fraction(0)
    chart_pts = {v: p.to_chart(v) for v in p.vertices}
    for n, b in p._chart_facets:
        h = b - dot(n, base_chart)
        if h == 0:
            continue
        face_verts = [v for v in p.vertices if dot(n, chart_pts[v]) == b]
        sub = convex_hull(face_verts, p.ambient_dim, lattice=p.lattice)
        total += h * _normalized_volume(sub, memo)
    memo[key] = total
    return total
