"""The polytopal complex Sigma inside delta x nabla.

Transversal faces of nabla_check (side "nabla_check") and of delta_check
(side "delta_check") meet every part of the nef partition; their per-part
Minkowski sums are faces of delta resp. nabla.  Adjoint pairs (s, t) satisfy
dim s_delta + dim t_nabla = n with constant pairing r, and the products
s_delta x t_nabla tile |Sigma| = {(x, y) : <x, y> = r}.

User-supplied subdivisions of the transversal faces refine the complex into
cells (sigma_delta, tau_nabla); smooth cells have dim sigma^(i) * dim tau^(i)
= 0 for every part.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

from .errors import (
    InconsistentDuality,
    InvalidSubdivision,
    MalformedInput,
    NotAComplex,
)
from .geometry import Face, Polytope, clip_polytope, convex_hull, minkowski_sum_all
from .linalg import rank, vec_sub
from .nef import NefPartitionData
from . import jsonio

NABLA_CHECK_SIDE = "nabla_check"
DELTA_CHECK_SIDE = "delta_check"
SIDES = (NABLA_CHECK_SIDE, DELTA_CHECK_SIDE)


@dataclass(frozen=True)
class TransversalFace:
    """Proper face meeting every part, with components and Minkowski sum face."""

    side: str
    face: Face
    components: tuple[Polytope, ...]
    component_dims: tuple[int, ...]
    sum_polytope: Polytope
    sum_face: Face

    @property
    def key(self) -> tuple:
        return (self.side, self.face.vertex_ids)


@dataclass(frozen=True)
class AdjointPair:
    """s on the nabla_check side, t on the delta_check side.

    dim s_delta + dim t_nabla = n and <s_delta, t_nabla> is constantly r.
    """

    s: TransversalFace
    t: TransversalFace


def _carrier(data: NefPartitionData, side: str):
    if side == NABLA_CHECK_SIDE:
        return data.nabla_check, data.partition.part_of, data.delta
    if side == DELTA_CHECK_SIDE:
        return data.delta_check, data.dual_part_of, data.nabla
    raise MalformedInput(f"unknown side {side!r}")


def transversal_faces(data: NefPartitionData, side: str) -> list[TransversalFace]:
    """All proper faces whose intersection with every part is nonempty."""
    carrier, part_of, target = _carrier(data, side)
    target_index = {
        frozenset(target.vertices[i] for i in f.vertex_ids): f
        for f in target.face_lattice.all_faces()
    }
    out = []
    for face in carrier.face_lattice.all_faces():
        split: list[list] = [[] for _ in range(data.r)]
        for vid in face.vertex_ids:
            split[part_of(vid)].append(carrier.vertices[vid])
        if any(not part for part in split):
            continue
        components = tuple(
            convex_hull(part, carrier.ambient_dim, lattice=carrier.lattice)
            for part in split
        )
        sum_poly = minkowski_sum_all(components)
        sum_poly = convex_hull(sum_poly.vertices, target.ambient_dim,
                               lattice=target.lattice)
        sum_face = target_index.get(frozenset(sum_poly.vertices))
        if sum_face is None:
            raise InconsistentDuality(
                f"Minkowski sum of face {face.vertex_ids} on side {side} "
                "is not a face of the target polytope"
            )
        out.append(
            TransversalFace(
                side=side,
                face=face,
                components=components,
                component_dims=tuple(c.dim for c in components),
                sum_polytope=sum_poly,
                sum_face=sum_face,
            )
        )
    out.sort(key=lambda tf: (tf.face.dim, tf.face.vertex_ids))
    return out


def minimal_transversal_faces(faces: list[TransversalFace]) -> list[TransversalFace]:
    """Faces with a single vertex per part: the (r-1)-simplices."""
    return [tf for tf in faces if all(len(c.vertices) == 1 for c in tf.components)]


def adjoint_pairs(data: NefPartitionData,
                  s_faces=None, t_faces=None) -> list[AdjointPair]:
    """All adjoint pairs; raises InconsistentDuality unless the pairing is a bijection."""
    n = data.cy_dim
    r = data.r
    if s_faces is None:
        s_faces = transversal_faces(data, NABLA_CHECK_SIDE)
    if t_faces is None:
        t_faces = transversal_faces(data, DELTA_CHECK_SIDE)
    pairs = []
    matched_s: dict[tuple, int] = {}
    matched_t: dict[tuple, int] = {}
    for s in s_faces:
        for t in t_faces:
            if s.sum_face.dim + t.sum_face.dim != n:
                continue
            if _constant_pairing(s.sum_polytope, t.sum_polytope, r):
                pairs.append(AdjointPair(s=s, t=t))
                matched_s[s.key] = matched_s.get(s.key, 0) + 1
                matched_t[t.key] = matched_t.get(t.key, 0) + 1
    for face_list, matched, label in ((s_faces, matched_s, NABLA_CHECK_SIDE),
                                      (t_faces, matched_t, DELTA_CHECK_SIDE)):
        for tf in face_list:
            count = matched.get(tf.key, 0)
            if count != 1:
                raise InconsistentDuality(
                    f"transversal face {tf.face.vertex_ids} on side {label} "
                    f"has {count} adjoint faces (expected exactly one)"
                )
    pairs.sort(key=lambda p: (p.s.face.vertex_ids, p.t.face.vertex_ids))
    return pairs


def _constant_pairing(p: Polytope, q: Polytope, value) -> bool:
    for x in p.vertices:
        for y in q.vertices:
            if sum(a * b for a, b in zip(x, y)) != value:
                return False
    return True


# ---------------------------------------------------------------------------
# subdivisions


@dataclass(frozen=True)
class SubdivisionCell:
    """One cell, given by its per-part point lists (lattice points of the face)."""

    parts: tuple[tuple[tuple[int, ...], ...], ...]

    @property
    def all_points(self) -> tuple[tuple[int, ...], ...]:
        return tuple(p for part in self.parts for p in part)


@dataclass(frozen=True)
class CayleySubdivision:
    """Subdivision of one transversal face into cells with per-part components."""

    side: str
    face_vertex_ids: tuple[int, ...]
    cells: tuple[SubdivisionCell, ...]

    @property
    def key(self) -> tuple:
        return (self.side, self.face_vertex_ids)


def subdivision_to_doc(sub: CayleySubdivision) -> dict:
    return {
        "side": sub.side,
        "face": list(sub.face_vertex_ids),
        "cells": [
            {"parts": [[list(pt) for pt in part] for part in cell.parts]}
            for cell in sub.cells
        ],
    }


def subdivision_from_doc(doc) -> CayleySubdivision:
    try:
        side = doc["side"]
        ids = tuple(sorted(jsonio.decode_int(v) for v in doc["face"]))
        cells = []
        for cdoc in doc["cells"]:
            parts = tuple(
                tuple(sorted(tuple(jsonio.decode_int(x) for x in pt) for pt in part))
                for part in cdoc["parts"]
            )
            cells.append(SubdivisionCell(parts=parts))
    except (KeyError, TypeError) as exc:
        raise MalformedInput(f"bad subdivision document: {exc}") from exc
    if side not in SIDES:
        raise MalformedInput(f"bad subdivision side {side!r}")
    return CayleySubdivision(side=side, face_vertex_ids=ids, cells=tuple(cells))


def trivial_subdivision(tf: TransversalFace) -> CayleySubdivision:
    parts = tuple(
        tuple(sorted(tuple(int(c) for c in v) for v in comp.vertices))
        for comp in tf.components
    )
    return CayleySubdivision(
        side=tf.side,
        face_vertex_ids=tf.face.vertex_ids,
        cells=(SubdivisionCell(parts=parts),),
    )


def _face_polytope(data: NefPartitionData, side: str, face: Face,
                   memo: dict | None = None) -> Polytope:
    key = (side, face.vertex_ids)
    if memo is not None and key in memo:
        return memo[key]
    carrier, _, _ = _carrier(data, side)
    poly = convex_hull([carrier.vertices[i] for i in face.vertex_ids],
                       carrier.ambient_dim, lattice=carrier.lattice)
    if memo is not None:
        memo[key] = poly
    return poly


def _vertex_set(points) -> tuple[tuple[int, ...], ...]:
    """Canonical vertex list of the hull of integer points."""
    pts = sorted(set(points))
    if len(pts) <= 2:
        return tuple(pts)
    base = pts[0]
    if rank([vec_sub(p, base) for p in pts[1:]]) == len(pts) - 1:
        return tuple(pts)  # affinely independent: all are vertices
    hull = convex_hull(pts, len(pts[0]))
    return tuple(tuple(int(c) for c in v) for v in hull.vertices)


def validate_subdivision(data: NefPartitionData, tf: TransversalFace,
                         sub: CayleySubdivision) -> None:
    """Volume additivity, common-face condition, and part membership.

    All geometry runs in the face's lattice chart, where the cells are
    full-dimensional and intersections stay small.
    """
    if sub.side != tf.side or sub.face_vertex_ids != tf.face.vertex_ids:
        raise InvalidSubdivision("subdivision does not reference the given face")
    if not sub.cells:
        raise InvalidSubdivision("subdivision has no cells")
    face_poly = _face_polytope(data, tf.side, tf.face)
    k = face_poly.dim

    cell_polys = []
    chart_pts_per_cell = []
    for cell in sub.cells:
        if len(cell.parts) != data.r:
            raise InvalidSubdivision(
                f"cell has {len(cell.parts)} parts, expected {data.r}"
            )
        for i, part in enumerate(cell.parts):
            if not part:
                raise InvalidSubdivision(f"cell component {i} is empty")
            for pt in part:
                if not tf.components[i].contains(pt):
                    raise InvalidSubdivision(
                        f"point {list(pt)} is not in component {i} of the face",
                        certificate={"point": list(pt), "part": i},
                    )
        chart_pts = {p: tuple(int(c) for c in face_poly.to_chart(p))
                     for p in cell.all_points}
        poly = convex_hull(list(chart_pts.values()), k)
        if poly.dim != k:
            raise InvalidSubdivision(
                f"cell {list(map(list, cell.all_points))} is not full-dimensional "
                "in the face"
            )
        cell_polys.append(poly)
        chart_pts_per_cell.append(set(chart_pts.values()))

    total = sum(p.volume for p in cell_polys)
    if total != face_poly.volume:
        raise InvalidSubdivision(
            f"cell volumes sum to {total}, face volume is {face_poly.volume}"
        )

    boxes = [_bounding_box(p) for p in cell_polys]
    for i, j in itertools.combinations(range(len(cell_polys)), 2):
        if not _boxes_touch(boxes[i], boxes[j]):
            continue
        inter = _intersect(cell_polys[i], cell_polys[j])
        shared = _vertex_set(chart_pts_per_cell[i] & chart_pts_per_cell[j])
        if inter is None:
            if shared:
                raise InvalidSubdivision(
                    f"cells {i} and {j} share declared points but do not intersect"
                )
            continue
        if tuple(tuple(int(c) for c in v) for v in inter.vertices) != shared:
            raise InvalidSubdivision(
                f"cells {i} and {j} do not intersect in a common face"
            )


def _bounding_box(p: Polytope):
    los = tuple(min(v[i] for v in p.vertices) for i in range(p.ambient_dim))
    his = tuple(max(v[i] for v in p.vertices) for i in range(p.ambient_dim))
    return los, his


def _boxes_touch(a, b) -> bool:
    return all(al <= bh and bl <= ah
               for al, ah, bl, bh in zip(a[0], a[1], b[0], b[1]))


def _intersect(p: Polytope, q: Polytope) -> Polytope | None:
    """Exact intersection of two bounded polytopes, None when empty."""
    halfspaces = [(f.normal, f.bound) for f in q.facets]
    for n, b in q.equations:
        halfspaces.append((n, Fraction(b)))
        halfspaces.append((tuple(-c for c in n), Fraction(-b)))
    verts = clip_polytope(p, halfspaces)
    if verts is None:
        return None
    return convex_hull(verts, p.ambient_dim, lattice=p.lattice)


# ---------------------------------------------------------------------------
# sigma cells


@dataclass(frozen=True)
class SigmaCell:
    """Product cell sigma_delta x tau_nabla over an adjoint pair."""

    index: int
    pair: AdjointPair
    sigma_parts: tuple[tuple[tuple[int, ...], ...], ...]
    tau_parts: tuple[tuple[tuple[int, ...], ...], ...]
    sigma_delta: Polytope
    tau_nabla: Polytope
    component_dims: tuple[tuple[int, int], ...]
    smooth: bool

    @property
    def dims(self) -> tuple[int, int]:
        return (self.sigma_delta.dim, self.tau_nabla.dim)

    @property
    def families(self) -> tuple[int, ...]:
        """Parts whose sigma- and tau-components are both positive-dimensional."""
        return tuple(i for i, (a, b) in enumerate(self.component_dims) if a * b > 0)


def _part_dims(parts) -> tuple[int, ...]:
    dims = []
    for part in parts:
        base = part[0]
        dims.append(rank([vec_sub(p, base) for p in part[1:]]) if len(part) > 1 else 0)
    return tuple(dims)


def _mixed_polytope(parts, ambient_dim, lattice, memo=None):
    key = (parts, lattice)
    if memo is not None and key in memo:
        return memo[key]
    sums = [tuple(sum(c) for c in zip(*combo))
            for combo in itertools.product(*parts)]
    poly = convex_hull(sums, ambient_dim, lattice=lattice)
    if memo is not None:
        memo[key] = poly
    return poly


def sigma_cells(data: NefPartitionData,
                subdivisions=(),
                validate: bool = True) -> list[SigmaCell]:
    """All product cells of Sigma for the given (possibly partial) subdivisions.

    Faces without provided subdivisions are taken whole.  Provided
    subdivisions are validated per face and checked for compatibility along
    shared boundary faces of the two carrier polytopes.
    """
    s_faces = transversal_faces(data, NABLA_CHECK_SIDE)
    t_faces = transversal_faces(data, DELTA_CHECK_SIDE)
    pairs = adjoint_pairs(data, s_faces, t_faces)
    by_key = {tf.key: tf for tf in s_faces + t_faces}

    subs: dict[tuple, CayleySubdivision] = {}
    for sub in subdivisions:
        if sub.key in subs:
            raise InvalidSubdivision(f"duplicate subdivision for face {sub.key}")
        tf = by_key.get(sub.key)
        if tf is None:
            raise InvalidSubdivision(
                f"subdivision references {sub.key}, which is not a transversal face"
            )
        if validate:
            validate_subdivision(data, tf, sub)
        subs[sub.key] = sub
    if validate:
        _check_boundary_compatibility(data, subs, by_key)

    n_lat = data.nabla_check.lattice
    m_lat = data.delta_check.lattice
    d = data.d

    raw = []
    for pair in pairs:
        s_sub = subs.get(pair.s.key) or trivial_subdivision(pair.s)
        t_sub = subs.get(pair.t.key) or trivial_subdivision(pair.t)
        for scell in s_sub.cells:
            for tcell in t_sub.cells:
                raw.append((pair, scell, tcell))

    raw.sort(key=lambda item: (item[0].s.face.vertex_ids,
                               item[0].t.face.vertex_ids,
                               item[1].parts, item[2].parts))
    cells = []
    memo: dict = {}
    for idx, (pair, scell, tcell) in enumerate(raw):
        sdims = _part_dims(scell.parts)
        tdims = _part_dims(tcell.parts)
        comp = tuple(zip(sdims, tdims))
        cells.append(
            SigmaCell(
                index=idx,
                pair=pair,
                sigma_parts=scell.parts,
                tau_parts=tcell.parts,
                sigma_delta=_mixed_polytope(scell.parts, d, n_lat, memo),
                tau_nabla=_mixed_polytope(tcell.parts, d, m_lat, memo),
                component_dims=comp,
                smooth=all(a * b == 0 for a, b in comp),
            )
        )
    return cells


def _check_boundary_compatibility(data, subs, by_key) -> None:
    """Subdivided faces must induce identical cell sets on shared boundary faces."""
    memo: dict = {}
    for side in SIDES:
        carrier, _, _ = _carrier(data, side)
        keys = sorted(k for k in subs if k[0] == side)
        for ka, kb in itertools.combinations(keys, 2):
            shared_ids = frozenset(ka[1]) & frozenset(kb[1])
            if not shared_ids:
                continue
            shared_face = carrier.face_lattice.by_ids.get(shared_ids)
            if shared_face is None:
                continue
            hpoly = _face_polytope(data, side, shared_face, memo)
            ra = _restriction(subs[ka], hpoly)
            rb = _restriction(subs[kb], hpoly)
            if ra != rb:
                raise InvalidSubdivision(
                    f"subdivisions of faces {ka[1]} and {kb[1]} disagree on their "
                    f"shared face {tuple(sorted(shared_ids))}"
                )
        # a provided subdivision of a sub-face must match the restriction too
        for ka, kb in itertools.permutations(keys, 2):
            if set(kb[1]) < set(ka[1]):
                hpoly = _face_polytope(data, side, by_key[kb].face, memo)
                ra = _restriction(subs[ka], hpoly)
                rb = _restriction(subs[kb], hpoly)
                if ra != rb:
                    raise InvalidSubdivision(
                        f"subdivision of face {kb[1]} does not match the restriction "
                        f"of the subdivision of {ka[1]}"
                    )


def _restriction(sub: CayleySubdivision, hpoly: Polytope) -> frozenset:
    """Top-dimensional induced cells on a boundary face, as vertex sets."""
    out = set()
    for cell in sub.cells:
        pts = [p for p in cell.all_points if hpoly.contains(p)]
        if len(pts) <= hpoly.dim:
            continue
        base = pts[0]
        if rank([vec_sub(p, base) for p in pts[1:]]) == hpoly.dim:
            out.add(_vertex_set(pts))
    return frozenset(out)


# ---------------------------------------------------------------------------
# Euler characteristic of the complex


def sigma_euler(cells: list[SigmaCell]) -> int:
    """Alternating cell count of the closure; equals 1 + (-1)^n for S^n.

    Raises NotAComplex when the provided cells cannot close up into a
    polytopal complex (for instance when a face was taken whole while one of
    its boundary faces carries a nontrivial subdivision).
    """
    if not cells:
        raise NotAComplex("no cells given")
    _check_closure_consistency(cells)
    seen: dict[tuple, int] = {}
    for cell in cells:
        sfaces = _face_coord_sets(cell.sigma_delta)
        tfaces = _face_coord_sets(cell.tau_nabla)
        for scoords, sdim in sfaces:
            for tcoords, tdim in tfaces:
                key = (scoords, tcoords)
                seen[key] = sdim + tdim
    counts: dict[int, int] = {}
    for dim in seen.values():
        counts[dim] = counts.get(dim, 0) + 1
    return sum((-1) ** d * c for d, c in counts.items())


def _face_coord_sets(p: Polytope):
    out = [(frozenset(p.vertices), p.dim)]
    for face in p.face_lattice.all_faces():
        coords = frozenset(p.vertices[i] for i in face.vertex_ids)
        out.append((coords, face.dim))
    return out


def _check_closure_consistency(cells) -> None:
    """A face taken whole must not contain a subdivided proper face."""
    per_face: dict[tuple, set] = {}
    face_ids: dict[tuple, tuple] = {}
    for cell in cells:
        for tf, parts in ((cell.pair.s, cell.sigma_parts),
                          (cell.pair.t, cell.tau_parts)):
            per_face.setdefault(tf.key, set()).add(parts)
            face_ids[tf.key] = tf.face.vertex_ids
    for ka, cells_a in per_face.items():
        if len(cells_a) > 1:
            continue
        for kb, cells_b in per_face.items():
            if kb[0] != ka[0] or len(cells_b) <= 1:
                continue
            if set(face_ids[kb]) < set(face_ids[ka]):
                raise NotAComplex(
                    f"face {face_ids[ka]} on side {ka[0]} is taken whole but its "
                    f"boundary face {face_ids[kb]} is subdivided"
                )
