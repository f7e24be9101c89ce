"""The combinatorial discriminant graph.

Vertices sit at barycenters of non-smooth top cells of Sigma.  Two vertices
are joined when the closures of their cells share a codimension-one
interface that is itself non-smooth; the interface dimensions are computed
part-wise from the declared cell points.  For threefolds the vertices are
classified as positive (2,1), negative (1,2), bivalent (mixed parallelogram
cells joining exactly two non-smooth neighbours), or simple double points
(two strands of different families crossing in one cell).

Bivalent vertices can be smoothed away and carry no Euler contribution; the
graph Euler number is #positive - #negative.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, replace
from fractions import Fraction

from .errors import (
    InvalidSubdivision,
    UnclassifiableCell,
    UnsupportedDimension,
)
from .geometry import Polytope, convex_hull
from .linalg import rank, vec_sub
from .sigma import CayleySubdivision, SigmaCell, _intersect, _vertex_set

POSITIVE = "positive"
NEGATIVE = "negative"
BIVALENT = "bivalent"
DOUBLE_POINT = "double_point"


@dataclass(frozen=True)
class DiscriminantVertex:
    id: int
    cell_index: int
    position: tuple[Fraction, ...]
    dims: tuple[int, int]
    families: tuple[int, ...]
    s_face: tuple[int, ...]
    t_face: tuple[int, ...]
    kind: str | None = None
    valence: int = 0


@dataclass(frozen=True)
class DiscriminantEdge:
    u: int
    v: int
    family: tuple[int, ...]
    interface_sigma: tuple[tuple[tuple[int, ...], ...], ...]
    interface_tau: tuple[tuple[tuple[int, ...], ...], ...]
    strand: int | None = None


@dataclass(frozen=True)
class DiscriminantGraph:
    n: int
    vertices: tuple[DiscriminantVertex, ...]
    edges: tuple[DiscriminantEdge, ...]
    closed_loops: int = 0
    classified: bool = False
    smoothed: bool = False

    def adjacency(self) -> dict[int, list[int]]:
        adj: dict[int, list[int]] = {v.id: [] for v in self.vertices}
        for i, e in enumerate(self.edges):
            adj[e.u].append(i)
            adj[e.v].append(i)
        return adj

    def counts(self) -> dict[str, int]:
        out = {POSITIVE: 0, NEGATIVE: 0, BIVALENT: 0, DOUBLE_POINT: 0, "unsigned": 0}
        for v in self.vertices:
            out[v.kind if v.kind else "unsigned"] += 1
        return out

    def components(self) -> list[tuple[int, ...]]:
        parent = {v.id: v.id for v in self.vertices}

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for e in self.edges:
            ra, rb = find(e.u), find(e.v)
            if ra != rb:
                parent[ra] = rb
        groups: dict[int, list[int]] = {}
        for v in self.vertices:
            groups.setdefault(find(v.id), []).append(v.id)
        return sorted(tuple(sorted(g)) for g in groups.values())


def _interface(cell_a: SigmaCell, cell_b: SigmaCell):
    """Shared-interface data of two cells, or None when they cannot touch.

    Returns (sigma shared parts, tau shared parts, sigma dim, tau dim,
    interface families).  Soundness of the point-set intersection rests on
    the boundary-compatibility validation done when the cells were built.
    """
    s_shared = []
    for pa, pb in zip(cell_a.sigma_parts, cell_b.sigma_parts):
        common = sorted(set(pa) & set(pb))
        if not common:
            return None
        s_shared.append(tuple(common))
    t_shared = []
    for pa, pb in zip(cell_a.tau_parts, cell_b.tau_parts):
        common = sorted(set(pa) & set(pb))
        if not common:
            return None
        t_shared.append(tuple(common))
    s_dims = [_dim_of(part) for part in s_shared]
    t_dims = [_dim_of(part) for part in t_shared]
    s_dim = _sum_dim(s_shared)
    t_dim = _sum_dim(t_shared)
    fams = tuple(i for i, (a, b) in enumerate(zip(s_dims, t_dims)) if a * b > 0)
    return tuple(s_shared), tuple(t_shared), s_dim, t_dim, fams


def _dim_of(points) -> int:
    if len(points) <= 1:
        return 0
    base = points[0]
    return rank([vec_sub(p, base) for p in points[1:]])


def _sum_dim(parts) -> int:
    dirs = []
    for part in parts:
        base = part[0]
        dirs.extend(vec_sub(p, base) for p in part[1:])
    return rank(dirs) if dirs else 0


def build_discriminant(cells: list[SigmaCell]) -> DiscriminantGraph:
    """One vertex per non-smooth cell; edges through non-smooth codim-1 interfaces."""
    if not cells:
        return DiscriminantGraph(n=0, vertices=(), edges=())
    dims = {c.sigma_delta.dim + c.tau_nabla.dim for c in cells}
    if len(dims) != 1:
        raise UnsupportedDimension(f"cells of mixed total dimension {sorted(dims)}")
    n = dims.pop()

    nodes = [c for c in cells if not c.smooth]
    vertices = []
    index_of = {}
    for vid, cell in enumerate(nodes):
        index_of[cell.index] = vid
        pos = cell.sigma_delta.barycenter() + cell.tau_nabla.barycenter()
        fams = cell.families
        vertices.append(
            DiscriminantVertex(
                id=vid,
                cell_index=cell.index,
                position=pos,
                dims=(cell.sigma_delta.dim, cell.tau_nabla.dim),
                families=fams,
                s_face=cell.pair.s.face.vertex_ids,
                t_face=cell.pair.t.face.vertex_ids,
            )
        )

    # candidate pairs share at least one tau point and one sigma point
    by_tau_point: dict[tuple, list[int]] = {}
    for i, cell in enumerate(nodes):
        for pt in set(itertools.chain.from_iterable(cell.tau_parts)):
            by_tau_point.setdefault(pt, []).append(i)
    candidates = set()
    for bucket in by_tau_point.values():
        for i, j in itertools.combinations(bucket, 2):
            candidates.add((i, j))

    edges = []
    for i, j in sorted(candidates):
        info = _interface(nodes[i], nodes[j])
        if info is None:
            continue
        s_shared, t_shared, s_dim, t_dim, fams = info
        if s_dim + t_dim != n - 1:
            continue
        if not fams:
            continue
        edges.append(
            DiscriminantEdge(
                u=i, v=j, family=fams,
                interface_sigma=s_shared, interface_tau=t_shared,
            )
        )

    valence: dict[int, int] = {v.id: 0 for v in vertices}
    for e in edges:
        valence[e.u] += 1
        valence[e.v] += 1
    vertices = [replace(v, valence=valence[v.id]) for v in vertices]
    return DiscriminantGraph(n=n, vertices=tuple(vertices), edges=tuple(edges))


def classify_vertices(graph: DiscriminantGraph,
                      cells: list[SigmaCell]) -> DiscriminantGraph:
    """Assign positive/negative/bivalent/double_point kinds (threefolds only)."""
    if graph.n != 3:
        raise UnsupportedDimension(
            f"vertex sign classification is defined for n = 3, got n = {graph.n}"
        )
    by_index = {c.index: c for c in cells}
    adj = graph.adjacency()
    new_vertices = []
    for v in graph.vertices:
        cell = by_index[v.cell_index]
        sdims = [a for a, _ in cell.component_dims]
        tdims = [b for _, b in cell.component_dims]
        mixed = sum(1 for x in sdims if x >= 1) >= 2 or sum(1 for x in tdims if x >= 1) >= 2
        edge_fams = [graph.edges[i].family for i in adj[v.id]]
        if mixed:
            if v.valence != 2:
                raise UnclassifiableCell(
                    f"mixed cell {v.cell_index} has valence {v.valence}, expected 2"
                )
            kind = BIVALENT
        elif v.valence == 4 and len(set(edge_fams)) == 2 and all(
            edge_fams.count(f) == 2 for f in set(edge_fams)
        ):
            kind = DOUBLE_POINT
        elif v.dims == (1, 2):
            kind = NEGATIVE
        elif v.dims == (2, 1):
            kind = POSITIVE
        else:
            raise UnclassifiableCell(
                f"cell {v.cell_index} with dims {v.dims} fits no vertex class"
            )
        new_vertices.append(replace(v, kind=kind))

    # bivalent vertices equate the monodromy of their two edges: label strands
    parent = list(range(len(graph.edges)))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for v in new_vertices:
        if v.kind == BIVALENT:
            e1, e2 = adj[v.id]
            ra, rb = find(e1), find(e2)
            if ra != rb:
                parent[ra] = rb
    strands = {}
    new_edges = []
    for i, e in enumerate(graph.edges):
        root = find(i)
        strands.setdefault(root, len(strands))
        new_edges.append(replace(e, strand=strands[root]))

    return DiscriminantGraph(
        n=graph.n,
        vertices=tuple(new_vertices),
        edges=tuple(new_edges),
        closed_loops=graph.closed_loops,
        classified=True,
    )


def smooth_bivalent(graph: DiscriminantGraph) -> DiscriminantGraph:
    """Remove bivalent vertices, concatenating their edge pairs.

    Cycles made of bivalent vertices only collapse to closed loops, counted
    in closed_loops.  Double points are retained (they carry no sign).
    """
    if not graph.classified:
        raise UnclassifiableCell("graph must be classified before smoothing")
    bivalent = {v.id for v in graph.vertices if v.kind == BIVALENT}
    keep = [v for v in graph.vertices if v.id not in bivalent]
    adj = graph.adjacency()

    def other_end(edge, vid):
        return edge.v if edge.u == vid else edge.u

    new_edges = []
    consumed = set()
    # chains starting and ending at kept vertices; each is discovered once
    # because its constituent edges are consumed on first traversal
    for v in keep:
        for eidx in adj[v.id]:
            if eidx in consumed:
                continue
            path = [eidx]
            cur = other_end(graph.edges[eidx], v.id)
            while cur in bivalent:
                nxt = [i for i in adj[cur] if i != path[-1]]
                path.append(nxt[0])
                cur = other_end(graph.edges[nxt[0]], cur)
            consumed.update(path)
            first = graph.edges[path[0]]
            new_edges.append(
                DiscriminantEdge(
                    u=v.id, v=cur,
                    family=tuple(sorted(set(itertools.chain.from_iterable(
                        graph.edges[i].family for i in path)))),
                    interface_sigma=first.interface_sigma,
                    interface_tau=first.interface_tau,
                    strand=first.strand,
                )
            )

    # all-bivalent cycles never reach a kept vertex
    loops = graph.closed_loops
    for vid in sorted(bivalent):
        pending = [i for i in adj[vid] if i not in consumed]
        if not pending:
            continue
        loops += 1
        cur = vid
        prev = None
        while True:
            nxt = [i for i in adj[cur] if i not in consumed and i != prev]
            if not nxt:
                break
            consumed.add(nxt[0])
            prev = nxt[0]
            cur = other_end(graph.edges[nxt[0]], cur)
            if cur == vid:
                break

    edges = tuple(sorted(new_edges, key=lambda e: (e.u, e.v, e.strand or 0)))
    valence = {v.id: 0 for v in keep}
    for e in edges:
        valence[e.u] += 1
        valence[e.v] += 1
    keep = tuple(replace(v, valence=valence[v.id]) for v in keep)
    return DiscriminantGraph(
        n=graph.n, vertices=keep, edges=edges,
        closed_loops=loops, classified=True, smoothed=True,
    )


def graph_euler(graph: DiscriminantGraph) -> int:
    """#positive - #negative; bivalent and double-point vertices contribute 0."""
    counts = graph.counts()
    return counts[POSITIVE] - counts[NEGATIVE]


# ---------------------------------------------------------------------------
# tropical dual graphs of subdivided polygons


@dataclass(frozen=True)
class TropicalDualGraph:
    nodes: tuple[tuple[Fraction, ...], ...]
    edges: tuple[tuple[int, int], ...]
    rays: tuple[tuple[int, tuple[int, ...]], ...]   # (node, outward normal)
    loop_count: int


def tropical_dual_graph(polygon: Polytope,
                        triangulation: CayleySubdivision) -> TropicalDualGraph:
    """Dual graph of a subdivided lattice polygon.

    One node per 2-cell, an edge whenever two cells share a segment, and one
    unbounded ray for every boundary edge of the subdivision.  The number of
    independent loops equals the number of interior lattice points used by a
    unimodular triangulation.
    """
    if polygon.dim != 2:
        raise UnsupportedDimension("tropical dual graphs need a 2-dimensional polygon")
    cell_polys = []
    cell_points = []
    for cell in triangulation.cells:
        pts = cell.all_points
        poly = convex_hull(pts, polygon.ambient_dim, lattice=polygon.lattice)
        if poly.dim != 2:
            raise InvalidSubdivision("subdivision cell is not 2-dimensional")
        for p in pts:
            if not polygon.contains(p):
                raise InvalidSubdivision(f"cell point {list(p)} outside the polygon")
        cell_polys.append(poly)
        cell_points.append(set(pts))
    total = sum(p.volume for p in cell_polys)
    if total != polygon.volume:
        raise InvalidSubdivision(
            f"cell volumes sum to {total}, polygon volume is {polygon.volume}"
        )
    for i, j in itertools.combinations(range(len(cell_polys)), 2):
        inter = _intersect(cell_polys[i], cell_polys[j])
        shared = _vertex_set(cell_points[i] & cell_points[j])
        if inter is None:
            if shared:
                raise InvalidSubdivision("cells share points without intersecting")
            continue
        if tuple(tuple(int(c) for c in v) for v in inter.vertices) != shared:
            raise InvalidSubdivision("cells do not meet in a common face")

    nodes = tuple(p.barycenter() for p in cell_polys)
    edges = []
    for i, j in itertools.combinations(range(len(cell_polys)), 2):
        shared = cell_points[i] & cell_points[j]
        if shared and _dim_of(sorted(shared)) == 1:
            edges.append((i, j))

    rays = []
    for i, poly in enumerate(cell_polys):
        for face in poly.face_lattice.per_dim.get(1, ()):
            verts = [poly.vertices[k] for k in face.vertex_ids]
            for f in polygon.facets:
                if all(f.saturates(v) for v in verts):
                    rays.append((i, f.normal))
    rays.sort()

    loop_count = len(edges) - len(nodes) + _component_count(len(nodes), edges)
    return TropicalDualGraph(
        nodes=nodes, edges=tuple(sorted(edges)), rays=tuple(rays),
        loop_count=loop_count,
    )


def _component_count(n, edges) -> int:
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for u, v in edges:
        ru, rv = find(u), find(v)
        if ru != rv:
            parent[ru] = rv
    return len({find(i) for i in range(n)})
