"""Regenerate the bundled instance documents under src/nefdisc/data/.

Subdivisions are produced as regular subdivisions from one global height
function on lattice points (a dominant paraboloid plus a deterministic hash
perturbation), so restrictions to shared boundary faces agree across faces
automatically.  Fineness and unimodularity of every cell are verified; for
Cayley polytopes of dilated simplices this pins down the cell-type counts
regardless of the particular generic heights chosen.

Run from the repository root:  python3 tools/generate_fixtures.py
"""

from __future__ import annotations

import hashlib
import pathlib
import sys

sys.path.insert(0, str(pathlib.Path(__file__).resolve().parent.parent / "src"))

from nefdisc import jsonio
from nefdisc.bundles import BundledInstance, instance_to_doc
from nefdisc.geometry import convex_hull
from nefdisc.nef import build_nef_data, projective_space_partition
from nefdisc.sigma import (
    DELTA_CHECK_SIDE,
    CayleySubdivision,
    SubdivisionCell,
    adjoint_pairs,
    sigma_cells,
)

DATA_DIR = pathlib.Path(__file__).resolve().parent.parent / "src" / "nefdisc" / "data"
PARABOLOID_SCALE = 1_000_003
PERTURBATION_RANGE = 997


def height(point, salt: str) -> int:
    para = PARABOLOID_SCALE * sum(c * c for c in point)
    digest = hashlib.sha256(f"{salt}|{tuple(point)}".encode()).digest()
    return para + int.from_bytes(digest[:8], "big") % PERTURBATION_RANGE


def lower_hull_cells(points, salt: str):
    """Cells of the regular subdivision induced by the height function.

    Every cell must be a unimodular simplex; returns None when the chosen
    perturbation fails to produce a fine triangulation (caller retries).
    """
    base_poly = convex_hull(points, len(points[0]))
    k = base_poly.dim
    chart = {p: tuple(int(c) for c in base_poly.to_chart(p)) for p in points}
    lifted = [chart[p] + (height(p, salt),) for p in points]
    of_lift = {chart[p] + (height(p, salt),): p for p in points}
    hull = convex_hull(lifted, k + 1)
    cells = []
    for facet in hull.facets:
        if facet.normal[k] >= 0:
            continue
        members = [of_lift[tuple(int(c) for c in v)]
                   for v in hull.vertices if facet.saturates(v)]
        if len(members) != k + 1:
            return None
        cell = convex_hull(members, len(points[0]))
        if cell.volume != 1:
            return None
        cells.append(tuple(sorted(tuple(int(c) for c in p) for p in members)))
    if len(set(lifted)) != len(points):
        return None
    used = {p for cell in cells for p in cell}
    if used != {tuple(int(c) for c in p) for p in points}:
        return None
    return sorted(cells)


def subdivide_face(tf, salt: str) -> CayleySubdivision | None:
    part_points = [comp.lattice_point_list() for comp in tf.components]
    all_points = [p for pts in part_points for p in pts]
    owners = {}
    for i, pts in enumerate(part_points):
        for p in pts:
            owners[p] = i
    cells = lower_hull_cells(all_points, salt)
    if cells is None:
        return None
    sub_cells = []
    for cell in cells:
        parts = [[] for _ in tf.components]
        for p in cell:
            parts[owners[p]].append(p)
        if any(not part for part in parts):
            return None
        sub_cells.append(
            SubdivisionCell(parts=tuple(tuple(sorted(x)) for x in parts))
        )
    return CayleySubdivision(
        side=tf.side,
        face_vertex_ids=tf.face.vertex_ids,
        cells=tuple(sub_cells),
    )


def build_instance(name: str, degrees) -> BundledInstance:
    partition = projective_space_partition(degrees)
    data = build_nef_data(partition)
    pairs = adjoint_pairs(data)
    faces = [pair.t for pair in pairs
             if pair.s.sum_face.dim >= 1 and pair.t.sum_face.dim >= 1]
    # one global salt per attempt: restrictions of a single global regular
    # subdivision agree on shared faces, per-face retries would not
    for attempt in range(16):
        salt = f"{name}#{attempt}"
        subs = []
        for tf in faces:
            sub = subdivide_face(tf, salt)
            if sub is None:
                break
            subs.append(sub)
        else:
            subs.sort(key=lambda s: (len(s.face_vertex_ids), s.face_vertex_ids))
            return BundledInstance(
                name=name, partition=partition, subdivisions=tuple(subs)
            )
    raise RuntimeError(f"no globally fine unimodular subdivision found for {name}")


def report(inst: BundledInstance) -> None:
    from nefdisc.discriminant import (
        build_discriminant,
        classify_vertices,
        graph_euler,
        smooth_bivalent,
    )

    data = build_nef_data(inst.partition)
    cells = sigma_cells(data, inst.subdivisions)
    graph = classify_vertices(build_discriminant(cells), cells)
    smoothed = smooth_bivalent(graph)
    print(f"  {inst.name}: cells={len(cells)}", end=" ")
    print(f"counts={smoothed.counts()} euler={graph_euler(smoothed)}")
    bad = [v for v in smoothed.vertices
           if v.kind in ("positive", "negative") and v.valence != 3]
    if bad:
        raise RuntimeError(f"non-trivalent signed vertices: {bad[:3]}")


def main() -> None:
    DATA_DIR.mkdir(parents=True, exist_ok=True)
    instances = [
        build_instance("p5_42", [4, 2]),
        build_instance("quintic", [5]),
        BundledInstance(
            name="k3_quartic",
            partition=projective_space_partition([4]),
            subdivisions=(),
        ),
    ]
    for inst in instances:
        path = DATA_DIR / f"{inst.name}.json"
        path.write_text(jsonio.dumps(instance_to_doc(inst)))
        nsubs = len(inst.subdivisions)
        ncells = sum(len(s.cells) for s in inst.subdivisions)
        print(f"wrote {path.name}: {nsubs} subdivisions, {ncells} cells")
    print("validating discriminant pipelines:")
    for inst in instances:
        if inst.subdivisions:
            report(inst)


if __name__ == "__main__":
    main()
