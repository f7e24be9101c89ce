"""Nef partitions and their Batyrev-Borisov mirror data.

A nef partition splits the nonzero vertices of a reflexive polytope
nabla_check into r groups.  From it we derive

    delta_parts[i] = conv({0} and group i)              (N side)
    nabla_parts[i] = {m : <m, e> <= [e in group i]}     (M side)
    nabla          = dual(nabla_check) = sum of nabla_parts
    delta          = sum of delta_parts = dual(delta_check)
    delta_check    = conv(union of nabla_parts)

Nefness is checked through this dual characterization: every nabla_parts[i]
must have integral vertices and their Minkowski sum must reproduce nabla.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property

from .errors import InvalidPartition, MalformedInput, NotNef, NotReflexive
from .geometry import (
    HalfSpace,
    Polytope,
    convex_hull,
    halfspace_intersection,
    is_reflexive,
    minkowski_sum_all,
    polar_dual,
)
from . import jsonio


@dataclass(frozen=True)
class NefPartition:
    """Partition of the nonzero vertices of a reflexive polytope.

    Parts hold vertex indices into the canonical (lexicographic) vertex
    order of nabla_check; 0 is never a vertex of a reflexive polytope, so
    part membership concerns nonzero vertices only.
    """

    nabla_check: Polytope
    parts: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        n = len(self.nabla_check.vertices)
        seen: set[int] = set()
        for part in self.parts:
            if not part:
                raise InvalidPartition("every part must be nonempty")
            for vid in part:
                if not 0 <= vid < n:
                    raise InvalidPartition(f"vertex index {vid} out of range")
                if vid in seen:
                    raise InvalidPartition(f"vertex index {vid} in two parts")
                seen.add(vid)
        if seen != set(range(n)):
            missing = sorted(set(range(n)) - seen)
            raise InvalidPartition(f"vertices {missing} not covered by any part")

    @property
    def r(self) -> int:
        return len(self.parts)

    @property
    def part_sizes(self) -> tuple[int, ...]:
        return tuple(len(p) for p in self.parts)

    def part_of(self, vid: int) -> int:
        for i, part in enumerate(self.parts):
            if vid in part:
                return i
        raise InvalidPartition(f"vertex index {vid} not in any part")

    @cached_property
    def delta_parts(self) -> tuple[Polytope, ...]:
        """conv({0} and E^(i)) for each part, in the N-side lattice."""
        d = self.nabla_check.ambient_dim
        origin = tuple(Fraction(0) for _ in range(d))
        out = []
        for part in self.parts:
            pts = [origin] + [self.nabla_check.vertices[v] for v in part]
            out.append(convex_hull(pts, d, lattice=self.nabla_check.lattice))
        return tuple(out)


@dataclass(frozen=True)
class NefPartitionData:
    """A nef partition together with all derived mirror polytopes."""

    partition: NefPartition
    delta_parts: tuple[Polytope, ...]
    nabla_parts: tuple[Polytope, ...]
    nabla: Polytope
    delta: Polytope
    delta_check: Polytope
    vertex_part_map: dict
    dual_parts: tuple[tuple[int, ...], ...]

    @property
    def nabla_check(self) -> Polytope:
        return self.partition.nabla_check

    @property
    def r(self) -> int:
        return self.partition.r

    @property
    def d(self) -> int:
        return self.nabla_check.ambient_dim

    @property
    def cy_dim(self) -> int:
        """Dimension of the associated complete-intersection Calabi-Yau."""
        return self.d - self.r

    def dual_part_of(self, vid: int) -> int:
        for i, part in enumerate(self.dual_parts):
            if vid in part:
                return i
        raise InvalidPartition(f"dual vertex index {vid} not in any part")


def build_nef_data(np: NefPartition) -> NefPartitionData:
    """Derive and verify all mirror polytopes; fails loudly on non-nef input."""
    nc = np.nabla_check
    if not is_reflexive(nc):
        raise NotReflexive("nabla_check is not reflexive")
    d = nc.ambient_dim
    nabla = polar_dual(nc)

    delta_parts = np.delta_parts

    nabla_parts = []
    for i in range(np.r):
        cons = []
        for vid, vert in enumerate(nc.vertices):
            bound = 1 if np.part_of(vid) == i else 0
            cons.append(HalfSpace(tuple(int(c) for c in vert), Fraction(bound)))
        part_poly = halfspace_intersection(cons, d, lattice=nabla.lattice)
        bad = [v for v in part_poly.vertices if any(c.denominator != 1 for c in v)]
        if bad:
            raise NotNef(
                f"nabla_part[{i}] has a non-integral vertex",
                certificate={"part": i, "vertex": [str(c) for c in bad[0]]},
            )
        nabla_parts.append(part_poly)
    nabla_parts = tuple(nabla_parts)

    summed = minkowski_sum_all(nabla_parts)
    if summed != nabla:
        raise NotNef(
            "Minkowski sum of the nabla parts differs from dual(nabla_check)",
            certificate={
                "sum_vertices": [[str(c) for c in v] for v in summed.vertices],
                "dual_vertices": [[str(c) for c in v] for v in nabla.vertices],
            },
        )

    delta = minkowski_sum_all(delta_parts)
    delta_check = convex_hull(
        [v for p in nabla_parts for v in p.vertices], d, lattice=nabla.lattice
    )
    if polar_dual(delta_check) != delta or polar_dual(delta) != delta_check:
        raise NotNef("delta and delta_check are not a dual reflexive pair")

    # pairing bounds <nabla_parts[i], delta_parts[j]> <= delta^{ij}
    for i, npoly in enumerate(nabla_parts):
        for j, dpoly in enumerate(delta_parts):
            limit = 1 if i == j else 0
            attained = max(
                sum(a * b for a, b in zip(v, w))
                for v in npoly.vertices
                for w in dpoly.vertices
            )
            if attained > limit:
                raise NotNef(
                    f"pairing bound violated: <nabla_part[{i}], delta_part[{j}]> = "
                    f"{attained} > {limit}"
                )
            if i == j and attained != 1:
                raise NotNef(f"pairing <nabla_part[{i}], delta_part[{i}]> never reaches 1")

    vertex_part_map = {}
    for i, part in enumerate(np.parts):
        for alpha, vid in enumerate(sorted(part)):
            vertex_part_map[vid] = (i, alpha)

    # partition of delta_check's vertices by which nabla part they came from
    dual_parts: list[list[int]] = [[] for _ in range(np.r)]
    for vid, vert in enumerate(delta_check.vertices):
        owners = [i for i, p in enumerate(nabla_parts) if vert in p.vertices]
        if len(owners) != 1:
            raise NotNef(
                "delta_check vertex does not belong to exactly one nabla part",
                certificate={"vertex": [str(c) for c in vert], "owners": owners},
            )
        dual_parts[owners[0]].append(vid)
    for i, p in enumerate(nabla_parts):
        nonzero = [v for v in p.vertices if any(c != 0 for c in v)]
        if len(nonzero) != len(dual_parts[i]):
            raise NotNef(f"nabla_part[{i}] has vertices hidden inside delta_check")

    return NefPartitionData(
        partition=np,
        delta_parts=delta_parts,
        nabla_parts=nabla_parts,
        nabla=nabla,
        delta=delta,
        delta_check=delta_check,
        vertex_part_map=vertex_part_map,
        dual_parts=tuple(tuple(sorted(p)) for p in dual_parts),
    )


def is_irreducible(np: NefPartition) -> bool:
    """No proper nonempty subset of parts sums to a polytope with 0 inside.

    Interiority is taken relative to the affine span whenever the subset sum
    is lower-dimensional, ambient otherwise.
    """
    origin = [0] * np.nabla_check.ambient_dim
    parts = np.delta_parts
    r = np.r
    for mask in range(1, 2**r - 1):
        chosen = [parts[i] for i in range(r) if mask >> i & 1]
        total = minkowski_sum_all(chosen)
        if total.dim == total.ambient_dim:
            inside = total.contains_interior(origin)
        else:
            inside = total.contains_relative_interior(origin)
        if inside:
            return False
    return True


def mirror(data: NefPartitionData, triangulation=None) -> NefPartitionData:
    """Mirror nef partition: parts become the vertex sets of the nabla parts.

    The triangulation argument (a choice of limiting point) does not enter
    the polytope-level construction and is accepted only for interface
    compatibility.
    """
    del triangulation
    mirrored = NefPartition(nabla_check=data.delta_check, parts=data.dual_parts)
    out = build_nef_data(mirrored)
    if out.nabla != data.delta or out.delta != data.nabla:
        raise NotNef("mirror construction failed to exchange delta and nabla")
    return out


# ---------------------------------------------------------------------------
# documents


def partition_to_doc(np: NefPartition) -> dict:
    return {
        "polytope": jsonio.polytope_to_doc(np.nabla_check),
        "parts": [[v for v in part] for part in np.parts],
    }


def partition_from_doc(doc) -> NefPartition:
    if not isinstance(doc, dict) or "polytope" not in doc or "parts" not in doc:
        raise MalformedInput("partition document needs 'polytope' and 'parts'")
    poly = jsonio.polytope_from_doc(doc["polytope"])
    parts = tuple(
        tuple(sorted(jsonio.decode_int(v) for v in part)) for part in doc["parts"]
    )
    return NefPartition(nabla_check=poly, parts=parts)


def projective_space_partition(degrees) -> NefPartition:
    """Standard nef partition of P^N for a complete intersection.

    N + 1 = sum(degrees); the simplex vertices e_0 = -sum(e_i), e_1, ..., e_N
    are grouped consecutively with group sizes equal to the degrees.
    """
    degrees = [int(x) for x in degrees]
    if any(x < 1 for x in degrees):
        raise InvalidPartition("degrees must be positive")
    ambient = sum(degrees) - 1
    basis = [tuple(1 if j == i else 0 for j in range(ambient)) for i in range(ambient)]
    e0 = tuple(-1 for _ in range(ambient))
    order = [e0] + basis  # e_0, e_1, ..., e_N
    poly = convex_hull(order, ambient)
    index_of = {v: i for i, v in enumerate(poly.vertices)}
    labels = [index_of[tuple(Fraction(c) for c in v)] for v in order]
    parts = []
    pos = 0
    for dsize in degrees:
        parts.append(tuple(sorted(labels[pos:pos + dsize])))
        pos += dsize
    return NefPartition(nabla_check=poly, parts=tuple(parts))
