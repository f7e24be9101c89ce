"""Stratum enumeration and closed-form Euler accounting for complete
intersections in a single projective space, plus the monodromy-matrix checks.

For a K3 (n = 2) complete intersection of multidegree (d_1, ..., d_r) the
singular fibers sit over (sum_j C(d_j, 2)) * prod_i d_i points, which equals
24 in every Calabi-Yau case.  For threefolds the Euler characteristic is

    sum_i C(d_i, 3) * prod(d)  -  sum_i C(d_i, 2) * d_i * prod(d),

the two terms counting triple points and punctured-curve retraction
vertices.  These numbers serve as the independent oracle for the
combinatorial discriminant graph.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from math import comb, prod

from .errors import (
    InvalidPartition,
    NotUnipotent,
    ProductNotIdentity,
    WrongDimension,
)
from .linalg import gcd_list
from .nef import NefPartition


@dataclass(frozen=True)
class CIDescriptor:
    """Complete intersection of multidegree `degrees` in P^ambient_proj_dim."""

    ambient_proj_dim: int
    degrees: tuple[int, ...]

    def __post_init__(self):
        if any(d < 2 for d in self.degrees):
            raise WrongDimension("every degree must be at least 2")
        if sum(self.degrees) != self.ambient_proj_dim + 1:
            raise WrongDimension(
                f"degrees {self.degrees} violate the Calabi-Yau condition "
                f"sum(d) = N + 1 = {self.ambient_proj_dim + 1}"
            )

    @property
    def r(self) -> int:
        return len(self.degrees)

    @property
    def cy_dim(self) -> int:
        return self.ambient_proj_dim - self.r

    @property
    def degree_product(self) -> int:
        return prod(self.degrees)


@dataclass(frozen=True)
class CurveComponentStats:
    """One curve component of the singular locus of a threefold."""

    group: int
    degree_product: int
    genus: int
    chi: int
    punctures: int
    chi_punctured: int


def k3_singular_count(ci: CIDescriptor) -> int:
    """(sum_j C(d_j, 2)) * prod(d); always 24 for K3 complete intersections."""
    if ci.cy_dim != 2:
        raise WrongDimension(f"K3 count needs n = 2, got n = {ci.cy_dim}")
    return sum(comb(d, 2) for d in ci.degrees) * ci.degree_product


def curve_stats(ci: CIDescriptor, group: int) -> CurveComponentStats:
    """Genus, Euler characteristic and puncture count of one C-component.

    The components of group i are complete intersections of the full
    multidegree in a codimension-two coordinate subspace; adjunction gives
    2g - 2 = prod(d) * (sum(d) - r - 2), and each is punctured along the
    d_i - 2 remaining coordinate hyperplanes of its own group.
    """
    if ci.cy_dim != 3:
        raise WrongDimension(f"curve statistics need n = 3, got n = {ci.cy_dim}")
    if not 0 <= group < ci.r:
        raise WrongDimension(f"group {group} out of range for r = {ci.r}")
    dp = ci.degree_product
    two_g_minus_2 = dp * (sum(ci.degrees) - ci.r - 2)
    genus = (two_g_minus_2 + 2) // 2
    chi = 2 - 2 * genus
    punctures = (ci.degrees[group] - 2) * dp
    return CurveComponentStats(
        group=group,
        degree_product=dp,
        genus=genus,
        chi=chi,
        punctures=punctures,
        chi_punctured=chi - punctures,
    )


def threefold_euler(ci: CIDescriptor) -> int:
    """sum_i C(d_i,3) * prod(d) - sum_i C(d_i,2) * d_i * prod(d)."""
    if ci.cy_dim != 3:
        raise WrongDimension(f"threefold Euler needs n = 3, got n = {ci.cy_dim}")
    dp = ci.degree_product
    positives = sum(comb(d, 3) for d in ci.degrees) * dp
    negatives = sum(comb(d, 2) * d for d in ci.degrees) * dp
    return positives - negatives


# ---------------------------------------------------------------------------
# stratum enumeration


@dataclass(frozen=True)
class StratumIndex:
    """Index data of one stratum of the degenerate Calabi-Yau or its image.

    kind is one of X, C, P, Y, Z, C_hat, P_hat, Q_hat.  `part` is the group
    index i (and `part2` = j for Q_hat); `divisors` lists the lambda/mu
    indices within the group (strictly increasing, 0-based); `nu` holds the
    second group's indices for Q_hat.  `alpha` has one entry per part, with
    None at parts not constrained by the alpha-vector.
    """

    kind: str
    part: int | None
    part2: int | None
    divisors: tuple[int, ...]
    nu: tuple[int, ...]
    alpha: tuple[int | None, ...]
    vertex_ids: tuple[int, ...]
    nonempty: bool


def enumerate_strata(np: NefPartition, triangulation_simplices) -> list[StratumIndex]:
    """All index tuples for the X, C, P, Y, Z and hatted strata.

    A stratum is marked nonempty exactly when its divisor vertices lie in a
    common simplex of the supplied triangulation (the fan condition).
    """
    simplices = [frozenset(s) for s in triangulation_simplices]
    parts = [tuple(sorted(p)) for p in np.parts]
    r = len(parts)

    def vertex(i, a):
        return parts[i][a]

    def nonempty(vids) -> bool:
        vs = frozenset(vids)
        return any(vs <= s for s in simplices)

    def make(kind, part=None, part2=None, divisors=(), nu=(), alpha=None, vids=()):
        vids = tuple(sorted(set(vids)))
        return StratumIndex(
            kind=kind, part=part, part2=part2,
            divisors=tuple(divisors), nu=tuple(nu),
            alpha=tuple(alpha) if alpha is not None else (None,) * r,
            vertex_ids=vids, nonempty=nonempty(vids),
        )

    out: list[StratumIndex] = []

    # X_alpha: one divisor from every group
    for combo in itertools.product(*[range(len(p)) for p in parts]):
        vids = [vertex(i, a) for i, a in enumerate(combo)]
        out.append(make("X", alpha=combo, vids=vids))

    for i in range(r):
        d_i = len(parts[i])
        # C^(i)_{l1,l2} and P^(i)_{m1,m2,m3}
        for pair in itertools.combinations(range(d_i), 2):
            out.append(make("C", part=i, divisors=pair,
                            vids=[vertex(i, a) for a in pair]))
        for triple in itertools.combinations(range(d_i), 3):
            out.append(make("P", part=i, divisors=triple,
                            vids=[vertex(i, a) for a in triple]))

        # Y^(i)_alpha: one divisor from every other group
        others = [j for j in range(r) if j != i]
        for combo in itertools.product(*[range(len(parts[j])) for j in others]):
            alpha: list[int | None] = [None] * r
            vids = []
            for j, a in zip(others, combo):
                alpha[j] = a
                vids.append(vertex(j, a))
            out.append(make("Y", part=i, alpha=alpha, vids=vids))

            for pair in itertools.combinations(range(d_i), 2):
                out.append(make("C_hat", part=i, divisors=pair, alpha=alpha,
                                vids=vids + [vertex(i, a) for a in pair]))
            for triple in itertools.combinations(range(d_i), 3):
                out.append(make("P_hat", part=i, divisors=triple, alpha=alpha,
                                vids=vids + [vertex(i, a) for a in triple]))

        # Z^(i,j)_alpha and Q_hat^(i,j): one divisor from every group but i, j
        for j in range(r):
            if j == i:
                continue
            rest = [k for k in range(r) if k not in (i, j)]
            for combo in itertools.product(*[range(len(parts[k])) for k in rest]):
                alpha = [None] * r
                vids = []
                for k, a in zip(rest, combo):
                    alpha[k] = a
                    vids.append(vertex(k, a))
                out.append(make("Z", part=i, part2=j, alpha=alpha, vids=vids))
                for mu in itertools.combinations(range(d_i), 2):
                    for nu in itertools.combinations(range(len(parts[j])), 2):
                        out.append(make(
                            "Q_hat", part=i, part2=j, divisors=mu, nu=nu,
                            alpha=alpha,
                            vids=vids + [vertex(i, a) for a in mu]
                                 + [vertex(j, b) for b in nu],
                        ))

    out.sort(key=lambda s: (s.kind, -1 if s.part is None else s.part,
                            -1 if s.part2 is None else s.part2,
                            s.divisors, s.nu,
                            tuple(-1 if a is None else a for a in s.alpha)))
    return out


def stratum_counts(strata) -> dict[str, int]:
    counts: dict[str, int] = {}
    for s in strata:
        if s.nonempty:
            counts[s.kind] = counts.get(s.kind, 0) + 1
    return counts


def threefold_euler_via_strata(ci: CIDescriptor) -> int:
    """Second route: P-strata times intersection points, minus punctured-curve
    Euler characteristics counted per C-component."""
    if ci.cy_dim != 3:
        raise WrongDimension(f"threefold Euler needs n = 3, got n = {ci.cy_dim}")
    from .nef import projective_space_partition

    np = projective_space_partition(ci.degrees)
    simplices = standard_fan_simplices(ci.ambient_proj_dim)
    strata = enumerate_strata(np, simplices)
    dp = ci.degree_product
    total = 0
    for s in strata:
        if not s.nonempty:
            continue
        if s.kind == "P":
            total += dp
        elif s.kind == "C":
            total += curve_stats(ci, s.part).chi_punctured
    return total


def standard_fan_simplices(ambient_proj_dim: int) -> list[frozenset[int]]:
    """Maximal cones of the standard P^N fan: drop one of the N+1 vertices."""
    n_verts = ambient_proj_dim + 1
    return [frozenset(range(n_verts)) - {i} for i in range(n_verts)]


# ---------------------------------------------------------------------------
# monodromy


EQ1_REFERENCE = ((1, 0, 1), (0, 1, 0), (0, 0, 1))

EQ2_POSITIVE_TRIPLE = (
    ((1, 0, 1), (0, 1, 0), (0, 0, 1)),
    ((1, 0, 0), (0, 1, 1), (0, 0, 1)),
    ((1, 0, -1), (0, 1, -1), (0, 0, 1)),
)

EQ3_NEGATIVE_TRIPLE = (
    ((1, 0, 1), (0, 1, 0), (0, 0, 1)),
    ((1, 1, 0), (0, 1, 0), (0, 0, 1)),
    ((1, -1, -1), (0, 1, 0), (0, 0, 1)),
)


@dataclass(frozen=True)
class MonodromyMatrix:
    entries: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        if len(self.entries) != 3 or any(len(r) != 3 for r in self.entries):
            raise WrongDimension("monodromy matrices must be 3x3")

    @staticmethod
    def of(rows) -> "MonodromyMatrix":
        return MonodromyMatrix(tuple(tuple(int(x) for x in r) for r in rows))

    def __matmul__(self, other: "MonodromyMatrix") -> "MonodromyMatrix":
        a, b = self.entries, other.entries
        return MonodromyMatrix(tuple(
            tuple(sum(a[i][k] * b[k][j] for k in range(3)) for j in range(3))
            for i in range(3)
        ))

    def minus_identity(self):
        return tuple(
            tuple(self.entries[i][j] - (1 if i == j else 0) for j in range(3))
            for i in range(3)
        )

    def is_unipotent(self) -> bool:
        m = self.minus_identity()
        sq = _mat_mul(m, m)
        cube = _mat_mul(sq, m)
        return all(x == 0 for row in cube for x in row)

    def det(self) -> int:
        m = self.entries
        return (m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
                - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
                + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]))


IDENTITY = MonodromyMatrix.of(((1, 0, 0), (0, 1, 0), (0, 0, 1)))


def _mat_mul(a, b):
    return tuple(
        tuple(sum(a[i][k] * b[k][j] for k in range(3)) for j in range(3))
        for i in range(3)
    )


def _mat_rank(m) -> int:
    from .linalg import rank

    return rank([list(r) for r in m])


@dataclass(frozen=True)
class MonodromyReport:
    matrices: tuple[MonodromyMatrix, ...]
    unipotent: tuple[bool, ...]
    conjugate_to_reference: tuple[bool, ...]
    product_is_identity: bool
    fixed_dims: tuple[int, ...]
    common_fixed_dim: int
    expected_common_fixed_dim: int
    vertex_kind: str
    consistent: bool


def monodromy_check(triple, vertex_kind: str) -> MonodromyReport:
    """Unipotency, reference conjugacy, product identity, fixed-plane dimensions.

    Positive vertices expect a common 2-dimensional fixed plane; negative
    vertices expect a 1-dimensional intersection.  Conjugacy to the
    reference matrix is tested by rank(M - I) = 1, (M - I)^2 = 0 and
    primitivity (entry gcd 1 certifies both the image and coimage vectors).
    """
    if vertex_kind not in ("positive", "negative"):
        raise InvalidPartition(f"unknown vertex kind {vertex_kind!r}")
    mats = tuple(m if isinstance(m, MonodromyMatrix) else MonodromyMatrix.of(m)
                 for m in triple)
    if len(mats) != 3:
        raise WrongDimension("monodromy check needs exactly three matrices")
    for m in mats:
        if not m.is_unipotent():
            raise NotUnipotent(f"matrix {m.entries} is not unipotent")
        if m.det() != 1:
            raise NotUnipotent(f"matrix {m.entries} has determinant != 1")
    product = mats[0] @ mats[1] @ mats[2]
    if product != IDENTITY:
        raise ProductNotIdentity(f"product of the triple is {product.entries}")

    conjies = []
    fixed_dims = []
    stacked = []
    for m in mats:
        diff = m.minus_identity()
        rk = _mat_rank(diff)
        sq_zero = all(x == 0 for row in _mat_mul(diff, diff) for x in row)
        content = gcd_list([x for row in diff for x in row])
        conjies.append(rk == 1 and sq_zero and content == 1)
        fixed_dims.append(3 - rk)
        stacked.extend(diff)
    common = 3 - _mat_rank(stacked)
    expected = 2 if vertex_kind == "positive" else 1
    return MonodromyReport(
        matrices=mats,
        unipotent=(True, True, True),
        conjugate_to_reference=tuple(conjies),
        product_is_identity=True,
        fixed_dims=tuple(fixed_dims),
        common_fixed_dim=common,
        expected_common_fixed_dim=expected,
        vertex_kind=vertex_kind,
        consistent=(common == expected),
    )


def monodromy_report_doc(report: MonodromyReport) -> dict:
    return {
        "matrices": [[list(r) for r in m.entries] for m in report.matrices],
        "unipotent": list(report.unipotent),
        "conjugate_to_reference": list(report.conjugate_to_reference),
        "product_is_identity": report.product_is_identity,
        "fixed_dims": list(report.fixed_dims),
        "common_fixed_dim": report.common_fixed_dim,
        "expected_common_fixed_dim": report.expected_common_fixed_dim,
        "vertex_kind": report.vertex_kind,
        "consistent": report.consistent,
    }


def census_doc(ci: CIDescriptor, with_strata: bool = True) -> dict:
    """Full census report for one descriptor."""
    doc: dict = {
        "ambient": ci.ambient_proj_dim,
        "degrees": list(ci.degrees),
        "cy_dim": ci.cy_dim,
        "degree_product": ci.degree_product,
    }
    if ci.cy_dim == 2:
        doc["k3_singular_count"] = k3_singular_count(ci)
    if ci.cy_dim == 3:
        doc["euler"] = threefold_euler(ci)
        doc["euler_via_strata"] = threefold_euler_via_strata(ci)
        doc["curves"] = []
        for i in range(ci.r):
            st = curve_stats(ci, i)
            doc["curves"].append({
                "group": st.group,
                "components": comb(ci.degrees[i], 2),
                "genus": st.genus,
                "chi": st.chi,
                "punctures": st.punctures,
                "chi_punctured": st.chi_punctured,
            })
    if with_strata:
        from .nef import projective_space_partition

        np = projective_space_partition(ci.degrees)
        strata = enumerate_strata(np, standard_fan_simplices(ci.ambient_proj_dim))
        doc["stratum_counts"] = stratum_counts(strata)
    return doc
