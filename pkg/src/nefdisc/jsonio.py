"""JSON document formats.

Polytope documents carry either a vertex list or an inequality list.
Integers are emitted as decimal strings once they exceed 64 bits so that
readers without big-integer support can still parse the documents.
"""

from __future__ import annotations

import json
from fractions import Fraction

from .errors import MalformedInput
from .geometry import HalfSpace, Polytope, convex_hull, halfspace_intersection

_I64 = 2**63


def encode_int(v: int):
    return v if -_I64 < v < _I64 else str(v)


def decode_int(v) -> int:
    if isinstance(v, bool):
        raise MalformedInput(f"expected integer, got {v!r}")
    if isinstance(v, int):
        return v
    if isinstance(v, str):
        try:
            return int(v)
        except ValueError as exc:
            raise MalformedInput(f"bad integer literal {v!r}") from exc
    raise MalformedInput(f"expected integer, got {v!r}")


def encode_rational(x: Fraction):
    x = Fraction(x)
    if x.denominator == 1:
        return encode_int(x.numerator)
    return {"num": encode_int(x.numerator), "den": encode_int(x.denominator)}


def decode_rational(v) -> Fraction:
    if isinstance(v, dict):
        try:
            return Fraction(decode_int(v["num"]), decode_int(v["den"]))
        except KeyError as exc:
            raise MalformedInput(f"bad rational {v!r}") from exc
    return Fraction(decode_int(v))


def polytope_to_doc(p: Polytope) -> dict:
    return {
        "dim": p.ambient_dim,
        "lattice": p.lattice,
        "vertices": [[encode_rational(c) for c in v] for v in p.vertices],
    }


def polytope_hrep_doc(p: Polytope) -> dict:
    return {
        "dim": p.ambient_dim,
        "lattice": p.lattice,
        "inequalities": [
            {"normal": [encode_int(c) for c in f.normal],
             "bound": encode_rational(f.bound)}
            for f in p.facets
        ],
    }


def polytope_from_doc(doc) -> Polytope:
    if not isinstance(doc, dict):
        raise MalformedInput("polytope document must be an object")
    try:
        dim = decode_int(doc["dim"])
    except KeyError as exc:
        raise MalformedInput("polytope document needs 'dim'") from exc
    lattice = doc.get("lattice", "N")
    if lattice not in ("N", "M"):
        raise MalformedInput(f"bad lattice tag {lattice!r}")
    if "vertices" in doc:
        pts = [[decode_rational(c) for c in v] for v in doc["vertices"]]
        if not pts:
            raise MalformedInput("empty vertex list")
        return convex_hull(pts, dim, lattice=lattice)
    if "inequalities" in doc:
        hs = []
        for item in doc["inequalities"]:
            normal = tuple(decode_int(c) for c in item["normal"])
            hs.append(HalfSpace.of(normal, decode_rational(item["bound"])))
        return halfspace_intersection(hs, dim, lattice=lattice)
    raise MalformedInput("polytope document needs 'vertices' or 'inequalities'")


def dumps(doc) -> str:
    """Canonical serialization: sorted keys, two-space indent, newline at end."""
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def loads(text: str):
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise MalformedInput(f"invalid JSON: {exc}") from exc
