"""Bundled golden instances.

Each instance document carries a nef partition and, when the instance is
used for discriminant runs, the boundary subdivisions of the relevant
transversal faces (the worked degree-(4,2) example ships the interval and
prism subdivisions; the quintic ships unimodular triangulations of the dual
polytope's edges and two-faces).
"""

from __future__ import annotations

from dataclasses import dataclass
from importlib import resources

from .errors import MalformedInput
from .nef import NefPartition, partition_from_doc, partition_to_doc
from .sigma import CayleySubdivision, subdivision_from_doc, subdivision_to_doc
from . import jsonio


@dataclass(frozen=True)
class BundledInstance:
    name: str
    partition: NefPartition
    subdivisions: tuple[CayleySubdivision, ...]


def instance_to_doc(inst: BundledInstance) -> dict:
    return {
        "name": inst.name,
        "partition": partition_to_doc(inst.partition),
        "subdivisions": [subdivision_to_doc(s) for s in inst.subdivisions],
    }


def instance_from_doc(doc) -> BundledInstance:
    if not isinstance(doc, dict) or "partition" not in doc:
        raise MalformedInput("instance document needs a 'partition'")
    return BundledInstance(
        name=doc.get("name", "unnamed"),
        partition=partition_from_doc(doc["partition"]),
        subdivisions=tuple(
            subdivision_from_doc(s) for s in doc.get("subdivisions", [])
        ),
    )


def bundled_names() -> list[str]:
    root = resources.files("nefdisc").joinpath("data")
    return sorted(
        p.name[: -len(".json")]
        for p in root.iterdir()
        if p.name.endswith(".json")
    )


def load_instance(name: str) -> BundledInstance:
    path = resources.files("nefdisc").joinpath("data").joinpath(f"{name}.json")
    try:
        text = path.read_text()
    except FileNotFoundError as exc:
        raise MalformedInput(
            f"no bundled instance {name!r}; available: {bundled_names()}"
        ) from exc
    return instance_from_doc(jsonio.loads(text))
