"""JSON frame documents: schema, parsing into a :class:`GroupTriple`, canonical output.

A document names some groups, partitions a subset of them into classes (the
classes define ``E`` and their members, in document order, form the index
set), and gives one quotient isomorphism per pair ``x <= y`` plus any
non-identity cosets. Elements are integer ids; product-group elements may
also be written as coordinate lists such as ``[0, 1, 1]``.
"""

from __future__ import annotations

import json
import re
from pathlib import Path
from typing import Any, Mapping

import jsonschema

from .groups import (
    FiniteGroup,
    GroupError,
    QuotientGroup,
    QuotientIso,
    Subgroup,
    cyclic_group,
    direct_product,
    is_normal,
)
from .frame import CosetSystem, FrameError, GroupSystem, GroupTriple, IsoSystem, e3

FORMAT = "cosetra-frame/1"

_ELEMENT = {"oneOf": [{"type": "integer", "minimum": 0},
                      {"type": "array", "items": {"type": "integer", "minimum": 0}, "minItems": 1}]}
_NAME = {"type": "string", "minLength": 1, "pattern": r"^[A-Za-z0-9_]+$"}

SCHEMA: dict[str, Any] = {
    "type": "object",
    "required": ["groups", "classes", "pairs"],
    "additionalProperties": False,
    "properties": {
        "format": {"const": FORMAT},
        "groups": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["name", "kind"],
                "oneOf": [
                    {"properties": {"kind": {"const": "cyclic"}}, "required": ["n"]},
                    {"properties": {"kind": {"const": "product"}}, "required": ["factors"]},
                    {"properties": {"kind": {"const": "table"}}, "required": ["cayley"]},
                ],
                "properties": {
                    "name": _NAME,
                    "kind": {"enum": ["cyclic", "product", "table"]},
                    "n": {"type": "integer", "minimum": 1},
                    "factors": {"type": "array", "items": _NAME, "minItems": 1},
                    "cayley": {"type": "array", "minItems": 1,
                               "items": {"type": "array", "items": {"type": "integer"}}},
                },
                "additionalProperties": False,
            },
        },
        "classes": {"type": "array", "items": {"type": "array", "items": _NAME}},
        "pairs": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["x", "y", "H", "K", "iso"],
                "additionalProperties": False,
                "properties": {
                    "x": _NAME, "y": _NAME,
                    "H": {"type": "array", "items": _ELEMENT},
                    "K": {"type": "array", "items": _ELEMENT},
                    "iso": {"type": "array",
                            "items": {"type": "array", "items": _ELEMENT,
                                      "minItems": 2, "maxItems": 2}},
                },
            },
        },
        "cosets": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["x", "y", "z", "representative"],
                "additionalProperties": False,
                "properties": {"x": _NAME, "y": _NAME, "z": _NAME, "representative": _ELEMENT},
            },
        },
    },
}


class DocumentError(ValueError):
    """The document is malformed or refers to something that does not exist."""


def _element(g: FiniteGroup, v, where: str) -> int:
    if isinstance(v, list):
        try:
            return g.element(tuple(v))
        except GroupError:
            raise DocumentError(f"{where}: no element {v} in {g.name}") from None
    if not 0 <= v < g.order:
        raise DocumentError(f"{where}: element {v} out of range for {g.name} (order {g.order})")
    return v


def _build_groups(entries: list[dict]) -> dict[str, FiniteGroup]:
    groups: dict[str, FiniteGroup] = {}
    for entry in entries:
        name = entry["name"]
        if name in groups:
            raise DocumentError(f"group {name!r} defined twice")
        kind = entry["kind"]
        try:
            if kind == "cyclic":
                g = cyclic_group(entry["n"])
            elif kind == "product":
                missing = [f for f in entry["factors"] if f not in groups]
                if missing:
                    raise DocumentError(f"group {name!r}: unknown factors {missing} "
                                        "(factors must be defined earlier)")
                g = groups[entry["factors"][0]]
                for f in entry["factors"][1:]:
                    g = direct_product(g, groups[f])
            else:
                g = FiniteGroup(tuple(tuple(r) for r in entry["cayley"]))
        except GroupError as exc:
            raise DocumentError(f"group {name!r}: {exc}") from exc
        groups[name] = FiniteGroup(g.table, name=name, coords=g.coords)
    return groups


def parse_document(doc: Mapping) -> GroupTriple:
    try:
        jsonschema.validate(doc, SCHEMA)
    except jsonschema.ValidationError as exc:
        path = "/".join(str(p) for p in exc.absolute_path)
        raise DocumentError(f"schema: {exc.message} at /{path}") from None
    groups = _build_groups(doc["groups"])
    members = [x for c in doc["classes"] for x in c]
    for x in members:
        if x not in groups:
            raise DocumentError(f"class member {x!r} is not a defined group")
    if len(set(members)) != len(members):
        raise DocumentError("an index appears in more than one class")
    chosen = set(members)
    indices = [entry["name"] for entry in doc["groups"] if entry["name"] in chosen]
    system = GroupSystem(indices, {x: groups[x] for x in indices})
    pos = system.position
    cls_of = {x: i for i, c in enumerate(doc["classes"]) for x in c}
    forward: dict[tuple[str, str], QuotientIso] = {}
    for n, p in enumerate(doc["pairs"]):
        x, y = p["x"], p["y"]
        where = f"pairs[{n}] ({x},{y})"
        if x not in pos or y not in pos:
            raise DocumentError(f"{where}: unknown index")
        if cls_of[x] != cls_of[y]:
            raise DocumentError(f"{where}: indices lie in different classes")
        if pos[x] > pos[y]:
            raise DocumentError(f"{where}: pairs must be listed with x before y")
        if (x, y) in forward:
            raise DocumentError(f"{where}: pair given twice")
        gx, gy = system[x], system[y]
        try:
            h = Subgroup(gx, tuple(_element(gx, v, where + " H") for v in p["H"]))
            k = Subgroup(gy, tuple(_element(gy, v, where + " K") for v in p["K"]))
        except GroupError as exc:
            raise DocumentError(f"{where}: {exc}") from exc
        for s, label in ((h, "H"), (k, "K")):
            if not is_normal(s):
                raise DocumentError(f"{where}: {label} is not normal")
        qd, qc = QuotientGroup(gx, h), QuotientGroup(gy, k)
        mapping = [-1] * qd.order
        for a, b in p["iso"]:
            i = qd.coset_of(_element(gx, a, where + " iso"))
            j = qc.coset_of(_element(gy, b, where + " iso"))
            if mapping[i] not in (-1, j):
                raise DocumentError(f"{where}: coset of {a} mapped twice")
            mapping[i] = j
        if -1 in mapping:
            raise DocumentError(f"{where}: iso does not cover every coset of H")
        try:
            forward[(x, y)] = QuotientIso(qd, qc, mapping)
        except GroupError as exc:
            raise DocumentError(f"{where}: {exc}") from exc
    classes = [[x for x in indices if cls_of[x] == i] for i in range(len(doc["classes"]))]
    try:
        isos = IsoSystem.from_forward(system, [c for c in classes if c], forward)
    except FrameError as exc:
        raise DocumentError(str(exc)) from exc
    reps: dict[tuple[str, str, str], int] = {}
    valid = set(e3(isos))
    for n, c in enumerate(doc.get("cosets", [])):
        t = (c["x"], c["y"], c["z"])
        if t not in valid:
            raise DocumentError(f"cosets[{n}]: {t} is not a triple of E3")
        if t in reps:
            raise DocumentError(f"cosets[{n}]: {t} given twice")
        reps[t] = _element(system[t[0]], c["representative"], f"cosets[{n}]")
    return GroupTriple(system, isos, CosetSystem(isos, reps))


def load_document(path: str | Path) -> GroupTriple:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise DocumentError(f"cannot read {path}: {exc.strerror}") from None
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DocumentError(f"{path}: invalid JSON ({exc.msg} at line {exc.lineno})") from None
    return parse_document(doc)


def to_document(t: GroupTriple, group_defs: list[dict] | None = None) -> dict:
    """Canonical document for ``t``.

    ``group_defs`` may supply the group entries (for example cyclic factors and
    products); otherwise every index group is written as a table.
    """
    if group_defs is None:
        group_defs = [{"name": x, "kind": "table",
                       "cayley": [list(r) for r in t.system[x].table]} for x in t.indices]
    pos = t.system.position
    pairs = []
    for x, y in t.isos.relation():
        if pos[x] > pos[y]:
            continue
        d = t.isos.data[(x, y)]
        if x == y and d.h.order == 1 and d.phi.map == tuple(range(len(d.phi.map))):
            continue
        qd, qc = d.phi.domain, d.phi.codomain
        pairs.append({
            "x": x, "y": y,
            "H": list(d.h.elements),
            "K": list(d.k.elements),
            "iso": [[c.representative, qc.cosets[d.phi.map[i]].representative]
                    for i, c in enumerate(qd.cosets)],
        })
    cosets = [{"x": a, "y": b, "z": c, "representative": t.cosets[(a, b, c)].representative}
              for a, b, c in e3(t.isos) if not t.cosets.is_identity((a, b, c))]
    doc = {
        "format": FORMAT,
        "groups": group_defs,
        "classes": [list(c) for c in t.isos.classes],
        "pairs": pairs,
    }
    if cosets:
        doc["cosets"] = cosets
    return doc


def dumps(doc: Mapping) -> str:
    """Canonical text: two-space indent, integer rows kept on one line."""
    text = json.dumps(doc, indent=2)
    # collapse innermost integer arrays so tables and element lists stay readable
    return re.sub(r"\[\s*([-\d,\s]*?)\s*\]",
                  lambda m: "[" + ", ".join(v.strip() for v in m.group(1).split(",") if v.strip()) + "]",
                  text) + "\n"
