"""JSON document format for sheaved spaces and reports.

Scalars cross the boundary as strings ("3", "-1/2", residues mod p) so
no float ever enters; matrices are row-major lists of rows.  An absent
sheaf block means the constant rank-1 sheaf.  Field tags: "Q", "GF:<p>"
with p prime, or "Z" (constant-coefficient commands only).
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from . import __version__
from .exact_linalg import GF, QQ, LinalgError, Matrix
from .poset import Poset, PosetError, build_poset
from .sheaf import Sheaf, SheavedSpace, SheafError, constant_sheaf

MAP_KEY_SEP = "->"
_NAME_RE = re.compile(r"^[^\s]+$")


class DocumentError(Exception):
    """Structural problem in a space document."""


@dataclass
class SpaceDocument:
    field_tag: str  # "Q" | "GF:<p>" | "Z"
    elements: tuple
    covers: tuple  # of (lower, upper) pairs
    stalks: Optional[dict] = None  # name -> dimension; None = constant rank 1
    maps: Optional[dict] = None  # (lower, upper) -> rows of scalar strings

    def has_sheaf_block(self) -> bool:
        return self.stalks is not None


def _parse_field_tag(tag):
    if tag == "Q":
        return QQ
    if tag == "Z":
        return None  # integers: constant-coefficient commands only
    if isinstance(tag, str) and tag.startswith("GF:"):
        try:
            p = int(tag[3:])
        except ValueError:
            raise DocumentError(f"bad field tag {tag!r}")
        try:
            return GF(p)
        except LinalgError as e:
            raise DocumentError(str(e))
    raise DocumentError(f"bad field tag {tag!r} (want 'Q', 'GF:<p>' or 'Z')")


def _check_name(name):
    if not isinstance(name, str) or not _NAME_RE.match(name) or MAP_KEY_SEP in name:
        raise DocumentError(
            f"bad element name {name!r}: no whitespace or '{MAP_KEY_SEP}' allowed"
        )


def parse_space(data) -> SpaceDocument:
    """Validate raw JSON data into a SpaceDocument (structure only)."""
    if not isinstance(data, dict):
        raise DocumentError("document must be a JSON object")
    for key in ("field", "elements", "covers"):
        if key not in data:
            raise DocumentError(f"missing key {key!r}")
    unknown = set(data) - {"field", "elements", "covers", "sheaf", "generator"}
    if unknown:
        raise DocumentError(f"unknown keys: {sorted(unknown)}")
    _parse_field_tag(data["field"])
    elements = data["elements"]
    if not isinstance(elements, list):
        raise DocumentError("'elements' must be a list")
    for e in elements:
        _check_name(e)
    known = set(elements)
    if len(known) != len(elements):
        raise DocumentError("duplicate element names")
    covers = []
    for c in data["covers"]:
        if not (isinstance(c, list) and len(c) == 2):
            raise DocumentError(f"bad cover entry {c!r}")
        lo, hi = c
        if lo not in known or hi not in known:
            raise DocumentError(f"cover {c!r} references unknown elements")
        covers.append((lo, hi))
    stalks = maps = None
    if "sheaf" in data and data["sheaf"] is not None:
        block = data["sheaf"]
        if not isinstance(block, dict) or set(block) - {"stalks", "maps"}:
            raise DocumentError("'sheaf' must be an object with 'stalks' and 'maps'")
        stalks = {}
        for name, dim in block.get("stalks", {}).items():
            if name not in known:
                raise DocumentError(f"stalk for unknown element {name!r}")
            if not isinstance(dim, int) or dim < 0:
                raise DocumentError(f"bad stalk dimension for {name!r}: {dim!r}")
            stalks[name] = dim
        missing = known - set(stalks)
        if missing:
            raise DocumentError(f"missing stalk dimensions: {sorted(missing)}")
        maps = {}
        for key, rows in block.get("maps", {}).items():
            parts = key.split(MAP_KEY_SEP)
            if len(parts) != 2:
                raise DocumentError(f"bad map key {key!r}")
            cov = (parts[0], parts[1])
            if cov not in set(covers):
                raise DocumentError(f"map key {key!r} is not a cover")
            if not isinstance(rows, list) or not all(isinstance(r, list) for r in rows):
                raise DocumentError(f"map {key!r} must be a list of rows")
            maps[cov] = rows
        missing_maps = set(covers) - set(maps)
        if missing_maps:
            raise DocumentError(f"missing maps for covers: {sorted(missing_maps)}")
    return SpaceDocument(data["field"], tuple(elements), tuple(covers), stalks, maps)


def load_space(path) -> SpaceDocument:
    try:
        with open(path) as fh:
            data = json.load(fh)
    except OSError as e:
        raise DocumentError(f"cannot read {path}: {e}")
    except json.JSONDecodeError as e:
        raise DocumentError(f"invalid JSON in {path}: {e}")
    return parse_space(data)


def _parse_scalar(s, ring):
    if not isinstance(s, str):
        raise DocumentError(f"scalar entries must be strings, got {s!r}")
    try:
        value = Fraction(s)
    except (ValueError, ZeroDivisionError):
        raise DocumentError(f"bad scalar {s!r}")
    try:
        return ring.coerce(value)
    except LinalgError as e:
        raise DocumentError(str(e))


def document_poset(doc: SpaceDocument) -> Poset:
    try:
        return build_poset(doc.elements, doc.covers)
    except PosetError as e:
        raise DocumentError(str(e))


def document_space(doc: SpaceDocument) -> SheavedSpace:
    """Build the sheaved space (shape validation only; commutativity is
    the caller's concern).  "Z" documents get a constant rank-1 sheaf
    over Q so the order-theoretic machinery applies."""
    ring = _parse_field_tag(doc.field_tag) or QQ
    poset = document_poset(doc)
    if not doc.has_sheaf_block():
        return SheavedSpace(poset, constant_sheaf(poset, ring, 1))
    dims = doc.stalks
    maps = {}
    for (u, v), rows in doc.maps.items():
        entries = [[_parse_scalar(x, ring) for x in row] for row in rows]
        try:
            maps[(u, v)] = Matrix(ring, dims[v], dims[u], entries)
        except LinalgError:
            raise DocumentError(
                f"map {u}{MAP_KEY_SEP}{v} does not match stalk dimensions "
                f"{dims[v]}x{dims[u]}"
            )
    try:
        return SheavedSpace(poset, Sheaf(poset, ring, dims, maps))
    except SheafError as e:
        raise DocumentError(str(e))


def _scalar_str(x) -> str:
    return str(x)


def space_to_data(sp: SheavedSpace, field_tag: str, generator: Optional[dict] = None) -> dict:
    """Serialize a sheaved space canonically (sorted covers and keys)."""
    f = sp.sheaf
    data = {
        "generator": generator or {"tool": "posheaf", "version": __version__},
        "field": field_tag,
        "elements": list(sp.poset.elements),
        "covers": [list(c) for c in sorted(sp.poset.covers)],
        "sheaf": {
            "stalks": {e: f.stalk_dim[e] for e in sorted(sp.poset.elements)},
            "maps": {
                f"{u}{MAP_KEY_SEP}{v}": [
                    [_scalar_str(x) for x in row] for row in f.cover_maps[(u, v)].entries
                ]
                for (u, v) in sorted(sp.poset.covers)
            },
        },
    }
    return data


def document_to_data(doc: SpaceDocument, generator: Optional[dict] = None) -> dict:
    """Canonical raw form of a parsed document (for round-tripping)."""
    data = {
        "generator": generator or {"tool": "posheaf", "version": __version__},
        "field": doc.field_tag,
        "elements": list(doc.elements),
        "covers": [list(c) for c in sorted(doc.covers)],
    }
    if doc.has_sheaf_block():
        data["sheaf"] = {
            "stalks": {e: doc.stalks[e] for e in sorted(doc.stalks)},
            "maps": {
                f"{u}{MAP_KEY_SEP}{v}": [
                    [_canonical_scalar(x) for x in row] for row in doc.maps[(u, v)]
                ]
                for (u, v) in sorted(doc.maps)
            },
        }
    return data


def _canonical_scalar(s: str) -> str:
    return str(Fraction(s))


def dump_json(data: dict) -> str:
    return json.dumps(data, indent=2) + "\n"
