"""Canonical JSON result documents and Graphviz DOT output."""
from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Optional

from dtorsion.combinatorics import Context, build_universe
from dtorsion.enumeration import AInfEnumeration, ClassCollection
from dtorsion.errors import UsageError, ValidationError

FORMAT_VERSION = "1"


@dataclass
class ResultDocument:
    context: dict
    count: int
    classes: Optional[list] = None  # list of classes, each a list of int tuples
    hasse: Optional[list] = None  # list of (upper, lower)
    properties: Optional[dict] = None
    blocks: Optional[list] = None  # A-infinity only: per-block sub-documents
    format_version: str = FORMAT_VERSION

    def to_json(self) -> str:
        out = {"format_version": self.format_version, "context": self.context, "count": self.count}
        if self.classes is not None:
            out["classes"] = [[list(t) for t in cls] for cls in self.classes]
        if self.hasse is not None:
            out["hasse"] = [list(e) for e in self.hasse]
        if self.properties is not None:
            out["properties"] = self.properties
        if self.blocks is not None:
            out["blocks"] = self.blocks
        return json.dumps(out, separators=(",", ":")) + "\n"

    @classmethod
    def from_json(cls, text: str) -> "ResultDocument":
        try:
            raw = json.loads(text)
        except json.JSONDecodeError as exc:
            raise UsageError(f"not valid JSON: {exc}") from None
        if not isinstance(raw, dict) or "context" not in raw or "count" not in raw:
            raise UsageError("result document needs 'context' and 'count'")
        version = raw.get("format_version")
        if version != FORMAT_VERSION:
            raise UsageError(f"unsupported format_version {version!r}")
        classes = raw.get("classes")
        if classes is not None:
            classes = [[tuple(t) for t in c] for c in classes]
            if len(classes) != raw["count"]:
                raise UsageError("count does not match the number of classes")
        hasse = raw.get("hasse")
        if hasse is not None:
            hasse = [tuple(e) for e in hasse]
        return cls(raw["context"], raw["count"], classes, hasse, raw.get("properties"),
                   raw.get("blocks"), version)


def document_from_collection(collection: ClassCollection, lattice=None, properties=None,
                             include_classes: bool = True) -> ResultDocument:
    return ResultDocument(
        context=collection.context.describe(),
        count=len(collection),
        classes=[[t for t in c] for c in collection.as_tuples()] if include_classes else None,
        hasse=list(lattice.covers) if lattice is not None else None,
        properties=properties,
    )


def document_from_ainf(result: AInfEnumeration, include_classes: bool = True) -> ResultDocument:
    blocks = []
    for (offset, series), coll in zip(result.decomposition.blocks, result.collections):
        block = {"offset": offset, "kupisch": list(series.values), "count": len(coll)}
        if include_classes:
            block["classes"] = [[list(t) for t in c] for c in coll.as_tuples()]
        blocks.append(block)
    return ResultDocument(result.context.describe(), result.count, blocks=blocks)


def collection_from_document(doc: ResultDocument) -> ClassCollection:
    """Rebuild the collection; tuples outside the universe raise DomainError."""
    if doc.classes is None:
        raise UsageError("result document carries no classes")
    try:
        context = Context.from_description(doc.context)
    except (KeyError, TypeError) as exc:
        raise ValidationError(f"malformed context descriptor: {exc}") from None
    u = build_universe(context)
    masks = [u.mask_of(c) for c in doc.classes]
    if len(set(masks)) != len(masks):
        raise UsageError("result document lists a class twice")
    return ClassCollection.from_masks(u, masks)


def _short(t):
    if all(0 <= c < 10 for c in t):
        return "".join(map(str, t))
    return "(" + ",".join(map(str, t)) + ")"


def to_dot(lattice, labels: str = "count") -> str:
    """Hasse diagram as a plain digraph; ``u -> v`` means class u covers class v."""
    coll = lattice.collection
    lines = ["digraph torsion_classes {"]
    for i, mask in enumerate(coll.masks):
        if labels == "full":
            members = coll.universe.tuples_of(mask)
            text = " ".join(_short(t) for t in members) if members else "0"
        else:
            text = str(mask.bit_count())
        lines.append(f'  {i} [label="{text}"];')
    for upper, lower in lattice.covers:
        lines.append(f"  {upper} -> {lower};")
    lines.append("}")
    return "\n".join(lines) + "\n"
