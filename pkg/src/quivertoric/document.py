"""Quiver file format: a JSON document with vertex labels and named arrows.

Canonical layout (two-space indent, fixed key order, trailing newline):

    {
      "vertices": ["0", "1"],
      "arrows": [
        {"id": "b1", "from": "0", "to": "1"}
      ]
    }

Labels are strings; parsing followed by serialization is idempotent.
"""

from __future__ import annotations

import json

from .quiver import Quiver


class DocumentError(Exception):
    """Parse failure, with line/column information when available."""

    def __init__(self, message, line=None, column=None):
        self.line = line
        self.column = column
        if line is not None:
            message = "%s (line %d, column %d)" % (message, line, column)
        super().__init__(message)


def parse_document(text: str) -> Quiver:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DocumentError(exc.msg, exc.lineno, exc.colno) from exc
    if not isinstance(doc, dict):
        raise DocumentError("document must be a JSON object")
    vertices = doc.get("vertices")
    arrows = doc.get("arrows")
    if not isinstance(vertices, list) or not isinstance(arrows, list):
        raise DocumentError("document needs 'vertices' and 'arrows' lists")
    labels = [str(v) for v in vertices]
    triples = []
    for entry in arrows:
        if not isinstance(entry, dict) or not {"id", "from", "to"} <= set(entry):
            raise DocumentError("each arrow needs 'id', 'from' and 'to' fields")
        triples.append((str(entry["id"]), str(entry["from"]), str(entry["to"])))
    return Quiver(labels, triples)


def serialize_document(quiver: Quiver) -> str:
    doc = {
        "vertices": [str(v) for v in quiver.vertices],
        "arrows": [
            {"id": str(name), "from": str(src), "to": str(tgt)}
            for name, src, tgt in quiver.arrows
        ],
    }
    return json.dumps(doc, indent=2) + "\n"


def load_quiver(path: str) -> Quiver:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_document(fh.read())
