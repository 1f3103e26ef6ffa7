"""JSON file formats for CDCs, triangulations, partitions, covers and schemes."""
from __future__ import annotations

import json
import sys
from pathlib import Path
from typing import Any

from .cdc import CDC, new_cdc
from .errors import BadParameterError
from .generators import GridTriangulation
from .geometry import PlanarPartition, format_coord
from .schemes import BicliqueCover, IBScheme


def cdc_to_json(cdc: CDC) -> dict[str, Any]:
    return {"ground_set": list(cdc.labels), "sets": [cdc.label_set(s) for s in cdc.sets]}


def cdc_from_json(obj: dict[str, Any], mode: str = "strict") -> CDC:
    return new_cdc([str(x) for x in obj["ground_set"]], [[str(x) for x in s] for s in obj["sets"]], mode=mode)


def triangulation_to_json(tri: GridTriangulation) -> dict[str, Any]:
    return {"M": tri.M, "N": tri.N, "triangles": [[list(p) for p in t] for t in tri.triangles]}


def triangulation_from_json(obj: dict[str, Any]) -> GridTriangulation:
    return GridTriangulation(int(obj["M"]), int(obj["N"]), tuple(tuple(tuple(p) for p in t) for t in obj["triangles"]))


def partition_to_json(part: PlanarPartition) -> dict[str, Any]:
    return {"polygons": [[[format_coord(x), format_coord(y)] for x, y in poly] for poly in part.polygons]}


def partition_from_json(obj: dict[str, Any]) -> PlanarPartition:
    return PlanarPartition(tuple(tuple(tuple(p) for p in poly) for poly in obj["polygons"]))


def cover_to_json(cover: BicliqueCover, labels=None) -> dict[str, Any]:
    """Levels hold 0-based node indices; ``labels`` is informational only."""
    out: dict[str, Any] = {
        "nodes": cover.node_count,
        "levels": [{"A": sorted(a), "B": sorted(b)} for a, b in cover.levels],
    }
    if labels is not None:
        out["labels"] = list(labels)
    return out


def cover_from_json(obj: dict[str, Any]) -> BicliqueCover:
    n = int(obj["nodes"])
    levels = []
    for lv in obj["levels"]:
        a, b = [int(v) for v in lv["A"]], [int(v) for v in lv["B"]]
        if any(not 0 <= v < n for v in a + b):
            raise BadParameterError(f"cover level {lv} has an index outside 0..{n - 1}")
        levels.append((a, b))
    return BicliqueCover(n, levels)


def scheme_to_json(scheme: IBScheme) -> dict[str, Any]:
    return {"nodes": scheme.node_count, "k": scheme.k, "levels": [[sorted(alt) for alt in lv] for lv in scheme.levels]}


def scheme_from_json(obj: dict[str, Any]) -> IBScheme:
    return IBScheme(int(obj["nodes"]), int(obj["k"]), [[list(alt) for alt in lv] for lv in obj["levels"]])


def kind_of(obj: dict[str, Any]) -> str:
    if "ground_set" in obj:
        return "cdc"
    if "triangles" in obj:
        return "triangulation"
    if "polygons" in obj:
        return "partition"
    if "k" in obj and "levels" in obj:
        return "scheme"
    if "levels" in obj:
        return "cover"
    raise BadParameterError("unrecognized JSON document")


def read_json(path: str) -> dict[str, Any]:
    text = sys.stdin.read() if path == "-" else Path(path).read_text()
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise BadParameterError(f"{path}: not valid JSON ({exc})") from None


def dumps(obj: dict[str, Any]) -> str:
    return json.dumps(obj, indent=1) + "\n"


def write_text(path: str | None, text: str) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        Path(path).write_text(text)
