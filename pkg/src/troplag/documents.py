"""Reading, validating and writing troplag/1 JSON documents."""
from __future__ import annotations

import json
import math
from functools import lru_cache
from importlib import resources
from typing import Any, Tuple

import jsonschema
import numpy as np

from .bundle import KaneyamaBundle
from .errors import DocumentError, TroplagError
from .multisection import TropicalMultiSection, multisection_from_json

SCHEMA_VERSION = "troplag/1"
SCHEMA_FILES = {
    "tropical_multisection": "tropical.json",
    "kaneyama_bundle": "bundle.json",
    "realization": "realization.json",
}


@lru_cache(maxsize=None)
def schema_for(doc_type: str) -> dict:
    name = SCHEMA_FILES[doc_type]
    return json.loads(resources.files("troplag").joinpath("schemas", name).read_text())


def json_path(parts) -> str:
    out = "$"
    for p in parts:
        out += f"[{p}]" if isinstance(p, int) else f".{p}"
    return out


def parse_text(text: str, source: str = "<input>") -> dict:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise DocumentError(e.msg, f"{source}:{e.lineno}:{e.colno}") from None
    if not isinstance(doc, dict):
        raise DocumentError("top level must be a JSON object", f"{source}: $")
    return doc


def check_schema(doc: dict, source: str = "<input>") -> str:
    """Validate against the schema named by doc["type"]; returns the type."""
    if doc.get("schema") != SCHEMA_VERSION:
        raise DocumentError(f'expected "schema": "{SCHEMA_VERSION}", got {doc.get("schema")!r}',
                            f"{source}: $.schema")
    doc_type = doc.get("type")
    if doc_type not in SCHEMA_FILES:
        raise DocumentError(f"unknown document type {doc_type!r}; expected one of {sorted(SCHEMA_FILES)}",
                            f"{source}: $.type")
    validator = jsonschema.Draft202012Validator(schema_for(doc_type))
    errors = sorted(validator.iter_errors(doc), key=lambda e: (len(e.absolute_path), list(map(str, e.absolute_path))))
    if errors:
        e = errors[0]
        raise DocumentError(e.message, f"{source}: {json_path(e.absolute_path)}")
    return doc_type


def load_document(path: str) -> Tuple[dict, str]:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as e:
        raise DocumentError(e.strerror or str(e), path) from None
    doc = parse_text(text, path)
    return doc, check_schema(doc, path)


def build_tropical(doc: dict, source: str = "<input>") -> TropicalMultiSection:
    """Construct the multi-section, mapping structural errors to the offending JSON path."""
    from .errors import FanError
    from .fan import fan_from_json

    try:
        n = fan_from_json(doc["fan"]).n
    except FanError as e:
        raise DocumentError(str(e), f"{source}: $.fan") from None
    r = int(doc.get("degree", 2))
    for i, l in enumerate(doc["lifts"]):
        for key, bound in (("cone", n), ("sheet", r)):
            if not 0 <= int(l[key]) < bound:
                raise DocumentError(f"{key} {l[key]} out of range 0..{bound - 1}", f"{source}: $.lifts[{i}].{key}")
    for i, e in enumerate(doc.get("adjacency") or []):
        if not 0 <= int(e["ray"]) < n:
            raise DocumentError(f"ray {e['ray']} out of range 0..{n - 1}", f"{source}: $.adjacency[{i}].ray")
        for j, pair in enumerate(e["pairs"]):
            if not all(0 <= int(s) < r for s in pair):
                raise DocumentError(f"sheet pair {pair} out of range 0..{r - 1}",
                                    f"{source}: $.adjacency[{i}].pairs[{j}]")
    try:
        return multisection_from_json(doc)
    except (TroplagError, ValueError) as e:
        raise DocumentError(str(e), f"{source}: $.lifts") from None


def build_bundle(doc: dict, source: str = "<input>") -> KaneyamaBundle:
    try:
        return KaneyamaBundle.from_json(doc)
    except (TroplagError, ValueError) as e:
        raise DocumentError(str(e), f"{source}: $") from None


def tropical_document(ts: TropicalMultiSection, name: str = "") -> dict:
    doc = {"schema": SCHEMA_VERSION, "type": "tropical_multisection"}
    if name:
        doc["name"] = name
    doc.update(ts.to_json())
    return doc


def bundle_document(kb: KaneyamaBundle, name: str = "") -> dict:
    doc = {"schema": SCHEMA_VERSION, "type": "kaneyama_bundle"}
    if name:
        doc["name"] = name
    doc.update(kb.to_json())
    return doc


def fmt6(x: float) -> Any:
    """Round to 6 significant digits; non-finite values become strings."""
    x = float(x)
    if not math.isfinite(x):
        return "NaN" if math.isnan(x) else ("Infinity" if x > 0 else "-Infinity")
    y = float(f"{x:.6g}")
    return 0.0 if y == 0 else y


def rounded(obj: Any) -> Any:
    """Recursively apply fmt6 to every float (numpy scalars and arrays included)."""
    if isinstance(obj, dict):
        return {k: rounded(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [rounded(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return rounded(obj.tolist())
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        return fmt6(obj)
    if isinstance(obj, complex):
        return [fmt6(obj.real), fmt6(obj.imag)]
    return obj


def dumps(obj: Any, round_floats: bool = True) -> str:
    return json.dumps(rounded(obj) if round_floats else obj, indent=2) + "\n"
