"""
Canonical JSON

One serialization is used everywhere a report, a config or a cache key is
hashed or written: sorted keys, compact separators, exact rationals as
{"num", "den"} strings.
"""

import hashlib
import json
from enum import Enum
from fractions import Fraction
from typing import Any


def to_jsonable(obj: Any) -> Any:
    """Convert exact rationals, enums, tuples and sets into JSON-ready values."""
    if isinstance(obj, Fraction):
        return {"num": str(obj.numerator), "den": str(obj.denominator)}
    if isinstance(obj, Enum):
        return obj.value
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    if isinstance(obj, (set, frozenset)):
        return sorted((to_jsonable(v) for v in obj), key=canonical_json)
    if hasattr(obj, "model_dump"):
        return to_jsonable(obj.model_dump(mode="json"))
    return obj


def canonical_json(obj: Any) -> str:
    return json.dumps(to_jsonable(obj), sort_keys=True, separators=(",", ":"))


def content_hash(obj: Any) -> str:
    return hashlib.sha256(canonical_json(obj).encode("utf-8")).hexdigest()


def fraction_from_json(data: Any) -> Fraction:
    """Inverse of the rational encoding."""
    if isinstance(data, dict):
        return Fraction(int(data["num"]), int(data["den"]))
    return Fraction(data)
