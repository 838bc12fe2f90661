"""Reading and writing ``explanations.jsonl`` logs.

Each line is a JSON object with exactly the fields ``user``, ``item``,
``feature`` (strings) and ``claim_has``, ``claim_likes`` (booleans).
"""

from __future__ import annotations

import json
from typing import Iterable

from veracity.errors import ParseError
from veracity.outcomes import ExplanationRecord

FIELDS = ("user", "item", "feature", "claim_has", "claim_likes")


def parse_explanations(source: bytes | str, name: str = "explanations.jsonl") -> list[ExplanationRecord]:
    if isinstance(source, bytes):
        try:
            source = source.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise ParseError(name, None, f"not valid UTF-8 ({exc.reason})") from None
    records = []
    for lineno, line in enumerate(source.splitlines(), start=1):
        if not line.strip():
            continue
        try:
            obj = json.loads(line)
        except json.JSONDecodeError as exc:
            raise ParseError(name, lineno, f"invalid JSON: {exc.msg}") from None
        if not isinstance(obj, dict):
            raise ParseError(name, lineno, "expected a JSON object")
        extra = sorted(set(obj) - set(FIELDS))
        if extra:
            raise ParseError(name, lineno, f"unknown fields: {', '.join(extra)}")
        missing = [f for f in FIELDS if f not in obj]
        if missing:
            raise ParseError(name, lineno, f"missing fields: {', '.join(missing)}")
        for key in ("user", "item", "feature"):
            if not isinstance(obj[key], str) or not obj[key]:
                raise ParseError(name, lineno, f"{key!r} must be a non-empty string")
        for key in ("claim_has", "claim_likes"):
            if not isinstance(obj[key], bool):
                raise ParseError(name, lineno, f"{key!r} must be a boolean")
        records.append(
            ExplanationRecord(
                user_id=obj["user"],
                item_id=obj["item"],
                feature_id=obj["feature"],
                claims_item_has_feature=obj["claim_has"],
                claims_user_likes_feature=obj["claim_likes"],
            )
        )
    return records


def dump_explanations(records: Iterable[ExplanationRecord]) -> str:
    lines = []
    for r in records:
        obj = {
            "user": r.user_id,
            "item": r.item_id,
            "feature": r.feature_id,
            "claim_has": r.claims_item_has_feature,
            "claim_likes": r.claims_user_likes_feature,
        }
        lines.append(json.dumps(obj, separators=(",", ":")))
    return "".join(line + "\n" for line in lines)
