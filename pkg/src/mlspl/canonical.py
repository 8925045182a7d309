"""Canonical JSON serialization and content hashing.

Canonical form: UTF-8, sorted keys, compact separators, no trailing
whitespace. Identical values always serialize to identical bytes, which
makes manifests and golden CLI outputs hash-stable.
"""
from __future__ import annotations

import hashlib
import json
from typing import Any


def dumps(value: Any) -> str:
    return json.dumps(value, sort_keys=True, separators=(",", ":"), ensure_ascii=False)


def dumps_pretty(value: Any) -> str:
    return json.dumps(value, sort_keys=True, indent=2, ensure_ascii=False)


def content_hash(value: Any) -> str:
    """Hex-encoded SHA-256 of the canonical serialization."""
    return hashlib.sha256(dumps(value).encode("utf-8")).hexdigest()


def text_hash(text: str) -> str:
    return hashlib.sha256(text.encode("utf-8")).hexdigest()
