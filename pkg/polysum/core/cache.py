"""Disk cache for generated polytopes, keyed by a hash of their parameters."""

from __future__ import annotations

import hashlib
import json
import os
from pathlib import Path
from typing import Any, Dict, Optional

from .. import __version__


def _hash_key(payload: Dict[str, Any]) -> str:
    # the package version is part of the key so stale constructions are never reused
    dumped = json.dumps({"_version": __version__, **payload}, sort_keys=True, ensure_ascii=False, default=str)
    return hashlib.sha256(dumped.encode("utf-8")).hexdigest()[:16]


class SimpleDiskCache:
    def __init__(self, root: Path, suffix: str = ".json") -> None:
        self.root = root
        self.suffix = suffix
        self.root.mkdir(parents=True, exist_ok=True)

    def get_path(self, namespace: str, payload: Dict[str, Any]) -> Path:
        ns_dir = self.root / namespace
        ns_dir.mkdir(parents=True, exist_ok=True)
        return ns_dir / f"{_hash_key(payload)}{self.suffix}"

    def exists(self, namespace: str, payload: Dict[str, Any]) -> Optional[Path]:
        path = self.get_path(namespace, payload)
        return path if path.exists() else None

    def read_json(self, namespace: str, payload: Dict[str, Any]) -> Optional[Dict[str, Any]]:
        """Stored document, or None on a miss; unreadable entries are dropped and count as misses."""
        path = self.exists(namespace, payload)
        if path is None:
            return None
        try:
            return json.loads(path.read_text(encoding="utf-8"))
        except (OSError, json.JSONDecodeError):
            path.unlink(missing_ok=True)
            return None

    def write_json(self, namespace: str, payload: Dict[str, Any], doc: Dict[str, Any]) -> Path:
        path = self.get_path(namespace, payload)
        tmp = path.with_name(f"{path.name}.{os.getpid()}.tmp")
        tmp.write_text(json.dumps(doc, indent=2, sort_keys=True, default=str), encoding="utf-8")
        os.replace(tmp, path)
        return path

    def clear(self, namespace: Optional[str] = None) -> int:
        dirs = [self.root / namespace] if namespace else [d for d in self.root.iterdir() if d.is_dir()]
        removed = 0
        for d in dirs:
            for f in d.glob(f"*{self.suffix}"):
                f.unlink()
                removed += 1
        return removed
