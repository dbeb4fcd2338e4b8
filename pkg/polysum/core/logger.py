from __future__ import annotations

import json
import threading
import time
from contextlib import contextmanager
from datetime import datetime, timezone
from pathlib import Path
from typing import Any, Dict, Iterator, Optional

_WRITE_LOCK = threading.Lock()


class JsonlLogger:
    """Appends one JSON object per event to ``<log_dir>/<name>.jsonl``."""

    def __init__(self, log_dir: Path, name: str, context: Optional[Dict[str, Any]] = None) -> None:
        self.log_dir = log_dir
        self.log_dir.mkdir(parents=True, exist_ok=True)
        self.path = self.log_dir / f"{name}.jsonl"
        self.context = dict(context or {})

    def bind(self, **context: Any) -> "JsonlLogger":
        """Same file, with ``context`` added to every record."""
        child = JsonlLogger.__new__(JsonlLogger)
        child.log_dir, child.path = self.log_dir, self.path
        child.context = {**self.context, **context}
        return child

    def log(self, record: Dict[str, Any]) -> None:
        stamp = datetime.now(timezone.utc).isoformat().replace("+00:00", "Z")
        line = json.dumps({"time": stamp, **self.context, **record}, ensure_ascii=False, default=str)
        # verification workers share one file
        with _WRITE_LOCK, self.path.open("a", encoding="utf-8") as f:
            f.write(line + "\n")


def log_event(logger: Optional[JsonlLogger], event: str, **fields: Any) -> None:
    if logger is not None:
        logger.log({"event": event, **fields})


@contextmanager
def timed(logger: Optional[JsonlLogger], event: str, **fields: Any) -> Iterator[None]:
    start = time.perf_counter()
    try:
        yield
    finally:
        log_event(logger, event, elapsed_ms=round((time.perf_counter() - start) * 1000, 1), **fields)
