"""JSON-lines catalog of results."""
from __future__ import annotations

import json
import os
import tempfile
from dataclasses import asdict, dataclass, field
from datetime import datetime, timezone
from pathlib import Path

from . import __version__

# keys that legitimately differ between otherwise identical runs
RUN_KEYS = frozenset({"timestamp", "elapsed_ms", "partitions"})


@dataclass
class CatalogRecord:
    field: dict
    curve: dict
    n: int
    track: dict | None
    completeness: dict | None
    seed: int
    version: str = __version__
    timestamp: str = field(default_factory=lambda: datetime.now(timezone.utc).isoformat(timespec="seconds"))

    def to_json(self) -> str:
        return json.dumps(asdict(self), sort_keys=True)

    @classmethod
    def from_json(cls, line: str) -> CatalogRecord:
        return cls(**json.loads(line))


def append(path, records) -> None:
    """Append records atomically: the old file is replaced only once the new
    contents are fully on disk."""
    path = Path(path)
    old = path.read_bytes() if path.exists() else b""
    if old and not old.endswith(b"\n"):
        old += b"\n"
    new = "".join(r.to_json() + "\n" for r in records).encode()
    fd, tmp = tempfile.mkstemp(dir=path.parent or ".", prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "wb") as fh:
            fh.write(old + new)
            fh.flush()
            os.fsync(fh.fileno())
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def load(path) -> list[CatalogRecord]:
    with open(path, encoding="utf-8") as fh:
        return [CatalogRecord.from_json(line) for line in fh if line.strip()]


def stable_view(obj):
    """``obj`` with run-dependent keys removed, for reproducibility checks."""
    if isinstance(obj, CatalogRecord):
        obj = asdict(obj)
    if isinstance(obj, dict):
        return {k: stable_view(v) for k, v in obj.items() if k not in RUN_KEYS}
    if isinstance(obj, list):
        return [stable_view(v) for v in obj]
    return obj
