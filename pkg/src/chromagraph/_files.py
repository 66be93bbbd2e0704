"""Shared artifact-file plumbing: canonical JSON, atomic writes, hashing."""

from __future__ import annotations

import hashlib
import json
import os
import tempfile
from pathlib import Path


class SchemaError(ValueError):
    """An artifact file does not match its documented schema."""


def canonical_json_bytes(payload) -> bytes:
    """Serialize ``payload`` compactly, UTF-8, with a trailing newline.

    Callers build payloads in schema field order; for identical payloads
    the result is byte-identical, so artifacts are diff-able and hashable.
    """
    text = json.dumps(payload, ensure_ascii=False, separators=(",", ":"))
    return text.encode("utf-8") + b"\n"


def atomic_write_bytes(path, data: bytes) -> None:
    """Write ``data`` via a same-directory temp file and rename.

    A partially written file is never left behind under the final name.
    """
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "wb") as fh:
            fh.write(data)
        os.replace(tmp, path)
    except BaseException:
        try:
            os.unlink(tmp)
        except OSError:
            pass
        raise


def sha256_hex(data: bytes) -> str:
    return hashlib.sha256(data).hexdigest()


def sha256_file(path) -> str:
    digest = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 20), b""):
            digest.update(chunk)
    return digest.hexdigest()
