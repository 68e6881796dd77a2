"""On-disk cache for integer tables.

One file per cache directory.  Layout::

    magic  b"CUBEMOB\\x00"   8 bytes
    version                  1 byte
    records                  repeated:  >I length, body, >I crc32(body)

A body holds three length-prefixed fields: key, payload (canonical JSON of an
integer table) and metadata (JSON).  A wrong magic or version means the whole
file is ignored; a damaged record ends the readable prefix.  Any I/O failure
turns the cache off for the run; it never yields a wrong answer.
"""
from __future__ import annotations

import json
import logging
import os
import struct
import threading
import zlib
from dataclasses import dataclass
from pathlib import Path
from typing import Any

log = logging.getLogger(__name__)

MAGIC = b"CUBEMOB\x00"
SCHEMA_VERSION = 1
FILENAME = "cubemob.cache"
ENV_VAR = "CUBEMOB_CACHE_DIR"


@dataclass(frozen=True)
class CacheEntry:
    version: int
    key: str
    payload: Any
    meta: dict


def encode_payload(payload: Any) -> bytes:
    return json.dumps(payload, sort_keys=True, separators=(",", ":")).encode()


def _field(data: bytes) -> bytes:
    return struct.pack(">I", len(data)) + data


def _read_field(buf: bytes, pos: int) -> tuple[bytes, int]:
    (size,) = struct.unpack_from(">I", buf, pos)
    pos += 4
    if pos + size > len(buf):
        raise ValueError("truncated field")
    return buf[pos:pos + size], pos + size


class Cache:
    def __init__(self, directory: str | os.PathLike | None, version: int = SCHEMA_VERSION) -> None:
        self.version = version
        self.path = Path(directory) / FILENAME if directory else None
        self._lock = threading.Lock()
        self._entries: dict[str, CacheEntry] | None = None

    @property
    def enabled(self) -> bool:
        return self.path is not None

    def _disable(self, why: str) -> None:
        log.warning("cache disabled: %s", why)
        self.path = None
        if self._entries is None:
            self._entries = {}

    def _load(self) -> dict[str, CacheEntry]:
        if self._entries is not None:
            return self._entries
        entries: dict[str, CacheEntry] = {}
        self._entries = entries
        if self.path is None or not self.path.exists():
            return entries
        try:
            buf = self.path.read_bytes()
        except OSError as exc:
            self._disable(str(exc))
            return self._entries
        if buf[:8] != MAGIC or len(buf) < 9:
            log.warning("cache file %s has a bad header; ignoring it", self.path)
            return entries
        if buf[8] != self.version:
            log.info("cache schema %d != %d; ignoring %s", buf[8], self.version, self.path)
            return entries
        pos = 9
        while pos < len(buf):
            try:
                body, pos = _read_field(buf, pos)
                (crc,) = struct.unpack_from(">I", buf, pos)
                pos += 4
                if zlib.crc32(body) != crc:
                    raise ValueError("checksum mismatch")
                key, p = _read_field(body, 0)
                payload, p = _read_field(body, p)
                meta, p = _read_field(body, p)
                entry = CacheEntry(self.version, key.decode(), json.loads(payload), json.loads(meta))
            except (ValueError, struct.error, UnicodeDecodeError) as exc:
                log.warning("discarding corrupt cache data in %s: %s", self.path, exc)
                break
            entries[entry.key] = entry
        return entries

    def get(self, key: str) -> CacheEntry | None:
        with self._lock:
            return self._load().get(key)

    def put(self, key: str, payload: Any, meta: dict | None = None) -> None:
        with self._lock:
            entries = self._load()
            entries[key] = CacheEntry(self.version, key, json.loads(encode_payload(payload)), dict(meta or {}))
            if self.path is None:
                return
            try:
                self._write(entries)
            except OSError as exc:
                self._disable(str(exc))

    def _write(self, entries: dict[str, CacheEntry]) -> None:
        assert self.path is not None
        self.path.parent.mkdir(parents=True, exist_ok=True)
        out = bytearray(MAGIC)
        out.append(self.version)
        for key in sorted(entries):
            e = entries[key]
            body = (
                _field(key.encode())
                + _field(encode_payload(e.payload))
                + _field(json.dumps(e.meta, sort_keys=True).encode())
            )
            out += _field(body) + struct.pack(">I", zlib.crc32(body))
        tmp = self.path.with_suffix(".tmp")
        tmp.write_bytes(bytes(out))
        os.replace(tmp, self.path)


def resolve_dir(flag: str | None) -> str | None:
    """The --cache-dir flag wins over the environment variable."""
    return flag if flag else os.environ.get(ENV_VAR) or None
