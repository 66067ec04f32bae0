"""On-disk cache of enumerated groups.

File layout (little endian):

    magic "MADQGRP" + version byte
    record: descriptor (domain.describe())
    record: name
    u32 generator count, then one record per encoded generator
    u64 order, then one record per encoded element in BFS order
    record: parent array (int32), record: gen_of array (int16)
    32-byte SHA-256 of the concatenated element encodings
    32-byte SHA-256 of everything before it

A record is a u32 length followed by that many bytes.  Files are keyed by a
hash of the descriptor and the encoded generators; a load recomputes the
element-stream checksum and rejects the file on any mismatch.
"""

from __future__ import annotations

import contextlib
import hashlib
import io
import os
import struct
from pathlib import Path

import numpy as np

from .groups import ENUMERATION_CACHE, Domain, FiniteGroup

MAGIC = b"MADQGRP"
VERSION = 2


class CacheError(ValueError):
    pass


def cache_key(domain: Domain, gens: list) -> str:
    h = hashlib.sha256()
    h.update(domain.describe().encode())
    for g in gens:
        b = domain.encode(g)
        h.update(struct.pack("<I", len(b)) + b)
    return h.hexdigest()


def _write_record(f, b: bytes) -> None:
    f.write(struct.pack("<I", len(b)))
    f.write(b)


def _read_exact(f, n: int) -> bytes:
    b = f.read(n)
    if len(b) != n:
        raise CacheError("truncated cache file")
    return b


def _read_record(f) -> bytes:
    (n,) = struct.unpack("<I", _read_exact(f, 4))
    return _read_exact(f, n)


def dump_group(G: FiniteGroup) -> bytes:
    D = G.domain
    f = io.BytesIO()
    f.write(MAGIC + bytes([VERSION]))
    _write_record(f, D.describe().encode())
    _write_record(f, G.name.encode())
    f.write(struct.pack("<I", len(G.gens)))
    for g in G.gens:
        _write_record(f, D.encode(g))
    f.write(struct.pack("<Q", G.order))
    h = hashlib.sha256()
    for x in G.elements:
        b = D.encode(x)
        h.update(b)
        _write_record(f, b)
    _write_record(f, np.asarray(G.parent, dtype="<i4").tobytes())
    _write_record(f, np.asarray(G.gen_of, dtype="<i2").tobytes())
    f.write(h.digest())
    body = f.getvalue()
    return body + hashlib.sha256(body).digest()


def load_group(data: bytes, domain: Domain, name: str | None = None) -> FiniteGroup:
    if len(data) < 32 or hashlib.sha256(data[:-32]).digest() != data[-32:]:
        raise CacheError("file checksum mismatch")
    f = io.BytesIO(data[:-32])
    head = _read_exact(f, len(MAGIC) + 1)
    if head[:-1] != MAGIC:
        raise CacheError("bad magic")
    if head[-1] != VERSION:
        raise CacheError(f"unsupported cache version {head[-1]}")
    desc = _read_record(f).decode()
    if desc != domain.describe():
        raise CacheError(f"cached domain {desc} differs from {domain.describe()}")
    stored_name = _read_record(f).decode()
    (ngens,) = struct.unpack("<I", _read_exact(f, 4))
    gens = [domain.decode(_read_record(f)) for _ in range(ngens)]
    (order,) = struct.unpack("<Q", _read_exact(f, 8))
    h = hashlib.sha256()
    elements = []
    for _ in range(order):
        b = _read_record(f)
        h.update(b)
        elements.append(domain.decode(b))
    parent = np.frombuffer(_read_record(f), dtype="<i4").astype(np.int32)
    gen_of = np.frombuffer(_read_record(f), dtype="<i2").astype(np.int16)
    if _read_exact(f, 32) != h.digest():
        raise CacheError("element stream checksum mismatch")
    if len(parent) != order or len(gen_of) != order:
        raise CacheError("inconsistent tree arrays")
    if f.read(1):
        raise CacheError("trailing bytes")
    index = {x: i for i, x in enumerate(elements)}
    if len(index) != order:
        raise CacheError("duplicate elements")
    return FiniteGroup(domain, gens, elements, index, parent, gen_of, name or stored_name)


class GroupCache:
    def __init__(self, directory: str | os.PathLike):
        self.directory = Path(directory)
        self.hits = 0
        self.stores = 0

    def path(self, domain: Domain, gens: list) -> Path:
        return self.directory / f"{cache_key(domain, gens)}.grp"

    def load(self, domain: Domain, gens: list, name: str) -> FiniteGroup | None:
        path = self.path(domain, gens)
        if not path.exists():
            return None
        try:
            G = load_group(path.read_bytes(), domain, name)
        except CacheError:
            return None
        if [domain.encode(g) for g in G.gens] != [domain.encode(g) for g in gens]:
            return None
        self.hits += 1
        return G

    def store(self, G: FiniteGroup) -> Path:
        self.directory.mkdir(parents=True, exist_ok=True)
        path = self.path(G.domain, list(G.gens))
        tmp = path.with_suffix(".tmp")
        tmp.write_bytes(dump_group(G))
        tmp.replace(path)
        self.stores += 1
        return path


@contextlib.contextmanager
def active_cache(directory: str | os.PathLike | None):
    """Route large enumerations through a GroupCache rooted at ``directory`` (no-op for None)."""
    if directory is None:
        yield None
        return
    previous = ENUMERATION_CACHE.get("active")
    cache = GroupCache(directory)
    ENUMERATION_CACHE["active"] = cache
    try:
        yield cache
    finally:
        if previous is None:
            ENUMERATION_CACHE.pop("active", None)
        else:
            ENUMERATION_CACHE["active"] = previous
