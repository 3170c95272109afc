"""Line-oriented text I/O: UTF-8, newline-terminated, optionally gzipped."""

from __future__ import annotations

import gzip
import hashlib
from pathlib import Path
from typing import IO, Iterable, Iterator


def smart_open(path: str | Path, mode: str = "rt") -> IO:
    """Open plain or .gz text files uniformly (UTF-8, '\\n' newlines)."""
    path = Path(path)
    if path.suffix == ".gz":
        return gzip.open(path, mode=mode, encoding="utf-8", newline="\n")
    return open(path, mode=mode, encoding="utf-8", newline="\n")


def read_lines(path: str | Path) -> list[str]:
    """All lines of a text file, without terminators."""
    with smart_open(path) as fh:
        return [line.rstrip("\n") for line in fh]


def iter_lines(path: str | Path) -> Iterator[str]:
    """Stream lines of a text file, without terminators."""
    with smart_open(path) as fh:
        for line in fh:
            yield line.rstrip("\n")


def write_lines(path: str | Path, lines: Iterable[str]) -> int:
    """Write one sentence per line with '\\n' terminators; returns line count."""
    count = 0
    with smart_open(path, "wt") as fh:
        for line in lines:
            fh.write(line)
            fh.write("\n")
            count += 1
    return count


def file_fingerprint(path: str | Path) -> str:
    """Stable content fingerprint used by run manifests."""
    digest = hashlib.blake2b(digest_size=16)
    with open(path, "rb") as fh:
        while chunk := fh.read(1 << 20):
            digest.update(chunk)
    return digest.hexdigest()
