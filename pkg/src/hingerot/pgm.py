"""Minimal PGM (P2 ASCII / P5 binary) reading and writing, maxval <= 255."""
from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path


class PgmError(ValueError):
    pass


@dataclass
class Pgm:
    width: int
    height: int
    pixels: list[int]  # row-major, top row first
    maxval: int = 255

    def __post_init__(self):
        if len(self.pixels) != self.width * self.height:
            raise PgmError("pixel count does not match dimensions")

    def get(self, col: int, row: int) -> int:
        return self.pixels[row * self.width + col]


def _tokens(data: bytes, count: int, pos: int) -> tuple[list[bytes], int]:
    out = []
    n = len(data)
    while len(out) < count:
        while pos < n and data[pos : pos + 1].isspace():
            pos += 1
        if pos < n and data[pos : pos + 1] == b"#":
            while pos < n and data[pos : pos + 1] not in (b"\n", b"\r"):
                pos += 1
            continue
        if pos >= n:
            raise PgmError("truncated header")
        start = pos
        while pos < n and not data[pos : pos + 1].isspace() and data[pos : pos + 1] != b"#":
            pos += 1
        out.append(data[start:pos])
    return out, pos


def parse(data: bytes) -> Pgm:
    magic = data[:2]
    if magic not in (b"P2", b"P5"):
        raise PgmError(f"not a PGM file (magic {magic!r})")
    try:
        (w, h, maxval), pos = _tokens(data, 3, 2)
        width, height, maxval = int(w), int(h), int(maxval)
    except PgmError:
        raise
    except ValueError:
        raise PgmError("malformed header") from None
    if width <= 0 or height <= 0:
        raise PgmError("image dimensions must be positive")
    if not 0 < maxval <= 255:
        raise PgmError(f"unsupported maxval {maxval}")
    count = width * height
    if magic == b"P5":
        if pos >= len(data) or not data[pos : pos + 1].isspace():
            raise PgmError("malformed header")
        body = data[pos + 1 : pos + 1 + count]
        if len(body) != count:
            raise PgmError("truncated pixel data")
        pixels = list(body)
    else:
        try:
            toks, _ = _tokens(data, count, pos)
            pixels = [int(t) for t in toks]
        except PgmError:
            raise PgmError("truncated pixel data") from None
        except ValueError:
            raise PgmError("malformed pixel data") from None
    if any(v < 0 or v > maxval for v in pixels):
        raise PgmError("pixel value exceeds maxval")
    return Pgm(width, height, pixels, maxval)


def dump(img: Pgm, binary: bool = True) -> bytes:
    header = f"{'P5' if binary else 'P2'}\n{img.width} {img.height}\n{img.maxval}\n".encode()
    if binary:
        return header + bytes(img.pixels)
    rows = (
        " ".join(str(v) for v in img.pixels[r * img.width : (r + 1) * img.width])
        for r in range(img.height)
    )
    return header + ("\n".join(rows) + "\n").encode()


def read(path) -> Pgm:
    return parse(Path(path).read_bytes())


def write(path, img: Pgm, binary: bool = True) -> None:
    Path(path).write_bytes(dump(img, binary))
