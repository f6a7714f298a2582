"""Gray-scale rasters and their file containers.

Samples are double precision end to end; binary PGM (8/16-bit) and the
lossless SRF float container are conversions at the file boundary only.
Parity sub-sampling splits an even-sized raster into four quarter rasters.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import DimensionError, FormatError

DEPTH_TAGS = ("float", "u8", "u16")

SRF_MAGIC = b"SRF1"


@dataclass(frozen=True, eq=False)
class Raster:
    """A gray-scale image: (height, width) float64 grid, nominal range [0, 255]."""

    pixels: np.ndarray
    depth_tag: str = "float"

    def __post_init__(self):
        px = np.array(self.pixels, dtype=np.float64, order="C", copy=True)
        if px.ndim != 2 or px.size == 0:
            raise DimensionError("raster pixels must form a non-empty 2-D grid")
        if self.depth_tag not in DEPTH_TAGS:
            raise ValueError(f"unknown depth_tag {self.depth_tag!r}")
        px.setflags(write=False)
        object.__setattr__(self, "pixels", px)

    @property
    def height(self) -> int:
        return self.pixels.shape[0]

    @property
    def width(self) -> int:
        return self.pixels.shape[1]


@dataclass(frozen=True, eq=False)
class QuadSample:
    """The four parity sub-rasters of an even-sized raster, indexed k = 1..4."""

    sub: tuple[Raster, Raster, Raster, Raster]

    def __post_init__(self):
        sub = tuple(self.sub)
        if len(sub) != 4:
            raise DimensionError(f"expected exactly four sub-rasters, got {len(sub)}")
        shape = sub[0].pixels.shape
        for s in sub[1:]:
            if s.pixels.shape != shape:
                raise DimensionError("sub-raster dimensions differ")
        object.__setattr__(self, "sub", sub)


def round_half_away(x: np.ndarray) -> np.ndarray:
    """Round to nearest integer with ties away from zero (platform independent)."""
    return np.copysign(np.floor(np.abs(x) + 0.5), x)


def quantize_u8(r: Raster) -> Raster:
    """Round and clamp samples to integers in [0, 255]; idempotent."""
    return Raster(np.clip(round_half_away(r.pixels), 0.0, 255.0), "u8")


def subsample(r: Raster) -> QuadSample:
    """Split into four (h/2, w/2) rasters by (row, column) parity.

    In 1-based pixel coordinates sub 1 keeps (odd, odd), sub 2 (even, odd),
    sub 3 (odd, even) and sub 4 (even, even), so every parent pixel lands in
    exactly one sub-raster.
    """
    if r.height % 2 or r.width % 2:
        raise DimensionError(f"raster dimensions must be even, got {r.height}x{r.width}")
    p = r.pixels
    quarters = (p[0::2, 0::2], p[1::2, 0::2], p[0::2, 1::2], p[1::2, 1::2])
    return QuadSample(tuple(Raster(q, r.depth_tag) for q in quarters))


def inverse_subsample(q: QuadSample) -> Raster:
    """Reassemble the parent raster; exact inverse of subsample."""
    h, w = q.sub[0].pixels.shape
    out = np.empty((2 * h, 2 * w))
    out[0::2, 0::2] = q.sub[0].pixels
    out[1::2, 0::2] = q.sub[1].pixels
    out[0::2, 1::2] = q.sub[2].pixels
    out[1::2, 1::2] = q.sub[3].pixels
    return Raster(out, q.sub[0].depth_tag)


def _pgm_header(data: bytes) -> tuple[list[bytes], int]:
    # magic, width, height, maxval; '#' between tokens starts a comment to end of line
    tokens: list[bytes] = []
    i, n = 0, len(data)
    while len(tokens) < 4:
        while i < n and data[i : i + 1].isspace():
            i += 1
        if i < n and data[i : i + 1] == b"#":
            while i < n and data[i] != 0x0A:
                i += 1
            continue
        if i >= n:
            raise FormatError("PGM header ended early (need magic, width, height, maxval)")
        j = i
        while j < n and not data[j : j + 1].isspace():
            j += 1
        tokens.append(data[i:j])
        i = j
    if i >= n or not data[i : i + 1].isspace():
        raise FormatError("PGM header not terminated by whitespace before payload")
    return tokens, i + 1


def read_pgm(path) -> Raster:
    """Read a binary PGM (P5) file with maxval 255 or 65535."""
    data = Path(path).read_bytes()
    tokens, offset = _pgm_header(data)
    if tokens[0] != b"P5":
        raise FormatError(f"unsupported magic {tokens[0]!r}: only binary PGM (P5) is accepted")
    try:
        width, height, maxval = (int(t) for t in tokens[1:4])
    except ValueError:
        raise FormatError(f"non-numeric PGM header fields {tokens[1:4]!r}") from None
    if width <= 0 or height <= 0:
        raise FormatError(f"invalid PGM dimensions {width}x{height}")
    if maxval == 255:
        need = width * height
        payload = data[offset : offset + need]
        if len(payload) < need:
            raise FormatError(f"truncated payload: expected {need} bytes, got {len(payload)}")
        px = np.frombuffer(payload, dtype=np.uint8).astype(np.float64).reshape(height, width)
        return Raster(px, "u8")
    if maxval == 65535:
        need = 2 * width * height
        payload = data[offset : offset + need]
        if len(payload) < need:
            raise FormatError(f"truncated payload: expected {need} bytes, got {len(payload)}")
        raw = np.frombuffer(payload, dtype=">u2").astype(np.float64).reshape(height, width)
        return Raster(raw * (255.0 / 65535.0), "u16")
    raise FormatError(f"unsupported maxval {maxval}: must be 255 or 65535")


def write_pgm(r: Raster, path, depth: int = 8) -> None:
    """Write binary PGM; samples are rounded half-away-from-zero, then clamped."""
    if depth == 8:
        maxval = 255
        body = np.clip(round_half_away(r.pixels), 0, 255).astype(np.uint8).tobytes()
    elif depth == 16:
        maxval = 65535
        scaled = round_half_away(r.pixels * (65535.0 / 255.0))
        body = np.clip(scaled, 0, 65535).astype(">u2").tobytes()
    else:
        raise ValueError(f"depth must be 8 or 16, got {depth}")
    header = f"P5\n{r.width} {r.height}\n{maxval}\n".encode("ascii")
    Path(path).write_bytes(header + body)


def write_srf(r: Raster, path) -> None:
    """Write the lossless float container: bit-exact round trip of the samples."""
    head = SRF_MAGIC + b"\n" + f"{r.width} {r.height}".encode("ascii") + b"\n"
    Path(path).write_bytes(head + r.pixels.astype("<f8").tobytes())


def read_srf(path) -> Raster:
    data = Path(path).read_bytes()
    if data[:4] != SRF_MAGIC or data[4:5] != b"\n":
        raise FormatError(f"bad magic {data[:5]!r}: not an SRF v1 file")
    nl = data.find(b"\n", 5)
    if nl < 0:
        raise FormatError("SRF dimensions line missing")
    parts = data[5:nl].split()
    if len(parts) != 2:
        raise FormatError(f"SRF dimensions line malformed: {data[5:nl]!r}")
    try:
        width, height = int(parts[0]), int(parts[1])
    except ValueError:
        raise FormatError(f"non-numeric SRF dimensions {parts!r}") from None
    if width <= 0 or height <= 0:
        raise FormatError(f"invalid SRF dimensions {width}x{height}")
    payload = data[nl + 1 :]
    need = 8 * width * height
    if len(payload) < need:
        raise FormatError(f"truncated payload: expected {need} bytes, got {len(payload)}")
    if len(payload) > need:
        raise FormatError(f"size mismatch: {len(payload) - need} trailing bytes")
    px = np.frombuffer(payload, dtype="<f8").astype(np.float64).reshape(height, width)
    return Raster(px, "float")
