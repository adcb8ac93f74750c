"""Deterministic CSV and binary PGM writers."""

from __future__ import annotations

import sys
from collections.abc import Mapping, Sequence
from pathlib import Path

import numpy as np

from .errors import DomainError


def _fmt(v) -> str:
    if isinstance(v, (int, np.integer)) and not isinstance(v, bool):
        return str(int(v))
    # 17 significant digits: float(text) reproduces the value bit-exactly
    return f"{float(v):.16e}"


def format_csv(columns: Mapping[str, Sequence[float]]) -> str:
    names = list(columns)
    cols = [list(columns[n]) for n in names]
    lengths = {len(c) for c in cols}
    if len(lengths) > 1:
        raise DomainError(f"table is not rectangular: column lengths {sorted(lengths)}")
    lines = [",".join(names)]
    for row in zip(*cols):
        lines.append(",".join(_fmt(v) for v in row))
    return "\n".join(lines) + "\n"


def write_csv(columns: Mapping[str, Sequence[float]], path) -> None:
    """Header of column names, one row per line; ``path='-'`` writes to stdout."""
    text = format_csv(columns)
    if str(path) == "-":
        sys.stdout.write(text)
        sys.stdout.flush()
        return
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


def read_csv(path) -> dict[str, list[float]]:
    lines = Path(path).read_text(encoding="utf-8").splitlines()
    names = lines[0].split(",")
    cols: dict[str, list[float]] = {n: [] for n in names}
    for line in lines[1:]:
        for n, v in zip(names, line.split(",")):
            cols[n].append(float(v))
    return cols


def pgm_bytes(values: np.ndarray, bit_depth: int = 8, gamma: float = 1.0) -> bytes:
    if bit_depth not in (8, 16):
        raise DomainError(f"bit depth must be 8 or 16, got {bit_depth}")
    v = np.asarray(values, dtype=float)
    if v.ndim != 2:
        raise DomainError("PGM data must be two-dimensional")
    maxval = 255 if bit_depth == 8 else 65535
    top = v.max() if v.size else 0.0
    scaled = np.zeros_like(v) if top <= 0 else np.clip(v / top, 0.0, 1.0)
    if gamma != 1.0:
        scaled = scaled**gamma
    pix = np.rint(scaled * maxval)
    data = pix.astype(">u2" if bit_depth == 16 else "u1").tobytes()
    height, width = v.shape
    return f"P5\n{width} {height}\n{maxval}\n".encode("ascii") + data


def write_pgm(imap, path, bit_depth: int = 8, gamma: float = 1.0) -> None:
    """Binary PGM: one image row per grid y, width = nz, linear scaling from [0, max]."""
    with open(path, "wb") as fh:
        fh.write(pgm_bytes(imap.values, bit_depth, gamma))


def read_pgm(path) -> tuple[np.ndarray, int]:
    """(pixels as a height x width integer array, maxval)."""
    raw = Path(path).read_bytes()
    fields = []
    pos = 0
    while len(fields) < 4:
        while raw[pos : pos + 1].isspace():
            pos += 1
        start = pos
        while not raw[pos : pos + 1].isspace():
            pos += 1
        fields.append(raw[start:pos])
    pos += 1
    if fields[0] != b"P5":
        raise DomainError("not a binary PGM file")
    width, height, maxval = (int(f) for f in fields[1:])
    dtype = ">u2" if maxval > 255 else "u1"
    pix = np.frombuffer(raw, dtype=dtype, count=width * height, offset=pos)
    return pix.reshape(height, width).astype(int), maxval
