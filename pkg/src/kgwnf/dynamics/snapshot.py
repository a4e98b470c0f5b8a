"""NFLD1 field snapshots.

Layout: an ASCII header of ``key: value`` lines closed by ``END``, then the
arrays as little-endian float64 in the order of the ``fields`` entry. Complex
fields are stored as ``<name>_re`` and ``<name>_im``. Example header::

    NFLD1
    version: 1
    dim: 1
    shape: 256
    box_length: 32.0
    fields: psi_re psi_im phi p_phi
    time: 0.0
    frame: T
    epsilon: 0.01
    END
"""

from __future__ import annotations

from pathlib import Path
from typing import Optional, Tuple

import numpy as np

from .grid import Grid
from .state import FieldState

__all__ = ["SnapshotError", "write_snapshot", "read_snapshot", "MAGIC", "VERSION"]

MAGIC = "NFLD1"
VERSION = 1
_DTYPE = np.dtype("<f8")


class SnapshotError(ValueError):
    """Malformed or unsupported snapshot file."""


def _columns(state: FieldState):
    if state.form == "real":
        return [("u", state.u), ("p_u", state.p_u), ("phi", state.phi), ("p_phi", state.p_phi)]
    return [("psi_re", state.psi.real), ("psi_im", state.psi.imag), ("phi", state.phi),
            ("p_phi", state.p_phi)]


def write_snapshot(path, state: FieldState, grid: Optional[Grid] = None) -> Path:
    """Write ``state`` to ``path``; ``grid`` adds the box length to the header."""
    path = Path(path)
    cols = _columns(state)
    shape = cols[0][1].shape
    eps = "none" if state.epsilon is None else repr(float(state.epsilon))
    lines = [
        MAGIC,
        f"version: {VERSION}",
        f"dim: {len(shape)}",
        "shape: " + " ".join(str(s) for s in shape),
    ]
    if grid is not None:
        lines.append(f"box_length: {grid.box_length!r}")
    lines += [
        "fields: " + " ".join(name for name, _ in cols),
        f"time: {float(state.time)!r}",
        f"frame: {state.frame}",
        f"epsilon: {eps}",
        "END",
    ]
    with open(path, "wb") as fh:
        fh.write(("\n".join(lines) + "\n").encode("ascii"))
        for _, a in cols:
            fh.write(np.ascontiguousarray(a, dtype=_DTYPE).tobytes())
    return path


def _parse_header(fh):
    first = fh.readline().decode("ascii").strip()
    if first != MAGIC:
        raise SnapshotError(f"bad magic {first!r}, expected {MAGIC}")
    meta = {}
    while True:
        raw = fh.readline()
        if not raw:
            raise SnapshotError("header not terminated by END")
        line = raw.decode("ascii").strip()
        if line == "END":
            break
        key, sep, value = line.partition(":")
        if not sep:
            raise SnapshotError(f"bad header line {line!r}")
        meta[key.strip()] = value.strip()
    for key in ("version", "dim", "shape", "fields", "time", "frame", "epsilon"):
        if key not in meta:
            raise SnapshotError(f"header lacks {key!r}")
    if int(meta["version"]) != VERSION:
        raise SnapshotError(f"unsupported version {meta['version']}")
    return meta


def read_snapshot(path) -> Tuple[FieldState, dict]:
    """Read a snapshot; returns the state and the parsed header."""
    with open(path, "rb") as fh:
        meta = _parse_header(fh)
        shape = tuple(int(s) for s in meta["shape"].split())
        if len(shape) != int(meta["dim"]):
            raise SnapshotError("dim does not match shape")
        names = meta["fields"].split()
        count = int(np.prod(shape))
        data = {}
        for name in names:
            buf = fh.read(count * 8)
            if len(buf) != count * 8:
                raise SnapshotError(f"truncated data for field {name!r}")
            data[name] = np.frombuffer(buf, dtype=_DTYPE).reshape(shape).astype(float)
        if fh.read(1):
            raise SnapshotError("trailing bytes after declared fields")
    eps = None if meta["epsilon"] == "none" else float(meta["epsilon"])
    time = float(meta["time"])
    if "u" in data:
        state = FieldState.real(data["u"], data["p_u"], data["phi"], data["p_phi"], time, eps)
    elif "psi_re" in data:
        psi = data["psi_re"] + 1j * data["psi_im"]
        state = FieldState.complex(psi, data["phi"], data["p_phi"], time, meta["frame"], eps)
    else:
        raise SnapshotError(f"unrecognised field list {names}")
    return state, meta
