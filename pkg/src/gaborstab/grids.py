"""Uniform sampling grids, phase-space domains, and the GGR1 grid file format.

Every field in the package lives on a uniform box grid: sample ``i`` along
axis ``a`` sits at ``origin[a] + i * spacing[a]`` and carries quadrature
weight ``cell_volume = prod(spacing)``.  Values are stored row-major, and
phase-space grids interleave axes as (x_1, y_1, ..., x_d, y_d).
"""

from __future__ import annotations

import struct
from dataclasses import dataclass, field

import numpy as np

from .errors import GridFormatError

GRID_MAGIC = b"GGR1"
GRID_VERSION = 1
_DTYPE_REAL = 0
_DTYPE_COMPLEX = 1


@dataclass(frozen=True, slots=True)
class GridGeometry:
    """Axis-aligned uniform grid geometry.

    Parameters
    ----------
    extents : tuple of int
        Number of samples per axis, each at least 2.
    spacing : tuple of float
        Positive sample spacing per axis.
    origin : tuple of float
        Coordinate of sample index 0 per axis.
    """

    extents: tuple[int, ...]
    spacing: tuple[float, ...]
    origin: tuple[float, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "extents", tuple(int(n) for n in self.extents))
        object.__setattr__(self, "spacing", tuple(float(s) for s in self.spacing))
        object.__setattr__(self, "origin", tuple(float(o) for o in self.origin))
        if not (len(self.extents) == len(self.spacing) == len(self.origin)):
            raise ValueError("extents, spacing and origin must have equal length")
        if len(self.extents) == 0:
            raise ValueError("grid needs at least one axis")
        if any(n < 1 for n in self.extents):
            raise ValueError("every axis needs at least 1 sample")
        if any((not np.isfinite(s)) or s <= 0.0 for s in self.spacing):
            raise ValueError("spacings must be positive and finite")
        if any(not np.isfinite(o) for o in self.origin):
            raise ValueError("origins must be finite")

    @property
    def rank(self) -> int:
        return len(self.extents)

    @property
    def cell_volume(self) -> float:
        return float(np.prod(self.spacing))

    @property
    def num_cells(self) -> int:
        return int(np.prod(self.extents))

    def axis_coordinates(self, axis: int) -> np.ndarray:
        """Sample coordinates along one axis."""
        n = self.extents[axis]
        return self.origin[axis] + self.spacing[axis] * np.arange(n, dtype=float)

    def axis_upper(self, axis: int) -> float:
        """Coordinate of the last sample along one axis."""
        return self.origin[axis] + self.spacing[axis] * (self.extents[axis] - 1)

    def coordinate_arrays(self) -> list[np.ndarray]:
        """Per-axis coordinates shaped for broadcasting against the value array."""
        out = []
        for a in range(self.rank):
            shape = [1] * self.rank
            shape[a] = self.extents[a]
            out.append(self.axis_coordinates(a).reshape(shape))
        return out

    def index_coordinates(self, index: tuple[int, ...]) -> tuple[float, ...]:
        """Coordinates of the sample at a multi-index."""
        if len(index) != self.rank:
            raise ValueError("index rank mismatch")
        return tuple(self.origin[a] + self.spacing[a] * index[a] for a in range(self.rank))


def box_geometry(extents, lo, hi) -> GridGeometry:
    """Geometry whose first and last samples sit exactly at lo and hi per axis.

    Scalar lo or hi broadcast across all axes.
    """
    extents = tuple(int(n) for n in np.atleast_1d(extents))
    lo = tuple(float(v) for v in np.broadcast_to(np.asarray(lo, float), (len(extents),)))
    hi = tuple(float(v) for v in np.broadcast_to(np.asarray(hi, float), (len(extents),)))
    if not (len(extents) == len(lo) == len(hi)):
        raise ValueError("extents, lo and hi must have equal length")
    if any(h <= l for l, h in zip(lo, hi)):
        raise ValueError("upper box edge must exceed lower edge")
    if any(n < 2 for n in extents):
        raise ValueError("a box needs at least 2 samples per axis")
    spacing = tuple((h - l) / (n - 1) for l, h, n in zip(lo, hi, extents))
    return GridGeometry(extents=extents, spacing=spacing, origin=lo)


def _validated_values(geometry: GridGeometry, values: np.ndarray, dtype) -> np.ndarray:
    arr = np.asarray(values, dtype=dtype)
    if arr.shape != geometry.extents:
        raise ValueError(
            f"value array shape {arr.shape} does not match grid extents {geometry.extents}"
        )
    return arr


@dataclass(frozen=True, slots=True)
class SignalGrid:
    """Complex samples of a signal on R^d."""

    geometry: GridGeometry
    values: np.ndarray

    def __post_init__(self) -> None:
        object.__setattr__(self, "values", _validated_values(self.geometry, self.values, np.complex128))

    @property
    def dimension(self) -> int:
        return self.geometry.rank


@dataclass(frozen=True, slots=True)
class PhaseSpaceGrid:
    """Complex samples of a field on phase space R^{2d}, axes (x_1, y_1, ..., x_d, y_d)."""

    geometry: GridGeometry
    values: np.ndarray

    def __post_init__(self) -> None:
        if self.geometry.rank % 2 != 0:
            raise ValueError("phase-space grids need even rank")
        object.__setattr__(self, "values", _validated_values(self.geometry, self.values, np.complex128))

    @property
    def dimension(self) -> int:
        return self.geometry.rank // 2


@dataclass(frozen=True, slots=True)
class DomainPartition:
    """Cell labels over a grid: 0 marks inactive cells, 1..k index disjoint components."""

    geometry: GridGeometry
    labels: np.ndarray

    def __post_init__(self) -> None:
        arr = np.asarray(self.labels)
        if not np.issubdtype(arr.dtype, np.integer):
            raise ValueError("labels must be integers")
        if arr.shape != self.geometry.extents:
            raise ValueError("label array shape does not match grid extents")
        if arr.min() < 0:
            raise ValueError("labels must be nonnegative")
        object.__setattr__(self, "labels", arr.astype(np.int64))

    @property
    def num_components(self) -> int:
        return int(self.labels.max())

    @property
    def active(self) -> np.ndarray:
        return self.labels > 0

    def component(self, i: int) -> np.ndarray:
        if not 1 <= i <= self.num_components:
            raise ValueError("component index out of range")
        return self.labels == i

    @classmethod
    def from_masks(cls, geometry: GridGeometry, masks) -> "DomainPartition":
        """Build a partition from disjoint boolean masks; overlap is an error."""
        labels = np.zeros(geometry.extents, dtype=np.int64)
        for i, mask in enumerate(masks, start=1):
            mask = np.asarray(mask, dtype=bool)
            if mask.shape != geometry.extents:
                raise ValueError("component mask shape mismatch")
            if np.any(labels[mask] != 0):
                raise ValueError("component masks overlap")
            labels[mask] = i
        return cls(geometry=geometry, labels=labels)

    @classmethod
    def split_along_axis(cls, geometry: GridGeometry, axis: int, threshold: float,
                         base_mask: np.ndarray | None = None) -> "DomainPartition":
        """Two components: active cells with coordinate below / at-or-above a threshold."""
        coords = geometry.coordinate_arrays()[axis]
        below = np.broadcast_to(coords < threshold, geometry.extents)
        active = np.ones(geometry.extents, dtype=bool) if base_mask is None else np.asarray(base_mask, bool)
        labels = np.zeros(geometry.extents, dtype=np.int64)
        labels[active & below] = 1
        labels[active & ~below] = 2
        return cls(geometry=geometry, labels=labels)


def active_mask(mask, shape) -> np.ndarray | None:
    """Normalize an optional mask argument (bool array or DomainPartition) to a bool array."""
    if mask is None:
        return None
    if isinstance(mask, DomainPartition):
        arr = mask.active
    else:
        arr = np.asarray(mask, dtype=bool)
    if arr.shape != tuple(shape):
        raise ValueError("mask shape does not match grid extents")
    return arr


# ---------------------------------------------------------------------------
# GGR1 file format
#
# Little-endian layout:
#   magic "GGR1" (4 bytes); u32 version = 1; u8 rank; u8 dtype
#   (0 = real float64, 1 = complex128 stored as interleaved re, im);
#   per axis: u64 extent, f64 spacing, f64 origin;
#   then the float64 payload in row-major order.  No padding, no compression.
# ---------------------------------------------------------------------------

_HEAD = struct.Struct("<4sIBB")
_AXIS = struct.Struct("<Qdd")


def write_grid(path, geometry: GridGeometry, values: np.ndarray) -> None:
    """Write a real or complex grid to a GGR1 file."""
    arr = np.asarray(values)
    if arr.shape != geometry.extents:
        raise ValueError("value array shape does not match grid extents")
    if np.iscomplexobj(arr):
        dtype_code = _DTYPE_COMPLEX
        payload = np.ascontiguousarray(arr, dtype="<c16").tobytes()
    else:
        dtype_code = _DTYPE_REAL
        payload = np.ascontiguousarray(arr, dtype="<f8").tobytes()
    blob = bytearray()
    blob += _HEAD.pack(GRID_MAGIC, GRID_VERSION, geometry.rank, dtype_code)
    for a in range(geometry.rank):
        blob += _AXIS.pack(geometry.extents[a], geometry.spacing[a], geometry.origin[a])
    blob += payload
    with open(path, "wb") as fh:
        fh.write(bytes(blob))


def read_grid(path) -> tuple[GridGeometry, np.ndarray]:
    """Read a GGR1 file; returns (geometry, values) with values real or complex."""
    with open(path, "rb") as fh:
        raw = fh.read()
    if len(raw) < _HEAD.size:
        raise GridFormatError("file too short for a grid header")
    magic, version, rank, dtype_code = _HEAD.unpack_from(raw, 0)
    if magic != GRID_MAGIC:
        raise GridFormatError(f"bad magic {magic!r}")
    if version != GRID_VERSION:
        raise GridFormatError(f"unsupported version {version}")
    if dtype_code not in (_DTYPE_REAL, _DTYPE_COMPLEX):
        raise GridFormatError(f"unknown dtype code {dtype_code}")
    offset = _HEAD.size
    if len(raw) < offset + rank * _AXIS.size:
        raise GridFormatError("truncated axis table")
    extents, spacing, origin = [], [], []
    for _ in range(rank):
        n, s, o = _AXIS.unpack_from(raw, offset)
        offset += _AXIS.size
        extents.append(int(n))
        spacing.append(s)
        origin.append(o)
    try:
        geometry = GridGeometry(tuple(extents), tuple(spacing), tuple(origin))
    except ValueError as exc:
        raise GridFormatError(f"invalid geometry in header: {exc}") from exc
    count = geometry.num_cells
    itemsize = 16 if dtype_code == _DTYPE_COMPLEX else 8
    expected = count * itemsize
    if len(raw) - offset != expected:
        raise GridFormatError(
            f"payload has {len(raw) - offset} bytes, expected {expected}"
        )
    if dtype_code == _DTYPE_COMPLEX:
        values = np.frombuffer(raw, dtype="<c16", count=count, offset=offset)
        values = values.reshape(geometry.extents).astype(np.complex128)
    else:
        values = np.frombuffer(raw, dtype="<f8", count=count, offset=offset)
        values = values.reshape(geometry.extents).astype(np.float64)
    return geometry, values


def read_signal(path) -> SignalGrid:
    geometry, values = read_grid(path)
    return SignalGrid(geometry=geometry, values=np.asarray(values, np.complex128))


def read_phase_grid(path) -> PhaseSpaceGrid:
    geometry, values = read_grid(path)
    return PhaseSpaceGrid(geometry=geometry, values=np.asarray(values, np.complex128))
