"""Finite differences on uniform grids with mask-aware stencils.

Central differences everywhere both neighbors exist (inside the grid and
inside the mask); one-sided differences where only one neighbor exists;
zero where a cell has no neighbor along an axis.
"""

from __future__ import annotations

import numpy as np

from .grids import GridGeometry


def _shift(values: np.ndarray, axis: int, step: int, fill) -> np.ndarray:
    """values shifted so out[i] = values[i + step] along axis, padded with fill."""
    out = np.full_like(values, fill)
    src = [slice(None)] * values.ndim
    dst = [slice(None)] * values.ndim
    if step == 1:
        src[axis] = slice(1, None)
        dst[axis] = slice(None, -1)
    elif step == -1:
        src[axis] = slice(None, -1)
        dst[axis] = slice(1, None)
    else:
        raise ValueError("step must be +1 or -1")
    out[tuple(dst)] = values[tuple(src)]
    return out


def gradient(values: np.ndarray, geometry: GridGeometry,
             mask: np.ndarray | None = None) -> list[np.ndarray]:
    """Per-axis first derivatives; central inside, one-sided at mask/grid edges."""
    values = np.asarray(values)
    if values.shape != geometry.extents:
        raise ValueError("value array shape does not match grid extents")
    if mask is None:
        mask = np.ones(values.shape, dtype=bool)
    else:
        mask = np.asarray(mask, dtype=bool)
        if mask.shape != values.shape:
            raise ValueError("mask shape does not match grid extents")
    grads = []
    for axis in range(geometry.rank):
        h = geometry.spacing[axis]
        vp = _shift(values, axis, +1, 0)
        vm = _shift(values, axis, -1, 0)
        has_p = _shift(mask, axis, +1, False)
        has_m = _shift(mask, axis, -1, False)
        central = (vp - vm) / (2.0 * h)
        forward = (vp - values) / h
        backward = (values - vm) / h
        g = np.where(has_p & has_m, central,
                     np.where(has_p, forward, np.where(has_m, backward, 0)))
        g = np.where(mask, g, 0)
        grads.append(g.astype(values.dtype if np.iscomplexobj(values) else float))
    return grads


def gradient_norm(grads: list[np.ndarray]) -> np.ndarray:
    """Pointwise Euclidean length of a (possibly complex) gradient stack."""
    acc = np.zeros(grads[0].shape, dtype=float)
    for g in grads:
        acc = acc + np.abs(g) ** 2
    return np.sqrt(acc)


def interior_mask(geometry: GridGeometry) -> np.ndarray:
    """Cells with both neighbors available along every axis."""
    mask = np.ones(geometry.extents, dtype=bool)
    for axis in range(geometry.rank):
        idx_lo = [slice(None)] * geometry.rank
        idx_hi = [slice(None)] * geometry.rank
        idx_lo[axis] = 0
        idx_hi[axis] = geometry.extents[axis] - 1
        mask[tuple(idx_lo)] = False
        mask[tuple(idx_hi)] = False
    return mask


def wirtinger_components(values: np.ndarray, geometry: GridGeometry,
                         mask: np.ndarray | None = None,
                         conjugate: bool = False) -> list[np.ndarray]:
    """Wirtinger derivatives per complex axis pair of a phase-space field.

    Axis pair a covers grid axes (2a, 2a+1) = (x_a, y_a); the holomorphic
    derivative is (d/dx - i d/dy)/2, the conjugate one (d/dx + i d/dy)/2.
    """
    if geometry.rank % 2 != 0:
        raise ValueError("wirtinger derivatives need a phase-space (even-rank) grid")
    grads = gradient(np.asarray(values, np.complex128), geometry, mask)
    sign = 1j if conjugate else -1j
    return [0.5 * (grads[2 * a] + sign * grads[2 * a + 1]) for a in range(geometry.rank // 2)]
