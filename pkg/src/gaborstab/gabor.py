"""Gabor transform with a Gaussian window, spectrograms, and the entire lift.

The transform implemented here is
    Gf(x, y) = int_{R^d} f(t) e^{-pi|t-x|^2} e^{-2 pi i t.y} dt,
discretized as a Riemann sum over the signal grid.  For each window position
x the sum over t is a discrete Fourier transform of the windowed signal
evaluated at the requested y samples; building the Fourier factors from the
absolute coordinates t = t0 + k*dt bakes in the phase correction
e^{-2 pi i t0 . y} for grids that do not start at the origin.  That product
is the single source of phase truth for the whole package.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from . import fdiff
from .errors import AdmissibilityError
from .grids import GridGeometry, PhaseSpaceGrid, SignalGrid, active_mask

BOUNDARY_DECAY_TOL = 1e-12
ESSENTIAL_SUPPORT_TOL = 1e-9


def _boundary_max(values: np.ndarray) -> float:
    """Largest modulus on any boundary face of the array."""
    worst = 0.0
    for axis in range(values.ndim):
        idx = [slice(None)] * values.ndim
        idx[axis] = 0
        worst = max(worst, float(np.max(np.abs(values[tuple(idx)]))))
        idx[axis] = values.shape[axis] - 1
        worst = max(worst, float(np.max(np.abs(values[tuple(idx)]))))
    return worst


def gabor_transform(f: SignalGrid, phase_geometry: GridGeometry) -> PhaseSpaceGrid:
    """Sampled Gabor transform of f on a phase-space grid.

    Parameters
    ----------
    f : SignalGrid
        Signal samples; the signal should decay below 1e-12 of its peak at
        the grid boundary (a warning is emitted otherwise).
    phase_geometry : GridGeometry
        Rank 2d grid with axes ordered (x_1, y_1, ..., x_d, y_d).
    """
    d = f.dimension
    if phase_geometry.rank != 2 * d:
        raise ValueError(
            f"phase geometry rank {phase_geometry.rank} does not match 2 x signal dimension {2 * d}"
        )
    peak = float(np.max(np.abs(f.values)))
    if peak == 0.0:
        return PhaseSpaceGrid(geometry=phase_geometry,
                              values=np.zeros(phase_geometry.extents, np.complex128))
    if _boundary_max(f.values) > BOUNDARY_DECAY_TOL * peak:
        warnings.warn(
            "signal does not decay below 1e-12 of its peak at the grid boundary; "
            "the transform is truncated", stacklevel=2)

    t_axes = [f.geometry.axis_coordinates(a) for a in range(d)]
    x_axes = [phase_geometry.axis_coordinates(2 * a) for a in range(d)]
    y_axes = [phase_geometry.axis_coordinates(2 * a + 1) for a in range(d)]
    # Fourier factors from absolute coordinates: e^{-2 pi i t y} carries the
    # origin phase correction exactly.
    fourier = [np.exp(-2j * np.pi * np.outer(t_axes[a], y_axes[a])) for a in range(d)]
    windows = [np.exp(-np.pi * (t_axes[a][None, :] - x_axes[a][:, None]) ** 2) for a in range(d)]

    cellvol = f.geometry.cell_volume
    out = np.empty(phase_geometry.extents, dtype=np.complex128)
    x_extents = tuple(len(x) for x in x_axes)
    for ix in np.ndindex(*x_extents):
        w = f.values
        for a in range(d):
            shape = [1] * d
            shape[a] = len(t_axes[a])
            w = w * windows[a][ix[a]].reshape(shape)
        # Contract each signal axis in turn against its Fourier factor; the
        # contracted axis moves to the back, so axis 0 is always next.
        g = w
        for a in range(d):
            g = np.tensordot(g, fourier[a], axes=([0], [0]))
        dest = []
        for a in range(d):
            dest.append(ix[a])
            dest.append(slice(None))
        out[tuple(dest)] = g * cellvol
    return PhaseSpaceGrid(geometry=phase_geometry, values=out)


def _fft_frequency_indices(y: np.ndarray, n: int, dt: float) -> np.ndarray:
    """Map y samples onto the DFT frequency lattice k / (n dt) of a signal axis."""
    r = y * (n * dt)
    k = np.round(r)
    off = float(np.max(np.abs(r - k)))
    if off > 1e-8 * max(1.0, float(np.max(np.abs(r)))):
        raise ValueError(
            f"y samples are off the FFT frequency lattice by {off:.3e} lattice "
            f"units; they must be integer multiples of 1/(n*dt) = {1.0/(n*dt):.6g}")
    k = k.astype(np.int64)
    if np.any(np.abs(k) > n // 2):
        raise ValueError("y sample beyond the Nyquist frequency of the signal grid")
    return k % n


def gabor_transform_fft(f: SignalGrid, phase_geometry: GridGeometry) -> PhaseSpaceGrid:
    """The same Riemann sum as gabor_transform, evaluated with batched FFTs.

    For each window position x the t-sum is a discrete Fourier transform;
    when every y sample sits on the frequency lattice k/(n dt) of the
    signal grid, one FFT per window position evaluates them all.  The
    origin phase e^{-2 pi i t0 . y} is applied afterwards, from the same
    absolute-coordinate convention as the direct path.  Off-lattice y grids
    are an error, not an approximation: use gabor_transform for those.
    """
    d = f.dimension
    if phase_geometry.rank != 2 * d:
        raise ValueError(
            f"phase geometry rank {phase_geometry.rank} does not match 2 x signal dimension {2 * d}"
        )
    peak = float(np.max(np.abs(f.values)))
    if peak == 0.0:
        return PhaseSpaceGrid(geometry=phase_geometry,
                              values=np.zeros(phase_geometry.extents, np.complex128))
    if _boundary_max(f.values) > BOUNDARY_DECAY_TOL * peak:
        warnings.warn(
            "signal does not decay below 1e-12 of its peak at the grid boundary; "
            "the transform is truncated", stacklevel=2)

    t_axes = [f.geometry.axis_coordinates(a) for a in range(d)]
    x_axes = [phase_geometry.axis_coordinates(2 * a) for a in range(d)]
    y_axes = [phase_geometry.axis_coordinates(2 * a + 1) for a in range(d)]
    n_axes = [len(t) for t in t_axes]
    dts = [f.geometry.spacing[a] for a in range(d)]
    k_axes = [_fft_frequency_indices(y_axes[a], n_axes[a], dts[a]) for a in range(d)]
    origin_phase = [np.exp(-2j * np.pi * f.geometry.origin[a] * y_axes[a]) for a in range(d)]
    windows = [np.exp(-np.pi * (t_axes[a][None, :] - x_axes[a][:, None]) ** 2) for a in range(d)]

    cellvol = f.geometry.cell_volume
    out = np.empty(phase_geometry.extents, dtype=np.complex128)
    x_extents = tuple(len(x) for x in x_axes)
    pick = np.ix_(*k_axes)
    for ix in np.ndindex(*x_extents):
        w = f.values.astype(np.complex128)
        for a in range(d):
            shape = [1] * d
            shape[a] = n_axes[a]
            w = w * windows[a][ix[a]].reshape(shape)
        g = np.fft.fftn(w)[pick]
        for a in range(d):
            shape = [1] * d
            shape[a] = len(y_axes[a])
            g = g * origin_phase[a].reshape(shape)
        dest = []
        for a in range(d):
            dest.append(ix[a])
            dest.append(slice(None))
        out[tuple(dest)] = g * cellvol
    return PhaseSpaceGrid(geometry=phase_geometry, values=out)


@dataclass(frozen=True, slots=True)
class Spectrogram:
    """Modulus of a Gabor transform plus the location of its largest sample."""

    geometry: GridGeometry
    values: np.ndarray
    argmax_index: tuple[int, ...]
    argmax_location: tuple[float, ...]

    def __post_init__(self) -> None:
        arr = np.asarray(self.values, dtype=float)
        if arr.shape != self.geometry.extents:
            raise ValueError("value array shape does not match grid extents")
        object.__setattr__(self, "values", arr)
        if arr[self.argmax_index] != arr.max():
            raise ValueError("argmax index does not attain the maximum")


def spectrogram(F: PhaseSpaceGrid) -> Spectrogram:
    """Spectrogram |F| with argmax taken at the smallest row-major index on ties."""
    mod = np.abs(F.values)
    flat = int(np.argmax(mod))
    idx = tuple(int(i) for i in np.unravel_index(flat, mod.shape))
    loc = F.geometry.index_coordinates(idx)
    return Spectrogram(geometry=F.geometry, values=mod, argmax_index=idx, argmax_location=loc)


def modulation_norm(F: PhaseSpaceGrid, p: float, mask=None) -> float:
    """Discrete L^p norm of a phase-space field with cell-volume weights."""
    if not np.isfinite(p) or p < 1:
        raise AdmissibilityError("modulation norm needs p >= 1")
    mod = np.abs(F.values)
    sel = active_mask(mask, F.geometry.extents)
    peak = float(mod.max())
    if peak > 0.0 and _boundary_max(F.values) > ESSENTIAL_SUPPORT_TOL * peak:
        warnings.warn(
            "field exceeds 1e-9 of its peak at the phase-space boundary; "
            "the norm misses essential support", stacklevel=2)
    if sel is not None:
        mod = np.where(sel, mod, 0.0)
    return float(np.sum(mod ** p) * F.geometry.cell_volume) ** (1.0 / p)


@dataclass(frozen=True, slots=True)
class EntireLift:
    """A Gabor transform together with its entire lift G(z) = Gf(conj z) eta(z).

    eta(z) = e^{pi |z|^2 / 2 - pi i x.y} for z = x + iy; the lifted field
    satisfies |G(z)| = |Gf(x, -y)| e^{pi |z|^2 / 2} sample by sample.
    """

    base: PhaseSpaceGrid
    lifted: PhaseSpaceGrid

    @property
    def geometry(self) -> GridGeometry:
        return self.lifted.geometry

    @property
    def dimension(self) -> int:
        return self.lifted.dimension

    def identity_max_rel_error(self) -> float:
        """Max relative deviation of |lifted| from |base at conjugate| e^{pi|z|^2/2}."""
        geom = self.geometry
        d = self.dimension
        conj_vals = self.base.values
        for a in range(d):
            conj_vals = np.flip(conj_vals, axis=2 * a + 1)
        coords = geom.coordinate_arrays()
        r2 = np.zeros(geom.extents)
        for a in range(geom.rank):
            r2 = r2 + coords[a] ** 2
        expected = np.abs(conj_vals) * np.exp(np.pi * r2 / 2.0)
        got = np.abs(self.lifted.values)
        denom = np.maximum(expected, np.max(expected) * 1e-300 + np.finfo(float).tiny)
        rel = np.abs(got - expected) / denom
        rel = np.where(expected == 0.0, np.abs(got), rel)
        return float(np.max(rel))


def _check_y_symmetric(geometry: GridGeometry) -> None:
    d = geometry.rank // 2
    for a in range(d):
        axis = 2 * a + 1
        lo = geometry.origin[axis]
        hi = geometry.axis_upper(axis)
        if abs(lo + hi) > 1e-9 * geometry.spacing[axis]:
            raise ValueError(
                f"phase grid y-axis {a} is not symmetric about 0 "
                f"(covers [{lo}, {hi}]); the entire lift needs y -> -y on-grid")


def entire_lift(F: PhaseSpaceGrid) -> EntireLift:
    """Entire lift of a Gabor transform sampled on a y-symmetric phase grid.

    Reflecting y -> -y is an exact index flip on a symmetric grid, so no
    interpolation enters; the result is multiplied by eta(z).
    """
    geom = F.geometry
    _check_y_symmetric(geom)
    d = F.dimension
    vals = F.values
    for a in range(d):
        vals = np.flip(vals, axis=2 * a + 1)
    coords = geom.coordinate_arrays()
    r2 = np.zeros(geom.extents)
    xy = np.zeros(geom.extents)
    for a in range(d):
        x = coords[2 * a]
        y = coords[2 * a + 1]
        r2 = r2 + x ** 2 + y ** 2
        xy = xy + x * y
    eta = np.exp(np.pi * r2 / 2.0) * np.exp(-1j * np.pi * xy)
    lifted = PhaseSpaceGrid(geometry=geom, values=vals * eta)
    return EntireLift(base=F, lifted=lifted)


@dataclass(frozen=True, slots=True)
class GradientIdentityReport:
    """Pointwise comparison of ||grad|G|||, 2^{-1/2}||grad G|| and |G'|."""

    max_rel_error: float
    samples_checked: int
    norm_grad_modulus: np.ndarray
    norm_grad_field: np.ndarray
    wirtinger_modulus: np.ndarray
    mask: np.ndarray


def gradient_identity_report(lift: EntireLift, rel_threshold: float = 1e-6) -> GradientIdentityReport:
    """Check the holomorphic gradient identity on the lifted field.

    Central finite differences only, so the comparison runs on interior
    samples where |G| exceeds rel_threshold times its maximum.
    """
    geom = lift.geometry
    G = lift.lifted.values
    mod = np.abs(G)
    mask = fdiff.interior_mask(geom) & (mod > rel_threshold * mod.max())
    grads_G = fdiff.gradient(G, geom)
    grads_M = fdiff.gradient(mod, geom)
    norm_gG = fdiff.gradient_norm(grads_G)
    norm_gM = fdiff.gradient_norm(grads_M)
    wirt = fdiff.wirtinger_components(G, geom)
    wmod = fdiff.gradient_norm(wirt)
    a = norm_gM
    b = norm_gG / np.sqrt(2.0)
    c = wmod
    scale = np.maximum(np.maximum(a, b), c)
    scale = np.where(scale == 0.0, 1.0, scale)
    spread = np.maximum(np.abs(a - b), np.maximum(np.abs(a - c), np.abs(b - c)))
    rel = np.where(mask, spread / scale, 0.0)
    return GradientIdentityReport(
        max_rel_error=float(np.max(rel)) if mask.any() else 0.0,
        samples_checked=int(mask.sum()),
        norm_grad_modulus=a, norm_grad_field=b, wirtinger_modulus=c, mask=mask)


def wirtinger_residual(lift: EntireLift, rel_threshold: float = 1e-6) -> float:
    """Max of |d/d(conj z) G| / |G| over interior samples with |G| above threshold.

    Small values certify that the lifted field is holomorphic to finite
    difference accuracy.
    """
    geom = lift.geometry
    G = lift.lifted.values
    mod = np.abs(G)
    mask = fdiff.interior_mask(geom) & (mod > rel_threshold * mod.max())
    anti = fdiff.wirtinger_components(G, geom, conjugate=True)
    res = fdiff.gradient_norm(anti)
    ratio = np.where(mask, res / np.where(mod == 0.0, 1.0, mod), 0.0)
    return float(np.max(ratio)) if mask.any() else 0.0
