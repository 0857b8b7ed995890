"""Cheeger constants of weighted phase-space domains.

A nonnegative weight w on an active region Omega is turned into a
face-adjacency graph whose vertices carry mass w_i * (cell volume) and whose
edges carry the face-averaged weight times the face measure.  The Cheeger
constant h(w, Omega) = inf_C cut(C) / min(mass(C), mass(Omega \\ C)) is
bounded from above by sweep cuts of the Fiedler vector of the
mass-normalized graph Laplacian, and computed exactly by subset enumeration
on tiny grids.  Weights that split into several massive components have
h = 0 by construction; that case is detected and reported directly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import scipy.linalg
import scipy.sparse
import scipy.sparse.csgraph

from .errors import ConvergenceError
from .gabor import Spectrogram
from .grids import GridGeometry, active_mask

ACTIVE_THRESHOLD = 1e-9
MASSIVE_COMPONENT_FRACTION = 1e-9
ORACLE_CELL_LIMIT = 20
LANCZOS_TOL = 1e-8
LANCZOS_ITER_CAP = 500
# Prefix cuts whose light side is below this fraction of the total mass are
# excluded from the sweep argmin: their masses and cut weights drown in
# float64 accumulation noise, and a genuinely near-zero Cheeger ratio can
# only come from disconnection, which is detected exactly via components.
SWEEP_MIN_MASS_FRACTION = 1e-10


@dataclass(frozen=True, slots=True)
class WeightGrid:
    """Nonnegative weight w on the active region Omega of a phase-space grid."""

    geometry: GridGeometry
    values: np.ndarray
    mask: np.ndarray | None = None

    def __post_init__(self) -> None:
        vals = np.asarray(self.values, dtype=float)
        if vals.shape != self.geometry.extents:
            raise ValueError("weight shape does not match grid extents")
        if not np.all(np.isfinite(vals)) or np.any(vals < 0):
            raise ValueError("weights must be finite and nonnegative")
        mask = active_mask(self.mask, self.geometry.extents)
        if mask is None:
            mask = np.ones(self.geometry.extents, dtype=bool)
        n_active = int(mask.sum())
        if n_active < 2:
            raise ValueError("need at least 2 active cells")
        if float(vals[mask].sum()) <= 0.0:
            raise ValueError("total active mass must be positive")
        object.__setattr__(self, "values", vals)
        object.__setattr__(self, "mask", mask)

    @property
    def active_count(self) -> int:
        return int(self.mask.sum())

    @property
    def total_mass(self) -> float:
        return float(self.values[self.mask].sum() * self.geometry.cell_volume)

    def scaled(self, c: float) -> "WeightGrid":
        return WeightGrid(geometry=self.geometry, values=self.values * float(c),
                          mask=self.mask)

    def coarsen(self, factor: int) -> "WeightGrid":
        """Block-mean downsample by an integer factor per axis.

        Trailing cells that do not fill a block are trimmed.  A coarse cell
        is active when any fine cell in its block is active; coarse centers
        sit at block centers, so the origin shifts by (factor-1)*spacing/2.
        """
        k = int(factor)
        if k < 1:
            raise ValueError("coarsening factor must be >= 1")
        if k == 1:
            return self
        geom = self.geometry
        new_extents = tuple(n // k for n in geom.extents)
        if any(n < 1 for n in new_extents):
            raise ValueError(f"grid too small to coarsen by {k}")
        sl = tuple(slice(0, n * k) for n in new_extents)
        block_shape = []
        for n in new_extents:
            block_shape.extend((n, k))
        vals = self.values[sl].reshape(block_shape)
        mask = self.mask[sl].reshape(block_shape)
        block_axes = tuple(range(1, 2 * geom.rank, 2))
        new_vals = vals.mean(axis=block_axes)
        new_mask = mask.any(axis=block_axes)
        new_geom = GridGeometry(
            extents=new_extents,
            spacing=tuple(s * k for s in geom.spacing),
            origin=tuple(o + (k - 1) * s / 2.0 for o, s in zip(geom.origin, geom.spacing)),
        )
        return WeightGrid(geometry=new_geom, values=new_vals, mask=new_mask)


def weight_from_spectrogram(S: Spectrogram, power: float = 1.0,
                            threshold: float = ACTIVE_THRESHOLD) -> WeightGrid:
    """WeightGrid with w = |Gf|^power, active where |Gf| >= threshold * max."""
    if power <= 0:
        raise ValueError("power must be positive")
    peak = float(S.values.max())
    if peak <= 0:
        raise ValueError("spectrogram is identically zero")
    mask = S.values >= threshold * peak
    return WeightGrid(geometry=S.geometry, values=S.values ** power, mask=mask)


@dataclass(frozen=True, slots=True)
class WeightGraph:
    """Face-adjacency graph: vertex masses plus weighted undirected edges.

    Vertices are the active cells in row-major order; edge endpoints satisfy
    tail < head and appear at most once.
    """

    masses: np.ndarray
    edge_tail: np.ndarray
    edge_head: np.ndarray
    edge_weight: np.ndarray

    def __post_init__(self) -> None:
        m = np.asarray(self.masses, dtype=float)
        t = np.asarray(self.edge_tail, dtype=np.int64)
        h = np.asarray(self.edge_head, dtype=np.int64)
        w = np.asarray(self.edge_weight, dtype=float)
        if m.ndim != 1 or m.size < 2:
            raise ValueError("graph needs at least 2 vertices")
        if not (t.shape == h.shape == w.shape) or t.ndim != 1:
            raise ValueError("edge arrays must be 1-d and of equal length")
        if not np.all(np.isfinite(m)) or np.any(m < 0):
            raise ValueError("vertex masses must be finite and nonnegative")
        if not np.all(np.isfinite(w)) or np.any(w < 0):
            raise ValueError("edge weights must be finite and nonnegative")
        if t.size and (np.any(t < 0) or np.any(h >= m.size) or np.any(t >= h)):
            raise ValueError("edges must satisfy 0 <= tail < head < n")
        object.__setattr__(self, "masses", m)
        object.__setattr__(self, "edge_tail", t)
        object.__setattr__(self, "edge_head", h)
        object.__setattr__(self, "edge_weight", w)

    @property
    def num_vertices(self) -> int:
        return int(self.masses.size)

    @property
    def total_mass(self) -> float:
        return float(self.masses.sum())

    def degrees(self) -> np.ndarray:
        n = self.num_vertices
        return (np.bincount(self.edge_tail, weights=self.edge_weight, minlength=n)
                + np.bincount(self.edge_head, weights=self.edge_weight, minlength=n))

    def laplacian_matvec(self, v: np.ndarray, degrees: np.ndarray) -> np.ndarray:
        n = self.num_vertices
        out = degrees * v
        out -= np.bincount(self.edge_tail, weights=self.edge_weight * v[self.edge_head],
                           minlength=n)
        out -= np.bincount(self.edge_head, weights=self.edge_weight * v[self.edge_tail],
                           minlength=n)
        return out

    def component_labels(self) -> tuple[int, np.ndarray]:
        # Zero-weight edges carry no boundary cost, so they must not merge
        # components: a zero-weight corridor disconnects the weight.
        pos = self.edge_weight > 0
        n = self.num_vertices
        adj = scipy.sparse.coo_matrix(
            (self.edge_weight[pos], (self.edge_tail[pos], self.edge_head[pos])),
            shape=(n, n))
        ncomp, labels = scipy.sparse.csgraph.connected_components(
            adj.tocsr(), directed=False)
        return int(ncomp), labels

    def subgraph(self, keep: np.ndarray) -> tuple["WeightGraph", np.ndarray]:
        """Induced subgraph on the kept vertices plus the old-index map."""
        keep = np.asarray(keep, dtype=bool)
        old = np.flatnonzero(keep)
        renum = -np.ones(self.num_vertices, dtype=np.int64)
        renum[old] = np.arange(old.size)
        esel = keep[self.edge_tail] & keep[self.edge_head]
        return WeightGraph(masses=self.masses[old],
                           edge_tail=renum[self.edge_tail[esel]],
                           edge_head=renum[self.edge_head[esel]],
                           edge_weight=self.edge_weight[esel]), old


def build_weight_graph(w: WeightGrid) -> WeightGraph:
    """Vertices = active cells (mass w_i * cell volume); edges = active face pairs.

    An edge crossing axis a carries weight ((w_i + w_j)/2) * (cell volume) /
    spacing[a], the face-midpoint weight times the face measure.
    """
    geom = w.geometry
    vol = geom.cell_volume
    ids = -np.ones(geom.extents, dtype=np.int64)
    ids[w.mask] = np.arange(w.active_count)
    tails, heads, weights = [], [], []
    for a in range(geom.rank):
        lo = tuple(slice(0, -1) if ax == a else slice(None) for ax in range(geom.rank))
        hi = tuple(slice(1, None) if ax == a else slice(None) for ax in range(geom.rank))
        both = w.mask[lo] & w.mask[hi]
        i = ids[lo][both]
        j = ids[hi][both]
        face = vol / geom.spacing[a]
        ew = 0.5 * (w.values[lo][both] + w.values[hi][both]) * face
        # Faces between two zero-weight cells carry no boundary cost and
        # must not merge components, so they are not edges at all.
        pos = ew > 0
        tails.append(np.minimum(i, j)[pos])
        heads.append(np.maximum(i, j)[pos])
        weights.append(ew[pos])
    return WeightGraph(
        masses=w.values[w.mask] * vol,
        edge_tail=np.concatenate(tails) if tails else np.zeros(0, np.int64),
        edge_head=np.concatenate(heads) if heads else np.zeros(0, np.int64),
        edge_weight=np.concatenate(weights) if weights else np.zeros(0, float),
    )


# ---------------------------------------------------------------------------
# Fiedler vector by deflated Lanczos
# ---------------------------------------------------------------------------


@dataclass(frozen=True, slots=True)
class FiedlerResult:
    """Second generalized eigenpair of (L, M) plus convergence diagnostics."""

    value: float
    vector: np.ndarray
    iterations: int
    residual: float


def _lanczos_seed(n: int, scale: np.ndarray) -> np.ndarray:
    # Centered index ramp: deterministic, smooth along the row-major vertex
    # order, so it overlaps the low Laplacian modes and breaks eigenvalue
    # ties between symmetry-related directions toward the leading axis.
    ramp = np.arange(n, dtype=float) - (n - 1) / 2.0
    return scale * ramp


def fiedler_vector(graph: WeightGraph, tol: float = LANCZOS_TOL,
                   max_iter: int | None = None) -> FiedlerResult:
    """Eigenvector for the second-smallest eigenvalue of the weighted Laplacian.

    Solves L u = lambda M u (M = diag vertex masses) through the symmetric
    form S = M^{-1/2} L M^{-1/2} with Lanczos iteration on sigma*I - S:
    the constant generalized eigenvector M^{1/2} 1 is deflated, every Krylov
    vector is reorthogonalized against all previous ones, and Ritz pairs come
    from the tridiagonal eigensolve.  Deterministic: the seed is a fixed
    centered index ramp.
    """
    n = graph.num_vertices
    ncomp, _ = graph.component_labels()
    if ncomp > 1:
        raise ValueError(
            f"graph has {ncomp} connected components; "
            "compute Fiedler vectors per component")
    masses = graph.masses.copy()
    positive = masses[masses > 0]
    if positive.size == 0:
        raise ValueError("graph has zero total mass")
    # Zero-mass vertices would make M singular.  Floor them far below the
    # smallest positive mass; flooring any higher would distort the true
    # spectrum by parking spurious low modes on near-zero-mass cells.
    masses[masses == 0.0] = 1e-12 * float(positive.min())
    inv_sqrt_m = 1.0 / np.sqrt(masses)
    degrees = graph.degrees()

    def apply_s(v: np.ndarray) -> np.ndarray:
        return inv_sqrt_m * graph.laplacian_matvec(inv_sqrt_m * v, degrees)

    # Gershgorin upper bound for S: diag + absolute off-diagonal row sums.
    offdiag = graph.edge_weight * inv_sqrt_m[graph.edge_tail] * inv_sqrt_m[graph.edge_head]
    row_off = (np.bincount(graph.edge_tail, weights=offdiag, minlength=n)
               + np.bincount(graph.edge_head, weights=offdiag, minlength=n))
    sigma = float(np.max(degrees * inv_sqrt_m ** 2 + row_off))
    if sigma <= 0:
        raise ValueError("graph has no edges of positive weight")

    def apply_b(v: np.ndarray) -> np.ndarray:
        return sigma * v - apply_s(v)

    q0 = np.sqrt(masses)
    q0 /= np.linalg.norm(q0)
    seed = _lanczos_seed(n, np.sqrt(masses))
    seed -= q0 * (q0 @ seed)
    seed_norm = np.linalg.norm(seed)
    if seed_norm <= 1e-14 * np.linalg.norm(np.sqrt(masses)):
        raise ValueError("seed vector degenerates after deflation")
    cap = min(n - 1, LANCZOS_ITER_CAP) if max_iter is None else int(max_iter)
    basis = np.empty((cap + 1, n))
    basis[0] = seed / seed_norm
    alphas: list[float] = []
    betas: list[float] = []
    theta = 0.0
    ritz = np.zeros(1)
    residual = math.inf
    k = 0
    while True:
        v = basis[k]
        w = apply_b(v)
        alpha = float(v @ w)
        alphas.append(alpha)
        w -= alpha * v
        if k > 0:
            w -= betas[-1] * basis[k - 1]
        # Full reorthogonalization against the deflated constant and the
        # whole Krylov basis, twice for numerical safety.
        for _ in range(2):
            w -= q0 * (q0 @ w)
            coeffs = basis[: k + 1] @ w
            w -= basis[: k + 1].T @ coeffs
        beta = float(np.linalg.norm(w))
        evals, evecs = scipy.linalg.eigh_tridiagonal(
            np.asarray(alphas), np.asarray(betas))
        top = int(np.argmax(evals))
        theta = float(evals[top])
        ritz = evecs[:, top]
        residual = beta * abs(float(ritz[-1]))
        k += 1
        if residual <= tol * sigma or beta <= 1e-14 * sigma:
            break
        if k >= cap:
            raise ConvergenceError(
                f"Fiedler iteration did not converge in {k} steps: "
                f"residual {residual:.3e} exceeds {tol * sigma:.3e}")
        betas.append(beta)
        basis[k] = w / beta
    y = basis[:k].T @ ritz
    u = inv_sqrt_m * y
    u /= np.linalg.norm(u)
    if u[int(np.argmax(np.abs(u)))] < 0:
        u = -u
    return FiedlerResult(value=float(sigma - theta), vector=u,
                         iterations=k, residual=float(residual))


# ---------------------------------------------------------------------------
# Cuts, sweeps, oracle
# ---------------------------------------------------------------------------


@dataclass(frozen=True, slots=True)
class CutResult:
    """One two-sided cut of the active cells.

    side_assignment marks the cells of C among the active cells (row-major
    order); ratio is cut_weight / min(masses), infinite when a side carries
    no mass.
    """

    side_assignment: np.ndarray
    cut_weight: float
    mass_left: float
    mass_right: float

    @property
    def ratio(self) -> float:
        m = min(self.mass_left, self.mass_right)
        if m <= 0.0:
            return math.inf
        return self.cut_weight / m

    def complemented(self) -> "CutResult":
        return CutResult(side_assignment=~self.side_assignment,
                         cut_weight=self.cut_weight,
                         mass_left=self.mass_right, mass_right=self.mass_left)


def evaluate_cut(graph: WeightGraph, left: np.ndarray) -> CutResult:
    """Cut weight and side masses for an explicit side assignment."""
    left = np.asarray(left, dtype=bool)
    if left.shape != (graph.num_vertices,):
        raise ValueError("side assignment length must equal the vertex count")
    crossing = left[graph.edge_tail] != left[graph.edge_head]
    cut = float(graph.edge_weight[crossing].sum())
    # Independent sums per side: total - mass_left would lose the light side
    # to cancellation when the masses span many orders of magnitude.
    mass_left = float(graph.masses[left].sum())
    mass_right = float(graph.masses[~left].sum())
    return CutResult(side_assignment=left, cut_weight=cut, mass_left=mass_left,
                     mass_right=mass_right)


@dataclass(frozen=True, slots=True)
class CheegerEstimate:
    """Sweep-cut upper bound for h(w, Omega) with diagnostics.

    h_oracle is the exhaustive minimum when the active cell count permits
    enumeration; fiedler_value is the second eigenvalue of the weighted
    Laplacian (0 for disconnected weights); disconnected flags the case of
    several massive components, where h = 0 exactly.
    """

    h_upper: float
    fiedler_value: float
    best_cut: CutResult
    h_oracle: float | None = None
    disconnected: bool = False
    component_masses: tuple[float, ...] = ()

    @property
    def h(self) -> float:
        return self.h_upper if self.h_oracle is None else self.h_oracle


def sweep_cut_cheeger(w: WeightGrid) -> CheegerEstimate:
    """Upper-bound h(w, Omega) by sweep cuts of the Fiedler vector.

    Active cells are sorted by Fiedler value and all n-1 prefix cuts are
    evaluated; the best ratio is h_upper.  Several connected components that
    each carry more than 1e-9 of the total mass mean h = 0 exactly (the
    disconnected instability); components below that fraction are dropped
    from the sweep but kept in the complement masses.  Grids with at most
    20 active cells also get the exhaustive h_oracle.
    """
    graph = build_weight_graph(w)
    n = graph.num_vertices
    total = graph.total_mass
    ncomp, labels = graph.component_labels()
    comp_masses = np.bincount(labels, weights=graph.masses, minlength=ncomp)
    oracle = None
    if w.active_count <= ORACLE_CELL_LIMIT:
        oracle = exhaustive_cheeger_oracle(w)
    massive = np.flatnonzero(comp_masses > MASSIVE_COMPONENT_FRACTION * total)
    if massive.size >= 2:
        heaviest = int(massive[np.argmax(comp_masses[massive])])
        cut = evaluate_cut(graph, labels == heaviest)
        return CheegerEstimate(h_upper=0.0, fiedler_value=0.0, best_cut=cut,
                               h_oracle=oracle, disconnected=True,
                               component_masses=tuple(float(m) for m in comp_masses))
    keep_comp = int(massive[0]) if massive.size else int(np.argmax(comp_masses))
    keep = labels == keep_comp
    if int(keep.sum()) < 2:
        raise ValueError("the dominant component is a single cell; no nontrivial cuts")
    if keep.all():
        sub, old = graph, np.arange(n)
        satellite_mass = 0.0
    else:
        sub, old = graph.subgraph(keep)
        satellite_mass = float(graph.masses[~keep].sum())
    fied = fiedler_vector(sub)
    order = np.argsort(fied.vector, kind="stable")
    size, _, _ = _sweep_prefix_cuts_full(sub, satellite_mass, order)
    left = np.zeros(n, dtype=bool)
    left[old[order[:size]]] = True
    cut = evaluate_cut(graph, left)
    return CheegerEstimate(h_upper=cut.ratio, fiedler_value=fied.value,
                           best_cut=cut, h_oracle=oracle,
                           component_masses=tuple(float(m) for m in comp_masses))


def _sweep_prefix_cuts_full(sub: WeightGraph, satellite_mass: float,
                            order: np.ndarray) -> tuple[int, float, np.ndarray]:
    """Prefix cuts of the component sweep, evaluated against the full grid.

    Dropped satellite components sit on the complement side of every prefix,
    so cut weights live inside the swept component while the complement mass
    includes satellite_mass.  Suffix masses are accumulated independently of
    the prefix masses so neither side suffers cancellation.
    """
    m = sub.num_vertices
    cutw_local = np.maximum(_prefix_cut_weights(sub, order), 0.0)
    ordered = sub.masses[order]
    prefix_mass = np.cumsum(ordered)[: m - 1]
    suffix_mass = np.cumsum(ordered[::-1])[::-1][1:] + satellite_mass
    min_mass = np.minimum(prefix_mass, suffix_mass)
    total = sub.total_mass + satellite_mass
    with np.errstate(divide="ignore", invalid="ignore"):
        ratios = np.where(min_mass > 0,
                          cutw_local / np.where(min_mass > 0, min_mass, 1.0),
                          math.inf)
    resolvable = min_mass >= SWEEP_MIN_MASS_FRACTION * total
    if not resolvable.any():
        resolvable = min_mass > 0
    if not resolvable.any():
        raise ValueError("every prefix cut has a massless side")
    masked = np.where(resolvable, ratios, math.inf)
    best = int(np.argmin(masked))
    return best + 1, float(masked[best]), ratios


def _prefix_cut_weights(graph: WeightGraph, order: np.ndarray) -> np.ndarray:
    """Cut weights of all n-1 prefix cuts in one difference-array pass.

    An edge crosses exactly the prefixes whose size lies in
    [min(pos)+1, max(pos)] for the positions of its endpoints in the order.
    """
    n = graph.num_vertices
    pos = np.empty(n, dtype=np.int64)
    pos[order] = np.arange(n)
    pt = pos[graph.edge_tail]
    ph = pos[graph.edge_head]
    lo = np.minimum(pt, ph)
    hi = np.maximum(pt, ph)
    diff = (np.bincount(lo + 1, weights=graph.edge_weight, minlength=n + 1)
            - np.bincount(hi + 1, weights=graph.edge_weight, minlength=n + 1))
    return np.cumsum(diff)[1:n]


def exhaustive_cheeger_oracle(w: WeightGrid) -> float:
    """Exact discrete Cheeger constant by enumerating all 2^n - 2 subsets."""
    n = w.active_count
    if n > ORACLE_CELL_LIMIT:
        raise ValueError(f"{n} active cells exceed the oracle limit {ORACLE_CELL_LIMIT}")
    graph = build_weight_graph(w)
    full = 2 ** n - 1
    subsets = np.arange(full + 1, dtype=np.int64)
    side_mass = np.zeros(subsets.size)
    for i in range(n):
        side_mass += graph.masses[i] * ((subsets >> i) & 1)
    cutw = np.zeros(subsets.size)
    for t, h, ew in zip(graph.edge_tail, graph.edge_head, graph.edge_weight):
        cutw += ew * (((subsets >> int(t)) ^ (subsets >> int(h))) & 1)
    # Complement masses by table lookup, not total-minus-side: subtraction
    # would lose light complements to cancellation.
    min_mass = np.minimum(side_mass, side_mass[full - subsets])
    with np.errstate(divide="ignore", invalid="ignore"):
        ratios = np.where(min_mass > 0, cutw / np.where(min_mass > 0, min_mass, 1.0),
                          math.inf)
    return float(ratios[1:full].min())


def poincare_bound(estimate: CheegerEstimate) -> float:
    """Poincare constant bound 8 / h; infinite when h = 0 (disconnected)."""
    h = estimate.h
    if h <= 0.0:
        return math.inf
    return 8.0 / h
