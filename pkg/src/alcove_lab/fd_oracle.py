"""Independent floating-point checks: finite-difference Dirichlet eigensolver
on planar polygons, pointwise PDE residuals, and nodal-set sampling.

The eigensolver uses a Shortley-Weller 5-point stencil: nodes next to the
boundary get shortened arms reaching the true polygon edge.  For polygons
whose edges pass exactly through grid nodes (squares, the B2 alcove) every
arm equals h, the matrix is the plain symmetric masked Laplacian, and the
symmetric solver path is used; otherwise the matrix is mildly nonsymmetric
and the general shift-invert path runs.  Either path converges at second
order in h for the eigenvalues, which is itself a tested property.
"""
from __future__ import annotations

import hashlib
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla
from scipy.linalg import eigh_tridiagonal

from .exact_geometry import (
    GeometryError,
    Polytope,
    Q,
    Vector,
    dot,
    norm_sq,
)
from .spectra import TrigSum, support_frame

_MIN_INTERIOR = 100
_MAX_COUNT = 20
_ARM_FLOOR = 1e-8


class FDOracleError(ValueError):
    pass


@dataclass(frozen=True)
class Grid:
    """Masked uniform grid over a polygon's bounding box."""

    h: float
    origin: tuple[float, float]
    nx: int
    ny: int
    mask: np.ndarray  # (ny, nx) bool, True = strictly interior node

    @property
    def interior_count(self) -> int:
        return int(self.mask.sum())


@dataclass(frozen=True)
class FDSpectrum:
    eigenvalues: tuple[float, ...]
    h: float
    polygon_id: str

    def __post_init__(self):
        vals = self.eigenvalues
        if any(v <= 0 for v in vals) or any(
            vals[i] > vals[i + 1] for i in range(len(vals) - 1)
        ):
            raise FDOracleError("eigenvalues must be positive and nondecreasing")


def _planar_data(polytope: Polytope):
    """Vertices and half-spaces of the polygon in 2-D working coordinates.

    Returns (verts2d, normals, offsets, exact) where exact carries rational
    (origin, h-free) data when the polygon already lives in the plane R^2.
    """
    if polytope.dim != 2:
        raise FDOracleError(
            f"need a planar polygon; input has intrinsic dimension {polytope.dim}"
        )
    if polytope.ambient_dim == 2:
        verts = np.array([[float(c) for c in v] for v in polytope.vertices])
        normals = np.array([[float(c) for c in n] for n, _ in polytope.halfspaces])
        offsets = np.array([float(c) for _, c in polytope.halfspaces])
        exact = (polytope.vertices, polytope.halfspaces)
        return verts, normals, offsets, exact
    origin, frame = support_frame(polytope)
    verts = (
        np.array([[float(c) for c in v] for v in polytope.vertices]) - origin
    ) @ frame.T
    normals = []
    offsets = []
    for n, c in polytope.halfspaces:
        nf = np.array([float(x) for x in n])
        n2 = frame @ nf
        normals.append(n2)
        offsets.append(float(c) - nf @ origin)
    return verts, np.array(normals), np.array(offsets), None


def polygon_id(polytope: Polytope) -> str:
    digest = hashlib.sha1(repr(polytope.vertices).encode()).hexdigest()
    return f"poly-{digest[:10]}"


def build_grid(polytope: Polytope, h) -> Grid:
    """Classify grid nodes; exact rational containment when the data allows."""
    verts, normals, offsets, exact = _planar_data(polytope)
    hf = float(h)
    lo = verts.min(axis=0)
    hi = verts.max(axis=0)
    nx = int(math.floor((hi[0] - lo[0]) / hf + 0.5)) + 1
    ny = int(math.floor((hi[1] - lo[1]) / hf + 0.5)) + 1
    ii, jj = np.meshgrid(np.arange(nx), np.arange(ny))

    h_is_rational = isinstance(h, (int, Fraction)) or isinstance(h, str)
    if exact is not None and h_is_rational:
        hq = Q(h)
        exact_verts, halfspaces = exact
        lox = min(v[0] for v in exact_verts)
        loy = min(v[1] for v in exact_verts)
        mask = np.ones((ny, nx), dtype=bool)
        for n, c in halfspaces:
            # n.(lo + (i,j)h) < c  as exact integers  A + Bi + Cj < 0
            a = n[0] * lox + n[1] * loy - c
            b0 = n[0] * hq
            b1 = n[1] * hq
            den = math.lcm(a.denominator, b0.denominator, b1.denominator)
            A, B, C = int(a * den), int(b0 * den), int(b1 * den)
            if max(abs(A), abs(B) * nx, abs(C) * ny) > 2**60:
                raise FDOracleError("grid integers too large for exact masking")
            mask &= (A + B * ii + C * jj) < 0
        origin = (float(lox), float(loy))
    else:
        pts = np.stack(
            [lo[0] + ii * hf, lo[1] + jj * hf], axis=-1
        )  # (ny, nx, 2)
        vals = pts @ normals.T - offsets
        mask = np.all(vals < -1e-12, axis=-1)
        origin = (float(lo[0]), float(lo[1]))
    return Grid(h=hf, origin=origin, nx=nx, ny=ny, mask=mask)


_DIRS = ((1, 0), (-1, 0), (0, 1), (0, -1))


def _boundary_arm(x, y, dx, dy, hf, normals, offsets):
    """Distance along (dx,dy) from (x,y) to the polygon boundary, capped at h."""
    best = hf
    px = normals[:, 0] * dx + normals[:, 1] * dy
    with np.errstate(divide="ignore", invalid="ignore"):
        t = (offsets - (normals[:, 0] * x + normals[:, 1] * y)) / px
    for ti, pi in zip(t, px):
        if pi > 1e-15 and 0.0 < ti <= hf * (1 + 1e-9):
            best = min(best, ti)
    return max(best, _ARM_FLOOR * hf)


def _assemble(grid: Grid, normals, offsets):
    """Shortley-Weller matrix on the masked grid; returns (matrix, symmetric)."""
    ny, nx, hf = grid.ny, grid.nx, grid.h
    idx = -np.ones((ny, nx), dtype=np.int64)
    jj, ii = np.nonzero(grid.mask)
    n = len(ii)
    idx[jj, ii] = np.arange(n)

    rows, cols, data = [], [], []
    symmetric = True
    x0, y0 = grid.origin
    for r in range(n):
        i, j = int(ii[r]), int(jj[r])
        x, y = x0 + i * hf, y0 + j * hf
        arms = []
        nbrs = []
        for dx, dy in _DIRS:
            i2, j2 = i + dx, j + dy
            inside = 0 <= i2 < nx and 0 <= j2 < ny and grid.mask[j2, i2]
            if inside:
                arms.append(hf)
                nbrs.append(int(idx[j2, i2]))
            else:
                arm = _boundary_arm(x, y, dx, dy, hf, normals, offsets)
                if abs(arm - hf) > 1e-12 * hf:
                    symmetric = False
                arms.append(arm)
                nbrs.append(-1)
        he, hw, hn, hs = arms
        diag = 2.0 / (he * hw) + 2.0 / (hn * hs)
        pair_arms = ((he, hw), (hw, he), (hn, hs), (hs, hn))
        rows.append(r)
        cols.append(r)
        data.append(diag)
        for (a, b), nbr in zip(pair_arms, nbrs):
            if nbr >= 0:
                rows.append(r)
                cols.append(nbr)
                data.append(-2.0 / (a * (a + b)))
    mat = sp.csc_matrix((data, (rows, cols)), shape=(n, n))
    return mat, symmetric


def fd_spectrum(polytope: Polytope, h, count: int = 6, *, seed: int = 0) -> FDSpectrum:
    """Smallest ``count`` Dirichlet eigenvalues of the 5-point Laplacian.

    Deterministic for fixed (polytope, h, count, seed): the iterative solver
    is started from a seeded vector and the matrix assembly is ordered.
    """
    if count < 1 or count > _MAX_COUNT:
        raise FDOracleError(f"count must be in 1..{_MAX_COUNT}")
    verts, normals, offsets, _ = _planar_data(polytope)
    grid = build_grid(polytope, h)
    n = grid.interior_count
    if n < _MIN_INTERIOR:
        raise FDOracleError(
            f"grid too coarse: {n} interior nodes < {_MIN_INTERIOR}; shrink h"
        )
    mat, symmetric = _assemble(grid, normals, offsets)
    rng = np.random.default_rng(seed)
    v0 = np.ones(n) + 1e-3 * rng.standard_normal(n)
    if symmetric:
        vals = spla.eigsh(
            mat, k=count, sigma=0, which="LM", v0=v0, return_eigenvectors=False
        )
        vals = np.sort(vals)
    else:
        raw = spla.eigs(
            mat, k=count, sigma=0, which="LM", v0=v0, return_eigenvectors=False
        )
        if np.max(np.abs(raw.imag)) > 1e-6 * np.max(np.abs(raw.real)):
            raise FDOracleError("eigensolver returned significantly complex values")
        vals = np.sort(raw.real)
    return FDSpectrum(
        eigenvalues=tuple(float(v) for v in vals),
        h=float(h),
        polygon_id=polygon_id(polytope),
    )


def fd_spectrum_interval(a, b, h, count: int = 6) -> FDSpectrum:
    """1-D tridiagonal path: Dirichlet eigenvalues of -u'' on (a, b)."""
    af, bf, hf = float(a), float(b), float(h)
    if bf <= af:
        raise FDOracleError("empty interval")
    n = int(round((bf - af) / hf)) - 1
    if n < 3:
        raise FDOracleError("grid too coarse for the interval")
    count = min(count, n)
    d = np.full(n, 2.0 / hf**2)
    e = np.full(n - 1, -1.0 / hf**2)
    vals = eigh_tridiagonal(d, e, select="i", select_range=(0, count - 1))[0]
    digest = hashlib.sha1(repr((a, b)).encode()).hexdigest()[:10]
    return FDSpectrum(
        eigenvalues=tuple(float(v) for v in vals), h=hf, polygon_id=f"interval-{digest}"
    )


def pde_residual(u: TrigSum, lam: float, x, h: float, frame=None) -> float:
    """|Delta_h u(x) - lam u(x)| with the 5-point stencil along the frame.

    O(h^2) for true eigenpairs; the frame defaults to the coordinate axes
    and lets callers verify eigenfunctions living on embedded planes.
    """
    x = np.asarray([float(c) for c in x])
    if frame is None:
        frame = np.eye(len(x))
    frame = np.asarray(frame, dtype=float)
    total = -2.0 * frame.shape[0] * u.evaluate(x)
    for d in frame:
        total += u.evaluate(x + h * d)
        total += u.evaluate(x - h * d)
    lap = -total / h**2
    return abs(lap - lam * u.evaluate(x))


# ---------------------------------------------------------------------------
# nodal sets by marching squares


def nodal_set_sample(
    u: TrigSum,
    region: Sequence[float],
    resolution: int,
    frame: tuple[np.ndarray, np.ndarray] | None = None,
) -> list[np.ndarray]:
    """Polylines approximating {u = 0} in the rectangle region.

    ``region`` is (x0, y0, x1, y1); ``resolution`` the number of cells per
    axis.  For a complex-valued sum the phase-aligned real part is
    contoured.  ``frame`` maps grid coordinates to an embedded plane as
    (origin, rows); output stays in grid coordinates.
    """
    x0, y0, x1, y1 = (float(c) for c in region)
    if resolution < 2:
        raise FDOracleError("resolution must be >= 2")
    xs = np.linspace(x0, x1, resolution + 1)
    ys = np.linspace(y0, y1, resolution + 1)
    gx, gy = np.meshgrid(xs, ys)
    pts = np.stack([gx.ravel(), gy.ravel()], axis=1)
    if frame is not None:
        origin, rows = frame
        pts = np.asarray(origin) + pts @ np.asarray(rows)
    vals = u.evaluate_many(pts)
    if np.max(np.abs(vals.imag)) > 1e-9 * max(1.0, np.max(np.abs(vals.real))):
        anchor = pts[int(np.argmax(np.abs(vals)))]
        u = u.phase_normalized(anchor)
        vals = u.evaluate_many(pts)
    grid_vals = vals.real.reshape(resolution + 1, resolution + 1)

    segments = _marching_squares(xs, ys, grid_vals)
    return _chain_segments(segments)


def _interp(p0, p1, v0, v1):
    t = v0 / (v0 - v1)
    t = min(max(t, 0.0), 1.0)
    return (p0[0] + t * (p1[0] - p0[0]), p0[1] + t * (p1[1] - p0[1]))


def _marching_squares(xs, ys, grid_vals):
    res_y, res_x = grid_vals.shape[0] - 1, grid_vals.shape[1] - 1
    segments = []
    for j in range(res_y):
        for i in range(res_x):
            corners = (
                (xs[i], ys[j]),
                (xs[i + 1], ys[j]),
                (xs[i + 1], ys[j + 1]),
                (xs[i], ys[j + 1]),
            )
            vals = (
                grid_vals[j, i],
                grid_vals[j, i + 1],
                grid_vals[j + 1, i + 1],
                grid_vals[j + 1, i],
            )
            signs = [v > 0 for v in vals]
            if all(signs) or not any(signs):
                continue
            crossings = []
            for k in range(4):
                k2 = (k + 1) % 4
                if signs[k] != signs[k2]:
                    crossings.append(
                        (k, _interp(corners[k], corners[k2], vals[k], vals[k2]))
                    )
            if len(crossings) == 2:
                segments.append((crossings[0][1], crossings[1][1]))
            elif len(crossings) == 4:
                # saddle cell: the center value decides the pairing
                center = sum(vals) / 4.0
                pts = [c[1] for c in crossings]
                if (center > 0) == signs[0]:
                    segments.append((pts[3], pts[0]))
                    segments.append((pts[1], pts[2]))
                else:
                    segments.append((pts[0], pts[1]))
                    segments.append((pts[2], pts[3]))
    return segments


def _chain_segments(segments, decimals: int = 9):
    """Greedy chaining of segments into polylines by shared endpoints."""

    def key(p):
        return (round(p[0], decimals), round(p[1], decimals))

    adj: dict[tuple, list[int]] = {}
    for s, (p, q) in enumerate(segments):
        adj.setdefault(key(p), []).append(s)
        adj.setdefault(key(q), []).append(s)
    used = [False] * len(segments)
    polylines = []
    for start in range(len(segments)):
        if used[start]:
            continue
        used[start] = True
        p, q = segments[start]
        line = [p, q]
        for endpoint_side in (1, 0):
            while True:
                tip = line[-1] if endpoint_side else line[0]
                candidates = [s for s in adj.get(key(tip), []) if not used[s]]
                if not candidates:
                    break
                s = candidates[0]
                used[s] = True
                a, b = segments[s]
                nxt = b if key(a) == key(tip) else a
                if endpoint_side:
                    line.append(nxt)
                else:
                    line.insert(0, nxt)
        polylines.append(np.array(line))
    return polylines
