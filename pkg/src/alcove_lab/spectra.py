"""Exact Dirichlet spectra and trigonometric eigenfunctions of alcoves.

Eigenvalues are 4*pi^2*|q|^2 over weights q strictly inside the dominant
chamber, with |q|^2 kept as an exact rational; the weight lattice is the
dual of the Z-span of the coroots.  Eigenfunctions are the determinant-
alternating sums over the finite Weyl group, the unique antisymmetric
combination of the exponentials e^(2*pi*i*x.w(q)).
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

from .exact_geometry import (
    GeometryError,
    LatticeBasis,
    Polytope,
    Q,
    Vector,
    add,
    dot,
    dual_lattice,
    lattice_from_generators,
    mat_vec,
    norm_sq,
    scale,
    sub,
    vector,
    zero_vector,
)
from .root_systems import RootSystem, WeylGroup, weyl_group


def coroot_lattice(system: RootSystem) -> LatticeBasis:
    """Z-span of the coroots: the translation lattice of the affine Weyl group."""
    return lattice_from_generators([system.coroot(v) for v in system.roots])


def weight_lattice(system: RootSystem) -> LatticeBasis:
    """Dual of the coroot lattice inside the support."""
    return dual_lattice(coroot_lattice(system))


@dataclass(frozen=True)
class SpectrumEntry:
    """One Dirichlet eigenvalue with its exact |q|^2 and contributing weights."""

    q_norm_sq: Q
    multiplicity: int
    weights: tuple[Vector, ...]

    def __post_init__(self):
        if self.multiplicity != len(self.weights):
            raise GeometryError("multiplicity must equal the number of weights")

    @property
    def eigenvalue(self) -> float:
        return 4.0 * math.pi**2 * float(self.q_norm_sq)


def _ldl(gram: Sequence[Sequence[Q]]) -> tuple[list[list[Q]], list[Q]]:
    """G = L D L^T with unit lower-triangular L; exact, fails if G is not PD."""
    r = len(gram)
    L = [[Q(0)] * r for _ in range(r)]
    D = [Q(0)] * r
    for j in range(r):
        D[j] = gram[j][j] - sum(L[j][k] ** 2 * D[k] for k in range(j))
        if D[j] <= 0:
            raise GeometryError("Gram matrix is not positive definite")
        L[j][j] = Q(1)
        for i in range(j + 1, r):
            L[i][j] = (
                gram[i][j] - sum(L[i][k] * L[j][k] * D[k] for k in range(j))
            ) / D[j]
    return L, D


def _int_candidates(mu: Q, t: Q) -> range:
    """Integers k with (k + mu)^2 <= t; float seeded, exactly adjusted."""
    if t < 0:
        return range(0)
    s = math.sqrt(float(t)) if t > 0 else 0.0
    k = math.floor(-float(mu) - s)
    while (Q(k) + mu) ** 2 <= t:
        k -= 1
    k += 1
    hi = math.ceil(-float(mu) + s)
    while (Q(hi) + mu) ** 2 <= t:
        hi += 1
    return range(k, hi)


def lattice_points_in_ball(lattice: LatticeBasis, bound: Q) -> list[tuple[Vector, Q]]:
    """All lattice points x with |x|^2 <= bound, as (point, exact |x|^2) pairs.

    Depth-first over the basis coordinates with exact LDL bounds; no
    floating-point decision anywhere.
    """
    bound = Q(bound)
    r = lattice.rank
    L, D = _ldl(lattice.gram)
    out: list[tuple[Vector, Q]] = []
    coeffs = [0] * r

    def descend(j: int, remaining: Q) -> None:
        if j < 0:
            x = zero_vector(lattice.ambient_dim)
            for c, b in zip(coeffs, lattice.basis):
                if c:
                    x = add(x, scale(c, b))
            out.append((x, bound - remaining))
            return
        mu = sum((L[i][j] * coeffs[i] for i in range(j + 1, r)), Q(0))
        for k in _int_candidates(mu, remaining / D[j]):
            coeffs[j] = k
            descend(j - 1, remaining - D[j] * (Q(k) + mu) ** 2)
        coeffs[j] = 0

    descend(r - 1, bound)
    return out


def spectrum(
    system: RootSystem,
    *,
    lambda_max: float | None = None,
    count: int | None = None,
    max_q_norm_sq=None,
) -> list[SpectrumEntry]:
    """Eigenvalue list, ascending, complete below the cutoff.

    Exactly one of ``lambda_max`` (eigenvalue cutoff, floating),
    ``max_q_norm_sq`` (exact rational cutoff on |q|^2), or ``count``
    (number of distinct eigenvalues) must be given.  Entries group weights
    by exact rational |q|^2; no floating comparison enters the
    multiplicity count.
    """
    given = [x is not None for x in (lambda_max, count, max_q_norm_sq)]
    if sum(given) != 1:
        raise GeometryError("give exactly one of lambda_max, count, max_q_norm_sq")
    lat = weight_lattice(system)
    simple = system.simple_roots

    def collect(bound: Q) -> list[SpectrumEntry]:
        groups: dict[Q, list[Vector]] = {}
        for x, nsq in lattice_points_in_ball(lat, bound):
            if all(dot(a, x) > 0 for a in simple):
                groups.setdefault(nsq, []).append(x)
        return [
            SpectrumEntry(q_norm_sq=k, multiplicity=len(v), weights=tuple(sorted(v)))
            for k, v in sorted(groups.items())
        ]

    if count is not None:
        if count < 1:
            raise GeometryError("count must be positive")
        bound = max(lat.gram[i][i] for i in range(lat.rank)) * 4
        while True:
            entries = collect(bound)
            if len(entries) >= count:
                return entries[:count]
            bound *= 2
    if max_q_norm_sq is not None:
        return collect(Q(max_q_norm_sq))
    if lambda_max <= 0:
        raise GeometryError("lambda_max must be positive")
    return collect(Q(lambda_max) / Q(4) / Q(math.pi**2))


# ---------------------------------------------------------------------------
# trigonometric eigenfunctions


@dataclass(frozen=True)
class TrigTerm:
    coefficient: complex
    frequency: tuple[float, ...]
    wavevector: tuple[Q, ...] | None = None  # exact q with frequency = 2*pi*q


@dataclass(frozen=True)
class TrigSum:
    """Finite sum of c_j * exp(i * L_j . x) with a common |L_j|^2.

    ``q_norm_sq`` holds the exact common |q|^2 when the terms came from a
    weight-lattice construction (then L_j = 2*pi*q_j); it is None for sums
    assembled from floating sine data.
    """

    terms: tuple[TrigTerm, ...]
    freq_norm_sq: float
    ambient_dim: int
    q_norm_sq: Q | None = None

    @property
    def eigenvalue(self) -> float:
        return self.freq_norm_sq

    def evaluate(self, x) -> complex:
        """Compensated scalar evaluation at one point."""
        xs = tuple(float(c) for c in x)
        if len(xs) != self.ambient_dim:
            raise GeometryError("dimension mismatch")
        re, im = [], []
        for t in self.terms:
            phase = math.fsum(f * c for f, c in zip(t.frequency, xs))
            val = t.coefficient * cmath.exp(1j * phase)
            re.append(val.real)
            im.append(val.imag)
        return complex(math.fsum(re), math.fsum(im))

    def evaluate_many(self, points: np.ndarray) -> np.ndarray:
        """Vectorized evaluation on an (N, dim) array of points."""
        pts = np.asarray(points, dtype=float)
        if pts.ndim == 1:
            pts = pts[None, :]
        freqs = np.array([t.frequency for t in self.terms])
        coeffs = np.array([t.coefficient for t in self.terms])
        return np.exp(1j * pts @ freqs.T) @ coeffs

    def phase_normalized(self, anchor) -> "TrigSum":
        """Rotate coefficients so the value at the anchor point is real positive."""
        val = self.evaluate(anchor)
        if val == 0:
            raise GeometryError("anchor evaluates to zero; cannot fix a phase")
        rot = abs(val) / val
        return TrigSum(
            terms=tuple(
                TrigTerm(t.coefficient * rot, t.frequency, t.wavevector)
                for t in self.terms
            ),
            freq_norm_sq=self.freq_norm_sq,
            ambient_dim=self.ambient_dim,
            q_norm_sq=self.q_norm_sq,
        )


def trig_sum_from_weights(pairs: Iterable[tuple[complex, Vector]]) -> TrigSum:
    """Build sum(c * e^(2*pi*i*q.x)) from exact weight vectors."""
    terms = []
    nsq = None
    dim = None
    for coeff, qv in pairs:
        qv = vector(qv)
        dim = dim if dim is not None else len(qv)
        this = norm_sq(qv)
        if nsq is None:
            nsq = this
        elif nsq != this:
            raise GeometryError(
                f"unequal squared norms {nsq} vs {this}: not a trigonometric eigenfunction"
            )
        terms.append(
            TrigTerm(
                coefficient=complex(coeff),
                frequency=tuple(2.0 * math.pi * float(c) for c in qv),
                wavevector=qv,
            )
        )
    if not terms:
        raise GeometryError("empty sum")
    terms.sort(key=lambda t: t.wavevector)
    return TrigSum(
        terms=tuple(terms),
        freq_norm_sq=4.0 * math.pi**2 * float(nsq),
        ambient_dim=dim,
        q_norm_sq=nsq,
    )


def trig_sum_from_sines(
    sine_terms: Iterable[tuple[float, Sequence[float], float]],
    rel_tol: float = 1e-9,
) -> TrigSum:
    """Build sum(a * sin(L.x + phase)) as exponential terms.

    All |L|^2 must agree to ``rel_tol``; that is the defining constraint of
    a trigonometric eigenfunction.
    """
    merged: dict[tuple[float, ...], complex] = {}
    nsq = None
    dim = None
    for amp, freq, phase in sine_terms:
        freq = tuple(float(f) for f in freq)
        dim = dim if dim is not None else len(freq)
        this = sum(f * f for f in freq)
        if nsq is None:
            nsq = this
        elif abs(this - nsq) > rel_tol * max(1.0, nsq):
            raise GeometryError(f"unequal squared frequency norms {nsq} vs {this}")
        c = -0.5j * amp * cmath.exp(1j * phase)
        merged[freq] = merged.get(freq, 0j) + c
        mfreq = tuple(-f for f in freq)
        merged[mfreq] = merged.get(mfreq, 0j) + 0.5j * amp * cmath.exp(-1j * phase)
    terms = tuple(
        TrigTerm(coefficient=c, frequency=f)
        for f, c in sorted(merged.items())
        if c != 0
    )
    return TrigSum(terms=terms, freq_norm_sq=nsq, ambient_dim=dim)


def eigenfunction(
    system: RootSystem, q, group: WeylGroup | None = None
) -> TrigSum:
    """Weyl-alternating eigenfunction sum(det(w) e^(2*pi*i*(wq).x)) over W.

    ``q`` must be a weight strictly inside the dominant chamber; on a
    chamber wall the alternating sum degenerates to zero and is refused.
    """
    q = vector(q)
    lat = weight_lattice(system)
    if not lat.contains(q):
        raise GeometryError(f"{q} is not in the weight lattice")
    prods = [dot(a, q) for a in system.simple_roots]
    if any(p == 0 for p in prods):
        raise GeometryError(
            f"{q} lies on a chamber wall; the alternating sum degenerates to 0"
        )
    if any(p < 0 for p in prods):
        raise GeometryError(f"{q} is not in the dominant chamber")
    group = group or weyl_group(system)
    pairs = []
    seen = set()
    for w, det in zip(group.elements, group.determinants):
        wq = mat_vec(w, q)
        if wq in seen:
            raise GeometryError("weight has a nontrivial stabilizer; not strictly dominant")
        seen.add(wq)
        pairs.append((complex(det), wq))
    return trig_sum_from_weights(pairs)


def evaluate(u: TrigSum, x) -> complex:
    """Point evaluation of a trigonometric sum (compensated summation)."""
    return u.evaluate(x)


# ---------------------------------------------------------------------------
# numerical verification of eigenpairs


@dataclass(frozen=True)
class VerificationReport:
    boundary_max: float
    residual_max: float
    sign_constant: bool
    antisymmetry_max: float
    boundary_samples: int
    interior_samples: int
    h: float
    seed: int

    @property
    def passed(self) -> bool:
        return self.boundary_max < 1e-9 and self.antisymmetry_max < 1e-9


def support_frame(polytope: Polytope) -> tuple[np.ndarray, np.ndarray]:
    """Float orthonormal frame (origin, rows=directions) of the support."""
    origin = np.array([float(c) for c in polytope.support_point])
    rows = []
    for b in polytope.support_basis:
        v = np.array([float(c) for c in b])
        rows.append(v / math.sqrt(float(norm_sq(b))))
    return origin, np.array(rows)


def _interior_points(polytope: Polytope, n: int, rng: np.random.Generator) -> np.ndarray:
    verts = np.array([[float(c) for c in v] for v in polytope.vertices])
    origin, frame = support_frame(polytope)
    coords = (verts - origin) @ frame.T
    lo, hi = coords.min(axis=0), coords.max(axis=0)
    normals = np.array([[float(c) for c in nrm] for nrm, _ in polytope.halfspaces])
    offsets = np.array([float(c) for _, c in polytope.halfspaces])
    points = np.empty((0, verts.shape[1]))
    while len(points) < n:
        u = rng.uniform(lo, hi, size=(max(n, 64), len(lo)))
        cand = origin + u @ frame
        ok = np.all(cand @ normals.T < offsets - 1e-12, axis=1)
        points = np.vstack([points, cand[ok]])
    return points[:n]


def _boundary_points(polytope: Polytope, n: int, rng: np.random.Generator) -> np.ndarray:
    facets = [polytope.facet_vertices(f) for f in polytope.halfspaces]
    per = max(1, n // len(facets))
    chunks = []
    for fverts in facets:
        arr = np.array([[float(c) for c in v] for v in fverts])
        w = rng.dirichlet(np.ones(len(arr)), size=per)
        chunks.append(w @ arr)
    return np.vstack(chunks)[:n]


def _stencil_residual(
    u: TrigSum, lam: float, points: np.ndarray, h: float, frame: np.ndarray
) -> np.ndarray:
    """|Delta_h u - lam u| with Delta = -sum d^2/dx_k^2 along the frame."""
    total = -2.0 * frame.shape[0] * u.evaluate_many(points)
    for d in frame:
        total += u.evaluate_many(points + h * d)
        total += u.evaluate_many(points - h * d)
    lap = -total / h**2
    return np.abs(lap - lam * u.evaluate_many(points))


def verify_eigenpair(
    u: TrigSum,
    polytope: Polytope,
    samples: int = 1000,
    h: float = 1e-3,
    *,
    interior_samples: int | None = None,
    seed: int = 0,
) -> VerificationReport:
    """Sample-based checks that (u, lambda) is the Dirichlet eigenpair of P.

    Checks boundary vanishing, the finite-difference PDE residual, interior
    sign constancy (meaningful for first eigenfunctions), and antisymmetry
    across every wall plane of the polytope.
    """
    rng = np.random.default_rng(seed)
    interior_samples = interior_samples or samples
    lam = u.freq_norm_sq

    boundary = _boundary_points(polytope, samples, rng)
    boundary_max = float(np.max(np.abs(u.evaluate_many(boundary))))

    interior = _interior_points(polytope, interior_samples, rng)
    _, frame = support_frame(polytope)
    residual_max = float(np.max(_stencil_residual(u, lam, interior, h, frame)))

    vals = u.evaluate_many(interior)
    anchor = interior[int(np.argmax(np.abs(vals)))]
    rot = u.phase_normalized(anchor)
    real_vals = np.real(rot.evaluate_many(interior))
    sign_constant = bool(np.all(real_vals > 0))

    anti = 0.0
    for nrm, off in polytope.halfspaces:
        nv = np.array([float(c) for c in nrm])
        cv = float(off)
        factor = (interior @ nv - cv) * 2.0 / float(nv @ nv)
        mirrored = interior - factor[:, None] * nv[None, :]
        anti = max(
            anti,
            float(np.max(np.abs(u.evaluate_many(mirrored) + u.evaluate_many(interior)))),
        )

    return VerificationReport(
        boundary_max=boundary_max,
        residual_max=residual_max,
        sign_constant=sign_constant,
        antisymmetry_max=anti,
        boundary_samples=len(boundary),
        interior_samples=len(interior),
        h=h,
        seed=seed,
    )


def spectrum_for_polytope(polytope: Polytope, count: int) -> list[SpectrumEntry]:
    """Spectrum of a congruent copy of an alcove, via reconstruction.

    The eigenvalues of a polytope are congruence invariants, so the
    spectrum of the reconstructed system's fundamental alcove is the
    spectrum of the input.
    """
    from .tessellation import root_system_from_tessellation

    system = root_system_from_tessellation(polytope)
    return spectrum(system, count=count)
