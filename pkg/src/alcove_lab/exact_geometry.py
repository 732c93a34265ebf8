"""Exact rational geometry: vectors, hyperplanes, convex polytopes, lattices.

Everything in this module is computed over ``fractions.Fraction``; there are
no tolerances and no floating point.  Floating-point geometry lives in
``fd_oracle`` only.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Sequence

Q = Fraction
Vector = tuple[Q, ...]
Matrix = tuple[Vector, ...]

INTERIOR = "interior"
BOUNDARY = "boundary"
OUTSIDE = "outside"


class GeometryError(ValueError):
    """Invalid geometric input (zero normal, dimension mismatch, ...)."""


class DegenerateGeometryError(GeometryError):
    """Degenerate input; the message names the failing certificate."""


# ---------------------------------------------------------------------------
# rational vectors


def rational(x) -> Q:
    """Coerce ints, strings like '3/4', and Fractions.  Floats are refused."""
    if isinstance(x, float):
        raise GeometryError(f"refusing float {x!r}; exact rational input required")
    return Q(x)


def vector(coords: Iterable) -> Vector:
    v = tuple(rational(c) for c in coords)
    if not v:
        raise GeometryError("empty vector")
    return v


def zero_vector(dim: int) -> Vector:
    return (Q(0),) * dim


def _check_dims(u: Vector, v: Vector) -> None:
    if len(u) != len(v):
        raise GeometryError(f"dimension mismatch: {len(u)} vs {len(v)}")


def dot(u: Vector, v: Vector) -> Q:
    _check_dims(u, v)
    return sum((a * b for a, b in zip(u, v)), Q(0))


def add(u: Vector, v: Vector) -> Vector:
    _check_dims(u, v)
    return tuple(a + b for a, b in zip(u, v))


def sub(u: Vector, v: Vector) -> Vector:
    _check_dims(u, v)
    return tuple(a - b for a, b in zip(u, v))


def neg(u: Vector) -> Vector:
    return tuple(-a for a in u)


def scale(c, u: Vector) -> Vector:
    c = Q(c)
    return tuple(c * a for a in u)


def norm_sq(u: Vector) -> Q:
    return dot(u, u)


def is_zero(u: Vector) -> bool:
    return all(a == 0 for a in u)


def distance_sq(u: Vector, v: Vector) -> Q:
    return norm_sq(sub(u, v))


def parallel_factor(u: Vector, v: Vector) -> Q | None:
    """Return c with u == c*v, or None if u is not a multiple of v."""
    _check_dims(u, v)
    if is_zero(v):
        return None
    c = None
    for a, b in zip(u, v):
        if b == 0:
            if a != 0:
                return None
        else:
            t = a / b
            if c is None:
                c = t
            elif c != t:
                return None
    if c is None:
        return None
    return c


def primitive_oriented(v: Vector) -> Vector:
    """Scale v by a positive rational to a primitive integer vector (sign kept)."""
    if is_zero(v):
        raise GeometryError("zero vector has no direction")
    den = math.lcm(*(c.denominator for c in v))
    ints = [int(c * den) for c in v]
    g = math.gcd(*ints)
    return tuple(Q(c, g) for c in ints)


def primitive_direction(v: Vector) -> Vector:
    """Scale v to a primitive integer vector whose first nonzero entry is positive."""
    ints = [int(c) for c in primitive_oriented(v)]
    for c in ints:
        if c != 0:
            if c < 0:
                ints = [-x for x in ints]
            break
    return tuple(Q(c) for c in ints)


def as_floats(v: Sequence) -> tuple[float, ...]:
    return tuple(float(c) for c in v)


def sqrt_upper_bound(s: Q) -> Q:
    """A rational upper bound for sqrt(s), s >= 0."""
    if s < 0:
        raise GeometryError("negative argument")
    p, q = s.numerator, s.denominator
    return Q(math.isqrt(p * q) + 1, q)


# ---------------------------------------------------------------------------
# exact linear algebra


def mat_vec(m: Matrix, v: Vector) -> Vector:
    return tuple(dot(row, v) for row in m)


def mat_mul(a: Matrix, b: Matrix) -> Matrix:
    bt = transpose(b)
    return tuple(tuple(dot(row, col) for col in bt) for row in a)


def transpose(m: Matrix) -> Matrix:
    return tuple(zip(*m))


def identity_matrix(n: int) -> Matrix:
    return tuple(tuple(Q(1) if i == j else Q(0) for j in range(n)) for i in range(n))


def _echelon(rows: list[list[Q]]) -> tuple[list[list[Q]], list[int]]:
    """Row echelon form in place; returns (rows, pivot column indices)."""
    if not rows:
        return rows, []
    ncols = len(rows[0])
    pivots = []
    r = 0
    for c in range(ncols):
        pivot = next((i for i in range(r, len(rows)) if rows[i][c] != 0), None)
        if pivot is None:
            continue
        rows[r], rows[pivot] = rows[pivot], rows[r]
        inv = 1 / rows[r][c]
        rows[r] = [x * inv for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c] != 0:
                f = rows[i][c]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == len(rows):
            break
    return rows, pivots


def rank_of(vectors: Sequence[Vector]) -> int:
    rows = [list(v) for v in vectors if not is_zero(v)]
    if not rows:
        return 0
    _, pivots = _echelon(rows)
    return len(pivots)


def solve_square(a: Matrix, b: Vector) -> Vector | None:
    """Solve a x = b for square a; None when a is singular."""
    n = len(a)
    rows = [list(a[i]) + [b[i]] for i in range(n)]
    rows, pivots = _echelon(rows)
    if len(pivots) != n or pivots != list(range(n)):
        return None
    return tuple(rows[i][n] for i in range(n))


def invert_matrix(a: Matrix) -> Matrix | None:
    n = len(a)
    rows = [list(a[i]) + [Q(1) if i == j else Q(0) for j in range(n)] for i in range(n)]
    rows, pivots = _echelon(rows)
    if len(pivots) != n or pivots != list(range(n)):
        return None
    return tuple(tuple(rows[i][n:]) for i in range(n))


def determinant(a: Matrix) -> Q:
    n = len(a)
    rows = [list(r) for r in a]
    det = Q(1)
    for c in range(n):
        pivot = next((i for i in range(c, n) if rows[i][c] != 0), None)
        if pivot is None:
            return Q(0)
        if pivot != c:
            rows[c], rows[pivot] = rows[pivot], rows[c]
            det = -det
        det *= rows[c][c]
        inv = 1 / rows[c][c]
        for i in range(c + 1, n):
            if rows[i][c] != 0:
                f = rows[i][c] * inv
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[c])]
    return det


def nullspace_basis(rows_in: Sequence[Vector], dim: int) -> list[Vector]:
    """Basis of {x : r . x = 0 for all rows}."""
    rows = [list(r) for r in rows_in if not is_zero(r)]
    if not rows:
        return [tuple(Q(1) if i == j else Q(0) for j in range(dim)) for i in range(dim)]
    rows, pivots = _echelon(rows)
    free = [c for c in range(dim) if c not in pivots]
    basis = []
    for f in free:
        x = [Q(0)] * dim
        x[f] = Q(1)
        for r, p in reversed(list(enumerate(pivots))):
            x[p] = -sum(rows[r][c] * x[c] for c in range(p + 1, dim))
        basis.append(tuple(x))
    return basis


def orthogonalize(vectors: Sequence[Vector]) -> list[Vector]:
    """Gram-Schmidt without normalization; output stays rational and orthogonal."""
    basis: list[Vector] = []
    for v in vectors:
        w = v
        for b in basis:
            w = sub(w, scale(dot(w, b) / norm_sq(b), b))
        if not is_zero(w):
            basis.append(w)
    return basis


def reflection_matrix(normal: Vector) -> Matrix:
    """Orthogonal reflection through the origin fixing {x : normal.x = 0}."""
    if is_zero(normal):
        raise GeometryError("zero normal")
    n = len(normal)
    nn = norm_sq(normal)
    return tuple(
        tuple(
            (Q(1) if i == j else Q(0)) - 2 * normal[i] * normal[j] / nn
            for j in range(n)
        )
        for i in range(n)
    )


# ---------------------------------------------------------------------------
# hyperplanes and reflections


@dataclass(frozen=True)
class AffineHyperplane:
    """The set {x : normal . x = offset}."""

    normal: Vector
    offset: Q

    def __post_init__(self):
        if is_zero(self.normal):
            raise GeometryError("invalid hyperplane: zero normal")

    def value(self, x: Vector) -> Q:
        return dot(self.normal, x) - self.offset

    def canonical(self) -> tuple[Vector, Q]:
        prim = primitive_direction(self.normal)
        s = parallel_factor(self.normal, prim)
        return prim, self.offset / s


def reflect(x: Vector, plane: AffineHyperplane) -> Vector:
    """Mirror image of x across the hyperplane; points on the plane are fixed."""
    n = plane.normal
    t = 2 * (dot(n, x) - plane.offset) / norm_sq(n)
    return sub(x, scale(t, n))


def reflect_direction(v: Vector, plane: AffineHyperplane) -> Vector:
    """Linear part of the reflection applied to a direction vector."""
    n = plane.normal
    return sub(v, scale(2 * dot(n, v) / norm_sq(n), n))


# ---------------------------------------------------------------------------
# lattices


@dataclass(frozen=True)
class LatticeBasis:
    """Z-basis of a (possibly subspace-supported) lattice in R^n."""

    basis: tuple[Vector, ...]
    ambient_dim: int

    def __post_init__(self):
        if not self.basis:
            raise GeometryError("empty lattice basis")
        if rank_of(self.basis) != len(self.basis):
            raise DegenerateGeometryError(
                "lattice generators are linearly dependent"
            )

    @property
    def rank(self) -> int:
        return len(self.basis)

    @cached_property
    def gram(self) -> Matrix:
        return tuple(tuple(dot(a, b) for b in self.basis) for a in self.basis)

    @cached_property
    def _gram_inv(self) -> Matrix:
        inv = invert_matrix(self.gram)
        assert inv is not None
        return inv

    def coordinates(self, x: Vector) -> Vector | None:
        """Coordinates of x in this basis, or None when x is outside the span."""
        if len(x) != self.ambient_dim:
            raise GeometryError("dimension mismatch")
        proj = mat_vec(self._gram_inv, tuple(dot(b, x) for b in self.basis))
        recon = zero_vector(self.ambient_dim)
        for c, b in zip(proj, self.basis):
            recon = add(recon, scale(c, b))
        if recon != tuple(x):
            return None
        return proj

    def contains(self, x: Vector) -> bool:
        coords = self.coordinates(vector(x))
        return coords is not None and all(c.denominator == 1 for c in coords)


def _extgcd(a: int, b: int) -> tuple[int, int, int]:
    if b == 0:
        return abs(a), (1 if a >= 0 else -1), 0
    g, x, y = _extgcd(b, a % b)
    return g, y, x - (a // b) * y


def _integer_span_basis(vecs: list[list[int]]) -> list[list[int]]:
    """Hermite-style Z-basis of the integer span of the given integer vectors."""
    ncols = len(vecs[0])
    pivot_rows: dict[int, list[int]] = {}
    for v in vecs:
        w = list(v)
        while True:
            p = next((i for i, c in enumerate(w) if c != 0), None)
            if p is None:
                break
            if p not in pivot_rows:
                if w[p] < 0:
                    w = [-c for c in w]
                pivot_rows[p] = w
                break
            b = pivot_rows[p]
            g, x, y = _extgcd(b[p], w[p])
            nb = [x * bi + y * wi for bi, wi in zip(b, w)]
            nw = [(w[p] // g) * bi - (b[p] // g) * wi for bi, wi in zip(b, w)]
            pivot_rows[p] = nb
            w = nw
    rows = [pivot_rows[p] for p in sorted(pivot_rows)]
    # reduce entries above each pivot for a canonical result
    for i in reversed(range(len(rows))):
        p = next(j for j, c in enumerate(rows[i]) if c != 0)
        for k in range(i):
            if rows[k][p] != 0:
                f = rows[k][p] // rows[i][p]
                rows[k] = [a - f * b for a, b in zip(rows[k], rows[i])]
    return rows


def lattice_from_generators(generators: Sequence, ambient_dim: int | None = None) -> LatticeBasis:
    """Z-span of the generators as a LatticeBasis."""
    gens = [vector(g) for g in generators]
    if not gens:
        raise GeometryError("no generators")
    n = len(gens[0])
    if ambient_dim is not None and ambient_dim != n:
        raise GeometryError("ambient dimension mismatch")
    den = math.lcm(*(c.denominator for g in gens for c in g))
    ints = [[int(c * den) for c in g] for g in gens]
    rows = _integer_span_basis(ints)
    basis = tuple(tuple(Q(c, den) for c in row) for row in rows)
    return LatticeBasis(basis=basis, ambient_dim=n)


def dual_lattice(lattice: LatticeBasis) -> LatticeBasis:
    """Dual within the span: {x in span(L) : x . g in Z for every generator g}."""
    ginv = invert_matrix(lattice.gram)
    if ginv is None:
        raise DegenerateGeometryError("rank-deficient lattice has no dual")
    dual = []
    for j in range(lattice.rank):
        v = zero_vector(lattice.ambient_dim)
        for i, b in enumerate(lattice.basis):
            v = add(v, scale(ginv[i][j], b))
        dual.append(v)
    return LatticeBasis(basis=tuple(dual), ambient_dim=lattice.ambient_dim)


# ---------------------------------------------------------------------------
# polytopes


@dataclass(frozen=True)
class Polytope:
    """Bounded convex polytope with synchronized vertex and half-space forms.

    The polytope may be supported on a proper affine subspace of the ambient
    space (an alcove of A2 lives on a plane inside R^3); ``dim`` is the
    intrinsic dimension and interiors are relative to the support.
    Half-spaces are stored in ambient form (normal, offset) meaning
    ``normal . x <= offset`` with normals parallel to the support.
    """

    ambient_dim: int
    vertices: tuple[Vector, ...]
    halfspaces: tuple[tuple[Vector, Q], ...]
    support_point: Vector
    support_basis: tuple[Vector, ...]

    @property
    def dim(self) -> int:
        return len(self.support_basis)

    @cached_property
    def barycenter(self) -> Vector:
        n = len(self.vertices)
        acc = zero_vector(self.ambient_dim)
        for v in self.vertices:
            acc = add(acc, v)
        return scale(Q(1, n), acc)

    @cached_property
    def bbox(self) -> tuple[Vector, Vector]:
        lo = tuple(min(v[i] for v in self.vertices) for i in range(self.ambient_dim))
        hi = tuple(max(v[i] for v in self.vertices) for i in range(self.ambient_dim))
        return lo, hi

    @cached_property
    def diameter_sq(self) -> Q:
        return max(
            distance_sq(a, b) for a, b in itertools.combinations(self.vertices, 2)
        )

    def to_support_coords(self, x: Vector) -> Vector:
        d = sub(x, self.support_point)
        return tuple(dot(d, b) / norm_sq(b) for b in self.support_basis)

    def from_support_coords(self, c: Vector) -> Vector:
        x = self.support_point
        for ci, b in zip(c, self.support_basis):
            x = add(x, scale(ci, b))
        return x

    def in_support(self, x: Vector) -> bool:
        return self.from_support_coords(self.to_support_coords(x)) == tuple(x)

    def facet_vertices(self, facet: tuple[Vector, Q]) -> tuple[Vector, ...]:
        n, c = facet
        return tuple(v for v in self.vertices if dot(n, v) == c)

    def facet_planes(self) -> list[AffineHyperplane]:
        return [AffineHyperplane(n, c) for n, c in self.halfspaces]

    def canonical_key(self) -> tuple[Vector, ...]:
        return self.vertices


def contains(polytope: Polytope, x) -> str:
    """Exact membership: one of 'interior', 'boundary', 'outside'."""
    x = vector(x)
    if len(x) != polytope.ambient_dim:
        raise GeometryError("dimension mismatch")
    if not polytope.in_support(x):
        return OUTSIDE
    on_boundary = False
    for n, c in polytope.halfspaces:
        v = dot(n, x)
        if v > c:
            return OUTSIDE
        if v == c:
            on_boundary = True
    return BOUNDARY if on_boundary else INTERIOR


def _facets_in_coords(coords: list[Vector], d: int) -> list[tuple[Vector, Q]]:
    """Exhaustive facet enumeration for points of affine rank d in R^d coords."""
    facets: dict[tuple[Vector, Q], tuple[Vector, Q]] = {}
    for subset in itertools.combinations(range(len(coords)), d):
        pts = [coords[i] for i in subset]
        diffs = [sub(p, pts[0]) for p in pts[1:]]
        if rank_of(diffs) != d - 1:
            continue
        normals = nullspace_basis(diffs, d)
        if len(normals) != 1:
            continue
        n = normals[0]
        c = dot(n, pts[0])
        lo = hi = False
        for p in coords:
            v = dot(n, p)
            if v < c:
                lo = True
            elif v > c:
                hi = True
            if lo and hi:
                break
        if lo and hi:
            continue
        if hi:
            n, c = neg(n), -c
        prim = primitive_oriented(n)
        s = parallel_factor(n, prim)
        key = (prim, c / s)
        facets[key] = key
    return sorted(facets.values())


def _build_polytope(
    points: Sequence[Vector],
    support_point: Vector,
    support_basis: Sequence[Vector],
) -> Polytope:
    d = len(support_basis)
    ambient = len(support_point)
    basis_norms = [norm_sq(b) for b in support_basis]
    coords = [
        tuple(dot(sub(p, support_point), b) / nb for b, nb in zip(support_basis, basis_norms))
        for p in points
    ]
    facets_c = _facets_in_coords(coords, d)
    halfspaces = []
    for n, c in facets_c:
        ambient_n = zero_vector(ambient)
        for nc, b, nb in zip(n, support_basis, basis_norms):
            ambient_n = add(ambient_n, scale(nc / nb, b))
        prim = primitive_oriented(ambient_n)
        s = parallel_factor(ambient_n, prim)
        offset = (c + dot(ambient_n, support_point)) / s
        halfspaces.append((prim, offset))
    halfspaces = tuple(sorted(set(halfspaces)))

    poly = Polytope(
        ambient_dim=ambient,
        vertices=tuple(sorted(points)),
        halfspaces=halfspaces,
        support_point=support_point,
        support_basis=tuple(support_basis),
    )
    # construction checks: each vertex extreme, barycenter interior
    for v in poly.vertices:
        tight = sum(1 for n, c in halfspaces if dot(n, v) == c)
        if tight < d:
            raise DegenerateGeometryError(
                f"point {v} is not an extreme point (only {tight} tight constraints, need {d})"
            )
    b = poly.barycenter
    for n, c in halfspaces:
        if dot(n, b) >= c:
            raise DegenerateGeometryError(
                f"no interior: barycenter sits on facet (normal={n}, offset={c})"
            )
    return poly


def polytope_from_vertices(points: Iterable, *, allow_subspace: bool = False) -> Polytope:
    """Polytope from its vertex list; every input point must be extreme.

    With ``allow_subspace`` the points may span a proper affine subspace of
    the ambient space (the polytope is then relative to that support);
    otherwise a lower-dimensional input is a degeneracy error.
    """
    pts = []
    for p in points:
        v = vector(p)
        if v not in pts:
            pts.append(v)
    if len(pts) < 2:
        raise DegenerateGeometryError("need at least 2 distinct points")
    ambient = len(pts[0])
    p0 = min(pts)
    diffs = [sub(p, p0) for p in pts if p != p0]
    basis = orthogonalize(diffs)
    d = len(basis)
    if d == 0:
        raise DegenerateGeometryError("all points coincide")
    if d < ambient and not allow_subspace:
        raise DegenerateGeometryError(
            f"points affinely span a {d}-dimensional subspace of R^{ambient}"
            + (" (collinear)" if d == 1 else "")
        )
    if len(pts) < d + 1:
        raise DegenerateGeometryError("too few points for the affine rank")
    return _build_polytope(pts, p0, basis)


def _halfspaces_to_le_form(halfspaces: Iterable) -> list[tuple[Vector, Q]]:
    out = []
    for h in halfspaces:
        if isinstance(h, AffineHyperplane):
            raise GeometryError("half-space needs a side; got a bare hyperplane")
        if len(h) == 3:
            n, c, sense = h
        else:
            n, c = h
            sense = "le"
        n = vector(n)
        c = rational(c)
        if is_zero(n):
            raise GeometryError("zero normal in half-space")
        if sense == "ge":
            n, c = neg(n), -c
        elif sense != "le":
            raise GeometryError(f"unknown sense {sense!r}")
        out.append((n, c))
    return out


def polytope_from_halfspaces(
    halfspaces: Iterable,
    ambient_dim: int | None = None,
    *,
    support: tuple[Vector, Sequence[Vector]] | None = None,
) -> Polytope:
    """Bounded polytope from half-spaces ``(normal, offset[, sense])``.

    ``sense`` is 'le' (default) or 'ge'.  Unbounded or empty regions raise a
    degeneracy error naming the failing certificate.  ``support`` restricts
    the region to an affine subspace (point, direction basis); normals must
    be parallel to the support directions.
    """
    hs = _halfspaces_to_le_form(halfspaces)
    if not hs:
        raise DegenerateGeometryError("no half-spaces")
    n_amb = len(hs[0][0])
    if ambient_dim is not None and ambient_dim != n_amb:
        raise GeometryError("ambient dimension mismatch")
    if support is None:
        p0 = zero_vector(n_amb)
        basis = [
            tuple(Q(1) if i == j else Q(0) for j in range(n_amb)) for i in range(n_amb)
        ]
    else:
        p0 = vector(support[0])
        basis = [vector(b) for b in support[1]]
    d = len(basis)
    # constraints in support coordinates
    cons = []
    for n, c in hs:
        nc = tuple(dot(n, b) for b in basis)
        cons.append((nc, c - dot(n, p0)))

    verts_c = set()
    for subset in itertools.combinations(range(len(cons)), d):
        a = tuple(cons[i][0] for i in subset)
        b = tuple(cons[i][1] for i in subset)
        x = solve_square(a, b)
        if x is None:
            continue
        if all(dot(nc, x) <= cc for nc, cc in cons):
            verts_c.add(x)
    if not verts_c:
        raise DegenerateGeometryError("region has no vertices (empty or unbounded)")
    verts = []
    for c in sorted(verts_c):
        x = p0
        for ci, bi in zip(c, basis):
            x = add(x, scale(ci, bi))
        verts.append(x)

    p_base = min(verts)
    span = orthogonalize([sub(v, p_base) for v in verts if v != p_base])
    if len(span) < d:
        raise DegenerateGeometryError(
            f"region is lower-dimensional: vertices span {len(span)} < {d}"
        )
    poly = _build_polytope(verts, p_base, span)
    # every derived facet must be one of the input constraint planes, else
    # the region was unbounded and vertices alone under-describe it
    input_keys = set()
    for n, c in hs:
        prim = primitive_oriented(n)
        s = parallel_factor(n, prim)
        input_keys.add((prim, c / s))
    for n, c in poly.halfspaces:
        if (n, c) not in input_keys:
            raise DegenerateGeometryError(
                f"region is unbounded: hull facet (normal={n}, offset={c}) "
                "is not among the input half-spaces"
            )
    for n, c in hs:
        for v in poly.vertices:
            if dot(n, v) > c:
                raise DegenerateGeometryError("internal inconsistency in vertex enumeration")
    return poly


def reflect_polytope(polytope: Polytope, plane: AffineHyperplane) -> Polytope:
    """Mirror image of the polytope; exact, support tracked through the map.

    A point y lies in the image iff reflect(y) lies in the original, which
    turns the constraint n.x <= c into n'.y <= c - 2*offset*(n.n0)/|n0|^2
    with n' the reflected normal.
    """
    verts = tuple(sorted(reflect(v, plane) for v in polytope.vertices))
    n0 = plane.normal
    nn = norm_sq(n0)
    halfspaces = []
    for n, c in polytope.halfspaces:
        n2 = reflect_direction(n, plane)
        c2 = c - 2 * plane.offset * dot(n, n0) / nn
        prim = primitive_oriented(n2)
        s = parallel_factor(n2, prim)
        halfspaces.append((prim, c2 / s))
    return Polytope(
        ambient_dim=polytope.ambient_dim,
        vertices=verts,
        halfspaces=tuple(sorted(halfspaces)),
        support_point=reflect(polytope.support_point, plane),
        support_basis=tuple(reflect_direction(b, plane) for b in polytope.support_basis),
    )


def translate_polytope(polytope: Polytope, t: Vector) -> Polytope:
    return Polytope(
        ambient_dim=polytope.ambient_dim,
        vertices=tuple(sorted(add(v, t) for v in polytope.vertices)),
        halfspaces=tuple(
            sorted((n, c + dot(n, t)) for n, c in polytope.halfspaces)
        ),
        support_point=add(polytope.support_point, t),
        support_basis=polytope.support_basis,
    )


def interiors_intersect(a: Polytope, b: Polytope) -> tuple[bool, Vector | None]:
    """Exact test whether two polytopes on the same support share interior points.

    Returns (result, witness interior point or None).
    """
    for v in b.vertices:
        if not a.in_support(v):
            raise GeometryError("polytopes live on different supports")
    d = a.dim
    basis = a.support_basis
    norms = [norm_sq(x) for x in basis]
    p0 = a.support_point

    cons = []
    for n, c in a.halfspaces + b.halfspaces:
        nc = tuple(dot(n, x) for x in basis)
        cons.append((nc, c - dot(n, p0)))
    verts = set()
    for subset in itertools.combinations(range(len(cons)), d):
        m = tuple(cons[i][0] for i in subset)
        rhs = tuple(cons[i][1] for i in subset)
        x = solve_square(m, rhs)
        if x is None:
            continue
        if all(dot(nc, x) <= cc for nc, cc in cons):
            verts.add(x)
    if len(verts) < d + 1:
        return False, None
    vlist = sorted(verts)
    base = vlist[0]
    if rank_of([sub(v, base) for v in vlist[1:]]) < d:
        return False, None
    bary = scale(Q(1, len(vlist)), _sum_vectors(vlist))
    witness = p0
    for ci, bi in zip(bary, basis):
        witness = add(witness, scale(ci, bi))
    return True, witness


def _sum_vectors(vs):
    acc = vs[0]
    for v in vs[1:]:
        acc = add(acc, v)
    return acc


def congruent(a: Polytope, b: Polytope) -> bool:
    """Exact congruence of vertex sets via squared-distance matching."""
    va, vb = a.vertices, b.vertices
    if len(va) != len(vb):
        return False
    m = len(va)
    da = [[distance_sq(va[i], va[j]) for j in range(m)] for i in range(m)]
    db = [[distance_sq(vb[i], vb[j]) for j in range(m)] for i in range(m)]
    if sorted(sorted(row) for row in da) != sorted(sorted(row) for row in db):
        return False

    used = [False] * m
    assign: list[int] = []

    def extend(i: int) -> bool:
        if i == m:
            return True
        for j in range(m):
            if used[j]:
                continue
            if all(da[i][k] == db[j][assign[k]] for k in range(i)):
                used[j] = True
                assign.append(j)
                if extend(i + 1):
                    return True
                assign.pop()
                used[j] = False
        return False

    return extend(0)


# ---------------------------------------------------------------------------
# axis-aligned regions (used by the tessellation module)

Region = tuple[Vector, Vector]


def region_from_polytope(polytope: Polytope, inflate: int = 3) -> Region:
    """Bounding box of the polytope inflated by ``inflate`` diameters per side."""
    lo, hi = polytope.bbox
    margin = inflate * sqrt_upper_bound(polytope.diameter_sq)
    return (
        tuple(c - margin for c in lo),
        tuple(c + margin for c in hi),
    )


def bbox_outside_region(polytope: Polytope, region: Region) -> bool:
    """True when the polytope's interior certainly misses the region."""
    lo, hi = region
    blo, bhi = polytope.bbox
    return any(bhi[i] <= lo[i] or blo[i] >= hi[i] for i in range(polytope.ambient_dim))
