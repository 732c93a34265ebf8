"""Strict tessellation by reflection: closures, verdicts, reconstruction.

Strictness follows the two-part definition: the reflected copies must have
pairwise disjoint interiors, and no face-supporting hyperplane of any copy
may cut the interior of any copy.  The verdict engine only runs the
plane-cut test; that is complete, because two distinct overlapping convex
copies of equal volume always force a facet plane of one through the
interior of the other.  Overlap certificates remain available through
``interiors_intersect`` for callers that want the pair itself.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable

from .exact_geometry import (
    AffineHyperplane,
    DegenerateGeometryError,
    GeometryError,
    Polytope,
    Q,
    Region,
    Vector,
    bbox_outside_region,
    dot,
    interiors_intersect,
    neg,
    parallel_factor,
    primitive_direction,
    reflect,
    reflect_polytope,
    region_from_polytope,
    scale,
    sub,
    vector,
)
from .root_systems import InvalidRootSystemError, RootSystem

STRICT = "strict"
NOT_STRICT = "not_strict"
INCONCLUSIVE = "inconclusive"

PlaneKey = tuple[Vector, Q]


class NotStrictError(GeometryError):
    """An operation requiring a strictly tessellating polytope got one that is not."""


@dataclass(frozen=True)
class TessellationCopy:
    polytope: Polytope
    word: tuple[PlaneKey, ...]


@dataclass(frozen=True)
class ReflectionClosure:
    seed: Polytope
    copies: tuple[TessellationCopy, ...]
    region: Region
    plane_set: frozenset[PlaneKey]
    complete: bool
    max_copies: int


@dataclass(frozen=True)
class PlaneCutCertificate:
    """A face-supporting plane that passes through a copy's interior."""

    normal: Vector
    offset: Q
    copy_vertices: tuple[Vector, ...]
    witness: Vector


@dataclass(frozen=True)
class OverlapCertificate:
    """Two closure copies whose interiors share the witness point."""

    vertices_a: tuple[Vector, ...]
    vertices_b: tuple[Vector, ...]
    witness: Vector


@dataclass(frozen=True)
class CapInfo:
    max_copies: int
    copies_seen: int


@dataclass(frozen=True)
class StrictnessVerdict:
    verdict: str
    certificate: PlaneCutCertificate | OverlapCertificate | CapInfo | None
    closure: ReflectionClosure


def plane_key(normal: Vector, offset: Q) -> PlaneKey:
    prim = primitive_direction(normal)
    return (prim, offset / parallel_factor(normal, prim))


def _plane_cuts_copy(key: PlaneKey, poly: Polytope) -> bool:
    n, c = key
    lo = hi = None
    for v in poly.vertices:
        t = dot(n, v)
        lo = t if lo is None or t < lo else lo
        hi = t if hi is None or t > hi else hi
    return lo < c < hi


def _cut_witness(key: PlaneKey, poly: Polytope) -> Vector:
    """An interior point of the copy lying exactly on the cutting plane."""
    n, c = key
    b = poly.barycenter
    vb = dot(n, b)
    if vb == c:
        return b
    target = max if vb < c else min
    v = target(poly.vertices, key=lambda p: dot(n, p))
    t = (c - vb) / (dot(n, v) - vb)
    return tuple(bi + t * (vi - bi) for bi, vi in zip(b, v))


class _CutDetector:
    """Incremental plane-vs-interior checks over a growing closure.

    Per copy and per plane direction the (min, max) of the linear form over
    the vertices is cached, so each (plane, copy) test is a bisect into the
    sorted offsets of that direction.
    """

    def __init__(self):
        self.dir_index: dict[Vector, int] = {}
        self.dir_list: list[Vector] = []
        self.offsets: list[list[Q]] = []  # per direction, sorted
        self.intervals: list[list[tuple[Q, Q] | None]] = []  # per copy, per dir
        self.copies: list[TessellationCopy] = []

    def _interval(self, copy_idx: int, d_idx: int) -> tuple[Q, Q]:
        cache = self.intervals[copy_idx]
        while len(cache) <= d_idx:
            cache.append(None)
        if cache[d_idx] is None:
            direction = self.dir_list[d_idx]
            vals = [dot(direction, v) for v in self.copies[copy_idx].polytope.vertices]
            cache[d_idx] = (min(vals), max(vals))
        return cache[d_idx]

    def add_copy(self, rec: TessellationCopy) -> PlaneCutCertificate | None:
        import bisect

        self.copies.append(rec)
        self.intervals.append([])
        me = len(self.copies) - 1
        new_planes: list[tuple[int, Q]] = []
        for n, c in rec.polytope.halfspaces:
            key = plane_key(n, c)
            d_idx = self.dir_index.setdefault(key[0], len(self.dir_index))
            if d_idx == len(self.offsets):
                self.offsets.append([])
                self.dir_list.append(key[0])
            row = self.offsets[d_idx]
            pos = bisect.bisect_left(row, key[1])
            if pos == len(row) or row[pos] != key[1]:
                row.insert(pos, key[1])
                new_planes.append((d_idx, key[1]))
        # existing planes against the new copy
        for d_idx, direction in enumerate(self.dir_list):
            lo, hi = self._interval(me, d_idx)
            row = self.offsets[d_idx]
            pos = bisect.bisect_right(row, lo)
            if pos < len(row) and row[pos] < hi:
                return PlaneCutCertificate(
                    normal=direction,
                    offset=row[pos],
                    copy_vertices=rec.polytope.vertices,
                    witness=_cut_witness((direction, row[pos]), rec.polytope),
                )
        # new planes against the existing copies
        for d_idx, c in new_planes:
            direction = self.dir_list[d_idx]
            for k in range(me):
                lo, hi = self._interval(k, d_idx)
                if lo < c < hi:
                    poly = self.copies[k].polytope
                    return PlaneCutCertificate(
                        normal=direction,
                        offset=c,
                        copy_vertices=poly.vertices,
                        witness=_cut_witness((direction, c), poly),
                    )
        return None

    def plane_set(self) -> set[PlaneKey]:
        out = set()
        for d_idx, direction in enumerate(self.dir_list):
            for c in self.offsets[d_idx]:
                out.add((direction, c))
        return out


def _closure(
    seed: Polytope,
    region: Region,
    max_copies: int,
    detect_cuts: bool,
) -> tuple[list[TessellationCopy], set[PlaneKey], bool, PlaneCutCertificate | None]:
    seen = {seed.canonical_key()}
    copies = [TessellationCopy(seed, ())]
    plane_set: set[PlaneKey] = set()
    detector = _CutDetector() if detect_cuts else None

    def register(rec: TessellationCopy) -> PlaneCutCertificate | None:
        if detector is not None:
            return detector.add_copy(rec)
        for n, c in rec.polytope.halfspaces:
            plane_set.add(plane_key(n, c))
        return None

    certificate = register(copies[0])
    complete = True
    lo, hi = region
    dim = seed.ambient_dim
    frontier = [copies[0]]
    while frontier and certificate is None:
        next_frontier = []
        for copy in frontier:
            for n, c in copy.polytope.halfspaces:
                plane = AffineHyperplane(n, c)
                # reflect the vertices first: dedup and prune before paying
                # for the full half-space image
                verts = tuple(sorted(reflect(v, plane) for v in copy.polytope.vertices))
                if verts in seen:
                    continue
                seen.add(verts)
                if any(
                    max(v[i] for v in verts) <= lo[i]
                    or min(v[i] for v in verts) >= hi[i]
                    for i in range(dim)
                ):
                    continue
                mirrored = reflect_polytope(copy.polytope, plane)
                rec = TessellationCopy(mirrored, copy.word + (plane_key(n, c),))
                copies.append(rec)
                next_frontier.append(rec)
                certificate = register(rec)
                if certificate is not None:
                    break
                if len(copies) >= max_copies:
                    complete = False
                    break
            if certificate is not None or not complete:
                break
        if not complete:
            break
        frontier = next_frontier
    if detector is not None:
        plane_set = detector.plane_set()
    return copies, plane_set, complete, certificate


def reflection_closure(
    polytope: Polytope,
    region: Region | None = None,
    max_copies: int = 20000,
) -> ReflectionClosure:
    """Breadth-first reflection closure of the polytope inside the region.

    Copies are deduplicated by exact vertex equality and pruned once their
    bounding box leaves the region.  ``complete`` is False when the copy
    cap was reached first.
    """
    if max_copies < 1:
        raise GeometryError("max_copies must be >= 1")
    region = region or region_from_polytope(polytope)
    copies, plane_set, complete, _ = _closure(polytope, region, max_copies, False)
    return ReflectionClosure(
        seed=polytope,
        copies=tuple(copies),
        region=region,
        plane_set=frozenset(plane_set),
        complete=complete,
        max_copies=max_copies,
    )


def is_strict_tessellation(
    polytope: Polytope,
    region: Region | None = None,
    max_copies: int = 20000,
) -> StrictnessVerdict:
    """Decide strictness on the reflection closure within the region.

    ``strict`` means the closure exhausted the region with no violation;
    ``not_strict`` carries an exact certificate; ``inconclusive`` means the
    copy cap was reached first (the definition quantifies over all of
    space, which no finite run can decide in general).
    """
    region = region or region_from_polytope(polytope)
    copies, plane_set, complete, certificate = _closure(
        polytope, region, max_copies, True
    )
    closure = ReflectionClosure(
        seed=polytope,
        copies=tuple(copies),
        region=region,
        plane_set=frozenset(plane_set),
        complete=complete,
        max_copies=max_copies,
    )
    if certificate is not None:
        return StrictnessVerdict(NOT_STRICT, certificate, closure)
    if not complete:
        return StrictnessVerdict(
            INCONCLUSIVE, CapInfo(max_copies=max_copies, copies_seen=len(copies)), closure
        )
    return StrictnessVerdict(STRICT, None, closure)


def find_overlapping_pair(
    closure: ReflectionClosure,
) -> OverlapCertificate | None:
    """Search the closure for two copies with intersecting interiors."""
    copies = closure.copies
    for i in range(len(copies)):
        for j in range(i + 1, len(copies)):
            a, b = copies[i].polytope, copies[j].polytope
            if bbox_outside_region(a, b.bbox):
                continue
            hit, witness = interiors_intersect(a, b)
            if hit:
                return OverlapCertificate(a.vertices, b.vertices, witness)
    return None


def revalidate_certificate(cert) -> bool:
    """Re-check a not_strict certificate from its raw data, independently."""
    from .exact_geometry import polytope_from_vertices, contains, INTERIOR

    if isinstance(cert, PlaneCutCertificate):
        poly = polytope_from_vertices(cert.copy_vertices, allow_subspace=True)
        if not _plane_cuts_copy((cert.normal, cert.offset), poly):
            return False
        on_plane = dot(cert.normal, cert.witness) == cert.offset
        return on_plane and contains(poly, cert.witness) == INTERIOR
    if isinstance(cert, OverlapCertificate):
        a = polytope_from_vertices(cert.vertices_a, allow_subspace=True)
        b = polytope_from_vertices(cert.vertices_b, allow_subspace=True)
        hit, _ = interiors_intersect(a, b)
        return (
            hit
            and contains(a, cert.witness) == INTERIOR
            and contains(b, cert.witness) == INTERIOR
        )
    return False


# ---------------------------------------------------------------------------
# root system reconstruction (constructive half of "strictly tessellating
# polytopes are alcoves")


def root_system_from_tessellation(polytope: Polytope) -> RootSystem:
    """Rebuild the root system whose alcove the strictly tessellating input is.

    Normal directions are collected from the planes through each vertex
    after translating that vertex to the origin; lengths come from the
    spacing rule |v| = 1 / |y_v| with y_v the offset of the nearest
    parallel plane.
    """
    verdict = is_strict_tessellation(
        polytope, region_from_polytope(polytope, inflate=1), max_copies=20000
    )
    if verdict.verdict == NOT_STRICT:
        raise NotStrictError(
            f"polytope does not strictly tessellate: {verdict.certificate}"
        )
    if verdict.verdict == INCONCLUSIVE:
        raise GeometryError(
            "could not confirm strictness in the local region; refusing to reconstruct"
        )

    roots = None
    for inflate in (2, 3, 4):
        roots = _roots_from_local_tessellation(polytope, inflate)
        if roots is not None:
            break
    if roots is None:
        raise GeometryError(
            "no parallel plane found for some vertex direction; region escalation exhausted"
        )
    try:
        return RootSystem.from_roots(roots, validate=True)
    except InvalidRootSystemError as err:
        raise NotStrictError(
            "reconstructed normal set is not a root system; the input cannot "
            f"strictly tessellate ({err})"
        ) from err


def _roots_from_local_tessellation(polytope: Polytope, inflate: int) -> set[Vector] | None:
    """Roots from the planes through each vertex of one local closure.

    Translating a vertex to the origin only shifts every offset by n.w, so
    a single closure around the polytope serves all vertices: for vertex w
    the planes through it are those with c = n.w, and |y_v| is the distance
    to the nearest parallel plane on either side.
    """
    region = region_from_polytope(polytope, inflate=inflate)
    copies, plane_set, complete, _ = _closure(polytope, region, 100000, False)
    if not complete:
        return None
    by_direction: dict[Vector, list[Q]] = {}
    for n, c in plane_set:
        by_direction.setdefault(n, []).append(c)
    roots: set[Vector] = set()
    for w in polytope.vertices:
        for n, offsets in by_direction.items():
            val = dot(n, w)
            if val not in offsets:
                continue  # no plane of this direction passes through w
            nonzero = [abs(c - val) for c in offsets if c != val]
            if not nonzero:
                return None  # region too small to see the parallel plane
            m = min(nonzero)
            v = scale(1 / m, n)
            roots.add(v)
            roots.add(neg(v))
    if not roots:
        return None
    return roots


# ---------------------------------------------------------------------------
# arrangement comparison helpers (round-trip checks)


def arrangement_plane_keys_in_box(
    system: RootSystem, lo: Vector, hi: Vector
) -> frozenset[PlaneKey]:
    """Canonical keys of all H_{v,k} meeting the axis box [lo, hi]."""
    keys = set()
    for v in system.positive_roots:
        mn = sum(min(v[i] * lo[i], v[i] * hi[i]) for i in range(len(v)))
        mx = sum(max(v[i] * lo[i], v[i] * hi[i]) for i in range(len(v)))
        for k in range(math.ceil(mn), math.floor(mx) + 1):
            keys.add(plane_key(v, Q(k)))
    return frozenset(keys)


def closure_plane_keys_in_box(
    closure: ReflectionClosure, lo: Vector, hi: Vector
) -> frozenset[PlaneKey]:
    keys = set()
    for n, c in closure.plane_set:
        mn = sum(min(n[i] * lo[i], n[i] * hi[i]) for i in range(len(n)))
        mx = sum(max(n[i] * lo[i], n[i] * hi[i]) for i in range(len(n)))
        if mn <= c <= mx:
            keys.add((n, c))
    return frozenset(keys)
