"""Affine hyperplane arrangements of root systems and their alcoves.

The arrangement consists of the planes H_{v,k} = {x : v.x = k} for roots v
and integers k.  An alcove is a connected component of the complement; for
a point x on no plane, that component is exactly the open slab intersection
{y : floor(v.x) < v.y < floor(v.x)+1 over positive roots v}, which is how
alcoves are extracted here (no arrangement decomposition).
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterator

from .exact_geometry import (
    GeometryError,
    Polytope,
    Q,
    Vector,
    dot,
    neg,
    norm_sq,
    parallel_factor,
    polytope_from_halfspaces,
    primitive_direction,
    scale,
    vector,
    zero_vector,
)
from .root_systems import Chamber, RootSystem, dominant_chamber


class OnWallError(GeometryError):
    """The query point lies on an arrangement plane H_{v,k}."""

    def __init__(self, root: Vector, k: int):
        self.root = root
        self.k = k
        super().__init__(f"point lies on the wall H_(v,k) with v={root}, k={k}")


@dataclass(frozen=True)
class Alcove:
    """A single alcove: its polytope, bounding walls, and home chamber."""

    polytope: Polytope
    walls: tuple[tuple[Vector, int], ...]
    root_system: RootSystem
    chamber: Chamber | None = None


def arrangement_planes(
    system: RootSystem, lo: Vector, hi: Vector
) -> Iterator[tuple[Vector, int]]:
    """All (v, k) with H_{v,k} meeting the axis box [lo, hi], v positive."""
    corners_cache: dict[Vector, tuple[Q, Q]] = {}
    for v in system.positive_roots:
        mn = sum(min(v[i] * lo[i], v[i] * hi[i]) for i in range(len(v)))
        mx = sum(max(v[i] * lo[i], v[i] * hi[i]) for i in range(len(v)))
        for k in range(math.ceil(mn), math.floor(mx) + 1):
            yield (v, k)


def alcove_at(system: RootSystem, x) -> Alcove:
    """The alcove containing x; errors if x sits on an arrangement plane."""
    x = vector(x)
    if len(x) != system.ambient_dim:
        raise GeometryError("dimension mismatch")
    if not system.in_support(x):
        raise GeometryError(
            "point is outside the support of the root system; alcoves of a "
            "subspace-supported system live inside the support"
        )
    halfspaces = []
    wall_of = {}
    for v in system.positive_roots:
        t = dot(v, x)
        if t.denominator == 1:
            raise OnWallError(v, int(t))
        k = math.floor(t)
        halfspaces.append((v, Q(k + 1)))
        halfspaces.append((neg(v), Q(-k)))
        wall_of[_plane_key(v, Q(k + 1))] = (v, k + 1)
        wall_of[_plane_key(neg(v), Q(-k))] = (v, k)

    zero = zero_vector(system.ambient_dim)
    poly = polytope_from_halfspaces(
        halfspaces,
        system.ambient_dim,
        support=(zero, system.support_basis),
    )
    walls = []
    for n, c in poly.halfspaces:
        key = _plane_key(n, c)
        if key not in wall_of:
            raise GeometryError("facet does not match any arrangement plane")
        walls.append(wall_of[key])
    chamber = None
    if all(dot(v, x) > 0 for v in system.positive_roots):
        chamber = dominant_chamber(system)
    return Alcove(
        polytope=poly,
        walls=tuple(sorted(walls)),
        root_system=system,
        chamber=chamber,
    )


def _plane_key(n: Vector, c: Q) -> tuple[Vector, Q]:
    prim = primitive_direction(n)
    s = parallel_factor(n, prim)
    return (prim, c / s)


def fundamental_alcove(system: RootSystem) -> Alcove:
    """The alcove in the dominant chamber whose closure contains the origin.

    A simplex for irreducible systems, a box/prism product for reducible
    ones.  The seed point is the dominant-chamber barycenter pulled toward
    the origin until it clears every plane at level one.
    """
    x0 = system.dominant_point
    m = max(dot(v, x0) for v in system.positive_roots)
    seed = scale(Q(1, int(m) + 1), x0)
    return alcove_at(system, seed)
