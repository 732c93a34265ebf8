from fractions import Fraction as Q

import pytest
from hypothesis import given
from hypothesis import strategies as st

from alcove_lab.exact_geometry import (
    BOUNDARY,
    INTERIOR,
    OUTSIDE,
    AffineHyperplane,
    DegenerateGeometryError,
    GeometryError,
    congruent,
    contains,
    distance_sq,
    dot,
    dual_lattice,
    interiors_intersect,
    lattice_from_generators,
    polytope_from_halfspaces,
    polytope_from_vertices,
    rational,
    reflect,
    reflect_polytope,
    translate_polytope,
    vector,
)

rationals = st.fractions(min_value=-5, max_value=5, max_denominator=8)


def vec2(x, y):
    return vector([x, y])


# ---------------------------------------------------------------------------
# reflections


def test_reflect_coordinate_axis():
    h = AffineHyperplane(vec2(1, 0), Q(0))
    assert reflect(vec2(1, 0), h) == vec2(-1, 0)


def test_reflect_fixes_points_on_plane():
    h = AffineHyperplane(vec2(1, 1), Q(1))
    x = vec2(Q(1, 2), Q(1, 2))
    assert reflect(x, h) == x


def test_reflect_affine_example():
    # direct substitution into x - 2(v.x - c)/|v|^2 v
    h = AffineHyperplane(vec2(1, 1), Q(1))
    assert reflect(vec2(Q(3, 2), Q(1, 2)), h) == vec2(Q(1, 2), Q(-1, 2))


def test_zero_normal_rejected():
    with pytest.raises(GeometryError):
        AffineHyperplane(vec2(0, 0), Q(1))


@given(
    x=st.tuples(rationals, rationals, rationals),
    n=st.tuples(rationals, rationals, rationals),
    c=rationals,
)
def test_reflect_is_an_involution(x, n, c):
    if all(v == 0 for v in n):
        return
    h = AffineHyperplane(vector(n), c)
    x = vector(x)
    assert reflect(reflect(x, h), h) == x


@given(
    x=st.tuples(rationals, rationals),
    y=st.tuples(rationals, rationals),
    n=st.tuples(rationals, rationals),
    c=rationals,
)
def test_reflect_preserves_squared_distances(x, y, n, c):
    if all(v == 0 for v in n):
        return
    h = AffineHyperplane(vector(n), c)
    x, y = vector(x), vector(y)
    assert distance_sq(reflect(x, h), reflect(y, h)) == distance_sq(x, y)


def test_floats_are_refused():
    with pytest.raises(GeometryError):
        rational(0.5)


# ---------------------------------------------------------------------------
# lattices


def test_dual_lattice_1d_scaling():
    lat = lattice_from_generators([[2]])
    assert dual_lattice(lat).basis == ((Q(1, 2),),)


def test_dual_lattice_diagonal():
    lat = lattice_from_generators([[2, 0], [0, 2]])
    dual = dual_lattice(lat)
    assert dual.contains([Q(1, 2), 0]) and dual.contains([0, Q(1, 2)])
    assert not dual.contains([Q(1, 4), 0])


def test_dual_of_even_sum_lattice():
    # {(a,b) in Z^2 : a+b even} has dual {(m/2, n/2) : m = n mod 2};
    # checked by the defining pairing on generators, both directions
    lat = lattice_from_generators([[2, 0], [0, 2], [1, 1]])
    dual = dual_lattice(lat)
    assert dual.contains([Q(1, 2), Q(1, 2)])
    assert dual.contains([Q(1, 2), Q(-1, 2)])
    assert dual.contains([1, 0])
    assert not dual.contains([Q(1, 2), 0])
    for d in dual.basis:
        for g in lat.basis:
            assert dot(d, g).denominator == 1


def test_dependent_generators_reduce_to_a_basis():
    lat = lattice_from_generators([[1, 1], [2, 2]])
    assert lat.rank == 1 and lat.contains([3, 3])


def test_rank_deficient_basis_rejected():
    from alcove_lab.exact_geometry import LatticeBasis

    with pytest.raises(DegenerateGeometryError):
        LatticeBasis(basis=(vector([1, 1]), vector([2, 2])), ambient_dim=2)


@given(
    gens=st.lists(
        st.tuples(st.integers(-4, 4), st.integers(-4, 4)), min_size=2, max_size=4
    )
)
def test_dual_dual_restores_membership(gens):
    from alcove_lab.exact_geometry import rank_of

    vecs = [vector(g) for g in gens]
    if rank_of(vecs) < 2:
        return
    lat = lattice_from_generators(vecs)
    ddual = dual_lattice(dual_lattice(lat))
    for g in lat.basis:
        assert ddual.contains(g)
    for g in ddual.basis:
        assert lat.contains(g)


# ---------------------------------------------------------------------------
# polytopes


def test_triangle_from_vertices():
    tri = polytope_from_vertices([[0, 0], [1, 0], [0, 1]])
    assert len(tri.halfspaces) == 3
    assert contains(tri, [Q(1, 4), Q(1, 4)]) == INTERIOR
    assert contains(tri, [0, Q(1, 2)]) == BOUNDARY
    assert contains(tri, [1, 1]) == OUTSIDE


def test_collinear_points_are_degenerate():
    with pytest.raises(DegenerateGeometryError, match="collinear"):
        polytope_from_vertices([[0, 0], [1, 0], [2, 0]])


def test_non_extreme_point_rejected():
    with pytest.raises(DegenerateGeometryError, match="extreme"):
        polytope_from_vertices([[0, 0], [1, 0], [0, 1], [Q(1, 4), Q(1, 4)]])


def test_unit_square_from_halfspaces():
    sq = polytope_from_halfspaces(
        [
            ([1, 0], 1, "le"),
            ([1, 0], 0, "ge"),
            ([0, 1], 1, "le"),
            ([0, 1], 0, "ge"),
        ]
    )
    assert sq.vertices == (
        vec2(0, 0),
        vec2(0, 1),
        vec2(1, 0),
        vec2(1, 1),
    )


def test_unbounded_halfspaces_are_degenerate():
    # unbounded along (1,1) even though three vertices exist
    with pytest.raises(DegenerateGeometryError):
        polytope_from_halfspaces(
            [([1, 0], 0, "ge"), ([0, 1], 0, "ge"), ([1, -1], 1), ([-1, 1], 1)]
        )
    # a slab has no vertices at all
    with pytest.raises(DegenerateGeometryError):
        polytope_from_halfspaces([([1, 0], 1), ([1, 0], 0, "ge")])


def test_vertices_lie_on_their_facets_and_barycenter_interior():
    tri = polytope_from_vertices([[0, 0], [3, 0], [0, 2]])
    for v in tri.vertices:
        tight = sum(1 for n, c in tri.halfspaces if dot(n, v) == c)
        assert tight >= tri.dim
    assert contains(tri, tri.barycenter) == INTERIOR


def test_subspace_polytope_roundtrip():
    tri = polytope_from_vertices(
        [[0, 0, 0], [Q(1, 3), Q(1, 3), Q(-2, 3)], [Q(2, 3), Q(-1, 3), Q(-1, 3)]],
        allow_subspace=True,
    )
    assert tri.dim == 2 and tri.ambient_dim == 3
    assert contains(tri, tri.barycenter) == INTERIOR
    assert contains(tri, [1, 1, 1]) == OUTSIDE  # off the support plane


def test_reflect_polytope_is_congruent():
    tri = polytope_from_vertices([[0, 0], [1, 0], [0, 1]])
    mirror = reflect_polytope(tri, AffineHyperplane(vec2(1, 0), Q(0)))
    assert congruent(tri, mirror)
    assert mirror.vertices == (vec2(-1, 0), vec2(0, 0), vec2(0, 1))


def test_interiors_intersect_and_translate():
    sq = polytope_from_vertices([[0, 0], [1, 0], [0, 1], [1, 1]])
    shifted = translate_polytope(sq, vec2(Q(1, 2), 0))
    hit, witness = interiors_intersect(sq, shifted)
    assert hit and contains(sq, witness) == INTERIOR
    disjoint = translate_polytope(sq, vec2(1, 0))
    hit, _ = interiors_intersect(sq, disjoint)
    assert not hit


def test_congruent_rejects_different_shapes():
    a = polytope_from_vertices([[0, 0], [1, 0], [0, 1]])
    b = polytope_from_vertices([[0, 0], [2, 0], [0, 1]])
    assert not congruent(a, b)
