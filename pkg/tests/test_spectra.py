import math
from fractions import Fraction as Q

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from alcove_lab.alcoves import fundamental_alcove
from alcove_lab.exact_geometry import dot, mat_vec, norm_sq, vector
from alcove_lab.root_systems import RootSystem, standard_root_system, weyl_group
from alcove_lab.spectra import (
    SpectrumEntry,
    coroot_lattice,
    eigenfunction,
    evaluate,
    lattice_points_in_ball,
    spectrum,
    spectrum_for_polytope,
    trig_sum_from_sines,
    verify_eigenpair,
    weight_lattice,
)

R1D = RootSystem.from_roots([(1,), (-1,)])
A1XA1 = standard_root_system("A1xA1")
B2 = standard_root_system("B2")
A2 = standard_root_system("A2")


# ---------------------------------------------------------------------------
# lattices


def test_coroot_lattice_of_one_dimensional_system():
    lat = coroot_lattice(R1D)
    assert lat.contains([2]) and not lat.contains([1])


def test_coroot_lattice_of_a1xa1_is_2z_squared():
    lat = coroot_lattice(A1XA1)
    assert lat.contains([2, 0]) and lat.contains([0, 2])
    assert not lat.contains([1, 0]) and not lat.contains([1, 1])


def test_coroot_lattice_of_b2_is_even_sum_lattice():
    lat = coroot_lattice(B2)
    assert lat.contains([1, 1]) and lat.contains([2, 0]) and lat.contains([1, -1])
    assert not lat.contains([1, 0]) and not lat.contains([0, 1])


def test_weight_lattice_duals():
    assert weight_lattice(R1D).contains([Q(1, 2)])
    assert not weight_lattice(R1D).contains([Q(1, 4)])
    wl = weight_lattice(A1XA1)
    assert wl.contains([Q(1, 2), Q(1, 2)]) and wl.contains([Q(1, 2), 0])
    wb = weight_lattice(B2)
    assert wb.contains([Q(1, 2), Q(1, 2)]) and wb.contains([1, 0])
    assert not wb.contains([Q(1, 2), 0])


# ---------------------------------------------------------------------------
# spectra (oracle: closed forms and brute-force enumeration)


def test_interval_spectrum_is_k_squared_pi_squared():
    entries = spectrum(R1D, count=20)
    assert [e.q_norm_sq for e in entries] == [Q(k * k, 4) for k in range(1, 21)]
    assert all(e.multiplicity == 1 for e in entries)
    assert abs(entries[0].eigenvalue - math.pi**2) < 1e-12


def brute_force_square_spectrum(nmax):
    table = {}
    for m in range(1, nmax):
        for n in range(1, nmax):
            table.setdefault(Q(m * m + n * n, 4), []).append((m, n))
    return table


def test_a1xa1_spectrum_matches_separated_variables():
    entries = spectrum(A1XA1, max_q_norm_sq=Q(50, 4))
    oracle = brute_force_square_spectrum(12)
    for e in entries:
        assert e.multiplicity == len(oracle[e.q_norm_sq])
    # multiplicity-3 entry from (1,7), (7,1), (5,5)
    e50 = next(e for e in entries if e.q_norm_sq == Q(50, 4))
    assert e50.multiplicity == 3


def test_b2_spectrum_first_five_match_closed_form():
    # closed form for the isosceles right triangle with legs L = 1/sqrt(2):
    # lambda = pi^2 (m^2 + n^2) / L^2 over m > n >= 1
    values = sorted(
        2 * (m * m + n * n) for m in range(1, 12) for n in range(1, m)
    )[:5]
    entries = spectrum(B2, count=5)
    assert [4 * e.q_norm_sq for e in entries] == [Q(v) for v in values]
    assert entries[0].weights == ((Q(3, 2), Q(1, 2)),)


def test_a2_spectrum_matches_equilateral_closed_form():
    # lambda = (8 pi^2 / 3)(a^2 + ab + b^2), a,b >= 1; q_norm_sq = (2/3)(...)
    brute = {}
    for a in range(1, 10):
        for b in range(1, 10):
            brute.setdefault(Q(2, 3) * (a * a + a * b + b * b), 0)
            brute[Q(2, 3) * (a * a + a * b + b * b)] += 1
    entries = spectrum(A2, count=5)
    for e in entries:
        assert brute[e.q_norm_sq] == e.multiplicity


def test_completeness_against_box_enumeration():
    # independent brute force: integer combinations of the dual basis in a box
    lat = weight_lattice(B2)
    bound = Q(15)
    found = {
        (tuple(x), nsq) for x, nsq in lattice_points_in_ball(lat, bound)
    }
    ginv_diag = []
    from alcove_lab.exact_geometry import invert_matrix

    ginv = invert_matrix(lat.gram)
    box = []
    import itertools

    limits = [math.isqrt(int(bound * ginv[i][i])) + 1 for i in range(lat.rank)]
    for coeffs in itertools.product(*(range(-l, l + 1) for l in limits)):
        x = tuple(
            sum(Q(c) * b[i] for c, b in zip(coeffs, lat.basis)) for i in range(2)
        )
        nsq = norm_sq(x)
        if nsq <= bound:
            box.append((x, nsq))
    assert found == set(box)


def test_spectrum_product_law_for_reducible_systems():
    # A1 x A1 spectrum = pairwise sums of two interval spectra with
    # convolution multiplicities
    one = spectrum(RootSystem.from_roots([(1,), (-1,)]), count=12)
    pairs = {}
    for e1 in one:
        for e2 in one:
            key = e1.q_norm_sq + e2.q_norm_sq
            pairs[key] = pairs.get(key, 0) + e1.multiplicity * e2.multiplicity
    product = spectrum(A1XA1, max_q_norm_sq=Q(20))
    for e in product:
        assert pairs[e.q_norm_sq] == e.multiplicity


def test_entries_merge_only_on_exact_equality():
    entries = spectrum(A1XA1, max_q_norm_sq=Q(65, 4))
    seen = [e.q_norm_sq for e in entries]
    assert len(seen) == len(set(seen))
    assert seen == sorted(seen)


def test_spectrum_lambda_max_cutoff():
    entries = spectrum(R1D, lambda_max=5 * math.pi**2)
    assert [e.q_norm_sq for e in entries] == [Q(1, 4), Q(1)]


# ---------------------------------------------------------------------------
# eigenfunctions


def test_interval_eigenfunction_is_sine():
    u = eigenfunction(R1D, [Q(1, 2)])
    xs = np.linspace(0, 1, 13)
    expected = 2j * np.sin(math.pi * xs)
    got = u.evaluate_many(xs[:, None])
    assert np.max(np.abs(got - expected)) < 1e-12


def test_square_eigenfunction_is_product_of_sines():
    u = eigenfunction(A1XA1, [Q(3, 2), Q(1, 2)])
    pts = np.random.default_rng(1).uniform(0, 1, (50, 2))
    got = u.evaluate_many(pts)
    want = -4 * np.sin(3 * math.pi * pts[:, 0]) * np.sin(math.pi * pts[:, 1])
    assert np.max(np.abs(got - want)) < 1e-12


def test_eigenfunction_rejects_wall_weights():
    with pytest.raises(Exception, match="wall"):
        eigenfunction(A1XA1, [Q(1, 2), 0])
    with pytest.raises(Exception, match="weight lattice"):
        eigenfunction(A1XA1, [Q(1, 3), Q(1, 2)])


def test_weyl_antisymmetry_on_term_list():
    group = weyl_group(B2)
    u = eigenfunction(B2, [Q(3, 2), Q(1, 2)], group=group)
    table = {t.wavevector: t.coefficient for t in u.terms}
    for g in group.generators:
        for wavevector, coeff in table.items():
            image = mat_vec(g, wavevector)
            assert table[image] == -coeff


def test_equal_norm_condition_is_exact():
    u = eigenfunction(B2, [Q(5, 2), Q(1, 2)])
    assert len(u.terms) == 8
    for t in u.terms:
        assert norm_sq(t.wavevector) == u.q_norm_sq


def test_evaluate_boundary_and_extremum():
    u = eigenfunction(A1XA1, [Q(1, 2), Q(1, 2)])
    assert abs(evaluate(u, [0.0, 0.3])) < 1e-13
    # |u| is maximal at the square center on a grid scan
    grid = np.linspace(0.05, 0.95, 19)
    pts = np.array([(x, y) for x in grid for y in grid])
    vals = np.abs(u.evaluate_many(pts))
    assert np.argmax(vals) == len(pts) // 2


def test_fig8_style_sum_evaluates_to_zero_at_origin():
    s = 1 / math.sqrt(2)
    u = trig_sum_from_sines(
        [(1.0, (1.0, 0.0), 0.0), (1.0, (0.0, 1.0), 0.0), (1.0, (s, s), 0.0)]
    )
    assert abs(evaluate(u, [0.0, 0.0])) < 1e-15
    assert abs(u.freq_norm_sq - 1.0) < 1e-12


def test_sine_sum_rejects_unequal_norms():
    with pytest.raises(Exception, match="norm"):
        trig_sum_from_sines([(1.0, (1.0, 0.0), 0.0), (1.0, (2.0, 0.0), 0.0)])


# ---------------------------------------------------------------------------
# verification reports


@pytest.mark.parametrize("family", ["A1xA1", "B2", "A2", "G2"])
def test_first_eigenpair_verifies(family):
    system = standard_root_system(family)
    q = spectrum(system, count=1)[0].weights[0]
    u = eigenfunction(system, q)
    alcove = fundamental_alcove(system)
    report = verify_eigenpair(u, alcove.polytope, samples=400, h=2e-3, seed=3)
    assert report.boundary_max < 1e-9
    assert report.antisymmetry_max < 1e-9
    assert report.sign_constant
    # O(h^2) residual: coarse bound at this h
    assert report.residual_max < u.freq_norm_sq**2 * (2e-3) ** 2


def test_interval_eigenpair_verifies():
    u = eigenfunction(R1D, [Q(1, 2)])
    alcove = fundamental_alcove(R1D)
    report = verify_eigenpair(u, alcove.polytope, samples=100, h=1e-3, seed=0)
    assert report.boundary_max < 1e-12
    assert report.sign_constant


def test_higher_mode_is_not_sign_constant():
    u = eigenfunction(R1D, [Q(1)])  # second mode: sin(2 pi x)
    alcove = fundamental_alcove(R1D)
    report = verify_eigenpair(u, alcove.polytope, samples=100, h=1e-3, seed=0)
    assert not report.sign_constant
    assert report.boundary_max < 1e-12


def test_verification_is_seed_deterministic():
    u = eigenfunction(B2, [Q(3, 2), Q(1, 2)])
    alcove = fundamental_alcove(B2)
    a = verify_eigenpair(u, alcove.polytope, samples=200, h=1e-3, seed=7)
    b = verify_eigenpair(u, alcove.polytope, samples=200, h=1e-3, seed=7)
    assert a == b


def test_spectrum_for_polytope_congruent_copy():
    tri = fundamental_alcove(B2).polytope
    entries = spectrum_for_polytope(tri, count=3)
    direct = spectrum(B2, count=3)
    assert [e.q_norm_sq for e in entries] == [e.q_norm_sq for e in direct]


@given(k=st.integers(1, 12))
def test_interval_modes_vanish_at_both_endpoints(k):
    u = eigenfunction(R1D, [Q(k, 2)])
    assert abs(u.evaluate([0.0])) < 1e-12
    assert abs(u.evaluate([1.0])) < 1e-11
