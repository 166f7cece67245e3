import itertools
from fractions import Fraction

import numpy as np
import pytest

from kwgauge.errors import ValidationError
from kwgauge.groups import AbelianGroup, build_group
from kwgauge.homology import lattice_complex, rp2_six_vertex, sphere_boundary_simplex, torus3
from kwgauge.ising import Insertions
from kwgauge.surface import genus_surface, torus
from kwgauge.tqft import (GroupPresentation, HandlebodyData, count_bundles, count_homs,
                          em_duality_check, euler_sign, higher_partition, lens_presentation,
                          loop_operator_S1xY, pair_with_handlebody, parse_word, solid_torus,
                          sphere3_presentation, surface_presentation, torus_presentation)

from .oracles import commuting_pair_orbits, count_commuting_tuples, perm_compose, perm_inverse, s3_elements


def test_parse_word():
    assert parse_word("a b A B") == [1, 2, -1, -2]
    assert parse_word("x1 x3^-1") == [1, -3]
    with pytest.raises(ValidationError):
        GroupPresentation(1, [[2]])


def test_three_torus_counts(S3):
    assert count_bundles(torus_presentation(3), build_group("Z2")) == 4
    el = s3_elements()
    assert count_homs(torus_presentation(3), S3) == count_commuting_tuples(el, perm_compose, 3)
    assert count_bundles(torus_presentation(3), S3) == Fraction(48, 6)


def test_sphere_and_lens(S3):
    assert count_bundles(sphere3_presentation(), S3) == Fraction(1, 6)
    # homs from Z/p into Z/n: gcd(p, n) of them
    assert count_homs(lens_presentation(4), build_group("Z6")) == 2
    assert count_homs(lens_presentation(2), S3) == 4


@pytest.mark.parametrize("g", [1, 2])
@pytest.mark.parametrize("desc", ["Z2", "Z3"])
def test_surface_abelian_counts(g, desc):
    A = build_group(desc)
    assert count_bundles(surface_presentation(g), A) * A.order == A.order ** (2 * g)


def test_surface_count_matches_flat_orbits(S3):
    el = s3_elements()
    assert commuting_pair_orbits(el, perm_compose, perm_inverse) == 8
    assert count_homs(surface_presentation(1), S3) == 18


def test_loop_operators(S3):
    lat = torus(2, 2)
    Z2 = build_group("Z2")
    assert np.isclose(loop_operator_S1xY(lat, Z2, "wilson"), 4)
    assert np.isclose(loop_operator_S1xY(lat, Z2, "wilson", character=(1,)), 0)
    # commutators in S3 lie in A3, so a transposition twist never appears
    assert loop_operator_S1xY(lat, S3, "thooft", element=1) == 0
    assert loop_operator_S1xY(lat, S3, "thooft", element=0) == 8
    # a 3-cycle face holonomy: pairs (a, b) with [a, b] a 3-cycle, divided by #G
    el = s3_elements()
    three = {el[3], el[4]}
    n = sum(1 for a in el for b in el
            if perm_compose(perm_compose(a, b), perm_compose(perm_inverse(a), perm_inverse(b))) in three)
    assert loop_operator_S1xY(lat, S3, "thooft", element=3) == Fraction(n, 6)


def test_handlebody_pairings():
    H = solid_torus(2, 2)
    Z2 = build_group("Z2")
    assert np.isclose(pair_with_handlebody(H, Z2, [1, 1]), 16)
    assert np.isclose(pair_with_handlebody(H, Z2, [1, 0]), 1)
    # only the meridian-trivial classes contribute, each with weight 1/2
    a = 0.3
    total = 0.0
    for s in itertools.product(range(2), repeat=4):
        for hol in ([0] * 8, [0, 1, 0, 1, 0, 0, 0, 0]):
            w = 1.0
            for e, (t, h) in enumerate(H.lattice.edges):
                w *= [1, a][(hol[e] + s[h] + s[t]) % 2]
            total += w / 2
    assert np.isclose(pair_with_handlebody(H, Z2, [1, a]), total)


def test_handlebody_meridian_validation():
    with pytest.raises(ValidationError):
        HandlebodyData(torus(2, 2), [[(0, 1)]])


def test_higher_partition_and_em_duality():
    Z2, Z4 = AbelianGroup([2]), AbelianGroup([4])
    T3 = torus3()
    assert higher_partition(T3, 1, Z2) == 4
    for A in (Z2, Z4):
        for r in range(3):
            assert em_duality_check(T3, A, r).ratio == 1
    X = lattice_complex(genus_surface(2))
    rep = em_duality_check(X, Z2, 1)
    assert rep.ratio == 4 == Fraction(2) ** (-X.euler())
    assert rep.ok
    assert em_duality_check(X, Z2, 0).ratio == Fraction(1, 4)


def test_euler_sign_and_odd_dimensions():
    assert euler_sign(3, 1) == 0
    assert euler_sign(2, 0) == 1 and euler_sign(2, 1) == -1
    S3 = sphere_boundary_simplex(4)
    assert em_duality_check(S3, AbelianGroup([3]), 1).ratio == 1
    rp2 = rp2_six_vertex()
    assert higher_partition(rp2, 0, AbelianGroup([2])) == 2
    with pytest.raises(ValidationError):
        higher_partition(rp2, 5, AbelianGroup([2]))
