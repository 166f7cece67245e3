import itertools

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from kwgauge.errors import CapExceeded, NotAbelian, ValidationError
from kwgauge.groups import AbelianGroup, build_group, dual_irrep_index, irreducibles

NAMED = ["S3", "D4", "Q8", "A4"]


def test_s3_table_is_permutation_composition():
    G = build_group("S3")
    el = sorted(itertools.permutations(range(3)))
    for i, j in itertools.product(range(6), repeat=2):
        assert el[G.table[i, j]] == tuple(el[i][k] for k in el[j])


@pytest.mark.parametrize("name,sizes", [("S3", [1, 2, 3]), ("D4", [1, 1, 2, 2, 2]),
                                        ("Q8", [1, 1, 2, 2, 2]), ("A4", [1, 3, 4, 4])])
def test_class_sizes(name, sizes):
    assert sorted(build_group(name).class_sizes()) == sizes


@pytest.mark.parametrize("name,dims", [("S3", [1, 1, 2]), ("D4", [1, 1, 1, 1, 2]),
                                       ("Q8", [1, 1, 1, 1, 2]), ("A4", [1, 1, 1, 3])])
def test_irrep_dimensions_and_trivial_first(name, dims):
    G = build_group(name)
    irr = G.irreducibles()
    assert [r.dim for r in irr] == dims
    assert np.allclose(irr[0].character, 1)
    assert sum(r.dim ** 2 for r in irr) == G.order


@pytest.mark.parametrize("name", NAMED + ["Z6", "Z2xZ2"])
def test_irreps_are_unitary_homomorphisms(name):
    G = build_group(name)
    for r in G.irreducibles():
        M = r.matrices
        for a, b in itertools.product(range(G.order), repeat=2):
            assert np.allclose(M[a] @ M[b], M[G.table[a, b]], atol=1e-9)
        for g in range(G.order):
            assert np.allclose(M[g] @ M[g].conj().T, np.eye(r.dim), atol=1e-9)


@pytest.mark.parametrize("name", NAMED)
def test_character_orthogonality(name):
    G = build_group(name)
    X = np.array([r.character for r in G.irreducibles()])
    assert np.allclose(X @ X.conj().T / G.order, np.eye(len(X)), atol=1e-9)


def test_dixon_agrees_with_auto_on_abelian():
    G = build_group("Z4")
    def key(irr):
        return sorted(tuple((round(c.real, 9), round(c.imag, 9)) for c in r.character) for r in irr)
    assert key(irreducibles(G)) == key(irreducibles(G, method="dixon"))


def test_dual_irreps():
    G = build_group("S3")
    assert dual_irrep_index(G, G.irreducibles()) == [0, 1, 2]
    Z3 = build_group("Z3")
    assert dual_irrep_index(Z3, Z3.irreducibles()) == [0, 2, 1]


def test_abelian_pairing_is_bicharacter():
    A = AbelianGroup([2, 4])
    E = A.elements()
    for a, b, c in itertools.product(E, repeat=3):
        assert np.isclose(A.pairing(A.add(a, b), c), A.pairing(a, c) * A.pairing(b, c))


@given(st.lists(st.integers(2, 5), min_size=1, max_size=3))
def test_abelian_group_axioms(factors):
    A = AbelianGroup(factors)
    G = A.group
    assert G.order == int(np.prod(factors))
    assert G.is_abelian
    e = G.identity
    assert all(G.table[g, G.inverse[g]] == e for g in range(G.order))
    assert A.dual().order == A.order


def test_errors():
    with pytest.raises(ValidationError):
        build_group("SL2")
    with pytest.raises(CapExceeded):
        build_group("Z11xZ11")
    with pytest.raises(NotAbelian):
        build_group("S3").abelian


def test_subgroups_of_z4():
    A = AbelianGroup([4])
    assert sorted(len(H) for H in A.subgroups()) == [1, 2, 4]
