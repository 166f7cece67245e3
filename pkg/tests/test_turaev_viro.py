import itertools

import numpy as np
import pytest

from kwgauge.errors import CapExceeded, NotEven, ValidationError
from kwgauge.flat import flat_labelings, gauge_orbits
from kwgauge.groups import build_group
from kwgauge.homology import CochainComplex
from kwgauge.ising import partition_vector
from kwgauge.surface import sphere_cube, sphere_tetra, torus
from kwgauge.turaev_viro import (FusionBackend, IsingActionVector, build_backend, duality_harness,
                                 full_projector, ising_vector, projector_check, projector_rank,
                                 random_admissible, state_space, vect_vector_by_class)

from .oracles import cocycles_cyclic, flat_count_perm, s3_elements


def hom_dim_by_characters(B, word):
    """dim Hom(1, X_1 ... X_k) = (1/#G) sum_g prod chi, conjugated on dual slots."""
    G = B.G
    total = 0j
    for g in range(G.order):
        p = 1 + 0j
        for x, flag in word:
            c = B.irreps[x].character[g]
            p *= np.conj(c) if flag else c
        total += p
    return int(round((total / G.order).real))


def test_vect_backend_basics():
    B = build_backend("vect", build_group("Z2"))
    assert B.simples == [0, 1] and B.dual == [0, 1]
    for g1, g2 in itertools.product(range(2), repeat=2):
        assert B.hom_dim(((g1, False), (g2, False))) == int((g1 + g2) % 2 == 0)
    with pytest.raises(ValidationError):
        FusionBackend("hopf", build_group("Z2"))


@pytest.mark.parametrize("name", ["S3", "Q8", "A4", "Z3"])
def test_rep_backend_structure(name):
    G = build_group(name)
    B = build_backend("rep", G)
    assert sorted(B.dual[B.dual[j]] for j in B.simples) == list(B.simples)
    assert np.isclose(B.categorical_dim(), G.order)
    for j in B.simples:
        assert B.hom_dim(((j, False), (B.dual[j], False))) == 1
        assert B.hom_dim(((j, False), (j, True))) == 1
    rng = np.random.default_rng(0)
    for _ in range(10):
        word = tuple((int(rng.integers(len(B.simples))), bool(rng.integers(2))) for _ in range(3))
        basis = B.hom_basis(word)
        assert basis.shape[1] == hom_dim_by_characters(B, word)
        assert np.allclose(basis.conj().T @ basis, np.eye(basis.shape[1]), atol=1e-10)


def test_rep_s3_examples(S3):
    B = build_backend("rep", S3)
    assert B.dual == [0, 1, 2]
    assert B.hom_dim(((2, False), (2, False))) == 1
    assert np.isclose(B.categorical_dim(), 6)
    assert np.isclose(B.sphere_value(), build_backend("vect", S3).sphere_value())
    assert np.isclose(B.sphere_value(), 1 / 6)


@pytest.mark.parametrize("kind,name", [("vect", "S3"), ("rep", "S3"), ("rep", "Q8"), ("vect", "Z4")])
def test_verlinde(kind, name):
    G = build_group(name)
    B = build_backend(kind, G)
    assert np.isclose(B.verlinde_reduced(1), len(B.simples))
    assert np.isclose(B.verlinde_reduced(0), G.order)
    if kind == "vect":
        assert np.isclose(B.verlinde_reduced(2), G.order)


def test_state_space_dimensions():
    lat = torus(2, 2)
    S = state_space(build_backend("vect", build_group("Z2")), lat)
    assert S.dim == 32 == len(cocycles_cyclic(lat, 2))
    S3 = build_group("S3")
    tet = sphere_tetra()
    assert state_space(build_backend("vect", S3), tet).dim == flat_count_perm(tet, s3_elements())


@pytest.mark.parametrize("name", ["S3", "Q8"])
def test_rep_state_space_matches_enumeration(name):
    G = build_group(name)
    B = build_backend("rep", G)
    lat = sphere_tetra()
    total = 0
    for lab in itertools.product(B.simples, repeat=lat.E):
        prod = 1
        for walk in lat.faces:
            prod *= hom_dim_by_characters(B, tuple((lab[e], d < 0) for e, d in walk))
        total += prod
    assert state_space(B, lat).dim == total


@pytest.mark.parametrize("name", ["Z2", "Z3", "Z4"])
def test_rep_and_vect_dual_agree(name):
    G = build_group(name)
    Gd = G.abelian.dual().group
    for lat in (torus(2, 2), sphere_tetra()):
        Sr = state_space(build_backend("rep", G), lat)
        Sv = state_space(build_backend("vect", Gd), lat)
        assert Sr.dim == Sv.dim
        assert projector_check(Sr).rank == projector_check(Sv).rank


@pytest.mark.parametrize("kind", ["vect", "rep"])
@pytest.mark.parametrize("name", ["Z2", "S3"])
def test_projectors_on_torus(kind, name):
    G = build_group(name)
    S = state_space(build_backend(kind, G), torus(2, 2))
    rep = projector_check(S)
    assert max(rep.idempotence, rep.self_adjoint, rep.commutation) <= 1e-9
    flat = flat_labelings(torus(2, 2), G, tree_gauge=True)
    assert rep.rank == len(gauge_orbits(G, flat))


@pytest.mark.parametrize("name", ["Q8", "A4"])
def test_rep_projectors_on_sphere(name):
    S = state_space(build_backend("rep", build_group(name)), sphere_tetra())
    rep = projector_check(S)
    assert max(rep.idempotence, rep.self_adjoint, rep.commutation) <= 1e-9
    assert rep.rank == 1


def test_sphere_cube_ground_state_is_unique():
    S = state_space(build_backend("vect", build_group("Z3")), sphere_cube())
    assert projector_rank(full_projector(S)) == 1


@pytest.mark.parametrize("name", ["Z2", "Z3"])
def test_vect_ising_vector_reproduces_partition_vector(name, rng):
    G = build_group(name)
    lat = torus(2, 2)
    theta = random_admissible(G, rng)
    S = state_space(build_backend("vect", G), lat)
    psi = ising_vector(S, IsingActionVector.from_weight(S.backend, theta))
    C = CochainComplex(lat, G.abelian)
    got = vect_vector_by_class(S, psi, C)
    assert np.allclose(got, partition_vector(lat, G.abelian, theta).values, atol=1e-10, rtol=0)


def test_delta_weight_supported_on_trivial_class():
    G = build_group("Z2")
    lat = torus(2, 2)
    S = state_space(build_backend("vect", G), lat)
    psi = ising_vector(S, IsingActionVector.from_weight(S.backend, [1.0, 0.0]))
    vals = vect_vector_by_class(S, psi, CochainComplex(lat, G.abelian))
    assert np.isclose(vals[0], 2) and np.allclose(vals[1:], 0)


def test_not_even_raises(S3):
    Z3 = build_group("Z3")
    S = state_space(build_backend("vect", Z3), sphere_tetra())
    with pytest.raises(NotEven):
        ising_vector(S, IsingActionVector.from_weight(S.backend, [1.0, 0.2, 0.5]))
    B = build_backend("rep", S3)
    Sr = state_space(B, sphere_tetra())
    theta = np.array([1, 0.2, 0.4, 0.5, 0.5, 0.7])
    ising_vector(Sr, IsingActionVector.from_weight(B, theta))
    with pytest.raises(NotEven):
        ising_vector(Sr, IsingActionVector.from_weight(B, theta, antipode=True))


def test_rep_vector_independent_of_edge_orientation(S3):
    """Flipping one edge (with its label dualized) leaves the vacuum component unchanged."""
    from kwgauge.surface import Lattice2, dual_lattice
    from kwgauge.turaev_viro import rep_trivial_component
    lat = dual_lattice(sphere_tetra()).lattice
    flipped = Lattice2(lat.V, [(h, t) if e == 0 else (t, h) for e, (t, h) in enumerate(lat.edges)],
                       [[(e, -d if e == 0 else d) for e, d in w] for w in lat.faces])
    B = build_backend("rep", S3)
    theta = np.array([1, 0.2, 0.4, 0.5, 0.5, 0.7])
    vals = []
    for L in (lat, flipped):
        S = state_space(B, L)
        vals.append(rep_trivial_component(S, ising_vector(S, IsingActionVector.from_weight(B, theta))))
    assert np.isclose(vals[0], vals[1], rtol=1e-10)


def test_abelian_harness():
    rng = np.random.default_rng(7)
    Z2, Z3 = build_group("Z2"), build_group("Z3")
    rep = duality_harness(Z2, torus(3, 3), [random_admissible(Z2, rng) for _ in range(2)])
    assert rep.kind == "abelian" and rep.max_error <= 1e-8
    rep = duality_harness(Z3, torus(2, 3), [random_admissible(Z3, rng) for _ in range(2)])
    assert rep.max_error <= 1e-8


@pytest.mark.parametrize("name", ["S3", "Q8", "D4"])
def test_nonabelian_harness_on_sphere(name):
    G = build_group(name)
    rng = np.random.default_rng(11)
    thetas = [random_admissible(G, rng) for _ in range(3)]
    rep = duality_harness(G, sphere_tetra(), thetas)
    assert rep.spread <= 1e-6
    # measured constant on the tetrahedron: #G^(V-1)
    assert np.isclose(np.real(rep.ratios[0]), G.order ** 3)
    antipodal = duality_harness(G, sphere_tetra(), thetas, antipode=True).spread
    if name == "Q8":
        # even functions on Q8 are class functions, so both images coincide
        assert antipodal <= 1e-6
    else:
        assert antipodal > 1e-3


def test_random_admissible_is_admissible():
    from kwgauge.harmonic import is_admissible
    rng = np.random.default_rng(3)
    for name in ("S3", "A4", "Z5"):
        G = build_group(name)
        for _ in range(5):
            assert is_admissible(random_admissible(G, rng), G)


def test_state_cap():
    with pytest.raises(CapExceeded):
        state_space(build_backend("vect", build_group("S3")), torus(2, 2), cap=100)
