import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from kwgauge.groups import AbelianGroup, build_group
from kwgauge.harmonic import (fourier_abelian, fourier_nonabelian, inverse_fourier_abelian,
                              is_admissible, is_even, mu2_beta_dual, mu2_dual_parameter,
                              mu5_extreme_points, mu5_outward_normals, mu5_transform_values,
                              mu5_weight, subgroup_indicator)

from .oracles import dft_cyclic

weights = st.lists(st.floats(-2, 2, allow_nan=False), min_size=2, max_size=8)


@given(weights)
def test_cyclic_transform_matches_dft(vals):
    A = AbelianGroup([len(vals)])
    assert np.allclose(fourier_abelian(vals, A), dft_cyclic(vals), atol=1e-12)


@given(st.sampled_from([[2], [3], [2, 2], [2, 3], [4]]), st.data())
def test_inverse_parseval_and_involution(factors, data):
    A = AbelianGroup(factors)
    f = np.array(data.draw(st.lists(st.floats(-3, 3), min_size=A.order, max_size=A.order)))
    g = np.array(data.draw(st.lists(st.floats(-3, 3), min_size=A.order, max_size=A.order)))
    Ff, Fg = fourier_abelian(f, A), fourier_abelian(g, A)
    assert np.allclose(inverse_fourier_abelian(Ff, A), f, atol=1e-12)
    assert np.isclose(np.vdot(f, g), np.vdot(Ff, Fg), atol=1e-12)
    neg = [A.index(A.neg(a)) for a in A.elements()]
    assert np.allclose(fourier_abelian(Ff, A.dual()), f[neg], atol=1e-12)


@pytest.mark.parametrize("name", ["S3", "Q8", "A4"])
def test_nonabelian_delta_and_constant(name):
    G = build_group(name)
    N = G.order
    delta = np.zeros(N)
    delta[G.identity] = 1
    for b, r in zip(fourier_nonabelian(delta, G), G.irreducibles()):
        assert np.allclose(b, np.eye(r.dim) / np.sqrt(N))
    blocks = fourier_nonabelian(np.ones(N), G)
    assert np.isclose(blocks[0][0, 0], np.sqrt(N))
    assert all(np.allclose(b, 0, atol=1e-12) for b in blocks[1:])


def test_s3_transposition_indicator_on_standard_irrep():
    G = build_group("S3")
    theta = np.zeros(6)
    theta[[0, 1, 2, 5]] = 1  # identity and the three transpositions
    std = fourier_nonabelian(theta, G)[2]
    assert np.allclose(std, np.eye(2) / np.sqrt(6), atol=1e-12)


def test_even_weight_gives_self_adjoint_blocks(rng):
    G = build_group("A4")
    f = rng.uniform(size=G.order)
    theta = f + f[G.inverse]
    assert is_even(theta, G)
    for b in fourier_nonabelian(theta, G):
        assert np.allclose(b, b.conj().T, atol=1e-12)


def test_mu2_involution():
    A = AbelianGroup([2])
    for a in np.linspace(0, 1, 11):
        td = fourier_abelian([1, a], A).real
        assert np.isclose(td[1] / td[0], mu2_dual_parameter(a), atol=1e-12)
    fixed = np.sqrt(2) - 1
    assert np.isclose(mu2_dual_parameter(fixed), fixed, atol=1e-12)
    beta = np.arange(1, 21) / 10
    assert np.allclose(np.sinh(2 * beta) * np.sinh(2 * mu2_beta_dual(beta)), 1, atol=1e-12)


def test_mu5_closed_form_transform(rng):
    A = AbelianGroup([5])
    for _ in range(5):
        a, b, c = rng.uniform(size=3)
        td = fourier_abelian(mu5_weight(b, c, a), A).real
        vals = mu5_transform_values(a, b, c)
        assert np.allclose(td[[0, 1, 2]], vals, atol=1e-12)
        assert np.allclose(td[[4, 3]], vals[[1, 2]], atol=1e-12)


def test_mu5_region_vertices_and_normals():
    G = build_group("Z5")
    P, N = mu5_extreme_points(), mu5_outward_normals()
    for b, c in P:
        assert is_admissible(mu5_weight(b, c), G)
    for k in range(4):
        mid = (P[k] + P[(k + 1) % 4]) / 2
        assert not is_admissible(mu5_weight(*(mid + 1e-3 * N[k])), G)
        assert is_admissible(mu5_weight(*(mid - 1e-3 * N[k])), G)


def test_mu4_fourth_extreme_point_and_subgroups():
    G = build_group("Z4")
    assert is_admissible([1, 0.5, 0, 0.5], G)
    for H in G.abelian.subgroups():
        assert is_admissible(subgroup_indicator([G.abelian.index(h) for h in H], 4), G)


def test_admissibility_reasons():
    G = build_group("Z3")
    assert is_admissible([1, -0.1, -0.1], G).reason == "negative"
    assert is_admissible([1, 0.2, 0.5], G).reason == "not even"
    assert is_admissible([0, 1, 1], G).reason == "dual negative"
    S3 = build_group("S3")
    transpositions = np.array([0.0, 1, 1, 0, 0, 1])
    res = is_admissible(transpositions, S3)
    assert not res and res.reason == "dual negative"
