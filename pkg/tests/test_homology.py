import numpy as np
import pytest
from sympy import Matrix
from sympy.matrices.normalforms import smith_normal_form
from hypothesis import given
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from kwgauge.errors import CapExceeded, NotABoundary
from kwgauge.groups import AbelianGroup
from kwgauge.homology import (CochainComplex, SimplicialComplex, lattice_complex, pairing_matrix,
                              poincare_pairing, rp2_six_vertex, sphere_boundary_simplex, torus3)
from kwgauge.smith import invariant_factors, smith
from kwgauge.surface import dual_lattice, genus_surface, sphere_cube, sphere_tetra, torus

from .oracles import coboundary_set, cocycles_cyclic, h1_order_cyclic


@given(arrays(np.int64, st.tuples(st.integers(1, 5), st.integers(1, 5)), elements=st.integers(-6, 6)))
def test_smith_matches_sympy(M):
    S = smith(M)
    assert np.array_equal(np.array(S.P, dtype=object).dot(M.astype(object)).dot(np.array(S.Q, dtype=object)),
                          _diag_matrix(S.diag, M.shape))
    ref = smith_normal_form(Matrix(M.tolist()))
    ref_diag = [abs(int(ref[i, i])) for i in range(min(M.shape)) if ref[i, i] != 0]
    assert [int(x) for x in invariant_factors(M)] == ref_diag


def _diag_matrix(diag, shape):
    out = np.zeros(shape, dtype=object)
    for i, d in enumerate(diag):
        out[i, i] = d
    return out


@pytest.mark.parametrize("lat,n", [(torus(2, 2), 2), (torus(2, 2), 3), (torus(2, 3), 2),
                                   (sphere_tetra(), 2), (sphere_tetra(), 3), (sphere_cube(), 2)])
def test_orders_against_enumeration(lat, n):
    C = CochainComplex(lat, AbelianGroup([n]))
    h0, h1, h2 = C.orders()
    assert h1 == h1_order_cyclic(lat, n)
    assert C.order_Z1() == len(cocycles_cyclic(lat, n))
    assert C.order_B1() == len(coboundary_set(lat, n))
    assert h0 == n and h2 == n
    assert C.order_C(1) == C.order_Z1() * C.order_B2()


@pytest.mark.parametrize("lat,A,h1", [
    (torus(3, 3), [2], 4), (torus(2, 3), [6], 36), (sphere_cube(), [5], 1),
    (genus_surface(2), [3], 81), (genus_surface(2), [2, 2], 256),
])
def test_h1_orders(lat, A, h1):
    C = CochainComplex(lat, AbelianGroup(A))
    assert C.orders()[1] == h1
    reps = C.cohomology().representatives
    assert len(reps) == h1
    assert all(C.is_cocycle(r) for r in reps)
    assert len({C.class_key(r) for r in reps}) == h1


def test_representatives_are_canonical_under_coboundary_shift(rng):
    lat = torus(3, 3)
    C = CochainComplex(lat, AbelianGroup([3]))
    for r in C.cohomology().representatives:
        s = rng.integers(0, 3, size=(lat.V, 1))
        shifted = (r + C.d0(s)) % 3
        assert C.class_key(shifted) == C.class_key(r)
        assert np.array_equal(C.canonical_representative(shifted), C.canonical_representative(r))


def test_disorder_torsor():
    lat = torus(3, 3)
    C = CochainComplex(lat, AbelianGroup([2]))
    zero = np.zeros((lat.F, 1), dtype=int)
    assert not np.any(C.solve_disorder_torsor(zero))
    eta = zero.copy()
    eta[[0, 4]] = 1
    z = C.solve_disorder_torsor(eta)
    assert np.array_equal(C.d1(z), eta)
    eta1 = zero.copy()
    eta1[0] = 1
    with pytest.raises(NotABoundary) as info:
        C.solve_disorder_torsor(eta1)
    assert info.value.obstruction is not None


@given(st.integers(0, 2**16))
def test_torsor_solutions_satisfy_equation(seed):
    rng = np.random.default_rng(seed)
    lat = torus(2, 3)
    C = CochainComplex(lat, AbelianGroup([2, 3]))
    z = rng.integers(0, 6, size=(lat.E, 2)) % C.moduli
    eta = C.d1(z)
    sol = C.solve_disorder_torsor(eta)
    assert np.array_equal(C.d1(sol), eta)


def test_poincare_pairing_nondegenerate():
    lat = torus(2, 2)
    A = AbelianGroup([2])
    C, Cd = CochainComplex(lat, A), CochainComplex(dual_lattice(lat).lattice, A.dual())
    P = pairing_matrix(C, Cd)
    assert np.allclose(P @ P.conj().T, 4 * np.eye(4), atol=1e-12)
    assert np.isclose(P.min().real, -1)
    u = C.cohomology().representatives[1]
    assert poincare_pairing(A, u, np.zeros_like(u)) == 1


def test_poincare_pairing_independent_of_representatives(rng):
    lat = torus(3, 3)
    A = AbelianGroup([3])
    C, Cd = CochainComplex(lat, A), CochainComplex(dual_lattice(lat).lattice, A)
    for u in C.cohomology().representatives:
        for w in Cd.cohomology().representatives:
            base = poincare_pairing(A, u, w)
            u2 = (u + C.d0(rng.integers(0, 3, size=(lat.V, 1)))) % 3
            w2 = (w + Cd.d0(rng.integers(0, 3, size=(lat.F, 1)))) % 3
            assert np.isclose(poincare_pairing(A, u2, w2), base, atol=1e-12)


def test_simplicial_examples():
    Z2 = AbelianGroup([2])
    assert sphere_boundary_simplex(4).cohomology_orders(Z2) == [2, 1, 1, 2]
    assert rp2_six_vertex().cohomology_orders(Z2) == [2, 2, 2]
    assert rp2_six_vertex().cohomology_orders(AbelianGroup([3])) == [3, 1, 1]
    T3 = torus3()
    assert T3.euler() == 0
    assert T3.cohomology_orders(Z2) == [2, 8, 8, 2]
    assert T3.cohomology_orders(AbelianGroup([4])) == [4, 64, 64, 4]


def test_lattice_complex_matches_cochain_complex():
    lat = genus_surface(2)
    A = AbelianGroup([3])
    assert lattice_complex(lat).cohomology_orders(A) == list(CochainComplex(lat, A).orders())


def test_simplicial_round_trip_and_cap():
    X = rp2_six_vertex()
    Y = SimplicialComplex.from_dict(X.to_dict())
    assert Y.cohomology_orders(AbelianGroup([2])) == [2, 2, 2]
    with pytest.raises(CapExceeded):
        SimplicialComplex(X.simplices, cell_cap=10)
