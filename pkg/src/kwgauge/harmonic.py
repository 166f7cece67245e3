"""Fourier transforms of weight functions and admissibility tests."""

from dataclasses import dataclass

import numpy as np

from .config import TOL


def fourier_abelian(theta, A):
    """Fourier transform on an abelian group.

    theta_dual(b) = (1/sqrt(#A)) sum_a conj(chi(a, b)) theta(a).

    Args:
        theta: values in canonical (lexicographic) element order.
        A: ``AbelianGroup``.

    Returns:
        Complex array indexed by dual elements.
    """
    theta = np.asarray(theta)
    X = A.pairing_matrix()
    return (X.conj().T @ theta) / np.sqrt(A.order)


def inverse_fourier_abelian(theta_dual, A):
    X = A.pairing_matrix()
    return (X @ np.asarray(theta_dual)) / np.sqrt(A.order)


def fourier_nonabelian(theta, G, irreps=None):
    """Operator-valued transform theta_dual(rho) = (1/sqrt(#G)) sum_g theta(g) conj(rho(g))."""
    theta = np.asarray(theta)
    irreps = G.irreducibles() if irreps is None else irreps
    return [np.einsum("g,gab->ab", theta, r.matrices.conj()) / np.sqrt(G.order) for r in irreps]


def is_even(theta, G, tol=TOL):
    theta = np.asarray(theta)
    scale = max(1.0, float(np.max(np.abs(theta))))
    return bool(np.max(np.abs(theta - theta[G.inverse])) <= tol * scale)


@dataclass
class Admissibility:
    """Outcome of an admissibility test.

    Attributes:
        admissible: overall verdict.
        reason: ``"ok"``, ``"negative"``, ``"not even"`` or ``"dual negative"``.
        witness: offending element index, dual element index or irrep index.
        value: the offending value (or minimal eigenvalue).
    """

    admissible: bool
    reason: str = "ok"
    witness: object = None
    value: float = 0.0

    def __bool__(self):
        return self.admissible


def is_admissible(theta, G, tol=TOL):
    """Test nonnegativity, evenness and positivity of the Fourier transform.

    The threshold is ``-tol * max|theta|`` so points on the boundary of the
    admissible region are accepted.
    """
    theta = np.asarray(theta, dtype=float)
    scale = float(np.max(np.abs(theta))) if theta.size else 0.0
    thr = -tol * max(scale, 1e-300)
    i = int(np.argmin(theta))
    if theta[i] < thr:
        return Admissibility(False, "negative", i, float(theta[i]))
    odd = np.abs(theta - theta[G.inverse])
    i = int(np.argmax(odd))
    if odd[i] > tol * max(scale, 1.0):
        return Admissibility(False, "not even", i, float(odd[i]))
    if G.has_abelian_view:
        td = fourier_abelian(theta, G.abelian).real
        j = int(np.argmin(td))
        if td[j] < thr:
            return Admissibility(False, "dual negative", j, float(td[j]))
        return Admissibility(True)
    for j, block in enumerate(fourier_nonabelian(theta, G)):
        lam = float(np.linalg.eigvalsh((block + block.conj().T) / 2)[0])
        if lam < thr:
            return Admissibility(False, "dual negative", j, lam)
    return Admissibility(True)


def subgroup_indicator(subgroup, order):
    out = np.zeros(order)
    out[list(subgroup)] = 1.0
    return out


def mu2_dual_parameter(a):
    """Normalized dual coupling (1 - a)/(1 + a) for theta = (1, a) on Z/2."""
    return (1.0 - a) / (1.0 + a)


def mu2_beta_dual(beta):
    """Dual inverse temperature: a = exp(-2 beta) mapped through the involution."""
    a = np.exp(-2.0 * np.asarray(beta, dtype=float))
    return -0.5 * np.log(mu2_dual_parameter(a))


def mu5_transform_values(a, b, c):
    """Closed-form transform of (a, b, b, c, c) on Z/5 at dual elements 0, 1, 2."""
    p, q = 2 * np.cos(2 * np.pi / 5), 2 * np.cos(4 * np.pi / 5)
    s5 = np.sqrt(5.0)
    return np.array([(a + 2 * b + 2 * c) / s5, (a + p * b + q * c) / s5, (a + q * b + p * c) / s5])


def mu5_extreme_points():
    """Extreme points (b, c) of the admissible region for theta = (1, b, c, c, b).

    The region is cut out by b, c >= 0, 1 + p b + q c >= 0 and
    1 + q b + p c >= 0 (the total-sum constraint is implied), which gives the
    quadrilateral with vertices (0, 0), (p, 0), (1, 1), (0, p).
    """
    p = 2 * np.cos(2 * np.pi / 5)
    return np.array([(0.0, 0.0), (p, 0.0), (1.0, 1.0), (0.0, p)])


def mu5_outward_normals():
    """Outward unit normals of the admissible quadrilateral's edges, in vertex order.

    Edge k joins vertex k and vertex k+1 of ``mu5_extreme_points``.
    """
    P = mu5_extreme_points()
    out = []
    for k in range(len(P)):
        d = P[(k + 1) % len(P)] - P[k]
        nrm = np.array([d[1], -d[0]])
        if np.dot(nrm, P[k] - P.mean(axis=0)) < 0:
            nrm = -nrm
        out.append(nrm / np.linalg.norm(nrm))
    return np.array(out)


def mu5_weight(b, c, a=1.0):
    return np.array([a, b, c, c, b])
