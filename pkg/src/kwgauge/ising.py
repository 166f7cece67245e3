"""Gauged Ising partition functions, partition vectors and Kramers-Wannier checks.

Spins are maps s: V -> G and a background is an edge labeling ``hol``. The
edge variable is ``g(s; e) = s(head)^-1 hol(e) s(tail)`` and the Boltzmann
weight is ``prod_e theta(g(s; e))``.
"""

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import config
from .errors import CapExceeded, NotABoundary, UseTuraevViroBackend, ValidationError
from .flat import face_holonomies, flat_labelings, gauge_orbits
from .groups import AbelianGroup, FiniteGroup
from .harmonic import fourier_abelian
from .homology import CochainComplex
from .surface import LatticedCircle, dual_lattice


@dataclass
class Insertions:
    """Order and disorder data.

    Attributes:
        order: list of (vertex, dual element residue vector) for abelian G.
        disorder: list of (face, element) with element a residue vector
            (abelian) or a group element index whose conjugacy class is
            prescribed (nonabelian).
    """

    order: list = field(default_factory=list)
    disorder: list = field(default_factory=list)

    def __post_init__(self):
        vs = [v for v, _ in self.order]
        fs = [f for f, _ in self.disorder]
        if len(set(vs)) != len(vs) or len(set(fs)) != len(fs):
            raise ValidationError("insertion vertices and faces must be distinct")

    def omega_array(self, V, A):
        """Order data as a (V, k) residue array (zeros where absent)."""
        out = np.zeros((V, A.rank), dtype=np.int64)
        for v, chi in self.order:
            out[v] = np.asarray(chi) % np.array(A.factors)
        return out

    def eta_array(self, F, A):
        out = np.zeros((F, A.rank), dtype=np.int64)
        for f, a in self.disorder:
            out[f] = np.asarray(a) % np.array(A.factors)
        return out


def _as_group(G):
    if isinstance(G, AbelianGroup):
        return G.group
    return G


def _as_abelian(A):
    if isinstance(A, FiniteGroup):
        return A.abelian
    return A


# --- spin sums ----------------------------------------------------------------

def _order_factor(G, spins, order):
    """prod_i chi(s(v_i), omega_i) for a batch of spin configurations."""
    A = G.abelian
    out = np.ones(spins.shape[0], dtype=complex)
    elems = A.elements()
    for v, chi in order:
        out *= A.pairing(elems[spins[:, v]], chi)
    return out


def spin_partition(lat, G, theta, hol=None, ins=None, cap=None, threads=1, chunk=1 << 16):
    """Brute-force spin sum over all s: V -> G in mixed-radix order.

    Args:
        lat: ``Lattice2``.
        G: ``FiniteGroup`` (or ``AbelianGroup``).
        theta: weight per group element.
        hol: edge labeling (element indices); default trivial.
        ins: ``Insertions``; only order data enters the sum (disorder is
            carried by ``hol``).
        cap: maximal #G^V (default 2^24).
        threads: worker count for partitioning the configuration range.

    Returns:
        Complex value when order characters are present, else float.
    """
    G = _as_group(G)
    cap = config.cap("SPIN_CAP") if cap is None else cap
    N, V = G.order, lat.V
    total = N ** V
    if total > cap:
        raise CapExceeded(f"#G^V = {total} exceeds cap {cap}")
    order = list(ins.order) if ins is not None else []
    if order and not G.has_abelian_view:
        raise UseTuraevViroBackend("order characters need an abelian group")
    hol = np.full(lat.E, G.identity) if hol is None else np.asarray(hol, dtype=np.int64)
    theta = np.asarray(theta)
    tails = np.array([t for t, _ in lat.edges])
    heads = np.array([h for _, h in lat.edges])
    radix = N ** np.arange(V - 1, -1, -1, dtype=np.int64)
    tab, inv = G.table, G.inverse

    def block(lo, hi):
        idx = np.arange(lo, hi, dtype=np.int64)
        spins = (idx[:, None] // radix[None, :]) % N
        g = tab[tab[inv[spins[:, heads]], hol[None, :]], spins[:, tails]]
        w = np.prod(theta[g], axis=1)
        if order:
            return np.sum(w * _order_factor(G, spins, order))
        return np.sum(w)

    bounds = [(lo, min(lo + chunk, total)) for lo in range(0, total, chunk)]
    if threads > 1 and len(bounds) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            parts = list(pool.map(lambda b: block(*b), bounds))
    else:
        parts = [block(*b) for b in bounds]
    val = sum(parts)
    return complex(val) if order or np.iscomplexobj(theta) else float(val)


def spin_partition_contract(lat, G, theta, hol=None, omega=None):
    """Same sum as ``spin_partition`` evaluated as a tensor-network contraction.

    Args:
        omega: optional (V, N) array of per-vertex weights on spin values.
    """
    G = _as_group(G)
    hol = np.full(lat.E, G.identity) if hol is None else np.asarray(hol, dtype=np.int64)
    theta = np.asarray(theta)
    tab, inv = G.table, G.inverse
    N = G.order
    operands = []
    for e, (t, h) in enumerate(lat.edges):
        # M[s_h, s_t] = theta(s_h^-1 hol s_t)
        M = theta[tab[tab[inv[np.arange(N)][:, None], hol[e]], np.arange(N)[None, :]]]
        operands += [M, [h, t]]
    if omega is not None:
        for v in range(lat.V):
            operands += [np.asarray(omega[v]), [v]]
    return contract_network(operands)


def contract_network(operands):
    """Sum over all variables of a product of factors.

    Args:
        operands: flat list ``[array, vars, array, vars, ...]`` in ``np.einsum``
            interleaved form.

    Variables are eliminated one at a time, always choosing the one whose
    elimination touches the fewest variables (ties broken by label).
    """
    factors = [(np.asarray(operands[i]), list(operands[i + 1])) for i in range(0, len(operands), 2)]
    scalar = 1.0
    while True:
        live = sorted({x for _, vs in factors for x in vs})
        if not live:
            break

        def cost(x):
            scope = set()
            for _, vs in factors:
                if x in vs:
                    scope.update(vs)
            return (len(scope), x)

        x = min(live, key=cost)
        touching = [f for f in factors if x in f[1]]
        rest = [f for f in factors if x not in f[1]]
        scope = sorted({y for _, vs in touching for y in vs} - {x})
        ops = []
        for arr, vs in touching:
            ops += [arr, vs]
        new = np.einsum(*ops, scope)
        factors = rest + [(new, scope)]
    for arr, vs in factors:
        scalar = scalar * arr
    return scalar


# --- partition vectors ----------------------------------------------------------

@dataclass
class PartitionVector:
    """Partition values per background class.

    Attributes:
        values: value per class.
        cocycles: background cochain per class (abelian: z0 + representative)
            or labeling representative (nonabelian).
        base: base solution z0 of the disorder torsor (abelian).
        weights: 1/#Aut per class for nonabelian orbits (else None).
    """

    values: np.ndarray
    cocycles: list
    base: np.ndarray = None
    weights: np.ndarray = None

    def __len__(self):
        return len(self.values)


def selection_rule_ok(A, ins):
    if ins is None or not ins.order:
        return True
    tot = np.sum([np.asarray(chi) for _, chi in ins.order], axis=0) % np.array(A.factors)
    return not np.any(tot)


def torsor_sum(C, theta, z, omega_arr, method="contract"):
    """sum_{s in C^0} omega(s) Theta(z + d0 s) for a 1-cochain z.

    Args:
        C: ``CochainComplex``.
        theta: weights on A.
        z: (E, k) residues.
        omega_arr: (V, k) order data as dual residues.
        method: ``"contract"`` (tensor network) or ``"brute"``.
    """
    A = C.A
    lat = C.lattice
    theta = np.asarray(theta)
    elems = A.elements()
    N = A.order
    zi = A.indices(z)
    has_order = np.any(omega_arr)
    if method == "brute":
        total = N ** lat.V
        if total > config.cap("SPIN_CAP"):
            raise CapExceeded(f"#A^V = {total} exceeds cap")
        tails = np.array([t for t, _ in lat.edges])
        heads = np.array([h for _, h in lat.edges])
        radix = N ** np.arange(lat.V - 1, -1, -1, dtype=np.int64)
        acc = 0j
        for lo in range(0, total, 1 << 16):
            idx = np.arange(lo, min(lo + (1 << 16), total), dtype=np.int64)
            spins = (idx[:, None] // radix[None, :]) % N
            s = elems[spins]  # (batch, V, k)
            c = z[None, :, :] + s[:, heads, :] - s[:, tails, :]
            w = np.prod(theta[A.indices(c)], axis=1).astype(complex)
            if has_order:
                w *= np.prod(A.pairing(s, omega_arr[None, :, :]), axis=1)
            acc += np.sum(w)
        return acc
    # M[s_h, s_t] = theta(z_e + s_h - s_t)
    diff = A.indices(elems[:, None, :] - elems[None, :, :])  # (h, t)
    operands = []
    for e, (t, h) in enumerate(lat.edges):
        M = theta[A.indices(elems[diff] + z[e])]
        operands += [M.astype(complex), [h, t]]
    if has_order:
        for v in range(lat.V):
            operands += [A.pairing(elems, omega_arr[v]), [v]]
    return complex(contract_network(operands))


def partition_vector(lat, A, theta, ins=None, method="contract", base_shift=None, C=None):
    """Ising vector over the classes of the disorder torsor.

    For each class u of H^1 the value at z = z0 + rep(u) is
    sum_s omega(s) Theta(z + d0 s). Vanishes identically when the product of
    the order characters is nontrivial on constants.

    Args:
        base_shift: optional 1-cocycle added to the base point z0 (the
            torsor is unchanged; values pick up the twisted-descent phase).
    """
    A = _as_abelian(A)
    C = CochainComplex(lat, A) if C is None else C
    ins = ins or Insertions()
    eta = ins.eta_array(lat.F, A)
    z0 = C.solve_disorder_torsor(eta)
    if base_shift is not None:
        z0 = (z0 + np.asarray(base_shift)) % C.moduli
    reps = C.cohomology().representatives
    if reps is None:
        raise CapExceeded("H^1 too large to enumerate classes")
    omega = ins.omega_array(lat.V, A)
    zs = [(z0 + u) % C.moduli for u in reps]
    if not selection_rule_ok(A, ins):
        vals = np.zeros(len(zs), dtype=complex)
    else:
        vals = np.array([torsor_sum(C, theta, z, omega, method) for z in zs])
    return PartitionVector(values=vals, cocycles=zs, base=z0)


def partition_vector_nonabelian(lat, G, theta, disorder=None):
    """Ising values on gauge orbits of flat backgrounds (nonabelian G).

    Args:
        disorder: list of (face, element) prescribing the conjugacy class of
            the face holonomy.
    """
    G = _as_group(G)
    allowed = [[G.identity]] * lat.F
    for f, g in disorder or []:
        allowed[f] = list(G.classes[G.class_of[g]])
    labs = flat_labelings(lat, G, allowed=allowed, tree_gauge=True)
    orbits = gauge_orbits(G, labs)
    vals = np.array([spin_partition_contract(lat, G, theta, hol=rep) for rep, _, _ in orbits])
    weights = np.array([1.0 / stab for _, _, stab in orbits])
    return PartitionVector(values=vals, cocycles=[rep for rep, _, _ in orbits], weights=weights)


# --- Kramers-Wannier ----------------------------------------------------------

@dataclass
class KWReport:
    max_error: float
    factor: float
    lhs: np.ndarray
    rhs: np.ndarray
    vertex_normalization: float = 1.0
    dual_insertions: Insertions = None

    @property
    def ok(self):
        return self.max_error <= 1e-8


def dual_insertions(ins, A):
    """Order data becomes disorder on dual faces and vice versa.

    A disorder eta at face f becomes the order character eta at dual vertex f;
    an order character omega at v becomes the disorder -omega at dual face v.
    """
    n = np.array(A.factors)
    return Insertions(
        order=[(f, tuple(int(x) for x in np.asarray(a) % n)) for f, a in ins.disorder],
        disorder=[(v, tuple(int(x) for x in (-np.asarray(chi)) % n)) for v, chi in ins.order],
    )


def torsor_pairing(A, c, cd):
    """prod_e chi(c(e), cd(e_dual)) for full cochains on a lattice and its dual."""
    n = np.array(A.factors)
    return np.exp(2j * np.pi * np.sum(((c * cd) % n) / n.astype(float)))


def kw_dual_check(lat, A, theta, ins=None, normalize_vertices=False, method="contract",
                  base_shift=None):
    """Compare the Fourier transform of the Ising vector with the dual vector.

    Computes v on (lat, A, theta, ins) and w on (dual, A_dual, theta_dual,
    ins_dual), forms (1/sqrt #H) sum_u conj<z0 + u, w-cochain> v(u) and
    compares with factor * w, factor = #Z^1 / sqrt(#C^1 #H^1).
    """
    A = _as_abelian(A)
    ins = ins or Insertions()
    dual = dual_lattice(lat).lattice
    Ad = A.dual()
    theta = np.asarray(theta, dtype=float)
    theta_d = fourier_abelian(theta, A)
    if np.max(np.abs(theta_d.imag)) < 1e-12:
        theta_d = theta_d.real
    C = CochainComplex(lat, A)
    Cd = CochainComplex(dual, Ad)
    v = partition_vector(lat, A, theta, ins, method=method, base_shift=base_shift, C=C)
    ins_d = dual_insertions(ins, A)
    try:
        w = partition_vector(dual, Ad, theta_d, ins_d, method=method, C=Cd)
        w_vals, w_cocycles = w.values, w.cocycles
    except NotABoundary:
        # the dual disorder is obstructed exactly when the selection rule fails
        reps = Cd.cohomology().representatives
        w_vals, w_cocycles = np.zeros(len(reps), dtype=complex), reps
    h0, h1, h2 = C.orders()
    factor = C.order_Z1() / np.sqrt(C.order_C(1) * h1)
    norm = 1.0
    if normalize_vertices:
        norm = A.order ** (-lat.V / 2) / Ad.order ** (-dual.V / 2)
    P = np.array([[torsor_pairing(A, zc, wc) for zc in v.cocycles] for wc in w_cocycles])
    lhs = (P.conj() @ v.values) / np.sqrt(h1)
    rhs = factor * w_vals
    if normalize_vertices:
        lhs = lhs * A.order ** (-lat.V / 2)
        rhs = rhs * Ad.order ** (-dual.V / 2)
        factor = factor * norm
    scale = max(1.0, float(np.max(np.abs(rhs))))
    err = float(np.max(np.abs(lhs - rhs)) / scale)
    return KWReport(max_error=err, factor=float(factor), lhs=lhs, rhs=rhs,
                    vertex_normalization=norm, dual_insertions=ins_d)


# --- transfer matrices -----------------------------------------------------------

def transfer_matrix(circle, G, theta, twist=None, cap=None):
    """Transfer matrix on Fun(G^n) for a latticed circle.

    T[s', s] = prod_i theta(s(i+1)^-1 t_i s(i)) * prod_i theta(s'(i)^-1 s(i)),
    with t_i = e except t_{n-1} = twist on the marked edge from vertex n-1 to
    vertex 0. Basis order is lexicographic in (s(0), ..., s(n-1)).
    """
    G = _as_group(G)
    n = circle.n if isinstance(circle, LatticedCircle) else int(circle)
    LatticedCircle(n)
    cap = config.cap("TRANSFER_CAP") if cap is None else cap
    N = G.order
    if N ** n > cap:
        raise CapExceeded(f"#G^n = {N ** n} exceeds cap {cap}")
    h = G.identity if twist is None else twist
    theta = np.asarray(theta)
    tab, inv = G.table, G.inverse
    states = np.array(np.unravel_index(np.arange(N ** n), (N,) * n)).T  # (S, n)
    horiz = np.ones(len(states))
    for i in range(n):
        ti = h if i == n - 1 else G.identity
        a = states[:, (i + 1) % n]
        b = states[:, i]
        horiz *= theta[tab[tab[inv[a], ti], b]]
    vert = np.ones((len(states), len(states)))
    for i in range(n):
        vert *= theta[tab[inv[states[:, i]][:, None], states[:, i][None, :]]]
    return vert * horiz[None, :]


def projector_constant(T, tol=1e-9):
    """Smallest c with T^2 = c T, from the top eigenvalue, and the residual."""
    lam = np.linalg.eigvals(T)
    c = float(np.max(lam.real)) if lam.size else 0.0
    res = float(np.max(np.abs(T @ T - c * T))) if T.size else 0.0
    return c, res
