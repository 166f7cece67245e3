"""Finite groups, Pontrjagin duals and unitary irreducible representations.

Abelian groups are products of cyclic groups ``Z/n_1 x ... x Z/n_k`` whose
elements are residue vectors listed in lexicographic order (first factor most
significant). Named nonabelian groups are permutation or matrix groups whose
elements are listed in a fixed, documented order:

* ``S3``, ``A4``, ``D4``: permutations sorted lexicographically as tuples
  (identity first). ``D4`` acts on the corners 0..3 of a square.
* ``Q8``: ``1, -1, i, -i, j, -j, k, -k``.
"""

import itertools
import re
from dataclasses import dataclass, field

import numpy as np

from . import config
from .errors import CapExceeded, DiagonalizationFailed, NotAbelian, ValidationError


class AbelianGroup:
    """Product of cyclic groups with residue-vector elements.

    Args:
        factors: cyclic orders, each at least 2.
    """

    def __init__(self, factors):
        factors = tuple(int(n) for n in factors)
        if not factors or any(n < 2 for n in factors):
            raise ValidationError(f"cyclic factors must be >= 2, got {factors}")
        self.factors = factors
        self.order = int(np.prod(factors))
        self._elements = np.array(
            list(itertools.product(*[range(n) for n in factors])), dtype=np.int64
        ).reshape(self.order, len(factors))
        self._radix = np.array(
            [int(np.prod(factors[j + 1:])) for j in range(len(factors))], dtype=np.int64
        )
        self._group = None

    def __repr__(self):
        return "AbelianGroup(" + "x".join(f"Z{n}" for n in self.factors) + ")"

    def __eq__(self, other):
        return isinstance(other, AbelianGroup) and self.factors == other.factors

    def __hash__(self):
        return hash(self.factors)

    @property
    def rank(self):
        return len(self.factors)

    def elements(self):
        """All residue vectors, shape (order, rank), lexicographic."""
        return self._elements.copy()

    def element(self, i):
        return tuple(int(x) for x in self._elements[i])

    def index(self, vec):
        """Index of a residue vector (entries reduced mod each factor)."""
        vec = np.asarray(vec, dtype=np.int64) % np.array(self.factors)
        return int(vec @ self._radix)

    def indices(self, vecs):
        """Vectorized ``index`` over the last axis."""
        vecs = np.asarray(vecs, dtype=np.int64) % np.array(self.factors)
        return vecs @ self._radix

    def add(self, a, b):
        return tuple((np.asarray(a) + np.asarray(b)) % np.array(self.factors))

    def neg(self, a):
        return tuple((-np.asarray(a)) % np.array(self.factors))

    def pairing(self, a, a_dual):
        """Universal character exp(2 pi i sum_j a_j b_j / n_j)."""
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(a_dual, dtype=np.int64)
        phase = np.sum((a * b) / np.array(self.factors, dtype=float), axis=-1)
        return np.exp(2j * np.pi * phase)

    def pairing_matrix(self):
        """Matrix X[a, a_dual] of character values over A x A-dual."""
        e = self._elements
        # exact phases via integer residues mod lcm
        frac = np.zeros((self.order, self.order))
        for j, n in enumerate(self.factors):
            frac += (np.outer(e[:, j], e[:, j]) % n) / n
        return np.exp(2j * np.pi * frac)

    def dual(self):
        """Pontrjagin dual, realized on the same residue vectors."""
        return AbelianGroup(self.factors)

    @property
    def group(self):
        """The underlying ``FiniteGroup`` (Cayley table etc.)."""
        if self._group is None:
            e = self._elements
            table = self.indices(e[:, None, :] + e[None, :, :])
            self._group = FiniteGroup(table, label=self.descriptor(), abelian_view=self)
        return self._group

    def descriptor(self):
        return "x".join(f"Z{n}" for n in self.factors)

    def subgroups(self):
        """All subgroups as sorted tuples of element indices (brute force)."""
        n = self.order
        found = set()
        for gens in itertools.chain.from_iterable(
            itertools.combinations(range(n), r) for r in range(min(self.rank, 2) + 1)
        ):
            found.add(tuple(sorted(self._closure(gens))))
        return sorted(found, key=lambda s: (len(s), s))

    def _closure(self, gens):
        out = {0}
        frontier = [0]
        while frontier:
            nxt = []
            for x in frontier:
                for g in gens:
                    y = self.index(self._elements[x] + self._elements[g])
                    if y not in out:
                        out.add(y)
                        nxt.append(y)
            frontier = nxt
        return out

    def annihilator(self, subgroup):
        """Indices of dual elements trivial on every element of ``subgroup``."""
        X = self.pairing_matrix()
        rows = X[list(subgroup)]
        return tuple(int(j) for j in np.nonzero(np.all(np.abs(rows - 1) < 1e-9, axis=0))[0])


class FiniteGroup:
    """Finite group given by its Cayley table.

    Args:
        table: integer array with ``table[a, b]`` the index of ``a*b``.
        label: descriptor used for printing.
        abelian_view: the ``AbelianGroup`` this table came from, if any.
    """

    def __init__(self, table, label="", abelian_view=None, names=None):
        table = np.asarray(table, dtype=np.int64)
        n = table.shape[0]
        if table.shape != (n, n):
            raise ValidationError("Cayley table must be square")
        self.table = table
        self.order = n
        self.label = label
        self.names = names
        self._abelian_view = abelian_view
        ids = [i for i in range(n) if np.array_equal(table[i], np.arange(n))]
        if len(ids) != 1:
            raise ValidationError("Cayley table has no unique identity")
        self.identity = ids[0]
        self.inverse = np.argmax(table == self.identity, axis=1)
        self._check_associative()
        self.is_abelian = bool(np.array_equal(table, table.T))
        self.classes, self.class_of = self._conjugacy_classes()
        self._irreps = None

    def __repr__(self):
        return f"FiniteGroup({self.label or self.order})"

    def _check_associative(self):
        t = self.table
        n = self.order
        if n <= 64:
            lhs = t[t[:, :, None], np.arange(n)[None, None, :]]  # (ab)c
            rhs = t[np.arange(n)[:, None, None], t[None, :, :]]  # a(bc)
            ok = np.array_equal(lhs, rhs)
        else:
            rng = np.random.default_rng(0)
            a, b, c = rng.integers(0, n, size=(3, 20000))
            ok = np.array_equal(t[t[a, b], c], t[a, t[b, c]])
        if not ok:
            raise ValidationError("Cayley table is not associative")

    def _conjugacy_classes(self):
        n = self.order
        t, inv = self.table, self.inverse
        class_of = -np.ones(n, dtype=np.int64)
        classes = []
        for x in range(n):
            if class_of[x] >= 0:
                continue
            orbit = sorted(set(int(t[t[g, x], inv[g]]) for g in range(n)))
            class_of[orbit] = len(classes)
            classes.append(tuple(orbit))
        return classes, class_of

    @property
    def abelian(self):
        """The ``AbelianGroup`` view, or raise ``NotAbelian``."""
        if self._abelian_view is None:
            raise NotAbelian(f"{self!r} has no abelian residue-vector view")
        return self._abelian_view

    @property
    def has_abelian_view(self):
        return self._abelian_view is not None

    def mul(self, a, b):
        return int(self.table[a, b])

    def inv(self, a):
        return int(self.inverse[a])

    def conj(self, g, x):
        """g x g^-1."""
        return int(self.table[self.table[g, x], self.inverse[g]])

    def centralizer(self, elems):
        """Indices commuting with every element of ``elems``."""
        elems = list(elems)
        t = self.table
        mask = np.ones(self.order, dtype=bool)
        for x in elems:
            mask &= t[:, x] == t[x, :]
        return np.nonzero(mask)[0]

    def class_sizes(self):
        return np.array([len(c) for c in self.classes])

    def irreducibles(self, method="auto", seed=0):
        """Complete list of unitary irreps; see ``irreducibles``."""
        if method == "auto" and self._irreps is not None:
            return self._irreps
        reps = irreducibles(self, method=method, seed=seed)
        if method == "auto":
            self._irreps = reps
        return reps


@dataclass
class Irrep:
    """Unitary irreducible representation.

    Attributes:
        dim: dimension d.
        matrices: array (order, d, d) with one unitary matrix per element.
        character: trace per element.
    """

    dim: int
    matrices: np.ndarray
    character: np.ndarray = field(repr=False)

    def class_character(self, G):
        return np.array([self.character[c[0]] for c in G.classes])


# --- construction -----------------------------------------------------------

def _perm_group(gens, label):
    gens = [tuple(g) for g in gens]
    ident = tuple(range(len(gens[0])))
    elems = {ident}
    frontier = [ident]
    while frontier:
        nxt = []
        for p in frontier:
            for g in gens:
                q = tuple(p[i] for i in g)
                if q not in elems:
                    elems.add(q)
                    nxt.append(q)
        frontier = nxt
    elems = sorted(elems)
    pos = {p: i for i, p in enumerate(elems)}
    # (a*b)(i) = a(b(i)): apply b first
    table = np.array([[pos[tuple(a[i] for i in b)] for b in elems] for a in elems])
    return FiniteGroup(table, label=label, names=[str(p) for p in elems])


def _quaternion_group():
    one = np.eye(2, dtype=complex)
    qi = np.array([[1j, 0], [0, -1j]])
    qj = np.array([[0, 1], [-1, 0]], dtype=complex)
    qk = qi @ qj
    mats = [one, -one, qi, -qi, qj, -qj, qk, -qk]
    names = ["1", "-1", "i", "-i", "j", "-j", "k", "-k"]

    def find(m):
        for idx, x in enumerate(mats):
            if np.allclose(x, m):
                return idx
        raise AssertionError("not closed")

    table = np.array([[find(a @ b) for b in mats] for a in mats])
    return FiniteGroup(table, label="Q8", names=names)


_NAMED = {
    "S3": lambda: _perm_group([(1, 0, 2), (1, 2, 0)], "S3"),
    "A4": lambda: _perm_group([(1, 2, 0, 3), (1, 0, 3, 2)], "A4"),
    "D4": lambda: _perm_group([(1, 2, 3, 0), (0, 3, 2, 1)], "D4"),
    "Q8": _quaternion_group,
}


def parse_cyclic_factors(descriptor):
    """Parse ``Z<n>`` or ``Z<n>xZ<m>...`` (also ``Z n x m``) into factors."""
    d = re.sub(r"\s+", "", descriptor)
    if not d.upper().startswith("Z"):
        return None
    parts = d[1:].split("x") if "x" in d else [d[1:]]
    factors = []
    for p in parts:
        p = p[1:] if p[:1] in ("Z", "z") else p
        if not p.isdigit():
            return None
        factors.append(int(p))
    return factors


def build_group(descriptor, order_cap=None):
    """Build a group from a descriptor string.

    Args:
        descriptor: ``Z<n>``, ``Z<n>xZ<m>...``, ``S3``, ``D4``, ``Q8`` or ``A4``.
        order_cap: maximal order, defaults to the configured cap (120).

    Returns:
        FiniteGroup, with an abelian view for cyclic products.
    """
    order_cap = config.cap("GROUP_ORDER_CAP") if order_cap is None else order_cap
    key = re.sub(r"\s+", "", descriptor).upper()
    if key in _NAMED:
        G = _NAMED[key]()
    else:
        factors = parse_cyclic_factors(descriptor)
        if factors is None:
            raise ValidationError(f"unknown group descriptor {descriptor!r}")
        if int(np.prod(factors)) > order_cap:
            raise CapExceeded(f"group order {int(np.prod(factors))} exceeds cap {order_cap}")
        return AbelianGroup(factors).group
    if G.order > order_cap:
        raise CapExceeded(f"group order {G.order} exceeds cap {order_cap}")
    return G


def dual_group(A):
    """Pontrjagin dual of an abelian group (or of a group with abelian view)."""
    if isinstance(A, FiniteGroup):
        A = A.abelian
    if not isinstance(A, AbelianGroup):
        raise NotAbelian("dual_group requires an abelian group")
    return A.dual()


# --- irreps -----------------------------------------------------------------

def class_characters(G, seed=0, retries=8):
    """Irreducible characters per class via class-sum eigenvectors.

    Returns:
        (dims, chars) with chars of shape (num_irreps, num_classes).
    """
    k = len(G.classes)
    sizes = G.class_sizes()
    reps = [c[0] for c in G.classes]
    t = G.table
    # c[r, s, u] = #{x in C_r : x^-1 z_u in C_s}
    coef = np.zeros((k, k, k))
    for u, z in enumerate(reps):
        for r, cr in enumerate(G.classes):
            for x in cr:
                y = t[G.inverse[x], z]
                coef[r, G.class_of[y], u] += 1
    rng = np.random.default_rng(seed)
    for _ in range(retries):
        weights = rng.normal(size=k)
        M = np.einsum("r,rsu->su", weights, coef)
        vals, vecs = np.linalg.eig(M)
        gaps = np.abs(vals[:, None] - vals[None, :]) + np.eye(k) * 1e9
        if gaps.min() < 1e-6:
            continue
        ident = G.class_of[G.identity]
        vecs = vecs / vecs[ident]
        omega = vecs.T  # omega[i, u] = |C_u| chi_i(z_u) / d_i
        dims_sq = G.order / np.sum(np.abs(omega) ** 2 / sizes, axis=1)
        dims = np.sqrt(dims_sq.real)
        if np.max(np.abs(dims - np.round(dims))) > 1e-6:
            continue
        dims = np.round(dims).astype(int)
        chars = omega * dims[:, None] / sizes[None, :]
        return dims, chars
    raise DiagonalizationFailed(f"class sums of {G!r} stayed degenerate")


def _irrep_from_character(G, d, char_elem, rng, retries=8):
    n = G.order
    t = G.table
    L = np.zeros((n, n, n))
    for g in range(n):
        L[g, t[g], np.arange(n)] = 1.0
    E = (d / n) * np.einsum("g,gij->ij", np.conj(char_elem), L)
    E = (E + E.conj().T) / 2
    w, U = np.linalg.eigh(E)
    W = U[:, w > 0.5]
    if W.shape[1] != d * d:
        raise DiagonalizationFailed("isotypic component has wrong dimension")
    # right regular action R(h) e_x = e_{x h^-1} commutes with L
    R = np.zeros((n, n, n))
    for h in range(n):
        R[h, t[np.arange(n), G.inverse[h]], np.arange(n)] = 1.0
    for _ in range(retries):
        c = rng.normal(size=n) + 1j * rng.normal(size=n)
        H = np.einsum("h,hij->ij", c, R)
        H = H + H.conj().T
        HW = W.conj().T @ H @ W
        vals, V = np.linalg.eigh((HW + HW.conj().T) / 2)
        if d < d * d and vals[d] - vals[d - 1] < 1e-6:
            continue
        Q = W @ V[:, :d]
        mats = np.einsum("ia,gij,jb->gab", Q.conj(), L, Q)
        return Irrep(dim=int(d), matrices=mats, character=np.trace(mats, axis1=1, axis2=2))
    raise DiagonalizationFailed("could not split isotypic component")


def irreducibles(G, method="auto", seed=0):
    """Complete list of unitary irreps of ``G``.

    For groups with an abelian view the default returns the characters
    a -> chi(a, a_dual) listed in dual-element order. ``method="dixon"``
    forces the class-sum construction for every group.
    """
    if G.order > config.cap("GROUP_ORDER_CAP"):
        raise CapExceeded(f"group order {G.order} exceeds cap")
    if method == "auto" and G.has_abelian_view:
        X = G.abelian.pairing_matrix()
        return [
            Irrep(dim=1, matrices=X[:, j].reshape(-1, 1, 1).copy(), character=X[:, j].copy())
            for j in range(G.order)
        ]
    rng = np.random.default_rng(seed)
    dims, chars = class_characters(G, seed=seed)
    out = []
    for d, row in zip(dims, chars):
        char_elem = row[G.class_of]
        if d == 1:
            out.append(Irrep(dim=1, matrices=char_elem.reshape(-1, 1, 1).astype(complex),
                             character=char_elem.astype(complex)))
        else:
            out.append(_irrep_from_character(G, d, char_elem, rng))

    def key(r):
        c = r.class_character(G)
        return (r.dim, tuple(np.round(-c.real, 6)), tuple(np.round(-c.imag, 6)))

    out.sort(key=key)
    return out


def dual_irrep_index(G, irreps):
    """Index of the dual (complex conjugate) irrep for each irrep."""
    out = []
    for r in irreps:
        target = np.conj(r.character)
        match = [j for j, s in enumerate(irreps) if np.allclose(s.character, target, atol=1e-8)]
        out.append(match[0])
    return out
