"""Cochain complexes over finite abelian groups, cohomology and torsors.

Cochains with values in A = Z/n_1 x ... x Z/n_k are integer arrays of shape
``(cells, k)`` whose column j is read mod n_j. Every computation runs
factorwise through the integer Smith normal form of the incidence matrices.
"""

import itertools
from dataclasses import dataclass, field
from math import gcd

import numpy as np

from . import config
from .errors import CapExceeded, NotABoundary, RequiresDual, ValidationError
from .groups import AbelianGroup
from .smith import smith


def _mod_matvec(M, x, n):
    """(M @ x) mod n with exact integer arithmetic for object matrices."""
    return np.array(M.dot(np.asarray(x, dtype=object)) % n, dtype=np.int64)


class _FactorData:
    """Smith data of D0 and D1 for one cyclic factor Z/n."""

    def __init__(self, s0, s1, n, E):
        self.n = n
        self.s0, self.s1 = s0, s1
        self.E = E
        self.g0 = [gcd(d, n) for d in s0.diag]

    def key(self, c):
        """Canonical coordinates of the class of c in C^1 / B^1."""
        y = _mod_matvec(self.s0.P, c, self.n)
        r = self.s0.rank
        y[:r] = y[:r] % np.array(self.g0, dtype=np.int64) if r else y[:r]
        return y

    def canonical(self, c):
        y = self.key(c)
        return _mod_matvec(self.s0.Pinv, y, self.n)

    def z1_generators(self):
        n, r = self.n, self.s1.rank
        gens = []
        for i in range(self.E):
            mult = n // gcd(self.s1.diag[i], n) if i < r else 1
            if mult % n == 0:
                continue
            col = np.array([int(x) for x in self.s1.Q[:, i]], dtype=object)
            gens.append(np.array((col * mult) % n, dtype=np.int64))
        return gens

    def solve(self, eta):
        """Particular solution of D1 z = eta mod n, or the obstruction."""
        n = self.n
        b = _mod_matvec(self.s1.P, eta, n)
        r = self.s1.rank
        y = np.zeros(self.E, dtype=object)
        obstruction = []
        ok = True
        for i in range(len(b)):
            if i < r:
                d = self.s1.diag[i]
                g = gcd(d, n)
                obstruction.append(int(b[i] % g))
                if b[i] % g:
                    ok = False
                    continue
                m = n // g
                y[i] = (int(b[i]) // g) * pow(d // g % m, -1, m) % m if m > 1 else 0
            else:
                obstruction.append(int(b[i]))
                if b[i]:
                    ok = False
        if not ok:
            return None, obstruction
        return _mod_matvec(self.s1.Q, y, n), obstruction


class CochainComplex:
    """Cochain complex C^0 -> C^1 -> C^2 of a closed lattice with coefficients in A.

    Args:
        lattice: ``Lattice2``.
        A: ``AbelianGroup`` of coefficients.
    """

    def __init__(self, lattice, A):
        if not isinstance(A, AbelianGroup):
            A = A.abelian
        self.lattice = lattice
        self.A = A
        self.D0 = lattice.D0()
        self.D1 = lattice.D1()
        if np.any(self.D1 @ self.D0):
            raise ValidationError("D1 * D0 != 0")
        self.V, self.E, self.F = lattice.V, lattice.E, lattice.F
        s0 = smith(self.D0)
        s1 = smith(self.D1)
        self._factors = [_FactorData(s0, s1, n, self.E) for n in A.factors]
        self._cohomology = None

    @property
    def moduli(self):
        return np.array(self.A.factors, dtype=np.int64)

    def d0(self, s):
        """Coboundary of a 0-cochain (V, k) -> (E, k)."""
        return (self.D0 @ np.asarray(s, dtype=np.int64)) % self.moduli

    def d1(self, z):
        return (self.D1 @ np.asarray(z, dtype=np.int64)) % self.moduli

    def order_C(self, k):
        return self.A.order ** (self.V, self.E, self.F)[k]

    def order_B1(self):
        out = 1
        for fd in self._factors:
            out *= fd.s0.image_order_mod(fd.n)
        return out

    def order_B2(self):
        out = 1
        for fd in self._factors:
            out *= fd.s1.image_order_mod(fd.n)
        return out

    def order_Z1(self):
        return self.order_C(1) // self.order_B2()

    def orders(self):
        """Exact (#H^0, #H^1, #H^2)."""
        b1, b2 = self.order_B1(), self.order_B2()
        return (self.order_C(0) // b1, self.order_C(1) // b2 // b1, self.order_C(2) // b2)

    def class_key(self, c):
        """Hashable canonical key of the class of a 1-cochain modulo B^1."""
        c = np.asarray(c, dtype=np.int64).reshape(self.E, -1)
        return tuple(tuple(int(x) for x in fd.key(c[:, j])) for j, fd in enumerate(self._factors))

    def canonical_representative(self, c):
        c = np.asarray(c, dtype=np.int64).reshape(self.E, -1)
        return np.stack([fd.canonical(c[:, j]) for j, fd in enumerate(self._factors)], axis=1)

    def cohomology(self, cap=None):
        """Orders and, if #H^1 <= cap, one canonical representative per class."""
        if self._cohomology is not None:
            return self._cohomology
        cap = config.cap("CLASS_ENUM_CAP") if cap is None else cap
        h0, h1, h2 = self.orders()
        reps = None
        if h1 <= cap:
            per_factor = [self._factor_classes(j) for j in range(len(self._factors))]
            reps = []
            for combo in itertools.product(*per_factor):
                reps.append(np.stack(combo, axis=1))
            if len(reps) != h1:
                raise AssertionError("class enumeration disagrees with Smith count")
        self._cohomology = CohomologyData(
            orders=(h0, h1, h2), representatives=reps,
            invariant_factors=(self._factors[0].s0.diag, self._factors[0].s1.diag),
            order_Z1=self.order_Z1(), order_B1=self.order_B1(), order_B2=self.order_B2(),
        )
        return self._cohomology

    def _factor_classes(self, j):
        fd = self._factors[j]
        gens = fd.z1_generators()
        zero = np.zeros(self.E, dtype=np.int64)
        seen = {tuple(fd.key(zero)): zero}
        frontier = [zero]
        while frontier:
            nxt = []
            for c in frontier:
                for g in gens:
                    rep = fd.canonical((c + g) % fd.n)
                    k = tuple(fd.key(rep))
                    if k not in seen:
                        seen[k] = rep
                        nxt.append(rep)
            frontier = nxt
        return list(seen.values())

    def class_index(self, c):
        """Index of the class of cocycle c among ``cohomology().representatives``."""
        coh = self.cohomology()
        if not hasattr(self, "_index"):
            self._index = {self.class_key(r): i for i, r in enumerate(coh.representatives)}
        return self._index[self.class_key(c)]

    def is_cocycle(self, z):
        return not np.any(self.d1(z))

    def solve_disorder_torsor(self, eta):
        """Solve D1 z = eta.

        Returns the particular solution whose Smith coordinates on free
        directions vanish and whose constrained coordinates are the least
        nonnegative residues; the torsor is then z + Z^1.

        Raises:
            NotABoundary: with the reduced Smith coordinates of eta in H^2.
        """
        eta = np.asarray(eta, dtype=np.int64).reshape(self.F, -1) % self.moduli
        cols, obs = [], []
        failed = False
        for j, fd in enumerate(self._factors):
            z, o = fd.solve(eta[:, j])
            obs.append(o)
            if z is None:
                failed = True
            cols.append(z)
        if failed:
            raise NotABoundary("disorder assignment is not a coboundary", obstruction=obs)
        z = np.stack(cols, axis=1)
        assert np.array_equal(self.d1(z), eta)
        return z


@dataclass
class CohomologyData:
    """Cohomology orders with explicit class representatives.

    Attributes:
        orders: (#H^0, #H^1, #H^2).
        representatives: list of 1-cocycles (E, k) or None when over the cap.
        invariant_factors: Smith diagonals of (D0, D1).
    """

    orders: tuple
    representatives: list
    invariant_factors: tuple
    order_Z1: int = 0
    order_B1: int = 0
    order_B2: int = 0


def coboundaries(lattice, A):
    return CochainComplex(lattice, A)


def cohomology(C):
    return C.cohomology()


def solve_disorder_torsor(C, eta):
    return C.solve_disorder_torsor(eta)


def poincare_pairing(A, u, w, sign=1):
    """prod_e chi(u(e), w(e_dual))^sign for cochains on a lattice and its dual.

    The dual lattice convention of ``surface.dual_lattice`` makes every
    crossing sign +1; ``sign=-1`` flips the fundamental class.
    """
    if w is None:
        raise RequiresDual("pairing needs a cochain on the dual lattice")
    u = np.asarray(u, dtype=np.int64)
    w = np.asarray(w, dtype=np.int64)
    if u.shape != w.shape:
        raise RequiresDual("cochains must live on a lattice and its dual")
    n = np.array(A.factors)
    frac = np.sum(((u * w) % n) / n.astype(float))
    return complex(np.exp(2j * np.pi * sign * frac))


def pairing_matrix(C, Cd, sign=1):
    """Pairing matrix between H^1(Lambda; A) and H^1(Lambda_dual; A_dual) classes."""
    reps = C.cohomology().representatives
    dreps = Cd.cohomology().representatives
    if reps is None or dreps is None:
        raise CapExceeded("class enumeration over the cap")
    return np.array([[poincare_pairing(C.A, u, w, sign) for w in dreps] for u in reps])


# --- simplicial and general cochain complexes --------------------------------

class GradedComplex:
    """Integer cochain complex given by coboundary matrices.

    Args:
        cells: number of cells per degree 0..n.
        coboundary: list of integer matrices; coboundary[k] maps C^k -> C^{k+1}
            (shape cells[k+1] x cells[k]).
    """

    def __init__(self, cells, coboundary, name=""):
        self.cells = list(cells)
        self.coboundary = [np.asarray(M, dtype=np.int64) for M in coboundary]
        self.name = name
        self._diag = None

    @property
    def dim(self):
        return len(self.cells) - 1

    def euler(self):
        return sum((-1) ** k * c for k, c in enumerate(self.cells))

    def _invariant_factors(self):
        if self._diag is None:
            self._diag = [smith(M, transforms=False).diag if M.size else [] for M in self.coboundary]
        return self._diag

    def cohomology_orders(self, A):
        """Exact #H^k(X; A) for k = 0..dim."""
        if not isinstance(A, AbelianGroup):
            A = A.abelian
        diag = self._invariant_factors()
        out = []
        for k in range(self.dim + 1):
            total = 1
            for n in A.factors:
                im_in = 1
                if k > 0:
                    for d in diag[k - 1]:
                        im_in *= n // gcd(n, d)
                im_out = 1
                if k < self.dim:
                    for d in diag[k]:
                        im_out *= n // gcd(n, d)
                total *= n ** self.cells[k] // im_out // im_in
            out.append(total)
        return out


class SimplicialComplex(GradedComplex):
    """Simplicial complex generated by top-dimensional simplices.

    Args:
        simplices: vertex tuples of the top simplices.
        cell_cap: maximal number of cells (CapExceeded beyond).
    """

    def __init__(self, simplices, name="", cell_cap=None):
        cell_cap = config.cap("CELL_CAP") if cell_cap is None else cell_cap
        tops = [tuple(sorted(int(v) for v in s)) for s in simplices]
        if not tops:
            raise ValidationError("empty complex")
        d = len(tops[0]) - 1
        if any(len(s) != d + 1 or len(set(s)) != d + 1 for s in tops):
            raise ValidationError("simplices must have d+1 distinct vertices")
        faces = [set() for _ in range(d + 1)]
        for s in tops:
            for k in range(d + 1):
                faces[k].update(itertools.combinations(s, k + 1))
        self.faces = [sorted(f) for f in faces]
        total = sum(len(f) for f in self.faces)
        if total > cell_cap:
            raise CapExceeded(f"{total} cells exceed cap {cell_cap}")
        index = [{s: i for i, s in enumerate(f)} for f in self.faces]
        cob = []
        for k in range(d):
            M = np.zeros((len(self.faces[k + 1]), len(self.faces[k])), dtype=np.int64)
            for i, s in enumerate(self.faces[k + 1]):
                for j in range(k + 2):
                    M[i, index[k][s[:j] + s[j + 1:]]] += (-1) ** j
            cob.append(M)
        super().__init__([len(f) for f in self.faces], cob, name)
        self.simplices = tops

    def to_dict(self):
        return {"dim": self.dim, "simplices": [list(s) for s in self.simplices]}

    @classmethod
    def from_dict(cls, data):
        cx = cls(data["simplices"], data.get("name", ""))
        if "dim" in data and data["dim"] != cx.dim:
            raise ValidationError("declared dim does not match simplices")
        return cx


def lattice_complex(lattice):
    """The 2-dimensional cellular cochain complex of a lattice."""
    return GradedComplex([lattice.V, lattice.E, lattice.F], [lattice.D0(), lattice.D1()],
                         lattice.name)


def simplicial_cohomology(X, A):
    return X.cohomology_orders(A)


def sphere_boundary_simplex(n=4):
    """Boundary of the n-simplex (an (n-1)-sphere)."""
    return SimplicialComplex(list(itertools.combinations(range(n + 1), n)), f"S{n - 1}")


def torus3(k=3):
    """Freudenthal triangulation of the 3-torus from a periodic k^3 grid (k >= 3)."""
    if k < 3:
        raise ValidationError("k >= 3 needed for a simplicial 3-torus")
    vid = lambda p: (p[0] % k) + k * (p[1] % k) + k * k * (p[2] % k)
    tets = []
    for base in itertools.product(range(k), repeat=3):
        for perm in itertools.permutations(range(3)):
            p = list(base)
            verts = [vid(p)]
            for ax in perm:
                p[ax] += 1
                verts.append(vid(p))
            tets.append(verts)
    return SimplicialComplex(tets, "T3")


def rp2_six_vertex():
    """Minimal 6-vertex triangulation of the real projective plane."""
    tris = [(1, 2, 3), (1, 3, 4), (1, 4, 5), (1, 5, 6), (1, 6, 2),
            (2, 3, 5), (3, 4, 6), (4, 5, 2), (5, 6, 3), (6, 2, 4)]
    return SimplicialComplex([[v - 1 for v in t] for t in tris], "RP2")
