"""Finite path integrals: bundle counts, loop operators, handlebodies, higher theories."""

import json
import re
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import config
from .errors import CapExceeded, UseTuraevViroBackend, ValidationError
from .flat import flat_labelings, gauge_orbits, walk_holonomy
from .homology import GradedComplex
from .ising import Insertions, _as_group, spin_partition_contract


@dataclass
class GroupPresentation:
    """Finitely presented group.

    Attributes:
        generators: number of generators.
        relators: words as lists of nonzero ints; ``i`` is generator i
            (1-based) and ``-i`` its inverse.
    """

    generators: int
    relators: list = field(default_factory=list)
    name: str = ""

    def __post_init__(self):
        for w in self.relators:
            if any(x == 0 or abs(x) > self.generators for x in w):
                raise ValidationError(f"malformed relator {w}")

    @classmethod
    def from_dict(cls, data):
        rels = []
        for w in data["relators"]:
            rels.append(parse_word(w) if isinstance(w, str) else [int(x) for x in w])
        return cls(int(data["generators"]), rels, data.get("name", ""))

    def to_dict(self):
        return {"generators": self.generators, "relators": self.relators}


def parse_word(text):
    """Parse a word like ``"a b A B"`` or ``"x1 x2 x1^-1"``.

    Lowercase letters a..z are generators 1..26, uppercase their inverses;
    ``x<k>`` names generator k and a trailing ``^-1`` inverts.
    """
    out = []
    for tok in re.findall(r"x\d+(?:\^-1)?|[A-Za-z](?:\^-1)?", text):
        sign = -1 if tok.endswith("^-1") else 1
        tok = tok.replace("^-1", "")
        if tok.startswith("x") and len(tok) > 1:
            k = int(tok[1:])
        elif tok.isupper():
            k, sign = ord(tok.lower()) - 96, -sign
        else:
            k = ord(tok) - 96
        out.append(sign * k)
    return out


def torus_presentation(k):
    """Free abelian group of rank k (the k-torus)."""
    rels = [[i, j, -i, -j] for i in range(1, k + 1) for j in range(i + 1, k + 1)]
    return GroupPresentation(k, rels, f"T{k}")


def surface_presentation(g):
    word = []
    for i in range(g):
        a, b = 2 * i + 1, 2 * i + 2
        word += [a, b, -a, -b]
    return GroupPresentation(2 * g, [word] if g else [], f"Sigma{g}")


def lens_presentation(p):
    return GroupPresentation(1, [[1] * p], f"L({p},1)")


def sphere3_presentation():
    return GroupPresentation(0, [], "S3")


def count_homs(P, G, cap=None):
    """#Hom(pi_1, G) by exhaustive search over generator images."""
    G = _as_group(G)
    cap = config.cap("HOM_CAP") if cap is None else cap
    N, k = G.order, P.generators
    if N ** k > cap:
        raise CapExceeded(f"#G^generators = {N ** k} exceeds cap {cap}")
    if k == 0:
        return 1
    imgs = np.array(np.unravel_index(np.arange(N ** k), (N,) * k))  # (k, M)
    ok = np.ones(imgs.shape[1], dtype=bool)
    tab, inv = G.table, G.inverse
    for w in P.relators:
        acc = np.full(imgs.shape[1], G.identity)
        for x in w:
            g = imgs[abs(x) - 1]
            acc = tab[acc, g if x > 0 else inv[g]]
        ok &= acc == G.identity
    return int(np.count_nonzero(ok))


def count_bundles(P, G, cap=None):
    """Groupoid cardinality #Hom(pi_1, G) / #G of bundles on a connected space."""
    G = _as_group(G)
    return Fraction(count_homs(P, G, cap), G.order)


def loop_operator_S1xY(lat, G, kind="wilson", character=None, face=0, element=None):
    """Loop operator along the circle factor of S^1 x Y.

    Sums over pairs (flat bundle on Y, commuting twist c) with groupoid
    weights. Wilson: weight chi(c) for an abelian character (residue vector).
    't Hooft: the holonomy around ``face`` is constrained to the conjugacy
    class of ``element``.

    Returns:
        Fraction for 't Hooft, complex for Wilson.
    """
    G = _as_group(G)
    allowed = [[G.identity]] * lat.F
    if kind == "thooft":
        g = G.identity if element is None else element
        allowed = list(allowed)
        allowed[face] = list(G.classes[G.class_of[g]])
    elif kind != "wilson":
        raise ValidationError(f"unknown loop kind {kind!r}")
    labs = flat_labelings(lat, G, allowed=allowed, tree_gauge=True)
    if kind == "wilson":
        if character is not None and not G.has_abelian_view:
            raise UseTuraevViroBackend("Wilson characters need an abelian group")
        total = 0j
        for row in labs:
            for c in G.centralizer(set(int(x) for x in row)):
                if character is None:
                    total += 1
                else:
                    A = G.abelian
                    total += A.pairing(A.element(int(c)), character)
        return total / G.order
    total = sum(len(G.centralizer(set(int(x) for x in row))) for row in labs)
    return Fraction(total, G.order)


@dataclass
class HandlebodyData:
    """Boundary lattice of a handlebody and its meridians.

    Attributes:
        lattice: boundary ``Lattice2``.
        meridians: closed walks of (edge, dir) bounding disks in the filling.
    """

    lattice: object
    meridians: list

    def __post_init__(self):
        self.meridians = [[(int(e), int(d)) for e, d in m] for m in self.meridians]
        for m in self.meridians:
            if not m:
                raise ValidationError("empty meridian")
            for k in range(len(m)):
                if self.lattice.slot_end(m[k]) != self.lattice.slot_start(m[(k + 1) % len(m)]):
                    raise ValidationError(f"meridian {m} is not a closed walk")


def solid_torus(m, n):
    """Solid torus bounded by torus(m, n); the meridian runs along the first direction."""
    from .surface import torus
    lat = torus(m, n)
    return HandlebodyData(lat, [[(2 * i, 1) for i in range(m)]])


def pair_with_handlebody(H, G, theta, ins=None):
    """Bulk-boundary pairing for a handlebody.

    Sums over gauge orbits of flat backgrounds on the boundary whose meridian
    holonomies are trivial, with weight 1/#Aut (centralizer order of the
    holonomy image), times the Ising sum over spins. Disorder insertions fix
    face holonomy classes; order characters weight the spins (abelian G).
    """
    G = _as_group(G)
    lat = H.lattice
    ins = ins or Insertions()
    allowed = [[G.identity]] * lat.F
    for f, a in ins.disorder:
        g = G.abelian.index(a) if G.has_abelian_view and not np.isscalar(a) else int(a)
        allowed[f] = list(G.classes[G.class_of[g]])
    omega = None
    if ins.order:
        if not G.has_abelian_view:
            raise UseTuraevViroBackend("order characters need an abelian group")
        A = G.abelian
        omega = np.ones((lat.V, G.order), dtype=complex)
        elems = A.elements()
        for v, chi in ins.order:
            omega[v] = A.pairing(elems, chi)
    labs = flat_labelings(lat, G, allowed=allowed, tree_gauge=True)
    labs = [row for row in labs
            if all(walk_holonomy(G, row, m) == G.identity for m in H.meridians)]
    total = 0.0
    for rep, _, stab in gauge_orbits(G, labs):
        total += spin_partition_contract(lat, G, theta, hol=rep, omega=omega) / stab
    return complex(total) if np.iscomplexobj(total) and abs(np.imag(total)) > 1e-12 else float(np.real(total))


# --- higher theories -----------------------------------------------------------

@dataclass
class HigherTheorySpec:
    r: int
    A: object
    n: int

    def __post_init__(self):
        if not 0 <= self.r <= self.n:
            raise ValidationError("need 0 <= r <= n")


def higher_partition(X, r, A):
    """prod_{i=0}^{r} (#H^{r-i}(X; A))^{(-1)^i} as an exact fraction."""
    if not isinstance(X, GradedComplex):
        raise ValidationError("X must be a cochain complex")
    if not 0 <= r <= X.dim:
        raise ValidationError("need 0 <= r <= dim X")
    orders = X.cohomology_orders(A)
    out = Fraction(1)
    for i in range(r + 1):
        out *= Fraction(orders[r - i]) ** ((-1) ** i)
    return out


def euler_sign(n, r):
    """Exponent sign e with Z(r)/Z_dual(n-1-r) = (#A)^(e chi): 0 for odd n, (-1)^r for even n."""
    return 0 if n % 2 else (-1) ** r


@dataclass
class EMDualityReport:
    Z: Fraction
    Z_dual: Fraction
    ratio: Fraction
    euler: int
    exponent: int
    predicted: Fraction

    @property
    def ok(self):
        return self.ratio == self.predicted


def em_duality_check(X, A, r):
    """Compare the B^r A theory with its electromagnetic dual B^{n-1-r} A_dual."""
    n = X.dim
    rd = n - 1 - r
    if rd < 0:
        raise ValidationError("dual degree n-1-r must be >= 0")
    Ad = A.dual() if hasattr(A, "dual") else A
    Z = higher_partition(X, r, A)
    Zd = higher_partition(X, rd, Ad)
    chi = X.euler()
    exp = euler_sign(n, r) * chi
    order = A.order
    return EMDualityReport(Z, Zd, Z / Zd, chi, exp, Fraction(order) ** exp)


def load_presentation(path):
    with open(path) as fh:
        return GroupPresentation.from_dict(json.load(fh))
