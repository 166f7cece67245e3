"""Combinatorial latticed surfaces, circles and dual lattices.

A ``Lattice2`` stores a vertex count, directed edges ``(tail, head)`` and
faces as cyclic walks of ``(edge, dir)`` slots. ``dir=+1`` means the walk
follows the edge from tail to head. Lattices are purely combinatorial.

Dual conventions: the dual vertex of face ``f`` has index ``f``; the dual
edge of ``e`` has index ``e`` and runs from the face traversing ``e``
backwards to the face traversing it forwards; the dual face of vertex ``v``
has index ``v``. With these choices the incidence matrices satisfy
``D0(dual) = D1^T`` and ``D1(dual) = D0^T``, and every edge crosses its dual
with the same sign.
"""

import json
from dataclasses import dataclass, field

import networkx as nx
import numpy as np

from .errors import InvalidLattice, RequiresClosedSurface


@dataclass
class ValidationReport:
    failures: list = field(default_factory=list)

    @property
    def valid(self):
        return not self.failures

    def __bool__(self):
        return self.valid


@dataclass
class Lattice2:
    """Latticed closed oriented surface.

    Attributes:
        vertices: number of vertices.
        edges: list of (tail, head) pairs.
        faces: list of faces, each a list of (edge, dir) slots.
        oriented: orientation flag.
        name: optional label.
    """

    vertices: int
    edges: list
    faces: list
    oriented: bool = True
    name: str = ""

    def __post_init__(self):
        self.edges = [(int(t), int(h)) for t, h in self.edges]
        self.faces = [[(int(e), int(d)) for e, d in f] for f in self.faces]

    @property
    def V(self):
        return self.vertices

    @property
    def E(self):
        return len(self.edges)

    @property
    def F(self):
        return len(self.faces)

    def euler(self):
        return self.V - self.E + self.F

    def genus(self):
        return (2 - self.euler()) // 2

    def slot_start(self, slot):
        e, d = slot
        t, h = self.edges[e]
        return t if d > 0 else h

    def slot_end(self, slot):
        e, d = slot
        t, h = self.edges[e]
        return h if d > 0 else t

    def face_vertices(self, f):
        return [self.slot_start(s) for s in self.faces[f]]

    def edge_slots(self):
        """Map edge -> list of (face, slot position, dir)."""
        out = [[] for _ in range(self.E)]
        for f, walk in enumerate(self.faces):
            for k, (e, d) in enumerate(walk):
                if 0 <= e < self.E:
                    out[e].append((f, k, d))
        return out

    def D0(self):
        """Integer matrix (E x V): D0[e, v] = [v = head] - [v = tail]."""
        M = np.zeros((self.E, self.V), dtype=np.int64)
        for e, (t, h) in enumerate(self.edges):
            M[e, h] += 1
            M[e, t] -= 1
        return M

    def D1(self):
        """Integer matrix (F x E): sum of direction flags of e in face f."""
        M = np.zeros((self.F, self.E), dtype=np.int64)
        for f, walk in enumerate(self.faces):
            for e, d in walk:
                M[f, e] += d
        return M

    def validate(self, genus=None):
        """Check all combinatorial invariants; return a report of failures."""
        fails = []
        for e, (t, h) in enumerate(self.edges):
            if not (0 <= t < self.V and 0 <= h < self.V):
                fails.append(f"edge {e}: endpoint out of range")
            elif t == h:
                fails.append(f"edge {e}: loop edge")
        for f, walk in enumerate(self.faces):
            if len(walk) < 2:
                fails.append(f"face {f}: face length < 2")
                continue
            if any(not (0 <= e < self.E) or d not in (1, -1) for e, d in walk):
                fails.append(f"face {f}: bad slot")
                continue
            for k in range(len(walk)):
                if self.slot_end(walk[k]) != self.slot_start(walk[(k + 1) % len(walk)]):
                    fails.append(f"face {f}: walk broken at slot {k}")
        if fails:
            return ValidationReport(fails)
        for e, inc in enumerate(self.edge_slots()):
            if len(inc) != 2:
                fails.append(f"edge {e}: {len(inc)} face incidences (closed surface needs 2)")
            elif inc[0][2] + inc[1][2] != 0:
                fails.append(f"edge {e}: orientability failure (same direction twice)")
        if genus is not None and self.euler() != 2 - 2 * genus:
            fails.append(f"Euler characteristic {self.euler()} != {2 - 2 * genus}")
        if not fails:
            try:
                _vertex_cycles(self)
            except InvalidLattice as exc:
                fails.extend(exc.failures)
        return ValidationReport(fails)

    def check(self):
        rep = self.validate()
        if not rep.valid:
            raise InvalidLattice("invalid lattice: " + "; ".join(rep.failures), rep.failures)
        return self

    def is_closed(self):
        return all(len(inc) == 2 for inc in self.edge_slots())

    def reversed_orientation(self):
        """Same surface with every edge reversed (flags flipped accordingly)."""
        edges = [(h, t) for t, h in self.edges]
        faces = [[(e, -d) for e, d in walk] for walk in self.faces]
        return Lattice2(self.V, edges, faces, self.oriented, self.name + "~")

    def to_dict(self):
        return {
            "vertices": self.V,
            "edges": [list(e) for e in self.edges],
            "faces": [[[e, d] for e, d in f] for f in self.faces],
            "oriented": self.oriented,
        }

    def to_json(self):
        return json.dumps(self.to_dict())

    @classmethod
    def from_dict(cls, data):
        return cls(data["vertices"], data["edges"], data["faces"], data.get("oriented", True),
                   data.get("name", ""))

    @classmethod
    def from_json(cls, text):
        return cls.from_dict(json.loads(text))


@dataclass
class LatticedCircle:
    """Polygon with n >= 2 vertices; edge i runs from vertex i to i+1."""

    n: int

    def __post_init__(self):
        if self.n < 2:
            raise InvalidLattice("latticed circle needs at least 2 vertices")


@dataclass
class DualLattice:
    """Dual lattice with its bijections to the primal cells.

    ``face_to_vertex[f]`` is the dual vertex of face f and
    ``edge_to_edge[e]`` the dual edge crossing e (identity maps here).
    """

    lattice: Lattice2
    primal: Lattice2
    face_to_vertex: list
    edge_to_edge: list


# --- generators -------------------------------------------------------------

def torus(m, n):
    """Square-lattice torus with m x n vertices (m, n >= 2)."""
    if m < 2 or n < 2:
        raise InvalidLattice("torus(m, n) needs m, n >= 2 to avoid loops")
    vid = lambda i, j: (i % m) + m * (j % n)
    h = lambda i, j: 2 * vid(i, j)
    v = lambda i, j: 2 * vid(i, j) + 1
    edges = [None] * (2 * m * n)
    for j in range(n):
        for i in range(m):
            edges[h(i, j)] = (vid(i, j), vid(i + 1, j))
            edges[v(i, j)] = (vid(i, j), vid(i, j + 1))
    faces = []
    for j in range(n):
        for i in range(m):
            faces.append([(h(i, j), 1), (v(i + 1, j), 1), (h(i, j + 1), -1), (v(i, j), -1)])
    return Lattice2(m * n, edges, faces, True, f"torus({m},{n})").check()


def _faces_from_walks(edges, walks):
    lookup = {}
    for e, (t, h) in enumerate(edges):
        lookup[(t, h)] = (e, 1)
        lookup[(h, t)] = (e, -1)
    return [[lookup[(w[k], w[(k + 1) % len(w)])] for k in range(len(w))] for w in walks]


def sphere_cube():
    """Surface of the unit cube: V=8, E=12, F=6, outward orientation."""
    vid = lambda x: x[0] + 2 * x[1] + 4 * x[2]
    edges = []
    for v in range(8):
        x = [(v >> k) & 1 for k in range(3)]
        for d in range(3):
            if x[d] == 0:
                y = list(x)
                y[d] = 1
                edges.append((v, vid(y)))
    walks = []
    for d in range(3):
        a, b = (d + 1) % 3, (d + 2) % 3
        for c in (0, 1):
            base = [0, 0, 0]
            base[d] = c
            pts = []
            for da, db in [(0, 0), (1, 0), (1, 1), (0, 1)]:
                p = list(base)
                p[a], p[b] = da, db
                pts.append(vid(p))
            walks.append(pts if c == 1 else pts[::-1])
    return Lattice2(8, edges, _faces_from_walks(edges, walks), True, "sphere_cube").check()


def sphere_tetra():
    """Boundary of a tetrahedron: V=4, E=6, F=4."""
    edges = [(i, j) for i in range(4) for j in range(i + 1, 4)]
    walks = [(1, 2, 3), (0, 3, 2), (0, 1, 3), (0, 2, 1)]
    return Lattice2(4, edges, _faces_from_walks(edges, walks), True, "sphere_tetra").check()


def genus_surface(g):
    """Closed oriented surface of genus g >= 1.

    Built from the 4g-gon with word a1 b1 a1^-1 b1^-1 ..., each side cut into
    three edges and the interior coned off to a center vertex. Counts:
    V = 4g + 2, E = 18g, F = 12g. Vertex 0 is the polygon corner, vertex 1
    the center.
    """
    if g < 1:
        raise InvalidLattice("genus(g) needs g >= 1; use sphere_cube or sphere_tetra for g = 0")
    corner, center = 0, 1
    edges = []
    letter_pts = {}
    letter_edges = {}
    nv = 2
    for hnd in range(g):
        for letter in ("a", "b"):
            x1, x2 = nv, nv + 1
            nv += 2
            letter_pts[(hnd, letter)] = (x1, x2)
            base = len(edges)
            edges += [(corner, x1), (x1, x2), (x2, corner)]
            letter_edges[(hnd, letter)] = (base, base + 1, base + 2)
    points, segs = [], []
    for hnd in range(g):
        for letter, inverse in (("a", False), ("b", False), ("a", True), ("b", True)):
            x1, x2 = letter_pts[(hnd, letter)]
            e0, e1, e2 = letter_edges[(hnd, letter)]
            if not inverse:
                points += [corner, x1, x2]
                segs += [(e0, 1), (e1, 1), (e2, 1)]
            else:
                points += [corner, x2, x1]
                segs += [(e2, -1), (e1, -1), (e0, -1)]
    nb = len(points)
    spoke0 = len(edges)
    edges += [(center, p) for p in points]
    faces = []
    for i in range(nb):
        faces.append([(spoke0 + i, 1), segs[i], (spoke0 + (i + 1) % nb, -1)])
    lat = Lattice2(nv, edges, faces, True, f"genus({g})").check()
    if lat.euler() != 2 - 2 * g:
        raise InvalidLattice("genus construction has wrong Euler characteristic")
    return lat


def generate_lattice(kind, m=None, n=None, g=None):
    """Dispatch a generator by name: torus, sphere_cube, sphere_tetra, genus."""
    kind = kind.lower()
    if kind == "torus":
        return torus(m, n)
    if kind == "sphere_cube":
        return sphere_cube()
    if kind == "sphere_tetra":
        return sphere_tetra()
    if kind == "genus":
        return genus_surface(g)
    raise InvalidLattice(f"unknown lattice kind {kind!r}")


# --- duals ------------------------------------------------------------------

def _vertex_cycles(lat):
    """Corner cycles around each vertex as lists of (face, slot, dual dir).

    A corner (f, k) sits at the start vertex of slot k of face f; slot k is
    the outgoing edge and slot k-1 the incoming one.
    """
    slots = lat.edge_slots()
    corners_at = [[] for _ in range(lat.V)]
    for f, walk in enumerate(lat.faces):
        for k, s in enumerate(walk):
            corners_at[lat.slot_start(s)].append((f, k))
    cycles = []
    fails = []
    for v in range(lat.V):
        todo = set(corners_at[v])
        if not todo:
            fails.append(f"vertex {v}: isolated")
            cycles.append([])
            continue
        start = min(todo)
        cyc = []
        cur = start
        while True:
            f, k = cur
            e, d = lat.faces[f][k]
            todo.discard(cur)
            (g, kg, dg), = [x for x in slots[e] if (x[0], x[1]) != (f, k)]
            cyc.append((f, e, -d))
            nxt = (g, (kg + 1) % len(lat.faces[g]))
            if nxt == start:
                break
            if nxt not in corners_at[v] or nxt not in todo:
                fails.append(f"vertex {v}: corner walk inconsistent")
                break
            cur = nxt
        if todo:
            fails.append(f"vertex {v}: link is not a single cycle")
        cycles.append(cyc)
    if fails:
        raise InvalidLattice("bad vertex links", fails)
    return cycles


def dual_lattice(lat):
    """Canonical combinatorial dual (see module docstring for conventions)."""
    if not lat.is_closed():
        raise RequiresClosedSurface("dual lattice requires a closed surface")
    lat.check()
    edges = [None] * lat.E
    for e, inc in enumerate(lat.edge_slots()):
        fwd = [f for f, _, d in inc if d > 0][0]
        bwd = [f for f, _, d in inc if d < 0][0]
        edges[e] = (bwd, fwd)
    faces = [[(e, d) for _, e, d in cyc] for cyc in _vertex_cycles(lat)]
    dual = Lattice2(lat.F, edges, faces, lat.oriented, f"dual({lat.name})")
    rep = dual.validate()
    if not rep.valid:
        raise InvalidLattice("dual construction failed", rep.failures)
    return DualLattice(dual, lat, list(range(lat.F)), list(range(lat.E)))


def incidence_graph(lat):
    G = nx.Graph()
    for v in range(lat.V):
        G.add_node(("v", v), kind="v")
    for e, (t, h) in enumerate(lat.edges):
        G.add_node(("e", e), kind="e")
        G.add_edge(("e", e), ("v", t))
        G.add_edge(("e", e), ("v", h))
    for f, walk in enumerate(lat.faces):
        G.add_node(("f", f), kind="f")
        for e, _ in walk:
            G.add_edge(("f", f), ("e", e))
    return G


def lattices_isomorphic(a, b):
    """Cell-complex isomorphism test on vertex/edge/face incidence graphs."""
    if (a.V, a.E, a.F) != (b.V, b.E, b.F):
        return False
    return nx.is_isomorphic(incidence_graph(a), incidence_graph(b),
                            node_match=lambda x, y: x["kind"] == y["kind"])


def same_up_to_rotation(a, b):
    """Literal equality of two lattices up to cyclic rotation of face walks."""
    if a.V != b.V or a.edges != b.edges or a.F != b.F:
        return False

    def canon(walk):
        return min(tuple(walk[k:] + walk[:k]) for k in range(len(walk)))

    return [canon(w) for w in a.faces] == [canon(w) for w in b.faces]
