"""Flat G-labelings of lattices and their gauge orbits.

A labeling assigns ``hol(e)`` in G to each edge (from tail to head). Gauge
transformations act by ``hol(e) -> t(head) hol(e) t(tail)^-1``, so the
holonomy around a face walk with slots ``(e_1, d_1), ..., (e_k, d_k)`` is the
composition ``h_k ... h_1`` with ``h_i = hol(e_i)^{d_i}``.
"""

from collections import deque

import numpy as np

from . import config
from .errors import CapExceeded


def walk_holonomy(G, hol, walk):
    """Composite transport h_k ... h_1 along a walk of (edge, dir) slots."""
    t, inv = G.table, G.inverse
    acc = G.identity
    for e, d in walk:
        h = hol[e] if d > 0 else inv[hol[e]]
        acc = t[h, acc]
    return int(acc)


def face_holonomies(lat, G, hol):
    return [walk_holonomy(G, hol, walk) for walk in lat.faces]


def spanning_tree(lat, root=0):
    """Edges of a BFS spanning tree (deterministic)."""
    adj = [[] for _ in range(lat.V)]
    for e, (a, b) in enumerate(lat.edges):
        adj[a].append((e, b))
        adj[b].append((e, a))
    seen = {root}
    tree = []
    queue = deque([root])
    while queue:
        v = queue.popleft()
        for e, w in adj[v]:
            if w not in seen:
                seen.add(w)
                tree.append(e)
                queue.append(w)
    return tree


def flat_labelings(lat, G, allowed=None, tree_gauge=False, cap=None):
    """Enumerate labelings with prescribed face holonomies.

    Args:
        lat: ``Lattice2``.
        G: ``FiniteGroup``.
        allowed: per-face collection of allowed holonomy elements; default
            is the identity for every face (flatness).
        tree_gauge: fix the labels of a BFS spanning tree to the identity.
        cap: maximal number of solutions.

    Returns:
        Integer array (count, E) of element indices in lexicographic order.
    """
    cap = config.cap("SPIN_CAP") if cap is None else cap
    E = lat.E
    allowed = [[G.identity]] * lat.F if allowed is None else [sorted(set(a)) for a in allowed]
    t, inv = G.table, G.inverse
    label = -np.ones(E, dtype=np.int64)
    fixed = set(spanning_tree(lat)) if tree_gauge else set()
    for e in fixed:
        label[e] = G.identity
    faces_of = [[] for _ in range(E)]
    for f, walk in enumerate(lat.faces):
        for e, _ in walk:
            faces_of[e].append(f)
    order = [e for e in _edge_order(lat) if e not in fixed]
    out = []

    def face_ok(f):
        return walk_holonomy(G, label, lat.faces[f]) in allowed[f]

    def forced(f):
        walk = lat.faces[f]
        free = [k for k, (e, _) in enumerate(walk) if label[e] < 0]
        if len(free) != 1:
            return None
        k = free[0]
        e, d = walk[k]
        if sum(1 for x, _ in walk if x == e) != 1:
            return None
        right = G.identity
        for ee, dd in walk[:k]:
            h = label[ee] if dd > 0 else inv[label[ee]]
            right = t[h, right]
        left = G.identity
        for ee, dd in walk[k + 1:]:
            h = label[ee] if dd > 0 else inv[label[ee]]
            left = t[h, left]
        # c = left * x^d * right  =>  x^d = left^-1 c right^-1
        sols = []
        for c in allowed[f]:
            xd = t[t[inv[left], c], inv[right]]
            sols.append(int(xd if d > 0 else inv[xd]))
        return e, sols

    def rec(pos):
        if len(out) > cap:
            raise CapExceeded(f"more than {cap} labelings")
        while pos < len(order) and label[order[pos]] >= 0:
            pos += 1
        if pos == len(order):
            if all(face_ok(f) for f in range(lat.F)):
                out.append(label.copy())
            return
        for f in range(lat.F):
            r = forced(f)
            if r is not None:
                e, sols = r
                for x in sorted(set(sols)):
                    label[e] = x
                    if all(face_ok(g) for g in faces_of[e] if np.all(label[[s for s, _ in lat.faces[g]]] >= 0)):
                        rec(pos)
                    label[e] = -1
                return
        e = order[pos]
        for x in range(G.order):
            label[e] = x
            if all(face_ok(g) for g in faces_of[e] if np.all(label[[s for s, _ in lat.faces[g]]] >= 0)):
                rec(pos + 1)
        label[e] = -1

    rec(0)
    if not out:
        return np.zeros((0, E), dtype=np.int64)
    arr = np.array(out)
    return arr[np.lexsort(arr.T[::-1])]


def _edge_order(lat):
    order, seen = [], set()
    for walk in lat.faces:
        for e, _ in walk:
            if e not in seen:
                seen.add(e)
                order.append(e)
    order += [e for e in range(lat.E) if e not in seen]
    return order


def gauge_orbits(G, labelings):
    """Orbits of tree-gauge-fixed labelings under global conjugation.

    Returns:
        list of (representative labeling, orbit size, stabilizer order).
    """
    t, inv = G.table, G.inverse
    remaining = {tuple(int(x) for x in row) for row in labelings}
    orbits = []
    for row in sorted(remaining):
        if row not in remaining:
            continue
        arr = np.array(row)
        images = {tuple(int(x) for x in t[t[g, arr], inv[g]]) for g in range(G.order)}
        remaining -= images
        stab = G.order // len(images)
        orbits.append((arr, len(images), stab))
    return orbits


def gauge_transform(G, lat, hol, tvert):
    """hol(e) -> t(head) hol(e) t(tail)^-1."""
    hol = np.asarray(hol)
    heads = np.array([h for _, h in lat.edges])
    tails = np.array([a for a, _ in lat.edges])
    tv = np.asarray(tvert)
    return G.table[G.table[tv[heads], hol], G.inverse[tv[tails]]]
