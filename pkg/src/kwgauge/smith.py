"""Integer Smith normal form with unimodular transforms.

``smith(M)`` returns ``S, P, Pinv, Q, Qinv`` with ``S = P @ M @ Q`` diagonal,
nonnegative, and each diagonal entry dividing the next. Arithmetic uses Python
integers (object arrays) so there is no overflow.
"""

from math import gcd

import numpy as np


class SmithForm:
    """Result of ``smith``.

    Attributes:
        diag: nonzero invariant factors d_1 | d_2 | ... (length = rank).
        shape: (rows, cols) of the input.
        P, Pinv, Q, Qinv: transforms (object arrays) or None.
    """

    def __init__(self, diag, shape, P=None, Pinv=None, Q=None, Qinv=None):
        self.diag = [int(d) for d in diag]
        self.shape = shape
        self.P, self.Pinv, self.Q, self.Qinv = P, Pinv, Q, Qinv

    @property
    def rank(self):
        return len(self.diag)

    def image_order_mod(self, n):
        """Order of the image of M acting on (Z/n)^cols."""
        out = 1
        for d in self.diag:
            out *= n // gcd(n, d)
        return out


def _eye(k):
    M = np.zeros((k, k), dtype=object)
    for i in range(k):
        M[i, i] = 1
    return M


def smith(M, transforms=True):
    """Smith normal form of an integer matrix."""
    A = np.array(np.asarray(M), dtype=object)
    if A.ndim != 2:
        raise ValueError("matrix expected")
    m, n = A.shape
    if transforms:
        P, Pinv, Q, Qinv = _eye(m), _eye(m), _eye(n), _eye(n)

    def swap_rows(i, j):
        if i == j:
            return
        A[[i, j]] = A[[j, i]]
        if transforms:
            P[[i, j]] = P[[j, i]]
            Pinv[:, [i, j]] = Pinv[:, [j, i]]

    def swap_cols(i, j):
        if i == j:
            return
        A[:, [i, j]] = A[:, [j, i]]
        if transforms:
            Q[:, [i, j]] = Q[:, [j, i]]
            Qinv[[i, j]] = Qinv[[j, i]]

    def add_row(dst, src, c):
        # row_dst += c * row_src
        A[dst] += c * A[src]
        if transforms:
            P[dst] += c * P[src]
            Pinv[:, src] -= c * Pinv[:, dst]

    def add_col(dst, src, c):
        A[:, dst] += c * A[:, src]
        if transforms:
            Q[:, dst] += c * Q[:, src]
            Qinv[src] -= c * Qinv[dst]

    diag = []
    for t in range(min(m, n)):
        sub = A[t:, t:]
        nz = np.argwhere(sub != 0)
        if nz.size == 0:
            break
        absvals = np.abs(sub[nz[:, 0], nz[:, 1]]).astype(object)
        k = int(np.argmin([int(x) for x in absvals]))
        swap_rows(t, t + int(nz[k, 0]))
        swap_cols(t, t + int(nz[k, 1]))
        while True:
            done = True
            for i in range(t + 1, m):
                if A[i, t] != 0:
                    q = A[i, t] // A[t, t]
                    add_row(i, t, -q)
                    if A[i, t] != 0:
                        done = False
            for j in range(t + 1, n):
                if A[t, j] != 0:
                    q = A[t, j] // A[t, t]
                    add_col(j, t, -q)
                    if A[t, j] != 0:
                        done = False
            if not done:
                sub = A[t:, t:]
                cand = [(abs(int(A[i, t])), i, t) for i in range(t, m) if A[i, t] != 0]
                cand += [(abs(int(A[t, j])), t, j) for j in range(t, n) if A[t, j] != 0]
                _, i, j = min(cand)
                swap_rows(t, i)
                swap_cols(t, j)
                continue
            piv = A[t, t]
            bad = np.argwhere((A[t + 1:, t + 1:] % piv) != 0) if piv not in (1, -1) else []
            if len(bad):
                add_row(t, t + 1 + int(bad[0][0]), 1)
                continue
            break
        if A[t, t] < 0:
            A[t] = -A[t]
            if transforms:
                P[t] = -P[t]
                Pinv[:, t] = -Pinv[:, t]
        diag.append(int(A[t, t]))
    if transforms:
        return SmithForm(diag, (m, n), P, Pinv, Q, Qinv)
    return SmithForm(diag, (m, n))


def invariant_factors(M):
    return smith(M, transforms=False).diag
