"""Linear algebra over prime fields F_q (matrices as lists of int rows)."""

from __future__ import annotations

import itertools


def inv(a, q):
    return pow(a, q - 2, q)


def rref(M, q):
    """Reduced row echelon form of M over F_q; returns (rows, pivot columns)."""
    A = [[x % q for x in row] for row in M]
    if not A:
        return [], []
    ncols = len(A[0])
    pivots = []
    r = 0
    for c in range(ncols):
        p = next((i for i in range(r, len(A)) if A[i][c]), None)
        if p is None:
            continue
        A[r], A[p] = A[p], A[r]
        f = inv(A[r][c], q)
        A[r] = [x * f % q for x in A[r]]
        for i in range(len(A)):
            if i != r and A[i][c]:
                g = A[i][c]
                A[i] = [(x - g * y) % q for x, y in zip(A[i], A[r])]
        pivots.append(c)
        r += 1
        if r == len(A):
            break
    return A[:r], pivots


def rank(M, q):
    return len(rref(M, q)[1])


def transpose(M):
    return [list(col) for col in zip(*M)] if M else []


def column_rank(M, cols, q):
    """Rank of the submatrix of M formed by the given columns."""
    if not cols or not M:
        return 0
    return rank([[row[c] for c in cols] for row in M], q)


def in_column_span(M, cols, v, q):
    """True when vector v (length = rows of M) lies in span of M[:, cols]."""
    if not any(x % q for x in v):
        return True
    if not cols:
        return False
    sub = [[M[i][c] for c in cols] for i in range(len(M))]
    return rank(sub, q) == rank([row + [v[i]] for i, row in enumerate(sub)], q)


def nonzero_vectors(r, q):
    return [v for v in itertools.product(range(q), repeat=r) if any(v)]


def subspaces(r, q, max_dim=None):
    """All subspaces of F_q^r, each as an RREF basis (tuple of row tuples).

    Ordered by dimension, then lexicographically.
    """
    out = [()]
    top = r if max_dim is None else min(r, max_dim)
    for k in range(1, top + 1):
        for piv in itertools.combinations(range(r), k):
            # free positions: for pivot row i, columns > piv[i] that are not pivots
            free = [(i, c) for i in range(k) for c in range(piv[i] + 1, r)
                    if c not in piv]
            for vals in itertools.product(range(q), repeat=len(free)):
                M = [[0] * r for _ in range(k)]
                for i, p in enumerate(piv):
                    M[i][p] = 1
                for (i, c), v in zip(free, vals):
                    M[i][c] = v
                out.append(tuple(tuple(row) for row in M))
    return out


def span_set(basis, q):
    """All vectors of the span of `basis` rows, as a frozenset of tuples."""
    if not basis:
        return frozenset()
    r = len(basis[0])
    vecs = set()
    for coeffs in itertools.product(range(q), repeat=len(basis)):
        vecs.add(tuple(sum(c * b[j] for c, b in zip(coeffs, basis)) % q
                       for j in range(r)))
    return frozenset(vecs)
