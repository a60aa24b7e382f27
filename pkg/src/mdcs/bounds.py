"""
Bounds on the region of entropic vectors.

Entropy vectors of n variables are indexed by nonempty subsets A of
{1..n}; subset A sits at coordinate sum_{i in A} 2^(i-1) - 1, i.e. the
usual binary counter shifted by one.  Subsets are handled as bit masks.

Outer bound: the Shannon cone Gamma_n, given by elemental inequalities.
Inner bounds: conic hulls of rank vectors of matroids representable over
F_q (scalar), or of such rank vectors with the ground set grouped into n
blocks (vector).
"""

from __future__ import annotations

import itertools
import json
import os
from dataclasses import dataclass, field

from . import gf
from .polycone import Cone

MAX_N = {2: 7, 3: 6}


class ResourceLimit(ValueError):
    """A computation larger than the supported sizes."""


def idx(mask):
    return mask - 1


def elemental_rows(n):
    """Elemental Shannon inequalities as sparse dicts {coord: coef}."""
    full = (1 << n) - 1
    rows = []
    for i in range(n):
        rest = full & ~(1 << i)
        row = {idx(full): 1}
        if rest:
            row[idx(rest)] = -1
        rows.append(row)
    for i, j in itertools.combinations(range(n), 2):
        others = full & ~(1 << i) & ~(1 << j)
        sub = others
        while True:
            A = sub
            row = {}
            for m, c in ((A | 1 << i, 1), (A | 1 << j, 1),
                         (A | 1 << i | 1 << j, -1), (A, -1)):
                if m:
                    row[idx(m)] = row.get(idx(m), 0) + c
            rows.append({k: v for k, v in row.items() if v})
            if sub == 0:
                break
            sub = (sub - 1) & others
    return rows


def shannon_rows(n, extended=False):
    """Elemental rows, or every monotonicity and submodularity instance."""
    if not extended:
        return elemental_rows(n)
    full = (1 << n) - 1
    rows = []
    seen = set()

    def add(row):
        row = {k: v for k, v in row.items() if v}
        key = tuple(sorted(row.items()))
        if row and key not in seen:
            seen.add(key)
            rows.append(row)
    for B in range(1, full + 1):
        sub = (B - 1) & B
        while True:
            row = {idx(B): 1}
            if sub:
                row[idx(sub)] = -1
            add(row)
            if sub == 0:
                break
            sub = (sub - 1) & B
    for C in range(1, full + 1):
        for D in range(C + 1, full + 1):
            if C & D == C or C & D == D:
                continue
            row = {}
            for m, c in ((C, 1), (D, 1), (C | D, -1), (C & D, -1)):
                if m:
                    row[idx(m)] = row.get(idx(m), 0) + c
            add(row)
    return rows


def dense(row, dim):
    v = [0] * dim
    for k, c in row.items():
        v[k] = c
    return tuple(v)


def shannon_outer(n, extended=False):
    if not 1 <= n <= 8:
        raise ValueError("n must be in 1..8")
    dim = (1 << n) - 1
    return Cone(dim, [dense(r, dim) for r in shannon_rows(n, extended)], [])


def is_matroid_rank(v, n=None):
    """Check cardinality, monotonicity and submodularity of an integer vector."""
    v = list(v)
    if n is None:
        n = (len(v) + 1).bit_length() - 1
    if len(v) != (1 << n) - 1:
        raise ValueError("vector length must be 2^n - 1")
    r = [0] + v
    full = 1 << n
    for A in range(full):
        if r[A] != int(r[A]) or r[A] < 0 or r[A] > bin(A).count("1"):
            return False
        for i in range(n):
            if not A >> i & 1:
                if r[A] > r[A | 1 << i]:
                    return False
    for A in range(full):
        for i, j in itertools.combinations(range(n), 2):
            if A >> i & 1 or A >> j & 1:
                continue
            if r[A | 1 << i] + r[A | 1 << j] < r[A | 1 << i | 1 << j] + r[A]:
                return False
    return True


def rank_vector(columns, q, blocks=None):
    """Rank vector of groups of columns (vectors in F_q^k) over F_q.

    `blocks[i]` lists the column indices forming variable i; by default
    each column is its own variable.
    """
    if blocks is None:
        blocks = [[j] for j in range(len(columns))]
    n = len(blocks)
    bases = [()] * (1 << n)
    ranks = [0] * (1 << n)
    for mask in range(1, 1 << n):
        i = (mask & -mask).bit_length() - 1
        basis = list(bases[mask ^ (1 << i)])
        for j in blocks[i]:
            v = list(columns[j])
            for p, b in basis:
                if v[p]:
                    f = v[p]
                    v = [(x - f * y) % q for x, y in zip(v, b)]
            p = next((t for t, x in enumerate(v) if x), None)
            if p is not None:
                f = gf.inv(v[p], q)
                basis.append((p, tuple(x * f % q for x in v)))
        bases[mask] = tuple(basis)
        ranks[mask] = len(basis)
    return tuple(ranks[1:])


@dataclass
class RankGenerator:
    """A representable (possibly grouped) rank vector with one representation.

    `matrix` has k rows; `column_map[i]` lists the columns of variable i.
    For grouped generators `partition` gives the ground-element blocks.
    """

    n: int
    ranks: tuple
    q: int
    matrix: tuple
    column_map: tuple
    partition: tuple = None

    def rank(self, mask):
        return self.ranks[mask - 1] if mask else 0

    def columns(self, i):
        return [[row[c] for c in self.column_map[i]] for row in self.matrix]

    def ground_ranks(self):
        """Rank vector of the underlying ungrouped matroid."""
        cols = list(zip(*self.matrix)) if self.matrix else []
        ncols = sum(len(c) for c in self.column_map)
        if not cols:
            return (0,) * ((1 << ncols) - 1)
        return rank_vector(cols, self.q)

    def to_record(self):
        return {"n": self.n, "q": self.q, "ranks": list(self.ranks),
                "matrix": [list(r) for r in self.matrix],
                "column_map": [list(c) for c in self.column_map],
                "partition": None if self.partition is None
                else [list(b) for b in self.partition]}

    @classmethod
    def from_record(cls, rec):
        part = rec.get("partition")
        return cls(rec["n"], tuple(rec["ranks"]), rec["q"],
                   tuple(tuple(r) for r in rec["matrix"]),
                   tuple(tuple(c) for c in rec["column_map"]),
                   None if part is None else tuple(tuple(b) for b in part))


def _check_size(n, q):
    if q not in MAX_N:
        raise ValueError("only q = 2 and q = 3 are supported")
    if n > MAX_N[q]:
        raise ResourceLimit(f"n = {n} too large for q = {q} (max {MAX_N[q]})")


def rank_generators(n, q):
    """Every F_q-representable rank vector on n labeled elements.

    Each such matroid of rank k is the column matroid of a k x n matrix of
    full row rank, and row operations do not change it, so it suffices to
    walk the reduced row echelon matrices (the k-dimensional subspaces of
    F_q^n taken as row spaces).  One representation is kept per rank
    vector; output sorted by rank vector.
    """
    _check_size(n, q)
    found = {}
    for basis in gf.subspaces(n, q):
        if not basis:
            ranks = (0,) * ((1 << n) - 1)
            cols = []
        else:
            cols = list(zip(*basis))
            ranks = rank_vector(cols, q)
        if ranks not in found:
            found[ranks] = RankGenerator(n, ranks, q, tuple(basis),
                                         tuple((j,) for j in range(n)))
    return [found[k] for k in sorted(found)]


def compositions(total, parts, allow_empty):
    lo = 0 if allow_empty else 1
    if parts == 0:
        if total == 0:
            yield ()
        return
    for first in range(lo, total - lo * (parts - 1) + 1):
        for rest in compositions(total - first, parts - 1, allow_empty):
            yield (first,) + rest


def group_ranks(ranks, blocks, n):
    """Project a ground-set rank vector onto unions of blocks."""
    out = []
    for mask in range(1, 1 << n):
        g = 0
        for i in range(n):
            if mask >> i & 1:
                for e in blocks[i]:
                    g |= 1 << e
        out.append(ranks[g - 1] if g else 0)
    return tuple(out)


def grouped_rank_generators(n, n_prime, q, allow_empty=False):
    """Rank vectors of n-variable groupings of n_prime-element F_q matroids.

    Since the set of labeled representable rank vectors is closed under
    relabeling, an ordered partition of the ground set can be taken to
    use consecutive blocks; only the block sizes matter.  With
    `allow_empty`, variables may receive no elements (rank identically 0).
    """
    if n_prime < n and not allow_empty:
        raise ValueError("n_prime must be at least n")
    _check_size(n_prime, q)
    base = rank_generators(n_prime, q)
    found = {}
    for sizes in compositions(n_prime, n, allow_empty):
        blocks = []
        start = 0
        for s in sizes:
            blocks.append(tuple(range(start, start + s)))
            start += s
        for g in base:
            ranks = group_ranks(g.ranks, blocks, n)
            if ranks not in found:
                found[ranks] = RankGenerator(n, ranks, q, g.matrix,
                                             tuple(blocks), tuple(blocks))
    return [found[k] for k in sorted(found)]


def has_u24_minor(v, n=None):
    """True when some minor (delete/contract) of the matroid is U_{2,4}."""
    ranks = v.ranks if isinstance(v, RankGenerator) else tuple(v)
    if n is None:
        n = (len(ranks) + 1).bit_length() - 1
    r = (0,) + tuple(ranks)
    for X in itertools.combinations(range(n), 4):
        xmask = sum(1 << i for i in X)
        rest = [i for i in range(n) if i not in X]
        for k in range(len(rest) + 1):
            for T in itertools.combinations(rest, k):
                t = sum(1 << i for i in T)
                ok = True
                for sub in range(1, 16):
                    Y = sum(1 << X[b] for b in range(4) if sub >> b & 1)
                    if r[Y | t] - r[t] != min(bin(sub).count("1"), 2):
                        ok = False
                        break
                if ok:
                    return True
    return False


# generator cache

def cache_dir():
    return os.environ.get("MDCS_CACHE_DIR",
                          os.path.join(os.path.expanduser("~"), ".cache", "mdcs"))


def save_generators(path, gens):
    with open(path, "w") as fh:
        for g in gens:
            fh.write(json.dumps(g.to_record(), sort_keys=True) + "\n")


def load_generators(path):
    with open(path) as fh:
        return [RankGenerator.from_record(json.loads(l)) for l in fh if l.strip()]


def cached_rank_generators(n, q, n_prime=None, directory=None):
    """rank_generators / grouped_rank_generators through an on-disk cache."""
    directory = directory or cache_dir()
    os.makedirs(directory, exist_ok=True)
    name = f"gen_n{n}_q{q}.jsonl" if n_prime is None \
        else f"gen_n{n}_np{n_prime}_q{q}.jsonl"
    path = os.path.join(directory, name)
    if os.path.exists(path):
        return load_generators(path)
    gens = rank_generators(n, q) if n_prime is None \
        else grouped_rank_generators(n, n_prime, q)
    save_generators(path, gens)
    return gens
