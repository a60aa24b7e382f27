"""
Linear block codes over F_q achieving points of inner-bound regions.

A basic solution is a constraint-satisfying representable arrangement
written as a matrix C: one row per source digit (sources with zero
entropy have no rows) and one group of columns per encoder, so that
U_e = x C[:, I(U_e)].  A target rate point is split into a conic
combination of basic solution points, scaled to integer repetition
counts t_i with common block length L, and the repeated basic solutions
are stacked block diagonally; columns are then regrouped per encoder.

A decoder recovers source digit j exactly when the unit vector e_j lies
in the column space of its fan's columns.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from math import lcm

from . import gf
from .model import bits
from .polycone import conic_decompose
from .region import NetworkGenerator, network_generators, source_name


@dataclass
class BasicSolution:
    point: tuple
    q: int
    source_dims: tuple
    matrix: list           # rows = source digits, semi-simplified
    column_map: list       # per encoder, column indices into matrix
    vector: bool = False

    @property
    def rows(self):
        return sum(self.source_dims)

    @property
    def ncols(self):
        return sum(len(c) for c in self.column_map)


def basic_solution(inst, gen):
    """Basic solution from a NetworkGenerator, or from a RankGenerator.

    For a RankGenerator (variables Y_1..Y_K, U_1..U_E with columns given
    by `column_map`), the row space is rebased so that a basis of the
    source columns becomes the identity on the source digits.
    """
    K, E = inst.num_sources, inst.num_encoders
    if isinstance(gen, NetworkGenerator):
        m = gen.matrix()
        vec = any(len(b) > 1 for b in gen.encoders) or \
            any(d > 1 for d in gen.source_dims)
        return BasicSolution(gen.point, gen.q, gen.source_dims, m,
                             gen.column_map(), vec)
    return _from_rank_generator(inst, gen)


def _from_rank_generator(inst, gen):
    K, E = inst.num_sources, inst.num_encoders
    q = gen.q
    A = [list(r) for r in gen.matrix]
    A, _ = gf.rref(A, q) if A else ([], [])
    point = tuple(gen.rank(1 << v) for v in range(K + E))
    if not A:
        return BasicSolution(point, q, (0,) * K, [],
                             [() for _ in range(E)], False)
    # choose independent source columns, source by source
    chosen, sdims = [], []
    for k in range(K):
        picked = 0
        for c in gen.column_map[k]:
            trial = chosen + [c]
            if gf.column_rank(A, trial, q) == len(trial):
                chosen.append(c)
                picked += 1
        sdims.append(picked)
    r = len(chosen)
    if r != len(A):
        raise ValueError("source columns do not span the representation")
    # T A[:, chosen] = I  ->  T = inverse of A[:, chosen]
    B = [[A[i][c] for c in chosen] for i in range(r)]
    aug = [B[i] + [1 if j == i else 0 for j in range(r)] for i in range(r)]
    R, piv = gf.rref(aug, q)
    T = [row[r:] for row in R]
    ucols, cmap = [], []
    for e in range(E):
        idxs = []
        for c in gen.column_map[K + e]:
            col = [sum(T[i][t] * A[t][c] for t in range(r)) % q for i in range(r)]
            block = [ucols[j] for j in idxs] + [col]
            if gf.rank(block, q) < len(block):
                continue     # keep a basis of each encoder block
            ucols.append(col)
            idxs.append(len(ucols) - 1)
        cmap.append(tuple(idxs))
    m = [[col[i] for col in ucols] for i in range(r)]
    vec = any(len(c) > 1 for c in gen.column_map)
    return BasicSolution(point, q, tuple(sdims), m, cmap, vec)


@dataclass
class BlockCode:
    q: int
    L: int
    source_rows: list          # per source, generator row indices
    generator: list            # rows x columns over F_q
    column_map: list           # per encoder, column indices
    provenance: list = field(default_factory=list)   # (point, t_i)

    @property
    def rows(self):
        return len(self.generator)

    @property
    def ncols(self):
        if self.generator:
            return len(self.generator[0])
        return 1 + max((c for cols in self.column_map for c in cols), default=-1)

    def block(self, e):
        return [[row[c] for c in self.column_map[e]] for row in self.generator]

    def rates(self):
        """Transmitted symbols per source symbol, per encoder."""
        return [Fraction(len(c), self.L) for c in self.column_map]

    def entropy_rates(self):
        """H_q(U_e) / L for uniform sources; at most the rate."""
        return [Fraction(gf.column_rank(self.generator, list(c), self.q), self.L)
                for c in self.column_map]

    def entropies(self):
        return [Fraction(len(r), self.L) for r in self.source_rows]


def assemble(q, K, E, pieces):
    """Block-diagonal stacking of (BasicSolution, repetitions) pieces."""
    total_rows = sum(b.rows * t for b, t in pieces)
    source_rows = [[] for _ in range(K)]
    enc_cols = [[] for _ in range(E)]    # (row offset, basic, column)
    row = 0
    for b, t in pieces:
        for _ in range(t):
            off = 0
            for k in range(K):
                source_rows[k].extend(range(row + off, row + off + b.source_dims[k]))
                off += b.source_dims[k]
            for e in range(E):
                for c in b.column_map[e]:
                    enc_cols[e].append((row, b, c))
            row += b.rows
    cols, cmap = [], []
    for e in range(E):
        idxs = []
        for r0, b, c in enc_cols[e]:
            col = [0] * total_rows
            for i in range(b.rows):
                col[r0 + i] = b.matrix[i][c]
            cols.append(col)
            idxs.append(len(cols) - 1)
        cmap.append(idxs)
    G = [[col[i] for col in cols] for i in range(total_rows)]
    return G, source_rows, cmap


def construct_code(inst, target, q=2, n_prime=None, generators=None):
    """Block code whose (H_q(X_k), R_e) equals the rational `target` exactly.

    `target` is (H(X_1)..H(X_K), R_1..R_E).  Basic solutions come from
    `generators` (NetworkGenerator or RankGenerator objects) or from the
    scalar (n_prime None) or vector arrangements of the instance.
    """
    K, E = inst.num_sources, inst.num_encoders
    target = [Fraction(t) for t in target]
    if len(target) != K + E:
        raise ValueError("target must have K + |E| coordinates")
    if generators is None:
        generators = network_generators(inst, q, n_prime)
    basics = [basic_solution(inst, g) for g in generators]
    basics = [b for b in basics if any(b.point)]
    if not any(target):
        return BlockCode(q, 1, [[] for _ in range(K)], [],
                         [[] for _ in range(E)], [])
    alpha = conic_decompose(target, [b.point for b in basics])
    slack = [Fraction(0)] * E
    if alpha is None:
        # rates above the generator hull: pad with extra independent digits
        units = [tuple(1 if j == K + e else 0 for j in range(K + E))
                 for e in range(E)]
        beta = conic_decompose(target, [b.point for b in basics] + units)
        if beta is None:
            raise ValueError("target lies outside the inner bound")
        alpha, slack = beta[:len(basics)], beta[len(basics):]
    L = 1
    for a in list(alpha) + list(slack):
        L = lcm(L, a.denominator)
    pieces = [(b, int(a * L)) for b, a in zip(basics, alpha) if a]
    G, srows, cmap = assemble(q, K, E, pieces)
    code = BlockCode(q, L, srows, G, cmap,
                     [(b.point, t) for b, t in pieces])
    for e, s in enumerate(slack):
        need = int(s * L)
        if need:
            _pad(code, e, need)
    return code


def _pad(code, e, need):
    """Add `need` columns to encoder e.

    Each new column is a unit vector outside the span of the encoder's
    columns when one exists (so it carries new information), otherwise
    the zero column (an idle symbol).
    """
    q = code.q
    for _ in range(need):
        cols = list(code.column_map[e])
        new = [0] * code.rows
        for j in range(code.rows):
            unit = [1 if i == j else 0 for i in range(code.rows)]
            if not gf.in_column_span(code.generator, cols, unit, q):
                new = unit
                break
        for i, row in enumerate(code.generator):
            row.append(new[i])
        code.column_map[e].append(code.ncols - (1 if code.generator else 0))


@dataclass
class VerificationReport:
    decoders: list          # (decoder, passed)
    entropies: list
    rates: list

    @property
    def ok(self):
        return all(p for _, p in self.decoders)


def decoder_recovers(code, d, K):
    cols = [c for e in bits(d.fan) for c in code.column_map[e]]
    want = [j for k in range(min(d.level, K)) for j in code.source_rows[k]]
    if not want:
        return True
    if not cols:
        return False
    sub = [[row[c] for c in cols] for row in code.generator]
    aug = [sub[i] + [1 if i == j else 0 for j in want]
           for i in range(code.rows)]
    return gf.rank(aug, code.q) == gf.rank(sub, code.q)


def verify_code(inst, code):
    K = inst.num_sources
    if len(code.source_rows) != K or len(code.column_map) != inst.num_encoders:
        raise ValueError("code does not match the instance dimensions")
    res = [(d, decoder_recovers(code, d, K)) for d in inst.decoders]
    return VerificationReport(res, code.entropies(), code.rates())


def brute_force_recovers(inst, code, limit=200000):
    """Exhaustive decoding check: per decoder, demanded digits are a function
    of the observed encoder outputs."""
    q, n = code.q, code.rows
    if q ** n > limit:
        raise ValueError("too many source words for exhaustive check")
    K = inst.num_sources
    out = []
    for d in inst.decoders:
        cols = [c for e in bits(d.fan) for c in code.column_map[e]]
        want = [j for k in range(min(d.level, K)) for j in code.source_rows[k]]
        seen = {}
        ok = True
        for x in itertools.product(range(q), repeat=n):
            obs = tuple(sum(x[i] * code.generator[i][c] for i in range(n)) % q
                        for c in cols)
            val = tuple(x[j] for j in want)
            if seen.setdefault(obs, val) != val:
                ok = False
                break
        out.append((d, ok))
    return out


# text format

def dumps(code, K=None):
    K = len(code.source_rows) if K is None else K
    lines = [f"field {code.q} | L {code.L} | rows {code.rows} | "
             f"encoders {len(code.column_map)}"]
    for k, rows in enumerate(code.source_rows):
        lines.append(f"source {k + 1}: " + " ".join(map(str, rows)))
    for e, cols in enumerate(code.column_map):
        lines.append(f"encoder {e + 1}: " + " ".join(map(str, cols)))
    lines.append("matrix")
    for row in code.generator:
        lines.append(" ".join(map(str, row)))
    return "\n".join(lines) + "\n"


def loads(text):
    lines = [l.strip() for l in text.strip().splitlines()]
    head = dict(p.split() for p in lines[0].split("|"))
    q, L = int(head["field"]), int(head["L"])
    srows, cmap = [], []
    i = 1
    while lines[i].startswith("source"):
        srows.append([int(t) for t in lines[i].split(":", 1)[1].split()])
        i += 1
    while lines[i].startswith("encoder"):
        cmap.append([int(t) for t in lines[i].split(":", 1)[1].split()])
        i += 1
    assert lines[i] == "matrix"
    G = [[int(t) for t in l.split()] for l in lines[i + 1:] if l]
    return BlockCode(q, L, srows, G, cmap)


def describe(code, K):
    """Short human-readable summary of a code."""
    parts = [f"F_{code.q} block code, L={code.L}, {code.rows} source digits"]
    for k, rows in enumerate(code.source_rows):
        parts.append(f"  {source_name(k, K)}: {len(rows)} digits")
    for e, r in enumerate(code.rates()):
        parts.append(f"  U_{e + 1}: rate {r}")
    return "\n".join(parts)
