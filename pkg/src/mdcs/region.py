"""
Rate regions of MDCS instances.

Random variables are ordered Y_1..Y_K (sources) then U_1..U_|E| (encoder
outputs); variable v is bit v of a subset mask.  Lifted points are
(h_A for nonempty A in binary-counter order, R_1..R_|E|).  Rate regions
live in the coordinates (H(X_1)..H(X_K), R_1..R_|E|).

Outer bound: the Shannon cone intersected with the network constraints
and projected (by an LP-driven hull iteration, exact).

Inner bounds: the network constraints are equalities of Shannon type, so
a rank vector satisfies them iff every constraint evaluates to zero on it.
The constraint-satisfying representable rank vectors are produced
directly as subspace arrangements: sources get coordinate blocks of
F_q^r, each encoder a subspace of F_q^r, and a decoder is served when the
sum of its fan's subspaces contains the blocks of the sources it wants.

Superposition region: per-source rate splits, eliminated by
Fourier-Motzkin.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction

from . import gf
from .bounds import ResourceLimit, elemental_rows, idx, rank_vector
from .model import bits, validate
from .polycone import (Cone, canonicalize, compare, project_lp, normalize,
                       to_inequalities, idot, fourier_motzkin, subset)


SOURCE_NAMES = ("X", "Y", "Z")


def source_name(k, K):
    return SOURCE_NAMES[k] if K <= 3 else f"X_{k + 1}"


def encoder_name(e):
    return f"U_{e + 1}"


def variable_name(v, K):
    return source_name(v, K) if v < K else encoder_name(v - K)


# constraint sets

@dataclass
class ConstraintSet:
    """Network constraints over lifted coordinates (h..., R_1..R_E)."""

    K: int
    E: int
    L1: list = field(default_factory=list)    # equalities
    L2: list = field(default_factory=list)    # equalities
    L5: list = field(default_factory=list)    # equalities
    L4: list = field(default_factory=list)    # R_e - h(U_e) >= 0

    @property
    def N(self):
        return self.K + self.E

    @property
    def nvars(self):
        return (1 << self.N) - 1 + self.E

    def rate(self, e):
        return (1 << self.N) - 1 + e

    @property
    def equalities(self):
        return self.L1 + self.L2 + self.L5


def _add(row, mask, c):
    if mask:
        k = idx(mask)
        v = row.get(k, 0) + c
        if v:
            row[k] = v
        else:
            row.pop(k, None)


def conditional(A, B):
    """Sparse row of H(A|B) = h(A u B) - h(B)."""
    row = {}
    _add(row, A | B, 1)
    _add(row, B, -1)
    return row


def source_mask(K, upto=None):
    upto = K if upto is None else upto
    return (1 << upto) - 1


def fan_mask(K, fan):
    return fan << K


def network_constraints(inst):
    K, E = inst.num_sources, inst.num_encoders
    cs = ConstraintSet(K, E)
    Y = source_mask(K)
    if K > 1:
        row = {}
        _add(row, Y, 1)
        for k in range(K):
            _add(row, 1 << k, -1)
        cs.L1.append(row)
    for e in range(E):
        cs.L2.append(conditional(1 << (K + e), Y))
    for d in inst.decoders:
        cs.L5.append(conditional(source_mask(K, min(d.level, K)),
                                 fan_mask(K, d.fan)))
    for e in range(E):
        row = {cs.rate(e): 1}
        _add(row, 1 << (K + e), -1)
        cs.L4.append(row)
    return cs


# rate regions

@dataclass
class RateRegion:
    K: int
    E: int
    kind: str
    cone: Cone
    instance: object = None
    points: list = None        # inner bounds: generator points used

    @property
    def dim(self):
        return self.K + self.E

    def facets(self):
        return self.cone.inequalities

    def contains(self, x):
        return self.cone.contains(x)

    def nontrivial_facets(self):
        """Facets other than plain nonnegativity of one coordinate."""
        return [f for f in self.cone.inequalities
                if sum(1 for c in f if c) > 1 or any(c < 0 for c in f)]

    def render(self):
        return [render_inequality(f, self.K, self.E)
                for f in display_order(self.nontrivial_facets(), self.K)]

    def __str__(self):
        return "\n".join(self.render())


def display_order(facets, K):
    # rate part first (by number of rates), then by coefficients
    def key(f):
        rates = f[K:]
        return (sum(1 for c in rates if c), tuple(-c for c in rates),
                tuple(f[:K]))
    return sorted(facets, key=key)


def _term(c, name):
    if c == 1:
        return name
    return f"{c}{name}"


def render_inequality(f, K, E, ge="≥"):
    """Display the facet f.x >= 0 as `positive terms >= negative terms`.

    Rates come first on each side, so rate-region facets read
    `sum b_e R_e >= sum a_k H(X_k)`.
    """
    names = [f"H({source_name(k, K)})" for k in range(K)] + \
            [f"R_{e + 1}" for e in range(E)]
    order = list(range(K, K + E)) + list(range(K))
    left = [_term(f[i], names[i]) for i in order if f[i] > 0]
    right = [_term(-f[i], names[i]) for i in order if f[i] < 0]
    return f"{'+'.join(left) or '0'} {ge} {'+'.join(right) or '0'}"


def parse_inequality(text, K, E):
    """Inverse of render_inequality: returns the integer facet vector."""
    import re
    text = text.replace(">=", "≥")
    lhs, rhs = text.split("≥")
    vec = [Fraction(0)] * (K + E)
    names = {f"H({source_name(k, K)})": k for k in range(K)}
    names.update({f"R_{e + 1}": K + e for e in range(E)})

    def side(s, sign):
        s = s.strip()
        if s == "0":
            return
        for t in s.split("+"):
            m = re.fullmatch(r"\s*(\d*(?:/\d+)?)\s*(.+?)\s*", t)
            c = Fraction(m.group(1)) if m.group(1) else Fraction(1)
            vec[names[m.group(2)]] += sign * c
    side(lhs, 1)
    side(rhs, -1)
    return normalize(vec)


def trivial_facets(K, E):
    out = []
    for i in range(K + E):
        out.append(tuple(1 if j == i else 0 for j in range(K + E)))
    return out


def region_from_inequalities(K, E, texts, kind="listed", with_nonneg=True):
    """Cone built from display strings plus coordinate nonnegativity."""
    facets = [parse_inequality(t, K, E) for t in texts]
    if with_nonneg:
        facets += trivial_facets(K, E)
    return RateRegion(K, E, kind, canonicalize(Cone(K + E, facets, [])))


def _seeds(K, E):
    seeds = []
    for e in range(E):
        seeds.append(tuple(1 if j == K + e else 0 for j in range(K + E)))
    for k in range(K):
        seeds.append(tuple(1 if j == k else 0 for j in range(K)) + (1,) * E)
    return seeds


def outer_region(inst, return_certificates=False):
    """Shannon outer bound on the rate region."""
    K, E = inst.num_sources, inst.num_encoders
    if K + E > 7:
        raise ResourceLimit("outer_region supports N = K + |E| <= 7")
    cs = network_constraints(inst)
    rows = list(elemental_rows(cs.N)) + cs.L4
    keep = [idx(1 << k) for k in range(K)] + [cs.rate(e) for e in range(E)]
    cone, certs = project_lp(rows, cs.equalities, cs.nvars, keep, _seeds(K, E))
    reg = RateRegion(K, E, "outer", cone, inst)
    if return_certificates:
        return reg, certs
    return reg


# inner bounds

@dataclass
class NetworkGenerator:
    """A constraint-satisfying subspace arrangement and its rank point.

    Sources get consecutive coordinate blocks of F_q^r (sizes
    `source_dims`); `encoders[e]` is a basis (rows) of U_e.
    """

    q: int
    source_dims: tuple
    encoders: tuple

    @property
    def r(self):
        return sum(self.source_dims)

    @property
    def point(self):
        return tuple(self.source_dims) + tuple(len(b) for b in self.encoders)

    def matrix(self):
        """r x (sum d_e) matrix; columns are the encoder basis vectors."""
        cols = [v for b in self.encoders for v in b]
        return [[c[i] for c in cols] for i in range(self.r)]

    def column_map(self):
        out, start = [], 0
        for b in self.encoders:
            out.append(tuple(range(start, start + len(b))))
            start += len(b)
        return out

    def ranks(self):
        """Full rank vector over Y_1..Y_K, U_1..U_E."""
        cols, blocks, off = [], [], 0
        for k, dk in enumerate(self.source_dims):
            blk = []
            for i in range(dk):
                cols.append(tuple(1 if j == off + i else 0 for j in range(self.r)))
                blk.append(len(cols) - 1)
            blocks.append(blk)
            off += dk
        for b in self.encoders:
            blk = []
            for v in b:
                cols.append(tuple(v))
                blk.append(len(cols) - 1)
            blocks.append(blk)
        if self.r == 0:
            return (0,) * ((1 << len(blocks)) - 1)
        return rank_vector(cols, self.q, blocks)

    def key(self):
        m = self.matrix()
        return tuple(x for row in m for x in row)


def _cost(d, allow_empty):
    return d if allow_empty else max(d, 1)


def network_generators(inst, q, n_prime=None, allow_empty=False):
    """All constraint-satisfying arrangements, one per distinct rank point.

    `n_prime=None` gives scalar codes (every variable of dimension <= 1).
    Otherwise variable i uses a block of s_i >= dim_i ground elements
    (s_i >= 1 unless `allow_empty`) with sum s_i <= n_prime.  For each
    point the representation with the lexicographically smallest matrix
    is kept.
    """
    K, E = inst.num_sources, inst.num_encoders
    N = K + E
    scalar = n_prime is None
    budget = N if scalar else n_prime
    maxd = 1 if scalar else budget
    decs = sorted(inst.decoders, key=lambda d: max(bits(d.fan)))
    best = {}
    base_cost = 0 if allow_empty else E
    for sdims in itertools.product(range(maxd + 1), repeat=K):
        scost = sum(_cost(d, allow_empty) for d in sdims)
        if scost + base_cost > budget:
            continue
        r = sum(sdims)
        if r == 0:
            continue
        left = budget - scost
        top = min(r, maxd, left if allow_empty else left - (E - 1))
        subs = gf.subspaces(r, q, max_dim=max(top, 0))
        units = [tuple(1 if j == i else 0 for j in range(r)) for i in range(r)]
        prefix = [sum(sdims[:l]) for l in range(K + 1)]
        memo = {}

        def served(choice, d):
            key = (tuple(choice[e] for e in bits(d.fan)), d.level)
            if key in memo:
                return memo[key]
            rows = [v for e in bits(d.fan) for v in subs[choice[e]]]
            want = units[:prefix[min(d.level, K)]]
            if not want:
                ok = True
            elif not rows:
                ok = False
            else:
                ok = gf.rank(rows + want, q) == gf.rank(rows, q)
            memo[key] = ok
            return ok

        by_last = {}
        for d in decs:
            by_last.setdefault(max(bits(d.fan)), []).append(d)
        choice = []

        def rec(e, spent):
            if e == E:
                gen = NetworkGenerator(q, tuple(sdims),
                                       tuple(subs[c] for c in choice))
                p = gen.point
                if p not in best or gen.key() < best[p].key():
                    best[p] = gen
                return
            for c, b in enumerate(subs):
                cost = _cost(len(b), allow_empty)
                if spent + cost > left or len(b) > maxd:
                    continue
                choice.append(c)
                if all(served(choice, d) for d in by_last.get(e, [])):
                    rec(e + 1, spent + cost)
                choice.pop()
        rec(0, 0)
    return [best[p] for p in sorted(best)]


def inner_cone(K, E, points):
    rays = [tuple(p) for p in points if any(p)]
    for e in range(E):
        rays.append(tuple(1 if j == K + e else 0 for j in range(K + E)))
    return canonicalize(Cone(K + E, rays=sorted(set(rays)), lineality=[]))


def inner_region_scalar(inst, q):
    gens = network_generators(inst, q)
    K, E = inst.num_sources, inst.num_encoders
    cone = inner_cone(K, E, [g.point for g in gens])
    return RateRegion(K, E, f"scalar:{q}", cone, inst,
                      points=[g.point for g in gens])


def inner_region_vector(inst, q, n_prime, allow_empty=False):
    gens = network_generators(inst, q, n_prime, allow_empty=allow_empty)
    K, E = inst.num_sources, inst.num_encoders
    cone = inner_cone(K, E, [g.point for g in gens])
    return RateRegion(K, E, f"vector:{q}:{n_prime}", cone, inst,
                      points=[g.point for g in gens])


def filter_rank_vectors(inst, rank_vectors):
    """Projected points of rank vectors satisfying all network equalities.

    This is the direct definition of the inner bound and serves as a check
    on `network_generators`.
    """
    cs = network_constraints(inst)
    K, E = cs.K, cs.E
    out = set()
    for v in rank_vectors:
        if all(sum(c * v[k] for k, c in row.items()) == 0
               for row in cs.equalities):
            out.add(tuple(v[idx(1 << i)] for i in range(K + E)))
    return sorted(out)


def satisfying_generators(inst, generators):
    """RankGenerator objects whose rank vectors satisfy the network equalities."""
    cs = network_constraints(inst)
    return [g for g in generators
            if all(sum(c * g.ranks[k] for k, c in row.items()) == 0
                   for row in cs.equalities)]


def superposition_region(inst):
    K, E = inst.num_sources, inst.num_encoders
    # variables: H_1..H_K, R_1..R_E, then R_e^k at K + E + e*K + k
    n = K + E + E * K
    sv = lambda e, k: K + E + e * K + k
    ineq, eqs = [], []
    for k in range(K):
        ineq.append(tuple(1 if j == k else 0 for j in range(n)))
    for e in range(E):
        for k in range(K):
            ineq.append(tuple(1 if j == sv(e, k) else 0 for j in range(n)))
        row = [0] * n
        row[K + e] = 1
        for k in range(K):
            row[sv(e, k)] = -1
        eqs.append(tuple(row))
    for d in inst.decoders:
        for i in range(min(d.level, K)):
            row = [0] * n
            row[i] = -1
            for e in bits(d.fan):
                row[sv(e, i)] = 1
            ineq.append(tuple(row))
    drop = list(range(K + E, n))
    red_i, red_e = fourier_motzkin(ineq, eqs, drop)
    keep = list(range(K + E))
    cone = canonicalize(Cone(K + E, [tuple(a[i] for i in keep) for a in red_i],
                             [tuple(a[i] for i in keep) for a in red_e]))
    return RateRegion(K, E, "superposition", cone, inst)


def region(inst, kind):
    """Dispatch on a kind string: outer | scalar:q | vector:q:N' | superposition."""
    if kind == "outer":
        return outer_region(inst)
    if kind == "superposition":
        return superposition_region(inst)
    parts = kind.split(":")
    if parts[0] == "scalar":
        return inner_region_scalar(inst, int(parts[1]))
    if parts[0] == "vector":
        q = int(parts[1])
        np_ = parts[2]
        N = inst.num_sources + inst.num_encoders
        n_prime = N + int(np_[2:]) if np_.startswith("N+") else int(np_)
        return inner_region_vector(inst, q, n_prime)
    raise ValueError(f"unknown region kind {kind!r}")


@dataclass
class SufficiencyRecord:
    flags: dict
    witnesses: dict


def witness_ray(outer, inner):
    """An extreme ray of `outer` outside `inner` (smallest integer scaling)."""
    for r in outer.cone.rays:
        if not inner.cone.contains(r):
            return r
    return None


def classify_sufficiency(inst, kinds, outer=None, cache=None):
    outer = outer or outer_region(inst)
    flags, wit = {}, {}
    for kind in kinds:
        reg = cache[kind] if cache and kind in cache else region(inst, kind)
        rel = compare(reg.cone, outer.cone)
        flags[kind] = rel == "equal"
        if rel != "equal":
            wit[kind] = witness_ray(outer, reg)
    return SufficiencyRecord(flags, wit)


def intersect_zero(reg, coord):
    """Region intersected with coordinate `coord` = 0, then that coordinate dropped."""
    from .polycone import intersect, project
    e = tuple(1 if j == coord else 0 for j in range(reg.dim))
    c = intersect(reg.cone, equalities=[e])
    keep = [j for j in range(reg.dim) if j != coord]
    return project(c, keep)


def drop_coordinate(reg, coord):
    from .polycone import project
    keep = [j for j in range(reg.dim) if j != coord]
    return project(reg.cone, keep)
