"""
Multilevel diversity coding system (MDCS) instances.

An instance has K prioritized sources X_1..X_K, encoders E_1..E_|E| that
all see every source, and decoders.  A decoder of level l reads the
encoders in its fan and must recover X_1..X_l.

Fans are stored as integers: bit i-1 set means encoder E_i is in the fan,
so {E_1, E_3} is 0b101 = 5.  Levels are 1-based.

The configuration matrix has one row per level holding that level's fans;
rows are zero padded at the end to a common length.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field


@dataclass(frozen=True, order=True)
class Decoder:
    level: int
    fan: int

    def __post_init__(self):
        if self.level < 1:
            raise ValueError("decoder level must be >= 1")
        if self.fan <= 0:
            raise ValueError("decoder fan must be a nonempty encoder set")


def bits(mask):
    """Indices (0-based) of the set bits of `mask`."""
    out = []
    i = 0
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return out


def is_subset(a, b):
    return a & ~b == 0


@dataclass
class ValidityReport:
    violations: list = field(default_factory=list)

    @property
    def ok(self):
        return not self.violations

    def conditions(self):
        return sorted({v[0] for v in self.violations})

    def __bool__(self):
        return self.ok

    def __str__(self):
        if self.ok:
            return "ok"
        return "; ".join(f"{c}: {w}" for c, w in self.violations)


@dataclass(frozen=True)
class MdcsInstance:
    """An MDCS instance (K sources, |E| encoders, decoders).

    Decoders are kept sorted by (level, fan) so that two instances with the
    same decoder multiset compare equal.
    """

    num_sources: int
    num_encoders: int
    decoders: tuple

    def __init__(self, num_sources, num_encoders, decoders):
        decs = tuple(sorted(d if isinstance(d, Decoder) else Decoder(*d)
                            for d in decoders))
        object.__setattr__(self, "num_sources", int(num_sources))
        object.__setattr__(self, "num_encoders", int(num_encoders))
        object.__setattr__(self, "decoders", decs)
        for d in decs:
            if d.fan >> self.num_encoders:
                raise ValueError(f"fan {d.fan} uses an encoder beyond "
                                 f"E_{self.num_encoders}")

    @property
    def K(self):
        return self.num_sources

    @property
    def E(self):
        return self.num_encoders

    @property
    def N(self):
        return self.num_sources + self.num_encoders

    def encoder_fan(self, e):
        """Indices of decoders reading encoder `e` (0-based)."""
        return frozenset(i for i, d in enumerate(self.decoders)
                         if d.fan >> e & 1)

    def decoders_at(self, level):
        return [d for d in self.decoders if d.level == level]

    def permuted(self, perm):
        """Relabel encoder i as perm[i] (0-based)."""
        decs = []
        for d in self.decoders:
            fan = 0
            for i in bits(d.fan):
                fan |= 1 << perm[i]
            decs.append(Decoder(d.level, fan))
        return MdcsInstance(self.num_sources, self.num_encoders, decs)

    def __str__(self):
        return to_text(self)


def validate(inst):
    """Check conditions C1-C5 (and K <= 2^|E| - 1); never raises."""
    rep = ValidityReport()
    K, nE = inst.num_sources, inst.num_encoders
    if K > 2 ** nE - 1:
        rep.violations.append(("K", f"K={K} exceeds 2^{nE}-1"))
    decs = inst.decoders
    for a, b in itertools.combinations(range(len(decs)), 2):
        da, db = decs[a], decs[b]
        if da.level == db.level:
            if is_subset(da.fan, db.fan) or is_subset(db.fan, da.fan):
                rep.violations.append(("C1", (a, b)))
        else:
            lo, hi = (da, db) if da.level < db.level else (db, da)
            if is_subset(hi.fan, lo.fan):
                ia, ib = (a, b) if lo is da else (b, a)
                rep.violations.append(("C2", (ib, ia)))
    fans = [inst.encoder_fan(e) for e in range(nE)]
    for e, f in enumerate(fans):
        if not f:
            rep.violations.append(("C3", e + 1))
    for e, f in itertools.combinations(range(nE), 2):
        if fans[e] and fans[e] == fans[f]:
            rep.violations.append(("C4", (e + 1, f + 1)))
    levels = {d.level for d in decs}
    for l in range(1, K + 1):
        if l not in levels:
            rep.violations.append(("C5", l))
    for i, d in enumerate(decs):
        if d.level > K:
            rep.violations.append(("level", (i, d.level)))
    return rep


def to_config_matrix(inst):
    rows = [sorted(d.fan for d in inst.decoders_at(l))
            for l in range(1, inst.num_sources + 1)]
    width = max((len(r) for r in rows), default=0)
    return tuple(tuple(r + [0] * (width - len(r))) for r in rows)


def from_config_matrix(matrix, num_encoders=None, check=True):
    """Decode a configuration matrix; zeros anywhere in a row are padding."""
    rows = [[int(x) for x in row] for row in matrix]
    if num_encoders is None:
        top = max((x for r in rows for x in r), default=1)
        num_encoders = max(top.bit_length(), 1)
    decs = [Decoder(l, x) for l, row in enumerate(rows, 1) for x in row if x]
    inst = MdcsInstance(len(rows), num_encoders, decs)
    if check:
        rep = validate(inst)
        if not rep.ok:
            raise ValueError(f"invalid configuration matrix: {rep}")
    return inst


def _key(inst):
    return tuple(tuple(sorted(d.fan for d in inst.decoders_at(l)))
                 for l in range(1, inst.num_sources + 1))


def canonical_form(inst):
    """Lexicographically smallest configuration matrix over encoder relabelings."""
    best = None
    for perm in itertools.permutations(range(inst.num_encoders)):
        k = _key(inst.permuted(perm))
        if best is None or k < best:
            best = k
    width = max((len(r) for r in best), default=0)
    return tuple(tuple(list(r) + [0] * (width - len(r))) for r in best)


def canonical_instance(inst):
    return from_config_matrix(canonical_form(inst), inst.num_encoders,
                              check=False)


def is_isomorphic(a, b):
    if (a.num_sources, a.num_encoders) != (b.num_sources, b.num_encoders):
        return False
    if len(a.decoders) != len(b.decoders):
        return False
    target = _key(b)
    return any(_key(a.permuted(p)) == target
               for p in itertools.permutations(range(a.num_encoders)))


def instance_id(inst):
    """Short stable identifier of the isomorphism class."""
    rows = canonical_form(inst)
    body = "-".join(".".join(str(x) for x in r if x) for r in rows)
    return f"k{inst.num_sources}e{inst.num_encoders}_{body}"


# text and record formats

def to_text(inst):
    rows = to_config_matrix(inst)
    body = " ; ".join(" ".join(str(x) for x in r if x) for r in rows)
    return f"{inst.num_sources} {inst.num_encoders} | {body}"


def from_text(line, check=True):
    head, _, body = line.partition("|")
    K, nE = (int(t) for t in head.split())
    rows = [[int(t) for t in part.split()] for part in body.split(";")]
    if len(rows) != K:
        raise ValueError(f"expected {K} rows, got {len(rows)}")
    return from_config_matrix(rows, nE, check=check)


def to_record(inst):
    return {
        "K": inst.num_sources,
        "E": inst.num_encoders,
        "config": [list(r) for r in to_config_matrix(inst)],
    }


def from_record(rec, check=True):
    return from_config_matrix(rec["config"], rec["E"], check=check)


def dumps(inst):
    return json.dumps(to_record(inst), sort_keys=True)
