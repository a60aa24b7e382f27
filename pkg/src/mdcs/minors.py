"""
Embedding operations on MDCS instances, minors and forbidden minors.

Four operations shrink an instance:

    delete_source(k)      X_k is no longer demanded; decoders that needed
                          it drop one level, and any decoder now doing the
                          job of a decoder with a smaller fan is removed.
    contract_encoder(e)   every decoder reading E_e is removed (E_e is
                          replaced by direct access to all sources).
    delete_encoder(e)     decoders reading E_e keep their level with E_e
                          taken out of their fan.  A decoder left with an
                          empty fan forces deletion of the sources it
                          demanded.
    unify_encoders(i, j)  E_j is identified with E_i: decoders reading E_j
                          read E_i instead.

After each operation, a decoder is removed when another decoder with a
fan inside its own recovers at least as many sources.

Operations act on 0-based indices of the instance they are applied to.
Results are well formed (levels >= 1, fans nonempty) but need not satisfy
C1-C5; `apply(..., check=True)` raises InvalidMinor in that case.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from .model import Decoder, MdcsInstance, canonical_form, is_subset, validate

KINDS = ("delete_source", "contract_encoder", "delete_encoder", "unify_encoders")

MODES = {
    "scalar": ("delete_source", "contract_encoder", "delete_encoder"),
    "superposition": KINDS,
    "vector": KINDS,
}


class InvalidMinor(ValueError):
    def __init__(self, inst, report):
        super().__init__(f"operation result violates {report}")
        self.instance = inst
        self.report = report


@dataclass(frozen=True)
class MinorOp:
    kind: str
    a: int
    b: int = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown operation {self.kind!r}")
        if (self.kind == "unify_encoders") != (self.b is not None):
            raise ValueError("unify_encoders takes two operands, the others one")

    def __str__(self):
        if self.kind == "delete_source":
            return f"delete X_{self.a + 1}"
        if self.kind == "unify_encoders":
            return f"unify E_{self.b + 1} into E_{self.a + 1}"
        verb = "contract" if self.kind == "contract_encoder" else "delete"
        return f"{verb} E_{self.a + 1}"


def _drop_bit(fan, e):
    low = fan & ((1 << e) - 1)
    return low | (fan >> (e + 1)) << e


def _reduce(pairs):
    """Drop decoders made redundant by another decoder.

    (l, f) is redundant when some other (l2, f2) has f2 a subset of f and
    l2 >= l: whatever reads f can run that decoder.  Decoders with level 0
    demand nothing and are dropped as well.
    """
    pairs = sorted({(l, f) for l, f in pairs if l > 0})
    return [(l, f) for l, f in pairs
            if not any((l2, f2) != (l, f) and is_subset(f2, f) and l2 >= l
                       for l2, f2 in pairs)]


def _build(K, E, pairs):
    return MdcsInstance(K, E, [Decoder(l, f) for l, f in _reduce(pairs)])


def delete_source(inst, k):
    K = inst.num_sources
    if not 0 <= k < K:
        raise IndexError(f"no source X_{k + 1}")
    # decoders demanding X_k (level > k) lose one level
    return _build(K - 1, inst.num_encoders,
                  [(d.level - 1 if d.level > k else d.level, d.fan)
                   for d in inst.decoders])


def contract_encoder(inst, e):
    if not 0 <= e < inst.num_encoders:
        raise IndexError(f"no encoder E_{e + 1}")
    keep = [(d.level, _drop_bit(d.fan, e)) for d in inst.decoders
            if not d.fan >> e & 1]
    return _build(inst.num_sources, inst.num_encoders - 1, keep)


def delete_encoder(inst, e):
    out, _ = _delete_encoder(inst, e)
    return out


def _delete_encoder(inst, e):
    if not 0 <= e < inst.num_encoders:
        raise IndexError(f"no encoder E_{e + 1}")
    bit = 1 << e
    # a decoder that read only E_e must recover X_1..X_l from nothing:
    # those sources are deleted too, together with every decoder it supersedes
    cascade = max((d.level for d in inst.decoders if d.fan == bit), default=0)
    keep = [(d.level - cascade, _drop_bit(d.fan & ~bit, e))
            for d in inst.decoders if d.fan != bit]
    return _build(inst.num_sources - cascade, inst.num_encoders - 1, keep), cascade


def unify_encoders(inst, i, j):
    """Identify E_j with E_i and remove E_j."""
    E = inst.num_encoders
    if not (0 <= i < E and 0 <= j < E) or i == j:
        raise IndexError("unification needs two distinct encoders")
    bi, bj = 1 << i, 1 << j
    keep = []
    for d in inst.decoders:
        f = (d.fan | bi) & ~bj if d.fan & bj else d.fan
        keep.append((d.level, _drop_bit(f, j)))
    return _build(inst.num_sources, E - 1, keep)


def apply(inst, op, check=False):
    if op.kind == "delete_source":
        out = delete_source(inst, op.a)
    elif op.kind == "contract_encoder":
        out = contract_encoder(inst, op.a)
    elif op.kind == "delete_encoder":
        out = delete_encoder(inst, op.a)
    else:
        out = unify_encoders(inst, op.a, op.b)
    if check:
        rep = validate(out)
        if not rep.ok:
            raise InvalidMinor(out, rep)
    return out


def apply_sequence(inst, ops, check=False):
    for op in ops:
        inst = apply(inst, op, check)
    return inst


def operations(inst, mode="vector"):
    """Every applicable operation of the given embedding mode."""
    allowed = MODES[mode]
    out = []
    if "delete_source" in allowed:
        out += [MinorOp("delete_source", k) for k in range(inst.num_sources)]
    for kind in ("contract_encoder", "delete_encoder"):
        if kind in allowed:
            out += [MinorOp(kind, e) for e in range(inst.num_encoders)]
    if "unify_encoders" in allowed:
        out += [MinorOp("unify_encoders", i, j)
                for i in range(inst.num_encoders)
                for j in range(inst.num_encoders) if i != j]
    return out


def key(inst):
    return (inst.num_sources, inst.num_encoders, canonical_form(inst))


def minors(inst, mode="vector", max_steps=None, include_self=True):
    """Valid instances reachable by allowed operations, keyed canonically.

    Intermediate results that violate C1-C5 are still explored, since a
    later operation may restore validity; only valid instances are
    returned.  Returns {key: representative instance}.
    """
    if max_steps is None:
        max_steps = inst.num_sources + inst.num_encoders
    start = key(inst)
    seen = {start: inst}
    frontier = [inst]
    found = {start: inst} if include_self and validate(inst).ok else {}
    for _ in range(max_steps):
        nxt = []
        for cur in frontier:
            for op in operations(cur, mode):
                res = apply(cur, op)
                kk = key(res)
                if kk in seen:
                    continue
                seen[kk] = res
                nxt.append(res)
                if res.num_sources and validate(res).ok:
                    found[kk] = res
        frontier = nxt
        if not frontier:
            break
    return dict(sorted(found.items()))


def embeds(small, big, mode="vector"):
    """True when `small` is (isomorphic to) a minor of `big`."""
    if small.num_sources > big.num_sources or \
            small.num_encoders > big.num_encoders:
        return False
    return key(small) in minors(big, mode)


def forbidden_minors(family, insufficient, mode="scalar"):
    """Insufficient instances of `family` with no insufficient proper minor
    in `family`.

    `insufficient` is a predicate on instances or a collection of keys.
    """
    if callable(insufficient):
        bad = {key(a): a for a in family if insufficient(a)}
    else:
        flagged = set(insufficient)
        bad = {key(a): a for a in family if key(a) in flagged}
    out = []
    for k, a in sorted(bad.items()):
        below = minors(a, mode, include_self=False)
        if not any(b in bad for b in below if b != k):
            out.append(a)
    return out


def predecessors(inst, family_keys, mode="scalar"):
    """Keys from `family_keys` that are proper minors of `inst`."""
    below = minors(inst, mode, include_self=False)
    k = key(inst)
    return sorted(b for b in below if b in family_keys and b != k)


# region identities

def expected_region(reg, op):
    """Cone of the minor's region predicted from `reg` by projection.

    Source deletion: intersect with H(X_k) = 0, drop H(X_k).
    Encoder contraction: drop R_e.
    Encoder deletion: intersect with R_e = 0, drop R_e.
    """
    from .region import drop_coordinate, intersect_zero
    if op.kind == "delete_source":
        return intersect_zero(reg, op.a)
    c = reg.K + op.a
    if op.kind == "contract_encoder":
        return drop_coordinate(reg, c)
    if op.kind == "delete_encoder":
        return intersect_zero(reg, c)
    raise ValueError("no projection identity for unification")


# random sampling for property tests

def random_op_pair(inst, rng=None):
    """Two operations on different elements, each given in both orders
    with operands renumbered for the instance it meets.

    Returns ((op1, op2_after_op1), (op2, op1_after_op2)) or None.
    """
    rng = rng or random.Random()
    K, E = inst.num_sources, inst.num_encoders
    cands = [("s", k) for k in range(K)] + [("c", e) for e in range(E)] + \
        [("d", e) for e in range(E)] + \
        [("u", i, j) for i in range(E) for j in range(E) if i != j]
    for _ in range(100):
        a, b = rng.sample(cands, 2)
        if _elements(a) & _elements(b):
            continue
        return _as_op(a), _as_op(_shift(b, a)), _as_op(b), _as_op(_shift(a, b))
    return None


def _elements(t):
    if t[0] == "s":
        return {("X", t[1])}
    return {("E", x) for x in t[1:]}


def _shift(t, removed):
    """Renumber operand(s) of t after operation `removed` took effect."""
    if removed[0] == "s":
        gone, kind = removed[1], "s"
    elif removed[0] == "u":
        gone, kind = removed[2], "e"
    else:
        gone, kind = removed[1], "e"
    if (t[0] == "s") != (kind == "s"):
        return t
    return (t[0],) + tuple(x - 1 if x > gone else x for x in t[1:])


def _as_op(t):
    name = {"s": "delete_source", "c": "contract_encoder",
            "d": "delete_encoder", "u": "unify_encoders"}[t[0]]
    return MinorOp(name, *t[1:])
