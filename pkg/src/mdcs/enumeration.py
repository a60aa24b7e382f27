"""
Enumeration of Sperner families and of all valid MDCS instances.

Instances are built level by level.  Each level receives one nonempty
Sperner family (an antichain of encoder subsets) as its decoder fans; at
levels above the first, families with a member contained in an already
chosen fan are skipped.  Encoder coverage and distinct encoder fans are
checked once all K levels are filled, and isomorphic copies are removed
through canonical forms.
"""

from __future__ import annotations

from .model import MdcsInstance, Decoder, canonical_form, validate, is_subset

MAX_ENCODERS = 5


def sperner_families(num_encoders, include_empty=False):
    """All antichains of nonempty subsets of {E_1..E_n}, as tuples of fan masks.

    The empty family is left out unless `include_empty` is set.  Families
    come out in a fixed order (by size, then lexicographic).
    """
    if not 1 <= num_encoders <= MAX_ENCODERS:
        raise ValueError(f"num_encoders must be in 1..{MAX_ENCODERS}")
    full = (1 << num_encoders) - 1
    # decreasing cardinality, then value
    subsets = sorted(range(1, full + 1), key=lambda s: (-bin(s).count("1"), s))
    out = []

    def extend(start, chosen):
        if chosen or include_empty:
            out.append(tuple(sorted(chosen)))
        for i in range(start, len(subsets)):
            s = subsets[i]
            if all(not is_subset(s, c) and not is_subset(c, s) for c in chosen):
                chosen.append(s)
                extend(i + 1, chosen)
                chosen.pop()

    extend(0, [])
    out.sort(key=lambda f: (len(f), f))
    return out


def augment(inst, pool, level):
    """Extend a partial instance by one family from `pool` at `level`.

    `inst` is a tuple (K, num_encoders, decoders) or an MdcsInstance.
    For level > 1 the caller is expected to have filtered the pool;
    this function only appends.
    """
    if isinstance(inst, MdcsInstance):
        K, nE, decs = inst.num_sources, inst.num_encoders, list(inst.decoders)
    else:
        K, nE, decs = inst[0], inst[1], list(inst[2])
    out = []
    for fam in pool:
        new = decs + [Decoder(level, f) for f in fam]
        out.append(MdcsInstance(K, nE, new))
    return out


def _allowed(fam, chosen):
    # C2: no new fan may sit inside a fan picked at a lower level
    return all(not is_subset(s, c) for s in fam for c in chosen)


def enumerate_all(K, num_encoders):
    """Return (all valid instances, one canonical representative per class)."""
    if K < 1 or K > 2 ** num_encoders - 1:
        raise ValueError(f"no valid instances for K={K}, |E|={num_encoders}")
    families = sperner_families(num_encoders)
    partial = [MdcsInstance(K, num_encoders, [])]
    for level in range(1, K + 1):
        nxt = []
        for inst in partial:
            chosen = [d.fan for d in inst.decoders]
            pool = [f for f in families if _allowed(f, chosen)]
            nxt.extend(augment(inst, pool, level))
        partial = nxt
    full = [inst for inst in partial if validate(inst).ok]
    reps = {}
    for inst in full:
        cf = canonical_form(inst)
        reps.setdefault(cf, inst)
    from .model import from_config_matrix
    noniso = [from_config_matrix(cf, num_encoders) for cf in sorted(reps)]
    return full, noniso


def nonisomorphic(K, num_encoders):
    return enumerate_all(K, num_encoders)[1]


def universe(max_K, max_E):
    """All non-isomorphic instances with K <= max_K and |E| <= max_E."""
    out = []
    for nE in range(1, max_E + 1):
        for K in range(1, max_K + 1):
            if K <= 2 ** nE - 1:
                out.extend(nonisomorphic(K, nE))
    return out
