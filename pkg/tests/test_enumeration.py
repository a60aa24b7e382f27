import itertools

import pytest

from mdcs.enumeration import enumerate_all, nonisomorphic, sperner_families, universe
from mdcs.model import MdcsInstance, canonical_form, is_subset, validate


def brute_antichains(n):
    subsets = range(1, 1 << n)
    count = 0
    for r in range(1, len(subsets) + 1):
        for fam in itertools.combinations(subsets, r):
            if all(not is_subset(a, b) and not is_subset(b, a)
                   for a, b in itertools.combinations(fam, 2)):
                count += 1
    return count


def brute_instances(K, E):
    pairs = [(l, f) for l in range(1, K + 1) for f in range(1, 1 << E)]
    out = set()
    for m in range(1 << len(pairs)):
        decs = [p for i, p in enumerate(pairs) if m >> i & 1]
        inst = MdcsInstance(K, E, decs)
        if validate(inst).ok:
            out.add(inst)
    return out


@pytest.mark.parametrize("n", [1, 2, 3])
def test_sperner_against_brute_force(n):
    assert len(sperner_families(n)) == brute_antichains(n)


def test_sperner_counts():
    assert [len(sperner_families(n)) for n in (2, 3, 4)] == [4, 18, 166]
    assert len(sperner_families(2, include_empty=True)) == 5


def test_sperner_families_are_antichains():
    for fam in sperner_families(4):
        for a, b in itertools.combinations(fam, 2):
            assert not is_subset(a, b) and not is_subset(b, a)


@pytest.mark.parametrize("K, E", [(1, 2), (2, 2), (1, 3), (2, 3)])
def test_enumeration_matches_brute_force(K, E):
    full, reps = enumerate_all(K, E)
    want = brute_instances(K, E)
    assert set(full) == want
    assert len(reps) == len({canonical_form(a) for a in want})


def test_representatives_are_canonical_and_distinct():
    reps = nonisomorphic(2, 3)
    forms = [canonical_form(a) for a in reps]
    assert len(set(forms)) == len(forms)
    assert forms == sorted(forms)


def test_universe_sizes():
    u = universe(2, 2)
    assert len(u) == 1 + 1 + 3          # (1,1), (1,2), (2,2)


def test_bad_encoder_count():
    with pytest.raises(ValueError):
        sperner_families(0)
