import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from mdcs import codes
from mdcs.bounds import rank_generators
from mdcs.codes import (BlockCode, brute_force_recovers, construct_code,
                        decoder_recovers, verify_code)
from mdcs.enumeration import nonisomorphic
from mdcs.model import from_config_matrix
from mdcs.region import region, satisfying_generators

# worked code for the vector point (1, 2, 3/2, 3/2, 3/2), blocks of L = 2
KNOWN_VECTOR_CODE = [
    [1, 0, 0, 0, 0, 1, 0, 0, 0],
    [0, 1, 0, 0, 0, 0, 1, 0, 0],
    [0, 0, 0, 1, 0, 0, 1, 0, 0],
    [0, 0, 1, 0, 0, 0, 0, 1, 0],
    [0, 0, 0, 0, 0, 1, 0, 0, 1],
    [0, 0, 1, 0, 1, 0, 0, 0, 0],
]


def known_vector_code():
    return BlockCode(2, 2, [[0, 1], [2, 3, 4, 5]], [r[:] for r in KNOWN_VECTOR_CODE],
                     [[0, 1, 2], [3, 4, 5], [6, 7, 8]])


def check(inst, target, **kw):
    code = construct_code(inst, target, **kw)
    rep = verify_code(inst, code)
    assert rep.ok
    assert rep.entropies == [Fraction(t) for t in target[:inst.num_sources]]
    assert rep.rates == [Fraction(t) for t in target[inst.num_sources:]]
    return code


def test_known_vector_code(two_source):
    code = known_vector_code()
    rep = verify_code(two_source, code)
    assert rep.ok
    assert rep.rates == [Fraction(3, 2)] * 3
    assert all(p for _, p in brute_force_recovers(two_source, code))


@pytest.mark.parametrize("target", [(1, 1, 1, 1, 1), (0, 1, 1, 1, 0), (1, 0, 1, 1, 1)])
def test_two_source_scalar_points(two_source, target):
    check(two_source, target)


def test_two_source_vector_point(two_source):
    code = check(two_source, (1, 2, Fraction(3, 2), Fraction(3, 2), Fraction(3, 2)),
                 n_prime=6)
    assert code.L == 2
    assert all(p for _, p in brute_force_recovers(two_source, code))


def test_scalar_cannot_reach_vector_point(two_source):
    with pytest.raises(ValueError):
        construct_code(two_source, (0, 2, 1, 1, 1))


def test_rank_generator_route(two_source):
    gens = satisfying_generators(two_source, rank_generators(5, 2))
    code = check(two_source, (1, 1, 1, 1, 1), generators=gens)
    assert code.rows == 2


def test_rates_above_the_region_are_padded(two_source):
    check(two_source, (1, 1, 3, 1, 2))


def test_zero_target(two_source):
    code = construct_code(two_source, (0, 0, 0, 0, 0))
    assert code.rows == 0
    assert verify_code(two_source, code).ok


@pytest.mark.parametrize("inst", nonisomorphic(2, 3)[:10], ids=str)
def test_every_scalar_extreme_ray(inst):
    reg = region(inst, "scalar:2")
    for ray in reg.cone.rays:
        check(inst, ray)


def test_text_round_trip(two_source):
    code = known_vector_code()
    back = codes.loads(codes.dumps(code))
    assert back.generator == code.generator
    assert back.column_map == code.column_map
    assert back.source_rows == code.source_rows
    assert (back.q, back.L) == (2, 2)
    assert "rate 3/2" in codes.describe(code, 2)


def test_broken_code_fails(two_source):
    code = known_vector_code()
    for row in code.generator:
        row[6] = 0          # U_3 loses a digit
    assert not verify_code(two_source, code).ok


@st.composite
def random_codes(draw):
    q = draw(st.sampled_from([2, 3]))
    rows = draw(st.integers(1, 12 if q == 2 else 7))
    split = draw(st.integers(0, rows))
    enc = [draw(st.integers(0, 3)) for _ in range(3)]
    ncols = sum(enc)
    G = [[draw(st.integers(0, q - 1)) for _ in range(ncols)] for _ in range(rows)]
    cmap, start = [], 0
    for n in enc:
        cmap.append(list(range(start, start + n)))
        start += n
    return BlockCode(q, 1, [list(range(split)), list(range(split, rows))], G, cmap)


@settings(max_examples=80, deadline=None)
@given(random_codes())
def test_column_space_criterion_matches_brute_force(code):
    inst = from_config_matrix([[1, 0, 0], [3, 5, 6]])
    fast = [p for _, p in verify_code(inst, code).decoders]
    slow = [p for _, p in brute_force_recovers(inst, code)]
    assert fast == slow
