import itertools

import pytest

from mdcs.model import (Decoder, MdcsInstance, bits, canonical_form,
                        from_config_matrix, from_record, from_text,
                        instance_id, is_isomorphic, to_config_matrix,
                        to_record, to_text, validate)


def test_fan_bits():
    assert bits(5) == [0, 2]
    assert bits(0) == []


def test_config_matrix_decoding():
    inst = from_config_matrix([[0, 1], [0, 3], [5, 6]])
    assert inst.num_encoders == 3
    got = sorted((d.level, d.fan) for d in inst.decoders)
    assert got == [(1, 1), (2, 3), (3, 5), (3, 6)]


def test_config_round_trip(two_source):
    assert from_config_matrix(to_config_matrix(two_source), 3) == two_source


def test_decoder_rejects_bad_values():
    with pytest.raises(ValueError):
        Decoder(0, 1)
    with pytest.raises(ValueError):
        Decoder(1, 0)
    with pytest.raises(ValueError):
        MdcsInstance(1, 2, [(1, 4)])


@pytest.mark.parametrize("matrix, E, cond", [
    ([[1, 3]], 2, "C1"),          # nested fans at one level
    ([[3], [1]], 2, "C2"),        # higher level reads a subset
    ([[1]], 2, "C3"),             # E_2 feeds nobody
    ([[3]], 2, "C4"),             # E_1 and E_2 feed the same decoders
    ([[1, 2], []], 2, "C5"),      # no level-2 decoder
])
def test_validity_conditions(matrix, E, cond):
    inst = from_config_matrix(matrix, E, check=False)
    rep = validate(inst)
    assert not rep.ok
    assert cond in rep.conditions()


def test_valid_instance(two_source):
    assert validate(two_source).ok
    assert str(validate(two_source)) == "ok"


def test_canonical_form_is_permutation_invariant(two_source):
    cf = canonical_form(two_source)
    for p in itertools.permutations(range(3)):
        assert canonical_form(two_source.permuted(p)) == cf
        assert is_isomorphic(two_source, two_source.permuted(p))


def test_not_isomorphic():
    a = from_config_matrix([[1, 0, 0], [3, 5, 6]])
    b = from_config_matrix([[1, 2, 0], [3, 5, 6]])
    assert not is_isomorphic(a, b)


def test_text_and_record_round_trip(two_source):
    assert to_text(two_source) == "2 3 | 1 ; 3 5 6"
    assert from_text(to_text(two_source)) == two_source
    assert from_record(to_record(two_source)) == two_source
    assert instance_id(two_source) == instance_id(two_source.permuted((2, 1, 0)))
