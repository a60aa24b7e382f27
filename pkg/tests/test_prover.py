from fractions import Fraction

import pytest

from mdcs import prover
from mdcs.enumeration import nonisomorphic
from mdcs.model import from_config_matrix
from mdcs.region import outer_region

EX1_FACET = (-2, -1, -1, 1, 1)      # R_1+R_2 >= 2H(X)+H(Y)+H(Z)
EX2_FACET = (-3, -2, 2, 2, 2)       # 2(R_1+R_2+R_3) >= 3H(X)+2H(Y)


def test_vocabulary_has_no_duplicates(three_source):
    rows = prover.vocabulary(three_source)
    vecs = [r.row for r in rows]
    assert len(set(vecs)) == len(vecs)
    kinds = {r.kind for r in rows}
    assert {"rate", "entropy", "mutual", "independence", "decode"} <= kinds


def test_closure(three_source):
    K = 3
    # E_1 gives X, then E_2 gives Y; X,Y,Z determine everything
    assert prover.closure(three_source, 1 << K) == (1 << K) | 1
    full = (1 << 5) - 1
    assert prover.closure(three_source, 0b111) == full


def test_three_source(three_source):
    cert, script, text = prover.prove(three_source, EX1_FACET)
    assert cert.is_valid()
    assert cert.objective <= 8
    assert script.final == {k: v for k, v in cert.system.target.items() if v}
    assert text.startswith("Target: R_1+R_2 ≥ 2H(X)+H(Y)+H(Z)")
    assert "H(X,Y,Z) = H(X)+H(Y)+H(Z)" in text


def test_two_encoder(two_encoder):
    cert, script, _ = prover.prove(two_encoder, EX2_FACET)
    assert cert.is_valid()
    # every certificate puts weight 2 on each rate row
    rates = [c for i, c in cert.lam.items() if cert.system.rows[i].kind == "rate"]
    assert rates == [2, 2, 2]


def test_running_inequalities_are_certifiable(three_source, two_encoder):
    for inst, f in ((three_source, EX1_FACET), (two_encoder, EX2_FACET)):
        cert, script, _ = prover.prove(inst, f)
        for st in script.steps:
            sub = prover.certify(inst, st.running)
            assert sub.is_valid()


def test_non_implied_inequality(two_source):
    with pytest.raises(prover.NotImplied):
        prover.certify(two_source, (-1, -2, 1, 1, 1))     # scalar-only facet


@pytest.mark.parametrize("inst", nonisomorphic(2, 3)[:8], ids=str)
def test_every_outer_facet_certifiable(inst):
    reg = outer_region(inst)
    for f in reg.nontrivial_facets():
        assert prover.certify(inst, f).is_valid()


def test_certificate_record(three_source):
    _, script, _ = prover.prove(three_source, EX1_FACET)
    rec = prover.certificate_record(script)
    assert rec["target"] == "R_1+R_2 ≥ 2H(X)+H(Y)+H(Z)"
    assert [s["step"] for s in rec["steps"]] == list(range(1, len(script.steps) + 1))
    assert all(Fraction(r["coefficient"]) > 0 for s in rec["steps"] for r in s["rows"])
