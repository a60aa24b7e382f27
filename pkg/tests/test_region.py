import numpy as np
import pytest
from scipy.optimize import linprog

from mdcs.bounds import dense, elemental_rows, idx, rank_generators
from mdcs.enumeration import nonisomorphic
from mdcs.model import from_config_matrix
from mdcs.polycone import compare
from mdcs.region import (classify_sufficiency, drop_coordinate, filter_rank_vectors,
                         inner_cone, inner_region_scalar, intersect_zero,
                         network_constraints, outer_region, parse_inequality,
                         region, region_from_inequalities, render_inequality,
                         satisfying_generators, superposition_region, witness_ray)

TWO_SOURCE_OUTER = ["R_1 ≥ H(X)", "R_1+R_2 ≥ H(X)+H(Y)", "R_1+R_3 ≥ H(X)+H(Y)",
              "R_2+R_3 ≥ H(X)+H(Y)"]


def lifted_lp(inst):
    """Dense (A_ub, A_eq) of the lifted outer cone: A_ub x <= 0, A_eq x = 0."""
    cs = network_constraints(inst)
    n = cs.nvars
    rows = list(elemental_rows(cs.N)) + cs.L4
    A_ub = -np.array([dense(r, n) for r in rows], float)
    A_eq = np.array([dense(r, n) for r in cs.equalities], float)
    keep = [idx(1 << k) for k in range(cs.K)] + [cs.rate(e) for e in range(cs.E)]
    return A_ub, A_eq, keep, n


def check_outer_by_lp(inst, reg):
    A_ub, A_eq, keep, n = lifted_lp(inst)
    # every facet is valid: min f.x over the lifted cone (normalized) is 0
    for f in reg.facets():
        c = np.zeros(n)
        for j, k in enumerate(keep):
            c[k] = f[j]
        norm = np.zeros((1, n))
        norm[0, keep] = 1
        res = linprog(c, A_ub=np.vstack([A_ub, norm]),
                      b_ub=np.r_[np.zeros(len(A_ub)), 1], A_eq=A_eq,
                      b_eq=np.zeros(len(A_eq)), bounds=(None, None))
        assert res.status == 0 and res.fun > -1e-9
    # every ray is attained by some lifted point
    for r in reg.cone.rays:
        E = np.zeros((len(keep), n))
        for j, k in enumerate(keep):
            E[j, k] = 1
        res = linprog(np.zeros(n), A_ub=A_ub, b_ub=np.zeros(len(A_ub)),
                      A_eq=np.vstack([A_eq, E]),
                      b_eq=np.r_[np.zeros(len(A_eq)), [float(x) for x in r]],
                      bounds=(None, None))
        assert res.status == 0


def test_two_source_outer(two_source):
    reg = outer_region(two_source)
    assert reg.render() == TWO_SOURCE_OUTER
    assert compare(reg.cone, region_from_inequalities(2, 3, TWO_SOURCE_OUTER).cone) == "equal"


@pytest.mark.parametrize("inst", nonisomorphic(2, 3)[:8], ids=str)
def test_outer_against_lifted_lp(inst):
    check_outer_by_lp(inst, outer_region(inst))


def test_two_source_scalar(two_source):
    reg = region(two_source, "scalar:2")
    want = region_from_inequalities(
        2, 3, TWO_SOURCE_OUTER + ["R_1+R_2+R_3 ≥ H(X)+2H(Y)"])
    assert compare(reg.cone, want.cone) == "equal"


def test_scalar_generators_against_rank_vector_filter(two_source):
    """Subspace arrangements give the same points as filtering all rank vectors."""
    for inst in [two_source, from_config_matrix([[3, 5, 6], [7, 0, 0]])]:
        N = inst.num_sources + inst.num_encoders
        pts = filter_rank_vectors(inst, [g.ranks for g in rank_generators(N, 2)])
        K, E = inst.num_sources, inst.num_encoders
        direct = inner_cone(K, E, pts)
        assert compare(direct, inner_region_scalar(inst, 2).cone) == "equal"
        assert satisfying_generators(inst, rank_generators(N, 2))


def test_two_source_vector_closes_gap(two_source):
    assert compare(region(two_source, "vector:2:6").cone, outer_region(two_source).cone) == "equal"
    assert compare(region(two_source, "vector:2:N+1").cone,
                   outer_region(two_source).cone) == "equal"


def test_superposition(two_source):
    sp = superposition_region(two_source)
    out = outer_region(two_source)
    assert compare(sp.cone, out.cone) == "subset"
    assert witness_ray(out, sp) == (1, 1, 1, 1, 1)


@pytest.mark.parametrize("inst", nonisomorphic(1, 3), ids=str)
def test_single_source_superposition_is_exact(inst):
    assert compare(superposition_region(inst).cone, outer_region(inst).cone) == "equal"


def test_sufficiency(two_source):
    rec = classify_sufficiency(two_source, ["scalar:2", "vector:2:N+1"])
    assert rec.flags == {"scalar:2": False, "vector:2:N+1": True}
    assert rec.witnesses["scalar:2"] == (0, 2, 1, 1, 1)


def test_render_parse_round_trip():
    f = (-2, -1, 1, 2, 1)
    text = render_inequality(f, 2, 3)
    assert text == "R_1+2R_2+R_3 ≥ 2H(X)+H(Y)"
    assert parse_inequality(text.replace("≥", ">="), 2, 3) == f


def test_restrictions(two_source):
    out = outer_region(two_source)
    # H(Y) = 0 leaves the one-source problem with the same fans
    zero_y = intersect_zero(out, 1)
    assert zero_y.dim == 4
    assert zero_y.contains((1, 1, 1, 0)) and not zero_y.contains((1, 0, 1, 1))
    assert drop_coordinate(out, 2).dim == 4


def test_unknown_kind(two_source):
    with pytest.raises(ValueError):
        region(two_source, "matroid")
