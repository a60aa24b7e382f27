import random
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.optimize import linprog

from mdcs.lp import certificate, min_l1, simplex


def test_simplex_small():
    # min x0 + 2 x1  s.t. x0 + x1 = 3, x0 - x1 + x2 = 1
    cols = [{0: 1, 1: 1}, {0: 1, 1: -1}, {1: 1}]
    out = simplex(cols, [3, 1], cost=[1, 2, 0])
    assert out.status == "optimal"
    assert [Fraction(int(v.numerator), int(v.denominator)) for v in out.x] == [2, 1, 0]


def test_simplex_infeasible_farkas():
    cols = [{0: 1}, {0: 1, 1: 1}]
    out = simplex(cols, [-1, 0])
    assert out.status == "infeasible"
    y = out.y
    assert all(sum(c * y[i] for i, c in col.items()) >= 0 for col in cols)
    assert -1 * y[0] < 0


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_min_l1_matches_float_optimum(seed):
    rng = random.Random(seed)
    dim, n = 4, 9
    rows = [{i: rng.randint(-2, 3) for i in range(dim) if rng.random() < 0.7}
            for _ in range(n)]
    rows = [r for r in rows if r] or [{0: 1}]
    lam = [rng.randint(0, 2) for _ in rows]
    target = {}
    for l, r in zip(lam, rows):
        for k, c in r.items():
            target[k] = target.get(k, 0) + l * c
    target = {k: v for k, v in target.items() if v}
    if not target:
        return
    res = min_l1(rows, target, dim)
    assert res.status == "optimal"
    # exact feasibility
    for k in range(dim):
        assert sum(x * r.get(k, 0) for x, r in zip(res.x, rows)) == target.get(k, 0)
    assert all(x >= 0 for x in res.x)
    A = np.array([[r.get(k, 0) for r in rows] for k in range(dim)], float)
    b = np.array([target.get(k, 0) for k in range(dim)], float)
    ref = linprog(np.ones(len(rows)), A_eq=A, b_eq=b, bounds=(0, None))
    assert abs(float(sum(res.x)) - ref.fun) < 1e-7


def test_certificate_and_farkas():
    rows = [{0: 1, 1: -1}, {1: 1}]
    lam, y = certificate(rows, {0: 1})
    assert y is None and lam == {0: 1, 1: 1}
    lam, y = certificate(rows, {0: -1})
    assert lam is None
    assert all(sum(c * y[i] for i, c in r.items()) >= 0 for r in rows)
    assert -y[0] < 0
