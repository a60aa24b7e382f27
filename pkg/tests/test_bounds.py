import itertools

import pytest

from mdcs import gf
from mdcs.bounds import (ResourceLimit, cached_rank_generators, dense,
                         elemental_rows, grouped_rank_generators, has_u24_minor,
                         is_matroid_rank, rank_generators, rank_vector,
                         shannon_outer)
from mdcs.polycone import Cone, compare


def brute_rank(cols, q):
    """Rank by counting the span (|span| = q^rank)."""
    span = {tuple([0] * len(cols[0]))} if cols else {()}
    for c in cols:
        span = {tuple((a + t * b) % q for a, b in zip(v, c))
                for v in span for t in range(q)}
    return len(span).bit_length() - 1 if q == 2 else \
        round(__import__("math").log(len(span), q))


def brute_rank_vectors(n, q):
    out = set()
    for entries in itertools.product(range(q), repeat=n * n):
        cols = [entries[i * n:(i + 1) * n] for i in range(n)]
        out.add(rank_vector(cols, q))
    return out


@pytest.mark.parametrize("q", [2, 3])
def test_gf_rank_against_span_size(q):
    for entries in itertools.product(range(q), repeat=6):
        M = [list(entries[:3]), list(entries[3:])]
        cols = [[M[0][j], M[1][j]] for j in range(3)]
        assert gf.rank(M, q) == brute_rank(cols, q)


def test_gf_inverse_and_span():
    for q in (2, 3, 5):
        for a in range(1, q):
            assert a * gf.inv(a, q) % q == 1
    M = [[1, 0], [0, 1], [1, 1]]
    assert gf.in_column_span(M, [0, 1], [1, 1, 0], 2)
    assert not gf.in_column_span(M, [0, 1], [0, 0, 1], 2)


def test_subspace_counts():
    # Gaussian binomials: F_2^3 has 1+7+7+1 subspaces, F_3^2 has 1+4+1
    assert len(gf.subspaces(3, 2)) == 16
    assert len(gf.subspaces(2, 3)) == 6


@pytest.mark.parametrize("n, q", [(2, 2), (3, 2), (2, 3), (3, 3)])
def test_rank_generators_against_all_matrices(n, q):
    got = {g.ranks for g in rank_generators(n, q)}
    assert got == brute_rank_vectors(n, q)


def test_rank_generators_are_representations():
    for g in rank_generators(4, 2):
        assert rank_vector([list(c) for c in zip(*g.matrix)] if g.matrix else
                           [[0]] * 4, 2) == g.ranks


def test_generators_satisfy_shannon():
    outer = shannon_outer(4)
    for q in (2, 3):
        for g in rank_generators(4, q):
            assert is_matroid_rank(g.ranks, 4)
            assert outer.contains(g.ranks)


def test_u24():
    assert not any(has_u24_minor(g) for g in rank_generators(4, 2))
    assert any(has_u24_minor(g) for g in rank_generators(4, 3))


def test_elemental_count():
    # n + C(n,2) 2^(n-2)
    for n in range(1, 6):
        assert len(elemental_rows(n)) == n + n * (n - 1) // 2 * 2 ** max(n - 2, 0)


def test_gamma3_hull():
    rays = [g.ranks for g in rank_generators(3, 2) if any(g.ranks)]
    assert compare(Cone(7, rays=rays, lineality=[]), shannon_outer(3)) == "equal"


def test_grouped_generators_against_all_matrices():
    n, n_prime, q = 2, 3, 2
    want = set()
    for entries in itertools.product(range(q), repeat=n_prime * n_prime):
        cols = [entries[i * n_prime:(i + 1) * n_prime] for i in range(n_prime)]
        for cut in range(1, n_prime):
            blocks = [list(range(cut)), list(range(cut, n_prime))]
            for order in (blocks, blocks[::-1]):
                want.add(rank_vector(cols, q, order))
    got = {g.ranks for g in grouped_rank_generators(n, n_prime, q)}
    assert got == want


def test_size_limit():
    with pytest.raises(ResourceLimit):
        rank_generators(8, 2)
    with pytest.raises(ValueError):
        rank_generators(3, 5)


def test_cache(tmp_path):
    a = cached_rank_generators(3, 2, directory=str(tmp_path))
    b = cached_rank_generators(3, 2, directory=str(tmp_path))
    assert [g.ranks for g in a] == [g.ranks for g in b]
    assert any(p.suffix == ".jsonl" for p in tmp_path.iterdir())
