import numpy as np
import pytest

from permpuzzle.errors import InvalidParams
from permpuzzle.field import Field
from permpuzzle.instance import (
    Case,
    Conjecture,
    Instance,
    Params,
    build_instance,
    col_index,
    default_subset_size,
    eval_polynomial,
    eval_polynomials,
)
from permpuzzle.linalg import rank_incremental
from permpuzzle.sampler import Polynomial, derive_rng, sample_permutation, sample_polynomial


def test_eval_polynomial_examples():
    f = Field(5)
    assert all(eval_polynomial(Polynomial((0, 0, 0)), x, f) == 0 for x in f)
    assert eval_polynomial(Polynomial((1, 1)), 3, f) == 4


def test_horner_matches_monomial_sum():
    f = Field(17)
    for i in range(20):
        poly = sample_polynomial(derive_rng(3, i, "poly:0"), 3, f)
        for x in f:
            monomial = sum(c * f.pow(x, j) for j, c in enumerate(poly.coeffs)) % 17
            assert eval_polynomial(poly, x, f) == monomial
        vec = eval_polynomials(np.array([poly.coeffs]), np.arange(17), 17)[0]
        assert vec.tolist() == [eval_polynomial(poly, x, f) for x in f]


def test_col_index():
    assert col_index(0, 0, 7) == 0
    assert col_index(1, 0, 5) == 5
    assert col_index(4, 4, 5) == 24


def test_params_defaults_and_validation():
    p = Params(2, 5, 3)
    assert p.s == 5 and p.conjecture is Conjecture.ORIGINAL and p.case is Case.POLY
    assert Params(4, 17, 3, "new").s == default_subset_size(4, 17) == 9
    for bad in (
        dict(lam=0, q=5, m=1),
        dict(lam=2, q=6, m=1),
        dict(lam=5, q=5, m=1),
        dict(lam=2, q=5, m=0),
        dict(lam=2, q=5, m=1, conjecture="original", s=3),
        dict(lam=2, q=5, m=1, conjecture="new", s=6),
        dict(lam=2, q=5, m=1, conjecture="sideways"),
        dict(lam=2, q=5, m=1, case="nope"),
    ):
        with pytest.raises(InvalidParams):
            Params(**bad)


def test_build_instance_shapes():
    inst = build_instance(Params(2, 5, 3, "original", case="poly"), 1, 0)
    assert inst.rows.shape == (3, 5)
    inst = build_instance(Params(2, 5, 3, "new", s=2, case="rand"), 1, 0)
    assert inst.rows.shape == (3, 2)
    assert inst.secrets is None
    with pytest.raises(InvalidParams):
        build_instance({"lam": 2}, 1, 0)


@pytest.mark.parametrize("conjecture,s", [("original", None), ("new", 4)])
@pytest.mark.parametrize("case", ["poly", "rand"])
def test_rows_are_sorted_distinct_in_range(conjecture, s, case):
    params = Params(3, 11, 200, conjecture, s, case)
    inst = build_instance(params, 8, 2)
    assert inst.rows.shape == (200, params.s)
    assert np.all(np.diff(inst.rows, axis=1) > 0)
    assert inst.rows.min() >= 0 and inst.rows.max() < 121


def test_identity_permutation_recovers_graph():
    q = 5
    params = Params(2, q, 6, case="poly")
    inst = build_instance(params, 3, 0, keep_secrets=True, permutation=np.arange(q * q))
    coeffs = inst.secrets.coeffs
    f = Field(q)
    for i, row in enumerate(inst.rows):
        poly = Polynomial(tuple(int(c) for c in coeffs[i]))
        assert row.tolist() == [col_index(x, eval_polynomial(poly, x, f), q) for x in f]
        # column beta-values sum to sum_x p_i(x) = 0
        assert int((row % q).sum()) % q == 0


def test_permutation_override_validated():
    with pytest.raises(InvalidParams):
        build_instance(Params(2, 5, 2), 0, 0, permutation=np.zeros(25, dtype=int))


def test_secrets_consistent_with_rows():
    params = Params(3, 11, 50, "new", 5, "rand")
    inst = build_instance(params, 4, 1, keep_secrets=True)
    pi = inst.secrets.permutation
    assert np.array_equal(np.sort(pi[inst.secrets.graph_rows()], axis=1), inst.rows)


@pytest.mark.parametrize("case", ["poly", "rand"])
def test_rank_invariant_under_permutation(case):
    q = 7
    params = Params(2, q, 60, case=case)
    ranks = set()
    for k in range(4):
        pi = sample_permutation(derive_rng(100, k, "alt"), q * q)
        inst = build_instance(params, 5, 0, permutation=pi)
        ranks.add(rank_incremental(inst.rows, q * q, q).rank)
    assert len(ranks) == 1


def test_build_is_deterministic():
    params = Params(3, 11, 40, "new", 6, "poly")
    a = build_instance(params, 99, 7)
    b = build_instance(params, 99, 7)
    c = build_instance(params, 99, 8)
    assert np.array_equal(a.rows, b.rows)
    assert not np.array_equal(a.rows, c.rows)


def test_json_roundtrip():
    inst = build_instance(Params(2, 5, 4, "new", 3, "rand"), 1, 1)
    back = Instance.from_json(inst.to_json())
    assert back.params == inst.params
    assert np.array_equal(back.rows, inst.rows)
