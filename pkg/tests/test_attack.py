import math

import mpmath
import numpy as np
import pytest

from permpuzzle.attack import (
    Verdict,
    annihilated_rows,
    beta_witness,
    certificate_report,
    check_annihilation,
    compose_with_inverse,
    decide,
    distinguish,
    failure_bound,
    k_basis,
    log_failure_bound,
    recommend_m,
    threshold,
)
from permpuzzle.errors import DimensionMismatch, InvalidTarget
from permpuzzle.instance import Params, build_instance
from permpuzzle.linalg import rank_incremental, rank_of_vectors, row_dot


@pytest.mark.parametrize("q,t", [(2, 3), (5, 21), (17, 273)])
def test_threshold(q, t):
    assert threshold(q) == t == q * q - q + 1


def test_threshold_rule():
    assert decide(272, 17) is Verdict.CASE1
    assert decide(273, 17) is Verdict.CASE2
    assert decide(289, 17) is Verdict.CASE2


def test_original_poly_instance_is_case1():
    inst = build_instance(Params(4, 17, 2000, case="poly"), 123, 0)
    d = distinguish(inst)
    assert d.verdict is Verdict.CASE1 and not d.early_exit and d.rows_consumed == 2000
    assert d.rank <= 17 * 17 - 17


def test_original_rand_instance_is_case2_with_early_exit():
    inst = build_instance(Params(3, 11, 3000, case="rand"), 5, 0)
    d = distinguish(inst)
    assert d.verdict is Verdict.CASE2 and d.early_exit and d.rank == threshold(11)
    exact = distinguish(inst, exact_rank=True)
    assert exact.rank == threshold(11) and not exact.early_exit


@pytest.mark.parametrize("q", [2, 3, 5, 17])
def test_k_basis(q):
    basis = k_basis(q)
    assert len(basis) == q - 1
    assert rank_of_vectors([v.values for v in basis], q) == q - 1
    for v in basis:
        grid = v.values.reshape(q, q)  # [alpha, beta]
        assert np.all(grid == grid[:, :1])
        assert grid[:, 0].sum() % q == 0


def test_beta_witness():
    assert beta_witness(2).values.tolist() == [0, 1, 0, 1]
    for q in (2, 5, 17):
        v = beta_witness(q).values
        assert v[0] != v[1]  # varies with beta, so not in K
        assert rank_of_vectors([k.values for k in k_basis(q)] + [v], q) == q


def test_compose_with_inverse():
    v = np.array([10, 11, 12, 13])
    pi = np.array([2, 0, 3, 1])
    u = compose_with_inverse(v, pi)
    inv = np.argsort(pi)
    assert u.tolist() == v[inv].tolist()


@pytest.mark.parametrize("case", ["poly", "rand"])
def test_k_annihilates_every_original_row(case):
    for seed in range(5):
        inst = build_instance(Params(3, 11, 150, case=case), seed, 0, keep_secrets=True)
        pi = inst.secrets.permutation
        assert all(check_annihilation(inst.rows, v, pi, 11) for v in k_basis(11))


def test_beta_witness_on_unpermuted_rows():
    q = 11
    inst = build_instance(Params(3, q, 100, case="poly"), 2, 0, keep_secrets=True)
    graph = inst.secrets.graph_rows()
    v = beta_witness(q).values
    for i, row in enumerate(graph):
        assert row_dot(row, v, q) == int(inst.secrets.tables[i].sum()) % q == 0
    assert check_annihilation(inst.rows, beta_witness(q), inst.secrets.permutation, q)


def test_beta_witness_fails_on_rand():
    inst = build_instance(Params(3, 11, 100, case="rand"), 2, 0, keep_secrets=True)
    assert not check_annihilation(inst.rows, beta_witness(11), inst.secrets.permutation, 11)


def test_k_breaks_on_new_conjecture():
    q, trials, hits = 17, 100, 0
    v = k_basis(q)[0]
    for t in range(trials):
        inst = build_instance(Params(4, q, 100, "new", 8, "poly"), 31, t, keep_secrets=True)
        hits += not check_annihilation(inst.rows, v, inst.secrets.permutation, q)
    assert hits >= 99


def test_check_annihilation_dimension():
    with pytest.raises(DimensionMismatch):
        annihilated_rows(np.array([[0]]), np.zeros(3), np.arange(4), 2)


def test_certificate_report_requires_secrets():
    inst = build_instance(Params(2, 5, 10), 0, 0)
    with pytest.raises(ValueError):
        certificate_report(inst)
    rep = certificate_report(build_instance(Params(2, 5, 10), 0, 0, keep_secrets=True))
    assert rep["k_annihilated"] == rep["k_vectors"] == 4 and rep["beta_annihilated"]


def _oracle_bound(q, m):
    with mpmath.workdps(50):
        return min(mpmath.mpf(1), mpmath.power(q, q * q) * mpmath.exp(-mpmath.mpf(m) / q))


@pytest.mark.parametrize(
    "q,m,expected",
    [(2, 0, 1.0), (17, 14000, 8.81980663688e-3), (17, 20000, 4.62438183171e-156)],
)
def test_failure_bound_values(q, m, expected):
    assert failure_bound(q, m) == pytest.approx(expected, rel=1e-9)
    assert failure_bound(q, m) == pytest.approx(float(_oracle_bound(q, m)), rel=1e-9)


def test_failure_bound_log_space():
    assert log_failure_bound(17, 14000) == pytest.approx(289 * math.log(17) - 14000 / 17)
    assert failure_bound(17, 10**7) == 0.0 or failure_bound(17, 10**7) < 1e-300


@pytest.mark.parametrize("q,target", [(17, 1e-3), (5, 0.5), (11, 1e-6), (2, 0.9)])
def test_recommend_m_inverts_bound(q, target):
    m = recommend_m(q, target)
    assert failure_bound(q, m) <= target
    assert m == 1 or failure_bound(q, m - 1) > target
    assert _oracle_bound(q, m) <= target < _oracle_bound(q, m - 1)


def test_recommend_m_values():
    assert recommend_m(17, 1e-3) == 14038
    assert recommend_m(5, 0.5) == 205
    for bad in (1, 0, 1.5, -0.1):
        with pytest.raises(InvalidTarget):
            recommend_m(17, bad)


@pytest.mark.parametrize("lam,q", [(2, 5), (3, 11)])
def test_rank_gap_small(lam, q):
    m = recommend_m(q, 1e-3)
    for seed in range(5):
        poly = build_instance(Params(lam, q, m, case="poly"), seed, 0)
        rand = build_instance(Params(lam, q, m, case="rand"), seed, 0)
        assert rank_incremental(poly.rows, q * q, q).rank <= q * q - q
        assert rank_incremental(rand.rows, q * q, q).rank == q * q - q + 1
