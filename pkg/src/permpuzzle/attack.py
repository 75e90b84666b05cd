"""The rank distinguisher and its kernel certificates.

Uniform-function rows all lie in the orthogonal complement of ``K``, the
(q-1)-dimensional space of vectors that are constant in beta and whose
alpha-profile sums to zero, so their rank is at most ``q*q - q + 1`` and
equals it once enough rows are seen. Rows from polynomials of degree below
``q - 1`` are also killed by ``v[(alpha, beta)] = beta``, which pushes the
rank strictly below the threshold.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Optional

import numpy as np

from .errors import DimensionMismatch, InvalidTarget
from .instance import Instance
from .linalg import RankResult, rank_incremental


class Verdict(str, Enum):
    CASE1 = "case1"
    CASE2 = "case2"


@dataclass(frozen=True)
class Decision:
    verdict: Verdict
    rank: int
    threshold: int
    early_exit: bool = False
    rows_consumed: int = 0


def threshold(q: int) -> int:
    if q < 2:
        raise ValueError("q must be >= 2")
    return q * q - q + 1


def decide(rank: int, q: int) -> Verdict:
    return Verdict.CASE1 if rank < threshold(q) else Verdict.CASE2


def distinguish(instance: Instance, exact_rank: bool = False) -> Decision:
    """Case 1 iff the indicator matrix has rank below ``q*q - q + 1``.

    Uses only ``instance.rows``. With early exit (the default) the reported
    rank is clipped at the threshold.
    """
    q = instance.q
    t = threshold(q)
    res: RankResult = rank_incremental(
        instance.rows, q * q, q, early_exit_at=None if exact_rank else t
    )
    return Decision(decide(res.rank, q), res.rank, t, res.early_exit, res.rows_consumed)


@dataclass(frozen=True)
class KernelVector:
    values: np.ndarray  # length q*q, indexed by alpha * q + beta
    tag: str  # "K" or "beta"
    alpha: Optional[int] = None


def k_basis(q: int) -> list[KernelVector]:
    """Basis of K: for alpha = 1..q-1, w = e_alpha - e_0 spread over beta."""
    out = []
    for a in range(1, q):
        w = np.zeros(q, dtype=np.int64)
        w[a] = 1
        w[0] = q - 1
        out.append(KernelVector(np.repeat(w, q), "K", a))
    return out


def beta_witness(q: int) -> KernelVector:
    return KernelVector(np.tile(np.arange(q, dtype=np.int64), q), "beta")


def compose_with_inverse(v: np.ndarray, permutation: np.ndarray) -> np.ndarray:
    """``u`` with ``u[pi[j]] = v[j]``, i.e. ``v`` read through pi^-1."""
    u = np.empty_like(v)
    u[permutation] = v
    return u


def annihilated_rows(rows: np.ndarray, v, permutation: np.ndarray, q: int) -> np.ndarray:
    """Boolean mask of rows whose dot product with ``v o pi^-1`` vanishes."""
    vals = v.values if isinstance(v, KernelVector) else np.asarray(v, dtype=np.int64)
    permutation = np.asarray(permutation, dtype=np.int64)
    if vals.shape[0] != q * q or permutation.shape[0] != q * q:
        raise DimensionMismatch("vector and permutation must have length q*q")
    u = compose_with_inverse(vals, permutation)
    rows = np.asarray(rows, dtype=np.int64)
    return u[rows].sum(axis=1) % q == 0


def check_annihilation(rows, v, permutation: np.ndarray, q: int) -> bool:
    return bool(annihilated_rows(rows, v, permutation, q).all())


def log_failure_bound(q: int, m: int) -> float:
    """Natural log of ``q**(q*q) * exp(-m/q)``."""
    return q * q * math.log(q) - m / q


def failure_bound(q: int, m: int) -> float:
    """Union bound on Pr[case-2 rank falls short], clamped to [0, 1]."""
    lb = log_failure_bound(q, m)
    if lb >= 0:
        return 1.0
    return math.exp(lb)


def recommend_m(q: int, target_failure: float) -> int:
    """Smallest m with ``failure_bound(q, m) <= target_failure``."""
    if not 0 < target_failure < 1:
        raise InvalidTarget("target failure probability must lie in (0, 1)")
    m = max(1, math.ceil(q * (q * q * math.log(q) - math.log(target_failure))))
    # guard against rounding at the boundary
    while m > 1 and failure_bound(q, m - 1) <= target_failure:
        m -= 1
    while failure_bound(q, m) > target_failure:
        m += 1
    return m


def certificate_report(instance: Instance) -> dict:
    """Check K (and, for case poly, the beta witness) against a debug instance."""
    if instance.secrets is None:
        raise ValueError("certificate checks need an instance built with keep_secrets=True")
    q = instance.q
    pi = instance.secrets.permutation
    k_ok = [check_annihilation(instance.rows, v, pi, q) for v in k_basis(q)]
    beta_ok = check_annihilation(instance.rows, beta_witness(q), pi, q)
    return {
        "case": instance.params.case.value,
        "conjecture": instance.params.conjecture.value,
        "k_vectors": len(k_ok),
        "k_annihilated": sum(k_ok),
        "beta_annihilated": beta_ok,
    }
