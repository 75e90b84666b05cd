"""The distinguisher's view: permuted point sets over F x F.

Column ``alpha * q + beta`` stands for the point ``(alpha, beta)``. Row ``i``
of an instance is the sorted set ``{pi[col(x, f_i(x))] : x in Omega_i}``
where ``f_i`` is a low-degree polynomial (case ``poly``) or a uniform
function (case ``rand``), and ``Omega_i`` is all of F for the original
conjecture or a fresh random ``s``-subset for the new one.
"""
from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field, replace
from enum import Enum
from typing import Optional

import numpy as np

from .errors import InvalidParams
from .field import Field, is_prime
from .sampler import (
    Polynomial,
    derive_rng,
    row_keys,
    sample_permutation,
    subset_rows,
    uniform_rows,
)


class Conjecture(str, Enum):
    ORIGINAL = "original"
    NEW = "new"


class Case(str, Enum):
    POLY = "poly"
    RAND = "rand"


def default_subset_size(lam: int, q: int) -> int:
    return min(math.ceil(q / 2), 100 * lam)


@dataclass(frozen=True)
class Params:
    lam: int
    q: int
    m: int
    conjecture: Conjecture = Conjecture.ORIGINAL
    s: Optional[int] = None
    case: Case = Case.POLY

    def __post_init__(self):
        try:
            object.__setattr__(self, "conjecture", Conjecture(self.conjecture))
            object.__setattr__(self, "case", Case(self.case))
        except ValueError as exc:
            raise InvalidParams(str(exc)) from None
        if self.s is None:
            s = self.q if self.conjecture is Conjecture.ORIGINAL else default_subset_size(self.lam, self.q)
            object.__setattr__(self, "s", s)
        if self.lam < 1:
            raise InvalidParams("lambda must be >= 1")
        if self.q < 2 or not is_prime(self.q):
            raise InvalidParams(f"q = {self.q} is not prime")
        if self.lam + 1 > self.q:
            raise InvalidParams("need lambda + 1 <= q")
        if self.m < 1:
            raise InvalidParams("m must be >= 1")
        if not 1 <= self.s <= self.q:
            raise InvalidParams(f"subset size must lie in [1, q], got {self.s}")
        if self.conjecture is Conjecture.ORIGINAL and self.s != self.q:
            raise InvalidParams("the original conjecture evaluates on all of F (s = q)")

    @property
    def dim(self) -> int:
        return self.q * self.q

    def to_dict(self) -> dict:
        d = asdict(self)
        d["conjecture"] = self.conjecture.value
        d["case"] = self.case.value
        return d


@dataclass
class Secrets:
    """Everything the distinguisher must not see. Kept only on request."""

    permutation: np.ndarray  # pi, length q*q
    tables: np.ndarray  # (m, q) value tables of f_i
    omegas: np.ndarray  # (m, s) evaluation sets
    coeffs: Optional[np.ndarray] = None  # (m, lam+1) for case poly

    def graph_rows(self) -> np.ndarray:
        """Unpermuted column indices, i.e. the rows of A."""
        q = self.tables.shape[1]
        vals = np.take_along_axis(self.tables, self.omegas, axis=1)
        return self.omegas * q + vals


@dataclass
class Instance:
    rows: np.ndarray  # (m, s), each row sorted
    params: Params
    secrets: Optional[Secrets] = field(default=None, repr=False)

    @property
    def q(self) -> int:
        return self.params.q

    @property
    def dim(self) -> int:
        return self.params.dim

    def to_json(self) -> str:
        return json.dumps({"params": self.params.to_dict(), "rows": self.rows.tolist()})

    @classmethod
    def from_json(cls, text: str) -> "Instance":
        d = json.loads(text)
        params = Params(**d["params"])
        rows = np.array(d["rows"], dtype=np.int64).reshape(params.m, params.s)
        return cls(rows, params)


def eval_polynomial(poly: Polynomial, x: int, field: Field) -> int:
    acc = 0
    for c in reversed(poly.coeffs):
        acc = (acc * x + c) % field.p
    return acc


def eval_polynomials(coeffs: np.ndarray, xs: np.ndarray, p: int) -> np.ndarray:
    """Horner over many polynomials at once; returns ``(len(coeffs), len(xs))``."""
    coeffs = np.asarray(coeffs, dtype=np.int64)
    xs = np.asarray(xs, dtype=np.int64)
    acc = np.zeros((coeffs.shape[0], xs.shape[0]), dtype=np.int64)
    for j in range(coeffs.shape[1] - 1, -1, -1):
        acc = (acc * xs[None, :] + coeffs[:, j : j + 1]) % p
    return acc


def col_index(alpha: int, beta: int, q: int) -> int:
    return alpha * q + beta


def build_instance(
    params: Params,
    master_seed: int,
    trial_index: int,
    *,
    keep_secrets: bool = False,
    permutation: Optional[np.ndarray] = None,
) -> Instance:
    """Sample one instance.

    ``permutation`` overrides pi (debug use only). Stream labels are
    ``"perm"``, ``"poly:i"``, ``"func:i"`` and ``"omega:i"``.
    """
    if not isinstance(params, Params):
        raise InvalidParams("params must be a Params instance")
    q, m, s = params.q, params.m, params.s

    if permutation is None:
        perm = sample_permutation(derive_rng(master_seed, trial_index, "perm"), q * q)
    else:
        perm = np.asarray(permutation, dtype=np.int64)
        if perm.shape != (q * q,) or not np.array_equal(np.sort(perm), np.arange(q * q)):
            raise InvalidParams("permutation override must be a bijection on [0, q*q)")

    coeffs = None
    if params.case is Case.POLY:
        coeffs = uniform_rows(row_keys(master_seed, trial_index, "poly", m), params.lam + 1, q)
        tables = eval_polynomials(coeffs, np.arange(q), q)
    else:
        tables = uniform_rows(row_keys(master_seed, trial_index, "func", m), q, q)

    if params.conjecture is Conjecture.ORIGINAL:
        omegas = np.tile(np.arange(q, dtype=np.int64), (m, 1))
    else:
        omegas = subset_rows(row_keys(master_seed, trial_index, "omega", m), s, q)

    graph = omegas * q + np.take_along_axis(tables, omegas, axis=1)
    rows = np.sort(perm[graph], axis=1)

    secrets = Secrets(perm, tables, omegas, coeffs) if keep_secrets else None
    return Instance(rows, params, secrets)


def with_case(params: Params, case: Case) -> Params:
    return replace(params, case=Case(case))
