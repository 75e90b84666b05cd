import math
from collections import Counter


def assert_uniform(counts: Counter, support: list, n: int, k_sigma: float = 5.0):
    """Every outcome in ``support`` within k_sigma of n/|support| (binomial sd)."""
    assert set(counts) <= set(support)
    p = 1 / len(support)
    sd = math.sqrt(n * p * (1 - p))
    for outcome in support:
        assert abs(counts[outcome] - n * p) <= k_sigma * sd, (outcome, counts[outcome], n * p)
