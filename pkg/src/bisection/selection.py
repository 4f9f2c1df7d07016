"""Order statistics: randomized quickselect and median-of-medians.

``kth_largest(values, k)`` uses 1-based ``k``. Quickselect switches to the
median-of-medians pivot once its recursion budget runs out, which keeps the
worst case linear.
"""
from __future__ import annotations

import math
import random
from typing import Sequence

METHODS = ("quickselect", "median-of-medians", "numpy")


def _partition3(values, pivot):
    lo = [x for x in values if x > pivot]
    eq = [x for x in values if x == pivot]
    hi = [x for x in values if x < pivot]
    return lo, eq, hi


def _mom_pivot(values):
    if len(values) <= 5:
        return sorted(values)[len(values) // 2]
    medians = [sorted(values[i:i + 5])[len(values[i:i + 5]) // 2]
               for i in range(0, len(values), 5)]
    return median_of_medians_select(medians, (len(medians) + 1) // 2)


def median_of_medians_select(values: Sequence, k: int):
    """k-th largest value, worst-case linear (Blum-Floyd-Pratt-Rivest-Tarjan)."""
    values = list(values)
    if not 1 <= k <= len(values):
        raise ValueError(f"k={k} outside 1..{len(values)}")
    while True:
        if len(values) <= 5:
            return sorted(values, reverse=True)[k - 1]
        lo, eq, hi = _partition3(values, _mom_pivot(values))
        if k <= len(lo):
            values = lo
        elif k <= len(lo) + len(eq):
            return eq[0]
        else:
            k -= len(lo) + len(eq)
            values = hi


def quickselect(values: Sequence, k: int, rng: random.Random | None = None):
    """k-th largest value with random pivots; falls back to median-of-medians."""
    values = list(values)
    if not 1 <= k <= len(values):
        raise ValueError(f"k={k} outside 1..{len(values)}")
    rng = rng or random.Random(0)
    budget = 2 * max(1, math.ceil(math.log2(len(values) + 1)))
    while True:
        if budget == 0:
            return median_of_medians_select(values, k)
        budget -= 1
        lo, eq, hi = _partition3(values, values[rng.randrange(len(values))])
        if k <= len(lo):
            values = lo
        elif k <= len(lo) + len(eq):
            return eq[0]
        else:
            k -= len(lo) + len(eq)
            values = hi


def kth_largest(values: Sequence, k: int, method: str = "quickselect"):
    if method == "quickselect":
        return quickselect(values, k)
    if method == "median-of-medians":
        return median_of_medians_select(values, k)
    if method == "numpy":
        import numpy as np

        arr = np.asarray(values)
        return arr[np.argpartition(arr, len(arr) - k)[len(arr) - k]].item()
    raise ValueError(f"unknown selection method {method!r}")


def top_sum(values: Sequence, m: int, method: str = "quickselect"):
    """Sum of the ``m`` largest values, from the m-th largest as threshold."""
    if m <= 0:
        return 0
    t = kth_largest(values, m, method)
    above = [x for x in values if x > t]
    return sum(above) + (m - len(above)) * t


def top_indices(values: Sequence, m: int, method: str = "quickselect") -> list[int]:
    """Indices of the ``m`` largest values; ties at the threshold go to smaller indices."""
    if m <= 0:
        return []
    t = kth_largest(values, m, method)
    picked = [i for i, x in enumerate(values) if x > t]
    need = m - len(picked)
    for i, x in enumerate(values):
        if need == 0:
            break
        if x == t:
            picked.append(i)
            need -= 1
    return sorted(picked)
