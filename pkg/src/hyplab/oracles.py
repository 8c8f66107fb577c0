"""Slow, independent reference computations used to cross-check the engine."""

from __future__ import annotations

import itertools

import numpy as np

from .group import GroupTable


def brute_force_subgroups(G: GroupTable) -> set[frozenset]:
    """Every subset that is closed under the product.

    Only subsets containing the identity whose size divides ``|G|`` are
    scanned; a finite closed nonempty subset is a subgroup.
    """
    n = G.order
    others = [g for g in range(n) if g != G.identity]
    found = set()
    for size in range(1, n + 1):
        if n % size:
            continue
        for rest in itertools.combinations(others, size - 1):
            idx = np.asarray((G.identity,) + rest, dtype=np.int64)
            mask = np.zeros(n, dtype=bool)
            mask[idx] = True
            if mask[G.product[np.ix_(idx, idx)]].all():
                found.add(frozenset(idx.tolist()))
    return found
