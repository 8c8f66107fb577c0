"""Upper and lower central series, hypercenter and nilpotent residual."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .group import GroupTable, Subgroup, center, commutator_subgroup, preimage, quotient


@dataclass(frozen=True, eq=False)
class CentralSeries:
    """A central series cut off at its first repeated term.

    ``terms`` is strictly monotone; the stable term is stored once, at the
    end. Index ``i`` in the upper series is ``zeta_i``; in the lower series
    ``terms[i]`` is ``gamma_{i+1}``.
    """

    group: GroupTable
    terms: tuple
    direction: str
    stabilized: bool = True

    @property
    def length(self) -> int:
        return len(self.terms) - 1

    @property
    def stable(self) -> Subgroup:
        return self.terms[-1]

    def term(self, i: int) -> Subgroup:
        """Term ``i`` of the full (non-truncated) series."""
        if i < 0:
            raise IndexError(i)
        return self.terms[min(i, len(self.terms) - 1)]

    def orders(self) -> list[int]:
        return [s.order for s in self.terms]


def upper_central_series(G: GroupTable) -> CentralSeries:
    """``zeta_{i+1} = {g : [g, x] in zeta_i for all x}``, iterated to stability."""
    comm = G.commutator_table
    current = G.trivial()
    terms = [current]
    while True:
        nxt_mask = current.mask[comm].all(axis=1)
        nxt = Subgroup(G, frozenset(np.flatnonzero(nxt_mask).tolist()))
        if nxt == current:
            break
        terms.append(nxt)
        current = nxt
    return CentralSeries(G, tuple(terms), "ascending")


def upper_central_series_by_quotients(G: GroupTable) -> CentralSeries:
    """Definitional route: pull back the center of ``G/zeta_i``.

    Slower than :func:`upper_central_series`; kept as an oracle.
    """
    current = G.trivial()
    terms = [current]
    while True:
        q = quotient(G, current)
        nxt = preimage(q, center(q.target))
        if nxt == current:
            break
        terms.append(nxt)
        current = nxt
    return CentralSeries(G, tuple(terms), "ascending")


def lower_central_series(G: GroupTable) -> CentralSeries:
    whole = G.whole()
    current = whole
    terms = [current]
    while True:
        nxt = commutator_subgroup(G, current, whole)
        if nxt == current:
            break
        terms.append(nxt)
        current = nxt
    return CentralSeries(G, tuple(terms), "descending")


def hypercenter(G: GroupTable) -> Subgroup:
    return upper_central_series(G).stable


def nilpotent_residual(G: GroupTable) -> Subgroup:
    return lower_central_series(G).stable


def is_nilpotent(G: GroupTable) -> bool:
    return upper_central_series(G).stable.is_whole()


@dataclass(frozen=True, eq=False)
class NilpotencyProfile:
    order: int
    hypercenter: Subgroup
    zl: int
    residual: Subgroup
    nilpotent: bool
    nilpotency_class: Optional[int]
    upper: CentralSeries
    lower: CentralSeries

    @property
    def t(self) -> int:
        """Index of the hypercenter."""
        return self.order // self.hypercenter.order


def nilpotency_profile(G: GroupTable) -> NilpotencyProfile:
    upper = upper_central_series(G)
    lower = lower_central_series(G)
    nilpotent = upper.stable.is_whole()
    return NilpotencyProfile(
        order=G.order,
        hypercenter=upper.stable,
        zl=upper.length,
        residual=lower.stable,
        nilpotent=nilpotent,
        nilpotency_class=upper.length if nilpotent else None,
        upper=upper,
        lower=lower,
    )
