"""Finite groups as dense multiplication tables.

Elements are the integers ``0..n-1``. Subgroups are frozen index sets that
remember their parent table. Every routine here is a pure function of its
inputs; tables are stored as read-only numpy arrays.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

from .caps import InputError, ResourceError, current_caps

Permutation = Sequence[int]


def _frozen(array: np.ndarray) -> np.ndarray:
    array = np.ascontiguousarray(array, dtype=np.int64)
    array.setflags(write=False)
    return array


class GroupTable:
    """A finite group given by its full multiplication table.

    The constructor trusts its arguments; use :func:`validate_cayley_table`
    for anything that did not come out of a closure or product routine.
    """

    def __init__(self, product, identity: int, inverse, label: str = "G") -> None:
        self.product = _frozen(product)
        self.identity = int(identity)
        self.inverse = _frozen(inverse)
        self.label = label

    @property
    def order(self) -> int:
        return int(self.product.shape[0])

    def __len__(self) -> int:
        return self.order

    def __repr__(self) -> str:
        return f"GroupTable({self.label!r}, order={self.order})"

    def mul(self, a: int, b: int) -> int:
        return int(self.product[a, b])

    def inv(self, a: int) -> int:
        return int(self.inverse[a])

    def commutator(self, a: int, b: int) -> int:
        """``a^-1 b^-1 a b``."""
        t, inv = self.product, self.inverse
        return int(t[t[inv[a], inv[b]], t[a, b]])

    @cached_property
    def commutator_table(self) -> np.ndarray:
        t, inv = self.product, self.inverse
        table = t[t[inv[:, None], inv[None, :]], t]
        table.setflags(write=False)
        return table

    @cached_property
    def is_abelian(self) -> bool:
        return bool(np.array_equal(self.product, self.product.T))

    def whole(self) -> Subgroup:
        return Subgroup(self, frozenset(range(self.order)))

    def trivial(self) -> Subgroup:
        return Subgroup(self, frozenset((self.identity,)))


@dataclass(frozen=True, eq=False)
class Subgroup:
    """A subset of ``parent`` closed under product and inverse."""

    parent: GroupTable
    members: frozenset

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Subgroup):
            return NotImplemented
        return self.parent is other.parent and self.members == other.members

    def __hash__(self) -> int:
        return hash((id(self.parent), self.members))

    def __contains__(self, element: int) -> bool:
        return element in self.members

    def __len__(self) -> int:
        return len(self.members)

    def __le__(self, other: Subgroup) -> bool:
        return self.members <= other.members

    def __repr__(self) -> str:
        return f"Subgroup(order={self.order}, of={self.parent.label!r})"

    @property
    def order(self) -> int:
        return len(self.members)

    @cached_property
    def elements(self) -> np.ndarray:
        """Members as a sorted index array."""
        return _frozen(np.fromiter(sorted(self.members), dtype=np.int64, count=len(self.members)))

    @cached_property
    def mask(self) -> np.ndarray:
        mask = np.zeros(self.parent.order, dtype=bool)
        mask[self.elements] = True
        mask.setflags(write=False)
        return mask

    def is_trivial(self) -> bool:
        return len(self.members) == 1

    def is_whole(self) -> bool:
        return len(self.members) == self.parent.order

    def sort_key(self) -> tuple:
        return (self.order, tuple(self.elements.tolist()))

    def intersection(self, other: Subgroup) -> Subgroup:
        return Subgroup(self.parent, self.members & other.members)


@dataclass(frozen=True, eq=False)
class QuotientMap:
    source: GroupTable
    kernel: Subgroup
    target: GroupTable
    projection: np.ndarray
    representatives: tuple

    def image(self, subgroup: Subgroup) -> Subgroup:
        return Subgroup(self.target, frozenset(int(self.projection[g]) for g in subgroup.members))


def _check_order(n: int) -> None:
    cap = current_caps().order
    if n > cap:
        raise ResourceError(f"group order {n} exceeds cap {cap}")


def format_cycles(perm: Permutation) -> str:
    """Cycle notation with 1-based points; the identity prints as ``()``."""
    seen = set()
    cycles = []
    for start in range(len(perm)):
        if start in seen or perm[start] == start:
            continue
        cycle = [start]
        seen.add(start)
        x = perm[start]
        while x != start:
            cycle.append(x)
            seen.add(x)
            x = perm[x]
        cycles.append("(" + " ".join(str(p + 1) for p in cycle) + ")")
    return "".join(cycles) or "()"


def close_permutation_generators(
    degree: int, generators: Sequence[Permutation], *, label: str | None = None
) -> GroupTable:
    """Group generated by permutations of ``{0..degree-1}``.

    Elements are numbered in breadth-first order from the identity, trying
    generators in the order given. Products compose left to right:
    ``(x*y)[i] = y[x[i]]``.
    """
    if degree < 0:
        raise InputError("degree must be non-negative")
    gens = []
    for k, gen in enumerate(generators):
        gen = tuple(int(x) for x in gen)
        if len(gen) != degree or sorted(gen) != list(range(degree)):
            raise InputError(f"generator {k} is not a bijection on {degree} points: {gen}")
        gens.append(gen)
    if label is None:
        label = f"perm({degree}; " + ", ".join(format_cycles(g) for g in gens) + ")"

    cap = current_caps().order
    identity = tuple(range(degree))
    elements = [identity]
    index = {identity: 0}
    parent = [-1]
    via = [-1]
    right = [[] for _ in gens]  # right[k][x] = index(x * gens[k])
    queue = deque([0])
    while queue:
        x = queue.popleft()
        px = elements[x]
        for k, g in enumerate(gens):
            y = tuple(g[i] for i in px)
            j = index.get(y)
            if j is None:
                j = len(elements)
                if j >= cap:
                    raise ResourceError(f"permutation closure exceeds order cap {cap}")
                index[y] = j
                elements.append(y)
                parent.append(x)
                via.append(k)
                queue.append(j)
            right[k].append(j)

    n = len(elements)
    right_maps = [np.asarray(r, dtype=np.int64) for r in right]
    table = np.empty((n, n), dtype=np.int64)
    table[:, 0] = np.arange(n)
    # BFS order guarantees parent[y] < y; x*y = (x*parent)*gen
    for y in range(1, n):
        table[:, y] = right_maps[via[y]][table[:, parent[y]]]
    identity_col = table == 0
    inverse = np.argmax(identity_col, axis=1)
    group = GroupTable(table, 0, inverse, label)
    group.permutations = tuple(elements)
    return group


def validate_cayley_table(raw, *, label: str = "G") -> GroupTable:
    """Check the group axioms on a raw table and return a :class:`GroupTable`.

    Associativity is scanned over every triple when the order is at most the
    ``assoc_scan`` cap.
    """
    try:
        table = np.asarray(raw, dtype=np.int64)
    except (TypeError, ValueError):
        raise InputError("table is not a rectangular integer array") from None
    if table.ndim != 2 or table.shape[0] != table.shape[1] or table.shape[0] == 0:
        raise InputError(f"table must be a non-empty square array, got shape {table.shape}")
    n = table.shape[0]
    _check_order(n)
    if table.min() < 0 or table.max() >= n:
        raise InputError(f"table entries must lie in [0, {n})")

    arange = np.arange(n)
    candidates = np.flatnonzero((table == arange[None, :]).all(axis=1) & (table == arange[:, None]).all(axis=0))
    if len(candidates) == 0:
        raise InputError("table has no two-sided identity")
    e = int(candidates[0])

    hits = table == e
    if not hits.any(axis=1).all():
        bad = int(np.flatnonzero(~hits.any(axis=1))[0])
        raise InputError(f"element {bad} has no right inverse")
    inverse = np.argmax(hits, axis=1)
    left_ok = table[inverse, arange] == e
    if not left_ok.all():
        bad = int(np.flatnonzero(~left_ok)[0])
        raise InputError(f"element {bad} has no two-sided inverse")

    if n <= current_caps().assoc_scan:
        for a in range(n):
            left = table[table[a, :], :]  # (ab)c indexed [b, c]
            right = table[a, table]  # a(bc)
            diff = left != right
            if diff.any():
                b, c = (int(v) for v in np.argwhere(diff)[0])
                raise InputError(f"associativity fails at (a,b,c) = ({a},{b},{c})")
    return GroupTable(table, e, inverse, label)


def direct_product(G: GroupTable, H: GroupTable) -> GroupTable:
    """Componentwise product; the pair ``(g, h)`` has index ``g*|H| + h``."""
    n, m = G.order, H.order
    _check_order(n * m)
    table = G.product[:, None, :, None] * m + H.product[None, :, None, :]
    table = table.reshape(n * m, n * m)
    inverse = (G.inverse[:, None] * m + H.inverse[None, :]).reshape(-1)
    identity = G.identity * m + H.identity
    return GroupTable(table, identity, inverse, f"{G.label} x {H.label}")


def _check_indices(G: GroupTable, seed: Iterable[int]) -> list[int]:
    out = []
    for s in seed:
        s = int(s)
        if not 0 <= s < G.order:
            raise InputError(f"element index {s} out of range for order {G.order}")
        out.append(s)
    return out


def _extend(G: GroupTable, members: set, new_gens: Iterable[int], base_gens: Iterable[int]) -> set:
    """Subgroup generated by *base_gens* and *new_gens*.

    *members* must already be the subgroup generated by *base_gens*.
    """
    t = G.product
    members = set(members)
    gens = list(base_gens)
    for s in new_gens:
        if s in members:
            continue
        gens.append(s)
        queue = deque(members)
        while queue:
            x = queue.popleft()
            for g in gens:
                y = int(t[x, g])
                if y not in members:
                    members.add(y)
                    queue.append(y)
    return members


def subgroup_generated(G: GroupTable, seed: Iterable[int]) -> Subgroup:
    seed = sorted(set(_check_indices(G, seed)))
    return Subgroup(G, frozenset(_extend(G, {G.identity}, seed, [])))


def join(A: Subgroup, B: Subgroup) -> Subgroup:
    return Subgroup(A.parent, frozenset(_extend(A.parent, A.members, sorted(B.members), sorted(A.members))))


def normal_closure(G: GroupTable, seed: Iterable[int]) -> Subgroup:
    t, inv = G.product, G.inverse
    everything = np.arange(G.order)
    gens = sorted(set(_check_indices(G, seed)))
    members = _extend(G, {G.identity}, gens, [])
    pending = sorted(members)
    while pending:
        fresh = set()
        for h in pending:
            conj = t[t[inv, h], everything]  # g^-1 h g for all g
            fresh.update(int(c) for c in np.unique(conj) if int(c) not in members)
        if not fresh:
            break
        before = set(members)
        members = _extend(G, members, sorted(fresh), gens)
        gens = gens + sorted(fresh)
        pending = sorted(members - before)
    return Subgroup(G, frozenset(members))


def centralizer(G: GroupTable, S: Subgroup) -> Subgroup:
    s = S.elements
    commutes = (G.product[:, s] == G.product[s, :].T).all(axis=1)
    return Subgroup(G, frozenset(np.flatnonzero(commutes).tolist()))


def center(G: GroupTable) -> Subgroup:
    commutes = (G.product == G.product.T).all(axis=1)
    return Subgroup(G, frozenset(np.flatnonzero(commutes).tolist()))


def commutator_subgroup(G: GroupTable, A: Subgroup, B: Subgroup) -> Subgroup:
    """Subgroup generated by all ``a^-1 b^-1 a b``; normal when A or B is."""
    comms = G.commutator_table[np.ix_(A.elements, B.elements)]
    return subgroup_generated(G, np.unique(comms).tolist())


def is_normal(G: GroupTable, S: Subgroup) -> bool:
    t, inv = G.product, G.inverse
    everything = np.arange(G.order)
    conj = t[t[inv[:, None], S.elements[None, :]], everything[:, None]]
    return bool(S.mask[conj].all())


def is_subgroup(G: GroupTable, members: Iterable[int]) -> bool:
    idx = np.fromiter(sorted(set(members)), dtype=np.int64)
    if len(idx) == 0:
        return False
    mask = np.zeros(G.order, dtype=bool)
    mask[idx] = True
    return bool(mask[G.product[np.ix_(idx, idx)]].all() and mask[G.inverse[idx]].all())


def quotient(G: GroupTable, N: Subgroup) -> QuotientMap:
    """Factor group by a normal subgroup.

    Cosets are numbered in order of their least element.
    """
    if N.parent is not G:
        raise InputError("subgroup belongs to a different group")
    if not is_normal(G, N):
        raise InputError(f"subgroup of order {N.order} is not normal in {G.label}")
    projection = np.full(G.order, -1, dtype=np.int64)
    reps = []
    for g in range(G.order):
        if projection[g] < 0:
            projection[G.product[g, N.elements]] = len(reps)
            reps.append(g)
    reps_arr = np.asarray(reps, dtype=np.int64)
    table = projection[G.product[np.ix_(reps_arr, reps_arr)]]
    target = validate_cayley_table(table, label=f"({G.label})/N{N.order}")
    return QuotientMap(G, N, target, _frozen(projection), tuple(reps))


def preimage(q: QuotientMap, T: Subgroup) -> Subgroup:
    hit = T.mask[q.projection]
    return Subgroup(q.source, frozenset(np.flatnonzero(hit).tolist()))


def induced_table(G: GroupTable, K: Subgroup, *, label: str | None = None) -> tuple[GroupTable, np.ndarray]:
    """Standalone table for *K*, plus the map from its indices back into *G*."""
    members = K.elements
    local = np.full(G.order, -1, dtype=np.int64)
    local[members] = np.arange(len(members))
    table = local[G.product[np.ix_(members, members)]]
    inverse = local[G.inverse[members]]
    identity = int(local[G.identity])
    sub = GroupTable(table, identity, inverse, label or f"{G.label}|K{K.order}")
    return sub, members


def lift(G: GroupTable, members_map: np.ndarray, S: Subgroup) -> Subgroup:
    """Carry a subgroup of an induced table back into *G*."""
    return Subgroup(G, frozenset(int(members_map[i]) for i in S.members))


def cyclic_subgroups(G: GroupTable) -> list[Subgroup]:
    seen: dict[frozenset, Subgroup] = {}
    for g in range(G.order):
        C = subgroup_generated(G, [g])
        seen.setdefault(C.members, C)
    return sorted(seen.values(), key=Subgroup.sort_key)


def enumerate_subgroups(G: GroupTable) -> list[Subgroup]:
    """Whole subgroup lattice, as the join-closure of the cyclic subgroups."""
    caps = current_caps()
    if G.order > caps.subgroup_order:
        raise ResourceError(f"subgroup enumeration needs order <= {caps.subgroup_order}, got {G.order}")
    cyclics = cyclic_subgroups(G)
    found: dict[frozenset, Subgroup] = {C.members: C for C in cyclics}
    frontier = list(cyclics)
    while frontier:
        nxt = []
        for H in frontier:
            for C in cyclics:
                if C.members <= H.members:
                    continue
                J = join(H, C)
                if J.members not in found:
                    found[J.members] = J
                    nxt.append(J)
                    if len(found) > caps.subgroup_count:
                        raise ResourceError(f"more than {caps.subgroup_count} subgroups")
        frontier = nxt
    return sorted(found.values(), key=Subgroup.sort_key)


def least_prime_divisor(t: int) -> int:
    if t < 2:
        raise InputError(f"least prime divisor needs t >= 2, got {t}")
    if t % 2 == 0:
        return 2
    d = 3
    while d * d <= t:
        if t % d == 0:
            return d
        d += 2
    return t


def prime_power(t: int) -> tuple[int, int] | None:
    """``(p, n)`` with ``t == p**n`` and ``n >= 1``, else ``None``."""
    if t < 2:
        return None
    p = least_prime_divisor(t)
    n = 0
    while t % p == 0:
        t //= p
        n += 1
    return (p, n) if t == 1 else None


def element_order(G: GroupTable, g: int) -> int:
    k, x = 1, g
    while x != G.identity:
        x = int(G.product[x, g])
        k += 1
    return k
