"""Finite ZG-modules: central and augmentation series, hypereccentric
submodules and the Z-decomposition.

A module is ``A = Z_{d1} x ... x Z_{dr}`` with elements stored as tuples
(last coordinate varying fastest). The acting group is the closure of the
given integer matrices, acting on row vectors from the right:
``(a.g)_j = sum_i a_i * M[i][j] mod d_j``.
"""

from __future__ import annotations

import itertools
import math
from collections import deque
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Optional, Sequence

import numpy as np

from .caps import InputError, ResourceError, current_caps
from .group import GroupTable, close_permutation_generators


def _layout(invariants: Sequence[int]) -> tuple[np.ndarray, np.ndarray]:
    """Coordinate table (last coordinate fastest) and index strides."""
    order = math.prod(invariants)
    coords = np.array(list(itertools.product(*(range(d) for d in invariants))), dtype=np.int64)
    coords = coords.reshape(order, len(invariants))
    strides = np.asarray([math.prod(invariants[j + 1:]) for j in range(len(invariants))], dtype=np.int64)
    return coords, strides


class FiniteModule:
    def __init__(self, invariants: Sequence[int], matrices: Sequence, actions: Sequence[np.ndarray], label: str) -> None:
        self.invariants = tuple(int(d) for d in invariants)
        self.matrices = tuple(tuple(tuple(int(x) for x in row) for row in m) for m in matrices)
        self.label = label
        self.order = math.prod(self.invariants)
        self.coords, self.strides = _layout(self.invariants)
        self.coords.setflags(write=False)
        self.actions = tuple(actions)

    def __repr__(self) -> str:
        return f"FiniteModule({self.label!r}, order={self.order})"

    def index(self, coords: np.ndarray) -> np.ndarray:
        mods = np.asarray(self.invariants, dtype=np.int64)
        return (np.asarray(coords) % mods) @ self.strides

    def add(self, a, b):
        return self.index(self.coords[a] + self.coords[b])

    def sub(self, a, b):
        return self.index(self.coords[a] - self.coords[b])

    @cached_property
    def acting_group(self) -> GroupTable:
        return close_permutation_generators(
            self.order, [act.tolist() for act in self.actions], label=f"Aut<{self.label}>"
        )

    def whole(self) -> Submodule:
        return Submodule(self, frozenset(range(self.order)))

    def zero_submodule(self) -> Submodule:
        return Submodule(self, frozenset((0,)))

    def to_json(self) -> dict:
        return {
            "label": self.label,
            "invariants": list(self.invariants),
            "action": [[list(row) for row in m] for m in self.matrices],
        }


@dataclass(frozen=True, eq=False)
class Submodule:
    parent: FiniteModule
    members: frozenset

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Submodule):
            return NotImplemented
        return self.parent is other.parent and self.members == other.members

    def __hash__(self) -> int:
        return hash((id(self.parent), self.members))

    def __le__(self, other: Submodule) -> bool:
        return self.members <= other.members

    def __len__(self) -> int:
        return len(self.members)

    def __repr__(self) -> str:
        return f"Submodule(order={self.order}, of={self.parent.label!r})"

    @property
    def order(self) -> int:
        return len(self.members)

    @cached_property
    def elements(self) -> np.ndarray:
        return np.fromiter(sorted(self.members), dtype=np.int64, count=len(self.members))

    @cached_property
    def mask(self) -> np.ndarray:
        mask = np.zeros(self.parent.order, dtype=bool)
        mask[self.elements] = True
        return mask

    def is_zero(self) -> bool:
        return len(self.members) == 1

    def sort_key(self) -> tuple:
        return (self.order, tuple(self.elements.tolist()))


def build_module(invariants: Sequence[int], matrices: Sequence, *, label: Optional[str] = None) -> FiniteModule:
    """Validate the action matrices and assemble a :class:`FiniteModule`."""
    caps = current_caps()
    invariants = [int(d) for d in invariants]
    if not invariants or any(d < 1 for d in invariants):
        raise InputError(f"invariants must be a non-empty list of positive integers, got {invariants}")
    order = math.prod(invariants)
    if order > caps.module_order:
        raise ResourceError(f"module order {order} exceeds cap {caps.module_order}")
    r = len(invariants)
    mods = np.asarray(invariants, dtype=np.int64)
    coords, strides = _layout(invariants)
    actions = []
    for k, m in enumerate(matrices):
        try:
            mat = np.asarray(m, dtype=np.int64)
        except (TypeError, ValueError):
            raise InputError(f"action matrix {k} is not an integer matrix") from None
        if mat.shape != (r, r):
            raise InputError(f"action matrix {k} must be {r}x{r}, got shape {mat.shape}")
        for i, j in itertools.product(range(r), range(r)):
            if (invariants[i] * mat[i, j]) % invariants[j]:
                raise InputError(f"action matrix {k} is not well defined: entry ({i},{j}) clashes with Z_{invariants[i]} -> Z_{invariants[j]}")
        image = ((coords @ mat) % mods) @ strides
        if len(np.unique(image)) != order:
            raise InputError(f"action matrix {k} is not an automorphism: {mat.tolist()}")
        image.setflags(write=False)
        actions.append(image)
    if label is None:
        label = "x".join(f"C{d}" for d in invariants) + f" with {len(actions)} generator(s)"
    module = FiniteModule(invariants, [np.asarray(m).tolist() for m in matrices], actions, label)
    module.acting_group  # enforces the group-order cap up front
    return module


# ------------------------------------------------------------ submodules


def generate_submodule(A: FiniteModule, seeds: Iterable[int]) -> Submodule:
    """Least submodule containing *seeds*: additive span of their orbit."""
    orbit = set()
    queue = deque()
    for s in seeds:
        s = int(s)
        if not 0 <= s < A.order:
            raise InputError(f"module element {s} out of range")
        if s not in orbit:
            orbit.add(s)
            queue.append(s)
    while queue:
        x = queue.popleft()
        for act in A.actions:
            y = int(act[x])
            if y not in orbit:
                orbit.add(y)
                queue.append(y)
    return Submodule(A, frozenset(_additive_span(A, {0}, sorted(orbit))))


def _additive_span(A: FiniteModule, base: set, extra: Iterable[int]) -> set:
    members = set(base)
    current = np.fromiter(sorted(members), dtype=np.int64)
    for v in extra:
        if v in members:
            continue
        new = []
        w = v
        while w not in members:
            new.append(A.add(current, np.full(len(current), w)))
            w = int(A.add(w, v))
        current = np.unique(np.concatenate([current] + new))
        members = set(current.tolist())
    return members


def submodule_sum(S: Submodule, T: Submodule) -> Submodule:
    return Submodule(S.parent, frozenset(_additive_span(S.parent, S.members, sorted(T.members))))


def is_submodule(A: FiniteModule, members: Iterable[int]) -> bool:
    members = frozenset(members)
    if 0 not in members:
        return False
    idx = np.fromiter(sorted(members), dtype=np.int64)
    mask = np.zeros(A.order, dtype=bool)
    mask[idx] = True
    sums = A.add(idx[:, None], idx[None, :])
    if not mask[sums].all() or not mask[A.sub(np.zeros_like(idx), idx)].all():
        return False
    return all(mask[act[idx]].all() for act in A.actions)


def fixed_submodule(A: FiniteModule) -> Submodule:
    everything = np.arange(A.order)
    fixed = np.ones(A.order, dtype=bool)
    for act in A.actions:
        fixed &= act == everything
    return Submodule(A, frozenset(np.flatnonzero(fixed).tolist()))


def _differences(A: FiniteModule, elements: np.ndarray) -> list[np.ndarray]:
    return [A.sub(act[elements], elements) for act in A.actions]


def upper_module_series(A: FiniteModule) -> list[Submodule]:
    """``A_{i+1} = {a : a.g - a in A_i for every generator g}``; ends at the upper hypercenter."""
    everything = np.arange(A.order)
    current = A.zero_submodule()
    chain = [current]
    while True:
        ok = np.ones(A.order, dtype=bool)
        for diff in _differences(A, everything):
            ok &= current.mask[diff]
        nxt = Submodule(A, frozenset(np.flatnonzero(ok).tolist()))
        if nxt == current:
            return chain
        chain.append(nxt)
        current = nxt


def augmentation_step(S: Submodule) -> Submodule:
    A = S.parent
    diffs = np.unique(np.concatenate([np.zeros(1, dtype=np.int64)] + _differences(A, S.elements)))
    return generate_submodule(A, diffs.tolist())


def augmentation_series(A: FiniteModule) -> list[Submodule]:
    """``B_0 = A``, ``B_{k+1}`` generated by ``b.g - b``; stops when stable."""
    current = A.whole()
    chain = [current]
    while True:
        nxt = augmentation_step(current)
        if nxt == current:
            return chain
        chain.append(nxt)
        current = nxt


def hypercenter(A: FiniteModule) -> Submodule:
    return upper_module_series(A)[-1]


def acts_trivially(lower: Submodule, upper: Submodule) -> bool:
    """True when the acting group centralizes ``upper/lower``."""
    return all(lower.mask[d].all() for d in _differences(upper.parent, upper.elements))


def composition_series(S: Submodule) -> list[Submodule]:
    """A composition series ``0 = C_0 < ... < C_m = S`` of submodules.

    Each step adds the smallest submodule over the previous term generated by
    one further element, which is necessarily minimal over it.
    """
    A = S.parent
    current = A.zero_submodule()
    chain = [current]
    while current.order < S.order:
        best = None
        for x in S.elements.tolist():
            if x in current.members:
                continue
            candidate = _extend_submodule(current, x)
            if best is None or candidate.order < best.order:
                best = candidate
                if _is_prime(candidate.order // current.order):
                    break
        chain.append(best)
        current = best
    return chain


def _extend_submodule(base: Submodule, x: int) -> Submodule:
    A = base.parent
    orbit = {x}
    queue = deque([x])
    while queue:
        y = queue.popleft()
        for act in A.actions:
            z = int(act[y])
            if z not in orbit:
                orbit.add(z)
                queue.append(z)
    return Submodule(A, frozenset(_additive_span(A, base.members, sorted(orbit))))


def _is_prime(n: int) -> bool:
    return n >= 2 and all(n % d for d in range(2, math.isqrt(n) + 1))


def is_hypereccentric(A: FiniteModule, S: Submodule) -> bool:
    """Every composition factor of *S* carries a nontrivial action.

    By Jordan-Hoelder the factors do not depend on the series chosen, so
    one composition series decides it.
    """
    chain = composition_series(S)
    return all(not acts_trivially(lo, hi) for lo, hi in zip(chain, chain[1:]))


def z_decomposition(A: FiniteModule) -> Optional[tuple[Submodule, Submodule]]:
    """``(hypercenter, augmentation-stable term)`` when they split ``A``, else ``None``."""
    Z = hypercenter(A)
    E = augmentation_series(A)[-1]
    if len(Z.members & E.members) != 1 or Z.order * E.order != A.order:
        return None
    if not is_hypereccentric(A, E):
        return None
    return Z, E


def enumerate_submodules(A: FiniteModule) -> list[Submodule]:
    """All submodules: join-closure of the cyclic submodules."""
    caps = current_caps()
    if A.order > caps.oracle_module_order:
        raise ResourceError(f"submodule enumeration needs |A| <= {caps.oracle_module_order}, got {A.order}")
    cyclics: dict[frozenset, Submodule] = {}
    for a in range(A.order):
        C = generate_submodule(A, [a])
        cyclics.setdefault(C.members, C)
    base = sorted(cyclics.values(), key=Submodule.sort_key)
    found = dict(cyclics)
    frontier = list(base)
    while frontier:
        nxt = []
        for S in frontier:
            for C in base:
                if C.members <= S.members:
                    continue
                J = submodule_sum(S, C)
                if J.members not in found:
                    found[J.members] = J
                    nxt.append(J)
        frontier = nxt
    return sorted(found.values(), key=Submodule.sort_key)


class HypereccentricNotUnique(Exception):
    def __init__(self, maximal: list[Submodule]) -> None:
        super().__init__(f"{len(maximal)} maximal hypereccentric submodules")
        self.maximal = maximal


def hypereccentric_submodules(A: FiniteModule) -> list[Submodule]:
    return [S for S in enumerate_submodules(A) if is_hypereccentric(A, S)]


def brute_force_max_hypereccentric(A: FiniteModule) -> Submodule:
    """Unique maximal hypereccentric submodule, found by full enumeration."""
    found = hypereccentric_submodules(A)
    maximal = [S for S in found if not any(S.members < T.members for T in found)]
    if len(maximal) != 1:
        raise HypereccentricNotUnique(maximal)
    top = maximal[0]
    assert all(S <= top for S in found)
    return top


# ------------------------------------------------------------ sweep


def _automorphism_matrices(invariants: Sequence[int]) -> list[tuple]:
    r = len(invariants)
    order = math.prod(invariants)
    mods = np.asarray(invariants, dtype=np.int64)
    coords, strides = _layout(invariants)
    choices = []
    for i, j in itertools.product(range(r), range(r)):
        step = invariants[j] // math.gcd(invariants[i], invariants[j])
        choices.append(range(0, invariants[j], step))
    found = []
    for entries in itertools.product(*choices):
        mat = np.asarray(entries, dtype=np.int64).reshape(r, r)
        image = ((coords @ mat) % mods) @ strides
        if len(np.unique(image)) == order:
            found.append((tuple(map(tuple, mat.tolist())), tuple(image.tolist())))
    return found


def _invariant_vectors(max_order: int) -> list[tuple]:
    out = []

    def grow(prefix, product):
        if prefix:
            out.append(tuple(prefix))
        lo = prefix[-1] if prefix else 2
        for d in range(lo, max_order // product + 1):
            grow(prefix + [d], product * d)

    grow([], 1)
    return sorted(out, key=lambda v: (math.prod(v), len(v), v))


def _closure_key(perms: Sequence[tuple], limit: int) -> Optional[frozenset]:
    identity = tuple(range(len(perms[0])))
    seen = {identity}
    queue = deque([identity])
    while queue:
        x = queue.popleft()
        for g in perms:
            y = tuple(g[i] for i in x)
            if y not in seen:
                if len(seen) >= limit:
                    return None
                seen.add(y)
                queue.append(y)
    return frozenset(seen)


def search_decomposition_failure(
    max_module_order: int = 9,
    max_group_order: int = 48,
    max_generators: int = 2,
    nilpotent_only: bool = False,
) -> list[FiniteModule]:
    """Sweep small modules for ones without a Z-decomposition.

    Every invariant vector ``d1 <= d2 <= ...`` with product up to
    *max_module_order* is paired with every set of at most *max_generators*
    automorphism matrices whose closure has order up to *max_group_order*.
    One module is reported per distinct acting group. Each finding has a
    non-nilpotent acting group.
    """
    from .series import is_nilpotent

    findings = []
    if max_module_order < 2 or max_group_order < 1 or max_generators < 1:
        return findings
    for invariants in _invariant_vectors(max_module_order):
        autos = [a for a in _automorphism_matrices(invariants) if a[1] != tuple(range(len(a[1])))]
        seen: set = set()
        for size in range(1, max_generators + 1):
            for combo in itertools.combinations(autos, size):
                key = _closure_key([img for _, img in combo], max_group_order)
                if key is None or key in seen:
                    continue
                seen.add(key)
                if size == 1:
                    continue  # cyclic acting groups are nilpotent
                mats = [[list(row) for row in m] for m, _ in combo]
                module = build_module(invariants, mats, label=f"{list(invariants)} action {mats}")
                nilpotent = is_nilpotent(module.acting_group)
                if nilpotent and not nilpotent_only:
                    continue
                if not nilpotent and nilpotent_only:
                    continue
                if z_decomposition(module) is None:
                    findings.append(module)
    return findings


# ------------------------------------------------------------ Z-decomposition check


def check_lemma2(A: FiniteModule):
    """Z-decomposition for a nilpotent acting group, cross-checked by brute force
    when ``|A|`` is within the oracle cap."""
    from .series import is_nilpotent
    from .theorems import HOLDS, SKIPPED, VIOLATED, CheckReport

    G = A.acting_group
    nilpotent = is_nilpotent(G)
    upper = upper_module_series(A)
    aug = augmentation_series(A)
    decomposition = z_decomposition(A)
    measured = {
        "module_order": A.order,
        "invariants": list(A.invariants),
        "acting_group_order": G.order,
        "acting_group_nilpotent": nilpotent,
        "upper_orders": [S.order for S in upper],
        "augmentation_orders": [S.order for S in aug],
        "decomposes": decomposition is not None,
    }
    if decomposition is not None:
        measured["Z_order"] = decomposition[0].order
        measured["E_order"] = decomposition[1].order
    if not nilpotent:
        note = f"acting group of order {G.order} is not nilpotent; hypothesis not met"
        return CheckReport("lemma2", A.label, SKIPPED, measured, [], [note])

    witnesses = []
    notes = []
    if decomposition is None:
        witnesses.append({"Z": upper[-1].elements.tolist(), "E": aug[-1].elements.tolist()})
        return CheckReport("lemma2", A.label, VIOLATED, measured, witnesses)
    Z, E = decomposition
    if A.order <= current_caps().oracle_module_order:
        found = hypereccentric_submodules(A)
        maximal = [S for S in found if not any(S.members < T.members for T in found)]
        measured["hypereccentric_submodules"] = len(found)
        if len(maximal) != 1 or maximal[0] != E:
            witnesses.append({"E": E.elements.tolist(), "brute_force_maximal": [S.elements.tolist() for S in maximal]})
        outside = [S.elements.tolist() for S in found if not S <= E]
        if outside:
            witnesses.append({"hypereccentric_outside_E": outside})
    else:
        notes.append(f"brute-force cross-check skipped: |A| = {A.order} above oracle cap")
    return CheckReport("lemma2", A.label, VIOLATED if witnesses else HOLDS, measured, witnesses, notes)


def module_from_json(doc, *, label: Optional[str] = None) -> FiniteModule:
    if not isinstance(doc, dict) or "invariants" not in doc or "action" not in doc:
        raise InputError('module JSON needs {"invariants": [...], "action": [...]}')
    invariants, action = doc["invariants"], doc["action"]
    if not isinstance(invariants, list) or not all(isinstance(d, int) for d in invariants):
        raise InputError("invariants must be a list of integers")
    if not isinstance(action, list):
        raise InputError("action must be a list of matrices")
    return build_module(invariants, action, label=doc.get("label", label))
