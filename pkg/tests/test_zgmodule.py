import json

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import naive
from conftest import GOLDEN
from hyplab.caps import Caps, InputError, ResourceError, use_caps
from hyplab.series import is_nilpotent
from hyplab.theorems import HOLDS, SKIPPED
from hyplab.zgmodule import (
    HypereccentricNotUnique,
    augmentation_series,
    brute_force_max_hypereccentric,
    build_module,
    check_lemma2,
    composition_series,
    enumerate_submodules,
    fixed_submodule,
    generate_submodule,
    hypercenter,
    hypereccentric_submodules,
    is_hypereccentric,
    is_submodule,
    module_from_json,
    search_decomposition_failure,
    upper_module_series,
    z_decomposition,
)


def coords_of(A, S):
    return {tuple(int(x) for x in A.coords[i]) for i in S.members}


# ------------------------------------------------------------ construction


@pytest.mark.parametrize(
    "invariants, matrices, match",
    [
        ([], [], "non-empty"),
        ([0], [], "positive"),
        ([3], [[[1, 0]]], "1x1"),
        ([2, 3], [[[1, 1], [0, 1]]], "not well defined"),
        ([4], [[[2]]], "not an automorphism"),
        ([3], [["a"]], "integer matrix"),
    ],
)
def test_build_module_rejects(invariants, matrices, match):
    with pytest.raises(InputError, match=match):
        build_module(invariants, matrices)


def test_build_module_order_cap():
    with use_caps(Caps(module_order=16)):
        with pytest.raises(ResourceError):
            build_module([5, 5], [])


def test_mixed_invariants_hom_allowed():
    # Z4 -> Z2 by reduction and Z2 -> Z4 by doubling are both well defined
    A = build_module([4, 2], [[[1, 1], [0, 1]]])
    assert A.order == 8 and A.acting_group.order == 2
    B = build_module([2, 4], [[[1, 2], [0, 1]]])
    assert B.acting_group.order == 2


def test_action_matches_naive():
    inv, m = [3, 3], [[0, 1], [1, 0]]
    A = build_module(inv, [m])
    for a in range(A.order):
        c = tuple(int(x) for x in A.coords[a])
        img = tuple(int(x) for x in A.coords[A.actions[0][a]])
        assert img == naive.act(inv, m, c)


def test_module_from_json():
    A = module_from_json({"invariants": [5], "action": [[[2]]], "label": "x"})
    assert A.label == "x" and A.acting_group.order == 4
    with pytest.raises(InputError):
        module_from_json({"invariants": [5]})
    with pytest.raises(InputError):
        module_from_json({"invariants": "5", "action": []})


# ------------------------------------------------------------ submodules and series


@pytest.mark.parametrize("label", ["C3xC3 swap", "Z4xC2 unipotent", "C3xC3 signed permutations (D4)", "C2xC2 GL(2,2)"])
def test_generated_submodule_matches_naive(modules_by_label, label):
    A = modules_by_label[label]
    for a in range(A.order):
        S = generate_submodule(A, [a])
        seed = tuple(int(x) for x in A.coords[a])
        assert coords_of(A, S) == naive.span(A.invariants, A.matrices, [seed])
        assert is_submodule(A, S.members)


def test_fixed_points_match_naive(module_catalog):
    for A in module_catalog:
        assert coords_of(A, fixed_submodule(A)) == naive.fixed_points(A.invariants, A.matrices), A.label


def test_z4_negation_series(modules_by_label):
    A = modules_by_label["Z4 negation"]
    assert [S.order for S in upper_module_series(A)] == [1, 2, 4]
    assert [S.order for S in augmentation_series(A)] == [4, 2, 1]
    Z, E = z_decomposition(A)
    assert Z.order == 4 and E.is_zero


def test_c3_negation_series(modules_by_label):
    A = modules_by_label["C3 negation"]
    assert [S.order for S in upper_module_series(A)] == [1]
    assert [S.order for S in augmentation_series(A)] == [3]
    Z, E = z_decomposition(A)
    assert Z.is_zero and E.order == 3


def test_trivial_action_is_all_hypercenter(modules_by_label):
    A = modules_by_label["C6 trivial action"]
    Z, E = z_decomposition(A)
    assert Z.order == 6 and E.order == 1


def test_brute_force_negate_first(modules_by_label):
    A = modules_by_label["C3xC3 negate first"]
    top = brute_force_max_hypereccentric(A)
    assert coords_of(A, top) == {(0, 0), (1, 0), (2, 0)}
    assert z_decomposition(A)[1] == top


def test_composition_series_is_maximal_chain(module_catalog):
    for A in module_catalog:
        chain = composition_series(A.whole())
        assert chain[0].is_zero and chain[-1] == A.whole()
        subs = enumerate_submodules(A) if A.order <= 64 else None
        for lo, hi in zip(chain, chain[1:]):
            assert lo.members < hi.members
            if subs is not None:
                between = [S for S in subs if lo.members < S.members < hi.members]
                assert not between, A.label


def test_hypereccentric_agrees_with_augmentation_for_nilpotent(module_catalog):
    # For a nilpotent acting group S is hypereccentric iff [S, G] = S.
    from hyplab.zgmodule import augmentation_step

    for A in module_catalog:
        if not is_nilpotent(A.acting_group):
            continue
        for S in enumerate_submodules(A):
            assert is_hypereccentric(A, S) == (augmentation_step(S) == S), (A.label, S)


def test_augmentation_criterion_fails_without_nilpotence(modules_by_label):
    # S3 acting on C3xC3 without a splitting: the augmentation ideal is
    # stable on the whole module although a trivial factor is present.
    A = modules_by_label["C3xC3 S3 nonsplit"]
    assert not is_nilpotent(A.acting_group)
    E = augmentation_series(A)[-1]
    assert not is_hypereccentric(A, E)
    assert z_decomposition(A) is None


def test_direct_sum_is_componentwise(modules_by_label):
    A = modules_by_label["C2+C3 negate C3"]
    Z, E = z_decomposition(A)
    assert coords_of(A, Z) == {(0, 0), (1, 0)}
    assert coords_of(A, E) == {(0, 0), (0, 1), (0, 2)}


def test_lemma2_on_catalog(module_catalog):
    for A in module_catalog:
        r = check_lemma2(A)
        if is_nilpotent(A.acting_group):
            assert r.verdict == HOLDS, (A.label, r.witnesses)
            E = brute_force_max_hypereccentric(A)
            assert r.measured["E_order"] == E.order
            assert r.measured["Z_order"] * E.order == A.order
            assert hypercenter(A).order == r.measured["Z_order"]
        else:
            assert r.verdict == SKIPPED


def test_gl22_has_no_hypercenter_but_is_hypereccentric(modules_by_label):
    A = modules_by_label["C2xC2 GL(2,2)"]
    assert hypercenter(A).is_zero
    assert is_hypereccentric(A, A.whole())
    assert [S.order for S in hypereccentric_submodules(A)] == [1, 4]


def test_trivial_module_has_only_zero_hypereccentric():
    A = build_module([2, 2], [])
    assert brute_force_max_hypereccentric(A).is_zero
    assert [S.order for S in hypereccentric_submodules(A)] == [1]


def test_enumerate_submodules_cap():
    with use_caps(Caps(oracle_module_order=8)):
        with pytest.raises(ResourceError):
            enumerate_submodules(build_module([3, 3], []))


@settings(max_examples=30, deadline=None)
@given(st.sampled_from([3, 5, 7, 9]), st.integers(1, 8), st.booleans())
def test_cyclic_modules_decompose(n, k, twice):
    import math

    if math.gcd(k, n) != 1 or (twice and n == 9):
        return
    A = build_module([n, n] if twice else [n], [[[k, 0], [0, 1]]] if twice else [[[k]]])
    Z, E = z_decomposition(A)
    assert Z.order * E.order == A.order
    assert E == brute_force_max_hypereccentric(A)


# ------------------------------------------------------------ sweep


def _load_golden():
    return json.loads((GOLDEN / "decomposition_search.json").read_text())


@pytest.mark.parametrize("caps", [(1, 1), (4, 48)])
def test_search_small_caps_empty(caps):
    found = search_decomposition_failure(max_module_order=caps[0], max_group_order=caps[1])
    assert [A.label for A in found] == _load_golden()[f"{caps[0]},{caps[1]}"]


def test_search_nilpotent_only_is_empty():
    assert search_decomposition_failure(max_module_order=9, max_group_order=48, nilpotent_only=True) == []


def test_search_findings_are_genuine():
    found = search_decomposition_failure(max_module_order=8, max_group_order=48)
    assert len(found) == _load_golden()["8,48"]
    for A in found:
        assert not is_nilpotent(A.acting_group)
        Z = hypercenter(A)
        try:
            E = brute_force_max_hypereccentric(A)
        except HypereccentricNotUnique:
            continue
        assert len(Z.members & E.members) != 1 or Z.order * E.order != A.order
