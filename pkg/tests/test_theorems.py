import pytest

from hyplab.caps import InputError
from hyplab.catalog import cyclic, dihedral, extraspecial, parse_group_spec, quaternion, sl23, symmetric
from hyplab.group import GroupTable, center, enumerate_subgroups, is_normal, normal_closure, subgroup_generated
from hyplab.series import upper_central_series
from hyplab.theorems import (
    HOLDS,
    VIOLATED,
    CheckReport,
    baer_duality_sweep,
    check_baer_duality,
    check_hekster,
    check_kaloujnine,
    check_lemma3_pipeline,
    check_oracle_equivalence,
    check_schur_wiegold,
    check_theorem_b,
    find_hekster_pairs,
    hekster_sweep,
    hypercenter_invariant_subgroups,
    kaloujnine_sweep,
    lemma3_sweep,
)


# ------------------------------------------------------------ Schur / Wiegold


def test_schur_wiegold_q8_attains():
    r = check_schur_wiegold(quaternion())
    assert r.verdict == HOLDS
    assert r.measured["t"] == 4 and r.measured["derived_order"] == 2
    assert r.measured["bound"] == 2 and r.measured["attained"] is True


def test_schur_wiegold_extraspecial_27_attains():
    for kind in "+-":
        r = check_schur_wiegold(extraspecial(3, kind))
        assert (r.measured["t"], r.measured["derived_order"], r.measured["bound"]) == (9, 3, 3)
        assert r.measured["attained"] is True


def test_schur_wiegold_s3_strict():
    r = check_schur_wiegold(symmetric(3))
    assert r.verdict == HOLDS
    assert r.measured["t"] == 6 and r.measured["derived_order"] == 3
    assert r.measured["bound"] == pytest.approx(4.13685478, rel=1e-8)
    assert r.measured["attained"] is False


def test_schur_wiegold_abelian():
    r = check_schur_wiegold(cyclic(10))
    assert r.verdict == HOLDS and r.measured["t"] == 1


# ------------------------------------------------------------ residual bound


def test_theorem_b_c2_s3():
    r = check_theorem_b(parse_group_spec("C(2) x S(3)"))
    assert r.verdict == HOLDS
    assert (r.measured["t"], r.measured["residual_order"], r.measured["hypercenter_order"]) == (6, 3, 2)
    assert r.measured["bound"] == pytest.approx(24.8211287, rel=1e-8)


def test_theorem_b_sl23():
    r = check_theorem_b(sl23())
    assert r.verdict == HOLDS
    assert (r.measured["t"], r.measured["residual_order"]) == (12, 8)
    assert r.measured["bound"] == pytest.approx(297.853544, rel=1e-8)


def test_theorem_b_nilpotent_trivial():
    r = check_theorem_b(dihedral(8))
    assert r.verdict == HOLDS
    assert (r.measured["t"], r.measured["residual_order"]) == (1, 1)


def test_theorem_b_never_violated_on_catalog(catalog):
    for G in catalog:
        assert check_theorem_b(G).verdict == HOLDS, G.label


# ------------------------------------------------------------ Baer


def test_baer_nilpotent_at_class():
    G = dihedral(8)  # class 3
    r = check_baer_duality(G, 3)
    assert r.verdict == HOLDS
    assert r.measured["zeta_n_is_G"] and r.measured["gamma_n_plus_1_trivial"]


def test_baer_d4_n1():
    r = check_baer_duality(dihedral(4), 1)
    assert r.verdict == HOLDS
    assert r.measured["index_of_zeta_n"] == 4
    assert r.measured["gamma_n_plus_1_order"] == 2
    assert not r.measured["zeta_n_is_G"]


@pytest.mark.parametrize("n", [1, 2, 3, 7])
def test_baer_s3_any_n(n):
    r = check_baer_duality(symmetric(3), n)
    assert r.verdict == HOLDS
    assert r.measured["index_of_zeta_n"] == 6 and r.measured["gamma_n_plus_1_order"] == 3


def test_baer_rejects_zero():
    with pytest.raises(InputError):
        check_baer_duality(cyclic(2), 0)


def test_baer_sweep_class_agreement(catalog):
    for G in catalog:
        r = baer_duality_sweep(G)
        assert r.verdict == HOLDS
        if r.measured["nilpotent"]:
            assert r.measured["class_upper"] == r.measured["class_lower"]


# ------------------------------------------------------------ Hekster


def test_hekster_pairs_abelian_all_at_n1():
    G = cyclic(12)
    pairs = find_hekster_pairs(G)
    assert {K.members for K, n in pairs if n == 1} == {S.members for S in enumerate_subgroups(G)}


def test_hekster_pairs_s3_only_whole():
    pairs = find_hekster_pairs(symmetric(3))
    assert all(K.is_whole() for K, _ in pairs)
    assert [n for _, n in pairs] == [1]


def _s3_factor(G):
    # C2 x S3 with index g*6 + h: the S3 factor is indices 0..5
    return subgroup_generated(G, range(6))


def test_hekster_pairs_c2_s3_contains_s3_factor():
    G = parse_group_spec("C(2) x S(3)")
    K = _s3_factor(G)
    assert (K.members, 1) in {(P.members, n) for P, n in find_hekster_pairs(G)}


def test_hekster_identities_c2_s3():
    G = parse_group_spec("C(2) x S(3)")
    K = _s3_factor(G)
    r = check_hekster(G, K, 1)
    assert r.verdict == HOLDS
    assert r.measured["gamma_order"] == 3
    assert r.measured["zeta_n_K_order"] == 1


def test_hekster_k_equals_g():
    G = dihedral(6)
    for n in (1, 2, 3):
        assert check_hekster(G, G.whole(), n).verdict == HOLDS


def test_hekster_hypothesis_failure_is_input_error():
    G = symmetric(3)
    with pytest.raises(InputError):
        check_hekster(G, G.trivial(), 1)


def test_hekster_sweep_d4_s3():
    G = parse_group_spec("D(4) x S(3)")
    r = hekster_sweep(G)
    assert r.verdict == HOLDS
    assert r.measured["nontrivial_pairs"] > 0


# ------------------------------------------------------------ centralizers of hypercentral subgroups


def test_kaloujnine_trivial_w():
    G = symmetric(4)
    r = check_kaloujnine(G, G.trivial())
    assert r.verdict == HOLDS and r.measured["quotient_order"] == 1


def test_kaloujnine_full_hypercenter_c2_s3():
    G = parse_group_spec("C(2) x S(3)")
    Z = upper_central_series(G).stable
    r = check_kaloujnine(G, Z)
    assert r.verdict == HOLDS
    assert r.measured["centralizer_order"] == 12 and r.measured["quotient_order"] == 1


def test_kaloujnine_center_of_d4_s3():
    G = parse_group_spec("D(4) x S(3)")
    assert check_kaloujnine(G, center(G)).verdict == HOLDS
    Z = upper_central_series(G).stable
    r = check_kaloujnine(G, Z)  # Z = D4 factor, centralizer misses its noncentral part
    assert r.verdict == HOLDS and r.measured["quotient_order"] == 4


def test_kaloujnine_preconditions():
    G = symmetric(3)
    a3 = normal_closure(G, [2])
    with pytest.raises(InputError, match="hypercenter"):
        check_kaloujnine(G, a3)
    D4 = dihedral(4)
    non_normal = subgroup_generated(D4, [1])  # a reflection
    assert not is_normal(D4, non_normal)
    with pytest.raises(InputError, match="normal"):
        check_kaloujnine(D4, non_normal)


def test_lemma3_w_equals_z_matches_theorem_b(catalog):
    for G in catalog:
        Z = upper_central_series(G).stable
        a, b = check_lemma3_pipeline(G, Z), check_theorem_b(G)
        assert a.measured["t"] == b.measured["t"]
        assert a.verdict == b.verdict


def test_lemma3_c2_s3_trivial_w():
    G = parse_group_spec("C(2) x S(3)")
    r = check_lemma3_pipeline(G, G.trivial())
    assert r.verdict == HOLDS
    assert (r.measured["t"], r.measured["residual_order"]) == (12, 3)
    assert r.measured["bound"] == pytest.approx(297.853544, rel=1e-8)


def test_lemma3_sl23_center():
    G = sl23()
    r = check_lemma3_pipeline(G, center(G))
    assert r.verdict == HOLDS and (r.measured["t"], r.measured["residual_order"]) == (12, 8)


def test_hypercenter_invariant_subgroups_are_normal_inside_z(catalog):
    for G in catalog:
        Z = upper_central_series(G).stable
        for W in hypercenter_invariant_subgroups(G):
            assert W.members <= Z.members and is_normal(G, W)


def test_sweeps_hold_on_catalog(catalog):
    for G in catalog:
        assert kaloujnine_sweep(G).verdict == HOLDS
        assert lemma3_sweep(G).verdict == HOLDS


# ------------------------------------------------------------ reports


def test_violated_report_needs_witness():
    with pytest.raises(ValueError):
        CheckReport("x", "G", VIOLATED)


def test_oracle_equivalence_flags_corrupted_table():
    good = cyclic(3)
    bad = GroupTable(good.product, 0, [0, 1, 2], label="C3 with wrong inverses")
    r = check_oracle_equivalence(bad)
    assert r.verdict == VIOLATED and r.witnesses
    assert check_oracle_equivalence(good).verdict == HOLDS
