import pytest

import naive
from hyplab.catalog import cyclic, dihedral, parse_group_spec, quaternion, sl23, symmetric
from hyplab.group import is_normal, quotient
from hyplab.series import (
    is_nilpotent,
    lower_central_series,
    nilpotency_profile,
    upper_central_series,
    upper_central_series_by_quotients,
)


def test_upper_abelian():
    s = upper_central_series(cyclic(6))
    assert s.orders() == [1, 6]
    assert s.length == 1 and s.stabilized


def test_upper_d4():
    s = upper_central_series(dihedral(4))
    assert s.orders() == [1, 2, 8]
    assert s.length == 2


def test_upper_c2_s3_stops_at_c2_factor():
    G = parse_group_spec("C(2) x S(3)")
    s = upper_central_series(G)
    assert s.orders() == [1, 2]
    # pair (g, h) has index g*6 + h; the C2 factor is {(0, e), (1, e)}
    assert s.stable.members == frozenset({0, 6})


def test_lower_abelian():
    assert lower_central_series(cyclic(5)).orders() == [5, 1]


def test_lower_s3():
    s = lower_central_series(symmetric(3))
    assert s.orders() == [6, 3]
    assert s.stable.order == 3


def test_lower_sl23_residual_is_q8():
    G = sl23()
    L = lower_central_series(G).stable
    assert L.order == 8
    assert len(naive.center(G)) == 2
    # the order-8 normal subgroup of SL(2,3) has a unique involution, like Q8
    involutions = [g for g in L.members if g != G.identity and G.mul(g, g) == G.identity]
    assert len(involutions) == 1


def test_term_clamps_to_stable():
    s = upper_central_series(symmetric(3))
    assert s.term(0) is s.term(5)
    with pytest.raises(IndexError):
        s.term(-1)


def test_profile_q8():
    p = nilpotency_profile(quaternion())
    assert p.nilpotent and p.nilpotency_class == 2
    assert p.hypercenter.is_whole() and p.residual.is_trivial()
    assert p.t == 1


def test_profile_s4_residual_is_a4():
    G = symmetric(4)
    p = nilpotency_profile(G)
    # golden value from the plain-loop commutator oracle
    oracle = naive.lower_series(G)
    assert [len(t) for t in oracle] == [24, 12]
    assert p.residual.members == oracle[-1]
    assert p.residual.order == 12
    assert p.hypercenter.is_trivial() and not p.nilpotent and p.nilpotency_class is None


def test_profile_c6():
    p = nilpotency_profile(cyclic(6))
    assert p.nilpotent and p.nilpotency_class == 1


def test_profile_trivial_group():
    p = nilpotency_profile(cyclic(1))
    assert p.nilpotent and p.nilpotency_class == 0 and p.zl == 0


def test_series_against_naive_loops(catalog):
    for G in catalog:
        if G.order > 24:
            continue
        assert [s.members for s in upper_central_series(G).terms] == naive.upper_series(G)
        assert [s.members for s in lower_central_series(G).terms] == naive.lower_series(G)


def test_commutator_criterion_matches_quotient_route(catalog):
    for G in catalog:
        fast = upper_central_series(G)
        slow = upper_central_series_by_quotients(G)
        assert [s.members for s in fast.terms] == [s.members for s in slow.terms], G.label


def test_series_terms_are_normal_and_monotone(catalog):
    for G in catalog:
        up = upper_central_series(G)
        low = lower_central_series(G)
        for a, b in zip(up.terms, up.terms[1:]):
            assert a.members < b.members
        for a, b in zip(low.terms, low.terms[1:]):
            assert a.members > b.members
        for s in up.terms + low.terms:
            assert is_normal(G, s)


def test_residual_quotient_is_nilpotent(catalog):
    for G in catalog:
        p = nilpotency_profile(G)
        assert is_nilpotent(quotient(G, p.residual).target)
        assert p.nilpotent == p.hypercenter.is_whole() == p.residual.is_trivial()


def test_residual_is_intersection_of_nilpotent_quotients(catalog):
    from hyplab.group import enumerate_subgroups

    for G in catalog:
        if G.order > 48:
            continue
        normals = [N for N in enumerate_subgroups(G) if is_normal(G, N)]
        good = [N for N in normals if is_nilpotent(quotient(G, N).target)]
        meet = frozenset(range(G.order))
        for N in good:
            meet &= N.members
        assert nilpotency_profile(G).residual.members == meet, G.label
