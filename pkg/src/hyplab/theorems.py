"""Bound functions and per-group verdicts for the central-series theorems.

Finite hypercentral groups are exactly the finite nilpotent groups, and the
hypercentral residual of a finite group is its nilpotent residual; the
checks below use the finite vocabulary throughout.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Optional, Union

import mpmath

from .caps import InputError
from .group import (
    GroupTable,
    Subgroup,
    center,
    centralizer,
    commutator_subgroup,
    enumerate_subgroups,
    induced_table,
    is_normal,
    least_prime_divisor,
    lift,
    normal_closure,
    prime_power,
    quotient,
)
from .series import (
    is_nilpotent,
    lower_central_series,
    nilpotency_profile,
    upper_central_series,
    upper_central_series_by_quotients,
)

HOLDS = "holds"
MARGINAL = "marginal"
VIOLATED = "violated"
SKIPPED = "skipped"

PRECISION_DPS = 60
RELATIVE_TOLERANCE = mpmath.mpf("1e-12")

FINITE_NOTE = "finite group: hypercentral is read as nilpotent, hypercentral residual as nilpotent residual"


@dataclass(frozen=True)
class BoundValue:
    """``t**exponent`` for one of the two bound families.

    ``value`` and ``exponent`` are exact (``int`` / ``Fraction``) when
    ``t`` is a prime power or 1, and ``mpmath.mpf`` otherwise.
    """

    t: int
    p: Optional[int]
    kind: str
    exponent: Union[Fraction, Any]
    value: Union[int, Any]

    @property
    def exact(self) -> bool:
        return isinstance(self.value, int)

    def to_json(self):
        return self.value if self.exact else float(self.value)


def _real_bound(t: int, p: int, shift: int, kind: str) -> BoundValue:
    with mpmath.workdps(PRECISION_DPS):
        exponent = (mpmath.log(t) / mpmath.log(p) + shift) / 2
        value = mpmath.power(t, exponent)
    return BoundValue(t, p, kind, exponent, value)


def wiegold_bound(t: int) -> BoundValue:
    """``t**m`` with ``m = (log_p t - 1)/2``, p the least prime divisor of t."""
    if t < 2:
        raise InputError(f"wiegold bound needs t >= 2, got {t}")
    pp = prime_power(t)
    if pp:
        p, n = pp
        return BoundValue(t, p, "wiegold", Fraction(n - 1, 2), p ** (n * (n - 1) // 2))
    return _real_bound(t, least_prime_divisor(t), -1, "wiegold")


def theorem_b_bound(t: int) -> BoundValue:
    """``t**k`` with ``k = (log_p t + 1)/2``; ``t = 1`` gives 1."""
    if t < 1:
        raise InputError(f"theorem B bound needs t >= 1, got {t}")
    if t == 1:
        return BoundValue(1, None, "theoremB", Fraction(0), 1)
    pp = prime_power(t)
    if pp:
        p, n = pp
        return BoundValue(t, p, "theoremB", Fraction(n + 1, 2), p ** (n * (n + 1) // 2))
    return _real_bound(t, least_prime_divisor(t), 1, "theoremB")


def compare_against_bound(value: int, bound: BoundValue) -> str:
    """``holds`` / ``marginal`` / ``violated`` for ``value <= bound``.

    Real bounds are compared in log space, ``2 ln(v) ln(p)`` against
    ``ln(t)^2 +- ln(t) ln(p)``; anything within the relative tolerance is
    ``marginal``.
    """
    if value < 1:
        raise InputError(f"value must be positive, got {value}")
    if bound.exact:
        return HOLDS if value <= bound.value else VIOLATED
    sign = 1 if bound.kind == "theoremB" else -1
    with mpmath.workdps(PRECISION_DPS):
        ln_t, ln_p = mpmath.log(bound.t), mpmath.log(bound.p)
        lhs = 2 * mpmath.log(value) * ln_p
        rhs = ln_t * ln_t + sign * ln_t * ln_p
        scale = max(abs(lhs), abs(rhs))
        if abs(lhs - rhs) <= RELATIVE_TOLERANCE * scale:
            return MARGINAL
        return HOLDS if lhs < rhs else VIOLATED


@dataclass
class CheckReport:
    check: str
    group: str
    verdict: str
    measured: dict = field(default_factory=dict)
    witnesses: list = field(default_factory=list)
    notes: list = field(default_factory=list)

    def __post_init__(self) -> None:
        if self.verdict == VIOLATED and not self.witnesses:
            raise ValueError("a violated report needs witnesses")

    def to_json(self) -> dict:
        return {
            "check": self.check,
            "group": self.group,
            "verdict": self.verdict,
            "measured": self.measured,
            "witnesses": self.witnesses,
            "notes": self.notes,
        }


def _worst(verdicts) -> str:
    verdicts = list(verdicts)
    for v in (VIOLATED, MARGINAL, HOLDS):
        if v in verdicts:
            return v
    return SKIPPED


def members(S) -> list[int]:
    return S.elements.tolist()


# ------------------------------------------------------------ Schur / Wiegold


def check_schur_wiegold(G: GroupTable) -> CheckReport:
    Z = center(G)
    t = G.order // Z.order
    D = commutator_subgroup(G, G.whole(), G.whole())
    measured = {"t": t, "center_order": Z.order, "derived_order": D.order}
    if t == 1:
        verdict = HOLDS if D.is_trivial() else VIOLATED
        measured.update(bound=1, attained=D.is_trivial())
        witnesses = [] if verdict == HOLDS else [{"derived_subgroup": members(D)}]
        return CheckReport("schur-wiegold", G.label, verdict, measured, witnesses, ["abelian: t = 1"])
    bound = wiegold_bound(t)
    verdict = compare_against_bound(D.order, bound)
    measured.update(
        p=bound.p,
        bound=bound.to_json(),
        exact_bound=bound.exact,
        attained=bound.exact and D.order == bound.value,
    )
    witnesses = [] if verdict != VIOLATED else [{"derived_subgroup": members(D), "center": members(Z)}]
    return CheckReport("schur-wiegold", G.label, verdict, measured, witnesses)


# ------------------------------------------------------------ residual bound


def check_theorem_b(G: GroupTable) -> CheckReport:
    prof = nilpotency_profile(G)
    L = prof.residual
    t = prof.t
    bound = theorem_b_bound(t)
    measured = {
        "t": t,
        "hypercenter_order": prof.hypercenter.order,
        "residual_order": L.order,
        "p": bound.p,
        "bound": bound.to_json(),
        "exact_bound": bound.exact,
    }
    problems = []
    if not is_normal(G, L):
        problems.append({"residual_not_normal": members(L)})
    if not is_nilpotent(quotient(G, L).target):
        problems.append({"quotient_by_residual_not_nilpotent": members(L)})
    if t == 1:
        size_verdict = HOLDS if L.is_trivial() else VIOLATED
    else:
        size_verdict = compare_against_bound(L.order, bound)
    if size_verdict == VIOLATED:
        problems.append({"residual": members(L), "hypercenter": members(prof.hypercenter)})
    verdict = VIOLATED if problems else size_verdict
    if bound.exact and verdict == HOLDS:
        measured["slack"] = str(Fraction(bound.value, L.order))
    elif not bound.exact:
        measured["slack"] = float(bound.value / L.order)
    notes = [FINITE_NOTE] + (["nilpotent group: t = 1"] if t == 1 else [])
    return CheckReport("theorem-b", G.label, verdict, measured, problems, notes)


# ------------------------------------------------------------ Baer duality


def check_baer_duality(G: GroupTable, n: int) -> CheckReport:
    """``zeta_n(G) = G`` exactly when ``gamma_{n+1}(G) = 1``."""
    if n < 1:
        raise InputError(f"n must be positive, got {n}")
    upper = upper_central_series(G)
    lower = lower_central_series(G)
    zn = upper.term(n)
    gn = lower.term(n)  # terms[n] is gamma_{n+1}
    upper_full = zn.is_whole()
    lower_trivial = gn.is_trivial()
    verdict = HOLDS if upper_full == lower_trivial else VIOLATED
    measured = {
        "n": n,
        "index_of_zeta_n": G.order // zn.order,
        "gamma_n_plus_1_order": gn.order,
        "zeta_n_is_G": upper_full,
        "gamma_n_plus_1_trivial": lower_trivial,
    }
    witnesses = [] if verdict == HOLDS else [{"zeta_n": members(zn), "gamma_n_plus_1": members(gn)}]
    return CheckReport("baer-duality", G.label, verdict, measured, witnesses)


def baer_duality_sweep(G: GroupTable) -> CheckReport:
    """All ``n`` up to one past both series' lengths, plus the class comparison."""
    upper = upper_central_series(G)
    lower = lower_central_series(G)
    top = max(upper.length, lower.length) + 1
    per_n = [check_baer_duality(G, n) for n in range(1, top + 1)]
    witnesses = [w for r in per_n for w in r.witnesses]
    nilpotent = upper.stable.is_whole()
    measured = {
        "upper_orders": upper.orders(),
        "lower_orders": lower.orders(),
        "nilpotent": nilpotent,
        "n_checked": top,
    }
    if nilpotent:
        measured["class_upper"] = upper.length
        measured["class_lower"] = lower.length
        if upper.length != lower.length or not lower.stable.is_trivial():
            witnesses.append({"class_upper": upper.length, "class_lower": lower.length})
    else:
        # zeta stuck below G must pair with gamma stuck above 1
        if lower.stable.is_trivial():
            witnesses.append({"hypercenter": members(upper.stable), "residual": members(lower.stable)})
    verdict = VIOLATED if witnesses else HOLDS
    return CheckReport("baer-duality", G.label, verdict, measured, witnesses)


# ------------------------------------------------------------ Hekster


def _product_covers(G: GroupTable, K: Subgroup, N: Subgroup) -> bool:
    import numpy as np

    products = G.product[np.ix_(K.elements, N.elements)]
    return len(np.unique(products)) == G.order


def find_hekster_pairs(G: GroupTable, subgroups=None) -> list[tuple[Subgroup, int]]:
    """Every ``(K, n)`` with ``K zeta_n(G) = G`` and ``1 <= n <= zl(G) + 1``."""
    upper = upper_central_series(G)
    subgroups = enumerate_subgroups(G) if subgroups is None else subgroups
    pairs = []
    for K in subgroups:
        for n in range(1, upper.length + 2):
            if _product_covers(G, K, upper.term(n)):
                pairs.append((K, n))
    return pairs


def check_hekster(G: GroupTable, K: Subgroup, n: int) -> CheckReport:
    upper_G = upper_central_series(G)
    lower_G = lower_central_series(G)
    zn_G = upper_G.term(n)
    if n < 1 or not _product_covers(G, K, zn_G):
        raise InputError(f"hypothesis G = K zeta_{n}(G) fails for K of order {K.order}")
    K_table, back = induced_table(G, K)
    zn_K = lift(G, back, upper_central_series(K_table).term(n))
    gn_K = lift(G, back, lower_central_series(K_table).term(n))
    gn_G = lower_G.term(n)

    identities = {
        "gamma_equal": gn_G == gn_K,
        "zeta_equal": zn_K.members == (K.members & zn_G.members),
        "intersection_equal": (gn_G.members & zn_G.members) == (gn_K.members & zn_K.members),
    }
    witnesses = []
    for name, ok in identities.items():
        if not ok:
            witnesses.append(
                {
                    "identity": name,
                    "K": members(K),
                    "n": n,
                    "gamma_G": members(gn_G),
                    "gamma_K": members(gn_K),
                    "zeta_G": members(zn_G),
                    "zeta_K": members(zn_K),
                }
            )
    measured = {
        "K_order": K.order,
        "n": n,
        "gamma_order": gn_G.order,
        "zeta_n_order": zn_G.order,
        "zeta_n_K_order": zn_K.order,
    }
    return CheckReport("hekster", G.label, VIOLATED if witnesses else HOLDS, measured, witnesses)


def hekster_sweep(G: GroupTable) -> CheckReport:
    pairs = find_hekster_pairs(G)
    reports = [check_hekster(G, K, n) for K, n in pairs]
    nontrivial = sum(1 for K, _ in pairs if not K.is_whole())
    witnesses = [w for r in reports for w in r.witnesses]
    measured = {"pairs": len(pairs), "nontrivial_pairs": nontrivial}
    return CheckReport("hekster", G.label, VIOLATED if witnesses else HOLDS, measured, witnesses)


# ------------------------------------------------------------ centralizers of hypercentral subgroups


def _require_invariant_in_hypercenter(G: GroupTable, W: Subgroup, Z: Subgroup) -> None:
    if not W.members <= Z.members:
        raise InputError(f"W of order {W.order} is not inside the hypercenter")
    if not is_normal(G, W):
        raise InputError(f"W of order {W.order} is not normal")


def check_kaloujnine(G: GroupTable, W: Subgroup) -> CheckReport:
    """``G / C_G(W)`` is nilpotent for normal ``W`` inside the hypercenter."""
    Z = upper_central_series(G).stable
    _require_invariant_in_hypercenter(G, W, Z)
    C = centralizer(G, W)
    q = quotient(G, C)
    nilpotent = is_nilpotent(q.target)
    measured = {"W_order": W.order, "centralizer_order": C.order, "quotient_order": q.target.order}
    witnesses = [] if nilpotent else [{"W": members(W), "centralizer": members(C)}]
    return CheckReport("kaloujnine", G.label, HOLDS if nilpotent else VIOLATED, measured, witnesses)


def check_lemma3_pipeline(G: GroupTable, W: Subgroup) -> CheckReport:
    """Residual order against the residual bound at ``t = |G/W|``."""
    prof = nilpotency_profile(G)
    _require_invariant_in_hypercenter(G, W, prof.hypercenter)
    t = G.order // W.order
    bound = theorem_b_bound(t)
    L = prof.residual
    if t == 1:
        verdict = HOLDS if L.is_trivial() else VIOLATED
    else:
        verdict = compare_against_bound(L.order, bound)
    measured = {"W_order": W.order, "t": t, "residual_order": L.order, "bound": bound.to_json(), "exact_bound": bound.exact}
    witnesses = [] if verdict != VIOLATED else [{"W": members(W), "residual": members(L)}]
    return CheckReport("lemma3", G.label, verdict, measured, witnesses, [FINITE_NOTE])


def hypercenter_invariant_subgroups(G: GroupTable) -> list[Subgroup]:
    """Trivial group, normal closures of each hypercenter element, the hypercenter."""
    Z = upper_central_series(G).stable
    found = {G.trivial().members: G.trivial()}
    for z in sorted(Z.members):
        W = normal_closure(G, [z])
        found.setdefault(W.members, W)
    found.setdefault(Z.members, Z)
    return sorted(found.values(), key=Subgroup.sort_key)


def kaloujnine_sweep(G: GroupTable) -> CheckReport:
    reports = [check_kaloujnine(G, W) for W in hypercenter_invariant_subgroups(G)]
    witnesses = [w for r in reports for w in r.witnesses]
    measured = {"subgroups_checked": len(reports), "W_orders": [r.measured["W_order"] for r in reports]}
    return CheckReport("kaloujnine", G.label, VIOLATED if witnesses else HOLDS, measured, witnesses)


def lemma3_sweep(G: GroupTable) -> CheckReport:
    reports = [check_lemma3_pipeline(G, W) for W in hypercenter_invariant_subgroups(G)]
    witnesses = [w for r in reports for w in r.witnesses]
    measured = {
        "instances": [
            {"W_order": r.measured["W_order"], "t": r.measured["t"], "bound": r.measured["bound"], "verdict": r.verdict}
            for r in reports
        ],
        "residual_order": reports[0].measured["residual_order"],
    }
    verdict = _worst(r.verdict for r in reports)
    return CheckReport("lemma3", G.label, verdict, measured, witnesses, [FINITE_NOTE])


# ------------------------------------------------------------ oracle equivalence


def check_oracle_equivalence(G: GroupTable, brute_force_limit: int = 16) -> CheckReport:
    """Commutator-criterion upper series against the quotient route; for small
    groups also subgroup enumeration against a subset scan."""
    from .oracles import brute_force_subgroups

    fast = upper_central_series(G)
    witnesses = []
    try:
        slow = upper_central_series_by_quotients(G)
    except InputError as exc:
        witnesses.append({"quotient_route_failed": str(exc)})
    else:
        if [s.members for s in fast.terms] != [s.members for s in slow.terms]:
            witnesses.append({"commutator_criterion": fast.orders(), "quotient_route": slow.orders()})
    measured = {"upper_orders": fast.orders()}
    if G.order <= brute_force_limit:
        lattice = {S.members for S in enumerate_subgroups(G)}
        scan = brute_force_subgroups(G)
        measured["subgroups"] = len(lattice)
        if lattice != scan:
            witnesses.append({"join_closure_count": len(lattice), "subset_scan_count": len(scan)})
    return CheckReport("oracle-equivalence", G.label, VIOLATED if witnesses else HOLDS, measured, witnesses)
