"""Rational lower bounds on Waldschmidt constants of s generic points in P^n,
plus the asymptotic-initial-degree checks built on them.

The engine evaluates every applicable rule and keeps the maximum:

  trivial        alpha-hat >= 1 for any nonempty point set
  monotone       more points never lower the constant
  root-count     k^n points have constant exactly k (k >= 2)
  small-count    closed forms for n+1, n+2, n+3 points (parity-split at n+3)
  block-doubling 2^n*b or more points are worth twice the bound for b
  unit-to-double b*2^n simple points may be traded for b double points
  certified      a cataloged emptiness certificate for a scaled profile
  decompose      split the points across a hyperplane section: premises in
                 dimension n-1 combine to a bound one dimension up

Every returned bound carries a derivation tree; `replay_proof_tree`
re-evaluates a tree from scratch, independently of the search.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Any, Sequence

from .core import binomial
from .facts import Profile, WaldschmidtFact, catalog, fact_from_certificate
from .reduction import Certificate, certificate_to_dict, verify_certificate

RULE_TRIVIAL = "trivial"
RULE_MONOTONE = "monotone"
RULE_ROOT_COUNT = "root-count"
RULE_SMALL_COUNT = "small-count"
RULE_BLOCK_DOUBLING = "block-doubling"
RULE_UNIT_TO_DOUBLE = "unit-to-double"
RULE_CERTIFIED = "certified-system"
RULE_DECOMPOSE = "decompose"

# premises proved for generic points are used for very-general points when
# decomposing across dimensions; the generic constant dominates.
DECOMPOSE_SCOPE = "very-general-from-generic"


@dataclass(frozen=True)
class ProofTree:
    rule: str
    value: Fraction
    params: tuple[tuple[str, Any], ...] = ()
    premises: tuple["ProofTree", ...] = ()
    certificate: Certificate | None = None

    def param(self, key: str) -> Any:
        for k, v in self.params:
            if k == key:
                return v
        raise KeyError(key)


@dataclass(frozen=True)
class BoundFact:
    n: int
    profile: Profile
    bound: Fraction
    derivation: ProofTree


@dataclass(frozen=True)
class ChudnovskyReport:
    n: int
    s: int
    bound: Fraction
    alpha: int
    reg: int
    rhs: Fraction
    verdict: bool
    derivation: ProofTree


@dataclass(frozen=True)
class HHReport:
    n: int
    s: int
    bound: Fraction
    alpha: int
    reg: int
    rhs: Fraction
    verdict: bool
    r_threshold: int | None
    derivation: ProofTree


def alpha_generic(n: int, s: int) -> int:
    """Least degree d with C(d+n,n) > s: the initial degree of s generic points."""
    _validate(n, s)
    d = 0
    while binomial(d + n, n) <= s:
        d += 1
    return d


def regularity_generic(n: int, s: int) -> int:
    """l+1 for the unique l with C(n+l-1,n) < s <= C(n+l,n)."""
    _validate(n, s)
    level = 0
    while binomial(n + level, n) < s:
        level += 1
    return level + 1


def _validate(n: int, s: int) -> None:
    if n < 2:
        raise ValueError(f"ambient dimension must be >= 2, got {n}")
    if s < 1:
        raise ValueError(f"point count must be >= 1, got {s}")


def _floor_nth_root(s: int, n: int) -> int:
    k = max(1, int(round(s ** (1.0 / n))))
    while (k + 1) ** n <= s:
        k += 1
    while k**n > s:
        k -= 1
    return k


def _small_count_value(n: int, case: str) -> Fraction:
    if case == "n+1":
        return Fraction(n + 1, n)
    if case == "n+2":
        return Fraction(n + 2, n)
    if case == "n+3-even":
        return Fraction(n + 2, n)
    if case == "n+3-odd":
        return 1 + Fraction(2, n) + Fraction(2, n**3 + 2 * n**2 - n)
    raise ValueError(f"unknown small-count case {case!r}")


def _certified_tree(fact: WaldschmidtFact) -> ProofTree:
    return ProofTree(
        RULE_CERTIFIED,
        fact.bound,
        params=(
            ("n", fact.n),
            ("profile", fact.profile.runs),
            ("num", fact.bound.numerator),
            ("den", fact.bound.denominator),
        ),
        certificate=fact.certificate,
    )


def _monotone(s: int, s0: int, inner: ProofTree) -> ProofTree:
    if s == s0:
        return inner
    return ProofTree(RULE_MONOTONE, inner.value, params=(("s", s), ("s0", s0)), premises=(inner,))


@lru_cache(maxsize=None)
def waldschmidt_lower_bound(n: int, s: int) -> BoundFact:
    """Best derivable lower bound for s generic simple points in P^n."""
    _validate(n, s)
    candidates: list[ProofTree] = [
        ProofTree(RULE_TRIVIAL, Fraction(1), params=(("n", n), ("s", s)))
    ]

    cases = [("n+1", n + 1), ("n+2", n + 2)]
    cases.append(("n+3-even" if n % 2 == 0 else "n+3-odd", n + 3))
    for case, s0 in cases:
        if s >= s0:
            inner = ProofTree(
                RULE_SMALL_COUNT,
                _small_count_value(n, case),
                params=(("n", n), ("s", s0), ("case", case)),
            )
            candidates.append(_monotone(s, s0, inner))

    k = _floor_nth_root(s, n)
    if k >= 2:
        candidates.append(
            ProofTree(
                RULE_ROOT_COUNT, Fraction(k), params=(("n", n), ("s", s), ("scale", k))
            )
        )

    for fact in catalog(n):
        tree = _certified_tree(fact)
        if fact.profile.is_simple:
            s0 = fact.profile.npoints
            if s >= s0:
                candidates.append(_monotone(s, s0, tree))
        else:
            pair = fact.profile.doubles_and_singles()
            if pair is not None:
                b, c = pair
                s0 = b * 2**n + c
                if s >= s0:
                    lifted = ProofTree(
                        RULE_UNIT_TO_DOUBLE,
                        fact.bound,
                        params=(("n", n), ("s0", s0), ("doubles", b), ("singles", c)),
                        premises=(tree,),
                    )
                    candidates.append(_monotone(s, s0, lifted))

    b = s >> n
    if b >= 1:
        inner = waldschmidt_lower_bound(n, b)
        candidates.append(
            ProofTree(
                RULE_BLOCK_DOUBLING,
                2 * inner.bound,
                params=(("n", n), ("s", s), ("b", b)),
                premises=(inner.derivation,),
            )
        )

    if n >= 3:
        for level in range(2, n - 1):
            r1 = binomial(n - 1 + level, n - 1) + 1
            r2 = binomial(n - 1 + level, n)
            if s < r1 + r2:
                break
            f1 = waldschmidt_lower_bound(n - 1, r1)
            f2 = waldschmidt_lower_bound(n - 1, r2)
            a1 = min(f1.bound, Fraction(2))
            a2 = min(f2.bound, Fraction(2))
            if a1 <= 1:
                continue
            value = (1 - 1 / a1) * a2 + 1
            candidates.append(
                ProofTree(
                    RULE_DECOMPOSE,
                    value,
                    params=(
                        ("n", n),
                        ("s", s),
                        ("k", 1),
                        ("r", (r1, r2)),
                        ("a", ((a1.numerator, a1.denominator), (a2.numerator, a2.denominator))),
                        ("scope", DECOMPOSE_SCOPE),
                    ),
                    premises=(f1.derivation, f2.derivation),
                )
            )

    best = max(candidates, key=lambda t: t.value)
    return BoundFact(n, Profile.simple(s), best.value, best)


def decomposition_bound(
    n: int, facts: Sequence[tuple[int, Fraction]], k: int
) -> Fraction:
    """(1 - sum_{j<=k} 1/a_j) * a_{k+1} + k for point count sum r_j.

    `facts` supplies (r_j, a_j) with a_j a valid lower bound for r_j
    very-general points in P^{n-1}.  Hypotheses are hard constraints:
    k <= a_j <= k+1 for j <= k, a_1 > k, a_{k+1} <= k+1.
    """
    if n < 3:
        raise ValueError("decomposition needs ambient dimension >= 3")
    if k < 1:
        raise ValueError("decomposition needs k >= 1")
    if len(facts) != k + 1:
        raise ValueError(f"decomposition with k={k} needs exactly {k + 1} facts")
    parts = [Fraction(a) for _, a in facts]
    for r, _ in facts:
        if r < 1:
            raise ValueError("point counts must be positive")
    for j, a in enumerate(parts[:k]):
        if not (k <= a <= k + 1):
            raise ValueError(f"hypothesis k <= a_{j + 1} <= k+1 fails: a = {a}")
    if parts[0] <= k:
        raise ValueError(f"hypothesis a_1 > k fails: a_1 = {parts[0]}")
    if parts[k] > k + 1:
        raise ValueError(f"hypothesis a_{k + 1} <= k+1 fails: a = {parts[k]}")
    return (1 - sum(1 / a for a in parts[:k])) * parts[k] + k


# ---------------------------------------------------------------------------
# replay: independent re-evaluation of a derivation tree


def replay_proof_tree(tree: ProofTree) -> Fraction:
    """Recompute a derivation from its leaves; raises ValueError on any
    inconsistency and returns the (re-verified) bound."""
    value = _replay(tree)
    if value != tree.value:
        raise ValueError(f"stored value {tree.value} differs from replayed {value}")
    return value


def _replay(tree: ProofTree) -> Fraction:
    rule = tree.rule
    if rule == RULE_TRIVIAL:
        if tree.param("s") < 1:
            raise ValueError("trivial bound needs at least one point")
        return Fraction(1)
    if rule == RULE_MONOTONE:
        if tree.param("s") < tree.param("s0"):
            raise ValueError("monotonicity applied downward")
        return _replay_one(tree)
    if rule == RULE_ROOT_COUNT:
        k, n, s = tree.param("scale"), tree.param("n"), tree.param("s")
        if k < 2 or k**n > s:
            raise ValueError(f"root-count needs 2 <= k with k^n <= s, got k={k}")
        return Fraction(k)
    if rule == RULE_SMALL_COUNT:
        n, s, case = tree.param("n"), tree.param("s"), tree.param("case")
        need = {"n+1": n + 1, "n+2": n + 2, "n+3-even": n + 3, "n+3-odd": n + 3}[case]
        if s < need:
            raise ValueError(f"small-count case {case} needs s >= {need}")
        if case == "n+3-even" and n % 2:
            raise ValueError("even-parity case used with odd n")
        if case == "n+3-odd" and n % 2 == 0:
            raise ValueError("odd-parity case used with even n")
        return _small_count_value(n, case)
    if rule == RULE_BLOCK_DOUBLING:
        n, s, b = tree.param("n"), tree.param("s"), tree.param("b")
        if b < 1 or b * 2**n > s:
            raise ValueError("block-doubling needs b >= 1 with b*2^n <= s")
        return 2 * _replay_one(tree)
    if rule == RULE_UNIT_TO_DOUBLE:
        n, s0 = tree.param("n"), tree.param("s0")
        b, c = tree.param("doubles"), tree.param("singles")
        inner = tree.premises[0]
        if inner.rule != RULE_CERTIFIED:
            raise ValueError("unit-to-double must rest on a certified profile")
        if inner.param("profile") != ((2, b), (1, c)):
            raise ValueError("certified profile is not (2^b, 1^c)")
        if s0 != b * 2**n + c:
            raise ValueError("unit-to-double point count mismatch")
        return _replay_one(tree)
    if rule == RULE_CERTIFIED:
        if tree.certificate is None:
            raise ValueError("certified rule without a certificate")
        fact = fact_from_certificate(tree.certificate)
        if fact.n != tree.param("n") or fact.profile.runs != tree.param("profile"):
            raise ValueError("certificate does not match the recorded profile")
        if fact.bound != Fraction(tree.param("num"), tree.param("den")):
            raise ValueError("certificate bound differs from the recorded value")
        return fact.bound
    if rule == RULE_DECOMPOSE:
        n, s, k = tree.param("n"), tree.param("s"), tree.param("k")
        rs = tree.param("r")
        parts = [Fraction(num, den) for num, den in tree.param("a")]
        if len(tree.premises) != k + 1 or len(rs) != k + 1:
            raise ValueError("decomposition arity mismatch")
        if s < sum(rs):
            raise ValueError("decomposition needs s >= sum of the parts")
        for a, premise in zip(parts, tree.premises):
            if a > _replay(premise):
                raise ValueError("decomposition premise weaker than its use")
        return decomposition_bound(n, list(zip(rs, parts)), k)
    raise ValueError(f"unknown rule {rule!r}")


def _replay_one(tree: ProofTree) -> Fraction:
    if len(tree.premises) != 1:
        raise ValueError(f"rule {tree.rule} needs exactly one premise")
    return _replay(tree.premises[0])


# ---------------------------------------------------------------------------
# the numeric criteria


_NOTES = {
    "containment_exponent": "(n-1)r",
    "chudnovsky_form": "initial-degree inequality",
}


def hh_check(n: int, s: int) -> HHReport:
    """Strict test bound > (reg + n - 1)/n, exact rational arithmetic."""
    fact = waldschmidt_lower_bound(n, s)
    reg = regularity_generic(n, s)
    alpha = alpha_generic(n, s)
    rhs = Fraction(reg + n - 1, n)
    verdict = fact.bound > rhs
    r_threshold = containment_threshold(n, s) if verdict else None
    return HHReport(n, s, fact.bound, alpha, reg, rhs, verdict, r_threshold, fact.derivation)


def chudnovsky_check(n: int, s: int) -> ChudnovskyReport:
    """Test bound >= (alpha + n - 1)/n, exact rational arithmetic."""
    fact = waldschmidt_lower_bound(n, s)
    reg = regularity_generic(n, s)
    alpha = alpha_generic(n, s)
    rhs = Fraction(alpha + n - 1, n)
    return ChudnovskyReport(n, s, fact.bound, alpha, reg, rhs, fact.bound >= rhs, fact.derivation)


def containment_threshold(n: int, s: int) -> int:
    """Least r >= 2 with (n*r - n)*bound >= r*(reg + n - 1); monotone in r.

    Defined only when the strict inequality bound > (reg + n - 1)/n holds.
    """
    fact = waldschmidt_lower_bound(n, s)
    reg = regularity_generic(n, s)
    margin = n * fact.bound - (reg + n - 1)
    if margin <= 0:
        raise ValueError(
            f"threshold undefined: bound {fact.bound} does not strictly exceed "
            f"{Fraction(reg + n - 1, n)}"
        )
    need = n * fact.bound / margin
    return max(2, -(-need.numerator // need.denominator))


# ---------------------------------------------------------------------------
# JSON encodings


def _fraction_to_dict(x: Fraction) -> dict:
    return {"num": x.numerator, "den": x.denominator}


def _params_to_dict(params: tuple[tuple[str, Any], ...]) -> dict:
    out: dict[str, Any] = {}
    for key, value in params:
        out[key] = list(value) if isinstance(value, tuple) else value
    return out


def proof_tree_to_dict(tree: ProofTree) -> dict:
    return {
        "rule": tree.rule,
        "value": _fraction_to_dict(tree.value),
        "params": _params_to_dict(tree.params),
        "premises": [proof_tree_to_dict(p) for p in tree.premises],
        "certificate": None
        if tree.certificate is None
        else certificate_to_dict(tree.certificate),
    }


def bound_fact_to_dict(fact: BoundFact) -> dict:
    return {
        "N": fact.n,
        "s": fact.profile.npoints,
        "bound": _fraction_to_dict(fact.bound),
        "proof_tree": proof_tree_to_dict(fact.derivation),
    }


def report_to_dict(report: ChudnovskyReport | HHReport) -> dict:
    out = {
        "N": report.n,
        "s": report.s,
        "bound": _fraction_to_dict(report.bound),
        "alpha": report.alpha,
        "reg": report.reg,
        "rhs": _fraction_to_dict(report.rhs),
        "verdict": report.verdict,
        "proof_tree": proof_tree_to_dict(report.derivation),
        "notes": dict(_NOTES),
    }
    if isinstance(report, HHReport):
        out["r_threshold"] = report.r_threshold
    return out
