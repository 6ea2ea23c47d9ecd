"""Reduction calculus on fat-point systems and replayable emptiness certificates.

Three dimension-preserving / one-directional moves drive everything:

* the standard birational involution shifts an n+1 point pivot and the degree
  by k = (n-1)d - sum(pivot), a linear isomorphism when every shifted
  multiplicity stays >= 0;
* when (n-1)d - sum of n positive multiplicities is negative, those n
  multiplicities and the degree drop by one without changing the dimension;
* the combined one-directional move ("reduce_full") applies the shift with
  eventually-negative results clamped to 0: nonzero input implies nonzero
  output, so an empty output certifies an empty input.

A certificate is a chain of such steps ending in a contradiction (some
multiplicity eventually exceeds the degree), an axiom instance, or a merge of
two previously certified claims.  Certificates serialize to canonical JSON and
replay exactly.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Any, Mapping, Sequence

from .core import (
    ONE,
    ZERO,
    AffineValue,
    FatPointSystem,
    Run,
    Sign,
    cremona_k,
    eventual_sign,
    nonneg_threshold,
    nonpositive_threshold,
    pivot_counts,
    pivot_of_largest,
    positive_threshold,
)

FORMAT_VERSION = 1

RULE_CREMONA = "cremona_iso"
RULE_DEGREE_DROP = "degree_drop"
RULE_MERGE = "merge_empty"
RULE_REDUCE = "reduce_full"
RULE_CLAMP = "clamp_nonpositive"
RULE_CONTRADICTION = "contradiction"
RULE_EVAIN = "evain_axiom"

_RULES = {
    RULE_CREMONA,
    RULE_DEGREE_DROP,
    RULE_MERGE,
    RULE_REDUCE,
    RULE_CLAMP,
    RULE_CONTRADICTION,
    RULE_EVAIN,
}


class ReductionError(Exception):
    pass


class PreconditionError(ReductionError):
    pass


class MergeError(ReductionError):
    pass


@dataclass(frozen=True)
class ClampRecord:
    """One multiplicity stored as 0 because its shifted value is eventually <= 0.

    `index` points into the raw (pre-canonicalization) expanded run list of the
    producing step; `value` is the shifted value before clamping.
    """

    index: int
    value: AffineValue
    threshold: int


@dataclass(frozen=True)
class ReductionStep:
    rule: str
    input: FatPointSystem
    output: FatPointSystem | None
    pivot: tuple[int, ...] | None = None
    k: AffineValue | None = None
    clamps: tuple[ClampRecord, ...] = ()
    witness: int | None = None
    removed: int | None = None
    scale: int | None = None
    refs: tuple["Certificate", ...] = ()
    threshold: int = 1


@dataclass(frozen=True)
class Certificate:
    """Claim that a parametric system is empty for every m >= m0, with the
    replayable step chain establishing it."""

    claim: FatPointSystem
    steps: tuple[ReductionStep, ...]
    m0: int


@dataclass(frozen=True)
class VerificationResult:
    ok: bool
    failed_step: int | None = None
    reason: str | None = None

    def __bool__(self) -> bool:
        return self.ok


# ---------------------------------------------------------------------------
# dimension-preserving moves


def cremona_step(sys: FatPointSystem, pivot: Sequence[int]) -> FatPointSystem:
    """Apply the degree/multiplicity shift by k to an n+1 point pivot.

    Dimension-preserving; requires every pivoted multiplicity plus k to be
    eventually >= 0, otherwise raises PreconditionError (the caller should use
    reduce_full, which clamps).
    """
    k = cremona_k(sys, pivot)
    counts = pivot_counts(sys, pivot)
    for idx, taken in enumerate(counts):
        if taken and nonneg_threshold(sys.mults[idx].value + k) is None:
            raise PreconditionError(
                f"pivot multiplicity {sys.mults[idx].value} + k={k} is eventually negative"
            )
    runs = _shift_pivot(sys, counts, k)
    return FatPointSystem(sys.n, sys.degree + k, tuple(runs))


def degree_drop_step(sys: FatPointSystem) -> FatPointSystem:
    """Decrement the n eventually-largest multiplicities and the degree.

    Requires (n-1)d - sum(pivot) eventually negative and every pivot
    multiplicity eventually positive; dimension-preserving.
    """
    pivot = pivot_of_largest(sys, sys.n)
    counts = pivot_counts(sys, pivot)
    total = ZERO
    for idx, taken in enumerate(counts):
        if taken:
            total = total + sys.mults[idx].value.scaled(taken)
            if positive_threshold(sys.mults[idx].value) is None:
                raise PreconditionError(
                    f"pivot multiplicity {sys.mults[idx].value} is not eventually positive"
                )
    gap = sys.degree.scaled(sys.n - 1) - total
    if eventual_sign(gap).sign is not Sign.NEGATIVE:
        raise PreconditionError(f"(n-1)d - sum(pivot) = {gap} is not eventually negative")
    runs = _shift_pivot(sys, counts, -ONE)
    return FatPointSystem(sys.n, sys.degree - ONE, tuple(runs))


def _shift_pivot(sys: FatPointSystem, counts: Sequence[int], k: AffineValue) -> list[Run]:
    runs: list[Run] = []
    for idx, run in enumerate(sys.mults):
        taken = counts[idx]
        if taken:
            runs.append(Run(run.value + k, taken))
        if run.count - taken:
            runs.append(Run(run.value, run.count - taken))
    return runs


# ---------------------------------------------------------------------------
# the one-directional engine move


def reduce_full(sys: FatPointSystem, pivot: Sequence[int] | None = None) -> ReductionStep:
    """Shift a pivot of n+1 points by k, clamping eventually-negative results.

    Sound for any pivot: nonzero input forces nonzero output, so an empty
    output certifies the input empty.  The default pivot takes the n+1
    eventually-largest multiplicities.  A step whose k is eventually >= 0
    grows the system; callers detect that with `step_is_reducing`.
    """
    if pivot is None:
        pivot = pivot_of_largest(sys, sys.n + 1)
    else:
        pivot = tuple(pivot)
    k = cremona_k(sys, pivot)
    counts = pivot_counts(sys, pivot)
    raw = _shift_pivot(sys, counts, k)
    clamped: list[Run] = []
    clamps: list[ClampRecord] = []
    for idx, run in enumerate(raw):
        if eventual_sign(run.value).sign is Sign.NEGATIVE:
            t = nonpositive_threshold(run.value)
            clamps.append(ClampRecord(idx, run.value, t))
            clamped.append(Run(ZERO, run.count))
        else:
            clamped.append(run)
    output = FatPointSystem(sys.n, sys.degree + k, tuple(clamped))
    threshold = max([1] + [c.threshold for c in clamps])
    return ReductionStep(
        rule=RULE_REDUCE,
        input=sys,
        output=output,
        pivot=pivot,
        k=k,
        clamps=tuple(clamps),
        threshold=threshold,
    )


def step_is_reducing(step: ReductionStep) -> bool:
    """True when the step's k is eventually negative (the step shrinks)."""
    return step.k is not None and eventual_sign(step.k).sign is Sign.NEGATIVE


def contradiction_step(sys: FatPointSystem) -> ReductionStep | None:
    """Step declaring the system empty: some multiplicity eventually exceeds
    the degree.  Among qualifying runs the one with the least threshold wins."""
    best: tuple[int, int] | None = None
    for idx, run in enumerate(sys.mults):
        t = positive_threshold(run.value - sys.degree)
        if t is not None and (best is None or t < best[1]):
            best = (idx, t)
    if best is None:
        return None
    return ReductionStep(
        rule=RULE_CONTRADICTION,
        input=sys,
        output=None,
        witness=best[0],
        threshold=best[1],
    )


# ---------------------------------------------------------------------------
# proof search


def prove_empty(
    sys: FatPointSystem,
    strategy: str | Sequence[Sequence[int]] = "greedy",
    budget: int = 64,
) -> Certificate | None:
    """Search for an emptiness certificate.

    "greedy" repeatedly reduces on the n+1 eventually-largest multiplicities
    while k stays eventually negative, stopping at the first contradiction.  A
    pivot list replays that explicit sequence instead.  Returns None on
    failure (budget exhausted or no reducing move) -- not a disproof.
    """
    steps: list[ReductionStep] = []
    current = sys

    def finish(contra: ReductionStep) -> Certificate:
        steps.append(contra)
        m0 = max(s.threshold for s in steps)
        return Certificate(sys, tuple(steps), m0)

    if strategy == "greedy":
        for _ in range(budget):
            contra = contradiction_step(current)
            if contra is not None:
                return finish(contra)
            if current.point_count < current.n + 1:
                return None
            step = reduce_full(current)
            if not step_is_reducing(step):
                return None
            steps.append(step)
            current = step.output
        return None

    for piv in strategy:
        step = reduce_full(current, pivot=tuple(piv))
        steps.append(step)
        current = step.output
    contra = contradiction_step(current)
    if contra is None:
        return None
    return finish(contra)


def evain_certificate(n: int, scale: int, value) -> Certificate:
    """Axiom certificate: scale^n points of multiplicity v have no form of
    degree scale*v - 1, for any integer scale >= 2 and v eventually >= 1."""
    if scale < 2:
        raise ValueError("axiom requires scale >= 2")
    v = AffineValue.of(value)
    t = nonneg_threshold(v - ONE)
    if t is None:
        raise ValueError(f"multiplicity {v} is not eventually >= 1")
    claim = FatPointSystem.build(n, v.scaled(scale) - ONE, [(v, scale**n)])
    step = ReductionStep(
        rule=RULE_EVAIN, input=claim, output=None, scale=scale, threshold=t
    )
    return Certificate(claim, (step,), t)


def merge_empty(cert_a: Certificate, cert_b: Certificate) -> Certificate:
    """Combine: if I(A)_K = 0 and I(B', K+1)_t = 0 then I(A, B')_t = 0.

    cert_b's claim must contain a multiplicity equal to cert_a's claimed
    degree plus one; that point is replaced by all of cert_a's points.
    """
    for name, cert in (("first", cert_a), ("second", cert_b)):
        res = verify_certificate(cert)
        if not res:
            raise MergeError(f"{name} certificate fails verification: {res.reason}")
    if cert_a.claim.n != cert_b.claim.n:
        raise MergeError("certificates live in different ambient dimensions")
    key = cert_a.claim.degree + ONE
    removed = None
    for idx, run in enumerate(cert_b.claim.mults):
        if run.value == key:
            removed = idx
            break
    if removed is None:
        raise MergeError(
            f"no multiplicity {key} (= first claim's degree + 1) in second claim"
        )
    runs = list(cert_a.claim.mults)
    for idx, run in enumerate(cert_b.claim.mults):
        if idx == removed:
            if run.count > 1:
                runs.append(Run(run.value, run.count - 1))
        else:
            runs.append(run)
    claim = FatPointSystem(cert_b.claim.n, cert_b.claim.degree, tuple(runs))
    m0 = max(cert_a.m0, cert_b.m0)
    step = ReductionStep(
        rule=RULE_MERGE,
        input=claim,
        output=None,
        removed=removed,
        refs=(cert_a, cert_b),
        threshold=m0,
    )
    return Certificate(claim, (step,), m0)


def prove_with_script(sys: FatPointSystem, script: Mapping[str, Any]) -> Certificate | None:
    """Drive the engine from a declarative proof script.

    Script forms:
      {"how": "greedy"}
      {"how": "pivots", "pivots": [[...], ...]}
      {"how": "evain", "scale": k}
      {"how": "merge", "part": {"system": ..., "prove": ...},
                       "rest": {"system": ..., "prove": ...}}

    "merge" proves the two sub-claims and combines them; the assembled claim
    must equal `sys`.
    """
    how = script.get("how")
    if how == "greedy":
        return prove_empty(sys, "greedy")
    if how == "pivots":
        return prove_empty(sys, [tuple(p) for p in script["pivots"]])
    if how == "evain":
        cert = evain_certificate(sys.n, int(script["scale"]), sys.mults[0].value)
        if cert.claim != sys:
            raise ReductionError("system does not match the axiom pattern")
        return cert
    if how == "merge":
        part = _scripted_branch(script["part"])
        rest = _scripted_branch(script["rest"])
        if part is None or rest is None:
            return None
        cert = merge_empty(part, rest)
        if cert.claim != sys:
            raise ReductionError(
                f"merge assembles {cert.claim}, not the requested {sys}"
            )
        return cert
    raise ReductionError(f"unknown script form {how!r}")


def _scripted_branch(spec: Mapping[str, Any]) -> Certificate | None:
    return prove_with_script(system_from_dict(spec["system"]), spec["prove"])


# ---------------------------------------------------------------------------
# verification


def verify_certificate(cert: Certificate) -> VerificationResult:
    """Replay every step: side data must reproduce outputs exactly, every
    eventual-sign precondition must hold with the stored threshold, and the
    chain must end in an empty verdict covered by the certificate's m0."""

    def fail(i: int, reason: str) -> VerificationResult:
        return VerificationResult(False, i, reason)

    if not cert.steps:
        return fail(0, "certificate has no steps")
    if cert.m0 < 1:
        return fail(0, "m0 must be >= 1")
    current = cert.claim
    last = len(cert.steps) - 1
    for i, step in enumerate(cert.steps):
        if step.rule not in _RULES:
            return fail(i, f"unknown rule {step.rule!r}")
        if step.input != current:
            return fail(i, "step input does not chain from the previous system")
        if step.threshold > cert.m0:
            return fail(i, f"step threshold {step.threshold} exceeds certificate m0 {cert.m0}")
        if (step.output is None) != (i == last):
            return fail(i, "empty verdict must appear exactly at the final step")
        try:
            expected = _replay_step(step)
        except (ReductionError, ValueError) as exc:
            return fail(i, str(exc))
        if isinstance(expected, VerificationResult):
            return fail(i, expected.reason or "sub-certificate failure")
        replayed, threshold = expected
        if step.threshold != threshold:
            return fail(i, f"stored threshold {step.threshold}, replay needs {threshold}")
        if replayed is None:
            if step.output is not None:
                return fail(i, "rule yields an empty verdict but the step stores a system")
            current = None
        else:
            if step.output != replayed:
                return fail(i, "stored output does not match replay")
            current = replayed
    if current is not None:
        return fail(last, "chain does not reach an empty verdict")
    return VerificationResult(True)


def _replay_step(step: ReductionStep):
    """Recompute a step from its input and side data.

    Returns (output_or_None, required_threshold), or a VerificationResult for
    rules that carry their own sub-verification (merge refs).
    """
    sys = step.input
    if step.rule == RULE_REDUCE:
        if step.pivot is None:
            raise ReductionError("reduce step is missing its pivot")
        replay = reduce_full(sys, step.pivot)
        if step.k != replay.k:
            raise ReductionError(f"stored k {step.k} differs from replayed {replay.k}")
        if step.clamps != replay.clamps:
            raise ReductionError("stored clamp records differ from replay")
        return replay.output, replay.threshold

    if step.rule == RULE_CREMONA:
        if step.pivot is None:
            raise ReductionError("isomorphism step is missing its pivot")
        k = cremona_k(sys, step.pivot)
        if step.k != k:
            raise ReductionError(f"stored k {step.k} differs from replayed {k}")
        counts = pivot_counts(sys, step.pivot)
        threshold = 1
        for idx, taken in enumerate(counts):
            if taken:
                t = nonneg_threshold(sys.mults[idx].value + k)
                if t is None:
                    raise ReductionError("a pivot multiplicity plus k is eventually negative")
                threshold = max(threshold, t)
        runs = _shift_pivot(sys, counts, k)
        return FatPointSystem(sys.n, sys.degree + k, tuple(runs)), threshold

    if step.rule == RULE_DEGREE_DROP:
        if step.pivot is None or len(step.pivot) != sys.n:
            raise ReductionError("degree-drop pivot must select exactly n points")
        counts = pivot_counts(sys, step.pivot)
        total = ZERO
        threshold = 1
        for idx, taken in enumerate(counts):
            if taken:
                total = total + sys.mults[idx].value.scaled(taken)
                t = positive_threshold(sys.mults[idx].value)
                if t is None:
                    raise ReductionError("a decremented multiplicity is not eventually positive")
                threshold = max(threshold, t)
        gap = sys.degree.scaled(sys.n - 1) - total
        es = eventual_sign(gap)
        if es.sign is not Sign.NEGATIVE:
            raise ReductionError("(n-1)d - sum(pivot) is not eventually negative")
        threshold = max(threshold, es.threshold)
        runs = _shift_pivot(sys, counts, -ONE)
        return FatPointSystem(sys.n, sys.degree - ONE, tuple(runs)), threshold

    if step.rule == RULE_CLAMP:
        runs = list(sys.mults)
        threshold = 1
        for rec in step.clamps:
            if not 0 <= rec.index < len(runs):
                raise ReductionError("clamp index out of range")
            if runs[rec.index].value != rec.value:
                raise ReductionError("clamp record value differs from the input run")
            t = nonpositive_threshold(rec.value)
            if t is None or t != rec.threshold:
                raise ReductionError("clamped value is not eventually <= 0 at its threshold")
            threshold = max(threshold, t)
            runs[rec.index] = Run(ZERO, runs[rec.index].count)
        return FatPointSystem(sys.n, sys.degree, tuple(runs)), threshold

    if step.rule == RULE_CONTRADICTION:
        if step.witness is None or not 0 <= step.witness < len(sys.mults):
            raise ReductionError("contradiction witness index out of range")
        t = positive_threshold(sys.mults[step.witness].value - sys.degree)
        if t is None:
            raise ReductionError("witness multiplicity does not eventually exceed the degree")
        return None, t

    if step.rule == RULE_EVAIN:
        if step.scale is None or step.scale < 2:
            raise ReductionError("axiom scale must be >= 2")
        if len(sys.mults) != 1:
            raise ReductionError("axiom claim must have a single multiplicity value")
        run = sys.mults[0]
        if run.count != step.scale**sys.n:
            raise ReductionError(f"axiom claim needs {step.scale}^{sys.n} points, has {run.count}")
        if sys.degree != run.value.scaled(step.scale) - ONE:
            raise ReductionError("axiom degree must be scale*multiplicity - 1")
        t = nonneg_threshold(run.value - ONE)
        if t is None:
            raise ReductionError("axiom multiplicity is not eventually >= 1")
        return None, t

    if step.rule == RULE_MERGE:
        if len(step.refs) != 2:
            raise ReductionError("merge step needs exactly two sub-certificates")
        cert_a, cert_b = step.refs
        for name, ref in (("first", cert_a), ("second", cert_b)):
            res = verify_certificate(ref)
            if not res:
                return VerificationResult(
                    False, None, f"{name} sub-certificate fails at step {res.failed_step}: {res.reason}"
                )
        if cert_a.claim.n != cert_b.claim.n or cert_a.claim.n != sys.n:
            raise ReductionError("merge dimensions do not agree")
        if step.removed is None or not 0 <= step.removed < len(cert_b.claim.mults):
            raise ReductionError("merge removal index out of range")
        run = cert_b.claim.mults[step.removed]
        if run.value != cert_a.claim.degree + ONE:
            raise ReductionError("removed multiplicity must equal first claim's degree + 1")
        runs = list(cert_a.claim.mults)
        for idx, other in enumerate(cert_b.claim.mults):
            if idx == step.removed:
                if other.count > 1:
                    runs.append(Run(other.value, other.count - 1))
            else:
                runs.append(other)
        merged = FatPointSystem(sys.n, cert_b.claim.degree, tuple(runs))
        if merged != sys:
            raise ReductionError("merged claim does not match the step input")
        threshold = max(cert_a.m0, cert_b.m0)
        return None, threshold

    raise ReductionError(f"unknown rule {step.rule!r}")


# ---------------------------------------------------------------------------
# serialization (canonical JSON; serialize . parse == identity)


def _affine_to_list(v: AffineValue | None):
    return None if v is None else [v.slope, v.intercept]


def _affine_from_list(data) -> AffineValue:
    return AffineValue(int(data[0]), int(data[1]))


def system_to_dict(sys: FatPointSystem) -> dict:
    return {
        "N": sys.n,
        "degree": _affine_to_list(sys.degree),
        "mults": [[r.value.slope, r.value.intercept, r.count] for r in sys.mults],
    }


def system_from_dict(data: Mapping[str, Any]) -> FatPointSystem:
    runs = tuple(Run(AffineValue(int(s), int(i)), int(c)) for s, i, c in data["mults"])
    return FatPointSystem(int(data["N"]), _affine_from_list(data["degree"]), runs)


def _step_to_dict(step: ReductionStep) -> dict:
    return {
        "rule": step.rule,
        "pivot": list(step.pivot) if step.pivot is not None else None,
        "k": _affine_to_list(step.k),
        "output": "empty" if step.output is None else system_to_dict(step.output),
        "refs": [certificate_to_dict(ref) for ref in step.refs],
        "clamps": [
            {"index": c.index, "value": _affine_to_list(c.value), "threshold": c.threshold}
            for c in step.clamps
        ],
        "witness": step.witness,
        "removed": step.removed,
        "scale": step.scale,
        "threshold": step.threshold,
    }


def _step_from_dict(data: Mapping[str, Any], input_sys: FatPointSystem) -> ReductionStep:
    output = None if data["output"] == "empty" else system_from_dict(data["output"])
    return ReductionStep(
        rule=data["rule"],
        input=input_sys,
        output=output,
        pivot=tuple(data["pivot"]) if data["pivot"] is not None else None,
        k=None if data["k"] is None else _affine_from_list(data["k"]),
        clamps=tuple(
            ClampRecord(int(c["index"]), _affine_from_list(c["value"]), int(c["threshold"]))
            for c in data["clamps"]
        ),
        witness=data["witness"],
        removed=data["removed"],
        scale=data["scale"],
        refs=tuple(certificate_from_dict(ref) for ref in data["refs"]),
        threshold=int(data["threshold"]),
    )


def certificate_to_dict(cert: Certificate) -> dict:
    return {
        "version": FORMAT_VERSION,
        "claim": system_to_dict(cert.claim),
        "m0": cert.m0,
        "steps": [_step_to_dict(s) for s in cert.steps],
    }


def certificate_from_dict(data: Mapping[str, Any]) -> Certificate:
    if data.get("version") != FORMAT_VERSION:
        raise ReductionError(f"unsupported certificate version {data.get('version')!r}")
    claim = system_from_dict(data["claim"])
    steps: list[ReductionStep] = []
    current = claim
    for raw in data["steps"]:
        step = _step_from_dict(raw, current)
        steps.append(step)
        current = step.output
    return Certificate(claim, tuple(steps), int(data["m0"]))


def to_canonical_json(data: Mapping[str, Any]) -> str:
    return json.dumps(data, sort_keys=True, separators=(",", ":"))


def certificate_to_json(cert: Certificate) -> str:
    return to_canonical_json(certificate_to_dict(cert))


def certificate_from_json(text: str) -> Certificate:
    return certificate_from_dict(json.loads(text))
