"""Named invariant suites over one cutoff semigroup.

Each suite re-checks a structural law of the cutoff semigroups on a finite
ball — exhaustively where feasible, by seeded sampling otherwise — and
returns a :class:`SuiteResult` instead of raising, so a runner can report
every failure.  The CLI ``verify`` verb and the acceptance tests both drive
these; keeping them in the library makes the checks reusable at any bounds.

All suites take a canonical family plus ball bounds ``(N, A)`` and never
mutate anything.  ``run_all`` executes the registry in declaration order.
"""

from __future__ import annotations

import random
import time
from dataclasses import dataclass
from typing import Callable, Dict, List, Optional

from . import kernels
from .core import (
    Element,
    NormalizedFamily,
    family_canonicalize,
    idempotent_leq,
    inverse,
    is_idempotent,
    multiply,
    natural_leq,
    sigma_class,
    sigma_equivalent,
)
from .balls import BallUniverse, make_ball
from . import oracles
from .congruence import (
    CongruencePartition,
    classify,
    congruence_closure,
    is_translation_closed,
    projection_kernel,
    refines,
    sigma_partition,
)
from .morphisms import (
    LowerCollapseCandidate,
    Projection,
    Retraction,
    enumerate_retracts,
    fixed_points,
    refute_lower_retraction,
    search_generator_consistent_maps,
    shift_isomorphism,
    verify_homomorphism,
    verify_retraction,
)

__all__ = [
    "SuiteResult",
    "SUITE_NAMES",
    "run_suite",
    "run_all",
]


@dataclass(frozen=True)
class SuiteResult:
    """Outcome of one named suite: pass/fail, a short detail line, and the
    number of individual checks performed."""

    name: str
    passed: bool
    detail: str
    checks: int
    elapsed: float

    def line(self) -> str:
        status = "ok" if self.passed else "FAIL"
        return (f"{status} {self.name}: {self.detail} "
                f"[{self.checks} checks, {self.elapsed:.2f}s]")


class _Failure(Exception):
    """Internal: aborts a suite with a failure detail."""


def _ball(fam: NormalizedFamily, N: int, A: int,
          inner: Optional[int] = None) -> BallUniverse:
    return make_ball(fam, N, A, inner_radius=inner)


# ---------------------------------------------------------------------------
# Suite bodies.  Each returns (detail, checks) or raises _Failure.
# ---------------------------------------------------------------------------

def _suite_assoc_inverse(fam: NormalizedFamily, N: int, A: int):
    ball = _ball(fam, N, A)
    coords = ball.coords
    bad = kernels.assoc_violation(*coords)
    if bad is not None:
        x, y, z = (ball.elements[i] for i in bad)
        raise _Failure(
            f"associativity fails on {x.text()}, {y.text()}, {z.text()}")
    n = len(ball)
    checks = n ** 3
    for x in ball.elements:
        xi = inverse(x)
        if multiply(multiply(x, xi, fam), x, fam) != x:
            raise _Failure(f"x * x' * x != x at {x.text()}")
        if multiply(multiply(xi, x, fam), xi, fam) != xi:
            raise _Failure(f"x' * x * x' != x' at {x.text()}")
        if inverse(xi) != x:
            raise _Failure(f"inverse not involutive at {x.text()}")
        if not is_idempotent(multiply(x, xi, fam)):
            raise _Failure(f"x * x' not idempotent at {x.text()}")
        checks += 4
    if not oracles.inverse_unique_on_ball(ball):
        raise _Failure("an element has more than one generalized inverse")
    checks += n
    return f"all laws hold on the {n}-element ball", checks


def _suite_order_agreement(fam: NormalizedFamily, N: int, A: int):
    ball = _ball(fam, N, A)
    matrix = oracles.leq_matrix(ball)
    checks = 0
    for s in ball.elements:
        for t in ball.elements:
            fast = natural_leq(s, t, fam)
            witness = matrix.get((s, t))
            if fast != (witness is not None):
                raise _Failure(
                    f"order predicate disagrees with witness search on "
                    f"{s.text()} vs {t.text()}")
            if witness is not None:
                if not is_idempotent(witness):
                    raise _Failure("order witness is not idempotent")
                if multiply(t, witness, fam) != s:
                    raise _Failure("order witness does not reproduce s")
            checks += 1
            if s.is_idempotent and t.is_idempotent:
                if fast != idempotent_leq(s, t, fam):
                    raise _Failure(
                        f"idempotent order formula disagrees on "
                        f"{s.text()} vs {t.text()}")
                checks += 1
    return "three order characterizations agree on all pairs", checks


def _suite_retraction_hom(fam: NormalizedFamily, N: int, A: int):
    ball = _ball(fam, N, A)
    ks = list(ball.cutoffs)
    checks = 0
    for k in ks:
        m = Retraction(fam, k)
        violation = verify_homomorphism(m, ball)
        if violation is not None:
            x, y = violation
            raise _Failure(
                f"cutoff-raising map at {k} is not multiplicative on "
                f"{x.text()}, {y.text()}")
        checks += len(ball) ** 2
        for e in ball.elements:
            img = m.apply(e)
            if not natural_leq(img, e, fam):
                raise _Failure(
                    f"raising cutoff {k} does not move {e.text()} down "
                    f"the natural order")
            if m.apply(img) != img:
                raise _Failure(f"cutoff-raising map at {k} not idempotent")
            checks += 2
    return f"cutoff-raising maps at {len(ks)} cutoffs verified", checks


def _collapse_dichotomy(part: CongruencePartition) -> Optional[str]:
    """The group-congruence criterion on one partition; None if it holds."""
    verdict = classify(part)
    some = any(verdict.bicyclic_restrictions.values())
    every = all(verdict.bicyclic_restrictions.values())
    if verdict.idempotents_collapsed != some:
        return ("idempotent collapse without a merged layer"
                if verdict.idempotents_collapsed else
                "a merged layer without idempotent collapse")
    if some != every:
        return "layers merge in one cutoff but not another"
    if not verdict.consistent:
        return "verdict marked inconsistent"
    return None


def _suite_group_congruence_criterion(fam: NormalizedFamily, N: int, A: int):
    ball = _ball(fam, N, A)
    idems = ball.inner_idempotents()
    checks = 0
    for i, e in enumerate(idems):
        for f in idems[i + 1:]:
            part = congruence_closure([(e, f)], ball)
            why = _collapse_dichotomy(part)
            if why is not None:
                raise _Failure(
                    f"closure of {e.text()} ~ {f.text()}: {why}")
            # a same-layer pair at distinct positions seeds a non-identity
            # layer restriction, so the dichotomy forces a full collapse;
            # cross-layer pairs may merely chain layers together
            if (e.a == f.a and e.i != f.i
                    and not classify(part).idempotents_collapsed):
                raise _Failure(
                    f"closure of same-layer idempotents {e.text()} ~ "
                    f"{f.text()} did not collapse the inner idempotents")
            checks += 1
    rng = random.Random(0x5EED)
    inner = ball.inner_elements()
    for _ in range(40):
        x = rng.choice(inner)
        y = rng.choice(inner)
        part = congruence_closure([(x, y)], ball)
        why = _collapse_dichotomy(part)
        if why is not None:
            raise _Failure(f"closure of {x.text()} ~ {y.text()}: {why}")
        checks += 1
    return (f"collapse dichotomy holds for {checks} single-pair closures",
            checks)


def _suite_projection_congruence(fam: NormalizedFamily, N: int, A: int):
    ball = _ball(fam, N, A)
    part = projection_kernel(ball)
    if not is_translation_closed(part):
        raise _Failure("position-kernel partition is not a congruence")
    proj = Projection(fam)
    violation = verify_homomorphism(proj, ball)
    if violation is not None:
        x, y = violation
        raise _Failure(
            f"cutoff-forgetting map not multiplicative on "
            f"{x.text()}, {y.text()}")
    checks = len(ball) ** 2
    for s in ball.elements:
        for t in ball.elements:
            if part.related(s, t) != (proj.apply(s) == proj.apply(t)):
                raise _Failure(
                    "position kernel disagrees with the map's fibres")
            checks += 1
    verdict = classify(part)
    if len(ball.cutoffs) >= 2:
        if verdict.group_congruence_on_ball:
            raise _Failure(
                "multi-cutoff position kernel classified as group-like")
        if any(verdict.bicyclic_restrictions.values()):
            raise _Failure("position kernel merged a cutoff layer")
    if not verdict.consistent:
        raise _Failure("position-kernel verdict inconsistent")
    return "position kernel is a non-collapsing congruence", checks


def _suite_min_group_congruence(fam: NormalizedFamily, N: int, A: int):
    ball = _ball(fam, N, A)
    matrix = oracles.sigma_matrix(ball)
    checks = 0
    for s in ball.elements:
        for t in ball.elements:
            fast = sigma_equivalent(s, t)
            wit = matrix.get((s, t))
            if fast != (wit is not None):
                raise _Failure(
                    f"difference-class test disagrees with equalizer "
                    f"search on {s.text()} vs {t.text()}")
            if fast != (sigma_class(s) == sigma_class(t)):
                raise _Failure("difference-class labels inconsistent")
            checks += 1
    part = sigma_partition(ball)
    if not is_translation_closed(part):
        raise _Failure("difference-class partition is not a congruence")
    verdict = classify(part)
    if not (verdict.idempotents_collapsed and verdict.consistent
            and verdict.group_congruence_on_ball):
        raise _Failure("difference-class partition not group-like on ball")
    checks += 2
    # minimality spot-check: the closure of one idempotent pair already
    # reaches the difference-class partition on the inner ball
    e, f = Element(0, 0, 0), Element(1, 1, 0)
    cl = congruence_closure([(e, f)], ball)
    if not refines(cl, part):
        raise _Failure("idempotent-pair closure exceeds difference classes")
    if not refines(part, cl, inner_only=True):
        raise _Failure(
            "difference classes not reached by idempotent-pair closure "
            "on the inner ball")
    checks += 2
    return "least group-like congruence checks pass", checks


def _suite_lower_collapse_refutation(fam: NormalizedFamily, N: int, A: int):
    top = fam.hi if fam.hi is not None else min(A, 6)
    ks = [k for k in range(1, top) if (k + 1) in fam]
    if not ks:
        return "no cutoff admits a lower-collapse candidate", 0
    checks = 0
    for k in ks:
        witnesses = refute_lower_retraction(k, fam)
        if len(witnesses) != 3:
            raise _Failure(f"expected three refutations at k={k}")
        for w in witnesses:
            m = LowerCollapseCandidate(fam, k, w.case_id)
            lhs = m.apply(multiply(w.x, w.y, fam))
            rhs = multiply(m.apply(w.x), m.apply(w.y), fam)
            if lhs != w.lhs or rhs != w.rhs or lhs == rhs:
                raise _Failure(
                    f"refutation witness at k={k} case {w.case_id} does "
                    f"not re-verify")
            if lhs.a > k or rhs.a > k:
                raise _Failure(
                    f"refutation images escape the lower cutoffs at k={k}")
            checks += 1
    return f"all forced candidates refuted for k in {ks}", checks


def _suite_retract_catalog(fam: NormalizedFamily, N: int, A: int):
    ball = _ball(fam, N, A)
    bound = max(A, 2)
    descriptors = enumerate_retracts(fam, bound=bound)
    seen = set()
    checks = 0
    for d in descriptors:
        key = d.text()
        if key in seen:
            raise _Failure(f"duplicate retract descriptor {key}")
        seen.add(key)
        m = d.witness_map()
        if d.cutoff is not None and d.cutoff > ball.amax:
            continue  # witness map's image lies outside this ball
        if d.value is not None and d.value.a > ball.amax:
            continue
        violation = verify_homomorphism(m, ball)
        if violation is not None:
            x, y = violation
            raise _Failure(
                f"witness map for {key} not multiplicative on "
                f"{x.text()}, {y.text()}")
        fixed = fixed_points(m, ball)
        carrier = {e for e in ball.elements if d.carrier(e)}
        if fixed != carrier:
            raise _Failure(
                f"fixed points of {key} differ from its carrier")
        for e in ball.elements:
            img = m.apply(e)
            if m.apply(img) != img:
                raise _Failure(f"witness map for {key} is not idempotent")
        checks += len(ball) ** 2 + 2 * len(ball)
    expected_nontrivial = set()
    top = fam.hi if fam.hi is not None else bound
    if fam.hi is None or fam.hi >= 2:
        expected_nontrivial.update(
            f"UpperFamily({i})" for i in range(1, top + 1))
        expected_nontrivial.update(
            f"SingleCutoff({j})" for j in range(top + 1))
    elif fam.hi == 1:
        expected_nontrivial.update(["SingleCutoff(0)", "SingleCutoff(1)"])
    actual_nontrivial = {d.text() for d in descriptors if not d.trivial}
    if actual_nontrivial != expected_nontrivial:
        raise _Failure(
            f"nontrivial retract set mismatch: got {sorted(actual_nontrivial)}")
    checks += 1
    return (f"{len(descriptors)} descriptors verified "
            f"({len(actual_nontrivial)} nontrivial)"), checks


def _suite_family_isomorphism(fam: NormalizedFamily, N: int, A: int):
    from .morphisms import families_isomorphic

    checks = 0
    if not families_isomorphic(fam, fam):
        raise _Failure("family not isomorphic to itself")
    checks += 1
    auto = shift_isomorphism(fam, fam)
    for a in range(0, (fam.hi if fam.hi is not None else A) + 1):
        e = Element(0, 0, a)
        if auto.apply(e) != e:
            raise _Failure("self-translation is not the identity")
        checks += 1
    shift = fam.shift + 3
    if fam.hi is None:
        partner = family_canonicalize([shift], infinite=True)
        other = family_canonicalize(range(0, 3))
    else:
        partner = family_canonicalize(range(shift, shift + fam.cardinality))
        other = family_canonicalize(range(0, fam.cardinality + 1))
    if not families_isomorphic(fam, partner):
        raise _Failure("translate of the family not recognized isomorphic")
    if families_isomorphic(fam, other):
        raise _Failure("family with different cutoff count marked isomorphic")
    checks += 2
    if fam.hi is not None and fam.hi <= 3:
        survivors = search_generator_consistent_maps(fam, fam, max(4, min(N, 5)))
        if len(survivors) != 1:
            raise _Failure(
                f"self-search found {len(survivors)} bijective candidates, "
                f"expected exactly the identity")
        checks += 1
    return "translation criterion and ball searches agree", checks


SUITE_NAMES: Dict[str, Callable] = {
    "assoc-inverse": _suite_assoc_inverse,
    "order-agreement": _suite_order_agreement,
    "retraction-hom": _suite_retraction_hom,
    "group-congruence-criterion": _suite_group_congruence_criterion,
    "projection-congruence": _suite_projection_congruence,
    "min-group-congruence": _suite_min_group_congruence,
    "lower-collapse-refutation": _suite_lower_collapse_refutation,
    "retract-catalog": _suite_retract_catalog,
    "family-isomorphism": _suite_family_isomorphism,
}


def run_suite(name: str, fam: NormalizedFamily, N: int, A: int) -> SuiteResult:
    """Run one named suite; unknown names raise ``KeyError``."""
    body = SUITE_NAMES[name]
    start = time.perf_counter()
    try:
        detail, checks = body(fam, N, A)
        passed = True
    except _Failure as exc:
        detail, checks, passed = str(exc), 0, False
    elapsed = time.perf_counter() - start
    return SuiteResult(name, passed, detail, checks, elapsed)


def run_all(fam: NormalizedFamily, N: int, A: int) -> List[SuiteResult]:
    """Run every suite in declaration order."""
    return [run_suite(name, fam, N, A) for name in SUITE_NAMES]
