"""Brute-force reference computations over finite balls.

Everything in this module recomputes a relation *from its definition* by
exhaustive search, without using the closed-form shortcuts implemented in
:mod:`bicext.core`.  The fast implementations are tested against these
oracles; the oracles themselves are deliberately slow and simple.

Witness searches quantify over a *larger* ball than the elements being
related, because the defining witness (an idempotent factor, a common
product, ...) may have coordinates that exceed the coordinates of the
related pair.  Each function documents the enlargement it uses.
"""

from __future__ import annotations

from typing import Dict, List, Optional, Tuple

from .core import Element, NormalizedFamily, multiply
from .balls import BallUniverse, make_ball

__all__ = [
    "leq_matrix",
    "leq_witnessed",
    "sigma_matrix",
    "sigma_witnessed",
    "inverse_unique_on_ball",
]


def _witness_ball(ball: BallUniverse) -> BallUniverse:
    """Ball enlarged enough to contain every witness for pairs in ``ball``.

    For the natural partial order the witness for ``s <= t`` is the
    idempotent ``s^-1 s = (j, j, a)`` with ``j <= N`` and ``a`` a cutoff of
    ``s`` — already inside a ball one step larger.  For the minimum group
    congruence the witness idempotent ``e`` satisfies ``es = et``; a product
    of two ball elements has coordinates at most ``2N``, and pushing both
    sides to a common form never needs coordinates beyond that.  Growing by
    ``N + 2`` in the pair coordinate and ``2`` in the cutoff covers both
    uses with margin.
    """
    fam = ball.fam
    grow_a = 2 if fam.hi is None else min(2, fam.hi - ball.amax)
    return make_ball(
        fam,
        ball.N + ball.N + 2,
        ball.amax + grow_a,
        inner_radius=ball.N,
    )


def leq_matrix(ball: BallUniverse) -> Dict[Tuple[Element, Element], Element]:
    """Witness map for the natural partial order on ``ball``.

    Returns a dict mapping ``(s, t)`` to an idempotent ``e`` such that
    ``t * e == s``, for every related pair with both endpoints in ``ball``.
    Pairs absent from the dict are unrelated.

    Enumerated forwards: for each ``t`` in the witness ball and each
    idempotent ``e``, the product ``t * e`` is some ``s`` with ``s <= t`` —
    and every related pair arises this way, because ``s <= t`` holds iff
    ``s = t * (s^-1 s)``.
    """
    fam = ball.fam
    big = _witness_ball(ball)
    out: Dict[Tuple[Element, Element], Element] = {}
    idems = big.idempotents()
    for t in big.elements:
        if t not in ball:
            continue
        for e in idems:
            s = multiply(t, e, fam)
            if s in ball and (s, t) not in out:
                out[(s, t)] = e
    return out


def leq_witnessed(
    s: Element, t: Element, fam: NormalizedFamily
) -> Optional[Element]:
    """Search for an idempotent ``e`` with ``t * e == s``; None if unrelated.

    The witness, when one exists, is ``s^-1 s`` itself, but this scans a
    bounding ball from the definition instead of assuming that.
    """
    n = max(s.i, s.j, t.i, t.j) + 2
    a_hint = max(s.a, t.a) + 2
    amax = a_hint if fam.hi is None else min(a_hint, fam.hi)
    big = make_ball(fam, n, amax)
    for e in big.idempotents():
        if multiply(t, e, fam) == s:
            return e
    return None


def sigma_matrix(ball: BallUniverse) -> Dict[Tuple[Element, Element], Element]:
    """Witness map for the minimum group congruence on ``ball``.

    Returns a dict mapping related pairs ``(s, t)`` to an idempotent ``e``
    with ``e * s == e * t``.  Enumerated forwards: for each idempotent ``e``
    in the witness ball, bucket the ball elements by the value of ``e * s``;
    elements sharing a bucket are related with witness ``e``.  Every related
    pair appears for a large enough ``e`` because idempotents below a given
    one only refine agreement further.
    """
    fam = ball.fam
    big = _witness_ball(ball)
    out: Dict[Tuple[Element, Element], Element] = {}
    members = list(ball.elements)
    for e in big.idempotents():
        buckets: Dict[Element, List[Element]] = {}
        for s in members:
            buckets.setdefault(multiply(e, s, fam), []).append(s)
        for group in buckets.values():
            if len(group) < 2:
                continue
            for x in group:
                for y in group:
                    if x is not y and (x, y) not in out:
                        out[(x, y)] = e
    for s in members:
        out.setdefault((s, s), multiply(s.inverse(), s, fam))
    return out


def sigma_witnessed(
    s: Element, t: Element, fam: NormalizedFamily
) -> Optional[Element]:
    """Search for an idempotent ``e`` with ``e * s == e * t``; None if none.

    A sufficient witness always has shape ``(m, m, b)`` for large ``m``, so
    the scan bound ``m <= max coordinate + span + 2`` is exhaustive for the
    decidable fragment this library works in.
    """
    span = 0 if fam.hi is None else fam.hi
    n = max(s.i, s.j, t.i, t.j) + span + 2
    a_hint = max(s.a, t.a) + 2
    amax = a_hint if fam.hi is None else min(a_hint, fam.hi)
    big = make_ball(fam, n, amax)
    for e in big.idempotents():
        if multiply(e, s, fam) == multiply(e, t, fam):
            return e
    return None


def inverse_unique_on_ball(ball: BallUniverse) -> bool:
    """Check every ball element has exactly one generalized inverse in a
    larger ball.

    ``y`` is a generalized inverse of ``x`` when ``x*y*x == x`` and
    ``y*x*y == y``.  An inverse semigroup has exactly one such ``y`` per
    ``x``; this verifies that on the ball by exhaustive search over a ball
    wide enough to contain every candidate (coordinates of an inverse never
    exceed those of ``x`` plus the family span).
    """
    fam = ball.fam
    big = _witness_ball(ball)
    for x in ball.elements:
        found = 0
        for y in big.elements:
            if (
                multiply(multiply(x, y, fam), x, fam) == x
                and multiply(multiply(y, x, fam), y, fam) == y
            ):
                found += 1
                if found > 1:
                    return False
        if found != 1:
            return False
    return True
