"""Exact element algebra for extensions of the bicyclic monoid.

The semigroup studied here consists of triples ``(i, j, a)`` where ``i`` and
``j`` range over the natural numbers and ``a`` is a *cutoff* drawn from a
fixed omega-closed family of tail sets.  A tail set with cutoff ``a`` is the
set ``{a, a+1, a+2, ...}``; an omega-closed family of non-empty tail sets is
always a contiguous interval of cutoffs ``{lo, ..., hi}`` (possibly
unbounded above), which is why families are stored as intervals.

Dropping the cutoff coordinate recovers the bicyclic monoid; every
single-cutoff slice of the semigroup is an isomorphic copy of it.  All
arithmetic is exact integer arithmetic.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, Optional

from . import kernels

#: Exclusive upper bound for every stored coordinate (signed 64-bit range).
INT_BOUND = 2**63


class BicextError(Exception):
    """Base class for all library errors."""


class FamilyError(BicextError):
    """A cutoff family is malformed, not omega-closed, or unusable here."""


class DomainError(BicextError):
    """An argument lies outside the domain required by the operation."""


class DomainEscapeError(DomainError):
    """A partial map was asked for a value outside its stored domain."""


class BallError(BicextError):
    """A finite-ball universe was asked for something it cannot hold."""


class ParseError(BicextError):
    """Wire-format text could not be parsed; ``column`` is 1-based."""

    def __init__(self, message: str, column: int | None = None):
        super().__init__(message)
        self.column = column


# ---------------------------------------------------------------------------
# Cutoff families
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class NormalizedFamily:
    """Interval of tail-set cutoffs ``{lo, ..., hi}`` (``hi=None``: no bound).

    ``shift`` records the offset removed when the family was normalized so
    that ``lo == 0``; a family with ``shift == n`` originally consisted of
    the cutoffs ``{n + lo, ..., n + hi}``.  A family is *canonical* when
    ``lo == 0``.
    """

    lo: int
    hi: Optional[int]
    shift: int = 0

    def __post_init__(self):
        if self.lo < 0 or self.shift < 0:
            raise FamilyError("cutoffs must be non-negative")
        if self.hi is not None and self.hi < self.lo:
            raise FamilyError(f"empty cutoff interval {self.lo}..{self.hi}")

    # -- structure ---------------------------------------------------------
    @property
    def is_infinite(self) -> bool:
        return self.hi is None

    @property
    def is_canonical(self) -> bool:
        return self.lo == 0

    @property
    def span(self) -> Optional[int]:
        """``hi - lo`` for finite families, ``None`` for infinite ones."""
        return None if self.hi is None else self.hi - self.lo

    @property
    def cardinality(self) -> Optional[int]:
        return None if self.hi is None else self.hi - self.lo + 1

    @property
    def min_original(self) -> int:
        """Smallest cutoff before normalization (``shift + lo``)."""
        return self.shift + self.lo

    # -- membership --------------------------------------------------------
    def __contains__(self, a: object) -> bool:
        if not isinstance(a, int) or isinstance(a, bool):
            return False
        return a >= self.lo and (self.hi is None or a <= self.hi)

    def members(self, upto: Optional[int] = None) -> range:
        """Cutoffs of the family, capped at ``upto`` for infinite families."""
        if self.hi is not None:
            top = self.hi if upto is None else min(self.hi, upto)
        else:
            if upto is None:
                raise FamilyError("infinite family needs an explicit bound")
            top = upto
        return range(self.lo, top + 1)

    def require(self, a: int, what: str = "cutoff") -> None:
        if a not in self:
            raise DomainError(f"{what} {a} is not in family {self.text()}")

    # -- coordinate translation --------------------------------------------
    def to_internal(self, a: int) -> int:
        """Original-coordinate cutoff -> internal (shift removed).

        All library computations use internal coordinates; text I/O shows
        original ones.  Raises :class:`DomainError` when the original
        cutoff is not a member of the family.
        """
        b = a - self.shift
        if b < self.lo or (self.hi is not None and b > self.hi):
            raise DomainError(f"cutoff {a} is not in family {self.text()}")
        return b

    def to_external(self, a: int) -> int:
        """Internal-coordinate cutoff -> original (shift restored)."""
        return a + self.shift

    # -- formatting --------------------------------------------------------
    def text(self) -> str:
        """Wire form in original (un-normalized) coordinates."""
        lo = self.lo + self.shift
        if self.hi is None:
            return f"{lo}..inf"
        return f"{lo}..{self.hi + self.shift}"

    def __str__(self) -> str:
        return self.text()

    def equipotent(self, other: "NormalizedFamily") -> bool:
        return self.cardinality == other.cardinality


def family_canonicalize(cutoffs: Iterable[int], *,
                        infinite: bool = False) -> NormalizedFamily:
    """Interval form of a cutoff set, shifted so the least cutoff is 0.

    The removed offset is recorded in ``shift``.  With ``infinite=True`` the
    given cutoffs are read as a finite prefix of an upward-unbounded family.
    Raises :class:`FamilyError` when the set is not a contiguous interval —
    a family of tail sets with a gap is never omega-closed.
    """
    seen = sorted(set(cutoffs))
    if not seen:
        raise FamilyError("family must contain at least one cutoff")
    if seen[0] < 0:
        raise FamilyError("cutoffs must be non-negative")
    if seen[-1] - seen[0] + 1 != len(seen):
        missing = next(k for k in range(seen[0], seen[-1])
                       if k not in set(seen))
        raise FamilyError(
            f"not omega-closed: cutoff {missing} is missing from the interval"
            f" {seen[0]}..{seen[-1]}")
    n0 = seen[0]
    hi = None if infinite else seen[-1] - n0
    return NormalizedFamily(0, hi, shift=n0)


def is_omega_closed(cutoffs: Iterable[int], n_max: Optional[int] = None) -> bool:
    """Direct check of the closure law ``max(k1, k2 - n)`` on a cutoff set.

    For tail sets ``F1 = [k1)``, ``F2 = [k2)`` and any ``n <= n_max`` the set
    ``(-n + F2) ∩ F1`` is the tail set with cutoff ``max(k1, k2 - n)``; the
    family is omega-closed when every such cutoff is again a member.  This is
    the definitional oracle against which the interval shortcut is tested.
    """
    ks = sorted(set(cutoffs))
    if not ks or ks[0] < 0:
        return False
    if n_max is None:
        n_max = ks[-1]
    members = set(ks)
    for k1 in ks:
        for k2 in ks:
            for n in range(n_max + 1):
                c = max(k1, k2 - n)
                if c not in members:
                    return False
    return True


# ---------------------------------------------------------------------------
# Subset prefixes and inductivity
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SetPrefix:
    """Finite description of a subset of the naturals.

    The described set is ``members ∪ {horizon, horizon+1, ...}`` when
    ``tail`` is true, and just ``members`` otherwise.  All listed members
    must lie below ``horizon`` when the tail is excluded.
    """

    members: frozenset
    horizon: int
    tail: bool

    def __post_init__(self):
        if self.horizon < 0:
            raise DomainError("horizon must be non-negative")
        if any(m < 0 for m in self.members):
            raise DomainError("set members must be non-negative")
        if not self.tail and any(m >= self.horizon for m in self.members):
            bad = min(m for m in self.members if m >= self.horizon)
            raise DomainError(
                f"malformed prefix: member {bad} is at or beyond horizon "
                f"{self.horizon} but the tail is excluded")

    def contains(self, x: int) -> bool:
        if self.tail and x >= self.horizon:
            return True
        return x in self.members


def is_inductive(prefix: SetPrefix) -> bool:
    """True when the described set S satisfies ``(-1 + S) ∩ S = S``.

    Equivalently: membership is upward closed (``x ∈ S`` implies
    ``x + 1 ∈ S``), so the non-empty inductive subsets are exactly the tail
    sets.  The empty set is inductive vacuously.
    """
    for x in prefix.members:
        if not prefix.contains(x + 1):
            return False
    return True


def tail_prefix(cutoff: int, horizon: Optional[int] = None) -> SetPrefix:
    """Prefix description of the tail set ``{cutoff, cutoff+1, ...}``."""
    h = cutoff if horizon is None else horizon
    if h < cutoff:
        raise DomainError("horizon below cutoff")
    return SetPrefix(frozenset(range(cutoff, h)), h, True)


# ---------------------------------------------------------------------------
# Elements
# ---------------------------------------------------------------------------

@dataclass(frozen=True, order=True)
class Element:
    """Semigroup element ``(i, j, a)``: bicyclic pair plus tail-set cutoff."""

    i: int
    j: int
    a: int

    def __post_init__(self):
        for v in (self.i, self.j, self.a):
            if not 0 <= v < INT_BOUND:
                raise DomainError(
                    f"coordinate {v} outside the 64-bit range [0, 2^63)")

    @property
    def is_idempotent(self) -> bool:
        return self.i == self.j

    def inverse(self) -> "Element":
        return Element(self.j, self.i, self.a)

    def text(self) -> str:
        return f"({self.i},{self.j},{self.a})"

    def __str__(self) -> str:
        return self.text()


@dataclass(frozen=True, order=True)
class BicyclicElement:
    """Element ``(i, j)`` of the bicyclic monoid."""

    i: int
    j: int

    def __post_init__(self):
        for v in (self.i, self.j):
            if not 0 <= v < INT_BOUND:
                raise DomainError(
                    f"coordinate {v} outside the 64-bit range [0, 2^63)")

    @property
    def is_idempotent(self) -> bool:
        return self.i == self.j

    def inverse(self) -> "BicyclicElement":
        return BicyclicElement(self.j, self.i)

    def text(self) -> str:
        return f"({self.i},{self.j})"

    def __str__(self) -> str:
        return self.text()


@dataclass(frozen=True, order=True)
class SigmaClass:
    """Class of the least group congruence, labelled by ``d = j - i``."""

    d: int


# ---------------------------------------------------------------------------
# Multiplication and inversion
# ---------------------------------------------------------------------------

def multiply(e1: Element, e2: Element, fam: NormalizedFamily) -> Element:
    """Product of two elements over ``fam``.

    The pair part multiplies like the bicyclic monoid; the cutoff of the
    product is the cutoff of ``(j1 - i2 + T1) ∩ T2`` (respectively
    ``T1 ∩ T2`` or ``T1 ∩ (i2 - j1 + T2)``), i.e. a shifted-then-clamped
    maximum.  The result cutoff always lands back inside the family
    interval, so only the arguments need membership checks.
    """
    fam.require(e1.a)
    fam.require(e2.a)
    i, j, a = kernels.mul6(e1.i, e1.j, e1.a, e2.i, e2.j, e2.a)
    return Element(i, j, a)


def inverse(e: Element) -> Element:
    """Semigroup inverse ``(i, j, a) -> (j, i, a)``."""
    return e.inverse()


def is_idempotent(e: Element) -> bool:
    return e.is_idempotent


def bicyclic_multiply(b1: BicyclicElement, b2: BicyclicElement) -> BicyclicElement:
    """Bicyclic monoid product of two pairs."""
    if b1.j <= b2.i:
        return BicyclicElement(b1.i - b1.j + b2.i, b2.j)
    return BicyclicElement(b1.i, b1.j - b2.i + b2.j)


def project(e: Element) -> BicyclicElement:
    """Forget the cutoff: the canonical surjection onto the bicyclic monoid."""
    return BicyclicElement(e.i, e.j)


def embed(b: BicyclicElement, a: int, fam: NormalizedFamily) -> Element:
    """Copy a bicyclic pair into the cutoff-``a`` slice of the semigroup."""
    fam.require(a)
    return Element(b.i, b.j, a)


# ---------------------------------------------------------------------------
# Natural partial order
# ---------------------------------------------------------------------------

def natural_leq(s: Element, t: Element, fam: NormalizedFamily) -> bool:
    """Natural partial order: ``s <= t`` iff ``s == t * (s^-1 * s)``.

    This is the standard reformulation of "``s = t e`` for some idempotent
    ``e``"; the equivalence of the two is itself checked on finite balls by
    the oracle suite.
    """
    e = multiply(s.inverse(), s, fam)
    return multiply(t, e, fam) == s


def idempotent_leq(e1: Element, e2: Element, fam: NormalizedFamily) -> bool:
    """Order on idempotents: ``(p,p,a) <= (q,q,b)`` iff ``p >= q`` and
    ``p + a >= q + b``.

    Closed form obtained by unfolding the product ``e1 * e2``; must agree
    with :func:`natural_leq` on every idempotent pair.
    """
    for e in (e1, e2):
        if not e.is_idempotent:
            raise DomainError(f"{e.text()} is not idempotent")
        fam.require(e.a)
    return e1.i >= e2.i and e1.i + e1.a >= e2.i + e2.a


def hasse_covers(ball) -> list:
    """Cover pairs ``(upper, lower)`` of the idempotent order inside a ball.

    Computed as the transitive reduction of the full order restricted to
    the ball's idempotents: ``upper`` covers ``lower`` when ``lower <
    upper`` strictly and no ball idempotent sits strictly between.  Interior
    nodes of an interval family show the familiar two-successor grid; the
    third, diagonal arrow sometimes drawn in pictures of this order is a
    composite of the other two and is therefore not a cover.
    """
    fam = ball.fam
    idems = [e for e in ball.elements if e.is_idempotent]

    def strictly_below(x, y):
        return x != y and idempotent_leq(x, y, fam)

    covers = []
    for upper in idems:
        below = [e for e in idems if strictly_below(e, upper)]
        for lower in below:
            if not any(strictly_below(mid, upper) and strictly_below(lower, mid)
                       for mid in below):
                covers.append((upper, lower))
    covers.sort()
    return covers


# ---------------------------------------------------------------------------
# Least group congruence (sigma)
# ---------------------------------------------------------------------------

def sigma_equivalent(s: Element, t: Element) -> bool:
    """Least-group-congruence test: true iff ``s.i - s.j == t.i - t.j``.

    Fast path for "some idempotent ``e`` has ``e s = e t``"; the
    definitional witness search lives in :mod:`bicext.oracles` and the two
    must coincide (checked exhaustively on balls by the test suites).
    """
    return s.i - s.j == t.i - t.j


def sigma_class(e: Element) -> SigmaClass:
    """Class of ``e`` in the least group congruence, labelled ``d = j - i``.

    The labels add under multiplication, exhibiting the quotient group as
    the integers under addition.
    """
    return SigmaClass(e.j - e.i)


# ---------------------------------------------------------------------------
# Wire-format parsing
# ---------------------------------------------------------------------------

def _digits(text: str, pos: int, what: str):
    start = pos
    while pos < len(text) and "0" <= text[pos] <= "9":
        pos += 1
    if pos == start:
        raise ParseError(f"expected {what}", column=start + 1)
    return int(text[start:pos]), pos


def parse_element(text: str) -> Element:
    """Parse the wire form ``(i,j,a)`` — three numbers in parentheses.

    Spaces around tokens are permitted and normalised away; the canonical
    rendering is always ``Element.text()`` with no spaces.  Raises
    :class:`ParseError` with a 1-based ``column`` on malformed input.
    """
    pos = 0

    def skip_spaces() -> None:
        nonlocal pos
        while pos < len(text) and text[pos] == " ":
            pos += 1

    skip_spaces()
    if pos >= len(text) or text[pos] != "(":
        raise ParseError("expected '('", column=pos + 1)
    pos += 1
    parts = []
    while True:
        skip_spaces()
        value, pos = _digits(text, pos, "a number")
        parts.append(value)
        skip_spaces()
        if pos < len(text) and text[pos] == ",":
            pos += 1
            continue
        break
    if pos >= len(text) or text[pos] != ")":
        raise ParseError("expected ')'", column=pos + 1)
    if len(parts) != 3:
        raise ParseError(
            f"expected 3 components, found {len(parts)}", column=pos + 1
        )
    pos += 1
    skip_spaces()
    if pos != len(text):
        raise ParseError("unexpected trailing text", column=pos + 1)
    return Element(parts[0], parts[1], parts[2])


def parse_family(text: str) -> NormalizedFamily:
    """Parse ``lo..hi`` or ``lo..inf`` into a canonical family.

    Raises :class:`ParseError` (with 1-based ``column``) on malformed text
    and :class:`FamilyError` when the interval is empty.
    """
    lo, pos = _digits(text, 0, "a number")
    for _ in range(2):
        if pos >= len(text) or text[pos] != ".":
            raise ParseError("expected '..'", column=pos + 1)
        pos += 1
    if text[pos:pos + 3] == "inf":
        pos += 3
        hi: Optional[int] = None
    else:
        hi, pos = _digits(text, pos, "a number or 'inf'")
    if pos != len(text):
        raise ParseError("unexpected trailing text", column=pos + 1)
    if hi is None:
        return family_canonicalize([lo], infinite=True)
    if hi < lo:
        raise FamilyError(f"empty cutoff interval {lo}..{hi}")
    return family_canonicalize(range(lo, hi + 1))


__all__ = [
    "INT_BOUND",
    "BicextError", "FamilyError", "DomainError", "DomainEscapeError",
    "BallError", "ParseError",
    "NormalizedFamily", "family_canonicalize", "is_omega_closed",
    "SetPrefix", "is_inductive", "tail_prefix",
    "Element", "BicyclicElement", "SigmaClass",
    "multiply", "inverse", "is_idempotent",
    "bicyclic_multiply", "project", "embed",
    "natural_leq", "idempotent_leq", "hasse_covers",
    "sigma_equivalent", "sigma_class",
    "parse_element", "parse_family",
]
