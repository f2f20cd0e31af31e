"""Finite ball universes: the truncated element sets all oracles sweep.

A ball holds every element ``(i, j, a)`` with ``i, j <= N`` and ``a`` in the
family's cutoff interval capped at ``A``.  Products of ball members can
escape in the pair part (never in the cutoff), so quantified verdicts are
read only on the *inner* ball ``i, j <= inner_radius`` — a margin-protected
core shielded from truncation artifacts.
"""

from __future__ import annotations

from array import array
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterator, Optional

from . import kernels
from .core import BallError, Element, FamilyError, NormalizedFamily


@dataclass(frozen=True)
class BallUniverse:
    """All elements with pair coordinates ``<= N`` and cutoff ``<= A``."""

    fam: NormalizedFamily
    N: int
    A: int
    inner_radius: int

    def __post_init__(self):
        if self.N < 0:
            raise BallError("ball radius must be non-negative")
        if not 0 <= self.inner_radius <= self.N:
            raise BallError("inner radius must lie within the ball radius")
        if self.amax < self.fam.lo:
            raise BallError(
                f"empty family slice: no cutoff of {self.fam.text()} is <= "
                f"{self.A}")

    # -- geometry ----------------------------------------------------------
    @property
    def amax(self) -> int:
        hi = self.fam.hi
        return self.A if hi is None else min(self.A, hi)

    @property
    def ncut(self) -> int:
        return self.amax - self.fam.lo + 1

    @property
    def cutoffs(self) -> range:
        return range(self.fam.lo, self.amax + 1)

    def __len__(self) -> int:
        return (self.N + 1) * (self.N + 1) * self.ncut

    # -- enumeration -------------------------------------------------------
    @cached_property
    def elements(self) -> tuple:
        """All members in lexicographic ``(i, j, a)`` order."""
        rng = range(self.N + 1)
        cuts = self.cutoffs
        return tuple(Element(i, j, a) for i in rng for j in rng for a in cuts)

    @cached_property
    def _coords(self) -> tuple:
        ii = array("i", [0]) * len(self)
        jj = array("i", [0]) * len(self)
        aa = array("i", [0]) * len(self)
        for x, e in enumerate(self.elements):
            ii[x] = e.i
            jj[x] = e.j
            aa[x] = e.a
        return ii, jj, aa

    @property
    def coords(self) -> tuple:
        """Parallel coordinate arrays ``(ii, jj, aa)`` for kernel calls."""
        return self._coords

    def __iter__(self) -> Iterator[Element]:
        return iter(self.elements)

    def __contains__(self, e: object) -> bool:
        return (isinstance(e, Element) and e.i <= self.N and e.j <= self.N
                and self.fam.lo <= e.a <= self.amax)

    def index_of(self, e: Element) -> int:
        if e not in self:
            raise BallError(f"element {e.text()} outside ball "
                            f"N={self.N}, A={self.A}, family {self.fam.text()}")
        return ((e.i * (self.N + 1)) + e.j) * self.ncut + (e.a - self.fam.lo)

    # -- distinguished subsets --------------------------------------------
    def idempotents(self) -> list:
        return [e for e in self.elements if e.is_idempotent]

    def inner_contains(self, e: Element) -> bool:
        return e in self and e.i <= self.inner_radius and e.j <= self.inner_radius

    def inner_elements(self) -> list:
        return [e for e in self.elements if self.inner_contains(e)]

    def inner_idempotents(self) -> list:
        return [e for e in self.inner_elements() if e.is_idempotent]

    # -- product table -----------------------------------------------------
    @cached_property
    def product_index_table(self):
        """Flat index table of in-ball products (``-1`` = escaped the ball)."""
        ii, jj, aa = self.coords
        return kernels.product_table(ii, jj, aa, self.N, self.fam.lo, self.ncut)

    def mul_index(self, x: int, y: int) -> int:
        return self.product_index_table[x * len(self) + y]

    def grown(self, dn: int = 2, da: int = 1) -> "BallUniverse":
        """A strictly larger ball for stability re-checks (``N+dn, A+da``)."""
        return make_ball(self.fam, self.N + dn, self.A + da,
                         inner_radius=self.inner_radius)


def make_ball(fam: NormalizedFamily, N: int, A: Optional[int] = None,
              inner_radius: Optional[int] = None) -> BallUniverse:
    """Ball universe over ``fam`` with radius ``N`` and cutoff bound ``A``.

    ``A`` defaults to the family's top cutoff for finite families and to
    ``min(span, 4)``-style desk bounds being the caller's job for infinite
    ones, so infinite families require an explicit ``A``.  The inner radius
    defaults to ``N - 2``.
    """
    if N < 2:
        raise BallError("ball radius must be at least 2")
    if A is None:
        if fam.hi is None:
            raise BallError("infinite family needs an explicit cutoff bound")
        A = fam.hi
    if inner_radius is None:
        inner_radius = N - 2
    return BallUniverse(fam=fam, N=N, A=A, inner_radius=inner_radius)


__all__ = ["BallUniverse", "make_ball"]
