"""Congruences on finite balls: closure, named kernels, classification.

A congruence is represented by its restriction to a ball universe — a
partition of the ball that is closed under in-ball left and right
translations.  :func:`congruence_closure` builds the smallest such partition
containing a set of generating pairs; :func:`classify` reads off the
structural verdict (are the idempotents collapsed? which cutoff layers are
identified nontrivially?) from the inner ball, where boundary truncation
cannot distort the answer.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, Iterable, List, Optional, Tuple

from . import kernels
from .core import BallError, Element, parse_element, parse_family
from .balls import BallUniverse, make_ball

__all__ = [
    "CongruencePartition",
    "congruence_closure",
    "discrete_partition",
    "sigma_partition",
    "projection_kernel",
    "CongruenceVerdict",
    "classify",
    "is_translation_closed",
    "refines",
]

Pair = Tuple[Element, Element]


class CongruencePartition:
    """Partition of a ball universe, indexed compatibly with the universe.

    ``parent`` maps each element index to the index of its class
    representative (always fully resolved — ``parent[parent[x]] ==
    parent[x]``); ``generators`` records the seed pairs when the partition
    came from :func:`congruence_closure`.  Construct via the builder
    functions rather than directly.
    """

    __slots__ = ("universe", "generators", "_parent", "_sig", "_classes")

    def __init__(self, universe: BallUniverse, parent,
                 generators: Iterable[Pair] = ()):
        n = len(universe)
        if len(parent) != n:
            raise BallError(
                f"partition has {len(parent)} slots for a ball of {n}")
        self.universe = universe
        self.generators: Tuple[Pair, ...] = tuple(generators)
        self._parent = parent
        self._sig: Optional[tuple] = None
        self._classes: Optional[list] = None

    # -- canonical form ----------------------------------------------------
    @property
    def signature(self) -> tuple:
        """Index -> least index in the same class; canonical under renaming."""
        if self._sig is None:
            first: Dict[int, int] = {}
            self._sig = tuple(
                first.setdefault(r, idx)
                for idx, r in enumerate(self._parent)
            )
        return self._sig

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, CongruencePartition):
            return NotImplemented
        return (self.universe == other.universe
                and self.signature == other.signature)

    def __hash__(self) -> int:
        return hash((self.universe, self.signature))

    # -- queries -----------------------------------------------------------
    def related(self, x: Element, y: Element) -> bool:
        ball = self.universe
        return self._parent[ball.index_of(x)] == self._parent[ball.index_of(y)]

    def class_of(self, x: Element) -> Tuple[Element, ...]:
        ball = self.universe
        r = self._parent[ball.index_of(x)]
        elems = ball.elements
        return tuple(elems[i] for i, p in enumerate(self._parent) if p == r)

    @property
    def classes(self) -> List[Tuple[Element, ...]]:
        """All classes, each in element order, listed by least member."""
        if self._classes is None:
            groups: Dict[int, list] = {}
            elems = self.universe.elements
            for idx, s in enumerate(self.signature):
                groups.setdefault(s, []).append(elems[idx])
            self._classes = [tuple(groups[k]) for k in sorted(groups)]
        return self._classes

    @property
    def num_classes(self) -> int:
        return len(set(self._parent))

    @property
    def is_discrete(self) -> bool:
        return self.num_classes == len(self.universe)

    # -- serialization -----------------------------------------------------
    def to_json(self) -> dict:
        """Ball geometry, non-singleton classes, and the structural verdict.

        Singleton classes are implied by omission, so the discrete partition
        serializes with an empty class list.  All cutoffs are rendered in the
        family's original (wire) coordinates.
        """
        ball = self.universe
        fam = ball.fam
        return {
            "ball": {
                "N": ball.N,
                "A": fam.to_external(ball.amax),
                "family": fam.text(),
                "inner": ball.inner_radius,
            },
            "classes": [
                [Element(e.i, e.j, fam.to_external(e.a)).text() for e in cls]
                for cls in self.classes
                if len(cls) > 1
            ],
            "verdict": classify(self).as_json(),
        }

    @staticmethod
    def from_json(data: dict) -> "CongruencePartition":
        geom = data["ball"]
        fam = parse_family(geom["family"])
        ball = make_ball(
            fam, geom["N"], fam.to_internal(geom["A"]),
            inner_radius=geom["inner"])
        parent = list(range(len(ball)))
        for cls in data["classes"]:
            idxs = sorted(
                ball.index_of(Element(w.i, w.j, fam.to_internal(w.a)))
                for w in map(parse_element, cls))
            for idx in idxs[1:]:
                parent[idx] = idxs[0]
        return CongruencePartition(ball, parent)


def congruence_closure(
    gens: Iterable[Pair], ball: BallUniverse
) -> CongruencePartition:
    """Smallest in-ball congruence relating every pair in ``gens``.

    Each generating pair is united, then classes are repeatedly closed under
    left and right multiplication by ball elements (products that escape the
    ball impose no constraint).  With no pairs this is the discrete
    partition.  Raises :class:`BallError` if a generator lies outside the
    ball.
    """
    gens = tuple(gens)
    flat: List[int] = []
    for x, y in gens:
        flat.append(ball.index_of(x))
        flat.append(ball.index_of(y))
    parent = kernels.closure_fixpoint(
        ball.product_index_table, len(ball), flat)
    return CongruencePartition(ball, parent, gens)


def discrete_partition(ball: BallUniverse) -> CongruencePartition:
    """The identity congruence: every element in its own class."""
    return CongruencePartition(ball, list(range(len(ball))))


def sigma_partition(ball: BallUniverse) -> CongruencePartition:
    """Restriction of the least group congruence: classes by ``i - j``."""
    first: Dict[int, int] = {}
    parent = []
    for idx, e in enumerate(ball.elements):
        parent.append(first.setdefault(e.i - e.j, idx))
    return CongruencePartition(ball, parent)


def projection_kernel(ball: BallUniverse) -> CongruencePartition:
    """Kernel of the cutoff-forgetting projection: classes by pair ``(i, j)``.

    Relates elements that differ only in their cutoff.  A congruence that is
    neither the identity nor idempotent-collapsing — the standard exhibit
    that the cutoff layer genuinely enlarges the congruence lattice.
    """
    first: Dict[Tuple[int, int], int] = {}
    parent = []
    for idx, e in enumerate(ball.elements):
        parent.append(first.setdefault((e.i, e.j), idx))
    return CongruencePartition(ball, parent)


@dataclass(frozen=True)
class CongruenceVerdict:
    """Structural reading of a ball congruence, taken on the inner ball.

    ``bicyclic_restrictions`` maps each cutoff to whether the congruence
    identifies two distinct inner elements of that cutoff layer (i.e. the
    restriction to the layer's bicyclic copy is non-identity).
    ``group_congruence_on_ball`` records whether all inner idempotents fall
    in one class — the finite-ball shadow of being a group congruence.
    ``consistent`` is the dichotomy check: the evidence matches "either no
    layer is identified and idempotents stay separated, or every layer is
    identified and all idempotents collapse".
    """

    idempotents_collapsed: bool
    bicyclic_restrictions: Dict[int, bool]
    group_congruence_on_ball: bool
    consistent: bool

    def as_json(self) -> dict:
        return {
            "idempotents_collapsed": self.idempotents_collapsed,
            "bicyclic_restrictions": {
                str(a): v for a, v in sorted(self.bicyclic_restrictions.items())
            },
            "group_congruence_on_ball": self.group_congruence_on_ball,
            "consistent": self.consistent,
        }


def classify(part: CongruencePartition) -> CongruenceVerdict:
    """Verdict for a ball congruence, read on the inner ball only.

    Boundary elements are excluded because the closure cannot see products
    that escape the ball; inside the inner radius every product of a
    one-step translation stays visible, so the verdict is stable under
    growing the ball (the suites check this stability explicitly).
    """
    ball = part.universe
    inner = ball.inner_elements()
    root = part._parent
    idem_roots = {root[ball.index_of(e)] for e in inner if e.is_idempotent}
    collapsed = len(idem_roots) <= 1
    layers: Dict[int, bool] = {}
    for a in ball.cutoffs:
        seen = set()
        nontrivial = False
        for e in inner:
            if e.a != a:
                continue
            r = root[ball.index_of(e)]
            if r in seen:
                nontrivial = True
                break
            seen.add(r)
        # report layers under their original (wire) cutoff labels
        layers[ball.fam.to_external(a)] = nontrivial
    some = any(layers.values())
    every = all(layers.values())
    consistent = (collapsed == some) and (collapsed == every)
    return CongruenceVerdict(collapsed, layers, collapsed, consistent)


def is_translation_closed(part: CongruencePartition) -> bool:
    """Definitional check: related pairs stay related under in-ball
    translations.

    For every class and every ball element ``s``, the left products ``s*m``
    and right products ``m*s`` over class members ``m`` must land in a
    single class each, counting only products that stay inside the ball.
    """
    ball = part.universe
    table = ball.product_index_table
    n = len(ball)
    root = part._parent
    groups: Dict[int, List[int]] = {}
    for idx in range(n):
        groups.setdefault(root[idx], []).append(idx)
    for members in groups.values():
        if len(members) < 2:
            continue
        for s in range(n):
            left = set()
            right = set()
            for m in members:
                p = table[s * n + m]
                if p >= 0:
                    left.add(root[p])
                q = table[m * n + s]
                if q >= 0:
                    right.add(root[q])
                if len(left) > 1 or len(right) > 1:
                    return False
    return True


def refines(
    finer: CongruencePartition,
    coarser: CongruencePartition,
    *,
    inner_only: bool = False,
) -> bool:
    """True when every ``finer``-related pair is also ``coarser``-related.

    Both partitions must live on the same ball.  With ``inner_only`` the
    comparison is restricted to inner-ball elements — the region where a
    closure computed on the ball is trustworthy.
    """
    if finer.universe != coarser.universe:
        raise BallError("cannot compare partitions on different balls")
    ball = finer.universe
    if inner_only:
        idxs = [ball.index_of(e) for e in ball.inner_elements()]
    else:
        idxs = list(range(len(ball)))
    fr = finer._parent
    cr = coarser._parent
    groups: Dict[int, List[int]] = {}
    for idx in idxs:
        groups.setdefault(fr[idx], []).append(idx)
    for members in groups.values():
        if len({cr[m] for m in members}) > 1:
            return False
    return True
