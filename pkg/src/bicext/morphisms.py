"""Structure-preserving maps: named homomorphisms, the retract catalog,
the lower-collapse refutation, and generator-constrained isomorphism search.

An :class:`ElementMap` is a deterministic map between element domains.  A
domain is either a cutoff semigroup (given by its
:class:`~bicext.core.NormalizedFamily`) or the bicyclic monoid (represented
by ``None``); every concrete map declares its source and target domains and
serializes to ``{"kind": ..., "params": {...}}``.

All cutoffs here are internal (canonical) coordinates — the wire boundary
translates via ``NormalizedFamily.to_internal`` / ``to_external``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Dict, List, Optional, Tuple, Union

from . import kernels
from .core import (
    BallError,
    BicyclicElement,
    DomainError,
    DomainEscapeError,
    Element,
    FamilyError,
    NormalizedFamily,
    ParseError,
    bicyclic_multiply,
    family_canonicalize,
    idempotent_leq,
    multiply,
    parse_element,
)
from .balls import BallUniverse, make_ball

__all__ = [
    "ElementMap",
    "Identity",
    "Constant",
    "Retraction",
    "CollapseCutoff",
    "Projection",
    "Embedding",
    "ShiftIso",
    "TableMap",
    "LowerCollapseCandidate",
    "element_map_from_json",
    "verify_homomorphism",
    "verify_retraction",
    "fixed_points",
    "RetractDescriptor",
    "enumerate_retracts",
    "retract_descriptor_from_json",
    "RefutationWitness",
    "refute_lower_retraction",
    "shift_isomorphism",
    "families_isomorphic",
    "search_generator_consistent_maps",
]

#: A map domain: a cutoff semigroup, or None for the bicyclic monoid.
Domain = Optional[NormalizedFamily]
AnyElement = Union[Element, BicyclicElement]


def _mul_in(dom: Domain) -> Callable[[AnyElement, AnyElement], AnyElement]:
    if dom is None:
        return bicyclic_multiply
    return lambda x, y: multiply(x, y, dom)


class ElementMap:
    """Deterministic map between element domains (abstract base).

    Subclasses declare ``source_fam`` / ``target_fam`` (``None`` for the
    bicyclic monoid), implement :meth:`apply`, and expose their defining
    data through :meth:`params`.
    """

    kind: str = "abstract"

    @property
    def source_fam(self) -> Domain:
        raise NotImplementedError

    @property
    def target_fam(self) -> Domain:
        raise NotImplementedError

    def apply(self, x: AnyElement) -> AnyElement:
        raise NotImplementedError

    def params(self) -> dict:
        return {}

    def to_json(self) -> dict:
        return {"kind": self.kind, "params": self.params()}

    def __call__(self, x: AnyElement) -> AnyElement:
        return self.apply(x)

    def text(self) -> str:
        inner = ",".join(str(v) for v in self.params().values())
        return f"{self.kind}({inner})" if inner else self.kind


@dataclass(frozen=True)
class Identity(ElementMap):
    """The identity map of a cutoff semigroup."""

    fam: NormalizedFamily

    kind = "Identity"

    @property
    def source_fam(self) -> Domain:
        return self.fam

    @property
    def target_fam(self) -> Domain:
        return self.fam

    def apply(self, x: Element) -> Element:
        self.fam.require(x.a)
        return x


@dataclass(frozen=True)
class Constant(ElementMap):
    """Send everything to one idempotent — the trivial retraction onto it."""

    fam: NormalizedFamily
    value: Element

    kind = "Constant"

    def __post_init__(self):
        if not self.value.is_idempotent:
            raise DomainError(
                f"constant map value {self.value.text()} must be idempotent")
        self.fam.require(self.value.a)

    @property
    def source_fam(self) -> Domain:
        return self.fam

    @property
    def target_fam(self) -> Domain:
        return self.fam

    def apply(self, x: Element) -> Element:
        self.fam.require(x.a)
        return self.value

    def params(self) -> dict:
        return {"value": self.value.text()}


@dataclass(frozen=True)
class Retraction(ElementMap):
    """Raise every cutoff to at least ``cutoff``: ``(i,j,a) -> (i,j,max(a,c))``.

    A homomorphism of the whole semigroup onto the sub-semigroup of cutoffs
    ``>= c``, fixing that sub-semigroup pointwise — the witnessing
    retraction for the upper-family retracts.
    """

    fam: NormalizedFamily
    cutoff: int

    kind = "Retraction"

    def __post_init__(self):
        self.fam.require(self.cutoff)

    @property
    def source_fam(self) -> Domain:
        return self.fam

    @property
    def target_fam(self) -> Domain:
        return self.fam

    def apply(self, x: Element) -> Element:
        self.fam.require(x.a)
        if x.a >= self.cutoff:
            return x
        return Element(x.i, x.j, self.cutoff)

    def params(self) -> dict:
        return {"cutoff": self.cutoff}


@dataclass(frozen=True)
class CollapseCutoff(ElementMap):
    """Send every cutoff to one fixed value: ``(i,j,a) -> (i,j,c)``.

    Equal to the bicyclic projection followed by the embedding at ``c``; a
    retraction onto the bicyclic copy living at cutoff ``c``.
    """

    fam: NormalizedFamily
    cutoff: int

    kind = "CollapseCutoff"

    def __post_init__(self):
        self.fam.require(self.cutoff)

    @property
    def source_fam(self) -> Domain:
        return self.fam

    @property
    def target_fam(self) -> Domain:
        return self.fam

    def apply(self, x: Element) -> Element:
        self.fam.require(x.a)
        return Element(x.i, x.j, self.cutoff)

    def params(self) -> dict:
        return {"cutoff": self.cutoff}


@dataclass(frozen=True)
class Projection(ElementMap):
    """Forget the cutoff: the surjection onto the bicyclic monoid."""

    fam: NormalizedFamily

    kind = "Projection"

    @property
    def source_fam(self) -> Domain:
        return self.fam

    @property
    def target_fam(self) -> Domain:
        return None

    def apply(self, x: Element) -> BicyclicElement:
        self.fam.require(x.a)
        return BicyclicElement(x.i, x.j)


@dataclass(frozen=True)
class Embedding(ElementMap):
    """Copy the bicyclic monoid onto the cutoff-``c`` layer: ``(i,j) -> (i,j,c)``."""

    fam: NormalizedFamily
    cutoff: int

    kind = "Embedding"

    def __post_init__(self):
        self.fam.require(self.cutoff)

    @property
    def source_fam(self) -> Domain:
        return None

    @property
    def target_fam(self) -> Domain:
        return self.fam

    def apply(self, b: BicyclicElement) -> Element:
        return Element(b.i, b.j, self.cutoff)

    def params(self) -> dict:
        return {"cutoff": self.cutoff}


@dataclass(frozen=True)
class ShiftIso(ElementMap):
    """Cutoff translation between equipotent families.

    In internal coordinates the map is ``a -> a - src.lo + dst.lo`` (the
    identity when both families are canonical); in original coordinates it
    translates by the difference of the least original cutoffs, which is
    what ``params`` records.  Bijective and multiplicative — re-checked on
    balls by :func:`families_isomorphic` and the suites.
    """

    src: NormalizedFamily
    dst: NormalizedFamily

    kind = "ShiftIso"

    def __post_init__(self):
        if not self.src.equipotent(self.dst):
            raise FamilyError(
                f"not isomorphic: families {self.src.text()} and "
                f"{self.dst.text()} have different cutoff counts")

    @property
    def source_fam(self) -> Domain:
        return self.src

    @property
    def target_fam(self) -> Domain:
        return self.dst

    def apply(self, x: Element) -> Element:
        self.src.require(x.a)
        return Element(x.i, x.j, x.a - self.src.lo + self.dst.lo)

    def params(self) -> dict:
        return {
            "from_min": self.src.min_original,
            "to_min": self.dst.min_original,
        }

    def reverse(self) -> "ShiftIso":
        return ShiftIso(self.dst, self.src)


@dataclass(frozen=True)
class TableMap(ElementMap):
    """Explicit finite map: a tuple of ``(source, image)`` pairs.

    Partial — defined exactly on the listed sources; applying it elsewhere
    raises :class:`DomainError`.  Produced by the generator search.
    """

    src: Domain
    dst: Domain
    entries: Tuple[Tuple[AnyElement, AnyElement], ...]

    kind = "TableMap"

    def __post_init__(self):
        object.__setattr__(self, "entries", tuple(sorted(self.entries)))
        lookup = dict(self.entries)
        if len(lookup) != len(self.entries):
            raise DomainError("table map lists a source element twice")
        object.__setattr__(self, "_lookup", lookup)

    @property
    def source_fam(self) -> Domain:
        return self.src

    @property
    def target_fam(self) -> Domain:
        return self.dst

    def apply(self, x: AnyElement) -> AnyElement:
        try:
            return self._lookup[x]
        except KeyError:
            raise DomainError(
                f"table map is not defined on {x.text()}") from None

    def params(self) -> dict:
        return {
            "entries": [[x.text(), y.text()] for x, y in self.entries],
        }

    def text(self) -> str:
        return f"TableMap({len(self.entries)} entries)"


@dataclass(frozen=True)
class LowerCollapseCandidate(ElementMap):
    """One of the three forced candidates for folding the top cutoff layer
    down.

    A homomorphism fixing the layers with cutoff ``<= c`` (as a retract
    carrier) would have to send the idempotent ``(0,0,c+1)`` somewhere
    between ``(1,1,c)`` and ``(0,0,c)`` in the natural order, which leaves
    three possible images; each choice forces the whole map.  Case 1 keeps
    the lower layers fixed and sends ``(p,q,c+1) -> (p,q,c)``; cases 2 and 3
    shift the lower layers one diagonal step, ``(p,q,a) -> (p+1,q+1,a)``,
    and send the top layer to cutoff ``c`` (case 2) or ``c-1`` (case 3).
    None of the three is multiplicative — :func:`refute_lower_retraction`
    exhibits a violating pair for each.  Defined only on cutoffs
    ``<= c+1``.
    """

    fam: NormalizedFamily
    cutoff: int
    case_id: int

    kind = "LowerCollapseCandidate"

    def __post_init__(self):
        if self.case_id not in (1, 2, 3):
            raise DomainError("case_id must be 1, 2, or 3")
        if self.cutoff < 1:
            raise DomainError("the collapsed cutoff must be at least 1")
        self.fam.require(self.cutoff + 1)

    @property
    def source_fam(self) -> Domain:
        return self.fam

    @property
    def target_fam(self) -> Domain:
        return self.fam

    @property
    def _delta(self) -> int:
        return 0 if self.case_id == 1 else 1

    @property
    def top_image_cutoff(self) -> int:
        return self.cutoff if self.case_id in (1, 2) else self.cutoff - 1

    def apply(self, x: Element) -> Element:
        self.fam.require(x.a)
        c = self.cutoff
        if x.a > c + 1:
            raise DomainError(
                f"map defined only on cutoffs <= {c + 1}; got {x.text()}")
        d = self._delta
        if x.a <= c:
            return Element(x.i + d, x.j + d, x.a)
        return Element(x.i + d, x.j + d, self.top_image_cutoff)

    def params(self) -> dict:
        return {"cutoff": self.cutoff, "case": self.case_id}


def element_map_from_json(
    data: dict, source: Domain, target: Domain
) -> ElementMap:
    """Rebuild a map from its ``{"kind", "params"}`` form.

    The JSON form does not embed the domains, so they are supplied by the
    caller and checked against the params where the params constrain them.
    """
    kind = data["kind"]
    params = data.get("params", {})
    if kind == "Identity":
        if source != target:
            raise DomainError("identity map needs equal source and target")
        return Identity(source)
    if kind == "Constant":
        return Constant(source, parse_element(params["value"]))
    if kind == "Retraction":
        return Retraction(source, params["cutoff"])
    if kind == "CollapseCutoff":
        return CollapseCutoff(source, params["cutoff"])
    if kind == "Projection":
        if target is not None:
            raise DomainError("projection targets the bicyclic monoid")
        return Projection(source)
    if kind == "Embedding":
        if source is not None:
            raise DomainError("embedding starts from the bicyclic monoid")
        return Embedding(target, params["cutoff"])
    if kind == "ShiftIso":
        iso = ShiftIso(source, target)
        if (iso.params()["from_min"] != params.get("from_min", iso.params()["from_min"])
                or iso.params()["to_min"] != params.get("to_min", iso.params()["to_min"])):
            raise DomainError("shift params disagree with the given families")
        return iso
    if kind == "TableMap":
        if source is None or target is None:
            raise DomainError(
                "table maps serialize only between cutoff semigroups")
        entries = tuple(
            (parse_element(a), parse_element(b))
            for a, b in params["entries"]
        )
        return TableMap(source, target, entries)
    if kind == "LowerCollapseCandidate":
        return LowerCollapseCandidate(source, params["cutoff"], params["case"])
    raise DomainError(f"unknown map kind {kind!r}")


# ---------------------------------------------------------------------------
# Verification
# ---------------------------------------------------------------------------

def _domain_elements(dom: Domain, ball: BallUniverse) -> list:
    """Ball-bounded element list of a map domain.

    For a cutoff-semigroup domain this is the ball itself (whose family
    must match); for the bicyclic monoid it is all pairs within the ball's
    coordinate radius.
    """
    if dom is None:
        n = ball.N
        return [BicyclicElement(i, j)
                for i in range(n + 1) for j in range(n + 1)]
    if ball.fam != dom:
        raise BallError(
            f"ball family {ball.fam.text()} does not match the map's "
            f"domain {dom.text()}")
    return list(ball.elements)


def verify_homomorphism(
    m: ElementMap,
    ball: BallUniverse,
    *,
    on_escape: str = "error",
) -> Optional[Tuple[AnyElement, AnyElement]]:
    """First pair with ``m(x*y) != m(x)*m(y)`` on the ball, or None.

    Both arguments range over the ball (lexicographic scan, ``x`` outer);
    the products ``x*y`` themselves are taken in the full source domain —
    the ball bounds only the quantifier, so a returned pair is a genuine
    counterexample and ``None`` is an exhaustive ball check.

    A partial map (table maps; the lower-collapse candidates beyond their
    cutoff window) hit outside its domain raises
    :class:`DomainEscapeError` naming the offending element when
    ``on_escape="error"``; ``on_escape="skip"`` skips such pairs instead.
    """
    if on_escape not in ("error", "skip"):
        raise ValueError("on_escape must be 'error' or 'skip'")

    src = m.source_fam
    if (isinstance(m, Retraction) and src is not None
            and ball.fam == src and on_escape == "error"):
        ii, jj, aa = ball.coords
        violation, _ = kernels.retraction_scan(ii, jj, aa, m.cutoff)
        if violation is None:
            return None
        elems = ball.elements
        return (elems[violation[0]], elems[violation[1]])

    elems = _domain_elements(src, ball)
    src_mul = _mul_in(src)
    dst_mul = _mul_in(m.target_fam)
    cache: Dict[AnyElement, AnyElement] = {}

    def image(x: AnyElement) -> AnyElement:
        out = cache.get(x)
        if out is None:
            out = m.apply(x)
            cache[x] = out
        return out

    for x in elems:
        for y in elems:
            try:
                lhs = m.apply(src_mul(x, y))
                rhs = dst_mul(image(x), image(y))
            except DomainError as exc:
                if on_escape == "skip":
                    continue
                raise DomainEscapeError(
                    f"verification needs a value outside the map's domain: "
                    f"{exc}") from exc
            if lhs != rhs:
                return (x, y)
    return None


def verify_retraction(
    cutoff: int, ball: BallUniverse
) -> Tuple[Optional[Tuple[Element, Element]], Tuple[int, int, int, int]]:
    """Kernel-backed sweep of the cutoff-raising map plus case coverage.

    Returns ``(violation, counts)``: the first violating pair (always None —
    the map is a homomorphism; the slot exists so the check is falsifiable)
    and the tally of scanned argument pairs by ``(a1 <= c, a2 <= c)``, in
    the order (low,low), (low,high), (high,low), (high,high) — evidence
    that the sweep exercised all four branch combinations.
    """
    ball.fam.require(cutoff)
    ii, jj, aa = ball.coords
    violation, counts = kernels.retraction_scan(ii, jj, aa, cutoff)
    if violation is None:
        return None, counts
    elems = ball.elements
    return (elems[violation[0]], elems[violation[1]]), counts


def fixed_points(m: ElementMap, ball: BallUniverse) -> set:
    """Ball elements fixed by the map — the retract carrier when the map is
    an idempotent homomorphism."""
    return {x for x in _domain_elements(m.source_fam, ball)
            if m.apply(x) == x}


# ---------------------------------------------------------------------------
# Retract catalog
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class RetractDescriptor:
    """One homomorphic retract of a cutoff semigroup, by kind and parameter.

    Kinds: ``UpperFamily`` (all cutoffs ``>= cutoff``), ``SingleCutoff``
    (the bicyclic copy at one cutoff), ``Identity`` (the whole semigroup),
    ``TrivialConstant`` (one idempotent).  The last two are flagged
    ``trivial``.  ``carrier`` tests membership; ``witness_map`` returns a
    retraction realizing the descriptor.
    """

    kind: str
    fam: NormalizedFamily
    cutoff: Optional[int] = None
    value: Optional[Element] = None

    def __post_init__(self):
        if self.kind in ("UpperFamily", "SingleCutoff"):
            if self.cutoff is None or self.value is not None:
                raise DomainError(f"{self.kind} descriptor needs a cutoff")
            self.fam.require(self.cutoff)
        elif self.kind == "TrivialConstant":
            if self.value is None or self.cutoff is not None:
                raise DomainError(
                    "TrivialConstant descriptor needs an element value")
            if not self.value.is_idempotent:
                raise DomainError("trivial retract value must be idempotent")
            self.fam.require(self.value.a)
        elif self.kind == "Identity":
            if self.cutoff is not None or self.value is not None:
                raise DomainError("Identity descriptor takes no parameter")
        else:
            raise DomainError(f"unknown retract kind {self.kind!r}")

    @property
    def trivial(self) -> bool:
        return self.kind in ("Identity", "TrivialConstant")

    def carrier(self, e: Element) -> bool:
        if e.a not in self.fam:
            return False
        if self.kind == "UpperFamily":
            return e.a >= self.cutoff
        if self.kind == "SingleCutoff":
            return e.a == self.cutoff
        if self.kind == "TrivialConstant":
            return e == self.value
        return True

    def witness_map(self) -> ElementMap:
        if self.kind == "UpperFamily":
            return Retraction(self.fam, self.cutoff)
        if self.kind == "SingleCutoff":
            return CollapseCutoff(self.fam, self.cutoff)
        if self.kind == "TrivialConstant":
            return Constant(self.fam, self.value)
        return Identity(self.fam)

    def text(self) -> str:
        if self.kind in ("UpperFamily", "SingleCutoff"):
            return f"{self.kind}({self.cutoff})"
        if self.kind == "TrivialConstant":
            return f"TrivialConstant({self.value.text()})"
        return "Identity"

    def to_json(self) -> dict:
        out: dict = {"kind": self.kind, "trivial": self.trivial}
        if self.cutoff is not None:
            out["cutoff"] = self.cutoff
        if self.value is not None:
            out["value"] = self.value.text()
        return out


def enumerate_retracts(
    fam: NormalizedFamily, *, bound: int = 8
) -> List[RetractDescriptor]:
    """Every homomorphic retract of the cutoff semigroup, as descriptors.

    The nontrivial retracts are the upper-family sub-semigroups (cutoffs
    ``>= i``) and the single-cutoff bicyclic copies — and nothing else:

    * infinite family: ``UpperFamily(i)`` for ``1 <= i <= bound`` and
      ``SingleCutoff(j)`` for ``0 <= j <= bound`` (the full answer set is
      infinite, so emission stops at ``bound``);
    * finite family with top cutoff ``t >= 2``: ``UpperFamily(1..t)`` and
      ``SingleCutoff(0..t)``;
    * finite family with ``t == 1``: only ``SingleCutoff(0)`` and
      ``SingleCutoff(1)`` (the one upper family coincides with the latter);
    * single-cutoff family: nothing nontrivial.

    Trivial descriptors (``Identity``, plus ``TrivialConstant((0,0,a))``
    for each emitted cutoff) are always appended, flagged ``trivial``.
    Requires a canonical family (least cutoff 0).
    """
    if not fam.is_canonical:
        raise FamilyError("family must be canonical (least cutoff 0)")
    if bound < 0:
        raise DomainError("emission bound must be non-negative")
    top = fam.hi if fam.hi is not None else bound
    out: List[RetractDescriptor] = []
    if fam.hi is None or fam.hi >= 2:
        for i in range(1, top + 1):
            out.append(RetractDescriptor("UpperFamily", fam, cutoff=i))
        for j in range(0, top + 1):
            out.append(RetractDescriptor("SingleCutoff", fam, cutoff=j))
    elif fam.hi == 1:
        out.append(RetractDescriptor("SingleCutoff", fam, cutoff=0))
        out.append(RetractDescriptor("SingleCutoff", fam, cutoff=1))
    out.append(RetractDescriptor("Identity", fam))
    for a in range(0, top + 1):
        out.append(
            RetractDescriptor("TrivialConstant", fam, value=Element(0, 0, a)))
    return out


def retract_descriptor_from_json(
    data: dict, fam: NormalizedFamily
) -> RetractDescriptor:
    """Rebuild a :class:`RetractDescriptor` from its ``to_json`` form."""
    kind = data.get("kind")
    if not isinstance(kind, str):
        raise ParseError("retract descriptor JSON needs a 'kind' string")
    value = data.get("value")
    return RetractDescriptor(
        kind,
        fam,
        cutoff=data.get("cutoff"),
        value=parse_element(value) if value is not None else None,
    )


# ---------------------------------------------------------------------------
# Lower-collapse refutation
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class RefutationWitness:
    """A concrete multiplication failure of one forced candidate map:
    ``lhs = map(x*y) != map(x)*map(y) = rhs``."""

    case_id: int
    x: Element
    y: Element
    lhs: Element
    rhs: Element

    def to_json(self) -> dict:
        return {
            "case_id": self.case_id,
            "x": self.x.text(),
            "y": self.y.text(),
            "lhs": self.lhs.text(),
            "rhs": self.rhs.text(),
        }


def refute_lower_retraction(
    k: int, fam: NormalizedFamily
) -> List[RefutationWitness]:
    """Three verified failures showing the cutoffs-``<= k`` part is not a
    retract once cutoff ``k+1`` is present.

    Each of the three forced candidate maps is evaluated on the canonical
    pair ``x = (1,1,k-1)``, ``y = (0,0,k+1)`` — the diagonal-idempotent
    instantiation that violates multiplicativity in every case — and the
    witness records both sides.  Requires ``k >= 1`` and ``k+1`` in the
    family.
    """
    if k < 1:
        raise DomainError("the collapsed cutoff must be at least 1")
    fam.require(k + 1)
    x = Element(1, 1, k - 1)
    y = Element(0, 0, k + 1)
    out: List[RefutationWitness] = []
    for case_id in (1, 2, 3):
        m = LowerCollapseCandidate(fam, k, case_id)
        lhs = m.apply(multiply(x, y, fam))
        rhs = multiply(m.apply(x), m.apply(y), fam)
        assert lhs != rhs, "canonical pair must violate every forced case"
        out.append(RefutationWitness(case_id, x, y, lhs, rhs))
    return out


# ---------------------------------------------------------------------------
# Isomorphisms
# ---------------------------------------------------------------------------

def shift_isomorphism(
    src: NormalizedFamily, dst: NormalizedFamily
) -> ShiftIso:
    """The cutoff-translation isomorphism between equipotent families.

    Raises :class:`FamilyError` ("not isomorphic") when the families have
    different cutoff counts — by the classification there is then no
    isomorphism at all.
    """
    return ShiftIso(src, dst)


def _as_family(f) -> NormalizedFamily:
    if isinstance(f, NormalizedFamily):
        return f
    return family_canonicalize(f)


def families_isomorphic(f1, f2, *, ball_radius: int = 4) -> bool:
    """Whether two cutoff semigroups are isomorphic.

    Accepts families or raw cutoff iterables (canonicalized, so malformed
    sets raise :class:`FamilyError`).  Three conditions are evaluated and
    required to agree: equal cutoff counts; one family being an integer
    translate of the other; and, when those hold, the explicit translation
    map verifying as a bijective homomorphism on a ball.  Returns their
    common value.
    """
    fam1 = _as_family(f1)
    fam2 = _as_family(f2)
    equal_size = fam1.equipotent(fam2)
    translate = fam1.span == fam2.span
    constructed = False
    if equal_size:
        iso = ShiftIso(fam1, fam2)
        a_src = fam1.hi if fam1.hi is not None else 3
        src_ball = make_ball(fam1, ball_radius, a_src)
        a_dst = a_src - fam1.lo + fam2.lo
        dst_ball = make_ball(fam2, ball_radius, a_dst)
        images = [iso.apply(x) for x in src_ball.elements]
        constructed = (
            verify_homomorphism(iso, src_ball) is None
            and len(set(images)) == len(images)
            and set(images) == set(dst_ball.elements)
        )
    if not (equal_size == translate == constructed):
        raise DomainError(
            "isomorphism criteria disagree — this cannot happen for "
            "interval families")
    return equal_size


# ---------------------------------------------------------------------------
# Generator-constrained search
# ---------------------------------------------------------------------------

def search_generator_consistent_maps(
    f1: NormalizedFamily,
    f2: NormalizedFamily,
    N: int,
    *,
    cutoff_bound: Optional[int] = None,
) -> List[TableMap]:
    """Exhaustive ball search for bijective homomorphisms, by generator
    images.

    Every element factors as ``q^i * e_a * p^j`` for the generating data
    ``p = (0,1,lo)``, ``q = p^{-1}`` and the cutoff idempotents
    ``e_a = (0,0,a)``, so a candidate map is determined by the images of
    ``p`` and of each ``e_a`` (the image of ``q`` is forced to the inverse
    of ``p``'s image, and ``e_lo``'s image to ``p_img * q_img``).  A
    candidate survives when its induced table is a bijection between the
    two balls whose idempotent images descend in the natural order, and is
    multiplicative on every pair whose source product stays in the ball
    (escaping products are skipped, not failed).

    The survivors on a ball of radius ``N >= 4`` are returned as table
    maps.  The classification predicts exactly one survivor (the cutoff
    translation) for equipotent families and none otherwise; the search
    confirms that at radius ``N`` — bounded evidence, not a proof for the
    infinite semigroup.
    """
    if not f1.is_canonical or not f2.is_canonical:
        raise FamilyError("families must be canonical (least cutoff 0)")
    if N < 4:
        raise DomainError("search ball radius must be at least 4")
    if cutoff_bound is None:
        a1 = f1.hi if f1.hi is not None else 3
        a2 = f2.hi if f2.hi is not None else 3
    else:
        a1 = cutoff_bound if f1.hi is None else min(cutoff_bound, f1.hi)
        a2 = cutoff_bound if f2.hi is None else min(cutoff_bound, f2.hi)
    ball1 = make_ball(f1, N, a1)
    ball2 = make_ball(f2, N, a2)
    n1 = len(ball1)
    n2 = len(ball2)
    if n1 != n2:
        return []

    t2 = ball2.product_index_table
    elems2 = ball2.elements
    idem2 = [ball2.index_of(e) for e in ball2.idempotents()]
    src_cutoffs = list(ball1.cutoffs)

    def powers(idx: int) -> Optional[List[int]]:
        """Ball indexes of x^1, ..., x^N, or None when a power escapes."""
        out = [idx]
        cur = idx
        for _ in range(N - 1):
            cur = t2[cur * n2 + idx]
            if cur < 0:
                return None
            out.append(cur)
        return out

    survivors: List[TableMap] = []

    for p_idx in range(n2):
        p_img = elems2[p_idx]
        q_img = p_img.inverse()
        try:
            q_idx = ball2.index_of(q_img)
        except BallError:
            continue
        p_pows = powers(p_idx)
        q_pows = powers(q_idx)
        if p_pows is None or q_pows is None:
            continue
        e_lo_idx = t2[p_idx * n2 + q_idx]
        if e_lo_idx < 0:
            continue

        def extend(chain: List[int]) -> None:
            if len(chain) < len(src_cutoffs):
                prev = elems2[chain[-1]]
                for cand in idem2:
                    e = elems2[cand]
                    if e != prev and idempotent_leq(e, prev, f2):
                        extend(chain + [cand])
                return
            # full assignment: build the induced table by word evaluation
            # (powers lists hold x^1..x^N at offsets 0..N-1)
            image = [0] * n1
            for idx1, x in enumerate(ball1.elements):
                e_idx = chain[src_cutoffs.index(x.a)]
                if x.i > 0:
                    mid = t2[q_pows[x.i - 1] * n2 + e_idx]
                else:
                    mid = e_idx
                if mid < 0:
                    return
                if x.j > 0:
                    full = t2[mid * n2 + p_pows[x.j - 1]]
                else:
                    full = mid
                if full < 0:
                    return
                image[idx1] = full
            if len(set(image)) != n1:
                return
            t1 = ball1.product_index_table
            for xi in range(n1):
                mxi = image[xi]
                for yi in range(n1):
                    prod = t1[xi * n1 + yi]
                    if prod < 0:
                        continue
                    if t2[mxi * n2 + image[yi]] != image[prod]:
                        return
            survivors.append(TableMap(
                f1, f2,
                tuple((ball1.elements[idx1], elems2[image[idx1]])
                      for idx1 in range(n1)),
            ))

        extend([e_lo_idx])
    return survivors
