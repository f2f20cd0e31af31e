"""Command-line interface for the cutoff-semigroup toolkit.

All element and family text on the wire uses original (un-normalized)
cutoff coordinates; translation to the library's canonical coordinates
happens exactly once at this boundary.  Output is deterministic: identical
invocations produce byte-identical stdout (lists are sorted in canonical
element order, DOT nodes alphabetically).

Exit codes: 0 success, 1 computation-level error, 2 usage or parse error,
3 verify-suite failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import List, Optional, Tuple

from .core import (
    BicextError,
    Element,
    NormalizedFamily,
    ParseError,
    hasse_covers,
    inverse,
    multiply,
    natural_leq,
    parse_element,
    parse_family,
    sigma_class,
)
from .balls import make_ball
from .congruence import congruence_closure
from .morphisms import (
    RetractDescriptor,
    enumerate_retracts,
    refute_lower_retraction,
    search_generator_consistent_maps,
    shift_isomorphism,
)
from .suites import SUITE_NAMES, run_all, run_suite

__all__ = ["main"]

EXIT_OK = 0
EXIT_COMPUTATION = 1
EXIT_USAGE = 2
EXIT_VERIFY = 3


class _UsageError(Exception):
    """Bad command-line input (malformed family/element/pairs text)."""


def _family(text: str) -> NormalizedFamily:
    try:
        return parse_family(text)
    except BicextError as exc:
        raise _UsageError(f"bad family {text!r}: {exc}") from exc


def _element_in(fam: NormalizedFamily, text: str) -> Element:
    """Wire element -> internal coordinates (cutoff membership enforced)."""
    try:
        e = parse_element(text)
    except ParseError as exc:
        raise _UsageError(f"bad element {text!r}: {exc}") from exc
    return Element(e.i, e.j, fam.to_internal(e.a))


def _element_out(fam: NormalizedFamily, e: Element) -> str:
    """Internal element -> wire text in original coordinates."""
    return Element(e.i, e.j, fam.to_external(e.a)).text()


def _default_amax(fam: NormalizedFamily, given: Optional[int]) -> int:
    if given is not None:
        return fam.to_internal(given)
    if fam.span is None:
        return 4
    return min(fam.span, 4)


def _parse_pairs(fam: NormalizedFamily, text: str) -> List[Tuple[Element, Element]]:
    pairs = []
    for chunk in text.split(";"):
        chunk = chunk.strip()
        if not chunk:
            continue
        halves = chunk.split("~")
        if len(halves) != 2:
            raise _UsageError(
                f"bad pair {chunk!r}: expected 'x~y' with one '~'")
        pairs.append((_element_in(fam, halves[0]),
                      _element_in(fam, halves[1])))
    if not pairs:
        raise _UsageError("no generator pairs given")
    return pairs


def _descriptor_text(fam: NormalizedFamily, d: RetractDescriptor) -> str:
    if d.kind in ("UpperFamily", "SingleCutoff"):
        return f"{d.kind}({fam.to_external(d.cutoff)})"
    if d.kind == "TrivialConstant":
        return f"TrivialConstant({_element_out(fam, d.value)})"
    return "Identity"


def _descriptor_json(fam: NormalizedFamily, d: RetractDescriptor) -> dict:
    out: dict = {"kind": d.kind, "trivial": d.trivial}
    if d.cutoff is not None:
        out["cutoff"] = fam.to_external(d.cutoff)
    if d.value is not None:
        out["value"] = _element_out(fam, d.value)
    return out


def _print_json(payload) -> None:
    print(json.dumps(payload, indent=2, sort_keys=True))


# ---------------------------------------------------------------------------
# Verb handlers
# ---------------------------------------------------------------------------

def _cmd_mul(args) -> int:
    fam = _family(args.family)
    x = _element_in(fam, args.elements[0])
    y = _element_in(fam, args.elements[1])
    print(_element_out(fam, multiply(x, y, fam)))
    return EXIT_OK


def _cmd_inv(args) -> int:
    fam = _family(args.family)
    x = _element_in(fam, args.elements[0])
    print(_element_out(fam, inverse(x)))
    return EXIT_OK


def _cmd_leq(args) -> int:
    fam = _family(args.family)
    s = _element_in(fam, args.elements[0])
    t = _element_in(fam, args.elements[1])
    print("true" if natural_leq(s, t, fam) else "false")
    return EXIT_OK


def _cmd_sigma_class(args) -> int:
    fam = _family(args.family)
    x = _element_in(fam, args.elements[0])
    print(sigma_class(x).d)
    return EXIT_OK


def _cmd_hasse(args) -> int:
    fam = _family(args.family)
    ball = make_ball(fam, args.ball, _default_amax(fam, args.amax))
    covers = sorted(hasse_covers(ball))
    if args.dot:
        print("digraph hasse {")
        for e in sorted(ball.idempotents()):
            print(f'  "{_element_out(fam, e)}";')
        for upper, lower in covers:
            print(f'  "{_element_out(fam, upper)}" -> '
                  f'"{_element_out(fam, lower)}";')
        print("}")
    else:
        for upper, lower in covers:
            print(f"{_element_out(fam, upper)} -> {_element_out(fam, lower)}")
    return EXIT_OK


def _cmd_cong(args) -> int:
    fam = _family(args.family)
    ball = make_ball(fam, args.ball, _default_amax(fam, args.amax))
    pairs = _parse_pairs(fam, args.pairs)
    part = congruence_closure(pairs, ball)
    payload = part.to_json()
    if args.json:
        _print_json(payload)
        return EXIT_OK
    for cls in payload["classes"]:
        print("class:", " ".join(cls))
    verdict = payload["verdict"]
    print("idempotents_collapsed:",
          "true" if verdict["idempotents_collapsed"] else "false")
    print("group_congruence_on_ball:",
          "true" if verdict["group_congruence_on_ball"] else "false")
    restrictions = " ".join(
        f"{a}={'true' if v else 'false'}"
        for a, v in sorted(verdict["bicyclic_restrictions"].items(),
                           key=lambda kv: int(kv[0])))
    print("bicyclic_restrictions:", restrictions)
    print("consistent:", "true" if verdict["consistent"] else "false")
    return EXIT_OK


def _cmd_retracts(args) -> int:
    fam = _family(args.family)
    descriptors = enumerate_retracts(fam, bound=args.bound)
    if not args.all:
        descriptors = [d for d in descriptors if not d.trivial]
    if args.json:
        _print_json({
            "family": fam.text(),
            "retracts": [_descriptor_json(fam, d) for d in descriptors],
        })
        return EXIT_OK
    print(", ".join(_descriptor_text(fam, d) for d in descriptors))
    return EXIT_OK


def _cmd_refute(args) -> int:
    fam = _family(args.family)
    witnesses = refute_lower_retraction(fam.to_internal(args.k), fam)
    for w in witnesses:
        print(f"case {w.case_id}: x={_element_out(fam, w.x)} "
              f"y={_element_out(fam, w.y)} "
              f"map(x*y)={_element_out(fam, w.lhs)} != "
              f"map(x)*map(y)={_element_out(fam, w.rhs)}")
    return EXIT_OK


def _cmd_iso(args) -> int:
    fam1 = _family(args.family)
    fam2 = _family(args.other)
    isomorphic = fam1.equipotent(fam2)
    if args.json:
        payload = {
            "family1": fam1.text(),
            "family2": fam2.text(),
            "isomorphic": isomorphic,
            "map": shift_isomorphism(fam1, fam2).to_json()
            if isomorphic else None,
        }
        _print_json(payload)
        if args.map and not isomorphic:
            return EXIT_COMPUTATION
        return EXIT_OK
    print("isomorphic:", "true" if isomorphic else "false")
    if isomorphic:
        params = shift_isomorphism(fam1, fam2).params()
        print(f"map: cutoff translation from_min={params['from_min']} "
              f"to_min={params['to_min']}")
    elif args.map:
        print("no isomorphism exists: families have different cutoff counts",
              file=sys.stderr)
        return EXIT_COMPUTATION
    return EXIT_OK


def _cmd_automorphisms(args) -> int:
    fam = _family(args.family)
    survivors = search_generator_consistent_maps(fam, fam, args.ball)
    print(f"automorphisms found: {len(survivors)}")
    identity = shift_isomorphism(fam, fam)
    for m in survivors:
        if all(m.apply(x) == identity.apply(x) for x, _ in m.entries):
            print("identity")
        else:
            print("non-translation map on "
                  f"{len(m.entries)} ball elements")
    return EXIT_OK


def _cmd_verify(args) -> int:
    fam = _family(args.family)
    amax = _default_amax(fam, args.amax)
    if args.suite == "all":
        results = run_all(fam, args.ball, amax)
    else:
        if args.suite not in SUITE_NAMES:
            raise _UsageError(
                f"unknown suite {args.suite!r}; choose from "
                f"{', '.join(SUITE_NAMES)} or 'all'")
        results = [run_suite(args.suite, fam, args.ball, amax)]
    failed = False
    for r in results:
        status = "ok" if r.passed else "FAIL"
        print(f"{status} {r.name}: {r.detail} [{r.checks} checks]")
        failed = failed or not r.passed
    return EXIT_VERIFY if failed else EXIT_OK


# ---------------------------------------------------------------------------
# Parser
# ---------------------------------------------------------------------------

class _ArgumentParser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _build_parser() -> argparse.ArgumentParser:
    parser = _ArgumentParser(
        prog="bicext",
        description="Exact computations in bicyclic extensions over "
                    "interval cutoff families.",
    )
    sub = parser.add_subparsers(dest="verb", required=True)

    def add(verb, handler, help_text, *, elements=0, ball=False):
        p = sub.add_parser(verb, help=help_text)
        p.add_argument("--family", required=True,
                       help="cutoff family, e.g. 0..3 or 0..inf")
        if elements:
            p.add_argument("elements", nargs=elements, metavar="ELEMENT",
                           help="element text like '(1,3,2)'")
        if ball:
            p.add_argument("--ball", type=int, default=6,
                           help="ball radius (default 6)")
            p.add_argument("--amax", type=int, default=None,
                           help="largest cutoff in the ball "
                                "(default: min(family span, 4))")
        p.set_defaults(handler=handler)
        return p

    add("mul", _cmd_mul, "multiply two elements", elements=2)
    add("inv", _cmd_inv, "invert an element", elements=1)
    add("leq", _cmd_leq, "natural partial order test", elements=2)
    add("sigma-class", _cmd_sigma_class,
        "least-group-congruence class label", elements=1)

    p = add("hasse", _cmd_hasse,
            "covering pairs of the idempotent order on a ball", ball=True)
    p.add_argument("--dot", action="store_true",
                   help="emit a graphviz digraph")

    p = add("cong", _cmd_cong,
            "congruence closure of generator pairs on a ball", ball=True)
    p.add_argument("--pairs", required=True,
                   help="semicolon-separated generator pairs, "
                        "e.g. '(0,0,0)~(1,1,0);(0,0,1)~(0,0,2)'")
    p.add_argument("--json", action="store_true", help="JSON output")

    p = add("retracts", _cmd_retracts, "enumerate homomorphic retracts")
    p.add_argument("--all", action="store_true",
                   help="include trivial retracts")
    p.add_argument("--bound", type=int, default=8,
                   help="emission bound for infinite families (default 8)")
    p.add_argument("--json", action="store_true", help="JSON output")

    p = add("refute", _cmd_refute,
            "refute the lower-cutoff collapse candidates at k")
    p.add_argument("--k", type=int, required=True,
                   help="collapse threshold (original coordinates)")

    p = add("iso", _cmd_iso, "isomorphism test between two families")
    p.add_argument("--other", required=True,
                   help="second cutoff family")
    p.add_argument("--map", action="store_true",
                   help="demand the translation map (exit 1 if none)")
    p.add_argument("--json", action="store_true", help="JSON output")

    p = add("automorphisms", _cmd_automorphisms,
            "ball search for self-isomorphisms")
    p.add_argument("--ball", type=int, default=5,
                   help="search ball radius (default 5)")

    p = add("verify", _cmd_verify, "run invariant suites", ball=True)
    p.add_argument("--suite", default="all",
                   help="suite name or 'all' (default)")
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    try:
        return args.handler(args)
    except _UsageError as exc:
        print(f"bicext: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except BicextError as exc:
        print(f"bicext: {exc}", file=sys.stderr)
        return EXIT_COMPUTATION


if __name__ == "__main__":
    sys.exit(main())
