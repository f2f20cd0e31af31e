"""Element maps, retract catalog, lower-collapse refutation, isomorphisms."""

import pytest
from hypothesis import given, strategies as st

from bicext.core import (
    BallError,
    BicyclicElement,
    DomainError,
    DomainEscapeError,
    Element,
    FamilyError,
    NormalizedFamily,
    multiply,
    natural_leq,
    parse_family,
)
from bicext.balls import make_ball
from bicext.morphisms import (
    CollapseCutoff,
    Constant,
    Embedding,
    Identity,
    LowerCollapseCandidate,
    Projection,
    RefutationWitness,
    Retraction,
    RetractDescriptor,
    ShiftIso,
    TableMap,
    element_map_from_json,
    enumerate_retracts,
    families_isomorphic,
    fixed_points,
    refute_lower_retraction,
    retract_descriptor_from_json,
    search_generator_consistent_maps,
    shift_isomorphism,
    verify_homomorphism,
    verify_retraction,
)

FAM03 = parse_family("0..3")

coords = st.integers(min_value=0, max_value=6)
elements03 = st.builds(Element, coords, coords, st.integers(0, 3))


class TestBasicMaps:
    def test_identity(self):
        m = Identity(FAM03)
        e = Element(2, 1, 3)
        assert m(e) == e
        assert m.params() == {}
        assert m.text() == "Identity"
        assert m.source_fam == FAM03 and m.target_fam == FAM03

    def test_identity_rejects_foreign_cutoff(self):
        with pytest.raises(DomainError):
            Identity(FAM03).apply(Element(0, 0, 9))

    def test_constant(self):
        v = Element(0, 0, 2)
        m = Constant(FAM03, v)
        assert m(Element(5, 1, 0)) == v
        assert m.params() == {"value": "(0,0,2)"}
        assert m.text() == "Constant((0,0,2))"

    def test_constant_value_must_be_idempotent(self):
        with pytest.raises(DomainError, match="idempotent"):
            Constant(FAM03, Element(0, 1, 0))

    def test_constant_value_must_be_in_family(self):
        with pytest.raises(DomainError):
            Constant(FAM03, Element(0, 0, 7))

    def test_retraction_apply(self):
        m = Retraction(FAM03, 2)
        assert m(Element(1, 4, 0)) == Element(1, 4, 2)
        assert m(Element(1, 4, 2)) == Element(1, 4, 2)
        assert m(Element(1, 4, 3)) == Element(1, 4, 3)
        assert m.params() == {"cutoff": 2}
        assert m.text() == "Retraction(2)"

    def test_retraction_cutoff_must_be_member(self):
        with pytest.raises(DomainError):
            Retraction(FAM03, 9)

    @given(elements03, st.integers(0, 3))
    def test_retraction_is_cutoff_max(self, e, c):
        assert Retraction(FAM03, c)(e) == Element(e.i, e.j, max(e.a, c))

    @given(elements03, st.integers(0, 3))
    def test_retraction_moves_down_and_is_idempotent(self, e, c):
        m = Retraction(FAM03, c)
        img = m(e)
        assert natural_leq(img, e, FAM03)
        assert m(img) == img

    @given(elements03, elements03, st.integers(0, 3))
    def test_retraction_multiplicative_everywhere(self, x, y, c):
        m = Retraction(FAM03, c)
        assert m(multiply(x, y, FAM03)) == multiply(m(x), m(y), FAM03)

    def test_collapse_cutoff_apply(self):
        m = CollapseCutoff(FAM03, 1)
        assert m(Element(2, 5, 3)) == Element(2, 5, 1)
        assert m(Element(2, 5, 0)) == Element(2, 5, 1)
        assert m.params() == {"cutoff": 1}

    @given(elements03, elements03, st.integers(0, 3))
    def test_collapse_cutoff_multiplicative(self, x, y, c):
        m = CollapseCutoff(FAM03, c)
        assert m(multiply(x, y, FAM03)) == multiply(m(x), m(y), FAM03)


class TestProjectionEmbedding:
    def test_projection_forgets_cutoff(self):
        m = Projection(FAM03)
        assert m(Element(2, 1, 3)) == BicyclicElement(2, 1)
        assert m.source_fam == FAM03 and m.target_fam is None

    def test_embedding_pins_cutoff(self):
        m = Embedding(FAM03, 2)
        assert m(BicyclicElement(4, 1)) == Element(4, 1, 2)
        assert m.source_fam is None and m.target_fam == FAM03
        assert m.params() == {"cutoff": 2}

    def test_projection_then_embedding_sections(self):
        proj = Projection(FAM03)
        emb = Embedding(FAM03, 3)
        b = BicyclicElement(2, 5)
        assert proj(emb(b)) == b

    def test_both_are_homomorphisms_on_ball(self):
        ball = make_ball(FAM03, 4, 3)
        assert verify_homomorphism(Projection(FAM03), ball) is None
        assert verify_homomorphism(Embedding(FAM03, 1), ball) is None


class TestShiftIso:
    def test_apply_translates_cutoffs(self):
        src = NormalizedFamily(0, 2)
        dst = NormalizedFamily(1, 3)
        m = ShiftIso(src, dst)
        assert m(Element(4, 0, 2)) == Element(4, 0, 3)
        assert m.params() == {"from_min": 0, "to_min": 1}

    def test_shifted_wire_families_translate_internally(self):
        # Families entering as "0..2" and "2..4" are both canonical after
        # normalization, so the translation acts on the recorded offsets.
        m = ShiftIso(parse_family("0..2"), parse_family("2..4"))
        assert m(Element(1, 1, 0)) == Element(1, 1, 0)
        assert m.params() == {"from_min": 0, "to_min": 2}
        assert m.text() == "ShiftIso(0,2)"

    def test_reverse_round_trips(self):
        src = NormalizedFamily(0, 3)
        dst = NormalizedFamily(2, 5)
        m = ShiftIso(src, dst)
        r = m.reverse()
        assert r == ShiftIso(dst, src)
        e = Element(1, 2, 3)
        assert r(m(e)) == e

    def test_non_equipotent_rejected(self):
        with pytest.raises(FamilyError, match="not isomorphic"):
            ShiftIso(parse_family("0..1"), parse_family("0..2"))

    @given(st.builds(Element, coords, coords, st.integers(0, 3)),
           st.builds(Element, coords, coords, st.integers(0, 3)))
    def test_multiplicative_across_offset(self, x, y):
        src = NormalizedFamily(0, 3)
        dst = NormalizedFamily(2, 5)
        m = ShiftIso(src, dst)
        assert m(multiply(x, y, src)) == multiply(m(x), m(y), dst)


class TestTableMap:
    def _identity_table(self, ball):
        return tuple((e, e) for e in ball.elements)

    def test_entries_are_sorted(self):
        fam = parse_family("0..0")
        a, b = Element(1, 0, 0), Element(0, 1, 0)
        m = TableMap(fam, fam, ((a, a), (b, b)))
        assert m.entries == ((b, b), (a, a))

    def test_duplicate_source_rejected(self):
        fam = parse_family("0..0")
        e = Element(0, 0, 0)
        with pytest.raises(DomainError, match="twice"):
            TableMap(fam, fam, ((e, e), (e, Element(1, 1, 0))))

    def test_apply_outside_table_rejected(self):
        fam = parse_family("0..0")
        e = Element(0, 0, 0)
        m = TableMap(fam, fam, ((e, e),))
        with pytest.raises(DomainError, match="not defined"):
            m(Element(2, 2, 0))

    def test_text_counts_entries(self):
        fam = parse_family("0..0")
        ball = make_ball(fam, 2, 0)
        m = TableMap(fam, fam, self._identity_table(ball))
        assert m.text() == f"TableMap({len(ball)} entries)"

    def test_identity_table_is_hom_modulo_escapes(self):
        fam = parse_family("0..0")
        ball = make_ball(fam, 3, 0)
        m = TableMap(fam, fam, self._identity_table(ball))
        assert verify_homomorphism(m, ball, on_escape="skip") is None

    def test_escaping_products_raise_by_default(self):
        fam = parse_family("0..0")
        ball = make_ball(fam, 3, 0)
        m = TableMap(fam, fam, self._identity_table(ball))
        with pytest.raises(DomainEscapeError, match="outside the map's domain"):
            verify_homomorphism(m, ball)

    def test_swapping_two_images_breaks_multiplicativity(self):
        fam = parse_family("0..0")
        ball = make_ball(fam, 3, 0)
        swap = {Element(0, 0, 0): Element(1, 1, 0),
                Element(1, 1, 0): Element(0, 0, 0)}
        m = TableMap(fam, fam,
                     tuple((e, swap.get(e, e)) for e in ball.elements))
        bad = verify_homomorphism(m, ball, on_escape="skip")
        assert bad is not None
        x, y = bad
        assert m(multiply(x, y, fam)) != multiply(m(x), m(y), fam)


class TestLowerCollapseCandidate:
    def test_case_one_fixes_lower_layers(self):
        m = LowerCollapseCandidate(FAM03, 1, 1)
        assert m(Element(2, 4, 0)) == Element(2, 4, 0)
        assert m(Element(2, 4, 1)) == Element(2, 4, 1)
        assert m(Element(2, 4, 2)) == Element(2, 4, 1)

    def test_case_two_shifts_diagonally(self):
        m = LowerCollapseCandidate(FAM03, 1, 2)
        assert m(Element(2, 4, 0)) == Element(3, 5, 0)
        assert m(Element(2, 4, 2)) == Element(3, 5, 1)

    def test_case_three_drops_one_lower(self):
        m = LowerCollapseCandidate(FAM03, 1, 3)
        assert m(Element(2, 4, 1)) == Element(3, 5, 1)
        assert m(Element(2, 4, 2)) == Element(3, 5, 0)

    def test_domain_stops_above_collapsed_layer(self):
        m = LowerCollapseCandidate(FAM03, 1, 1)
        with pytest.raises(DomainError, match="cutoffs <= 2"):
            m(Element(0, 0, 3))

    def test_constructor_validation(self):
        with pytest.raises(DomainError):
            LowerCollapseCandidate(FAM03, 1, 4)
        with pytest.raises(DomainError):
            LowerCollapseCandidate(FAM03, 0, 1)
        with pytest.raises(DomainError):
            LowerCollapseCandidate(parse_family("0..1"), 1, 1)

    def test_params(self):
        m = LowerCollapseCandidate(FAM03, 2, 3)
        assert m.params() == {"cutoff": 2, "case": 3}

    @pytest.mark.parametrize("case_id", [1, 2, 3])
    def test_no_case_is_a_homomorphism(self, case_id):
        fam = parse_family("0..2")
        ball = make_ball(fam, 4, 2)
        m = LowerCollapseCandidate(fam, 1, case_id)
        bad = verify_homomorphism(m, ball, on_escape="skip")
        assert bad is not None
        x, y = bad
        assert m(multiply(x, y, fam)) != multiply(m(x), m(y), fam)


class TestVerifyHomomorphism:
    @pytest.mark.parametrize("spec,A", [("0..0", 0), ("0..2", 2),
                                        ("0..inf", 3)])
    def test_retractions_verify_on_every_cutoff(self, spec, A):
        fam = parse_family(spec)
        ball = make_ball(fam, 5, A)
        for k in ball.cutoffs:
            assert verify_homomorphism(Retraction(fam, k), ball) is None

    def test_fast_path_and_generic_scan_agree(self):
        fam = parse_family("0..2")
        ball = make_ball(fam, 4, 2)
        m = Retraction(fam, 1)
        assert verify_homomorphism(m, ball) is None
        assert verify_homomorphism(m, ball, on_escape="skip") is None

    def test_on_escape_validated(self):
        ball = make_ball(FAM03, 3, 3)
        with pytest.raises(ValueError):
            verify_homomorphism(Identity(FAM03), ball, on_escape="maybe")

    def test_ball_family_must_match(self):
        ball = make_ball(parse_family("0..1"), 3, 1)
        with pytest.raises(BallError, match="does not match"):
            verify_homomorphism(Identity(FAM03), ball)

    def test_verify_retraction_counts_all_four_cases(self):
        ball = make_ball(FAM03, 5, 3)
        violation, counts = verify_retraction(1, ball)
        assert violation is None
        assert len(counts) == 4
        assert all(c > 0 for c in counts)
        assert sum(counts) == len(ball) ** 2

    def test_verify_retraction_checks_membership(self):
        ball = make_ball(FAM03, 4, 3)
        with pytest.raises(DomainError):
            verify_retraction(9, ball)


class TestFixedPoints:
    def test_retraction_fixes_upper_layers(self):
        ball = make_ball(FAM03, 4, 3)
        fixed = fixed_points(Retraction(FAM03, 2), ball)
        assert fixed == {e for e in ball.elements if e.a >= 2}

    def test_identity_fixes_everything(self):
        ball = make_ball(FAM03, 3, 3)
        assert fixed_points(Identity(FAM03), ball) == set(ball.elements)

    def test_constant_fixes_only_its_value(self):
        ball = make_ball(FAM03, 3, 3)
        v = Element(0, 0, 1)
        assert fixed_points(Constant(FAM03, v), ball) == {v}


class TestRetractCatalog:
    def test_two_cutoff_family_catalog(self):
        fam = parse_family("0..1")
        descs = enumerate_retracts(fam)
        nontrivial = [d.text() for d in descs if not d.trivial]
        assert nontrivial == ["SingleCutoff(0)", "SingleCutoff(1)"]
        trivial = [d.text() for d in descs if d.trivial]
        assert trivial == ["Identity", "TrivialConstant((0,0,0))",
                           "TrivialConstant((0,0,1))"]

    def test_four_cutoff_family_catalog(self):
        descs = enumerate_retracts(FAM03)
        nontrivial = [d.text() for d in descs if not d.trivial]
        assert nontrivial == [
            "UpperFamily(1)", "UpperFamily(2)", "UpperFamily(3)",
            "SingleCutoff(0)", "SingleCutoff(1)", "SingleCutoff(2)",
            "SingleCutoff(3)",
        ]

    def test_infinite_family_catalog_is_bounded(self):
        fam = parse_family("0..inf")
        descs = enumerate_retracts(fam, bound=4)
        nontrivial = [d.text() for d in descs if not d.trivial]
        assert nontrivial == (
            [f"UpperFamily({i})" for i in range(1, 5)]
            + [f"SingleCutoff({j})" for j in range(5)]
        )

    def test_single_cutoff_family_has_only_trivial_retracts(self):
        fam = parse_family("0..0")
        descs = enumerate_retracts(fam)
        assert [d.text() for d in descs] == ["Identity",
                                             "TrivialConstant((0,0,0))"]

    def test_catalog_has_no_duplicates(self):
        descs = enumerate_retracts(FAM03)
        assert len(descs) == len(set(descs))

    def test_non_canonical_family_rejected(self):
        with pytest.raises(FamilyError, match="canonical"):
            enumerate_retracts(NormalizedFamily(1, 3))

    def test_witnesses_are_homomorphic_idempotent_with_matching_carrier(self):
        ball = make_ball(FAM03, 5, 3)
        for desc in enumerate_retracts(FAM03):
            m = desc.witness_map()
            assert verify_homomorphism(m, ball) is None
            fixed = fixed_points(m, ball)
            assert fixed == {e for e in ball.elements if desc.carrier(e)}
            for e in ball.elements:
                assert m(m(e)) == m(e)

    def test_descriptor_validation(self):
        with pytest.raises(DomainError, match="unknown retract kind"):
            RetractDescriptor("Sideways", FAM03)
        with pytest.raises(DomainError, match="needs a cutoff"):
            RetractDescriptor("UpperFamily", FAM03)
        with pytest.raises(DomainError):
            RetractDescriptor("TrivialConstant", FAM03,
                              value=Element(0, 1, 0))
        with pytest.raises(DomainError, match="no parameter"):
            RetractDescriptor("Identity", FAM03, cutoff=1)

    def test_descriptor_serialization_round_trip(self):
        for desc in enumerate_retracts(FAM03):
            data = desc.to_json()
            assert data["trivial"] == desc.trivial
            assert retract_descriptor_from_json(data, FAM03) == desc

    def test_descriptor_json_needs_kind(self):
        from bicext.core import ParseError
        with pytest.raises(ParseError, match="kind"):
            retract_descriptor_from_json({"cutoff": 1}, FAM03)


class TestLowerCollapseRefutation:
    def test_canonical_first_witness(self):
        witnesses = refute_lower_retraction(1, FAM03)
        assert witnesses[0] == RefutationWitness(
            1, Element(1, 1, 0), Element(0, 0, 2),
            Element(1, 1, 1), Element(1, 1, 0))

    @pytest.mark.parametrize("spec,ks", [("0..3", [1, 2]),
                                         ("0..inf", [1, 2, 3, 4, 5])])
    def test_every_case_fails_and_witnesses_recheck(self, spec, ks):
        fam = parse_family(spec)
        for k in ks:
            witnesses = refute_lower_retraction(k, fam)
            assert [w.case_id for w in witnesses] == [1, 2, 3]
            for w in witnesses:
                m = LowerCollapseCandidate(fam, k, w.case_id)
                assert w.lhs == m(multiply(w.x, w.y, fam))
                assert w.rhs == multiply(m(w.x), m(w.y), fam)
                assert w.lhs != w.rhs
                assert w.lhs.a <= k and w.rhs.a <= k

    def test_witness_serialization(self):
        w = refute_lower_retraction(1, FAM03)[0]
        assert w.to_json() == {
            "case_id": 1, "x": "(1,1,0)", "y": "(0,0,2)",
            "lhs": "(1,1,1)", "rhs": "(1,1,0)",
        }

    def test_bad_arguments(self):
        with pytest.raises(DomainError):
            refute_lower_retraction(0, FAM03)
        with pytest.raises(DomainError):
            refute_lower_retraction(3, FAM03)  # needs cutoff 4


class TestIsomorphism:
    def test_shift_isomorphism_constructs_translation(self):
        m = shift_isomorphism(parse_family("0..2"), parse_family("2..4"))
        assert isinstance(m, ShiftIso)

    @pytest.mark.parametrize("f1,f2,expect", [
        ("0..2", "2..4", True),
        ("0..0", "5..5", True),
        ("0..inf", "3..inf", True),
        ("0..1", "0..2", False),
        ("0..3", "0..inf", False),
    ])
    def test_families_isomorphic_iff_equipotent(self, f1, f2, expect):
        assert families_isomorphic(parse_family(f1), parse_family(f2)) \
            is expect

    def test_accepts_raw_cutoff_iterables(self):
        assert families_isomorphic([0, 1, 2], [4, 5, 6]) is True
        with pytest.raises(FamilyError, match="missing"):
            families_isomorphic([0, 2], [0, 1])

    def test_search_finds_exactly_the_translation(self):
        fam = parse_family("0..0")
        survivors = search_generator_consistent_maps(fam, fam, 5)
        assert len(survivors) == 1
        (m,) = survivors
        ball = make_ball(fam, 5, 0)
        assert all(m(e) == e for e in ball.elements)

    def test_search_multi_cutoff_self_map(self):
        fam = parse_family("0..2")
        survivors = search_generator_consistent_maps(fam, fam, 5)
        assert len(survivors) == 1
        (m,) = survivors
        ball = make_ball(fam, 5, 2)
        assert all(m(e) == e for e in ball.elements)
        assert verify_homomorphism(m, ball, on_escape="skip") is None
        images = [m(e) for e in ball.elements]
        assert len(set(images)) == len(images)

    def test_search_returns_nothing_across_sizes(self):
        f1 = parse_family("0..0")
        f2 = parse_family("0..1")
        assert search_generator_consistent_maps(f1, f2, 4) == []

    def test_search_validates_arguments(self):
        with pytest.raises(DomainError, match="at least 4"):
            search_generator_consistent_maps(FAM03, FAM03, 3)
        with pytest.raises(FamilyError, match="canonical"):
            search_generator_consistent_maps(
                NormalizedFamily(1, 2), NormalizedFamily(1, 2), 4)


class TestMapSerialization:
    def test_round_trips_preserve_equality(self):
        fam = FAM03
        other = parse_family("2..5")
        ball = make_ball(parse_family("0..0"), 2, 0)
        table = TableMap(parse_family("0..0"), parse_family("0..0"),
                         tuple((e, e) for e in ball.elements))
        cases = [
            (Identity(fam), fam, fam),
            (Constant(fam, Element(0, 0, 1)), fam, fam),
            (Retraction(fam, 2), fam, fam),
            (CollapseCutoff(fam, 1), fam, fam),
            (Projection(fam), fam, None),
            (Embedding(fam, 3), None, fam),
            (ShiftIso(fam, other), fam, other),
            (table, parse_family("0..0"), parse_family("0..0")),
            (LowerCollapseCandidate(fam, 1, 2), fam, fam),
        ]
        for m, src, dst in cases:
            data = m.to_json()
            assert data["kind"] == m.kind
            assert element_map_from_json(data, src, dst) == m

    def test_identity_needs_matching_domains(self):
        with pytest.raises(DomainError):
            element_map_from_json({"kind": "Identity", "params": {}},
                                  FAM03, parse_family("0..1"))

    def test_projection_must_target_bicyclic(self):
        data = Projection(FAM03).to_json()
        with pytest.raises(DomainError):
            element_map_from_json(data, FAM03, FAM03)

    def test_embedding_must_start_bicyclic(self):
        data = Embedding(FAM03, 1).to_json()
        with pytest.raises(DomainError):
            element_map_from_json(data, FAM03, FAM03)

    def test_table_map_needs_concrete_domains(self):
        fam = parse_family("0..0")
        e = Element(0, 0, 0)
        data = TableMap(fam, fam, ((e, e),)).to_json()
        with pytest.raises(DomainError, match="serialize"):
            element_map_from_json(data, None, fam)

    def test_shift_params_must_agree(self):
        f1, f2 = parse_family("0..2"), parse_family("2..4")
        data = {"kind": "ShiftIso", "params": {"from_min": 7, "to_min": 2}}
        with pytest.raises(DomainError, match="disagree"):
            element_map_from_json(data, f1, f2)

    def test_unknown_kind_rejected(self):
        with pytest.raises(DomainError, match="unknown map kind"):
            element_map_from_json({"kind": "Teleport", "params": {}},
                                  FAM03, FAM03)
