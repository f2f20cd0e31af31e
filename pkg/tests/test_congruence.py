"""Congruence closures, canonical partitions, verdicts, serialization."""

import pytest

from bicext.core import BallError, Element, parse_family
from bicext.balls import make_ball
from bicext.congruence import (
    CongruencePartition,
    classify,
    congruence_closure,
    discrete_partition,
    is_translation_closed,
    projection_kernel,
    refines,
    sigma_partition,
)


def _ball(spec, N=6, A=None):
    fam = parse_family(spec)
    if A is None:
        A = fam.hi if fam.hi is not None else 2
    return fam, make_ball(fam, N, A)


class TestClosure:
    def test_layer_merge_closure(self):
        """Relating the two bottom idempotents of neighbouring layers glues
        the layers pointwise and nothing else."""
        fam, ball = _ball("0..1")
        part = congruence_closure(
            [(Element(0, 0, 0), Element(0, 0, 1))], ball)
        for cls in part.classes:
            if len(cls) == 1:
                continue
            assert len(cls) == 2
            x, y = cls
            assert (x.i, x.j) == (y.i, y.j)
            assert {x.a, y.a} == {0, 1}
        assert part.num_classes == len(ball) // 2

    def test_idempotent_pair_reaches_group_congruence(self):
        fam, ball = _ball("0..1")
        part = congruence_closure(
            [(Element(0, 0, 0), Element(1, 1, 0))], ball)
        sp = sigma_partition(ball)
        assert refines(part, sp)
        assert refines(sp, part, inner_only=True)

    def test_comparable_cross_layer_pair_chains_diagonally(self):
        """The closure of (0,0,1) ~ (1,1,0) identifies (i,j,a) with
        (i+d, j+d, a-d): same difference class and same depth i+a — no
        same-layer pair is ever merged and idempotents stay apart."""
        fam, ball = _ball("0..2")
        part = congruence_closure(
            [(Element(0, 0, 1), Element(1, 1, 0))], ball)
        assert part.related(Element(0, 0, 2), Element(1, 1, 1))
        assert part.related(Element(1, 1, 1), Element(2, 2, 0))
        assert not part.related(Element(0, 0, 0), Element(1, 1, 0))
        verdict = classify(part)
        assert not verdict.idempotents_collapsed
        assert not any(verdict.bicyclic_restrictions.values())
        assert verdict.consistent

    def test_generators_recorded_and_outside_ball_rejected(self):
        fam, ball = _ball("0..1", N=4)
        gens = [(Element(0, 0, 0), Element(0, 0, 1))]
        part = congruence_closure(gens, ball)
        assert part.generators == tuple(gens)
        with pytest.raises(BallError):
            congruence_closure([(Element(9, 0, 0), Element(0, 0, 0))], ball)

    def test_empty_generators_give_discrete_partition(self):
        fam, ball = _ball("0..1", N=4)
        assert congruence_closure([], ball) == discrete_partition(ball)

    @pytest.mark.parametrize("gen", [
        (Element(0, 0, 0), Element(0, 0, 1)),
        (Element(0, 0, 0), Element(1, 1, 0)),
        (Element(0, 1, 0), Element(1, 0, 1)),
    ])
    def test_closures_are_translation_closed(self, gen):
        fam, ball = _ball("0..1")
        assert is_translation_closed(congruence_closure([gen], ball))

    def test_verdict_stable_under_growth(self):
        fam, ball = _ball("0..2", N=6)
        for gen in [
            (Element(0, 0, 0), Element(0, 0, 2)),
            (Element(0, 0, 0), Element(2, 2, 0)),
            (Element(0, 0, 1), Element(1, 1, 0)),
        ]:
            small = classify(congruence_closure([gen], ball))
            grown = make_ball(fam, ball.N + 2, ball.A,
                              inner_radius=ball.inner_radius)
            big = classify(congruence_closure([gen], grown))
            assert small == big


class TestCanonicalPartitions:
    def test_discrete(self):
        fam, ball = _ball("0..1", N=4)
        part = discrete_partition(ball)
        assert part.is_discrete
        assert part.num_classes == len(ball)
        verdict = classify(part)
        assert not verdict.idempotents_collapsed
        assert verdict.consistent

    def test_sigma_classes_by_difference(self):
        fam, ball = _ball("0..2", N=5)
        part = sigma_partition(ball)
        for cls in part.classes:
            diffs = {e.i - e.j for e in cls}
            assert len(diffs) == 1
        assert part.num_classes == 2 * ball.N + 1
        assert is_translation_closed(part)
        verdict = classify(part)
        assert verdict.idempotents_collapsed
        assert verdict.group_congruence_on_ball
        assert all(verdict.bicyclic_restrictions.values())
        assert verdict.consistent

    def test_projection_kernel_fibres(self):
        fam, ball = _ball("0..2", N=5)
        part = projection_kernel(ball)
        for cls in part.classes:
            positions = {(e.i, e.j) for e in cls}
            assert len(positions) == 1
            assert len(cls) == ball.ncut
        assert is_translation_closed(part)
        verdict = classify(part)
        assert not verdict.idempotents_collapsed
        assert not verdict.group_congruence_on_ball
        assert not any(verdict.bicyclic_restrictions.values())
        assert verdict.consistent

    def test_projection_kernel_on_single_cutoff_family_is_discrete(self):
        fam, ball = _ball("0..0", N=4)
        assert projection_kernel(ball).is_discrete


class TestPartitionApi:
    def test_related_and_class_of(self):
        fam, ball = _ball("0..1", N=4)
        part = congruence_closure(
            [(Element(0, 0, 0), Element(0, 0, 1))], ball)
        assert part.related(Element(2, 1, 0), Element(2, 1, 1))
        assert not part.related(Element(2, 1, 0), Element(1, 2, 0))
        assert set(part.class_of(Element(2, 1, 0))) \
            == {Element(2, 1, 0), Element(2, 1, 1)}

    def test_equality_is_by_partition_not_representatives(self):
        fam, ball = _ball("0..1", N=4)
        gens1 = [(Element(0, 0, 0), Element(0, 0, 1))]
        gens2 = [(Element(1, 1, 0), Element(1, 1, 1))]
        p1 = congruence_closure(gens1, ball)
        p2 = congruence_closure(gens2, ball)
        assert p1 == p2
        assert hash(p1) == hash(p2)
        assert p1 != discrete_partition(ball)

    def test_refines(self):
        fam, ball = _ball("0..1")
        fine = discrete_partition(ball)
        coarse = sigma_partition(ball)
        assert refines(fine, coarse)
        assert not refines(coarse, fine)
        assert refines(coarse, coarse)


class TestSerialization:
    def test_round_trip(self):
        fam, ball = _ball("0..1")
        part = congruence_closure(
            [(Element(0, 0, 0), Element(1, 1, 0))], ball)
        data = part.to_json()
        back = CongruencePartition.from_json(data)
        assert back == part
        assert back.to_json() == data

    def test_shifted_family_serializes_in_original_coordinates(self):
        fam = parse_family("2..5")
        ball = make_ball(fam, 5, 2)
        part = congruence_closure(
            [(Element(0, 0, 0), Element(0, 0, 1))], ball)
        data = part.to_json()
        assert data["ball"]["family"] == "2..5"
        flat = [t for cls in data["classes"] for t in cls]
        assert "(0,0,2)" in flat and "(0,0,3)" in flat
        assert all("(0,0,0)" != t and "(0,0,1)" != t for t in flat)
        assert CongruencePartition.from_json(data) == part

    def test_verdict_shape(self):
        fam, ball = _ball("0..1")
        data = congruence_closure(
            [(Element(0, 0, 0), Element(1, 1, 0))], ball).to_json()
        verdict = data["verdict"]
        assert verdict["idempotents_collapsed"] is True
        assert verdict["group_congruence_on_ball"] is True
        assert verdict["bicyclic_restrictions"] == {"0": True, "1": True}
        assert verdict["consistent"] is True

    def test_discrete_partition_serializes_without_classes(self):
        fam, ball = _ball("0..1", N=4)
        data = discrete_partition(ball).to_json()
        assert data["classes"] == []
        assert CongruencePartition.from_json(data).is_discrete
