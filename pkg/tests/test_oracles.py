"""Definition-based oracles versus the closed-form fast paths."""

import pytest

from bicext.core import (
    Element,
    is_idempotent,
    multiply,
    natural_leq,
    parse_family,
    sigma_equivalent,
)
from bicext.balls import make_ball
from bicext import oracles


FAMILIES = ["0..0", "0..2", "0..inf"]


def _ball(spec, N=5):
    fam = parse_family(spec)
    A = fam.hi if fam.hi is not None else 2
    return fam, make_ball(fam, N, A)


class TestOrderWitnesses:
    @pytest.mark.parametrize("spec", FAMILIES)
    def test_matrix_agrees_with_fast_path(self, spec):
        fam, ball = _ball(spec)
        matrix = oracles.leq_matrix(ball)
        for s in ball.elements:
            for t in ball.elements:
                assert natural_leq(s, t, fam) == ((s, t) in matrix)

    @pytest.mark.parametrize("spec", FAMILIES)
    def test_witnesses_verify(self, spec):
        fam, ball = _ball(spec)
        for (s, t), e in oracles.leq_matrix(ball).items():
            assert is_idempotent(e)
            assert multiply(t, e, fam) == s

    def test_single_pair_witness_search(self):
        fam = parse_family("0..2")
        e = oracles.leq_witnessed(Element(0, 0, 1), Element(0, 0, 0), fam)
        assert e is not None and is_idempotent(e)
        assert multiply(Element(0, 0, 0), e, fam) == Element(0, 0, 1)
        assert oracles.leq_witnessed(
            Element(0, 0, 0), Element(0, 0, 1), fam) is None


class TestSigmaWitnesses:
    @pytest.mark.parametrize("spec", FAMILIES)
    def test_matrix_agrees_with_fast_path(self, spec):
        fam, ball = _ball(spec, N=4)
        matrix = oracles.sigma_matrix(ball)
        for s in ball.elements:
            for t in ball.elements:
                assert sigma_equivalent(s, t) == ((s, t) in matrix)

    @pytest.mark.parametrize("spec", FAMILIES)
    def test_equalizing_idempotents_verify(self, spec):
        fam, ball = _ball(spec, N=4)
        for (s, t), e in oracles.sigma_matrix(ball).items():
            if s == t:
                continue
            assert is_idempotent(e)
            assert multiply(e, s, fam) == multiply(e, t, fam)

    def test_single_pair_equalizer_search(self):
        fam = parse_family("0..2")
        e = oracles.sigma_witnessed(Element(3, 1, 0), Element(5, 3, 2), fam)
        assert e is not None
        assert multiply(e, Element(3, 1, 0), fam) \
            == multiply(e, Element(5, 3, 2), fam)
        assert oracles.sigma_witnessed(
            Element(0, 1, 0), Element(1, 0, 0), fam) is None


class TestInverseUniqueness:
    @pytest.mark.parametrize("spec", FAMILIES)
    def test_every_element_has_exactly_one_generalized_inverse(self, spec):
        _, ball = _ball(spec, N=4)
        assert oracles.inverse_unique_on_ball(ball)
