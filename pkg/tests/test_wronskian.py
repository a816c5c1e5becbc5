from fractions import Fraction

import pytest
import sympy

from xhermite.errors import InvalidSequence, NotKreinAdler
from xhermite.exactalg import ScaledPoly
from xhermite.hermite import hermite
from xhermite.wronskian import (
    LevelSequence,
    apply_Lhat,
    krein_adler_sequences,
    real_zero_free,
    wronskian,
    wronskian_of_levels,
    wronskian_set,
    xhermite_normsq,
    xhermite_pair,
    xhermite_wronskian,
)

X = sympy.Symbol("x")


def _to_sympy(p: ScaledPoly):
    return sum(sympy.Rational(c.numerator, c.denominator) * X**i for (i, _), c in p.items())


def _sympy_wronskian(levels):
    fs = [sympy.hermite_prob(n, X) for n in levels]
    return sympy.expand(sympy.wronskian(fs, X))


@pytest.mark.parametrize("levels", [(1, 2), (2, 3), (3, 4), (1, 2, 3, 4), (2, 3, 5, 6), (1,), (1, 3, 6)])
def test_wronskian_matches_sympy(levels):
    assert sympy.expand(_to_sympy(wronskian_of_levels(levels)) - _sympy_wronskian(levels)) == 0


def test_known_wronskians():
    x = ScaledPoly.x()
    assert wronskian_of_levels((1, 2)) == x**2 + 1
    assert wronskian_of_levels((2, 3)) == x**4 + 3
    assert wronskian_of_levels(()) == ScaledPoly.constant(1)


def test_parse_and_validation():
    assert LevelSequence.parse("1,2").levels == (1, 2)
    assert LevelSequence.parse("").levels == ()
    with pytest.raises(InvalidSequence, match="strictly increasing"):
        LevelSequence.parse("2,1")
    with pytest.raises(InvalidSequence):
        LevelSequence((1, 1))
    with pytest.raises(InvalidSequence):
        LevelSequence.parse("a,b")


def test_krein_adler():
    assert LevelSequence((1, 2)).is_krein_adler
    assert LevelSequence((1, 2, 4, 5)).is_krein_adler
    assert not LevelSequence((1,)).is_krein_adler
    assert not LevelSequence((1, 3)).is_krein_adler
    with pytest.raises(NotKreinAdler):
        LevelSequence((1,)).require_krein_adler()
    assert LevelSequence((1, 2, 3, 4)).M == 2


def test_krein_adler_wronskians_have_no_real_zeros():
    seqs = list(krein_adler_sequences(8, 2))
    assert LevelSequence((7, 8)) in seqs and LevelSequence((1, 2, 7, 8)) in seqs
    for s in seqs:
        assert real_zero_free(wronskian_of_levels(s)), s
    assert not real_zero_free(wronskian_of_levels((1, 3)))


def test_degrees():
    s = LevelSequence((2, 3, 5, 6))
    assert wronskian_of_levels(s).degree() == s.wronskian_degree()
    assert xhermite_wronskian(s, 0).degree() == s.ground_degree()


def test_normsq_signs():
    assert xhermite_normsq((1,), 0) == 1
    assert xhermite_normsq((1, 2), 0) == Fraction(1, 2)
    assert xhermite_normsq((1, 2), 2) == 0
    # even length: same as 1 / prod (n - s_j)
    assert xhermite_normsq((1, 2), 5) == Fraction(1, 12)


def test_deleted_levels_give_zero_pairs():
    for n in (1, 2):
        assert xhermite_pair((1, 2), n).is_zero()
    assert xhermite_pair((1, 2), 0).scale_exp == 3


def test_lhat_matches_wronskian():
    num, den = apply_Lhat((1, 2), hermite(4))
    assert num == xhermite_wronskian((1, 2), 4)
    assert den == wronskian_of_levels((1, 2))


def test_wronskian_set():
    ws = wronskian_set((1, 2, 3, 4))
    assert len(ws.w_hat_minus) == 4
    assert ws.w_hat_minus[0] == wronskian_of_levels((2, 3, 4))


def test_wronskian_of_arbitrary_polys():
    x = ScaledPoly.x()
    assert wronskian([x, x**2]) == x**2
