from pathlib import Path

import pytest

from xhermite.connection import (
    QTable,
    build_qtable,
    connection_lhs,
    verify_connection_lemma,
    verify_parity,
    verify_sum_rule,
)
from xhermite.exactalg import ScaledPoly
from xhermite.hermite import normalized_hermite_pair
from xhermite.wronskian import xhermite_pair

GOLDEN = Path(__file__).parent / "golden"
SIGMAS = [(1, 2), (2, 3), (3, 4), (4, 5), (1, 2, 3, 4), (2, 3, 5, 6)]


@pytest.mark.parametrize("name, sigma", [("1_2", (1, 2)), ("2_3", (2, 3)), ("1", (1,))])
def test_golden_tables(name, sigma):
    golden = QTable.from_json((GOLDEN / f"qtable_{name}.json").read_text())
    table = build_qtable(sigma)
    assert table.polys == golden.polys
    assert table.sigma == golden.sigma


def test_table_lengths_and_scale():
    t = build_qtable((2, 3, 5, 6))
    assert t.top == 7
    assert all(q.is_zero() or q.scale_exp == 4 for q in t)


def test_empty_sigma():
    t = build_qtable(())
    assert len(t) == 1
    assert t[0] == ScaledPoly.constant(1, arity=2)


@pytest.mark.parametrize("sigma", SIGMAS + [(1,), (1, 3)])
def test_sum_rule(sigma):
    assert verify_sum_rule(build_qtable(sigma)).passed


@pytest.mark.parametrize("sigma", SIGMAS)
def test_connection_lemma(sigma):
    rep = verify_connection_lemma(build_qtable(sigma))
    assert rep.passed
    assert len(rep.details) == 2 * sigma[-1] + 1


@pytest.mark.parametrize("sigma", SIGMAS + [(1,)])
def test_parity(sigma):
    assert verify_parity(build_qtable(sigma)).passed


def test_non_krein_adler_three_term_identity():
    q = build_qtable((1,))
    for m in range(21):
        assert connection_lhs(q, m) == xhermite_pair((1,), m)


def test_three_term_form_explicit():
    # h_m h_m Q_0 + h_{m-1} h_{m-1} Q_1 + h_{m-2} h_{m-2} Q_2 with Q = (1, -xy, -1)/sqrt(2 pi)
    q = build_qtable((1,))
    m = 5
    lhs = sum((q[k] * normalized_hermite_pair(m - k) for k in range(3)), ScaledPoly.zero(2))
    assert lhs == xhermite_pair((1,), m)


def test_json_round_trip():
    t = build_qtable((1, 2, 3, 4))
    assert QTable.from_json(t.to_json()) == t


@pytest.mark.parametrize("sigma", [(2,), (3,), (1, 3), (2, 4), (1, 2, 4), (1, 3, 5), (2, 3, 4)])
def test_identities_for_sampled_non_krein_adler(sigma):
    # finite sample only; the general arbitrary-sigma statement is not assumed anywhere
    q = build_qtable(sigma)
    assert verify_sum_rule(q).passed
    assert verify_connection_lemma(q, max(20, 2 * sigma[-1])).passed
