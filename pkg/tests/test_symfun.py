"""Symmetric-function layer: basis change against direct evaluation."""

import random
from fractions import Fraction

from octamoment.partitions import Partition, partitions_of
from octamoment.symfun import (
    MonomialExpansion,
    PowerSumExpansion,
    eval_monomial,
    eval_monomial_ones,
    eval_power_sum,
    p_in_m_basis,
    to_monomial,
)


def test_p_in_m_examples():
    assert p_in_m_basis(Partition([2])) == {Partition([2]): 1}
    assert p_in_m_basis(Partition([1, 1])) == {Partition([2]): 1, Partition([1, 1]): 2}
    for n in range(1, 8):
        assert p_in_m_basis(Partition([n])) == {Partition([n]): 1}


def random_alphabets(rng, max_len=5, count=4):
    for _ in range(count):
        size = rng.randint(1, max_len)
        yield [Fraction(rng.randint(-4, 4), rng.randint(1, 3)) for _ in range(size)]


def test_p_in_m_matches_direct_evaluation():
    rng = random.Random(2024)
    for n in range(1, 9):
        alphabets = list(random_alphabets(rng))
        for lam in partitions_of(n):
            expansion = p_in_m_basis(lam)
            for xs in alphabets:
                direct = eval_power_sum(lam, xs)
                via_m = sum(
                    (c * eval_monomial(mu, xs) for mu, c in expansion.items()),
                    Fraction(0),
                )
                assert direct == via_m, (lam, xs)


def test_eval_monomial_examples():
    assert eval_monomial_ones(Partition([1, 1]), 3) == 3
    assert eval_monomial(Partition([2]), [1, 1]) == 2
    a, b = Fraction(2, 3), Fraction(-1, 2)
    assert eval_monomial(Partition([2, 1]), [a, b]) == a**2 * b + a * b**2
    assert eval_monomial(Partition([1, 1, 1]), [1, 2]) == 0
    assert eval_monomial(Partition(), [1, 2]) == 1


def test_eval_monomial_ones_matches_explicit_alphabet():
    for n in range(1, 9):
        for lam in partitions_of(n):
            for l in range(0, 7):
                assert eval_monomial_ones(lam, l) == eval_monomial(lam, [1] * l)


def test_to_monomial_expands_each_slot():
    p2, p11 = Partition([2]), Partition([1, 1])
    series = PowerSumExpansion(2, {(p2, p11): Fraction(1)})
    expanded = to_monomial(series)
    assert expanded.coeff(p2, p2) == 1
    assert expanded.coeff(p2, p11) == 2
    assert expanded.coeff(p11, p2) == 0

    one = Partition([1])
    series1 = PowerSumExpansion(1, {(one, one): Fraction(1)})
    assert to_monomial(series1).coeff(one, one) == 1


def test_to_monomial_hand_expansion_n2():
    p2, p11 = Partition([2]), Partition([1, 1])
    series = PowerSumExpansion(
        2,
        {
            (p2, p11): Fraction(1),
            (p11, p2): Fraction(1),
            (p2, p2): Fraction(1),
        },
    )
    expanded = to_monomial(series)
    assert expanded.coeff(p2, p2) == 3
    assert expanded.coeff(p2, p11) == 2
    assert expanded.coeff(p11, p2) == 2
    assert expanded.coeff(p11, p11) == 0
    # evaluation equals the power-sum route on a concrete alphabet
    xs = [Fraction(1, 2), 3]
    ys = [2, Fraction(-1, 3)]
    assert expanded.evaluate(xs, ys) == series.evaluate(xs, ys)


def test_records_round_trip_and_order():
    exp = to_monomial(
        PowerSumExpansion(
            2, {(Partition([2]), Partition([1, 1])): Fraction(3, 2)}
        )
    )
    records = exp.to_records()
    # canonical key order: reverse-lex lambda then reverse-lex mu
    keys = [(r["lambda"], r["mu"]) for r in records]
    assert keys == [("2", "2"), ("2", "1,1")]
    back = MonomialExpansion.from_records(2, records)
    assert back == exp
