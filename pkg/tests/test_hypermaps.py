"""Enumeration oracles: pairings, class tables, partitioned hypermaps."""

from math import factorial

import pytest

from octamoment.arrays import ArrayTuple, elementary
from octamoment.hypermaps import (
    BoundExceededError,
    L_table,
    Pairing,
    PartitionedHypermap,
    b_from_L,
    c_from_L,
    canonical_f1,
    canonical_f2,
    class_connection,
    compose,
    cycle_type,
    degree_array,
    double_coset_connection,
    double_coset_data,
    expected_coset_size,
    half_cycle_type,
    iter_partitioned_hypermaps,
    lp_table,
    parse_element,
    r_statistic,
)
from octamoment.partitions import (
    Partition,
    coarsening_counts,
    odd_double_factorial,
    partitions_of,
)


def pairing_from_text(n, pairs):
    return Pairing.from_pairs(
        n, [(parse_element(a, n), parse_element(b, n)) for a, b in pairs]
    )


def test_canonical_pairings():
    f1, f2 = canonical_f1(2), canonical_f2(2)
    assert str(f1) == "(1 2^)(2 1^)"
    assert str(f2) == "(1 1^)(2 2^)"
    # product of the walks is one 2n-gon: type (n, n)
    for n in (2, 3, 5):
        t = cycle_type(compose(canonical_f1(n).image, canonical_f2(n).image))
        assert t == Partition([n, n])


def test_half_cycle_type():
    f1, f2 = canonical_f1(2), canonical_f2(2)
    assert half_cycle_type(f2, f1) == Partition([2])
    for n in (1, 2, 3, 4):
        g = canonical_f2(n)
        assert half_cycle_type(g, g) == Partition([1] * n)
    twist = pairing_from_text(2, [("1", "2"), ("1^", "2^")])
    assert half_cycle_type(twist, canonical_f1(2)) == Partition([2])


def test_r_statistic():
    assert r_statistic(canonical_f2(3)) == 0
    assert r_statistic(canonical_f1(4)) == 0
    assert r_statistic(pairing_from_text(2, [("1", "2"), ("1^", "2^")])) == 1


def test_L_table_small():
    t1 = L_table(1)
    assert t1.entries == {(Partition([1]), Partition([1]), 0): 1}
    t2 = L_table(2)
    assert t2.entries == {
        (Partition([2]), Partition([1, 1]), 0): 1,
        (Partition([1, 1]), Partition([2]), 0): 1,
        (Partition([2]), Partition([2]), 1): 1,
    }
    assert t2.total() == 3


def test_L_table_totals_and_bound():
    for n in range(1, 8):
        assert L_table(n).total() == odd_double_factorial(n)
    with pytest.raises(BoundExceededError):
        L_table(9, bound=8)  # not cached; guards before enumerating


def test_b_and_c_from_L():
    t2 = L_table(2)
    b = b_from_L(t2)
    assert b[(Partition([2]), Partition([1, 1]))] == 8
    c = c_from_L(t2)
    assert c[(Partition([2]), Partition([1, 1]))] == 1
    assert (Partition([2]), Partition([2])) not in c
    assert b_from_L(L_table(1))[(Partition([1]), Partition([1]))] == 2


def test_symmetry_of_connection_coefficients():
    for n in range(1, 7):
        table = L_table(n)
        for lam in partitions_of(n):
            for mu in partitions_of(n):
                total = lambda a, b: sum(
                    table.get(a, b, r) for r in range(n + 1)
                )
                assert total(lam, mu) == total(mu, lam)
                assert table.get(lam, mu, 0) == table.get(mu, lam, 0)


def test_class_connection_examples():
    assert class_connection(2, [2], [1, 1]) == 1
    assert class_connection(2, [2], [2]) == 0
    assert class_connection(3, [3], [3]) == L_table(3).get([3], [3], 0)


def test_class_connection_equals_orientable_slice():
    for n in range(1, 7):
        table = L_table(n)
        for lam in partitions_of(n):
            for mu in partitions_of(n):
                assert class_connection(n, lam, mu) == table.get(lam, mu, 0)


def test_double_coset_oracle():
    for n in range(1, 4):
        b = b_from_L(L_table(n))
        _, _, sizes = double_coset_data(n)
        bn = 2**n * factorial(n)
        assert sum(sizes.values()) == factorial(2 * n)
        for lam in partitions_of(n):
            assert sizes[lam] == expected_coset_size(n, lam)
            for mu in partitions_of(n):
                assert double_coset_connection(n, lam, mu) == b.get((lam, mu), 0)
    assert double_coset_connection(2, [2], [1, 1]) == 8
    assert double_coset_connection(1, [1], [1]) == 2


def test_partitioned_blocks_are_balanced_and_stable():
    for n in range(1, 5):
        for h in iter_partitioned_hypermaps(n):
            assert h.validate() == []
            for block in h.pi1 + h.pi2:
                hats = sum(1 for x in block if x >= n)
                assert 2 * hats == len(block)


def test_lp_counts_against_refinement_identity():
    for n in range(1, 6):
        table = L_table(n)
        lp = lp_table(n)
        for nu in partitions_of(n):
            for rho in partitions_of(n):
                for r in range(n // 2 + 1):
                    expected = 0
                    for lam in partitions_of(n):
                        c1 = coarsening_counts(lam).get(nu, 0)
                        if not c1:
                            continue
                        for mu in partitions_of(n):
                            c2 = coarsening_counts(mu).get(rho, 0)
                            if c2:
                                expected += c1 * c2 * table.get(lam, mu, r)
                    assert lp.get((nu, rho, r), 0) == expected


def test_lp_examples_n2():
    lp = lp_table(2)
    two, oneone = Partition([2]), Partition([1, 1])
    assert lp[(two, two, 0)] + lp[(two, two, 1)] == 3
    assert lp[(two, oneone, 0)] == 1
    assert lp[(oneone, two, 0)] == 1


def test_degree_array_small_cases():
    # the unique 1-edge hypermap
    (h1,) = list(iter_partitioned_hypermaps(1))
    assert degree_array(h1) == ArrayTuple.make(
        black=elementary(1, 0), seed_degree=1, seed_loops=0
    )
    # fully merged twisted pairing at n=2
    f3 = pairing_from_text(2, [("1", "2"), ("1^", "2^")])
    h = PartitionedHypermap.make(f3, [set(range(4))], [set(range(4))])
    assert degree_array(h) == ArrayTuple.make(
        black_root=elementary(2, 1), seed_degree=2, seed_loops=1
    )


def figure_blocks_n12():
    n = 12
    pi1 = [
        {"12^", "1", "3^", "4", "7^", "8", "11^", "12"},
        {"1^", "2", "6^", "7", "8^", "9"},
        {"2^", "3", "10^", "11"},
        {"4^", "5", "5^", "6", "9^", "10"},
    ]
    pi2 = [
        {"1", "1^", "3", "3^", "6", "6^", "10", "10^"},
        {"2", "2^", "7", "7^", "11", "11^"},
        {"4", "4^", "5", "5^", "8", "8^", "9", "9^", "12", "12^"},
    ]
    enc = lambda block: frozenset(parse_element(x, n) for x in block)
    return n, [enc(b) for b in pi1], [enc(b) for b in pi2]


def compatible_pairings(n, pi1, pi2):
    """All pairings stabilizing every block of both partitions."""
    block1 = {}
    block2 = {}
    for b in pi1:
        for x in b:
            block1[x] = b
    for b in pi2:
        for x in b:
            block2[x] = b
    ground = sorted(range(2 * n))
    image = [-1] * (2 * n)

    def rec(lo):
        while lo < 2 * n and image[lo] >= 0:
            lo += 1
        if lo == 2 * n:
            yield Pairing(n, tuple(image))
            return
        for y in sorted(block1[lo] & block2[lo]):
            if y != lo and image[y] < 0:
                image[lo] = y
                image[y] = lo
                yield from rec(lo + 1)
                image[y] = -1
        image[lo] = -1

    yield from rec(0)


def test_worked_12_edge_example_degree_array():
    """The printed 12-edge partitioned hypermap has blocks as given and
    degree arrays P = E(3,1)+E(2,0), P' = E(3,1), Q = E(5,1)+E(4,1),
    Q' = E(3,1); the half types are (4,3,3,2) / (5,4,3) with r = 3.

    Its pairing is shown only in a figure, so this test reconstructs all
    pairings compatible with the blocks and the stated invariants and
    checks the stated degree array arises.
    """
    n, pi1, pi2 = figure_blocks_n12()
    lam = Partition([4, 3, 2, 2, 1])
    mu = Partition([5, 4, 3])
    expected = ArrayTuple.make(
        white={(3, 1): 1, (2, 0): 1},
        white_root={(3, 1): 1},
        black={(5, 1): 1, (4, 1): 1},
        black_root={(3, 1): 1},
        seed_degree=4,
        seed_loops=1,
    )
    arrays = set()
    witnesses = []
    for f3 in compatible_pairings(n, pi1, pi2):
        if r_statistic(f3) != 3:
            continue
        if half_cycle_type(f3, canonical_f1(n)) != lam:
            continue
        if half_cycle_type(f3, canonical_f2(n)) != mu:
            continue
        h = PartitionedHypermap.make(f3, pi1, pi2)
        assert h.validate() == []
        a = degree_array(h)
        arrays.add(a)
        if a == expected:
            witnesses.append(h)
    assert witnesses
    assert expected in arrays
    # the forest image of a witness has the same degree profile and the
    # label recovery restores it exactly
    from octamoment.forests import forest_degree, theta_forward, theta_inverse

    h = witnesses[0]
    forest = theta_forward(h)
    assert forest_degree(forest) == expected
    assert theta_inverse(forest) == h
