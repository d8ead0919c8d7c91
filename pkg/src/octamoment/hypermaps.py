"""Ground-truth enumeration oracles for unicellular locally orientable
hypermaps.

A rooted hypermap with ``n`` edges is encoded by three perfect pairings
(fixed-point-free involutions) of the half-edge labels
``{1..n} ∪ {1^..n^}``: ``f1`` walks around white vertices, ``f2`` around
black vertices, and ``f3`` matches the two halves of each edge.  With the
canonical ``f1``, ``f2`` below the face structure is a single 2n-gon, so
every pairing ``f3`` yields a unicellular hypermap.

Internally half edges are the integers ``0..2n-1``: label ``i`` is
``i - 1`` and the hat label ``i^`` is ``n + i - 1``.

Everything here is brute force by design; these are the oracles the
closed formulas are checked against.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from math import factorial
from typing import Iterator, Sequence

from .arrays import ArrayTuple
from .partitions import Partition, odd_double_factorial, set_partitions, zee

__all__ = [
    "BoundExceededError",
    "Pairing",
    "canonical_f1",
    "canonical_f2",
    "compose",
    "cycle_type",
    "half_cycle_type",
    "r_statistic",
    "iter_pairing_images",
    "ClassTable",
    "L_table",
    "b_from_L",
    "c_from_L",
    "PartitionedHypermap",
    "iter_partitioned_hypermaps",
    "lp_table",
    "lp_by_array",
    "degree_array",
    "class_connection",
    "class_connection_table",
    "double_coset_connection",
    "double_coset_data",
    "expected_coset_size",
    "element_name",
    "parse_element",
    "is_hat",
    "DEFAULT_PAIRING_BOUND",
    "DEFAULT_PARTITIONED_BOUND",
    "DEFAULT_CLASS_BOUND",
    "DEFAULT_COSET_BOUND",
]

DEFAULT_PAIRING_BOUND = 7       # (2*7-1)!! = 135135 pairings
DEFAULT_PARTITIONED_BOUND = 5   # 945 pairings x block merges
DEFAULT_CLASS_BOUND = 8         # iterates over S_n
DEFAULT_COSET_BOUND = 3         # iterates over S_{2n}


class BoundExceededError(ValueError):
    """An enumeration was requested beyond its configured size bound."""

    def __init__(self, what: str, n: int, bound: int):
        super().__init__(f"{what}: n = {n} exceeds the configured bound {bound}")
        self.n = n
        self.bound = bound


def is_hat(x: int, n: int) -> bool:
    return x >= n


def element_name(x: int, n: int) -> str:
    return f"{x - n + 1}^" if x >= n else f"{x + 1}"


def parse_element(tok: str, n: int) -> int:
    tok = tok.strip()
    if tok.endswith("^"):
        return n + int(tok[:-1]) - 1
    return int(tok) - 1


@dataclass(frozen=True)
class Pairing:
    """Fixed-point-free involution on the 2n half-edge labels."""

    n: int
    image: tuple[int, ...]

    def __post_init__(self) -> None:
        m = 2 * self.n
        if len(self.image) != m:
            raise ValueError(f"image must have length {m}")
        for x, y in enumerate(self.image):
            if y == x or not 0 <= y < m or self.image[y] != x:
                raise ValueError("image is not a fixed-point-free involution")

    def __call__(self, x: int) -> int:
        return self.image[x]

    def pairs(self) -> list[tuple[int, int]]:
        return [(x, y) for x, y in enumerate(self.image) if x < y]

    def hat_pair_count(self) -> int:
        n = self.n
        return sum(1 for x, y in self.pairs() if x >= n and y >= n)

    @classmethod
    def from_pairs(cls, n: int, pairs: Sequence[tuple[int, int]]) -> "Pairing":
        image = [-1] * (2 * n)
        for x, y in pairs:
            image[x] = y
            image[y] = x
        return cls(n, tuple(image))

    def __str__(self) -> str:
        return "".join(
            f"({element_name(x, self.n)} {element_name(y, self.n)})"
            for x, y in self.pairs()
        )


def canonical_f1(n: int) -> Pairing:
    """The white-vertex walk: (1 n^)(2 1^)(3 2^)...(n n-1^)."""
    if n < 1:
        raise ValueError("n must be >= 1")
    image = [0] * (2 * n)
    image[0] = 2 * n - 1
    image[2 * n - 1] = 0
    for i in range(1, n):
        image[i] = n + i - 1
        image[n + i - 1] = i
    return Pairing(n, tuple(image))


def canonical_f2(n: int) -> Pairing:
    """The black-vertex walk (1 1^)(2 2^)...(n n^); also the involution
    whose centralizer in S_{2n} is the hyperoctahedral group."""
    if n < 1:
        raise ValueError("n must be >= 1")
    image = [0] * (2 * n)
    for i in range(n):
        image[i] = n + i
        image[n + i] = i
    return Pairing(n, tuple(image))


def compose(g: Sequence[int], h: Sequence[int]) -> tuple[int, ...]:
    """Image of g∘h under the convention (g∘h)(x) = g(h(x))."""
    return tuple(g[h[x]] for x in range(len(h)))


def cycle_type(perm: Sequence[int]) -> Partition:
    m = len(perm)
    seen = bytearray(m)
    lengths: list[int] = []
    for start in range(m):
        if seen[start]:
            continue
        length = 0
        x = start
        while not seen[x]:
            seen[x] = 1
            x = perm[x]
            length += 1
        lengths.append(length)
    return Partition(lengths)


def half_cycle_type(g: Pairing, h: Pairing) -> Partition:
    """Cycle type of g∘h halved: the product of two pairings has every
    cycle length occurring an even number of times.  Fails loudly if it
    does not, which would indicate a composition-convention bug."""
    if g.n != h.n:
        raise ValueError("pairings act on different ground sets")
    full = cycle_type(compose(g.image, h.image))
    mult = full.multiplicities()
    if any(m % 2 for m in mult.values()):
        raise ValueError(f"cycle type {full} has an odd multiplicity")
    half: list[int] = []
    for size, m in mult.items():
        half.extend([size] * (m // 2))
    return Partition(half)


def r_statistic(f3: Pairing) -> int:
    """Number of hat/hat pairs (equals the number of non-hat/non-hat pairs)."""
    return f3.hat_pair_count()


def iter_pairing_images(m: int, first_partner: int | None = None) -> Iterator[list[int]]:
    """Yield every fixed-point-free involution of ``range(m)`` as an image
    list, optionally restricted to those pairing 0 with ``first_partner``.

    The same list object is yielded each time; copy it to keep it.
    """
    if m % 2:
        raise ValueError("need an even ground set")
    image = [-1] * m

    def rec(lo: int) -> Iterator[list[int]]:
        while lo < m and image[lo] >= 0:
            lo += 1
        if lo == m:
            yield image
            return
        for j in range(lo + 1, m):
            if image[j] < 0:
                image[lo] = j
                image[j] = lo
                yield from rec(lo + 1)
                image[j] = -1
        image[lo] = -1

    if m == 0:
        yield image
        return
    if first_partner is None:
        yield from rec(0)
        return
    image[0] = first_partner
    image[first_partner] = 0
    yield from rec(1)
    image[0] = -1
    image[first_partner] = -1


def _half_type_key(perm: Sequence[int]) -> tuple[int, ...]:
    # Cycle type halved, returned as a sorted tuple without Partition overhead.
    m = len(perm)
    seen = bytearray(m)
    lengths: list[int] = []
    for start in range(m):
        if seen[start]:
            continue
        length = 0
        x = start
        while not seen[x]:
            seen[x] = 1
            x = perm[x]
            length += 1
        lengths.append(length)
    lengths.sort(reverse=True)
    return tuple(lengths[::2])


@dataclass(frozen=True)
class ClassTable:
    """Counts of pairings f3 by (white type, black type, hat-pair count)."""

    n: int
    entries: dict[tuple[Partition, Partition, int], int]

    def total(self) -> int:
        return sum(self.entries.values())

    def get(self, lam, mu, r) -> int:
        return self.entries.get((Partition(lam), Partition(mu), r), 0)


@lru_cache(maxsize=None)
def L_table(n: int, bound: int = DEFAULT_PAIRING_BOUND) -> ClassTable:
    """Exhaustive classification of all (2n-1)!! pairings f3 by the half
    cycle types of f3∘f1 and f3∘f2 and the hat-pair count r.

    Sharded by the partner of the first half edge; shards are merged in
    partner order so the result is deterministic.
    """
    if n > bound:
        raise BoundExceededError("pairing classification", n, bound)
    f1 = canonical_f1(n).image
    f2 = canonical_f2(n).image
    m = 2 * n
    entries: dict[tuple[Partition, Partition, int], int] = {}
    raw: dict[tuple[tuple[int, ...], tuple[int, ...], int], int] = {}
    for partner in range(1, m):
        for f3 in iter_pairing_images(m, first_partner=partner):
            lam = _half_type_key([f3[f1[x]] for x in range(m)])
            mu = _half_type_key([f3[f2[x]] for x in range(m)])
            r = 0
            for x in range(n, m):
                if f3[x] >= n and f3[x] > x:
                    r += 1
            key = (lam, mu, r)
            raw[key] = raw.get(key, 0) + 1
    for (lam, mu, r), count in raw.items():
        entries[(Partition(lam), Partition(mu), r)] = count
    expected = odd_double_factorial(n)
    if sum(entries.values()) != expected:
        raise AssertionError(f"pairing count mismatch: {sum(entries.values())} != {expected}")
    return ClassTable(n, entries)


def b_from_L(table: ClassTable) -> dict[tuple[Partition, Partition], int]:
    """Double-coset connection coefficients: 2^n n! times the r-summed counts."""
    scale = 2**table.n * factorial(table.n)
    out: dict[tuple[Partition, Partition], int] = {}
    for (lam, mu, _), c in table.entries.items():
        out[(lam, mu)] = out.get((lam, mu), 0) + scale * c
    return out


def c_from_L(table: ClassTable) -> dict[tuple[Partition, Partition], int]:
    """Class-algebra connection coefficients: the r = 0 slice."""
    return {
        (lam, mu): c for (lam, mu, r), c in table.entries.items() if r == 0 and c
    }


@dataclass(frozen=True)
class PartitionedHypermap:
    """Triple (f3, pi1, pi2): a pairing plus block merges of the white and
    black vertices, each block stable under the defining pairings."""

    f3: Pairing
    pi1: tuple[frozenset[int], ...]
    pi2: tuple[frozenset[int], ...]

    @staticmethod
    def _normalize(blocks) -> tuple[frozenset[int], ...]:
        return tuple(sorted((frozenset(b) for b in blocks), key=min))

    @classmethod
    def make(cls, f3: Pairing, pi1, pi2) -> "PartitionedHypermap":
        return cls(f3, cls._normalize(pi1), cls._normalize(pi2))

    def validate(self) -> list[str]:
        n = self.f3.n
        ground = set(range(2 * n))
        problems: list[str] = []
        for name, blocks, stab in (
            ("pi1", self.pi1, canonical_f1(n)),
            ("pi2", self.pi2, canonical_f2(n)),
        ):
            covered: set[int] = set()
            for block in blocks:
                if covered & block:
                    problems.append(f"{name} blocks overlap")
                covered |= block
                for x in block:
                    if stab(x) not in block or self.f3(x) not in block:
                        problems.append(f"{name} block {sorted(block)} is not stable")
                        break
                hats = sum(1 for x in block if x >= n)
                if 2 * hats != len(block):
                    problems.append(f"{name} block {sorted(block)} is hat-unbalanced")
            if covered != ground:
                problems.append(f"{name} does not cover the ground set")
        return problems

    def white_type(self) -> Partition:
        return Partition(len(b) // 2 for b in self.pi1)

    def black_type(self) -> Partition:
        return Partition(len(b) // 2 for b in self.pi2)

    @property
    def r(self) -> int:
        return r_statistic(self.f3)

    def __str__(self) -> str:
        n = self.f3.n

        def blocks(pi):
            return "; ".join(
                "{" + ", ".join(element_name(x, n) for x in sorted(b)) + "}" for b in pi
            )

        return f"f3 = {self.f3}\npi1 = {blocks(self.pi1)}\npi2 = {blocks(self.pi2)}"


def _orbits(a: Sequence[int], b: Sequence[int]) -> list[frozenset[int]]:
    """Orbits of the group generated by two involutions (as image lists)."""
    m = len(a)
    seen = bytearray(m)
    orbits: list[frozenset[int]] = []
    for start in range(m):
        if seen[start]:
            continue
        stack = [start]
        seen[start] = 1
        orbit = [start]
        while stack:
            x = stack.pop()
            for y in (a[x], b[x]):
                if not seen[y]:
                    seen[y] = 1
                    orbit.append(y)
                    stack.append(y)
        orbits.append(frozenset(orbit))
    return orbits


def iter_partitioned_hypermaps(
    n: int, bound: int = DEFAULT_PARTITIONED_BOUND
) -> Iterator[PartitionedHypermap]:
    """Every partitioned hypermap with n edges, each exactly once.

    White vertices are the orbits of <f1, f3>, black vertices the orbits of
    <f2, f3>; the blocks of pi1 (pi2) are arbitrary unions of white (black)
    orbits, which is exactly the stability constraint.
    """
    if n > bound:
        raise BoundExceededError("partitioned hypermap enumeration", n, bound)
    f1 = canonical_f1(n).image
    f2 = canonical_f2(n).image
    m = 2 * n
    for partner in range(1, m):
        for image in iter_pairing_images(m, first_partner=partner):
            f3 = Pairing(n, tuple(image))
            white_orbits = _orbits(image, f1)
            black_orbits = _orbits(image, f2)
            for grouping1 in set_partitions(white_orbits):
                pi1 = tuple(frozenset().union(*g) for g in grouping1)
                for grouping2 in set_partitions(black_orbits):
                    pi2 = tuple(frozenset().union(*g) for g in grouping2)
                    yield PartitionedHypermap.make(f3, pi1, pi2)


def degree_array(h: PartitionedHypermap) -> ArrayTuple:
    """Classify the blocks of a partitioned hypermap into the degree arrays.

    White blocks not containing label 1 go to ``white``/``white_root``
    according to whether the maximum non-hat element is matched to a hat or
    non-hat element; black blocks go to ``black``/``black_root`` dually;
    the block containing 1 provides (i0, j0).
    """
    n = h.f3.n
    f3 = h.f3.image
    white: dict[tuple[int, int], int] = {}
    white_root: dict[tuple[int, int], int] = {}
    black: dict[tuple[int, int], int] = {}
    black_root: dict[tuple[int, int], int] = {}
    seed_degree = seed_loops = None
    for block in h.pi1:
        i = len(block) // 2
        j = sum(1 for x in block if x < n and f3[x] < n) // 2
        if 0 in block:
            seed_degree, seed_loops = i, j
            continue
        top = max(x for x in block if x < n)
        cell = white if f3[top] >= n else white_root
        cell[(i, j)] = cell.get((i, j), 0) + 1
    for block in h.pi2:
        i = len(block) // 2
        j = sum(1 for x in block if x >= n and f3[x] >= n) // 2
        top = max(block)
        cell = black if f3[top] < n else black_root
        cell[(i, j)] = cell.get((i, j), 0) + 1
    if seed_degree is None:
        raise ValueError("no block of pi1 contains label 1")
    return ArrayTuple.make(
        white=white,
        white_root=white_root,
        black=black,
        black_root=black_root,
        seed_degree=seed_degree,
        seed_loops=seed_loops,
    )


@lru_cache(maxsize=8)
def _lp_data(n: int, bound: int = DEFAULT_PARTITIONED_BOUND):
    table: dict[tuple[Partition, Partition, int], int] = {}
    by_array: dict[ArrayTuple, int] = {}
    for h in iter_partitioned_hypermaps(n, bound=bound):
        key = (h.white_type(), h.black_type(), h.r)
        table[key] = table.get(key, 0) + 1
        arr = degree_array(h)
        by_array[arr] = by_array.get(arr, 0) + 1
    return table, by_array


def lp_table(n: int, bound: int = DEFAULT_PARTITIONED_BOUND) -> dict:
    """Counts of partitioned hypermaps keyed (white type, black type, r)."""
    return _lp_data(n, bound)[0]


def lp_by_array(n: int, bound: int = DEFAULT_PARTITIONED_BOUND) -> dict[ArrayTuple, int]:
    """Counts of partitioned hypermaps keyed by their degree array."""
    return _lp_data(n, bound)[1]


@lru_cache(maxsize=None)
def class_connection_table(n: int, bound: int = DEFAULT_CLASS_BOUND) -> dict:
    """For the fixed n-cycle g = (1 2 ... n), the number of ways to write
    g = a∘b with a, b of prescribed cycle types, keyed (type a, type b)."""
    if n > bound:
        raise BoundExceededError("class algebra product", n, bound)
    gamma = tuple((x + 1) % n for x in range(n))
    table: dict[tuple[Partition, Partition], int] = {}
    for alpha in itertools.permutations(range(n)):
        inv = [0] * n
        for x, y in enumerate(alpha):
            inv[y] = x
        beta = tuple(inv[gamma[x]] for x in range(n))
        key = (cycle_type(alpha), cycle_type(beta))
        table[key] = table.get(key, 0) + 1
    return table


def class_connection(n: int, lam, mu, bound: int = DEFAULT_CLASS_BOUND) -> int:
    """Oracle for the class-algebra connection coefficient at the full cycle."""
    return class_connection_table(n, bound).get((Partition(lam), Partition(mu)), 0)


@lru_cache(maxsize=None)
def double_coset_data(n: int, bound: int = DEFAULT_COSET_BOUND):
    """Membership data for the double cosets of the hyperoctahedral group.

    Returns (class_of, members, sizes): the coset type of each permutation
    of S_{2n} (as an image tuple), the members per type, and the coset
    sizes.  A permutation w lies in the coset of type lam iff
    fstar∘w∘fstar∘w^{-1} has cycle type lam lam.
    """
    if n > bound:
        raise BoundExceededError("double coset product", n, bound)
    m = 2 * n
    fstar = canonical_f2(n).image
    class_of: dict[tuple[int, ...], Partition] = {}
    members: dict[Partition, list[tuple[int, ...]]] = {}
    for omega in itertools.permutations(range(m)):
        inv = [0] * m
        for x, y in enumerate(omega):
            inv[y] = x
        conj = tuple(fstar[omega[fstar[inv[x]]]] for x in range(m))
        full = cycle_type(conj)
        mult = full.multiplicities()
        half: list[int] = []
        for size, count in mult.items():
            if count % 2:
                raise AssertionError("coset conjugation type has odd multiplicity")
            half.extend([size] * (count // 2))
        lam = Partition(half)
        class_of[omega] = lam
        members.setdefault(lam, []).append(omega)
    sizes = {lam: len(ms) for lam, ms in members.items()}
    return class_of, members, sizes


def double_coset_connection(n: int, lam, mu, bound: int = DEFAULT_COSET_BOUND) -> int:
    """Coefficient of a fixed representative of the full-cycle coset in the
    product of the coset sums for ``lam`` and ``mu`` (tiny n only)."""
    lam, mu = Partition(lam), Partition(mu)
    class_of, members, _ = double_coset_data(n, bound)
    rho = members[Partition([n])][0]
    m = 2 * n
    count = 0
    for sigma in members.get(lam, []):
        inv = [0] * m
        for x, y in enumerate(sigma):
            inv[y] = x
        tau = tuple(inv[rho[x]] for x in range(m))
        if class_of[tau] == mu:
            count += 1
    return count


def expected_coset_size(n: int, lam: Partition) -> int:
    """|B_n|^2 / (2^{len(lam)} z_lam) with |B_n| = 2^n n!."""
    bn = 2**n * factorial(n)
    size, rem = divmod(bn * bn, 2**lam.length * zee(lam))
    if rem:
        raise AssertionError("coset size formula did not divide evenly")
    return size
