"""Exact integer/partition combinatorics shared by every other module.

All coefficient arithmetic is done with :class:`fractions.Fraction`;
nothing in this module ever touches floating point.  ``ExactRational``
is an alias for ``Fraction`` (always reduced, positive denominator).
"""

from __future__ import annotations

import re
from fractions import Fraction
from functools import lru_cache
from math import factorial
from typing import Iterable, Iterator, Sequence

__all__ = [
    "ExactRational",
    "Partition",
    "partitions_of",
    "aut",
    "zee",
    "falling",
    "multinomial",
    "inv_factorial",
    "odd_double_factorial",
    "refinement_count",
    "coarsening_counts",
    "set_partitions",
    "parse_partition",
    "format_partition",
    "parse_rational",
    "format_rational",
]

ExactRational = Fraction


class Partition(tuple):
    """Integer partition stored as a weakly decreasing tuple of positive parts.

    Instances are hashable and behave like plain tuples, so they can be used
    directly as dictionary keys.  ``Partition()`` is the empty partition of 0.
    """

    def __new__(cls, parts: Iterable[int] = ()) -> "Partition":
        ps = tuple(int(p) for p in parts)
        if any(p <= 0 for p in ps):
            raise ValueError(f"partition parts must be positive, got {ps}")
        if any(ps[k] < ps[k + 1] for k in range(len(ps) - 1)):
            ps = tuple(sorted(ps, reverse=True))
        return super().__new__(cls, ps)

    @property
    def n(self) -> int:
        """Sum of the parts."""
        return sum(self)

    @property
    def length(self) -> int:
        """Number of parts."""
        return len(self)

    def multiplicities(self) -> dict[int, int]:
        """Map each part size to the number of times it occurs."""
        mult: dict[int, int] = {}
        for p in self:
            mult[p] = mult.get(p, 0) + 1
        return mult

    def __repr__(self) -> str:  # pragma: no cover - debugging aid
        return f"Partition{tuple(self)}"


@lru_cache(maxsize=None)
def partitions_of(n: int) -> tuple[Partition, ...]:
    """All partitions of ``n``, each exactly once, in reverse lexicographic
    order: ``(n)`` first, ``(1,...,1)`` last.
    """
    if n < 0:
        raise ValueError("n must be nonnegative")
    out: list[Partition] = []

    def rec(remaining: int, cap: int, prefix: tuple[int, ...]) -> None:
        if remaining == 0:
            out.append(Partition(prefix))
            return
        for part in range(min(cap, remaining), 0, -1):
            rec(remaining - part, part, prefix + (part,))

    rec(n, n, ())
    return tuple(out)


def aut(lam: Partition) -> int:
    """Product of the factorials of the part multiplicities."""
    prod = 1
    for m in lam.multiplicities().values():
        prod *= factorial(m)
    return prod


def zee(lam: Partition) -> int:
    """Centralizer order ``prod_i i^{n_i} n_i!`` of a permutation of cycle
    type ``lam``; ``n!/zee(lam)`` is the conjugacy class size."""
    prod = 1
    for i, m in lam.multiplicities().items():
        prod *= i**m * factorial(m)
    return prod


def falling(x: int | Fraction, p: int) -> int | Fraction:
    """Falling factorial ``x (x-1) ... (x-p+1)``; the empty product is 1."""
    if p < 0:
        raise ValueError("length of a falling factorial must be >= 0")
    prod: int | Fraction = 1
    for k in range(p):
        prod *= x - k
    return prod


def multinomial(alpha: int | Fraction, ks: Sequence[int]) -> Fraction:
    """Generalized multinomial ``alpha(alpha-1)...(alpha-sum(ks)+1) / prod ks!``.

    The top argument may be any rational.  Any negative entry in ``ks``
    makes the value 0 (the reciprocal factorial vanishes at negative
    integers), which lets formula sums range freely over integer indices.
    """
    if any(k < 0 for k in ks):
        return Fraction(0)
    num = falling(alpha, sum(ks))
    den = 1
    for k in ks:
        den *= factorial(k)
    return Fraction(num) / den


def inv_factorial(x: int) -> Fraction:
    """``1/x!`` for ``x >= 0`` and 0 for negative integers.

    This is the reciprocal-Gamma convention that makes the closed-form
    sums terminate on their own support.
    """
    if x < 0:
        return Fraction(0)
    return Fraction(1, factorial(x))


def odd_double_factorial(k: int) -> int:
    """``(2k-1)!! = (2k-1)(2k-3)...1`` with ``(-1)!! = 1``; counts the
    perfect matchings of ``2k`` points."""
    if k < 0:
        raise ValueError("k must be nonnegative")
    prod = 1
    for t in range(1, k + 1):
        prod *= 2 * t - 1
    return prod


def set_partitions(items: Sequence) -> Iterator[tuple[tuple, ...]]:
    """All set partitions of ``items``, as tuples of blocks (tuples).

    Blocks keep the input order of their elements; the first element of the
    sequence always lies in the first block.
    """
    items = list(items)
    if not items:
        yield ()
        return

    def rec(idx: int, blocks: list[list]) -> Iterator[tuple[tuple, ...]]:
        if idx == len(items):
            yield tuple(tuple(b) for b in blocks)
            return
        x = items[idx]
        for b in blocks:
            b.append(x)
            yield from rec(idx + 1, blocks)
            b.pop()
        blocks.append([x])
        yield from rec(idx + 1, blocks)
        blocks.pop()

    yield from rec(1, [[items[0]]])


@lru_cache(maxsize=None)
def coarsening_counts(lam: Partition) -> dict[Partition, int]:
    """For each partition ``nu`` obtainable by merging parts of ``lam``, the
    number of unordered set partitions of the part-index set of ``lam``
    whose block sums realize ``nu``."""
    counts: dict[Partition, int] = {}
    for sp in set_partitions(range(lam.length)):
        nu = Partition(sum(lam[i] for i in block) for block in sp)
        counts[nu] = counts.get(nu, 0) + 1
    return counts


def refinement_count(lam: Partition, nu: Partition) -> int:
    """Number of ways to merge the parts of ``lam`` into the parts of ``nu``
    (0 when ``lam`` does not refine ``nu``)."""
    if lam.n != nu.n:
        raise ValueError(f"|lam| = {lam.n} != |nu| = {nu.n}")
    return coarsening_counts(lam).get(nu, 0)


_MULT_RE = re.compile(r"^\s*\[(.*)\]\s*$")
_MULT_TERM_RE = re.compile(r"^(\d+)(?:\^(\d+))?$")


def parse_partition(text: str) -> Partition:
    """Parse either a comma list ``"3,2,1"`` or the multiplicative form
    ``"[1^2 2^1]"``; ``""`` and ``"[]"`` denote the empty partition."""
    m = _MULT_RE.match(text)
    if m is not None:
        parts: list[int] = []
        for term in m.group(1).split():
            tm = _MULT_TERM_RE.match(term)
            if tm is None:
                raise ValueError(f"bad partition term {term!r} in {text!r}")
            size = int(tm.group(1))
            mult = int(tm.group(2)) if tm.group(2) else 1
            parts.extend([size] * mult)
        return Partition(parts)
    text = text.strip()
    if not text:
        return Partition()
    return Partition(int(tok) for tok in text.split(","))


def format_partition(lam: Partition, style: str = "parts") -> str:
    """Render a partition: ``"parts"`` gives ``"3,2,1"``, ``"mult"`` gives
    ``"[1^1 2^1 3^1]"``."""
    if style == "parts":
        return ",".join(str(p) for p in lam)
    if style == "mult":
        mult = lam.multiplicities()
        terms = " ".join(f"{i}^{mult[i]}" for i in sorted(mult))
        return f"[{terms}]"
    raise ValueError(f"unknown partition style {style!r}")


def parse_rational(text: str) -> Fraction:
    """Parse ``"num/den"`` or a bare integer string."""
    return Fraction(text.strip())


def format_rational(x: Fraction | int) -> str:
    """Render a rational as ``"num/den"``, or ``"num"`` when integral."""
    x = Fraction(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"
