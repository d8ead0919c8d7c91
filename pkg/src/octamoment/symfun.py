"""Monomial / power-sum symmetric function evaluation and the p -> m basis
change for bilinear series in two matrix alphabets.

Expansions are stored sparsely: a missing ``(lam, mu)`` key means the
coefficient is 0.  Canonical key order everywhere is (reverse-lex ``lam``,
reverse-lex ``mu``), i.e. plain descending tuple order.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .partitions import (
    Partition,
    aut,
    coarsening_counts,
    falling,
    format_partition,
    format_rational,
    parse_partition,
    parse_rational,
)

__all__ = [
    "MonomialExpansion",
    "PowerSumExpansion",
    "p_in_m_basis",
    "to_monomial",
    "eval_monomial",
    "eval_monomial_ones",
    "eval_power_sum",
]

Key = tuple[Partition, Partition]


def _canonical_items(coeffs: Mapping[Key, Fraction]):
    return sorted(
        ((k, v) for k, v in coeffs.items() if v != 0),
        key=lambda kv: (kv[0][0], kv[0][1]),
        reverse=True,
    )


@dataclass(frozen=True)
class _BilinearExpansion:
    """Sparse bilinear series sum coeff(lam, mu) * f_lam(x) f_mu(y)."""

    n: int
    coeffs: dict[Key, Fraction] = field(default_factory=dict)

    def __post_init__(self) -> None:
        for (lam, mu), c in self.coeffs.items():
            if lam.n != self.n or mu.n != self.n:
                raise ValueError(f"key ({lam}, {mu}) does not index order {self.n}")
            if not isinstance(c, Fraction):
                self.coeffs[(lam, mu)] = Fraction(c)

    def coeff(self, lam: Partition, mu: Partition) -> Fraction:
        return self.coeffs.get((Partition(lam), Partition(mu)), Fraction(0))

    def items(self):
        """Nonzero terms in canonical order."""
        return _canonical_items(self.coeffs)

    def __eq__(self, other) -> bool:
        if not isinstance(other, _BilinearExpansion):
            return NotImplemented
        return self.n == other.n and self.items() == other.items()

    def __hash__(self):  # pragma: no cover - expansions are not dict keys
        return hash((self.n, tuple(self.items())))

    def to_records(self) -> list[dict[str, str]]:
        """JSON-ready records {lambda, mu, coeff} in canonical order."""
        return [
            {
                "lambda": format_partition(lam),
                "mu": format_partition(mu),
                "coeff": format_rational(c),
            }
            for (lam, mu), c in self.items()
        ]

    @classmethod
    def from_records(cls, n: int, records: Iterable[Mapping[str, str]]):
        coeffs = {
            (parse_partition(r["lambda"]), parse_partition(r["mu"])): parse_rational(
                r["coeff"]
            )
            for r in records
        }
        return cls(n, coeffs)


class MonomialExpansion(_BilinearExpansion):
    """Expansion in m_lam(X) m_mu(Y)."""

    def evaluate(self, xs: Sequence[Fraction], ys: Sequence[Fraction]) -> Fraction:
        return sum(
            (c * eval_monomial(lam, xs) * eval_monomial(mu, ys) for (lam, mu), c in self.items()),
            Fraction(0),
        )


class PowerSumExpansion(_BilinearExpansion):
    """Expansion in p_lam(X) p_mu(Y)."""

    def evaluate(self, xs: Sequence[Fraction], ys: Sequence[Fraction]) -> Fraction:
        return sum(
            (c * eval_power_sum(lam, xs) * eval_power_sum(mu, ys) for (lam, mu), c in self.items()),
            Fraction(0),
        )


def p_in_m_basis(lam: Partition) -> dict[Partition, int]:
    """Expand the power sum p_lam in monomial symmetric functions.

    The coefficient of m_mu is Aut_mu times the number of ways to merge the
    parts of ``lam`` into the parts of ``mu``; the support consists exactly
    of the coarsenings of ``lam``.
    """
    return {mu: aut(mu) * r for mu, r in coarsening_counts(lam).items()}


def to_monomial(series: PowerSumExpansion) -> MonomialExpansion:
    """Apply the p -> m basis change in both alphabets, exactly."""
    out: dict[Key, Fraction] = {}
    for (lam, mu), c in series.items():
        left = p_in_m_basis(lam)
        right = p_in_m_basis(mu)
        for nu, a in left.items():
            for rho, b in right.items():
                key = (nu, rho)
                out[key] = out.get(key, Fraction(0)) + c * a * b
    return MonomialExpansion(series.n, {k: v for k, v in out.items() if v != 0})


def eval_monomial(lam: Partition, eigs: Sequence[Fraction]) -> Fraction:
    """m_lam at a finite alphabet: sum of the distinct monomials with
    exponent multiset ``lam``."""
    xs = [Fraction(e) for e in eigs]
    ell = lam.length
    if ell == 0:
        return Fraction(1)
    if ell > len(xs):
        return Fraction(0)
    total = Fraction(0)
    # Injective placements over-count each monomial Aut_lam times.
    for pos in itertools.permutations(range(len(xs)), ell):
        term = Fraction(1)
        for part, j in zip(lam, pos):
            term *= xs[j] ** part
        total += term
    return total / aut(lam)


def eval_monomial_ones(lam: Partition, l: int) -> Fraction:
    """m_lam at ``l`` ones: ``(l)_{len(lam)} / Aut_lam``."""
    if l < 0:
        raise ValueError("alphabet size must be >= 0")
    return Fraction(falling(l, lam.length), aut(lam))


def eval_power_sum(lam: Partition, eigs: Sequence[Fraction]) -> Fraction:
    """p_lam at a finite alphabet: product of the power sums of the parts."""
    xs = [Fraction(e) for e in eigs]
    prod = Fraction(1)
    for part in lam:
        prod *= sum((x**part for x in xs), Fraction(0))
    return prod
