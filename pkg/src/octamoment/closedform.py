"""Closed-form evaluation of the moment expansions and their stratum counts.

The trace moments of ``X U Y U^t`` (real Gaussian ``U``) expand over pairs
of partitions, and each coefficient splits into strata indexed by an
:class:`~octamoment.arrays.ArrayTuple`.  This module evaluates the
per-stratum count ``F_formula``, the aggregated count ``F_counts``, the
full real and complex expansions, the identity-matrix specializations, and
the special coefficient formulas, all in exact rational arithmetic.

Degenerate strata
-----------------
The per-stratum formula is generic: on boundary strata (``q = 0`` with
``r > 0``, or ``n - 1 - p - 2r < 0``) it produces 0*inf / 0/0 shapes.  The
evaluators never guess a limit.  Each such evaluation is returned as a
:class:`StratumValue` with ``well_defined=False`` and diagnostics naming
the offending factor; expansion assembly substitutes the enumeration
oracle for flagged strata (or reports them in strict mode).  Negative
arguments in numerator-position factorials evaluate to 0 so the reported
value stays deterministic; the factor ``1/(n-p-q-2r)!`` follows the
reciprocal-factorial convention (0 at negative integers), which is not a
degeneracy: it encodes the vanishing thorn count.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import factorial
from .arrays import ArrayTuple, enumerate_M
from .hypermaps import DEFAULT_PARTITIONED_BOUND, lp_by_array
from .partitions import (
    Partition,
    aut,
    format_partition,
    inv_factorial,
    multinomial,
    odd_double_factorial,
    partitions_of,
)
from .symfun import MonomialExpansion, PowerSumExpansion, to_monomial

__all__ = [
    "StratumValue",
    "DegenerateStratum",
    "I_of_A",
    "F_formula",
    "F_counts",
    "alpha",
    "real_expansion",
    "real_expansion_strict",
    "real_expansion_report",
    "complex_coeff",
    "complex_expansion",
    "q_real",
    "q_compl",
    "coeff_m_lambda_m_n",
    "coeff_hook",
    "remark_identity_check",
    "pairing_power_sum_series",
    "oracle_monomial_expansion",
    "DegenerateStrataError",
]


@dataclass(frozen=True)
class StratumValue:
    """Result of a guarded formula evaluation.

    ``well_defined`` is False iff a degenerate evaluation was hit; the
    value is still reported (with flagged factors evaluated as 0) but must
    not be trusted without the diagnostics.
    """

    value: Fraction
    well_defined: bool = True
    diagnostics: tuple[str, ...] = ()


def _sum_q_root(a: ArrayTuple, weight) -> Fraction:
    return sum((Fraction(weight(i, j)) * c for i, j, c in a.black_root), Fraction(0))


def _sum_white(a: ArrayTuple, weight) -> Fraction:
    return sum((Fraction(weight(i, j)) * c for i, j, c in a.white), Fraction(0))


def I_of_A(a: ArrayTuple, n: int) -> StratumValue:
    """The seed factor of the per-stratum count.

    For ``r = 0`` it is the seed degree; for ``r > 0`` it is the bracketed
    rational expression whose third term divides by ``n - q - 2r``.  When
    that divisor vanishes the term is defined as 0 (and flagged) if its
    white-side sum vanishes, otherwise the stratum evaluation is aborted
    (also flagged).
    """
    r = a.loop_pairs
    i0, j0 = a.seed_degree, a.seed_loops
    if r == 0:
        return StratumValue(Fraction(i0))
    p, q = a.num_white, a.num_black
    s1 = _sum_q_root(a, lambda i, j: j)
    s2 = _sum_q_root(a, lambda i, j: (n - q) * j - i * r)
    s3 = _sum_white(a, lambda i, j: i0 * j - j0 * (i - 1))
    base = multinomial(i0, [j0, j0])
    bracket = Fraction(i0 - 2 * j0) + s1 * (j0 * (n - p) - r * i0) / r**2
    denom = n - q - 2 * r
    if denom == 0:
        if s3 == 0:
            return StratumValue(
                base * bracket,
                well_defined=False,
                diagnostics=("third term 0/0 (n-q-2r = 0, white sum = 0): defined as 0",),
            )
        return StratumValue(
            base * bracket,
            well_defined=False,
            diagnostics=("third term divides by n-q-2r = 0 with nonzero white sum",),
        )
    bracket += s2 * s3 / (r**2 * denom)
    return StratumValue(base * bracket)


def _binomial_weight(a: ArrayTuple) -> Fraction:
    prod = Fraction(1)
    for i, j, c in a.white + a.black:
        prod *= multinomial(i - 1, [j, j]) ** c
    for i, j, c in a.white_root + a.black_root:
        prod *= multinomial(i - 1, [j, j - 1]) ** c
    return prod


def F_formula(a: ArrayTuple, n: int) -> StratumValue:
    """Number of forests (equivalently partitioned hypermaps) with degree
    array ``a``, by the closed formula.

    The removable factor ``(n-q-2r)!/(n-q-2r)`` arising between the seed
    bracket and the factorial prefactor is simplified to ``(n-q-2r-1)!``
    before any convention is applied, so the third term carries its own
    factorial.  Flags follow the module convention: any negative-argument
    factorial in numerator position marks the stratum degenerate and
    contributes 0 to the reported value.
    """
    r = a.loop_pairs
    p, pp = a.num_white, a.num_white_root
    q, qp = a.num_black, a.num_black_root
    i0, j0 = a.seed_degree, a.seed_loops
    weight = _binomial_weight(a)
    afact = a.factorial_product()
    thorn = inv_factorial(n - p - q - 2 * r)

    if r == 0:
        value = (
            Fraction(i0)
            * factorial(n - q)
            * factorial(n - 1 - p)
            * thorn
            / afact
            * weight
        )
        return StratumValue(value)

    diagnostics: list[str] = []

    def guarded_factorial(arg: int, name: str) -> Fraction:
        if arg < 0:
            diagnostics.append(f"negative factorial argument {name} = {arg}")
            return Fraction(0)
        return Fraction(factorial(arg))

    s1 = _sum_q_root(a, lambda i, j: j)
    s2 = _sum_q_root(a, lambda i, j: (n - q) * j - i * r)
    s3 = _sum_white(a, lambda i, j: i0 * j - j0 * (i - 1))
    base = multinomial(i0, [j0, j0])
    head = Fraction(i0 - 2 * j0) + s1 * (j0 * (n - p) - r * i0) / r**2

    fact_a = guarded_factorial(n - q - 2 * r, "(n-q-2r)!")
    fact_b = guarded_factorial(n - 1 - p - 2 * r, "(n-1-p-2r)!")
    third = s2 * s3 / r**2
    fact_c = guarded_factorial(n - q - 2 * r - 1, "(n-q-2r-1)!")

    bracket = head * fact_a + third * fact_c
    value = (
        base
        * bracket
        * factorial(r) ** 2
        * fact_b
        * thorn
        * Fraction(2) ** (pp + qp - 2 * r)
        * weight
        / afact
    )
    return StratumValue(value, well_defined=not diagnostics, diagnostics=tuple(diagnostics))


def alpha(r: int, p: int, q: int, pp: int, qp: int) -> Fraction:
    """Loop-placement coefficient of the aggregated forest count.

    ``alpha(0, p, q, pp, qp)`` is 1 iff ``pp = qp = 0``.  For ``r > 0`` it
    is a double sum over half-integer-argument binomials.  The published
    display of this sum is too small by a factor ``2^{pp+qp}``: it is
    inconsistent with the per-stratum count (desk check: at
    ``(r,p,q,pp,qp) = (1,1,0,0,1)``, n = 3, the forests number 6, not 3).
    The corrected value used here is validated exhaustively against the
    enumeration oracle in the test suite.
    """
    if min(r, p, q, pp, qp) < 0:
        raise ValueError("alpha arguments must be nonnegative")
    if r == 0:
        return Fraction(1) if pp == 0 and qp == 0 else Fraction(0)
    total = Fraction(0)
    for a in range(pp + 1):
        for b in range(qp + 1):
            sign = -1 if (pp + qp - a - b) % 2 else 1
            inner = Fraction(p, p + a)
            if a * q:
                inner *= 1 + Fraction(a * q, (p + 2 * r) * (q + b))
            term = (
                sign
                * inner
                * multinomial(Fraction(-(p + a), 2), [r])
                * multinomial(Fraction(-(q + b), 2), [r])
                * multinomial(pp, [a])
                * multinomial(qp, [b])
            )
            total += term
    return Fraction(2) ** (pp + qp) * total


def F_counts(p: int, pp: int, q: int, qp: int, r: int, n: int) -> StratumValue:
    """Total number of forests with ``p`` internal white vertices (the seed
    root counted as internal, so ``p >= 1``), ``pp`` white roots, ``q``
    internal black vertices, ``qp`` black roots and ``r`` loops per side."""
    if p < 1:
        raise ValueError("p counts the seed root, so p >= 1")
    if min(pp, q, qp, r) < 0 or n < 1:
        raise ValueError("arguments out of range")
    denominator = multinomial(n + 2 * r - 1, [r, r])
    if denominator == 0:
        return StratumValue(
            Fraction(0),
            well_defined=False,
            diagnostics=(f"inverse multinomial vanishes at n = {n}, r = {r}",),
        )
    value = (
        Fraction(factorial(n), factorial(p) * factorial(pp) * factorial(q) * factorial(qp))
        * multinomial(n + 2 * r - 1, [p + 2 * r - 1, q + 2 * r - 1])
        / denominator
        * Fraction(2) ** (2 * r - pp - qp)
        * alpha(r, p, q, pp, qp)
    )
    return StratumValue(value)


@dataclass(frozen=True)
class DegenerateStratum:
    """One flagged stratum of an expansion assembly."""

    n: int
    lam: Partition
    mu: Partition
    r: int
    array: ArrayTuple
    formula_value: Fraction
    diagnostics: tuple[str, ...]
    oracle_value: int | None = None

    def to_json(self) -> dict:
        record = {
            "n": self.n,
            "lambda": format_partition(self.lam),
            "mu": format_partition(self.mu),
            "r": self.r,
            "A": self.array.to_json(),
            "formula_status": "; ".join(self.diagnostics) or "degenerate",
        }
        if self.oracle_value is not None:
            record["oracle_value"] = self.oracle_value
        return record


def _assemble_real(n: int, oracle_bound: int | None):
    """Common real-moment assembly: per-(lam, mu) coefficients with oracle
    substitution on flagged strata when an oracle bound permits."""
    coeffs: dict[tuple[Partition, Partition], Fraction] = {}
    report: list[DegenerateStratum] = []
    oracle = None
    if oracle_bound is not None and n <= oracle_bound:
        oracle = lp_by_array(n, bound=oracle_bound)
    for lam in partitions_of(n):
        for mu in partitions_of(n):
            total = Fraction(0)
            for r in range(n // 2 + 1):
                for a in enumerate_M(lam, mu, r):
                    sv = F_formula(a, n)
                    if sv.well_defined:
                        total += sv.value
                        continue
                    oracle_value = oracle.get(a, 0) if oracle is not None else None
                    report.append(
                        DegenerateStratum(
                            n, lam, mu, r, a, sv.value, sv.diagnostics, oracle_value
                        )
                    )
                    if oracle_value is not None:
                        total += oracle_value
            if total:
                coeffs[(lam, mu)] = aut(lam) * aut(mu) * total
    return coeffs, report


def real_expansion(
    n: int, oracle_bound: int = DEFAULT_PARTITIONED_BOUND
) -> MonomialExpansion:
    """Monomial expansion of the order-n real moment, substituting the
    enumeration oracle on flagged strata.

    Raises when a flagged stratum falls beyond the oracle bound; use
    :func:`real_expansion_strict` to inspect such strata instead.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    coeffs, report = _assemble_real(n, oracle_bound)
    missing = [d for d in report if d.oracle_value is None]
    if missing:
        raise DegenerateStrataError(missing)
    return MonomialExpansion(n, coeffs)


class DegenerateStrataError(ValueError):
    """Flagged strata could not be resolved by the oracle."""

    def __init__(self, strata: list[DegenerateStratum]):
        super().__init__(
            f"{len(strata)} flagged strata beyond the oracle bound; "
            "first: " + "; ".join(strata[0].diagnostics)
        )
        self.strata = strata


def real_expansion_strict(
    n: int,
) -> tuple[MonomialExpansion, list[DegenerateStratum]]:
    """Real-moment assembly without oracle substitution.

    Refuses to emit any coefficient whose strata include a flagged value;
    those (lam, mu) pairs appear only in the returned report.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    coeffs, report = _assemble_real(n, oracle_bound=None)
    tainted = {(d.lam, d.mu) for d in report}
    clean = {key: value for key, value in coeffs.items() if key not in tainted}
    return MonomialExpansion(n, clean), report


def real_expansion_report(
    n: int, oracle_bound: int = DEFAULT_PARTITIONED_BOUND
) -> list[DegenerateStratum]:
    """Machine-readable discrepancy report for the order-n real assembly."""
    bound = oracle_bound if n <= oracle_bound else None
    _, report = _assemble_real(n, bound)
    return report


def complex_coeff(n: int, lam, mu) -> Fraction:
    """Coefficient of m_lam(X) m_mu(Y) in the order-n complex moment:
    ``n (n-len(lam))! (n-len(mu))! / (n+1-len(lam)-len(mu))!``, which is 0
    when the lengths exceed n+1 in total."""
    lam, mu = Partition(lam), Partition(mu)
    if lam.n != n or mu.n != n:
        raise ValueError("lam and mu must partition n")
    return (
        n
        * factorial(n - lam.length)
        * factorial(n - mu.length)
        * inv_factorial(n + 1 - lam.length - mu.length)
    )


def complex_expansion(n: int) -> MonomialExpansion:
    """Monomial expansion of the order-n complex moment."""
    if n < 1:
        raise ValueError("n must be >= 1")
    coeffs = {}
    for lam in partitions_of(n):
        for mu in partitions_of(n):
            c = complex_coeff(n, lam, mu)
            if c:
                coeffs[(lam, mu)] = c
    return MonomialExpansion(n, coeffs)


def q_real(n: int, l: int, m: int) -> Fraction:
    """Order-n real moment of the pair of projectors (I_l, I_m).

    Finite sum over ``(r, p, q, pp, qp)`` with ``p >= 1`` and
    ``q + qp >= 1``; all ranges close on their own because the projector
    multinomials vanish beyond ``p + pp <= l``, ``q + qp <= m`` and the
    central multinomial vanishes once ``p + q + 2r > n + 1``.
    """
    if l < 0 or m < 0:
        raise ValueError("matrix ranks must be >= 0")
    total = Fraction(0)
    for p in range(1, l + 1):
        for pp in range(0, l - p + 1):
            for q in range(0, m + 1):
                for qp in range(max(0, 1 - q), m - q + 1):
                    for r in range(0, max(0, (n + 1 - p - q) // 2 + 1)):
                        a = alpha(r, p, q, pp, qp)
                        if a == 0:
                            continue
                        term = (
                            multinomial(l, [p, pp])
                            * multinomial(m, [q, qp])
                            * multinomial(n + 2 * r - 1, [p + 2 * r - 1, q + 2 * r - 1])
                            / multinomial(n + 2 * r - 1, [r, r])
                            * Fraction(2) ** (2 * r - pp - qp)
                            * a
                        )
                        total += term
    return factorial(n) * total


def q_compl(n: int, l: int, m: int) -> Fraction:
    """Order-n complex moment of (I_l, I_m):
    ``n! sum_{p,q>=1} C(l;p) C(m;q) C(n-1; p-1, q-1)``."""
    if l < 0 or m < 0:
        raise ValueError("matrix ranks must be >= 0")
    total = Fraction(0)
    for p in range(1, l + 1):
        for q in range(1, m + 1):
            total += (
                multinomial(l, [p])
                * multinomial(m, [q])
                * multinomial(n - 1, [p - 1, q - 1])
            )
    return factorial(n) * total


def coeff_m_lambda_m_n(n: int, lam) -> int:
    """Coefficient of m_lam(X) m_(n)(Y) in the real expansion:
    the multinomial of the parts times the product of odd double
    factorials of the parts."""
    lam = Partition(lam)
    if lam.n != n:
        raise ValueError("lam must partition n")
    value = multinomial(n, list(lam))
    for part in lam:
        value *= odd_double_factorial(part)
    if value.denominator != 1:
        raise AssertionError("coefficient must be integral")
    return value.numerator


def coeff_hook(n: int, a: int) -> int:
    """Coefficient of m_(n-a,1^a)(X) m_(n-a,1^a)(Y) in the real expansion;
    0 unless ``2a <= n - 1``."""
    if a < 0:
        raise ValueError("a must be >= 0")
    if 2 * a > n - 1:
        return 0
    ratio = Fraction(factorial(n - a - 1), factorial(n - 2 * a))
    value = n * (n - 2 * a) * ratio**2 * odd_double_factorial(n - 2 * a)
    if value.denominator != 1:
        raise AssertionError("coefficient must be integral")
    return value.numerator


def _black_side_distributions(lam: Partition):
    """All (black, black_root) cell fillings with row sums given by the
    multiplicities of lam; no weight constraint."""
    from .arrays import _side_distributions  # shared cell machinery

    max_weight = sum(part // 2 for part in lam)
    yield from _side_distributions(lam.multiplicities(), max_weight, 1)


def remark_identity_check(lam) -> bool:
    """Check that the black-side cell sum collapses to
    ``(2 lam - 1)!! / (lam! Aut_lam)``.

    The left side sums, over all fillings of the black arrays with row
    sums the multiplicities of ``lam``, the product of
    ``2^{root - 2 j (cells)}`` and the cell binomials divided by the cell
    factorials.
    """
    lam = Partition(lam)
    lhs = Fraction(0)
    for black, black_root, _ in _black_side_distributions(lam):
        term = Fraction(1)
        for (i, j), c in black.items():
            term *= (
                Fraction(2) ** (-2 * j * c)
                * multinomial(i - 1, [j, j]) ** c
                * inv_factorial(c)
            )
        for (i, j), c in black_root.items():
            term *= (
                Fraction(2) ** ((1 - 2 * j) * c)
                * multinomial(i - 1, [j, j - 1]) ** c
                * inv_factorial(c)
            )
        lhs += term
    rhs_num = 1
    rhs_den = aut(lam)
    for part in lam:
        rhs_num *= odd_double_factorial(part)
        rhs_den *= factorial(part)
    return lhs == Fraction(rhs_num, rhs_den)


def pairing_power_sum_series(n: int, kind: str = "real") -> PowerSumExpansion:
    """The power-sum series whose basis change reproduces the expansions:
    pairing counts (real) or their orientable slice (complex) as
    coefficients of p_lam(X) p_mu(Y).  Oracle route; small n only."""
    from .hypermaps import L_table

    table = L_table(n)
    coeffs: dict[tuple[Partition, Partition], Fraction] = {}
    for (lam, mu, r), c in table.entries.items():
        if kind == "complex" and r != 0:
            continue
        key = (lam, mu)
        coeffs[key] = coeffs.get(key, Fraction(0)) + c
    return PowerSumExpansion(n, coeffs)


def oracle_monomial_expansion(n: int, kind: str = "real") -> MonomialExpansion:
    """Expansion of the oracle power-sum series in monomials; the
    independent route the closed formulas are compared against."""
    return to_monomial(pairing_power_sum_series(n, kind))
