"""Named verification suites: each cross-checks a closed formula against an
independent oracle and reports one pass/fail line per check.

Shared by the command-line ``verify`` subcommand and the acceptance tests.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from . import closedform as cf
from . import forests as fo
from . import hypermaps as hm
from . import moments as mo
from .arrays import enumerate_M
from .partitions import (
    Partition,
    aut,
    coarsening_counts,
    falling,
    odd_double_factorial,
    partitions_of,
)

__all__ = ["CheckResult", "run_suite", "SUITES", "coeffs_self_check", "lp_from_pairings"]


@dataclass(frozen=True)
class CheckResult:
    name: str
    ok: bool
    detail: str = ""

    def line(self) -> str:
        return f"{'PASS' if self.ok else 'FAIL'} {self.name}" + (
            f": {self.detail}" if self.detail else ""
        )


def lp_from_pairings(n: int) -> dict:
    """Partitioned-hypermap counts derived from the pairing classification
    through the refinement identity; works beyond the direct enumeration
    bound.  Keys are (white type, black type, r)."""
    table = hm.L_table(n)
    out: dict[tuple[Partition, Partition, int], int] = {}
    for (lam, mu, r), c in table.entries.items():
        for nu, r1 in coarsening_counts(lam).items():
            for rho, r2 in coarsening_counts(mu).items():
                key = (nu, rho, r)
                out[key] = out.get(key, 0) + r1 * r2 * c
    return out


def _sum_r(lp: dict) -> dict:
    agg: dict[tuple[Partition, Partition], int] = {}
    for (nu, rho, _), c in lp.items():
        agg[(nu, rho)] = agg.get((nu, rho), 0) + c
    return agg


def suite_bijection(n_max: int = 5, forest_n_max: int = 4) -> list[CheckResult]:
    """Round trips both ways plus forest validity and degree preservation."""
    results = []
    for n in range(1, n_max + 1):
        count = 0
        bad = None
        for h in hm.iter_partitioned_hypermaps(n, bound=max(n_max, 5)):
            forest = fo.theta_forward(h)
            if fo.validate_forest(forest):
                bad = f"invalid forest for {h}"
                break
            if fo.forest_degree(forest) != hm.degree_array(h):
                bad = f"degree mismatch for {h}"
                break
            if fo.theta_inverse(forest) != h:
                bad = f"round trip failed for {h}"
                break
            count += 1
        results.append(
            CheckResult(
                f"bijection/hypermap-round-trip n={n}",
                bad is None,
                bad or f"{count} objects",
            )
        )
    for n in range(1, min(forest_n_max, n_max) + 1):
        oracle = hm.lp_by_array(n)
        checked = 0
        bad = None
        for lam in partitions_of(n):
            for mu in partitions_of(n):
                for r in range(n // 2 + 1):
                    for a in enumerate_M(lam, mu, r):
                        forests = fo.enumerate_forests(a, max_n=forest_n_max)
                        if len(forests) != oracle.get(a, 0):
                            bad = f"count mismatch at {a}"
                            break
                        for forest in forests:
                            if fo.theta_forward(fo.theta_inverse(forest)) != forest:
                                bad = f"reverse round trip failed at {a}"
                                break
                        checked += len(forests)
        results.append(
            CheckResult(
                f"bijection/forest-round-trip n={n}",
                bad is None,
                bad or f"{checked} forests",
            )
        )
    return results


def suite_strata(n_max: int = 5) -> list[CheckResult]:
    """Per-stratum formula against the enumeration oracle, the flagged-set
    sanity, the full expansion assembly, and the aggregated counts."""
    results = []
    flagged_seen = []
    for n in range(1, n_max + 1):
        oracle = hm.lp_by_array(n)
        mismatches = 0
        strata = 0
        groups: dict[tuple[int, int, int, int, int], list] = {}
        for lam in partitions_of(n):
            for mu in partitions_of(n):
                for r in range(n // 2 + 1):
                    for a in enumerate_M(lam, mu, r):
                        strata += 1
                        key = (
                            a.num_white + 1,
                            a.num_white_root,
                            a.num_black,
                            a.num_black_root,
                            r,
                        )
                        groups.setdefault(key, []).append(a)
                        sv = cf.F_formula(a, n)
                        if sv.well_defined:
                            if sv.value != oracle.get(a, 0):
                                mismatches += 1
                        else:
                            flagged_seen.append((n, lam, mu, r, a, oracle.get(a, 0)))
        results.append(
            CheckResult(
                f"strata/per-stratum-count n={n}",
                mismatches == 0,
                f"{strata} strata, {mismatches} mismatches",
            )
        )
        agg_bad = 0
        for (p, pp, q, qp, r), arrays in groups.items():
            fc = cf.F_counts(p, pp, q, qp, r, n)
            values = [cf.F_formula(a, n) for a in arrays]
            if all(v.well_defined for v in values):
                if fc.value != sum(v.value for v in values):
                    agg_bad += 1
            if fc.value != sum(oracle.get(a, 0) for a in arrays):
                agg_bad += 1
        results.append(
            CheckResult(
                f"strata/aggregated-count n={n}",
                agg_bad == 0,
                f"{len(groups)} profiles",
            )
        )
        lp = _sum_r(hm.lp_table(n))
        expansion = cf.real_expansion(n)
        exp_bad = sum(
            1
            for lam in partitions_of(n)
            for mu in partitions_of(n)
            if expansion.coeff(lam, mu) != aut(lam) * aut(mu) * lp.get((lam, mu), 0)
        )
        symmetric = all(
            expansion.coeff(lam, mu) == expansion.coeff(mu, lam)
            for lam in partitions_of(n)
            for mu in partitions_of(n)
        )
        results.append(
            CheckResult(
                f"strata/real-expansion n={n}",
                exp_bad == 0 and symmetric,
                f"{exp_bad} coefficient mismatches",
            )
        )
    documented = any(
        n == 2 and lam == Partition([2]) and mu == Partition([2]) and r == 1 and lp == 1
        for n, lam, mu, r, _, lp in flagged_seen
    )
    results.append(
        CheckResult(
            "strata/flagged-set",
            documented,
            f"{len(flagged_seen)} flagged strata, documented boundary case "
            + ("present" if documented else "MISSING"),
        )
    )
    return results


def suite_complex(n_max: int = 7) -> list[CheckResult]:
    """Complex coefficients against the orientable slice of the oracle."""
    results = []
    for n in range(1, n_max + 1):
        lp = lp_from_pairings(n)
        bad = 0
        zero_cases = 0
        for lam in partitions_of(n):
            for mu in partitions_of(n):
                expect = aut(lam) * aut(mu) * lp.get((lam, mu, 0), 0)
                if cf.complex_coeff(n, lam, mu) != expect:
                    bad += 1
                if lam.length + mu.length > n + 1:
                    zero_cases += 1
                    if cf.complex_coeff(n, lam, mu) != 0:
                        bad += 1
        series_ok = cf.complex_expansion(n) == cf.oracle_monomial_expansion(n, "complex")
        results.append(
            CheckResult(
                f"complex/coefficients n={n}",
                bad == 0 and series_ok,
                f"{zero_cases} zero cases included",
            )
        )
    return results


def suite_corollaries(n_max_real: int = 5, n_max_complex: int = 7, lm_max: int = 5):
    """Identity-matrix specializations against both oracle routes."""
    results = []
    for n in range(1, n_max_real + 1):
        table = hm.L_table(n)
        lp = lp_from_pairings(n)
        lp_len: dict[tuple[int, int, int], int] = {}
        for (nu, rho, r), c in lp.items():
            key = (nu.length, rho.length, r)
            lp_len[key] = lp_len.get(key, 0) + c
        bad = 0
        for l in range(0, lm_max + 1):
            for m in range(0, lm_max + 1):
                qr = cf.q_real(n, l, m)
                via_b = sum(
                    Fraction(c) * l**lam.length * m**mu.length
                    for (lam, mu, _), c in table.entries.items()
                )
                via_lp = sum(
                    Fraction(c) * falling(l, p) * falling(m, q)
                    for (p, q, _), c in lp_len.items()
                )
                if not (qr == via_b == via_lp):
                    bad += 1
        results.append(
            CheckResult(f"corollaries/real n={n}", bad == 0, f"l,m <= {lm_max}")
        )
    for n in range(1, n_max_complex + 1):
        table = hm.L_table(n)
        bad = 0
        for l in range(0, lm_max + 1):
            for m in range(0, lm_max + 1):
                via_c = sum(
                    Fraction(c) * l**lam.length * m**mu.length
                    for (lam, mu, r), c in table.entries.items()
                    if r == 0
                )
                if cf.q_compl(n, l, m) != via_c:
                    bad += 1
        results.append(
            CheckResult(f"corollaries/complex n={n}", bad == 0, f"l,m <= {lm_max}")
        )
    return results


def suite_special(n_max: int = 6) -> list[CheckResult]:
    """Single-black-vertex and hook coefficients plus the cell-sum identity."""
    results = []
    for n in range(1, n_max + 1):
        lp = _sum_r(lp_from_pairings(n))
        bad = []
        for lam in partitions_of(n):
            expect = aut(lam) * lp.get((lam, Partition([n])), 0)
            if cf.coeff_m_lambda_m_n(n, lam) != expect:
                bad.append(f"m_{lam} x m_n")
        for a in range(0, n + 1):
            value = cf.coeff_hook(n, a)
            if 2 * a <= n - 1:
                hook = Partition([n - a] + [1] * a)
                expect = aut(hook) ** 2 * lp.get((hook, hook), 0)
                if value != expect:
                    bad.append(f"hook a={a}")
            elif value != 0:
                bad.append(f"hook a={a} should vanish")
        for lam in partitions_of(n):
            if not cf.remark_identity_check(lam):
                bad.append(f"cell-sum identity at {lam}")
        results.append(
            CheckResult(f"special/coefficients n={n}", not bad, "; ".join(bad))
        )
    return results


def suite_mc(samples: int = 200_000, seed: int = 20240801) -> list[CheckResult]:
    """Monte Carlo estimates against exact values, |z| <= 5."""
    results = []
    configs = [(1, 2), (2, 2), (2, 3), (3, 2)]
    for n, m in configs:
        ident = mo.MatrixSpec.identity(m)
        exact_r = mo.moment_real_exact(n, ident, ident)
        est_r = mo.mc_moment_real(n, ident, ident, samples, seed)
        z_r = est_r.z_score(float(exact_r))
        results.append(
            CheckResult(
                f"mc/real n={n} m={m}",
                abs(z_r) <= 5,
                f"mean={est_r.mean:.4f} exact={float(exact_r):.4f} z={z_r:+.2f}",
            )
        )
        exact_c = mo.moment_complex_exact(n, ident, ident)
        est_c = mo.mc_moment_complex(n, ident, ident, samples, seed + 1)
        z_c = est_c.z_score(float(exact_c))
        results.append(
            CheckResult(
                f"mc/complex n={n} m={m}",
                abs(z_c) <= 5,
                f"mean={est_c.mean:.4f} exact={float(exact_c):.4f} z={z_c:+.2f}",
            )
        )
    # one non-trivial rational-eigenvalue pair
    x = mo.MatrixSpec.from_eigs([Fraction(3, 2), Fraction(-1, 2)])
    y = mo.MatrixSpec.from_eigs([Fraction(1, 3), 2])
    for field, exact, estimator in (
        ("real", mo.moment_real_exact(2, x, y), mo.mc_moment_real),
        ("complex", mo.moment_complex_exact(2, x, y), mo.mc_moment_complex),
    ):
        est = estimator(2, x, y, samples, seed + 2)
        z = est.z_score(float(exact))
        results.append(
            CheckResult(
                f"mc/{field} rational eigenvalues n=2",
                abs(z) <= 5,
                f"mean={est.mean:.4f} exact={float(exact):.4f} z={z:+.2f}",
            )
        )
    rerun = mo.mc_moment_real(2, mo.MatrixSpec.identity(2), mo.MatrixSpec.identity(2), samples, seed)
    rerun2 = mo.mc_moment_real(2, mo.MatrixSpec.identity(2), mo.MatrixSpec.identity(2), samples, seed)
    results.append(
        CheckResult(
            "mc/fixed-seed-reproducible",
            (rerun.mean, rerun.std_error) == (rerun2.mean, rerun2.std_error),
        )
    )
    return results


def coeffs_self_check(n: int) -> list[CheckResult]:
    """Internal cross-checks behind the coefficient tables: pairing totals,
    the class-algebra route (n <= 8), the double-coset route and coset
    sizes (n <= 3)."""
    results = []
    table = hm.L_table(n)
    expected = odd_double_factorial(n)
    results.append(
        CheckResult(
            f"coeffs/pairing-total n={n}",
            table.total() == expected,
            f"{table.total()} == (2n-1)!! = {expected}",
        )
    )
    if n <= hm.DEFAULT_CLASS_BOUND:
        c_direct = hm.c_from_L(table)
        bad = sum(
            1
            for lam in partitions_of(n)
            for mu in partitions_of(n)
            if hm.class_connection(n, lam, mu) != c_direct.get((lam, mu), 0)
        )
        results.append(CheckResult(f"coeffs/class-algebra n={n}", bad == 0))
    if n <= hm.DEFAULT_COSET_BOUND:
        b_direct = hm.b_from_L(table)
        _, _, sizes = hm.double_coset_data(n)
        bad = sum(
            1
            for lam in partitions_of(n)
            for mu in partitions_of(n)
            if hm.double_coset_connection(n, lam, mu) != b_direct.get((lam, mu), 0)
        )
        size_bad = sum(
            1
            for lam in partitions_of(n)
            if sizes.get(lam, 0) != hm.expected_coset_size(n, lam)
        )
        results.append(
            CheckResult(
                f"coeffs/double-coset n={n}",
                bad == 0 and size_bad == 0,
                f"coset sizes verified for {len(partitions_of(n))} types",
            )
        )
    # commutativity of both algebras
    sym_bad = sum(
        1
        for lam in partitions_of(n)
        for mu in partitions_of(n)
        if sum(table.get(lam, mu, r) for r in range(n + 1))
        != sum(table.get(mu, lam, r) for r in range(n + 1))
        or table.get(lam, mu, 0) != table.get(mu, lam, 0)
    )
    results.append(CheckResult(f"coeffs/symmetry n={n}", sym_bad == 0))
    return results


SUITES = {
    "bijection": suite_bijection,
    "strata": suite_strata,
    "complex": suite_complex,
    "corollaries": suite_corollaries,
    "mc": suite_mc,
    "special": suite_special,
}


def run_suite(name: str, n_max: int | None = None, **kwargs) -> list[CheckResult]:
    if name not in SUITES:
        raise ValueError(f"unknown suite {name!r}; choose from {sorted(SUITES)}")
    fn = SUITES[name]
    if name == "mc":
        return fn(**kwargs)
    if n_max is None:
        return fn()
    if name == "corollaries":
        return fn(n_max_real=min(n_max, 5), n_max_complex=n_max)
    if name == "bijection":
        return fn(n_max=n_max, forest_n_max=min(n_max, 4))
    return fn(n_max)
