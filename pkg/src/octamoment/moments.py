"""Trace moments of X U Y U^t (real Gaussian U) and X U Y U^* (complex
Gaussian U): exact evaluation of the expansions at eigenvalue lists, and
Monte Carlo estimation on dense matrices.

The exact layer works in rational arithmetic only; the Monte Carlo layer
is double precision.  They meet nowhere except in test harnesses, which
compare estimates against exact values with explicit statistical
tolerances.

Complex normalization: the entries of the complex U have independent
N(0, 1/2) real and imaginary parts, so E|u|^2 = 1.  This is the
convention under which the order-1 moment equals tr(X) tr(Y); the
alternative E|u|^2 = 2 scales the order-n moment by 2^n.

Sampling is reproducible and bit-stable: samples are drawn in fixed-size
shards, shard k of a run with seed s uses the counter-based Philox
generator keyed by ``s + (k << 64)``, and shard results are reduced in
shard order.  ``OCTAMOMENT_THREADS`` caps the shard worker pool.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from math import sqrt
from typing import Sequence

import numpy as np

from .closedform import complex_expansion, real_expansion
from .hypermaps import DEFAULT_PARTITIONED_BOUND
from .partitions import parse_rational

__all__ = [
    "MatrixSpec",
    "MCEstimate",
    "moment_real_exact",
    "moment_complex_exact",
    "mc_moment_real",
    "mc_moment_complex",
    "SHARD_SIZE",
]

SHARD_SIZE = 1 << 14
HERMITIAN_TOL = 1e-12


@dataclass(frozen=True)
class MatrixSpec:
    """A real symmetric or hermitian matrix, given by its eigenvalue list
    (exact rationals) or by dense entries (floats)."""

    dim: int
    eigs: tuple[Fraction, ...] | None = None
    entries: np.ndarray | None = None

    def __post_init__(self) -> None:
        if (self.eigs is None) == (self.entries is None):
            raise ValueError("exactly one of eigs/entries must be given")
        if self.eigs is not None and len(self.eigs) != self.dim:
            raise ValueError("need one eigenvalue per dimension")
        if self.entries is not None:
            m = self.entries
            if m.shape != (self.dim, self.dim):
                raise ValueError("entries must be a dim x dim matrix")
            if np.abs(m - m.conj().T).max() > HERMITIAN_TOL:
                raise ValueError("matrix is not symmetric/hermitian within 1e-12")

    @classmethod
    def from_eigs(cls, eigs: Sequence) -> "MatrixSpec":
        vals = tuple(Fraction(e) for e in eigs)
        return cls(len(vals), eigs=vals)

    @classmethod
    def identity(cls, m: int) -> "MatrixSpec":
        return cls.from_eigs([1] * m)

    @classmethod
    def projector(cls, l: int, m: int) -> "MatrixSpec":
        """Diagonal matrix with l ones then m - l zeros."""
        return cls.from_eigs([1] * l + [0] * (m - l))

    @classmethod
    def from_dense(cls, entries) -> "MatrixSpec":
        arr = np.asarray(entries)
        if np.iscomplexobj(arr):
            arr = arr.astype(np.complex128)
        else:
            arr = arr.astype(np.float64)
        return cls(arr.shape[0], entries=arr)

    @classmethod
    def from_json(cls, data: dict) -> "MatrixSpec":
        if "eigs" in data:
            return cls.from_eigs([parse_rational(str(e)) for e in data["eigs"]])
        rows = []
        for row in data["entries"]:
            out_row = []
            for x in row:
                if isinstance(x, (list, tuple)):
                    out_row.append(complex(x[0], x[1]))
                else:
                    out_row.append(x)
            rows.append(out_row)
        spec = cls.from_dense(np.array(rows))
        if spec.dim != data.get("dim", spec.dim):
            raise ValueError("declared dim does not match the matrix")
        return spec

    def dense(self) -> np.ndarray:
        if self.entries is not None:
            return self.entries
        return np.diag(np.array([float(e) for e in self.eigs], dtype=np.float64))

    def exact_eigs(self) -> tuple[Fraction, ...]:
        if self.eigs is None:
            raise ValueError("dense matrices have no exact eigenvalue list")
        return self.eigs


@dataclass(frozen=True)
class MCEstimate:
    """Monte Carlo estimate with its standard error; reproducible given
    (seed, samples, n, matrices)."""

    mean: float
    std_error: float
    samples: int
    seed: int
    n: int
    dim: int

    def z_score(self, exact: float) -> float:
        return (self.mean - exact) / self.std_error if self.std_error else float("inf")

    def to_json(self, exact: Fraction | None = None) -> dict:
        record = {
            "mean": self.mean,
            "std_error": self.std_error,
            "samples": self.samples,
            "seed": self.seed,
            "n": self.n,
            "dim": self.dim,
        }
        if exact is not None:
            record["exact"] = float(exact)
            record["z_score"] = self.z_score(float(exact))
        return record


def moment_real_exact(
    n: int,
    x: MatrixSpec,
    y: MatrixSpec,
    route: str = "closed",
    oracle_bound: int = DEFAULT_PARTITIONED_BOUND,
    strict: bool = False,
) -> Fraction:
    """Exact order-n moment of X U Y U^t for real Gaussian U.

    ``route="closed"`` evaluates the closed-form expansion (flagged strata
    resolved by the enumeration oracle); ``route="oracle"`` evaluates the
    power-sum series built from the pairing classification.  The two
    agree; tests pin that down.  With ``strict=True`` flagged strata are
    not substituted: a nonempty report raises
    :class:`~octamoment.closedform.DegenerateStrataError`.
    """
    xs, ys = x.exact_eigs(), y.exact_eigs()
    if route == "closed":
        if strict:
            from .closedform import DegenerateStrataError, real_expansion_strict

            expansion, report = real_expansion_strict(n)
            if report:
                raise DegenerateStrataError(report)
            return expansion.evaluate(xs, ys)
        return real_expansion(n, oracle_bound=oracle_bound).evaluate(xs, ys)
    if route == "oracle":
        from .closedform import pairing_power_sum_series

        return pairing_power_sum_series(n, "real").evaluate(xs, ys)
    raise ValueError(f"unknown route {route!r}")


def moment_complex_exact(n: int, x: MatrixSpec, y: MatrixSpec) -> Fraction:
    """Exact order-n moment of X U Y U^* for complex Gaussian U."""
    return complex_expansion(n).evaluate(x.exact_eigs(), y.exact_eigs())


def _worker_count() -> int:
    raw = os.environ.get("OCTAMOMENT_THREADS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def _shard_layout(samples: int) -> list[tuple[int, int]]:
    """(shard index, shard sample count) pairs; fixed layout for a given
    total so reruns are bit-identical regardless of worker count."""
    shards = []
    k = 0
    remaining = samples
    while remaining > 0:
        take = min(SHARD_SIZE, remaining)
        shards.append((k, take))
        remaining -= take
        k += 1
    return shards


def _shard_rng(seed: int, shard: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(key=(seed % (1 << 64)) + (shard << 64)))


def _trace_power(t: np.ndarray, n: int) -> np.ndarray:
    power = t
    for _ in range(n - 1):
        power = power @ t
    return np.einsum("bii->b", power)


def _mc_moment(
    n: int, x: MatrixSpec, y: MatrixSpec, samples: int, seed: int, complex_field: bool
) -> MCEstimate:
    if samples < 2:
        raise ValueError("need at least 2 samples for a standard error")
    if x.dim != y.dim:
        raise ValueError("X and Y must have equal dimension")
    m = x.dim
    xd, yd = x.dense(), y.dense()
    if complex_field:
        xd = xd.astype(np.complex128)
        yd = yd.astype(np.complex128)

    def run_shard(shard: tuple[int, int]) -> tuple[float, float]:
        k, count = shard
        rng = _shard_rng(seed, k)
        if complex_field:
            u = (
                rng.standard_normal((count, m, m))
                + 1j * rng.standard_normal((count, m, m))
            ) * sqrt(0.5)
            conj = np.conj(np.transpose(u, (0, 2, 1)))
        else:
            u = rng.standard_normal((count, m, m))
            conj = np.transpose(u, (0, 2, 1))
        t = xd @ u @ yd @ conj
        values = _trace_power(t, n)
        values = values.real if complex_field else values
        return float(values.sum()), float(np.square(values).sum())

    shards = _shard_layout(samples)
    workers = _worker_count()
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(run_shard, shards))
    else:
        results = [run_shard(s) for s in shards]

    total = 0.0
    total_sq = 0.0
    for s, sq in results:  # fixed shard order keeps reruns bit-identical
        total += s
        total_sq += sq
    mean = total / samples
    variance = (total_sq - samples * mean * mean) / (samples - 1)
    std_error = sqrt(max(variance, 0.0) / samples)
    return MCEstimate(mean, std_error, samples, seed, n, m)


def mc_moment_real(
    n: int, x: MatrixSpec, y: MatrixSpec, samples: int, seed: int
) -> MCEstimate:
    """Monte Carlo estimate of the order-n real moment: U has i.i.d.
    standard normal entries."""
    return _mc_moment(n, x, y, samples, seed, complex_field=False)


def mc_moment_complex(
    n: int, x: MatrixSpec, y: MatrixSpec, samples: int, seed: int
) -> MCEstimate:
    """Monte Carlo estimate of the order-n complex moment; per-sample
    traces are real for hermitian inputs so only the real part is kept."""
    return _mc_moment(n, x, y, samples, seed, complex_field=True)
