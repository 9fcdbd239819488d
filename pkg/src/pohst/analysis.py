"""Sweeps, sharpness probing and the product identities.

``sweep`` grinds through sign patterns (exhaustively up to a configurable
cap, by deterministic subsample beyond it) and emits one record per
pattern: set sizes, the constructed heavy count, the required count, which
construction path succeeded and whether everything validated.

``maximize_f`` is a multi-start projected coordinate ascent over the
sign-respecting box ``x_i in [delta, 1]`` or ``[-1, -delta]``.  Some optima
are suprema approached as a coordinate shrinks to the magnitude floor, so
results report the best value found and never claim attainment.  Every
probe is checked live against the certified bound for its pattern.

``identity_residual`` and ``iterated_identity_residual`` evaluate both
sides of the leave-one-out and leave-two-out product identities
independently and report the relative difference, falling back to
log-space accumulation when a side leaves the comfortable double range.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Iterable, Iterator

import numpy as np

from pohst.signs import SignVector, min_heavy_target, pair_sign_maps
from pohst.partition import SearchExhausted, validate_partition
from pohst.certify import RealVectorY, partitions_for

MAX_SWEEP_N = 24
DEFAULT_EXHAUSTIVE_CAP = 2 ** 20
SUBSAMPLE_RANDOM_COUNT = 10 ** 5


class DegenerateInput(ValueError):
    """A zero factor makes the requested identity residual meaningless."""


@dataclass(frozen=True)
class SweepRecord:
    sigma: str
    J: int
    K: int
    heavy: int
    target: int
    ladder: bool
    valid: bool

    def to_json_dict(self) -> dict:
        return {
            "sigma": self.sigma,
            "J": self.J,
            "K": self.K,
            "heavy": self.heavy,
            "target": self.target,
            "ladder": self.ladder,
            "valid": self.valid,
        }


def pattern_from_index(n: int, index: int) -> SignVector:
    """Deterministic pattern numbering: bit k of ``index`` flips entry k+1."""
    return SignVector(tuple(-1 if (index >> k) & 1 else 1 for k in range(n)))


def _sweep_indices(
    n: int, seed: int, exhaustive_cap: int
) -> tuple[list[int], bool]:
    total = 1 << n
    if total <= exhaustive_cap:
        return list(range(total)), False
    stride = total // exhaustive_cap
    picked = set(range(0, total, stride))
    rng = np.random.default_rng(seed)
    picked.update(int(v) for v in rng.integers(0, total, SUBSAMPLE_RANDOM_COUNT))
    return sorted(picked), True


def sweep_one(n: int, index: int) -> SweepRecord:
    """Record for one pattern; construction failures surface as heavy = -1."""
    sigma = pattern_from_index(n, index)
    jmap, kmap = pair_sign_maps(sigma)
    target = min_heavy_target(sigma)
    try:
        eta, pi = partitions_for(sigma)
    except SearchExhausted:
        return SweepRecord(sigma.to_string(), len(jmap), len(kmap), -1, target, False, False)
    valid = (
        validate_partition(sigma, eta.partition).ok
        and validate_partition(sigma, pi).ok
        and eta.partition.heavy_count == target
    )
    return SweepRecord(
        sigma.to_string(),
        len(jmap),
        len(kmap),
        eta.partition.heavy_count,
        target,
        eta.ladder_used,
        valid,
    )


def _sweep_chunk(args: tuple[int, list[int]]) -> list[SweepRecord]:
    n, indices = args
    return [sweep_one(n, i) for i in indices]


def sweep(
    n: int,
    jobs: int = 1,
    seed: int = 0,
    exhaustive_cap: int = DEFAULT_EXHAUSTIVE_CAP,
) -> Iterator[SweepRecord]:
    """Stream records in ascending pattern-index order.

    Parallel workers split the index list into contiguous chunks and the
    merge preserves the canonical order, so output is independent of
    ``jobs``.
    """
    if not (0 <= n <= MAX_SWEEP_N):
        raise ValueError(f"sweep size must lie in 0..{MAX_SWEEP_N}, got {n}")
    if n == 0:
        return
    indices, _ = _sweep_indices(n, seed, exhaustive_cap)
    if jobs <= 1 or len(indices) < 64:
        for i in indices:
            yield sweep_one(n, i)
        return
    chunk = (len(indices) + jobs - 1) // jobs
    parts = [(n, indices[k: k + chunk]) for k in range(0, len(indices), chunk)]
    pool = None
    try:
        pool = ProcessPoolExecutor(max_workers=jobs)
        futures = [pool.submit(_sweep_chunk, part) for part in parts]
        first = futures[0].result()
    except OSError:
        # process pools need OS primitives some sandboxes refuse; nothing has
        # been yielded yet, so a serial restart cannot duplicate records
        if pool is not None:
            pool.shutdown(wait=False)
        for i in indices:
            yield sweep_one(n, i)
        return
    try:
        yield from first
        for future in futures[1:]:
            yield from future.result()
    finally:
        pool.shutdown()


def sweep_summary(records: Iterable[SweepRecord], n: int, sampled: bool = False) -> dict:
    total = valid = ladder = 0
    for rec in records:
        total += 1
        valid += rec.valid
        ladder += rec.ladder
    return {
        "n": n,
        "patterns": total,
        "valid": valid,
        "invalid": total - valid,
        "ladder_used": ladder,
        "sampled": sampled,
    }


def sweep_is_sampled(n: int, exhaustive_cap: int = DEFAULT_EXHAUSTIVE_CAP) -> bool:
    return (1 << n) > exhaustive_cap


@dataclass(frozen=True)
class MaximizeConfig:
    restarts: int = 8
    iterations: int = 40
    seed: int = 0
    delta: float = 1e-6
    schedule: tuple[float, ...] = (0.1, 0.01, 0.001)
    coarse_points: int = 17

    def __post_init__(self) -> None:
        if self.restarts < 1 or self.iterations < 1:
            raise ValueError("restarts and iterations must be positive")
        if not 0.0 < self.delta < 1.0:
            raise ValueError(f"magnitude floor must lie in (0, 1), got {self.delta}")
        if any(s <= 0 for s in self.schedule):
            raise ValueError("step schedule entries must be positive")
        if self.coarse_points < 3:
            raise ValueError("need at least 3 coarse line-search points")


@dataclass(frozen=True)
class MaximizeResult:
    sigma: str
    best_value: float
    best_x: tuple[float, ...]
    bound: float
    gap: float
    exceeded_bound: bool
    restart_values: tuple[float, ...]
    evaluations: int

    def to_json_dict(self) -> dict:
        return {
            "sigma": self.sigma,
            "best_value": self.best_value,
            "best_x": list(self.best_x),
            "bound": self.bound,
            "gap": self.gap,
            "exceeded_bound": self.exceeded_bound,
            "restart_values": list(self.restart_values),
            "evaluations": self.evaluations,
        }


def _objective(x: list[float]) -> float:
    n = len(x)
    total = 1.0
    for i in range(n):
        running = 1.0
        for j in range(i, n):
            running *= x[j]
            total *= 1.0 - running
    return total


_PRIMES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61,
           67, 71, 73, 79, 83, 89, 97, 101)


def _van_der_corput(index: int, base: int) -> float:
    value, denom = 0.0, 1.0
    while index:
        index, digit = divmod(index, base)
        denom *= base
        value += digit / denom
    return value


def maximize_f(sigma: SignVector, cfg: MaximizeConfig = MaximizeConfig()) -> MaximizeResult:
    """Best product value found on the sign-respecting box.

    Restart 0 starts at full magnitudes, later restarts at low-discrepancy
    points shifted by the seed; each sweep line-searches every coordinate on
    a coarse grid and then refines around the winner per the step schedule.
    """
    n = len(sigma)
    signs = list(sigma.entries)
    lo, hi = cfg.delta, 1.0
    bound = 2.0 ** min_heavy_target(sigma)
    evaluations = 0

    def line_points(a: float, b: float, count: int) -> list[float]:
        if count == 1:
            return [a]
        pts = [a + (b - a) * k / (count - 1) for k in range(count)]
        pts[0], pts[-1] = a, b
        return pts

    best_value = -math.inf
    best_mags: list[float] = []
    restart_values = []
    for restart in range(cfg.restarts):
        if restart == 0 or n == 0:
            mags = [1.0] * n
        else:
            mags = [
                lo + (hi - lo) * _van_der_corput(cfg.seed + restart, _PRIMES[k % len(_PRIMES)])
                for k in range(n)
            ]
        x = [s * m for s, m in zip(signs, mags)]
        value = _objective(x)
        evaluations += 1
        for _ in range(cfg.iterations):
            improved = 0.0
            for k in range(n):
                cand_best = mags[k]
                local_best = value
                for m in line_points(lo, hi, cfg.coarse_points):
                    x[k] = signs[k] * m
                    v = _objective(x)
                    evaluations += 1
                    if v > local_best:
                        local_best, cand_best = v, m
                for frac in cfg.schedule:
                    radius = (hi - lo) * frac
                    a = max(lo, cand_best - radius)
                    b = min(hi, cand_best + radius)
                    for m in line_points(a, b, 9):
                        x[k] = signs[k] * m
                        v = _objective(x)
                        evaluations += 1
                        if v > local_best:
                            local_best, cand_best = v, m
                x[k] = signs[k] * cand_best
                improved += local_best - value
                value = local_best
                mags[k] = cand_best
            if improved <= 1e-15:
                break
        restart_values.append(value)
        if value > best_value:
            best_value = value
            best_mags = list(mags)
    best_x = tuple(s * m for s, m in zip(signs, best_mags))
    return MaximizeResult(
        sigma=sigma.to_string(),
        best_value=best_value,
        best_x=best_x,
        bound=bound,
        gap=bound - best_value,
        exceeded_bound=best_value > bound * (1.0 + 1e-9),
        restart_values=tuple(restart_values),
        evaluations=evaluations,
    )


def _pair_factors(y: RealVectorY) -> dict[tuple[int, int], float]:
    ys = y.entries
    out: dict[tuple[int, int], float] = {}
    for i in range(len(ys)):
        for j in range(i + 1, len(ys)):
            f = 1.0 - ys[i] / ys[j]
            if f == 0.0:
                raise DegenerateInput(f"zero factor at positions ({i + 1}, {j + 1})")
            out[(i, j)] = f
    return out


_SAFE_LOW, _SAFE_HIGH = 1e-250, 1e250


def _relative_residual(
    lhs: float, rhs: float, lhs_log: float, rhs_log: float
) -> float:
    safe = all(_SAFE_LOW < v < _SAFE_HIGH for v in (lhs, rhs))
    if safe:
        return abs(lhs - rhs) / max(lhs, rhs)
    return abs(math.expm1(lhs_log - rhs_log))


def identity_residual(y: RealVectorY) -> float:
    """Relative residual of ``P**(n-2)`` against the leave-one-out product."""
    n = len(y)
    if n < 3:
        raise ValueError(f"the identity needs at least 3 entries, got {n}")
    factors = _pair_factors(y)
    lhs = 1.0
    lhs_log = 0.0
    for f in factors.values():
        lhs *= f
        lhs_log += math.log(f)
    lhs, lhs_log = lhs ** (n - 2), lhs_log * (n - 2)
    rhs = 1.0
    rhs_log = 0.0
    for k in range(n):
        sub = 1.0
        sub_log = 0.0
        for (i, j), f in factors.items():
            if i == k or j == k:
                continue
            sub *= f
            sub_log += math.log(f)
        rhs *= sub
        rhs_log += sub_log
    return _relative_residual(lhs, rhs, lhs_log, rhs_log)


def iterated_identity_residual(y: RealVectorY) -> float:
    """Relative residual of ``P**((n-2)(n-3)/2)`` against the leave-two-out product."""
    n = len(y)
    if n < 4:
        raise ValueError(f"the iterated identity needs at least 4 entries, got {n}")
    factors = _pair_factors(y)
    exponent = (n - 2) * (n - 3) // 2
    lhs = 1.0
    lhs_log = 0.0
    for f in factors.values():
        lhs *= f
        lhs_log += math.log(f)
    lhs, lhs_log = lhs ** exponent, lhs_log * exponent
    rhs = 1.0
    rhs_log = 0.0
    for k in range(n):
        for l in range(k + 1, n):
            sub = 1.0
            sub_log = 0.0
            for (i, j), f in factors.items():
                if i in (k, l) or j in (k, l):
                    continue
                sub *= f
                sub_log += math.log(f)
            rhs *= sub
            rhs_log += sub_log
    return _relative_residual(lhs, rhs, lhs_log, rhs_log)


@dataclass(frozen=True)
class SoundnessReport:
    n: int
    samples: int
    patterns: int
    total_violations: int
    group_violations: int
    max_total_ratio: float
    max_group_ratio: float


def bound_soundness_sample(
    n: int, samples: int, seed: int = 0, tolerance: float = 1e-12
) -> SoundnessReport:
    """Randomized check that totals and group products respect their bounds.

    Draws ``samples`` box vectors with uniform magnitudes in (0, 1] and
    uniform signs, shares the cached partitions across each sign pattern
    and verifies every group product against its shape bound and the total
    against ``2**min(p, m)``, relatively to ``tolerance``.
    """
    rng = np.random.default_rng(seed)
    mags = 1.0 - rng.random((samples, n))
    signs = np.where(rng.random((samples, n)) < 0.5, -1.0, 1.0)
    X = mags * signs
    codes = (X < 0).astype(np.int64) @ (1 << np.arange(n, dtype=np.int64))

    total_violations = 0
    group_violations = 0
    max_total_ratio = 0.0
    max_group_ratio = 0.0
    patterns = 0
    pair_count = n * (n + 1) // 2
    for code in np.unique(codes):
        patterns += 1
        sub = X[codes == code]
        sigma = pattern_from_index(n, int(code))
        eta, pi = partitions_for(sigma)
        F = np.empty((sub.shape[0], pair_count))
        col: dict[tuple[int, int], int] = {}
        idx = 0
        for i in range(n):
            running = np.ones(sub.shape[0])
            for j in range(i, n):
                running = running * sub[:, j]
                F[:, idx] = 1.0 - running
                col[(i + 1, j + 1)] = idx
                idx += 1
        total = F.prod(axis=1)
        bound = 2.0 ** min_heavy_target(sigma)
        ratio = total / bound
        max_total_ratio = max(max_total_ratio, float(ratio.max()))
        total_violations += int((total > bound * (1.0 + tolerance)).sum())
        for part in (eta.partition, pi):
            for group in part.groups:
                cols = [col[p] for p in group.members]
                prod = F[:, cols].prod(axis=1)
                gb = 2.0 if group.shape.value in ("NegativeSingleton", "LTriple") else 1.0
                gratio = prod / gb
                max_group_ratio = max(max_group_ratio, float(gratio.max()))
                group_violations += int((prod > gb * (1.0 + tolerance)).sum())
    return SoundnessReport(
        n=n,
        samples=samples,
        patterns=patterns,
        total_violations=total_violations,
        group_violations=group_violations,
        max_total_ratio=max_total_ratio,
        max_group_ratio=max_group_ratio,
    )
