"""Numeric evaluation and end-to-end certificates for the product bound.

``eval_f`` evaluates the full product over the index triangle for a box
vector x, ``eval_P`` the pair product for a modulus-ordered vector y; the
two agree under the change of variables ``x_i = y_i / y_{i+1}``.  A
certificate groups the factors by the good partitions of the sign pattern,
bounds each group by 1 or 2 through the four elementary product
inequalities, and checks the total against ``2**min(p, m)``.

All comparisons are relative with a default tolerance of 1e-12; products
run in plain double precision, with an optional log-space accumulation
mode intended for patterns longer than twenty entries.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Optional

from pohst.signs import Pair, SignVector, min_heavy_target
from pohst.partition import (
    EtaBuild,
    GoodPartition,
    PartitionGroup,
    HEAVY_SHAPES,
    build_pi,
    construct_eta,
)

DEFAULT_TOLERANCE = 1e-12


class DomainError(ValueError):
    """An input violates the hypotheses of the statement being evaluated."""


@dataclass(frozen=True)
class RealVectorX:
    """Nonzero reals with ``|x_i| <= 1``; the boundary is allowed."""

    entries: tuple[float, ...] = ()

    def __post_init__(self) -> None:
        if not isinstance(self.entries, tuple):
            object.__setattr__(self, "entries", tuple(float(v) for v in self.entries))
        for v in self.entries:
            if not math.isfinite(v):
                raise DomainError(f"entries must be finite, got {v!r}")
            if v == 0:
                raise DomainError("entries must be nonzero")
            if abs(v) > 1:
                raise DomainError(f"entries must satisfy |x| <= 1, got {v!r}")

    def sign_vector(self) -> SignVector:
        return SignVector.from_reals(self.entries)

    def __len__(self) -> int:
        return len(self.entries)


@dataclass(frozen=True)
class RealVectorY:
    """Nonzero reals with strictly increasing absolute values."""

    entries: tuple[float, ...] = ()

    def __post_init__(self) -> None:
        if not isinstance(self.entries, tuple):
            object.__setattr__(self, "entries", tuple(float(v) for v in self.entries))
        prev = None
        for v in self.entries:
            if not math.isfinite(v):
                raise DomainError(f"entries must be finite, got {v!r}")
            if v == 0:
                raise DomainError("entries must be nonzero")
            if prev is not None and abs(v) <= prev:
                raise DomainError(
                    f"absolute values must grow strictly, got |{v!r}| after {prev!r}"
                )
            prev = abs(v)

    def __len__(self) -> int:
        return len(self.entries)


def x_from_y(y: RealVectorY) -> RealVectorX:
    """Consecutive ratios ``y_i / y_{i+1}``; strict modulus growth keeps them in (-1, 1)."""
    ys = y.entries
    return RealVectorX(tuple(ys[i] / ys[i + 1] for i in range(len(ys) - 1)))


def eval_factor(x: RealVectorX, pair: Pair) -> float:
    """The factor ``1 - x_i * ... * x_j``; always lies in [0, 2]."""
    i, j = pair
    if not (1 <= i <= j <= len(x)):
        raise IndexError(f"pair {pair} out of range for a length-{len(x)} vector")
    prod = 1.0
    for k in range(i - 1, j):
        prod *= x.entries[k]
    return 1.0 - prod


def factor_table(x: RealVectorX) -> dict[Pair, float]:
    """All factors of the index triangle, O(n^2) by running products."""
    n = len(x)
    table: dict[Pair, float] = {}
    for i in range(1, n + 1):
        running = 1.0
        for j in range(i, n + 1):
            running *= x.entries[j - 1]
            table[(i, j)] = 1.0 - running
    return table


def eval_f(x: RealVectorX, log_space: bool = False) -> float:
    """Product of all factors; lexicographic multiplication order.

    With ``log_space`` the magnitudes accumulate as logarithms and zero
    factors short-circuit to 0.0 -- headroom for long patterns without
    changing the default semantics.
    """
    table = factor_table(x)
    if not log_space:
        total = 1.0
        for i in range(1, len(x) + 1):
            for j in range(i, len(x) + 1):
                total *= table[(i, j)]
        return total
    acc = 0.0
    for value in table.values():
        if value == 0.0:
            return 0.0
        acc += math.log(value)
    return math.exp(acc)


def eval_P(y: RealVectorY) -> float:
    """Product of ``1 - y_i / y_j`` over ``i < j``; each factor lies in (0, 2)."""
    ys = y.entries
    total = 1.0
    for i in range(len(ys)):
        for j in range(i + 1, len(ys)):
            total *= 1.0 - ys[i] / ys[j]
    return total


@dataclass(frozen=True)
class PohstCheck:
    value: float
    bound: float
    holds: bool


def check_pohst_case(
    case: int, a: float, b: Optional[float] = None, c: Optional[float] = None
) -> PohstCheck:
    """Evaluate one of the four elementary product inequalities.

    Case 1: a in [-1,1],           (1-a) <= 2
    Case 2: a in [0,1], b in [-1,0], (1-a)(1-ab) <= 1
    Case 3: a, b in [-1,1],        (1-a)(1-b)(1-ab) <= 2
    Case 4: a in [0,1], b, c in [-1,0], (1-a)(1-ab)(1-ac)(1-abc) <= 1
    """
    if case == 1:
        if not -1 <= a <= 1:
            raise DomainError(f"case 1 needs a in [-1, 1], got {a!r}")
        value, bound = 1.0 - a, 2.0
    elif case == 2:
        if b is None:
            raise DomainError("case 2 needs two arguments")
        if not 0 <= a <= 1 or not -1 <= b <= 0:
            raise DomainError(f"case 2 needs a in [0, 1], b in [-1, 0], got {a!r}, {b!r}")
        value, bound = (1.0 - a) * (1.0 - a * b), 1.0
    elif case == 3:
        if b is None:
            raise DomainError("case 3 needs two arguments")
        if not -1 <= a <= 1 or not -1 <= b <= 1:
            raise DomainError(f"case 3 needs a, b in [-1, 1], got {a!r}, {b!r}")
        value, bound = (1.0 - a) * (1.0 - b) * (1.0 - a * b), 2.0
    elif case == 4:
        if b is None or c is None:
            raise DomainError("case 4 needs three arguments")
        if not 0 <= a <= 1 or not -1 <= b <= 0 or not -1 <= c <= 0:
            raise DomainError(
                f"case 4 needs a in [0, 1], b, c in [-1, 0], got {a!r}, {b!r}, {c!r}"
            )
        value = (1.0 - a) * (1.0 - a * b) * (1.0 - a * c) * (1.0 - a * b * c)
        bound = 1.0
    else:
        raise DomainError(f"case must be 1..4, got {case!r}")
    return PohstCheck(value, bound, value <= bound)


def group_bound(group: PartitionGroup) -> int:
    """Per-group bound: 2 for the heavy shapes, 1 for everything else."""
    return 2 if group.shape in HEAVY_SHAPES else 1


@dataclass(frozen=True)
class GroupCheck:
    target: str
    group: PartitionGroup
    product: float
    bound: int
    ok: bool

    def to_json_dict(self) -> dict:
        d = self.group.to_json_dict()
        d.update({"target": self.target, "product": self.product, "bound": self.bound,
                  "ok": self.ok})
        return d


@dataclass(frozen=True)
class Certificate:
    """Machine-checkable record of one bound verification."""

    input_kind: str
    input_values: tuple[float, ...]
    sign_pattern: str
    n_x: int
    n_y: int
    exponent: int
    total: float
    bound: float
    ok: bool
    tolerance: float
    groups: tuple[GroupCheck, ...]
    eta_method: str
    pi_method: str
    heavy_count: int
    bounds_product_is_pow2_heavy: bool

    def to_json_dict(self) -> dict:
        return {
            "input": {"kind": self.input_kind, "values": list(self.input_values)},
            "sign_pattern": self.sign_pattern,
            "n_x": self.n_x,
            "n_y": self.n_y,
            "exponent": self.exponent,
            "total": self.total,
            "bound": self.bound,
            "ok": self.ok,
            "tolerance": self.tolerance,
            "groups": [g.to_json_dict() for g in self.groups],
            "eta_method": self.eta_method,
            "pi_method": self.pi_method,
            "heavy_count": self.heavy_count,
            "bounds_product_is_pow2_heavy": self.bounds_product_is_pow2_heavy,
        }


@lru_cache(maxsize=65536)
def partitions_for(sigma: SignVector) -> tuple[EtaBuild, GoodPartition]:
    """Cached good partitions per sign pattern; both constructions are pure."""
    return construct_eta(sigma), build_pi(sigma)


def certify_x(x: RealVectorX, tolerance: float = DEFAULT_TOLERANCE) -> Certificate:
    """Certificate for the full product of a box vector.

    Builds the partitions for the sign pattern of x, bounds every group by
    its shape bound and the total by ``2**min(p, m)``, all relatively to
    ``tolerance``.
    """
    sigma = x.sign_vector()
    eta, pi = partitions_for(sigma)
    table = factor_table(x)
    checks: list[GroupCheck] = []
    for target, part in (("K", eta.partition), ("J", pi)):
        for group in part.groups:
            product = 1.0
            for p in group.members:
                product *= table[p]
            bnd = group_bound(group)
            checks.append(
                GroupCheck(target, group, product, bnd, product <= bnd * (1.0 + tolerance))
            )
    total = eval_f(x)
    exponent = min_heavy_target(sigma)
    bound = 2.0 ** exponent
    ok = total <= bound * (1.0 + tolerance) and all(c.ok for c in checks)
    bounds_product = 1
    for c in checks:
        bounds_product *= c.bound
    return Certificate(
        input_kind="x",
        input_values=x.entries,
        sign_pattern=sigma.to_string(),
        n_x=len(x),
        n_y=len(x) + 1,
        exponent=exponent,
        total=total,
        bound=bound,
        ok=ok,
        tolerance=tolerance,
        groups=tuple(checks),
        eta_method=eta.partition.method,
        pi_method=pi.method,
        heavy_count=eta.partition.heavy_count,
        bounds_product_is_pow2_heavy=bounds_product == 2 ** eta.partition.heavy_count,
    )


def certify_y(y: RealVectorY, tolerance: float = DEFAULT_TOLERANCE) -> Certificate:
    """Certificate for the pair product of a modulus-ordered vector.

    The exponent is computed from the y signs directly and cross-checked
    against the prefix-count form coming out of the change of variables;
    the two cannot differ because ``min(p, m)`` is invariant under a global
    sign flip.
    """
    x = x_from_y(y)
    cert = certify_x(x, tolerance)
    p = sum(1 for v in y.entries if v > 0)
    m = len(y) - p
    if min(p, m) != cert.exponent:
        raise AssertionError(
            f"exponent mismatch: y signs give {min(p, m)}, pattern gives {cert.exponent}"
        )
    return Certificate(
        input_kind="y",
        input_values=y.entries,
        sign_pattern=cert.sign_pattern,
        n_x=cert.n_x,
        n_y=cert.n_y,
        exponent=cert.exponent,
        total=cert.total,
        bound=cert.bound,
        ok=cert.ok,
        tolerance=cert.tolerance,
        groups=cert.groups,
        eta_method=cert.eta_method,
        pi_method=cert.pi_method,
        heavy_count=cert.heavy_count,
        bounds_product_is_pow2_heavy=cert.bounds_product_is_pow2_heavy,
    )
