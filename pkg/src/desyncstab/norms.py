"""Truncated extremal norms built from scaled product maxima.

For a class ``{A_1, ..., A_M}`` and a rate ``q`` the norm is

    ||x||_D = max_{0 <= n <= D} q**(-n) * max_{|w| = n} |A_w x|

with ``|.|`` Euclidean.  Because every length-``n`` product that ends in
``A_k`` is also a length-``n+1`` product, ``||A_k x||_{D-1} <= q ||x||_D``
holds exactly for every ``k``; in the limit ``D -> oo`` (when it exists) all
members become ``q``-contractions.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .linalg import as_vec, operator_norm
from .products import (
    DEFAULT_BUDGET,
    BudgetExceededError,
    MatrixClass,
    max_depth_within,
    products_for_depth,
    stability_bounds,
)

DEDUP_RTOL = 1e-12


def _dedup(level: np.ndarray) -> np.ndarray:
    # Products whose entries agree to DEDUP_RTOL * (1 + max|entry|) share a
    # key; near-duplicates straddling a grid cell survive, which is harmless.
    keep = {}
    for p in level:
        tol = DEDUP_RTOL * (1.0 + float(np.abs(p).max()))
        key = tuple(np.round(p.ravel() / tol).astype(np.int64).tolist()) + (round(math.log10(tol)),)
        keep.setdefault(key, p)
    return np.array(list(keep.values()))


@dataclass(frozen=True)
class NormApprox:
    cls: MatrixClass
    q: float
    depth: int
    level_products: tuple[np.ndarray, ...] = field(repr=False)

    def level_sizes(self) -> list[int]:
        return [len(lv) for lv in self.level_products]

    def evaluate(self, x, depth: int | None = None) -> float:
        return evaluate_norm(self, x, depth)

    def sandwich_constant(self) -> float:
        """``c`` with ``|x| <= ||x|| <= c |x|``."""
        return max(
            self.q ** (-n) * max(operator_norm(p) for p in lv)
            for n, lv in enumerate(self.level_products)
        )


def auto_q(cls: MatrixClass, depth: int) -> float:
    """A rate for which the norm stays bounded: product upper bound plus 1e-6."""
    report = stability_bounds(cls, max(1, depth))
    return report.best_upper + 1e-6


def build_norm(cls: MatrixClass, q: float | str, depth: int, *, budget: int = DEFAULT_BUDGET) -> NormApprox:
    """Store the deduplicated products of every length ``0..depth``.

    ``q="auto"`` picks the rate from the product upper bound at the same depth.
    """
    if depth < 0:
        raise ValueError("depth must be >= 0")
    if isinstance(q, str):
        if q != "auto":
            raise ValueError(f"q must be a number in (0, 1] or 'auto', got {q!r}")
        q = auto_q(cls, depth)
        if q > 1.0:
            raise ValueError(f"q must be at most 1, got {q} (auto rate: no contraction visible at depth {depth})")
    if not 0.0 < q:
        raise ValueError(f"q must be positive, got {q}")
    if q > 1.0:
        raise ValueError(f"q must be at most 1, got {q}")
    if products_for_depth(cls.m, depth) > budget:
        raise BudgetExceededError(depth, max_depth_within(cls.m, budget), budget)

    mats = cls.stack()
    dim = cls.dim
    levels = [np.eye(dim)[None, :, :]]
    for _ in range(depth):
        nxt = np.einsum("aij,kjl->kail", mats, levels[-1]).reshape(-1, dim, dim)
        levels.append(_dedup(nxt))
    for lv in levels:
        lv.setflags(write=False)
    return NormApprox(cls=cls, q=float(q), depth=depth, level_products=tuple(levels))


def evaluate_norm(na: NormApprox, x, depth: int | None = None) -> float:
    """``max_{n <= depth} q**(-n) max_B |B x|``; ``depth`` defaults to the full build depth."""
    x = as_vec(x, na.cls.dim)
    top = na.depth if depth is None else depth
    if not 0 <= top <= na.depth:
        raise ValueError(f"truncation depth {top} outside 0..{na.depth}")
    # rescale so squared sums neither underflow nor overflow
    scale = float(np.max(np.abs(x)))
    if scale == 0.0:
        return 0.0
    x = x / scale
    best = 0.0
    for n in range(top + 1):
        images = na.level_products[n] @ x
        val = scale * math.sqrt(float(np.max(np.einsum("ki,ki->k", images, images)))) * na.q ** (-n)
        if val > best:
            best = val
    return best


@dataclass
class ContractionReport:
    member: int
    q: float
    depth: int
    samples: int
    max_violation: float
    violations: int
    full_max_violation: float
    full_violations: int
    tol: float

    @property
    def ok(self) -> bool:
        return self.violations == 0

    def to_dict(self) -> dict:
        return {
            "member": self.member,
            "q": self.q,
            "depth": self.depth,
            "samples": self.samples,
            "max_violation": self.max_violation,
            "violations": self.violations,
            "full_max_violation": self.full_max_violation,
            "full_violations": self.full_violations,
            "tol": self.tol,
            "ok": self.ok,
        }


def default_samples(dim: int, count: int = 1000, seed: int = 0) -> np.ndarray:
    """Uniform points on the unit sphere plus the signed basis vectors."""
    rng = np.random.default_rng(seed)
    pts = rng.standard_normal((count, dim))
    pts /= np.linalg.norm(pts, axis=1)[:, None]
    basis = np.vstack([np.eye(dim), -np.eye(dim)])
    return np.vstack([pts, basis])


def verify_contraction(na: NormApprox, k: int, samples=None, tol: float = 1e-10) -> ContractionReport:
    """Check ``||A_k x||_{D-1} <= q ||x||_D + tol`` on every sample.

    ``k`` is 1-based.  The full-depth form ``||A_k x||_D <= q ||x||_D`` is
    reported alongside as a diagnostic; it can fail at finite depth even for
    stable classes and always fails somewhere for classes that are not
    ``q``-contractive in any norm.
    """
    if na.depth < 1:
        raise ValueError("contraction check needs a norm built with depth >= 1")
    if not 1 <= k <= na.cls.m:
        raise ValueError(f"member index {k} out of range 1..{na.cls.m}")
    pts = default_samples(na.cls.dim) if samples is None else np.atleast_2d(np.asarray(samples, dtype=float))
    a = na.cls.members[k - 1]
    worst = full_worst = -math.inf
    bad = full_bad = 0
    for x in pts:
        rhs = na.q * evaluate_norm(na, x)
        y = a @ x
        gap = evaluate_norm(na, y, na.depth - 1) - rhs
        full_gap = evaluate_norm(na, y) - rhs
        worst = max(worst, gap)
        full_worst = max(full_worst, full_gap)
        bad += gap > tol
        full_bad += full_gap > tol
    return ContractionReport(
        member=k,
        q=na.q,
        depth=na.depth,
        samples=len(pts),
        max_violation=max(worst, 0.0),
        violations=int(bad),
        full_max_violation=max(full_worst, 0.0),
        full_violations=int(full_bad),
        tol=tol,
    )
