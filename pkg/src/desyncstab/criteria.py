"""Exact stability criteria for mixing classes.

A mixing class of dimension ``N`` has ``N`` members; member ``i`` is the
identity with row ``i`` replaced by ``(a_i1, ..., a_iN)``, i.e. one state
component is updated at a time.  For ``N = 2`` absolute stability has a closed
semialgebraic description (cases a-e below); for positive entries it reduces
to the Perron root of ``(a_ij)`` being at most one.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .linalg import as_mat, perron_root
from .products import MatrixClass, stability_bounds

CROSS_TOL = 1e-6


class CriterionVerdict(str, enum.Enum):
    STABLE = "Stable"
    NOT_STABLE = "NotStable"


@dataclass(frozen=True)
class MixParams2:
    a11: float
    a12: float
    a21: float
    a22: float

    def rows(self) -> list[list[float]]:
        return [[self.a11, self.a12], [self.a21, self.a22]]


@dataclass(frozen=True)
class MixClassSpec:
    rows: tuple[tuple[float, ...], ...]

    def __init__(self, rows):
        arr = as_mat(rows)
        object.__setattr__(self, "rows", tuple(tuple(float(v) for v in r) for r in arr))

    @property
    def n(self) -> int:
        return len(self.rows)

    def matrix(self) -> np.ndarray:
        return np.array(self.rows)


def mixing_matrix(spec: MixClassSpec, i: int) -> np.ndarray:
    """Identity with row ``i`` (1-based) replaced by ``spec.rows[i-1]``."""
    if not 1 <= i <= spec.n:
        raise ValueError(f"row index {i} out of range 1..{spec.n}")
    a = np.eye(spec.n)
    a[i - 1] = spec.rows[i - 1]
    return a


def mixing_class(spec: MixClassSpec | MixParams2) -> MatrixClass:
    if isinstance(spec, MixParams2):
        spec = MixClassSpec(spec.rows())
    return MatrixClass([mixing_matrix(spec, i) for i in range(1, spec.n + 1)])


@dataclass(frozen=True)
class CriterionResult:
    verdict: CriterionVerdict
    case: str | None = None
    perron_root: float | None = None

    def to_dict(self) -> dict:
        out = {"verdict": self.verdict.value, "case": self.case}
        if self.perron_root is not None:
            out["perron_root"] = self.perron_root
        return out


def r2_cases(p: MixParams2, tau: float = 0.0) -> list[str]:
    """Every case label among ``a``..``e`` whose relations hold for ``p``."""
    if tau < 0:
        raise ValueError("tau must be non-negative")
    a11, a12, a21, a22 = p.a11, p.a12, p.a21, p.a22

    def eq(x, y):
        return abs(x - y) <= tau

    hits = []
    if eq(a11, 1) and eq(a12, 0) and eq(a21, 0) and eq(a22, 1):
        hits.append("a")
    if eq(a11, 1) and eq(a12, 0) and eq(a22, -1):
        hits.append("b")
    if eq(a11, -1) and eq(a21, 0) and eq(a22, 1):
        hits.append("c")
    if eq(a11, -1) and eq(a22, -1) and -tau <= a12 < 4 + tau and -tau <= a21 < 4 + tau:
        hits.append("d")
    prod = a12 * a21
    if (
        abs(a11) < 1 + tau
        and abs(a22) < 1 + tau
        and -(1 - abs(a11)) * (1 - abs(a22)) - tau <= prod <= (1 - a11) * (1 - a22) + tau
    ):
        hits.append("e")
    return hits


def r2_criterion(p: MixParams2, tau: float = 0.0) -> CriterionResult:
    """Absolute stability of the two-member mixing class given by ``p``.

    Equalities are tested as ``|lhs - rhs| <= tau`` and each inequality is
    widened by ``tau``; at ``tau = 0`` this is the exact predicate.  The
    reported case is the first match in order a, b, c, d, e.
    """
    hits = r2_cases(p, tau)
    if hits:
        return CriterionResult(CriterionVerdict.STABLE, hits[0])
    return CriterionResult(CriterionVerdict.NOT_STABLE, None)


def rplus_criterion(spec: MixClassSpec, tau: float = 0.0) -> CriterionResult:
    """Stable iff the Perron root of ``(a_ij)`` is at most ``1 + tau``; entries must be positive."""
    a = spec.matrix()
    if np.any(a <= 0.0):
        raise ValueError("Perron-root criterion requires every a_ij > 0")
    root = perron_root(a)
    verdict = CriterionVerdict.STABLE if root <= 1.0 + tau else CriterionVerdict.NOT_STABLE
    return CriterionResult(verdict, None, root)


@dataclass
class CrossValidation:
    criterion: CriterionResult
    depth: int
    best_lower: float
    best_upper: float
    lower_per_depth: list[float]
    witness: tuple[int, ...]
    status: str
    contradiction: bool

    def to_dict(self) -> dict:
        return {
            "criterion": self.criterion.to_dict(),
            "depth": self.depth,
            "best_lower": self.best_lower,
            "best_upper": self.best_upper,
            "lower_per_depth": list(self.lower_per_depth),
            "witness": list(self.witness),
            "status": self.status,
            "contradiction": self.contradiction,
        }


def cross_validate(
    p: MixParams2 | MixClassSpec, depth: int, tau: float = 0.0, *, criterion: CriterionResult | None = None
) -> CrossValidation:
    """Compare a criterion verdict with exhaustive product lower bounds.

    A ``Stable`` verdict contradicts any product with ``rho(A_w)^(1/|w|) > 1 +
    1e-6``.  A ``NotStable`` verdict is ``witnessed`` once some product has
    ``rho^(1/|w|) > 1 - 1e-6``; otherwise it is reported as not witnessed at
    this depth, which is not a contradiction.
    """
    if criterion is None:
        criterion = r2_criterion(p, tau) if isinstance(p, MixParams2) else rplus_criterion(p, tau)
    report = stability_bounds(mixing_class(p), depth)
    if criterion.verdict is CriterionVerdict.STABLE:
        contradiction = report.best_lower > 1.0 + CROSS_TOL
        status = "contradiction" if contradiction else "agree"
    else:
        contradiction = False
        status = "agree" if report.best_lower > 1.0 - CROSS_TOL else "not witnessed at this depth"
    return CrossValidation(
        criterion=criterion,
        depth=depth,
        best_lower=report.best_lower,
        best_upper=report.best_upper,
        lower_per_depth=report.lower_per_depth,
        witness=report.witness_lower,
        status=status,
        contradiction=contradiction,
    )


def random_r2_points(count: int, seed: int = 0, low: float = -2.0, high: float = 2.0) -> list[MixParams2]:
    rng = np.random.default_rng(seed)
    return [MixParams2(*map(float, row)) for row in rng.uniform(low, high, size=(count, 4))]


def sweep_r2(points: Sequence[MixParams2], depth: int, tau: float = 0.0) -> dict:
    """Cross-validate many points; returns counts and any contradicting points."""
    counts = {"agree": 0, "not witnessed at this depth": 0, "contradiction": 0}
    bad = []
    for p in points:
        cv = cross_validate(p, depth, tau)
        counts[cv.status] += 1
        if cv.contradiction:
            bad.append({"params": [p.a11, p.a12, p.a21, p.a22], "best_lower": cv.best_lower})
    return {"points": len(points), "depth": depth, "counts": counts, "contradictions": bad}
