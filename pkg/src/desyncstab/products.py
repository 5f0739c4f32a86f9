"""Matrix classes, switching words, and product-growth bounds.

Word convention, used everywhere in this package: a word is a sequence of
1-based member indices and ``word[k]`` is the factor applied at step ``k+1``.
The realized matrix of ``(i1, i2, ..., iL)`` is ``A_iL @ ... @ A_i2 @ A_i1``,
i.e. the rightmost factor acts first, literally mirroring ``A(n)...A(1)``.
"""

from __future__ import annotations

import enum
import math
import os
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from . import _enum_py
from .linalg import as_mat, as_vec, spectral_radius, vec_norm

try:
    if os.environ.get("DESYNCSTAB_PURE_PYTHON"):
        raise ImportError("pure-Python backend forced")
    from . import _kernel
except ImportError:
    _kernel = None

BACKEND = "cython" if _kernel is not None else "python"
DEFAULT_BUDGET = 2_000_000
DEFAULT_TOLERANCE = 1e-9

Word = tuple[int, ...]


class BudgetExceededError(RuntimeError):
    """The requested enumeration would realize more products than allowed."""

    def __init__(self, depth: int, max_depth: int, budget: int):
        self.depth = depth
        self.max_depth = max_depth
        self.budget = budget
        super().__init__(
            f"depth {depth} exceeds the product budget {budget}; "
            f"largest depth within budget is {max_depth}"
        )


class MatrixClass:
    """An ordered finite class of real ``N x N`` matrices ``A_1, ..., A_M``."""

    __slots__ = ("members",)

    def __init__(self, members):
        mats = tuple(as_mat(a) for a in members)
        if not mats:
            raise ValueError("a matrix class needs at least one member")
        dims = {a.shape[0] for a in mats}
        if len(dims) != 1:
            raise ValueError(f"class members have mixed dimensions {sorted(dims)}")
        for a in mats:
            a.setflags(write=False)
        object.__setattr__(self, "members", mats)

    @property
    def m(self) -> int:
        return len(self.members)

    @property
    def dim(self) -> int:
        return self.members[0].shape[0]

    def stack(self) -> np.ndarray:
        return np.stack(self.members)

    def point(self) -> list[float]:
        """Flattened coordinates ``a_111, a_112, ..., a_MNN``."""
        return [float(v) for v in self.stack().ravel()]

    @classmethod
    def from_point(cls, m: int, n: int, coords: Sequence[float]) -> "MatrixClass":
        arr = np.asarray(coords, dtype=float)
        if arr.size != m * n * n:
            raise ValueError(f"expected {m * n * n} coordinates for M={m}, N={n}, got {arr.size}")
        return cls(arr.reshape(m, n, n))

    def __repr__(self):
        return f"MatrixClass(m={self.m}, dim={self.dim}, point={self.point()})"

    def __setattr__(self, name, value):
        raise AttributeError("MatrixClass is immutable")

    def __eq__(self, other):
        if not isinstance(other, MatrixClass):
            return NotImplemented
        return self.m == other.m and all(np.array_equal(a, b) for a, b in zip(self.members, other.members))

    def __hash__(self):
        return hash(tuple(self.point()))


def check_word(cls: MatrixClass, word: Sequence[int]) -> Word:
    w = tuple(int(i) for i in word)
    for i in w:
        if not 1 <= i <= cls.m:
            raise ValueError(f"word index {i} out of range 1..{cls.m}")
    return w


def realize_word(cls: MatrixClass, word: Sequence[int]) -> np.ndarray:
    """Return ``A_{w[-1]} @ ... @ A_{w[0]}``; the empty word gives the identity."""
    w = check_word(cls, word)
    out = np.eye(cls.dim)
    for i in w:
        out = cls.members[i - 1] @ out
    return out


def product_log_norm(cls: MatrixClass, word: Sequence[int]) -> tuple[np.ndarray, float]:
    """Realize a long word with running normalization.

    Returns ``(unit, log_scale)`` with ``realize_word(cls, word) ==
    exp(log_scale) * unit`` and ``unit`` of Frobenius norm 1 (or the zero
    matrix with ``log_scale = -inf``).
    """
    w = check_word(cls, word)
    out = np.eye(cls.dim)
    log_scale = 0.0
    for i in w:
        out = cls.members[i - 1] @ out
        s = float(np.linalg.norm(out))
        if s == 0.0:
            return out, -math.inf
        out /= s
        log_scale += math.log(s)
    s = float(np.linalg.norm(out))
    return out / s, log_scale + math.log(s)


def evaluate_trajectory(cls: MatrixClass, word: Sequence[int], x0) -> list[float]:
    """Euclidean norms ``|x(0)|, ..., |x(L)|`` along ``x(n) = A(n) x(n-1)``."""
    w = check_word(cls, word)
    x = as_vec(x0, cls.dim)
    out = [vec_norm(x)]
    for i in w:
        x = cls.members[i - 1] @ x
        out.append(vec_norm(x))
    return out


def regularity_index(m: int, word: Sequence[int]) -> int:
    """Largest number of consecutive blocks of ``word`` each containing all of ``1..m``.

    Greedy: a block is closed as soon as it has seen every symbol, and any
    incomplete tail is merged into the last block.
    """
    if m < 1:
        raise ValueError("alphabet size must be >= 1")
    blocks = 0
    seen: set[int] = set()
    for i in word:
        if not 1 <= i <= m:
            raise ValueError(f"word index {i} out of range 1..{m}")
        seen.add(i)
        if len(seen) == m:
            blocks += 1
            seen = set()
    return blocks


class Verdict(str, enum.Enum):
    PROVEN_UNSTABLE = "ProvenUnstable"
    LIKELY_STABLE = "LikelyStable"
    INCONCLUSIVE = "Inconclusive"


@dataclass(frozen=True)
class BoundsReport:
    depth: int
    upper_per_depth: list[float]
    lower_per_depth: list[float]
    best_upper: float
    best_lower: float
    witness_lower: Word
    verdict: Verdict
    tolerance: float = DEFAULT_TOLERANCE
    products: int = 0
    extra_witnesses: list[dict] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "depth": self.depth,
            "upper_per_depth": list(self.upper_per_depth),
            "lower_per_depth": list(self.lower_per_depth),
            "best_upper": self.best_upper,
            "best_lower": self.best_lower,
            "witness_lower": list(self.witness_lower),
            "verdict": self.verdict.value,
            "tolerance": self.tolerance,
            "products": self.products,
            "extra_witnesses": list(self.extra_witnesses),
        }


def products_for_depth(m: int, depth: int) -> int:
    return sum(m**n for n in range(1, depth + 1))


def max_depth_within(m: int, budget: int) -> int:
    if m == 1:
        return budget
    d = 0
    while products_for_depth(m, d + 1) <= budget:
        d += 1
    return d


def classify(best_lower: float, best_upper: float, tolerance: float) -> Verdict:
    if best_lower > 1.0 + tolerance:
        return Verdict.PROVEN_UNSTABLE
    if best_upper < 1.0 - tolerance:
        return Verdict.LIKELY_STABLE
    return Verdict.INCONCLUSIVE


def _root(v: float, n: int) -> float:
    return v ** (1.0 / n) if v > 0.0 else 0.0


def stability_bounds(
    cls: MatrixClass,
    depth: int,
    tolerance: float = DEFAULT_TOLERANCE,
    *,
    budget: int = DEFAULT_BUDGET,
    prune: bool = False,
    witnesses: Sequence[Sequence[int]] = (),
    backend: str | None = None,
) -> BoundsReport:
    """Exhaustive product bounds over all words of length ``1..depth``.

    ``upper_per_depth[n-1] = max ||A_w||^(1/n)`` and ``lower_per_depth[n-1] =
    max rho(A_w)^(1/n)`` over words of length ``n``.  ``prune`` skips spectral
    radius evaluation for products too small to raise the lower bound (the
    upper bound always sees every product, and with pruning the per-depth
    lower entries may undershoot).  Extra ``witnesses`` of any length feed
    ``best_lower`` only.
    """
    if depth < 1:
        raise ValueError("depth must be >= 1")
    if tolerance < 0:
        raise ValueError("tolerance must be non-negative")
    count = products_for_depth(cls.m, depth)
    if count > budget:
        raise BudgetExceededError(depth, max_depth_within(cls.m, budget), budget)

    use = backend or BACKEND
    mats = cls.stack()
    if use == "cython" and _kernel is not None and cls.dim == 2:
        max_norm, max_rad, wit = _kernel.enumerate_bounds(mats, depth, prune)
    else:
        max_norm, max_rad, wit = _enum_py.enumerate_bounds(mats, depth, prune)

    upper = [_root(float(v), n) for n, v in enumerate(max_norm, start=1)]
    lower = [_root(float(v), n) for n, v in enumerate(max_rad, start=1)]
    best_upper = min(upper)
    k = int(np.argmax(lower))
    best_lower = lower[k]
    witness = tuple(i + 1 for i in wit[k])

    extra = []
    for w in witnesses:
        w = check_word(cls, w)
        if not w:
            continue
        value = _root(spectral_radius(realize_word(cls, w)), len(w))
        extra.append({"word": list(w), "lower": value})
        if value > best_lower:
            best_lower, witness = value, w

    return BoundsReport(
        depth=depth,
        upper_per_depth=upper,
        lower_per_depth=lower,
        best_upper=best_upper,
        best_lower=best_lower,
        witness_lower=witness,
        verdict=classify(best_lower, best_upper, tolerance),
        tolerance=tolerance,
        products=count,
        extra_witnesses=extra,
    )
