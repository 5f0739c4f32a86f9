"""The two-parameter matrix families behind the non-semialgebraicity witness.

``G(t), H(t)`` are a rank-one contraction and a scaled rotation; along
``t = sin(phi)`` they equal ``(1 - t**4) * P(phi)`` and ``(1 - t**4) *
R(phi)``.  At ``t_n = sin(pi/(2n))`` the class ``{G, H}`` is exponentially
stable, at ``s_n = sin(pi/(2n+1))`` it is unstable for ``n >= 6``, and the two
sequences interleave.  Everything here builds those objects and checks the
identities that tie them together.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator

import numpy as np

from .linalg import operator_norm
from .products import MatrixClass, Word

T_MAX = 1.0 - 1e-9
G_INDEX, H_INDEX = 1, 2


def make_P(phi: float) -> np.ndarray:
    """Oblique projector ``[[1, -tan phi], [0, 0]]``."""
    if not abs(phi) < math.pi / 2:
        raise ValueError(f"P(phi) needs |phi| < pi/2, got {phi}")
    return np.array([[1.0, -math.tan(phi)], [0.0, 0.0]])


def make_R(phi: float) -> np.ndarray:
    """Rotation by ``2 phi``."""
    c, s = math.cos(2.0 * phi), math.sin(2.0 * phi)
    return np.array([[c, -s], [s, c]])


@dataclass(frozen=True)
class FamilyPoint:
    t: float
    phi: float
    g: np.ndarray
    h: np.ndarray
    mu: float

    def matrix_class(self) -> MatrixClass:
        return MatrixClass([self.g, self.h])


def make_family_point(t: float) -> FamilyPoint:
    if not abs(t) <= T_MAX:
        raise ValueError(f"family parameter needs |t| <= 1 - 1e-9, got {t}")
    mu = 1.0 - t**4
    root = math.sqrt(1.0 - t * t)
    g = mu * np.array([[1.0, -t / root], [0.0, 0.0]])
    c = 1.0 - 2.0 * t * t
    s = 2.0 * t * root
    h = mu * np.array([[c, -s], [s, c]])
    for a in (g, h):
        a.setflags(write=False)
    return FamilyPoint(t=t, phi=math.asin(t), g=g, h=h, mu=mu)


def family_class(t: float) -> MatrixClass:
    """The class ``{G(t), H(t)}``; member 1 is ``G``, member 2 is ``H``."""
    return make_family_point(t).matrix_class()


def stable_parameter(n: int) -> float:
    """``t_n = sin(pi/(2n))``; ``t_1 = 1`` is outside the admissible range."""
    if n < 1:
        raise ValueError("n must be >= 1")
    return math.sin(math.pi / (2 * n))


def unstable_parameter(n: int) -> float:
    """``s_n = sin(pi/(2n+1))``."""
    if n < 1:
        raise ValueError("n must be >= 1")
    return math.sin(math.pi / (2 * n + 1))


def parse_family_spec(spec: str) -> tuple[str, int, float]:
    """Parse ``"t:n"`` or ``"s:n"`` into ``(kind, n, parameter)``."""
    kind, _, num = spec.partition(":")
    kind = kind.strip().lower()
    try:
        n = int(num)
    except ValueError:
        raise ValueError(f"bad family spec {spec!r}; expected 't:n' or 's:n'") from None
    if kind == "t":
        return kind, n, stable_parameter(n)
    if kind == "s":
        return kind, n, unstable_parameter(n)
    raise ValueError(f"bad family spec {spec!r}; expected 't:n' or 's:n'")


def master_factor(m: int, phi: float) -> float:
    """Scalar ``cos((2m+1) phi) / cos(phi)`` with ``P R^m P = factor * P``."""
    return math.cos((2 * m + 1) * phi) / math.cos(phi)


def check_master_identity(m: int, phi: float) -> float:
    """Max entrywise residual of ``P R^m P`` against ``master_factor * P``."""
    if m < 0:
        raise ValueError("m must be >= 0")
    p = make_P(phi)
    prod = p @ np.linalg.matrix_power(make_R(phi), m) @ p
    return float(np.max(np.abs(prod - master_factor(m, phi) * p)))


def lambda_factor(m: int, n: int) -> float:
    if n < 1 or m < 0:
        raise ValueError("need n >= 1 and m >= 0")
    return master_factor(m, math.pi / (2 * n))


@dataclass(frozen=True)
class NormalForm:
    """``alpha * R^q @ P^r @ R^s`` at a fixed angle."""

    alpha: float
    q: int
    r: int
    s: int

    def realize(self, phi: float) -> np.ndarray:
        mid = make_P(phi) if self.r else np.eye(2)
        return self.alpha * make_R(self.q * phi) @ mid @ make_R(self.s * phi)


def _angle_index(phi: float | None, n: int | None) -> int:
    if n is not None:
        if n < 1:
            raise ValueError("n must be >= 1")
        return n
    if phi is None:
        raise ValueError("give either phi or n")
    if not 0.0 < phi <= math.pi / 2:
        raise ValueError(f"phi={phi} is not of the form pi/(2n)")
    k = math.pi / (2.0 * phi)
    kr = round(k)
    if abs(k - kr) > 1e-9 * kr:
        raise ValueError(f"phi={phi} is not of the form pi/(2n)")
    return kr


def normal_form(word: str, phi: float | None = None, *, n: int | None = None) -> NormalForm:
    """Reduce a word over ``{P, R}`` to ``alpha R^q P^r R^s``.

    ``word`` is read as a written matrix product, so ``"PRP"`` means
    ``P @ R @ P``; its rightmost letter acts first and is absorbed first.
    The angle must be ``pi/(2n)``.
    """
    n = _angle_index(phi, n)
    ang = math.pi / (2 * n)
    nf = NormalForm(1.0, 0, 0, 0)
    for letter in reversed(word.upper()):
        nf = normal_form_step(nf, letter, ang)
    return nf


def normal_form_step(nf: NormalForm, letter: str, phi: float) -> NormalForm:
    """Normal form of ``letter @ (current product)``."""
    if letter == "R":
        return NormalForm(nf.alpha, nf.q + 1, nf.r, nf.s)
    if letter != "P":
        raise ValueError(f"word letters must be P or R, got {letter!r}")
    if nf.r == 0:
        return NormalForm(nf.alpha, 0, 1, nf.q + nf.s)
    # P R^q P collapses to a multiple of P
    return NormalForm(nf.alpha * master_factor(nf.q, phi), 0, 1, nf.s)


def realize_pr_word(word: str, phi: float) -> np.ndarray:
    p, r = make_P(phi), make_R(phi)
    out = np.eye(2)
    for letter in word.upper():
        out = out @ (p if letter == "P" else r)
    return out


def iter_pr_words(length: int) -> Iterator[str]:
    """All ``2**length`` words of a given length over ``{P, R}``."""
    for k in range(2**length):
        yield "".join("PR"[(k >> b) & 1] for b in range(length - 1, -1, -1))


def growth_factor(n: int) -> float:
    """Per-period growth ``nu_n**(n+2) / cos(pi/(2n+1))`` of the periodic word."""
    if n < 1:
        raise ValueError("n must be >= 1")
    ang = math.pi / (2 * n + 1)
    return math.exp((n + 2) * math.log1p(-(math.sin(ang) ** 4))) / math.cos(ang)


def growth_asymptote(n: int) -> float:
    """Leading-order approximation ``1 + pi**2 / (2 (2n+1)**2)``."""
    return 1.0 + math.pi**2 / (2.0 * (2 * n + 1) ** 2)


@lru_cache(maxsize=None)
def instability_threshold(n_max: int = 10_000) -> int:
    """Smallest ``n`` from which ``growth_factor`` stays above 1 up to ``n_max``."""
    last_bad = 0
    for n in range(1, n_max + 1):
        if growth_factor(n) <= 1.0:
            last_bad = n
    if last_bad == n_max:
        raise ValueError(f"no threshold found up to n={n_max}")
    return last_bad + 1


def periodic_word(n: int, i: int) -> Word:
    """The period ``G, H^n, G`` repeated ``i`` times, as member indices of ``{G, H}``."""
    if n < 2 or i < 1:
        raise ValueError("need n >= 2 and i >= 1")
    period = (G_INDEX,) + (H_INDEX,) * n + (G_INDEX,)
    return period * i


def periodic_closed_form(n: int, i: int) -> np.ndarray:
    """``(-nu**(n+2) / cos phi)**i * P(phi)`` at ``phi = pi/(2n+1)``."""
    ang = math.pi / (2 * n + 1)
    nu = 1.0 - math.sin(ang) ** 4
    return (-(nu ** (n + 2)) / math.cos(ang)) ** i * make_P(ang)


def norm_cap(n: int) -> float:
    """``|P(pi/(2n))|``, the uniform bound on products of ``P`` and ``R`` at that angle."""
    return operator_norm(make_P(math.pi / (2 * n)))
