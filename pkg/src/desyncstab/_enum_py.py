"""Pure numpy product enumeration, used when the compiled kernel is missing.

Works level by level: the products of length ``n`` are held in one array of
shape ``(M**n, N, N)`` whose row ``k`` is the word with base-``M`` digits of
``k`` (first-applied factor most significant).
"""

from __future__ import annotations

import math

import numpy as np

from .linalg import operator_norm, spectral_radius


def _norms_2x2(p: np.ndarray) -> np.ndarray:
    a, b, c, d = p[:, 0, 0], p[:, 0, 1], p[:, 1, 0], p[:, 1, 1]
    g11 = a * a + c * c
    g22 = b * b + d * d
    g12 = a * b + c * d
    root = np.hypot(g11 - g22, 2.0 * g12)
    return np.sqrt(np.maximum(0.5 * (g11 + g22 + root), 0.0))


def _radii_2x2(p: np.ndarray) -> np.ndarray:
    tr = p[:, 0, 0] + p[:, 1, 1]
    det = p[:, 0, 0] * p[:, 1, 1] - p[:, 0, 1] * p[:, 1, 0]
    half = 0.5 * tr
    disc = half * half - det
    out = np.empty_like(tr)
    cplx = disc < 0.0
    out[cplx] = np.sqrt(det[cplx])
    re = ~cplx
    h = half[re]
    big = h + np.copysign(np.sqrt(disc[re]), h)
    with np.errstate(divide="ignore", invalid="ignore"):
        small = np.where(big != 0.0, det[re] / big, 0.0)
    out[re] = np.maximum(np.abs(big), np.abs(small))
    return out


def _decode(k: int, n: int, m: int) -> list[int]:
    digits = []
    for _ in range(n):
        k, r = divmod(k, m)
        digits.append(r)
    return digits[::-1]


def enumerate_bounds(mats: np.ndarray, depth: int, prune: bool = False):
    """Per-depth maxima of product norms and spectral radii.

    Returns ``(max_norm, max_radius, witnesses)`` where the first two are
    arrays of length ``depth`` holding raw (un-rooted) maxima over all words
    of length ``n = 1..depth`` and ``witnesses[n-1]`` is a 0-based word
    attaining ``max_radius[n-1]``.
    """
    m, dim = mats.shape[0], mats.shape[1]
    max_norm = np.zeros(depth)
    max_rad = np.zeros(depth)
    witnesses: list[list[int]] = []
    best_rooted = 0.0
    level = np.eye(dim)[None, :, :]
    for n in range(1, depth + 1):
        level = np.einsum("aij,kjl->kail", mats, level).reshape(-1, dim, dim)
        if dim == 2:
            norms = _norms_2x2(level)
        else:
            norms = np.array([operator_norm(p) for p in level])
        max_norm[n - 1] = norms.max()

        if prune and best_rooted > 0.0:
            # rho <= norm, so products this small cannot move the lower bound
            keep = np.flatnonzero(norms >= math.exp(n * math.log(best_rooted)) * 1e-3)
            if keep.size == 0:
                keep = np.array([int(np.argmax(norms))])
        else:
            keep = np.arange(level.shape[0])
        sub = level[keep]
        if dim == 2:
            radii = _radii_2x2(sub)
        else:
            radii = np.array([spectral_radius(p) for p in sub])
        j = int(np.argmax(radii))
        max_rad[n - 1] = radii[j]
        witnesses.append(_decode(int(keep[j]), n, m))
        best_rooted = max(best_rooted, radii[j] ** (1.0 / n))
    return max_norm, max_rad, witnesses
