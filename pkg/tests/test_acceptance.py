"""Acceptance gate: one test per criterion, each reporting a PASS/FAIL line."""

import math
import time

import mpmath
import numpy as np
import pytest

from desyncstab.identities import check_normal_form, check_stable_decay, check_periodic_growth
from desyncstab.cli import figure1_rows
from desyncstab.criteria import (
    CriterionVerdict,
    MixClassSpec,
    MixParams2,
    r2_criterion,
    random_r2_points,
    rplus_criterion,
    sweep_r2,
)
from desyncstab.families import family_class, growth_factor, make_P, make_R, stable_parameter
from desyncstab.norms import build_norm, default_samples, evaluate_norm, verify_contraction
from desyncstab.products import MatrixClass, regularity_index, stability_bounds

from oracles import regularity_all_words_dp

RESULTS = []


def report(number, title, ok, detail):
    line = f"ACCEPTANCE {number:>2} {'PASS' if ok else 'FAIL'}  {title}: {detail}"
    RESULTS.append(line)
    print(line)
    assert ok, line


def test_01_master_identity():
    start = time.perf_counter()
    worst = 0.0
    for phi in np.linspace(0.0, 1.4, 202)[1:-1]:
        p, r = make_P(phi), make_R(phi)
        rm = np.eye(2)
        for m in range(51):
            ref = math.cos((2 * m + 1) * phi) / math.cos(phi) * p
            worst = max(worst, float(np.max(np.abs(p @ rm @ p - ref))))
            rm = r @ rm
    elapsed = time.perf_counter() - start
    report(1, "master identity", worst <= 1e-10 and elapsed < 10, f"max residual {worst:.2e}, {elapsed:.2f}s")


def test_02():
    worst = 0.0
    for n in range(1, 31):
        phi = math.pi / (2 * n + 1)
        p = make_P(phi)
        prod = p @ np.linalg.matrix_power(make_R(phi), n) @ p
        worst = max(worst, float(np.max(np.abs(prod + p / math.cos(phi)))))
    report(2, "odd-angle reflection", worst <= 1e-10, f"max residual {worst:.2e} for n=1..30")


def test_03():
    def lam(m, n):
        with mpmath.workdps(30):
            phi = mpmath.pi / (2 * n)
            return float(abs(mpmath.cos((2 * m + 1) * phi) / mpmath.cos(phi)))

    from desyncstab.families import lambda_factor

    period = excess = oracle = 0.0
    for n in range(2, 11):
        for m in range(31):
            v = abs(lambda_factor(m, n))
            period = max(period, abs(abs(lambda_factor(m + n, n)) - v))
            excess = max(excess, v - 1.0)
            oracle = max(oracle, abs(v - lam(m, n)))
    ok = period <= 1e-12 and excess <= 1e-12 and oracle <= 1e-12
    report(3, "lambda periodicity and bound", ok, f"period {period:.2e}, excess {excess:.2e}, vs mpmath {oracle:.2e}")


def test_04():
    start = time.perf_counter()
    chk = check_normal_form(max_len=14, n_values=(2, 3, 4))
    elapsed = time.perf_counter() - start
    d = chk.details
    expected_words = 3 * (2**15 - 2)
    ok = chk.passed and d["words"] == expected_words and elapsed < 60
    report(
        4,
        "normal form and norm cap",
        ok,
        f"{d['words']} words, form {d['normal_form_residual']:.2e}, alpha excess {d['alpha_excess']:.2e}, "
        f"norm excess {d['norm_excess']:.2e}, {elapsed:.1f}s",
    )


def test_05():
    chk = check_stable_decay(n_values=range(2, 7), words=200, length=500, seed=0)
    finals = chk.details["max_final_norm"]
    report(
        5,
        "stable-side decay",
        chk.passed,
        f"max bound excess {chk.worst:.2e}, largest final norm {max(finals.values()):.2e}",
    )


def test_06():
    # threshold from the library against a 40-digit oracle
    def gf(n):
        with mpmath.workdps(40):
            t = mpmath.sin(mpmath.pi / (2 * n + 1))
            return (1 - t**4) ** (n + 2) / mpmath.cos(mpmath.pi / (2 * n + 1))

    signs_ok = all((growth_factor(n) > 1) == (n >= 6) for n in range(1, 201))
    oracle_ok = all(gf(n) > 1 if n >= 6 else gf(n) < 1 for n in range(1, 201))
    worst_gf = max(abs(growth_factor(n) - float(gf(n))) for n in range(1, 201))
    chk = check_periodic_growth(n_max=200, periods=40)
    d = chk.details
    ok = chk.passed and signs_ok and oracle_ok and worst_gf <= 1e-13 and d["threshold"] == 6
    report(
        6,
        "unstable-side growth",
        ok,
        f"threshold {d['threshold']}, per-period residual {d['per_period_relative_residual']:.2e}, "
        f"asymptotic excess {d['asymptotic_bound_excess']:.2e}, vs mpmath {worst_gf:.1e}",
    )


def test_07():
    start = time.perf_counter()
    rows = figure1_rows(12, 10)
    elapsed = time.perf_counter() - start
    ts = [r["t_value"] for r in rows]
    kinds = [r["kind"] for r in rows]
    interleaved = all(a > b for a, b in zip(ts, ts[1:])) and kinds == ["t_n", "s_n"] * 11 + ["t_n"]
    t_ok = all(r["verdict"] != "ProvenUnstable" for r in rows if r["kind"] == "t_n")
    s_ok = all(r["verdict"] == "ProvenUnstable" for r in rows if r["kind"] == "s_n" and r["n"] >= 6)
    ok = interleaved and t_ok and s_ok and elapsed < 60
    report(7, "interleaved classification", ok, f"{len(rows)} rows, {elapsed:.2f}s")


def _norm_axioms(na, pts, rng):
    worst = 0.0
    for x, y in zip(pts, pts[::-1]):
        nx = evaluate_norm(na, x)
        lam = float(rng.normal()) * 3
        worst = max(worst, abs(evaluate_norm(na, lam * x) - abs(lam) * nx) / max(1.0, abs(lam) * nx))
        worst = max(worst, evaluate_norm(na, x + y) - nx - evaluate_norm(na, y))
        worst = max(worst, np.linalg.norm(x) - nx)
    assert evaluate_norm(na, np.zeros(na.cls.dim)) == 0.0
    return worst


def test_08_extremal_norm():
    rng = np.random.default_rng(0)
    cases = [("0.5I", MatrixClass([0.5 * np.eye(2)]), 0.5)]
    mu3 = 1 - stable_parameter(3) ** 4
    cases.append(("t_3", family_class(stable_parameter(3)), mu3))
    while len(cases) < 5:
        cls = MatrixClass(rng.normal(scale=0.45, size=(2, 2, 2)))
        rep = stability_bounds(cls, 6)
        if rep.best_upper < 1:
            cases.append((f"random{len(cases) - 1}", cls, rep.best_upper + 1e-6))
    samples = default_samples(2, 1000, seed=0)
    worst_axiom = worst_contr = 0.0
    for _, cls, q in cases:
        na = build_norm(cls, q, 6)
        worst_axiom = max(worst_axiom, _norm_axioms(na, samples, rng))
        for k in range(1, cls.m + 1):
            worst_contr = max(worst_contr, verify_contraction(na, k, samples, tol=1e-10).max_violation)
    ok = worst_axiom <= 1e-10 and worst_contr <= 1e-10
    report(8, "extremal norm", ok, f"{len(cases)} classes, axiom residual {worst_axiom:.2e}, contraction {worst_contr:.2e}")


def test_09_mixing_pairs():
    start = time.perf_counter()
    sweep = sweep_r2(random_r2_points(10_000, seed=0), 10)
    elapsed = time.perf_counter() - start
    expected = {
        (1, 0, 0, 1): ("Stable", "a"),
        (-1, 0, 3.9, -1): ("Stable", "d"),
        (-1, 4, 4, -1): ("NotStable", None),
        (0, 0.5, 0.5, 0): ("Stable", "e"),
    }
    got = {p: r2_criterion(MixParams2(*p)) for p in expected}
    examples_ok = all((got[p].verdict.value, got[p].case) == v for p, v in expected.items())
    ok = sweep["counts"]["contradiction"] == 0 and examples_ok
    report(9, "pair criterion consistency", ok, f"counts {sweep['counts']}, examples {examples_ok}, {elapsed:.1f}s")


def test_10_perron():
    cases = [
        ([[0.5, 0.5], [0.5, 0.5]], 1.0, CriterionVerdict.STABLE),
        ([[0.6, 0.6], [0.6, 0.6]], 1.2, CriterionVerdict.NOT_STABLE),
        ([[1 / 3] * 3] * 3, 1.0, CriterionVerdict.STABLE),
    ]
    worst = 0.0
    verdicts_ok = True
    for rows, root, verdict in cases:
        res = rplus_criterion(MixClassSpec(rows))
        worst = max(worst, abs(res.perron_root - root))
        verdicts_ok &= res.verdict is verdict
    with pytest.raises(ValueError):
        rplus_criterion(MixClassSpec([[0.5, 0.0], [0.5, 0.5]]))
    report(10, "Perron criterion", verdicts_ok and worst <= 1e-10, f"root error {worst:.1e}, non-positive input rejected")


def test_11_regularity():
    words = mismatches = 0
    for m in (1, 2, 3):
        for word, r in regularity_all_words_dp(m, 12):
            words += 1
            if regularity_index(m, word) != r:
                mismatches += 1
    report(11, "regularity index", mismatches == 0, f"{words} words, {mismatches} mismatches")
