import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from desyncstab.criteria import (
    CriterionVerdict,
    MixClassSpec,
    MixParams2,
    cross_validate,
    mixing_class,
    mixing_matrix,
    r2_cases,
    r2_criterion,
    random_r2_points,
    rplus_criterion,
    sweep_r2,
)
from desyncstab.linalg import perron_root
from desyncstab.products import stability_bounds

STABLE, NOT_STABLE = CriterionVerdict.STABLE, CriterionVerdict.NOT_STABLE
params = st.floats(-2, 2, allow_nan=False)


class TestMixingMatrix:
    def test_unit_rows_give_identity(self):
        spec = MixClassSpec(np.eye(3))
        for i in (1, 2, 3):
            np.testing.assert_array_equal(mixing_matrix(spec, i), np.eye(3))

    def test_two_by_two(self):
        spec = MixClassSpec([[1.0, 0.0], [0.3, 0.4]])
        np.testing.assert_array_equal(mixing_matrix(spec, 2), [[1, 0], [0.3, 0.4]])

    def test_three_by_three(self):
        spec = MixClassSpec([[9, 9, 9], [2.0, 3.0, 5.0], [7, 7, 7]])
        np.testing.assert_array_equal(mixing_matrix(spec, 2), [[1, 0, 0], [2, 3, 5], [0, 0, 1]])

    @pytest.mark.parametrize("i", [0, 3])
    def test_index_range(self, i):
        with pytest.raises(ValueError):
            mixing_matrix(MixClassSpec(np.eye(2)), i)

    def test_non_square(self):
        with pytest.raises(ValueError):
            MixClassSpec([[1.0, 2.0, 3.0], [4.0, 5.0, 6.0]])

    def test_class_from_params(self):
        cls = mixing_class(MixParams2(0.1, 0.2, 0.3, 0.4))
        np.testing.assert_array_equal(cls.members[0], [[0.1, 0.2], [0, 1]])
        np.testing.assert_array_equal(cls.members[1], [[1, 0], [0.3, 0.4]])


class TestR2:
    @pytest.mark.parametrize(
        "p, verdict, case",
        [
            ((1, 0, 0, 1), STABLE, "a"),
            ((-1, 0, 3.9, -1), STABLE, "d"),
            ((-1, 4, 4, -1), NOT_STABLE, None),
            ((0, 0.5, 0.5, 0), STABLE, "e"),
        ],
    )
    def test_examples(self, p, verdict, case):
        res = r2_criterion(MixParams2(*p))
        assert res.verdict is verdict
        assert res.case == case

    def test_case_b_and_c(self):
        assert r2_criterion(MixParams2(1, 0, 7, -1)).case == "b"
        assert r2_criterion(MixParams2(-1, 7, 0, 1)).case == "c"

    def test_case_e_boundaries(self):
        # |a11| < 1 is strict; the product bounds are closed
        assert r2_criterion(MixParams2(1, 0.3, 0.3, 0.5)).verdict is NOT_STABLE
        assert r2_criterion(MixParams2(0.5, 1, 0.25, 0.5)).case == "e"
        assert r2_criterion(MixParams2(0.5, -1, 0.25, 0.5)).case == "e"
        assert r2_criterion(MixParams2(0.5, 1, 0.26, 0.5)).verdict is NOT_STABLE

    def test_tau_widens_equalities(self):
        p = MixParams2(1 + 1e-9, 0, 1e-9, 1)
        assert r2_criterion(p).verdict is NOT_STABLE
        res = r2_criterion(p, tau=1e-8)
        assert res.verdict is STABLE and res.case == "a"

    def test_tau_widens_strict_bound(self):
        p = MixParams2(-1, 4, 4, -1)
        assert r2_criterion(p, tau=1e-6).case == "d"

    def test_negative_tau(self):
        with pytest.raises(ValueError):
            r2_criterion(MixParams2(0, 0, 0, 0), tau=-1.0)

    def test_first_match_order(self):
        hits = r2_cases(MixParams2(1, 0, 0, 1), tau=0.0)
        assert hits == ["a"]
        hits = r2_cases(MixParams2(1, 0, 0, 1), tau=1.0)
        assert hits[0] == "a" and len(hits) > 1

    @given(params, params, params, params)
    def test_verdict_is_or_of_cases(self, a11, a12, a21, a22):
        p = MixParams2(a11, a12, a21, a22)
        hits = r2_cases(p)
        res = r2_criterion(p)
        assert (res.verdict is STABLE) == bool(hits)
        assert res.case == (hits[0] if hits else None)


class TestRplus:
    @pytest.mark.parametrize(
        "rows, root, verdict",
        [
            ([[0.5, 0.5], [0.5, 0.5]], 1.0, STABLE),
            ([[0.6, 0.6], [0.6, 0.6]], 1.2, NOT_STABLE),
            ([[1 / 3] * 3] * 3, 1.0, STABLE),
        ],
    )
    def test_examples(self, rows, root, verdict):
        res = rplus_criterion(MixClassSpec(rows))
        assert res.verdict is verdict
        assert res.perron_root == pytest.approx(root, abs=1e-10)

    @pytest.mark.parametrize("bad", [0.0, -0.1])
    def test_rejects_non_positive(self, bad):
        with pytest.raises(ValueError):
            rplus_criterion(MixClassSpec([[0.5, bad], [0.5, 0.5]]))

    def test_tau(self):
        spec = MixClassSpec([[0.5, 0.5 + 1e-9], [0.5, 0.5]])
        assert rplus_criterion(spec).verdict is NOT_STABLE
        assert rplus_criterion(spec, tau=1e-8).verdict is STABLE

    @settings(max_examples=50)
    @given(st.integers(0, 10_000))
    def test_diagonal_similarity_invariance(self, seed):
        rng = np.random.default_rng(seed)
        n = int(rng.integers(2, 6))
        a = rng.uniform(0.01, 1.0, size=(n, n))
        d = rng.uniform(0.2, 5.0, size=n)
        scaled = (a * d[:, None]) / d[None, :]
        r1, r2 = perron_root(a), perron_root(scaled)
        assert r1 == pytest.approx(r2, rel=1e-9)
        assert r1 == pytest.approx(max(abs(np.linalg.eigvals(a))), rel=1e-10)
        tau = 0.0
        assert (rplus_criterion(MixClassSpec(a), tau).verdict is rplus_criterion(MixClassSpec(scaled), tau).verdict) or abs(
            r1 - 1.0
        ) < 1e-9


class TestCrossValidate:
    def test_case_e_point(self):
        cv = cross_validate(MixParams2(0, 0.5, 0.5, 0), 12)
        assert cv.status == "agree" and not cv.contradiction
        assert all(v <= 1 + 1e-6 for v in cv.lower_per_depth)
        # A_1 is idempotent with norm sqrt(5)/2, so the depth-12 upper bound
        # is exactly (5/4)^(1/24) and can only approach 1 as depth grows
        assert cv.best_upper == pytest.approx(1.25 ** (1 / 24), rel=1e-12)

    def test_boundary_d_witnessed(self):
        cv = cross_validate(MixParams2(-1, 4, 4, -1), 12)
        assert cv.criterion.verdict is NOT_STABLE
        assert cv.status == "agree"
        assert cv.best_lower > 1

    def test_identity_pair(self):
        cv = cross_validate(MixParams2(1, 0, 0, 1), 8)
        assert cv.status == "agree"
        assert cv.best_lower == 1.0 and cv.best_upper == 1.0

    def test_rplus_path(self):
        cv = cross_validate(MixClassSpec([[0.6, 0.6], [0.6, 0.6]]), 6)
        assert cv.criterion.verdict is NOT_STABLE
        assert not cv.contradiction
        cv = cross_validate(MixClassSpec([[1 / 3] * 3] * 3), 5)
        assert cv.status == "agree"

    def test_lower_bound_never_below_one(self):
        # eigenvalue 1 of each member means a NotStable verdict is always
        # at least weakly witnessed, even barely outside case e
        cv = cross_validate(MixParams2(0.5, 1, 0.2501, 0.5), 2)
        assert cv.criterion.verdict is NOT_STABLE
        assert cv.best_lower >= 1.0
        assert cv.status == "agree"

    def test_sweep_small(self):
        out = sweep_r2(random_r2_points(300, seed=7), 8)
        assert out["counts"]["contradiction"] == 0
        assert sum(out["counts"].values()) == 300

    def test_random_points_reproducible(self):
        assert random_r2_points(5, seed=3) == random_r2_points(5, seed=3)

    def test_interior_case_e_not_exponential(self):
        # every member keeps an identity row, so eigenvalue 1 is always present:
        # interior case-e points are stable but never exponentially stable
        rng = np.random.default_rng(11)
        found = 0
        while found < 20:
            a11, a22 = rng.uniform(-0.9, 0.9, size=2)
            a12, a21 = rng.uniform(-1, 1, size=2)
            lo = -(1 - abs(a11)) * (1 - abs(a22))
            hi = (1 - a11) * (1 - a22)
            if not (lo + 0.05 <= a12 * a21 <= hi - 0.05):
                continue
            found += 1
            rep = stability_bounds(mixing_class(MixParams2(a11, a12, a21, a22)), 8)
            assert rep.best_lower == pytest.approx(1.0, abs=1e-12)
            assert rep.best_upper >= 1.0 - 1e-12
