"""
Tests for the sigma0 root, the contradiction threshold, the brute-force
S_k oracle and the lower-bound dichotomy.
"""

import math

import pytest
from pydantic import ValidationError

from hessian_rigidity.exceptions import InfeasibleSearchError, PreconditionError
from hessian_rigidity.linalg import ScalarField, SymmetricMatrix
from hessian_rigidity.models import OracleSearch, SignSplit
from hessian_rigidity.operators import (
    Coefficient,
    HessianOperator,
    builtin_eq3,
    builtin_eq4,
    builtin_theoremA,
    constant_operator,
)
from hessian_rigidity.sigma0 import (
    Sigma0Problem,
    build_problem,
    contradiction_eps,
    min_Sk_oracle,
    sigma0_for_operator,
    solve_sigma0,
    verify_lower_bound,
)

from . import EQ3_SIGMA0


class TestSigma0Root:
    """Unique positive root of the sigma0 equation."""

    @pytest.mark.parametrize("n", sorted(EQ3_SIGMA0))
    def test_eq3_values(self, n):
        problem, sigma0 = sigma0_for_operator(builtin_eq3(n))

        assert problem.i1 == 1
        assert problem.js == [n]
        assert sigma0 == pytest.approx(EQ3_SIGMA0[n], rel=1e-10)

    def test_root_satisfies_equation(self):
        p = Sigma0Problem(n=5, i1=1, js=[3, 5], ratio=1.5)
        sigma0 = solve_sigma0(p)
        assert p.root_function()(sigma0) == pytest.approx(1.0, abs=1e-12)

    def test_eq4_n3(self):
        _, sigma0 = sigma0_for_operator(builtin_eq4(3))
        assert sigma0 == pytest.approx(math.sqrt(27.0), rel=1e-10)

    def test_eq4_n5_uses_minus_side_only(self):
        problem, sigma0 = sigma0_for_operator(builtin_eq4(5))

        assert problem.js == [3]
        assert sigma0 == pytest.approx(math.sqrt(12.5), rel=1e-10)

    @pytest.mark.parametrize(
        "problem",
        [
            Sigma0Problem(n=2, i1=1, js=[2], ratio=1.0),
            Sigma0Problem(n=4, i1=1, js=[4], ratio=1.0),
            Sigma0Problem(n=5, i1=1, js=[3, 5], ratio=1.5),
            Sigma0Problem(n=6, i1=2, js=[3, 6], ratio=64.0),
        ],
    )
    def test_root_is_bracketed(self, problem):
        sigma0 = solve_sigma0(problem)
        F = problem.root_function()

        assert F(sigma0 * (1.0 - 1e-6)) < 1.0 < F(sigma0 * (1.0 + 1e-6))

    def test_root_below_one(self):
        # F(sigma) = 10 * (C(2,2) / C(2,1)^2) * sigma = 2.5 sigma
        sigma0 = solve_sigma0(Sigma0Problem(n=2, i1=1, js=[2], ratio=10.0))
        assert sigma0 == pytest.approx(0.4, rel=1e-10)

    def test_larger_ratio_shrinks_root(self):
        base = solve_sigma0(Sigma0Problem(n=3, i1=1, js=[3], ratio=1.0))
        scaled = solve_sigma0(Sigma0Problem(n=3, i1=1, js=[3], ratio=4.0))
        assert scaled < base

    def test_same_sign_has_no_root(self):
        assert sigma0_for_operator(builtin_theoremA(3)) is None

    def test_js_order_does_not_matter(self):
        a = Sigma0Problem(n=4, i1=1, js=[4, 2], ratio=1.0)
        b = Sigma0Problem(n=4, i1=1, js=[2, 4], ratio=1.0)

        assert a.js == [2, 4]
        assert solve_sigma0(a) == solve_sigma0(b)

    def test_rejects_non_positive_tolerance(self):
        with pytest.raises(PreconditionError):
            solve_sigma0(Sigma0Problem(n=2, i1=1, js=[2], ratio=1.0), tol=0.0)


class TestSigma0Problem:
    """Validation of the root-equation data."""

    def test_leader_must_precede_minus_side(self):
        with pytest.raises(ValidationError):
            Sigma0Problem(n=3, i1=2, js=[2], ratio=1.0)

    def test_ratio_at_least_one(self):
        with pytest.raises(ValidationError):
            Sigma0Problem(n=3, i1=1, js=[3], ratio=0.5)

    def test_index_range(self):
        with pytest.raises(ValidationError):
            Sigma0Problem(n=3, i1=1, js=[4], ratio=1.0)

    def test_distinct_indices(self):
        with pytest.raises(ValidationError):
            Sigma0Problem(n=3, i1=1, js=[3, 3], ratio=1.0)

    def test_ratio_below_one_is_lifted(self):
        split = SignSplit(plus_side=[1], minus_side=[2], ratio_bound=0.5)
        assert build_problem(2, split).ratio == 1.0


class TestContradictionEps:
    """Threshold eps below which eps^k C(n, k) < sigma0."""

    def test_values(self):
        assert contradiction_eps(2, 1, 4.0) == pytest.approx(2.0)
        assert contradiction_eps(3, 3, math.sqrt(27.0)) == pytest.approx(math.sqrt(3.0))

    def test_threshold_is_tight(self):
        eps = contradiction_eps(4, 2, 7.0)
        assert eps ** 2 * 6 == pytest.approx(7.0)

    def test_invalid_input(self):
        with pytest.raises(PreconditionError):
            contradiction_eps(2, 3, 4.0)
        with pytest.raises(PreconditionError):
            contradiction_eps(2, 1, 0.0)


class TestOracle:
    """Brute-force minimization of S_k over feasible spectra."""

    @pytest.mark.slow
    @pytest.mark.parametrize("n", [2, 3])
    def test_matches_sigma0_for_eq3(self, n):
        result = min_Sk_oracle(n, builtin_eq3(n), 1)

        assert result.value == pytest.approx(EQ3_SIGMA0[n], rel=1e-4)
        assert result.value >= EQ3_SIGMA0[n] * (1.0 - 1e-9)
        for lam in result.spectrum:
            assert lam == pytest.approx(EQ3_SIGMA0[n] / n, rel=1e-2)

    @pytest.mark.slow
    def test_respects_sigma0_for_eq3_n4(self):
        result = min_Sk_oracle(4, builtin_eq3(4), 1)
        assert result.value >= EQ3_SIGMA0[4] - 1e-6

    def test_determinism(self):
        search = OracleSearch(seed=7, restarts=4, line_points=64)
        first = min_Sk_oracle(4, builtin_eq3(4), 1, search)
        second = min_Sk_oracle(4, builtin_eq3(4), 1, search)
        assert first == second

    def test_index_must_be_active(self):
        with pytest.raises(PreconditionError):
            min_Sk_oracle(3, builtin_eq3(3), 2)

    def test_needs_constant_coefficients(self):
        field = ScalarField(n=2, value=lambda x: 1.0 + 0.5 * math.cos(x[0]))
        varying = Coefficient(field=field, sign=1, mu1=0.5, mu2=1.5)
        op = HessianOperator(n=2, coeffs=(varying, Coefficient.constant(2, -1.0)))
        with pytest.raises(PreconditionError):
            min_Sk_oracle(2, op, 1)

    def test_infeasible(self):
        # S_1 + S_2 = 0 has only the zero spectrum in the non-negative cone
        op = constant_operator(2, {1: 1.0, 2: 1.0})
        with pytest.raises(InfeasibleSearchError):
            min_Sk_oracle(2, op, 1, OracleSearch(box=10.0, grid_points=16))


class TestVerifyLowerBound:
    """The bounded / degenerate dichotomy on solution samples."""

    def setup_method(self):
        self.op = builtin_eq3(2)
        self.problem, self.sigma0 = sigma0_for_operator(self.op)

    def test_bounded_and_degenerate(self):
        samples = [
            ([0.0, 0.0], SymmetricMatrix.identity(2).scaled(2.0)),
            ([1.0, 1.0], SymmetricMatrix.zeros(2)),
            ([0.0, 0.0], SymmetricMatrix.diag([3.0, 1.5])),
        ]
        report = verify_lower_bound(self.problem, self.sigma0, samples, operator=self.op)

        assert report.ok
        assert report.bounded == 2
        assert report.degenerate == 1
        assert report.samples[1].det_vanishes is True

    def test_violation_is_data(self):
        report = verify_lower_bound(self.problem, self.sigma0, [([0.0, 0.0], SymmetricMatrix.identity(2))])

        assert not report.ok
        assert report.violations == [0]
        assert report.samples[0].branch == "violation"

    def test_non_solution_rejected_with_operator(self):
        with pytest.raises(PreconditionError):
            verify_lower_bound(
                self.problem, self.sigma0, [([0.0, 0.0], SymmetricMatrix.identity(2))], operator=self.op
            )

    def test_non_psd_sample_rejected(self):
        with pytest.raises(PreconditionError):
            verify_lower_bound(self.problem, self.sigma0, [([0.0, 0.0], SymmetricMatrix.diag([1.0, -1.0]))])
