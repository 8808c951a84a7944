"""
Tests for the scenario runner, the rigidity probe and report assembly.
"""

import json

import numpy as np
import pytest

from hessian_rigidity.examples import affine_field, make_cosine_example, sqrt_field
from hessian_rigidity.exceptions import ConfigurationError, PreconditionError
from hessian_rigidity.harness import REPORT_VERSION, affine_conclusion, rigidity_probe, run_scenario, run_scenario_async
from hessian_rigidity.models import ProbeSpec, Scenario
from hessian_rigidity.operators import builtin_eq3

from . import EQ3_SIGMA0


def checks_by_name(report):
    return {c.name: c for c in report.checks}


class TestSymmScenario:
    """Kind 'symm'."""

    def test_psd_matrix_inside_eps_box(self):
        report = run_scenario(Scenario(kind="symm", matrix=[[2.0, 1.0], [1.0, 2.0]], eps=3.0), write_outputs=False)
        checks = checks_by_name(report)

        assert report.exit_code == 0
        assert set(checks) == {"spectrum", "trace_identity", "characteristic_polynomial", "maclaurin_chain", "majorization"}
        assert checks["spectrum"].measured["S"] == pytest.approx([1.0, 4.0, 3.0])

    def test_indefinite_matrix_skips_inequalities(self):
        report = run_scenario(Scenario(kind="symm", matrix=[[1.0, 0.0], [0.0, -1.0]]), write_outputs=False)
        checks = checks_by_name(report)

        assert report.exit_code == 0
        assert checks["maclaurin_chain"].status == "skipped"
        assert checks["majorization"].status == "skipped"

    def test_missing_matrix(self):
        with pytest.raises(ConfigurationError):
            run_scenario(Scenario(kind="symm"), write_outputs=False)

    def test_asymmetric_matrix(self):
        with pytest.raises(ConfigurationError):
            run_scenario(Scenario(kind="symm", matrix=[[1.0, 2.0], [0.0, 1.0]]), write_outputs=False)


class TestSigma0Scenario:
    """Kind 'sigma0'."""

    def test_eq3_n2(self):
        report = run_scenario(Scenario(kind="sigma0"), write_outputs=False)
        checks = checks_by_name(report)

        assert report.exit_code == 0
        assert report.version == REPORT_VERSION
        assert checks["sigma0_root"].measured["sigma0"] == pytest.approx(EQ3_SIGMA0[2], rel=1e-10)
        assert checks["contradiction_eps"].measured["eps"] == pytest.approx(2.0)
        assert checks["oracle_tightness"].status == "pass"
        assert checks["oracle_tightness"].measured["tight"] is True
        assert checks["lower_bound_dichotomy"].measured["bounded"] == 1
        assert checks["lower_bound_dichotomy"].measured["degenerate"] == 1

    def test_same_sign_operator(self):
        report = run_scenario(Scenario(kind="sigma0", operator={"builtin": "theoremA", "n": 2}), write_outputs=False)
        checks = checks_by_name(report)

        assert checks["lemma_case"].measured["case"] == "all_same_sign"
        assert checks["sigma0_root"].status == "skipped"

    def test_separable_operator_skips_oracle(self):
        scenario = Scenario(kind="sigma0", operator={"builtin": "separable", "n": 2, "q": 0.5})
        checks = checks_by_name(run_scenario(scenario, write_outputs=False))

        # ratio n q^(-n-1) = 16, so F(sigma) = 4 sigma
        assert checks["sigma0_root"].measured["ratio"] == pytest.approx(16.0)
        assert checks["sigma0_root"].measured["sigma0"] == pytest.approx(0.25, rel=1e-10)
        assert checks["oracle_tightness"].status == "skipped"

    def test_custom_needs_coefficients(self):
        with pytest.raises(ConfigurationError):
            run_scenario(Scenario(kind="sigma0", operator={"builtin": "custom", "n": 2}), write_outputs=False)

    def test_builtin_dimension_rejected(self):
        with pytest.raises(ConfigurationError):
            run_scenario(Scenario(kind="sigma0", operator={"builtin": "eq3", "n": 1}), write_outputs=False)


class TestVerifyExampleScenario:
    """Kind 'verify-example'."""

    def test_cosine_example_passes(self):
        report = run_scenario(Scenario(kind="verify-example"), write_outputs=False)
        checks = checks_by_name(report)

        assert report.exit_code == 0, [c for c in report.checks if c.status == "fail"]
        assert checks["residual_exact"].measured["points"] == 121
        assert checks["residual_fd"].status == "skipped"
        assert checks["fd_hessian"].status == "pass"
        assert checks["lemma_case"].measured["plus_side"] == [1]
        assert checks["separable_identity"].status == "pass"
        assert checks["separable_identity"].measured["points"] == 121
        assert checks["lower_bound_dichotomy_uniform"].status == "pass"
        assert checks["lower_bound_dichotomy_uniform"].measured["ratio"] == pytest.approx(64.0)

    def test_step_profile_passes(self):
        scenario = Scenario(
            kind="verify-example",
            operator={"builtin": "separable", "profile": "step", "q": 0.5},
            sampling={"points_per_axis": 5},
        )
        report = run_scenario(scenario, write_outputs=False)

        assert report.exit_code == 0
        assert checks_by_name(report)["fd_hessian"].status == "skipped"

    def test_grid_too_large(self):
        scenario = Scenario(kind="verify-example", operator={"n": 3}, sampling={"points_per_axis": 1001})
        with pytest.raises(ConfigurationError):
            run_scenario(scenario, write_outputs=False)

    def test_deterministic_report(self):
        first = run_scenario(Scenario(kind="verify-example"), write_outputs=False)
        second = run_scenario(Scenario(kind="verify-example"), write_outputs=False)
        assert first.model_dump_json() == second.model_dump_json()

    def test_writes_report_and_csv(self, tmp_path):
        out = tmp_path / "reports" / "report.json"
        rows = tmp_path / "points.csv"
        scenario = Scenario(
            kind="verify-example",
            sampling={"points_per_axis": 3},
            output={"report": str(out), "csv": str(rows)},
        )
        run_scenario(scenario)

        document = json.loads(out.read_text())
        assert document["summary"]["failed"] == 0
        lines = rows.read_text().splitlines()
        assert lines[0] == "x1,x2,residual,S1,S2,min_eigenvalue"
        assert len(lines) == 1 + 9


class TestResidualScanScenario:
    """Kind 'residual-scan'."""

    def test_eq3_quadratic_solution(self):
        report = run_scenario(Scenario(kind="residual-scan"), write_outputs=False)
        checks = checks_by_name(report)

        assert checks["residual_exact"].status == "pass"
        assert checks["residual_fd"].status == "pass"

    def test_monge_ampere_solution(self):
        scenario = Scenario(kind="residual-scan", operator={"builtin": "theoremA", "n": 3}, sampling={"points_per_axis": 3})
        checks = checks_by_name(run_scenario(scenario, write_outputs=False))
        assert checks["residual_exact"].status == "pass"

    def test_same_sign_uses_affine_solution(self):
        scenario = Scenario(kind="residual-scan", operator={"builtin": "custom", "n": 2, "coefficients": {1: 1.0, 2: 2.0}})
        checks = checks_by_name(run_scenario(scenario, write_outputs=False))

        assert checks["residual_exact"].status == "pass"
        assert checks["residual_exact"].measured["max_abs"] == 0.0


class TestRigidityProbe:
    """The touching-paraboloid construction."""

    def test_sqrt_minimizer_is_interior(self):
        for eps in (0.5, 0.1, 0.02):
            report = rigidity_probe(sqrt_field(2), eps, operator=builtin_eq3(2))

            assert not report.inconclusive
            assert report.touching_ok
            assert report.majorization is not None and report.majorization.holds
            # the minimizer sits on the circle 1 + r^2 = 1 / eps^2
            assert np.linalg.norm(report.x0) == pytest.approx(np.sqrt(1.0 / eps ** 2 - 1.0), rel=1e-4)
            assert report.hessian_max_eigenvalue == pytest.approx(eps, rel=1e-6)
            assert report.contradiction_eps == pytest.approx(2.0)
            assert report.contradicts_lower_bound is True

    def test_affine_minimizer(self):
        report = rigidity_probe(affine_field(2, [1.0, -0.5]), 0.1)

        assert not report.inconclusive
        assert report.x0 == pytest.approx([10.0, -5.0], abs=1e-6)
        assert report.hessian_max_eigenvalue == 0.0
        assert report.lemma_index is None

    def test_separable_minimizer_hits_boundary(self):
        ex = make_cosine_example(2, 0.5)
        report = rigidity_probe(ex.field, 0.1, ProbeSpec(box=20.0, grid_points=21))

        assert report.inconclusive
        assert not report.touching_ok

    def test_rejects_non_positive_eps(self):
        with pytest.raises(PreconditionError):
            rigidity_probe(sqrt_field(2), 0.0)

    def test_affine_conclusion(self):
        samples = [np.array([1.0, 2.0]), np.array([-3.0, 0.5])]

        assert affine_conclusion(affine_field(2), samples).affine
        assert not affine_conclusion(make_cosine_example(2, 0.5).field, samples).affine
        with pytest.raises(PreconditionError):
            affine_conclusion(affine_field(2), [])


class TestProbeScenario:
    """Kind 'rigidity-probe'."""

    def test_sqrt_field(self):
        report = run_scenario(Scenario(kind="rigidity-probe"), write_outputs=False)
        checks = checks_by_name(report)

        assert report.exit_code == 0
        for eps in (0.5, 0.1, 0.02):
            assert checks[f"probe[eps={eps:g}]"].status == "pass"
        assert checks["affine_conclusion"].status == "skipped"

    def test_separable_field_is_inconclusive(self):
        scenario = Scenario(kind="rigidity-probe", probe={"field": "separable", "box": 20.0, "grid_points": 21})
        report = run_scenario(scenario, write_outputs=False)
        checks = checks_by_name(report)

        assert report.exit_code == 0
        assert all(checks[f"probe[eps={eps:g}]"].status == "skipped" for eps in (0.5, 0.1, 0.02))
        assert checks["affine_conclusion"].status == "pass"
        assert checks["affine_conclusion"].measured["expected_affine"] is False

    def test_affine_field(self):
        scenario = Scenario(kind="rigidity-probe", probe={"field": "affine", "eps": [0.1]})
        checks = checks_by_name(run_scenario(scenario, write_outputs=False))

        assert checks["probe[eps=0.1]"].status == "pass"
        assert checks["affine_conclusion"].status == "pass"


class TestGrowthScenario:
    """Kind 'growth'."""

    def test_separable_growth(self):
        report = run_scenario(Scenario(kind="growth"), write_outputs=False)
        checks = checks_by_name(report)

        assert report.exit_code == 0
        assert checks["growth_order"].measured["verdict"] == "quadratic"
        assert checks["growth_sandwich"].status == "pass"
        assert checks["growth_bounds"].status == "pass"

    def test_sqrt_growth(self):
        report = run_scenario(Scenario(kind="growth", growth={"field": "sqrt"}), write_outputs=False)

        assert report.exit_code == 0
        assert "growth_bounds" not in checks_by_name(report)

    def test_small_radii_fail(self):
        scenario = Scenario(kind="growth", growth={"field": "affine", "radii": [0.1, 0.2]})
        report = run_scenario(scenario, write_outputs=False)

        assert report.exit_code == 1
        assert checks_by_name(report)["growth_order"].status == "fail"

    def test_too_few_directions(self):
        scenario = Scenario(kind="growth", operator={"n": 3}, growth={"directions": 4})
        with pytest.raises(ConfigurationError):
            run_scenario(scenario, write_outputs=False)


class TestAsyncRunner:
    """run_scenario_async."""

    async def test_matches_sync_runner(self):
        scenario = Scenario(kind="sigma0", operator={"builtin": "eq4", "n": 3})
        report = await run_scenario_async(scenario, write_outputs=False)

        assert report.model_dump_json() == run_scenario(scenario, write_outputs=False).model_dump_json()
