import json
import math

import numpy as np
import pytest

from src.models.diagnostics import MagnitudeLedger, growth_classify
from src.models.paperlab import (
    Example31Spec,
    ScenarioInputs,
    factorial_logs,
    factorial_series,
    gen_example31,
    gen_example32,
    gen_example33,
    gen_example33b,
    nn_logs,
    random_scenario_inputs,
    reduction_residual,
    run_example31,
    run_scenario,
)
from src.models.series import Series1, Series2, WeightPair
from src.models.transforms import (
    anisotropic_substitute,
    compose,
    dilate_curve,
    directional_restrict,
    scaled_residual,
    substitution_scale,
)
from src.utils import sampling


def binomial_series(order: int) -> Series2:
    """1 / (1 - x - y) truncada"""
    return Series2.from_function(lambda i, j: math.comb(i + j, i), order)


class TestDivergentSeries:
    def test_nn_logs(self):
        logs = nn_logs(5)
        assert logs[0] == -np.inf
        assert logs[1] == 0.0
        assert logs[4] == pytest.approx(4 * math.log(4))

    def test_factorial_series(self):
        u = factorial_series(5)
        np.testing.assert_allclose(u.coeffs, [0, 1, 2, 6, 24, 120])


class TestExample31:
    def test_single_point(self):
        instance = gen_example31(Example31Spec(E=sampling.finite([1.0]), order=40))
        g = instance.g
        # P_n = (x - 1)^n y delta_n = 1/n
        assert g.coeff(0, 5) == pytest.approx(5 ** 5)
        assert g.coeff(1, 4) == pytest.approx(-5 * 5 ** 5)
        assert instance.checks['column_residual'] <= 1e-10

    def test_restrictions_bounded(self):
        instance = gen_example31(Example31Spec(E=sampling.finite([1.0, -1.0])))
        assert instance.checks['restriction_max'] <= 1 + 1e-9
        # delta_1 efectivo: sup_E |x - e_0| = 2
        assert instance.extras['effective_delta'][1] == pytest.approx(2.0)

    def test_restriction_coefficients(self):
        instance = gen_example31(Example31Spec(E=sampling.finite([1.0, -1.0])))
        g = instance.g
        r0 = instance.extras['roots'][0]
        delta1 = instance.extras['effective_delta'][1]
        for s in (1.0, -1.0):
            actual = directional_restrict(g, 1.0, s)
            expected = Series1([1.0, (s - r0) / delta1], actual.order)
            assert scaled_residual(actual, expected, directional_restrict(g.abs(), 1.0, abs(s))) <= 1e-9

    def test_ledger_grows_like_n_log_n(self):
        instance = gen_example31(Example31Spec(E=sampling.finite([1.0, -1.0])))
        levels = instance.g_ledger.levels
        n = np.arange(10, len(levels))
        assert np.all(levels[10:] / n >= np.log(n) - 1)
        assert growth_classify(instance.g_ledger).is_divergent

    def test_summary_is_serializable(self):
        instance = gen_example31(Example31Spec(E=sampling.finite([1.0, -1.0, 2.0])))
        summary = instance.summary()
        assert summary['g']['verdict'] == 'divergent'
        json.dumps(summary)

    def test_requires_finite_set(self):
        with pytest.raises(ValueError, match="finito"):
            gen_example31(Example31Spec(E=sampling.segment(-1, 1)))

    def test_delta_must_decrease(self):
        spec = Example31Spec(E=sampling.finite([1.0]), delta=lambda n: float(n))
        with pytest.raises(ValueError, match="no creciente"):
            gen_example31(spec)

    def test_convenience_runner(self, capsys):
        instance = run_example31((1, -1), order=60)
        assert instance.name == 'example31'
        assert "Veredicto de g" in capsys.readouterr().out


class TestExample32:
    @pytest.mark.parametrize("k,sigma", [(1, 1), (2, 1), (3, 2)])
    def test_restrictions_vanish(self, k, sigma):
        instance = gen_example32(k, sigma)
        assert instance.checks['restriction_residual'] <= 1e-9
        assert instance.weights == WeightPair(sigma, sigma * k)

    def test_divergent_g(self):
        instance = gen_example32(2, 1)
        assert growth_classify(instance.g_ledger).is_divergent
        assert instance.g.coeff(0, 3) == pytest.approx(-27.0)
        assert instance.g.coeff(6, 0) == pytest.approx(27.0)

    def test_zero_restriction_at_real_parameter(self):
        instance = gen_example32(2, 1)
        assert anisotropic_substitute(instance.g, instance.h, instance.weights, 1.5).is_zero()

    def test_factorial_phi(self):
        instance = gen_example32(1, 1, phi_logs=factorial_logs)
        assert instance.checks['restriction_residual'] <= 1e-9
        assert growth_classify(instance.g_ledger).is_divergent

    def test_rejects_bad_parameters(self):
        with pytest.raises(ValueError):
            gen_example32(0, 1)
        with pytest.raises(ValueError, match="phi"):
            gen_example32(1, 1, phi_logs=lambda N: np.zeros(N + 1))


class TestExample33:
    def test_catalan_reversion(self):
        instance = gen_example33(WeightPair(1, -1), u=Series1([0, 1, 1]))
        f, h = instance.g, instance.h
        assert instance.checks['restriction_residual'] <= 1e-9
        # phi = reversión de x + x^2
        assert f.coeff(2, 2) == pytest.approx(-1.0)
        assert f.coeff(3, 3) == pytest.approx(2.0)
        assert f.coeff(4, 4) == pytest.approx(-5.0)
        np.testing.assert_allclose(h.coeffs[:5], [0, 1, 0, 1, 0])

    @pytest.mark.parametrize("s", [1.0, 2.0, 1j, -0.5])
    def test_restriction_is_monomial(self, s):
        instance = gen_example33(WeightPair(1, -1), u=Series1([0, 1, 1]))
        f, h, w = instance.g, instance.h, instance.weights
        actual = anisotropic_substitute(f, h, w, s)
        assert scaled_residual(actual, Series1.monomial(2, actual.order),
                               substitution_scale(f, h, w, s)) <= 1e-9

    def test_default_is_divergent(self):
        instance = gen_example33(WeightPair(1, -1))
        assert instance.checks['restriction_residual'] <= 1e-9
        assert growth_classify(instance.g_ledger).is_divergent
        assert growth_classify(instance.h_ledger).is_divergent

    def test_relation_for_sigma_two(self):
        instance = gen_example33(WeightPair(2, -1))
        assert instance.checks['relation_residual'] <= 1e-9
        assert instance.checks['reversion_residual'] <= 1e-6

    def test_requires_normalized_u(self):
        with pytest.raises(ValueError, match="u'"):
            gen_example33(WeightPair(1, -1), u=Series1([0, 2, 1]))

    def test_requires_sign_pattern(self):
        with pytest.raises(ValueError, match="tau"):
            gen_example33(WeightPair(1, 1))


class TestExample33b:
    def test_identity_curve(self):
        instance = gen_example33b(h=Series1.identity(31))
        assert instance.g == Series2.from_terms({(1, 1): 1}, instance.g.order)

    def test_alternating_quotient(self):
        instance = gen_example33b(h=Series1([0, 1, 1]), order=40)
        phi = instance.extras['phi']
        np.testing.assert_allclose(phi.coeffs[1:8], [1, -1, 1, -1, 1, -1, 1], atol=1e-10)
        assert instance.checks['restriction_residual'] <= 1e-9

    def test_default_is_divergent(self):
        instance = gen_example33b()
        assert growth_classify(instance.extras['phi_ledger']).is_divergent
        assert growth_classify(instance.g_ledger).is_divergent

    def test_rejects_flat_curve(self):
        with pytest.raises(ValueError, match="h'"):
            gen_example33b(h=Series1.monomial(2, 10))
        with pytest.raises(ValueError):
            gen_example33b(h=Series1([1, 1, 0]))


class TestScenarios:
    def test_cor15_convergent_inputs(self):
        inputs = random_scenario_inputs('cor15', seed=3)
        inputs.h = Series1.monomial(2, 30)
        report = run_scenario('cor15', inputs)
        assert report.hypotheses_hold
        assert report.all_restrictions_convergent
        assert report.conclusion.is_convergent
        assert report.consistent
        assert report.details['reduction_residual'] <= 1e-9
        assert len(report.table) == 16

    def test_cor15_reduction_check(self):
        g = Series2.from_terms({(0, 1): 1}, 10)
        h = Series1([0, 1, 1] + [0] * 8)
        # h_s(x / s) = x / s + x^2 / s = h(x) / s
        assert reduction_residual(compose(g, dilate_curve(h, 1.5)), g, h, 1.5) <= 1e-12
        # otra s: el coeficiente de x^2 pasa a 2 / 2.25
        wrong = compose(g, dilate_curve(h, 2.0))
        assert reduction_residual(wrong, g, h, 1.5) == pytest.approx(1 / 3)

    def test_cor15_linear_curve_is_flagged(self):
        inputs = random_scenario_inputs('cor15', seed=3)
        inputs.h = Series1.identity(30)
        report = run_scenario('cor15', inputs)
        assert report.hypotheses['h_nonlinear'] is False
        assert any('h_nonlinear' in w for w in report.warnings)

    def test_thm11_monomial_exclusion(self):
        instance = gen_example32(2, 1)
        inputs = ScenarioInputs(g=instance.g, h=instance.h, weights=instance.weights,
                                E=sampling.segment(1.0, 2.0, count=16))
        report = run_scenario('thm11', inputs)
        assert report.hypotheses['monomial_exclusion'] is False
        assert any('monomio' in w for w in report.warnings)
        assert report.all_restrictions_convergent
        assert report.conclusion.is_divergent
        # hipótesis violada, no inconsistencia
        assert report.consistent

    def test_thm16_binomial_series(self):
        inputs = ScenarioInputs(g=binomial_series(30), h=Series1.monomial(2, 30), E=sampling.angles(12))
        report = run_scenario('thm16', inputs)
        assert report.hypotheses_hold
        assert report.all_restrictions_convergent
        assert report.conclusion.is_convergent
        assert report.details['conjugation_residual'] <= 1e-6

    def test_thm12_uses_canonical_weights(self):
        inputs = random_scenario_inputs('thm12', seed=1)
        inputs.weights = WeightPair(2, 2)
        report = run_scenario('thm12', inputs)
        assert report.details['canonical_weights'] == [1, 1]
        assert report.details['emap'] != 'identity'

    def test_thm13_without_y_dependence(self):
        inputs = random_scenario_inputs('thm13', seed=2)
        inputs.g = Series2.from_terms({(1, 0): 1.0, (2, 0): 0.5}, 30)
        report = run_scenario('thm13', inputs)
        assert report.hypotheses == {'g_y_nonzero': False}
        assert report.warnings

    def test_report_is_serializable(self):
        report = run_scenario('thm11', random_scenario_inputs('thm11', seed=0))
        payload = report.to_dict()
        assert payload['scenario'] == 'thm11'
        json.dumps(payload)

    def test_unknown_scenario(self):
        with pytest.raises(ValueError, match="desconocido"):
            run_scenario('thm99', ScenarioInputs())

    def test_missing_inputs(self):
        with pytest.raises(ValueError, match="faltan"):
            run_scenario('cor15', ScenarioInputs(h=Series1.identity(5)))

    def test_curve_off_origin(self):
        inputs = random_scenario_inputs('thm11', seed=0)
        inputs.h = Series1([1.0, 1.0, 0.0])
        with pytest.raises(ValueError, match="h\\(0\\)"):
            run_scenario('thm11', inputs)

    @pytest.mark.parametrize("name", ['thm11', 'cor15', 'thm16'])
    def test_workers_do_not_change_results(self, name):
        inputs = random_scenario_inputs(name, seed=5)
        serial = run_scenario(name, inputs, n_workers=1)
        threaded = run_scenario(name, inputs, n_workers=4)
        assert serial.to_dict() == threaded.to_dict()

    @pytest.mark.parametrize("seed", range(50))
    @pytest.mark.parametrize("name", ['thm11', 'thm12', 'thm13', 'cor15', 'thm16'])
    def test_random_convergent_inputs(self, name, seed):
        report = run_scenario(name, random_scenario_inputs(name, seed))
        assert report.hypotheses_hold
        assert not report.conclusion.is_divergent
        assert report.consistent


def test_example31_on_roots_of_unity():
    instance = gen_example31(Example31Spec(E=sampling.finite([1.0, 1j, -1.0, -1j]), order=80))
    ledger = MagnitudeLedger.from_logs(instance.g_ledger.levels)
    assert instance.checks['restriction_max'] <= 1 + 1e-9
    assert growth_classify(ledger).is_divergent
