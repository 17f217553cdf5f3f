import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from src.models.series import Series1, Series2, WeightPair
from src.models.transforms import (
    EMapDescriptor,
    anisotropic_substitute,
    compose,
    d_table,
    dilate_curve,
    directional_restrict,
    from_pm,
    monomial_exclusion_holds,
    normalize_weights,
    nth_root,
    phi_q,
    power_table,
    reversion,
    rotate2,
    rotate_via_pm,
    scaled_residual,
    slices,
    substitute,
    substitution_scale,
    to_pm,
)
from tests.conftest import (
    complex_numbers,
    nonzero_complex,
    random_curve,
    random_series2,
    series1_strategy,
    series2_strategy,
)

IDENTITY_WEIGHTS = [(1, 1), (1, 2), (2, 1), (1, -1), (0, -1), (2, -1)]


def _factorial_phi(order: int) -> np.ndarray:
    return np.array([0.0] + [float(math.factorial(n)) for n in range(1, order + 1)])


@st.composite
def linear_combination(draw):
    """(g1, g2, c, h) con g1, g2 y h del mismo orden"""
    order = draw(st.integers(1, 8))
    g1 = draw(series2_strategy(order, order))
    g2 = draw(series2_strategy(order, order))
    h = draw(series1_strategy(order, order, origin=True))
    return g1, g2, draw(complex_numbers), h


class TestCompose:
    def test_linear_g(self):
        g = Series2.from_terms({(1, 0): 1, (0, 1): 1}, 4)
        h = Series1.monomial(2, 4)
        np.testing.assert_allclose(compose(g, h).coeffs, [0, 1, 1, 0, 0])

    def test_xy_on_parabola_plus_line(self):
        g = Series2.from_terms({(1, 1): 1}, 5)
        h = Series1([0, 1, 1, 0, 0, 0])
        np.testing.assert_allclose(compose(g, h).coeffs, [0, 0, 1, 1, 0, 0])

    def test_phi_of_square_minus_phi_vanishes(self):
        order = 12
        phi = _factorial_phi(order)
        terms = {}
        for n in range(1, order + 1):
            terms[(0, n)] = -phi[n]
            if 2 * n <= order:
                terms[(2 * n, 0)] = phi[n]
        g = Series2.from_terms(terms, order)
        h = Series1.monomial(2, order)
        result = compose(g, h)
        scale = compose(g.abs(), h)
        assert scaled_residual(result, Series1.zeros(order), scale) <= 1e-12

    def test_rejects_nonzero_origin(self):
        g = Series2.from_terms({(0, 1): 1}, 3)
        with pytest.raises(ValueError, match="h\\(0\\)"):
            compose(g, Series1([1, 1, 0, 0]))

    def test_linear_in_g(self, rng):
        g1, g2 = random_series2(rng, 10), random_series2(rng, 10)
        h = random_curve(rng, 10)
        left = compose(g1 * 2.0 + g2, h)
        right = compose(g1, h) * 2.0 + compose(g2, h)
        np.testing.assert_allclose(left.coeffs, right.coeffs, rtol=1e-10, atol=1e-10)

    def test_one_variable_substitution(self):
        outer = Series1([0, 1, 1, 0])
        inner = Series1([0, 1, 1, 0])
        # (x + x^2) + (x + x^2)^2 = x + 2x^2 + 2x^3
        np.testing.assert_allclose(substitute(outer, inner).coeffs, [0, 1, 2, 2])


class TestLinearity:
    @given(linear_combination(), st.floats(-math.pi, math.pi))
    @settings(max_examples=40, deadline=None)
    def test_rotation(self, case, theta):
        g1, g2, c, _ = case
        left = rotate2(g1 * c + g2, theta)
        right = rotate2(g1, theta) * c + rotate2(g2, theta)
        np.testing.assert_allclose(left.coeffs, right.coeffs, atol=1e-8)

    @pytest.mark.parametrize("transform", [to_pm, from_pm])
    @given(case=linear_combination())
    @settings(max_examples=40, deadline=None)
    def test_pm_conjugation(self, transform, case):
        g1, g2, c, _ = case
        left = transform(g1 * c + g2)
        right = transform(g1) * c + transform(g2)
        np.testing.assert_allclose(left.coeffs, right.coeffs, atol=1e-8)

    @given(linear_combination(), complex_numbers, complex_numbers)
    @settings(max_examples=40, deadline=None)
    def test_directional_restriction(self, case, s1, s2):
        g1, g2, c, _ = case
        left = directional_restrict(g1 * c + g2, s1, s2)
        right = directional_restrict(g1, s1, s2) * c + directional_restrict(g2, s1, s2)
        scale = directional_restrict(g1.abs() * abs(c) + g2.abs(), abs(s1), abs(s2))
        assert scaled_residual(left, right, scale) <= 1e-9

    @given(linear_combination(), nonzero_complex, st.sampled_from(IDENTITY_WEIGHTS))
    @settings(max_examples=40, deadline=None)
    def test_anisotropic_substitution(self, case, s, weights):
        g1, g2, c, h = case
        w = WeightPair(*weights)
        left = anisotropic_substitute(g1 * c + g2, h, w, s)
        right = anisotropic_substitute(g1, h, w, s) * c + anisotropic_substitute(g2, h, w, s)
        scale = substitution_scale(g1, h, w, s) * abs(c) + substitution_scale(g2, h, w, s)
        assert scaled_residual(left, right, scale) <= 1e-9


class TestAnisotropicSubstitute:
    def test_direct_expansion(self):
        g = Series2.from_terms({(1, 1): 1}, 4)
        h = Series1.monomial(2, 4)
        result = anisotropic_substitute(g, h, WeightPair(1, 1), 2)
        np.testing.assert_allclose(result.coeffs, [0, 0, 0, 4, 0])

    def test_unit_parameter_is_compose(self, series_pair):
        g, h = series_pair
        for w in IDENTITY_WEIGHTS:
            assert anisotropic_substitute(g, h, WeightPair(*w), 1) == compose(g, h)

    def test_zero_parameter_with_negative_weight(self, series_pair):
        g, h = series_pair
        with pytest.raises(ValueError, match="s = 0"):
            anisotropic_substitute(g, h, WeightPair(1, -1), 0)

    def test_zero_parameter_with_positive_weights(self, series_pair):
        g, h = series_pair
        result = anisotropic_substitute(g, h, WeightPair(1, 1), 0)
        np.testing.assert_allclose(result.coeffs, np.r_[g.coeff(0, 0), np.zeros(result.order)])


class TestPowerTable:
    def test_identity_base(self):
        table = power_table(Series1.identity(5), 5)
        np.testing.assert_array_equal(table.entries, np.eye(6))

    def test_square_of_x_plus_x2(self):
        table = power_table(Series1([0, 1, 1, 0, 0, 0]), 3)
        assert (table.c(2, 2), table.c(2, 3), table.c(2, 4)) == (1, 2, 1)
        assert table.c(3, 2) == 0

    def test_rows_vanish_below_diagonal(self, rng):
        table = power_table(random_curve(rng, 15), 15)
        for j in range(16):
            assert not np.any(table.entries[j, :j])


class TestDTable:
    def test_single_entry(self):
        g = Series2.from_terms({(1, 1): 1}, 5)
        h = Series1.monomial(2, 5)
        table = d_table(g, h, WeightPair(1, 1))
        frame = table.to_frame()
        assert len(frame) == 1
        assert (frame.loc[0, 'p'], frame.loc[0, 'q'], frame.loc[0, 're']) == (3, 2, 1.0)
        assert table.d(3, 2) == 1

    def test_constant_series(self, rng):
        g = Series2.from_terms({(0, 0): 3.0}, 6)
        table = d_table(g, random_curve(rng, 6), WeightPair(1, 2))
        assert not np.any(table.values[1:])

    def test_requires_canonical_weights(self, series_pair):
        g, h = series_pair
        with pytest.raises(ValueError, match="canónicos"):
            d_table(g, h, WeightPair(2, 2))

    @pytest.mark.parametrize("pair", range(100))
    def test_fundamental_identity(self, pair):
        rng = np.random.default_rng(100 + pair)
        w = WeightPair(*IDENTITY_WEIGHTS[pair % len(IDENTITY_WEIGHTS)])
        order = int(rng.integers(24, 31))
        g = random_series2(rng, order)
        h = random_curve(rng, order)
        table = d_table(g, h, w)
        assert table.degree_bound_holds()
        for _ in range(8):
            s = rng.uniform(0.5, 2.0) * np.exp(1j * rng.uniform(0, 2 * np.pi))
            direct = anisotropic_substitute(g, h, w, s)
            assert scaled_residual(table.u_series(s), direct, substitution_scale(g, h, w, s)) <= 1e-9

    def test_q_range(self):
        table = d_table(Series2.from_terms({(1, 1): 1}, 4), Series1.monomial(1, 4), WeightPair(2, -1))
        assert (table.qmin, table.qmax) == (-4, 8)
        assert table.q_range(3) == (-3, 6)
        assert table.d(2, 100) == 0


class TestSlices:
    def test_weight_lines(self):
        g = Series2.from_terms({(2, 0): 1, (1, 1): 1, (0, 2): 1}, 2)
        decomposition = slices(g, WeightPair(1, 2))
        nonzero = [q for q in decomposition.qs if not decomposition[q].series.is_zero()]
        assert nonzero == [2, 3, 4]
        assert decomposition[2].series == Series2.from_terms({(2, 0): 1}, 2)
        assert decomposition[3].series == Series2.from_terms({(1, 1): 1}, 2)
        assert decomposition[4].series == Series2.from_terms({(0, 2): 1}, 2)

    def test_anchor_and_psi(self):
        a, b = 2.0 - 1j, 0.5
        g = Series2.from_terms({(3, 1): a, (1, 2): b}, 4)
        w = WeightPair(1, 2)
        piece = slices(g, w)[5]
        assert piece.anchor == (3, 1)
        np.testing.assert_array_equal(piece.psi.coeffs, [a, b])
        assert piece.rebuild(w) == piece.series == g

    def test_zero_sigma_anchor(self):
        g = Series2.from_terms({(0, 2): 1.0, (3, 2): 4.0}, 6)
        piece = slices(g, WeightPair(0, -1))[-2]
        assert piece.anchor == (0, 2)
        np.testing.assert_array_equal(piece.psi.coeffs[:4], [1, 0, 0, 4])

    def test_empty_slice(self):
        g = Series2.from_terms({(1, 1): 1}, 3)
        empty = slices(g, WeightPair(1, 1))[40]
        assert empty.is_empty and empty.omega == 0
        assert empty.series.is_zero()

    @given(series2_strategy(), st.sampled_from(IDENTITY_WEIGHTS))
    @settings(max_examples=40, deadline=None)
    def test_reassembly_is_exact(self, g, weights):
        assert slices(g, WeightPair(*weights)).reassemble() == g

    def test_positive_weights_bound_support(self, rng):
        g = random_series2(rng, 12)
        decomposition = slices(g, WeightPair(2, 3))
        for q in decomposition.qs:
            assert decomposition[q].omega <= q + 1


class TestPhiQ:
    def test_single_column(self):
        g = Series2.from_terms({(1, 1): 1}, 4)
        h = Series1.monomial(2, 4)
        np.testing.assert_allclose(phi_q(g, h, WeightPair(1, 1), 2).coeffs, [0, 0, 0, 1, 0])

    def test_empty_support_is_zero(self, series_pair):
        g, h = series_pair
        assert phi_q(g, h, WeightPair(1, 1), 1000).is_zero()

    @pytest.mark.parametrize("weights", IDENTITY_WEIGHTS)
    def test_matches_dtable_columns(self, weights):
        rng = np.random.default_rng(7)
        g, h = random_series2(rng, 20), random_curve(rng, 20)
        w = WeightPair(*weights)
        table = d_table(g, h, w)
        for q in range(table.qmin, table.qmax + 1):
            phi = phi_q(g, h, w, q)
            column = table.column(q)
            scale = max(1.0, float(np.max(np.abs(column.coeffs))))
            np.testing.assert_allclose(phi.coeffs, column.coeffs, rtol=0, atol=1e-10 * scale)


class TestReversion:
    def test_identity(self):
        assert reversion(Series1.identity(6)) == Series1.identity(6)

    def test_catalan_signs(self):
        phi = reversion(Series1([0, 1, 1, 0, 0, 0]))
        np.testing.assert_allclose(phi.coeffs, [0, 1, -1, 2, -5, 14])

    def test_rejects_vanishing_linear_term(self):
        with pytest.raises(ValueError, match="u'\\(0\\)"):
            reversion(Series1([0, 0, 1]))

    def test_round_trip(self):
        rng = np.random.default_rng(2024)
        for _ in range(50):
            c = 0.3 * (rng.normal(size=41) + 1j * rng.normal(size=41))
            c[0] = 0
            c[1] = rng.uniform(0.5, 1.5) * np.exp(1j * rng.uniform(0, 2 * np.pi))
            u = Series1(c)
            phi = reversion(u)
            identity = Series1.identity(40)
            assert scaled_residual(substitute(phi, u), identity, substitute(phi.abs(), u.abs())) <= 1e-8
            assert scaled_residual(substitute(u, phi), identity, substitute(u.abs(), phi.abs())) <= 1e-8


class TestNthRoot:
    def test_square(self):
        beta = nth_root(Series1.monomial(2, 8), 2)
        np.testing.assert_allclose(beta.coeffs, np.r_[0, 1, np.zeros(beta.order - 1)])

    def test_binomial_series(self):
        beta = nth_root(Series1([0, 0, 1, 1, 0, 0, 0]), 2)
        np.testing.assert_allclose(beta.coeffs, [0, 1, 0.5, -0.125, 0.0625, -0.0390625])

    def test_principal_branch(self):
        beta = nth_root(Series1([0, 0, -4, 0, 0]), 2)
        assert beta[1] == pytest.approx(2j)

    def test_rejects_wrong_valuation(self):
        with pytest.raises(ValueError):
            nth_root(Series1([0, 1, 1, 0]), 2)

    def test_round_trip(self):
        rng = np.random.default_rng(99)
        for _ in range(50):
            nu = int(rng.integers(1, 5))
            c = 0.3 * (rng.normal(size=41) + 1j * rng.normal(size=41))
            c[:nu] = 0
            c[nu] = rng.uniform(0.5, 2.0) * np.exp(1j * rng.uniform(0, 2 * np.pi))
            w = Series1(c)
            beta = nth_root(w, nu)
            back = beta.power(nu, order=40)
            assert scaled_residual(back, w, beta.abs().power(nu, order=40)) <= 1e-8


class TestRotations:
    def test_radial_function_invariant(self):
        f = Series2.from_terms({(2, 0): 1, (0, 2): 1}, 4)
        np.testing.assert_allclose(rotate2(f, 0.7).coeffs, f.coeffs, atol=1e-12)

    def test_quarter_turn(self):
        f = Series2.from_terms({(1, 0): 1}, 3)
        expected = Series2.from_terms({(0, 1): -1}, 3)
        np.testing.assert_allclose(rotate2(f, math.pi / 2).coeffs, expected.coeffs, atol=1e-15)

    def test_zero_angle_echoes(self, series_pair):
        g, _ = series_pair
        np.testing.assert_allclose(rotate2(g, 0.0).coeffs, g.coeffs, rtol=1e-15, atol=1e-14)

    def test_group_law(self, rng):
        f = random_series2(rng, 15)
        t1, t2 = 0.4, -1.3
        left = rotate2(rotate2(f, t1), t2)
        right = rotate2(f, t1 + t2)
        scale = float(np.max(np.abs(left.coeffs)))
        np.testing.assert_allclose(left.coeffs, right.coeffs, rtol=0, atol=1e-10 * scale)

    def test_pm_of_radial_function(self):
        f = Series2.from_terms({(2, 0): 1, (0, 2): 1}, 3)
        expected = Series2.from_terms({(1, 1): 1}, 3)
        np.testing.assert_allclose(to_pm(f).coeffs, expected.coeffs, atol=1e-15)

    def test_pm_round_trip(self, rng):
        f = random_series2(rng, 12)
        np.testing.assert_allclose(from_pm(to_pm(f)).coeffs, f.coeffs, rtol=0, atol=1e-12 * 2 ** 12)

    def test_conjugation_identity(self, rng):
        f = random_series2(rng, 14)
        for theta in (0.3, 1.7, 4.0):
            rotated = rotate2(f, theta)
            scale = float(np.max(np.abs(rotated.coeffs)))
            np.testing.assert_allclose(rotate_via_pm(f, theta).coeffs, rotated.coeffs,
                                       rtol=0, atol=1e-10 * scale)


class TestCurvesAndRestrictions:
    def test_dilate_parabola(self):
        h = Series1.monomial(2, 4)
        np.testing.assert_allclose(dilate_curve(h, 2).coeffs, [0, 0, 2, 0, 0])
        assert dilate_curve(h, 1) == h

    def test_inverse_dilation(self, rng):
        h = random_curve(rng, 10)
        back = dilate_curve(dilate_curve(h, 1.5 - 0.5j), 1 / (1.5 - 0.5j))
        np.testing.assert_allclose(back.coeffs, h.coeffs, rtol=1e-12, atol=1e-12)

    def test_dilate_at_zero(self):
        with pytest.raises(ValueError, match="s = 0"):
            dilate_curve(Series1.identity(3), 0)

    def test_directional_xy(self):
        g = Series2.from_terms({(1, 1): 1}, 4)
        np.testing.assert_allclose(directional_restrict(g, 1, 1).coeffs, [0, 0, 1, 0, 0])

    def test_directional_matches_evaluation(self, rng):
        g = random_series2(rng, 10)
        s1, s2 = 0.7 + 0.2j, -1.1j
        line = directional_restrict(g, s1, s2)
        for t in np.linspace(-0.4, 0.4, 5):
            expected = g.evaluate(s1 * t, s2 * t)
            assert abs(line(t) - expected) <= 1e-9 * max(1.0, abs(expected))


class TestWeights:
    def test_root_map(self):
        canonical, emap = normalize_weights(WeightPair(2, 4))
        assert canonical == WeightPair(1, 2)
        assert (emap.kind, emap.root_degree) == ('root', 2)

    def test_inversion_map(self):
        canonical, emap = normalize_weights(WeightPair(0, 1))
        assert canonical == WeightPair(0, -1)
        assert emap.kind == 'inversion'

    def test_identity_map(self):
        canonical, emap = normalize_weights(WeightPair(1, 1))
        assert canonical == WeightPair(1, 1)
        assert emap.kind == 'identity'

    def test_pushforward_preserves_restrictions(self, series_pair):
        g, h = series_pair
        w = WeightPair(-2, 2)
        canonical, emap = normalize_weights(w)
        s = 0.8 + 0.3j
        t = emap.pushforward(np.array([s]))[0]
        reduced = anisotropic_substitute(g, h, canonical, t)
        assert scaled_residual(reduced, anisotropic_substitute(g, h, w, s),
                               substitution_scale(g, h, w, s)) <= 1e-10

    def test_preimage_roots(self):
        pts = EMapDescriptor(root_degree=2).preimage(np.array([4.0 + 0j]))
        np.testing.assert_allclose(sorted(pts.real), [-2, 2], atol=1e-12)

    def test_monomial_exclusion(self):
        assert not monomial_exclusion_holds(Series1.monomial(2, 5), WeightPair(1, 2))
        assert monomial_exclusion_holds(Series1([0, 1, 1, 0]), WeightPair(1, 1))
        assert monomial_exclusion_holds(Series1.monomial(1, 5), WeightPair(1, -1))
