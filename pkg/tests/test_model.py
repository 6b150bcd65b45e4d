import math

import numpy as np
import pytest

from jumplab.model import (FAIL, INCONCLUSIVE, PASS, BUILTIN_MODELS, ModulusH, builtin, check_combined_modulus,
                           check_F_L1_lipschitz, check_linear_growth, check_lipschitz_b, check_monotone_jump_map,
                           check_osgood, check_stable_like_alpha, custom, integrate_lambda, power_modulus,
                           quadrature_compensator, sample_pairs, sign)
from jumplab.noise import LevyMeasure

UNIT = LevyMeasure("lebesgue_on_interval", 0.0, 1.0)
EMPTY = LevyMeasure("lebesgue_on_interval", 0.0, 0.0)


def drift_only(b):
    return custom(lambda x: 0.0, b, lambda x, z: 0.0, EMPTY, (0.0, 0.0), "drift")


def jump_only(big_f, z_support=(0.0, 1.0)):
    return custom(lambda x: 0.0, lambda x: 0.0, big_f, UNIT, z_support, "jump")


def test_sign_convention():
    assert sign(0.0) == -1.0 and sign(-2.0) == -1.0 and sign(1e-300) == 1.0


# --- Lipschitz drift -----------------------------------------------------------------


def test_affine_drift_constant():
    r = check_lipschitz_b(drift_only(lambda x: 3 * x), (-1, 1))
    assert r.verdict == PASS
    assert r.estimate == pytest.approx(3.0, rel=1e-6)


def test_sqrt_drift_fails_near_zero():
    r = check_lipschitz_b(drift_only(lambda x: math.sqrt(abs(x))), (-1, 1))
    assert r.verdict == FAIL
    x, y = r.witness
    assert max(abs(x), abs(y)) < 1e-4


def test_zero_drift_has_zero_constant():
    r = check_lipschitz_b(drift_only(lambda x: 0.0), (-1, 1))
    assert r.verdict == PASS and r.estimate == 0.0


def test_nonfinite_drift_is_inconclusive():
    r = check_lipschitz_b(drift_only(lambda x: math.inf if x > 0.5 else 0.0), (-1, 1))
    assert r.verdict == INCONCLUSIVE and r.witness is not None


def test_pair_sampling_is_prefix_stable():
    a = sample_pairs((-1, 1), 50, seed=3)
    b = sample_pairs((-1, 1), 500, seed=3)
    assert np.array_equal(a, b[:50])


def test_empty_box_rejected():
    with pytest.raises(ValueError):
        sample_pairs((1.0, 1.0), 10)


# --- linear growth ---------------------------------------------------------------------


def test_linear_growth_unit_sigma():
    spec = custom(lambda x: 1.0, lambda x: 0.0, lambda x, z: 0.0, EMPTY, (0.0, 0.0))
    r = check_linear_growth(spec, (-5, 5), 200)
    assert r.verdict == PASS and r.estimate <= 1.0


def test_linear_growth_state_proportional_jump():
    # F = x on z in [0, 1]: int F^2 dz = x^2
    r = check_linear_growth(jump_only(lambda x, z: x), (-5, 5), 200)
    assert r.verdict == PASS and r.estimate <= 1.0 + 1e-9


def test_quadratic_drift_fails_linear_growth():
    spec = custom(lambda x: 0.0, lambda x: x * x, lambda x, z: 0.0, EMPTY, (0.0, 0.0))
    r = check_linear_growth(spec, (-1e3, 1e3), 200)
    assert r.verdict == FAIL and abs(r.witness) > 10


# --- Osgood ------------------------------------------------------------------------------


@pytest.mark.parametrize("p,expected", [(1.0, PASS), (0.5, PASS), (0.4, FAIL), (0.3, FAIL), (0.75, PASS)])
def test_osgood_power_moduli(p, expected):
    assert check_osgood(power_modulus(p)).verdict == expected


def test_osgood_fail_witness_and_partial_integral():
    r = check_osgood(power_modulus(0.4))
    # int_0^1 u^-0.8 du = 5
    assert r.estimate == pytest.approx(5.0, rel=1e-6)
    assert r.witness > 0


def test_osgood_rejects_nonpositive_modulus():
    with pytest.raises(ValueError):
        check_osgood(ModulusH(lambda u: u - 0.5, 1.0))


def test_osgood_inconclusive_when_levels_run_out():
    assert check_osgood(power_modulus(0.5), refinement_levels=3).verdict == INCONCLUSIVE


# --- monotone jump map ----------------------------------------------------------------------


def test_monotone_jump_map_product_form():
    spec = builtin("spectrally_positive", g="clamp:1")
    assert check_monotone_jump_map(spec).verdict == PASS


def test_reflecting_jump_map_fails_with_witness():
    spec = custom(lambda x: 0.0, lambda x: 0.0, lambda x, z: -2 * x if abs(z) <= 1 else 0.0, UNIT, (-1, 1))
    r = check_monotone_jump_map(spec)
    assert r.verdict == FAIL
    x1, x2, z = r.witness
    assert x1 < x2 and x1 + spec.jump(x1, z) > x2 + spec.jump(x2, z)


def test_zero_jump_map_is_identity():
    assert check_monotone_jump_map(jump_only(lambda x, z: 0.0)).verdict == PASS


def test_monotone_map_needs_zero_in_neighborhood():
    with pytest.raises(ValueError):
        check_monotone_jump_map(jump_only(lambda x, z: 0.0), neighborhood=(0.5, 1.0))


# --- L1 Lipschitz jumps ----------------------------------------------------------------------


def test_sine_jump_is_l1_lipschitz():
    r = check_F_L1_lipschitz(jump_only(lambda x, z: math.sin(x) if z >= 0 else 0.0), (-3, 3), 200)
    assert r.verdict == PASS and r.estimate <= 1.0 + 1e-6


def test_sqrt_jump_fails_l1_lipschitz():
    r = check_F_L1_lipschitz(jump_only(lambda x, z: math.sqrt(abs(x)) if z >= 0 else 0.0), (-1, 1), 300)
    assert r.verdict == FAIL


def test_zero_jump_l1_constant_is_zero():
    r = check_F_L1_lipschitz(jump_only(lambda x, z: 0.0), (-1, 1), 50)
    assert r.verdict == PASS and r.estimate == 0.0


def test_constant_jump_builtin_is_state_independent():
    r = check_F_L1_lipschitz(builtin("constant_jump", c=0.7), (-5, 5), 100)
    assert r.verdict == PASS and r.estimate == 0.0


def test_product_jump_l1_constant_is_first_moment():
    m = LevyMeasure("stable_positive", 0.1, 10.0, 1.5)
    spec = builtin("spectrally_positive", measure=m, g="linear:1")
    r = check_F_L1_lipschitz(spec, (-1, 1), 100)
    assert r.estimate == pytest.approx(m.first_moment(), rel=1e-6)


# --- combined modulus -----------------------------------------------------------------------


def test_combined_modulus_trivial():
    assert check_combined_modulus(jump_only(lambda x, z: 0.0), power_modulus(1.0), (-1, 1), 50).verdict == PASS


def test_combined_modulus_sqrt_drift():
    spec = drift_only(lambda x: math.sqrt(min(max(x, 0.0), 1.0)))
    assert check_combined_modulus(spec, power_modulus(0.5), (0, 1), 500).verdict == PASS


def test_combined_modulus_square_modulus_fails():
    assert check_combined_modulus(drift_only(lambda x: x), power_modulus(2.0), (-1, 1), 100).verdict == FAIL


# --- sampling density monotonicity ------------------------------------------------------------


@pytest.mark.parametrize("n", [10, 40, 160, 640])
def test_fail_verdict_persists_with_more_samples(n):
    b = drift_only(lambda x: math.sqrt(abs(x)))
    small = check_lipschitz_b(b, (-1, 1), n, ceiling=100.0)
    big = check_lipschitz_b(b, (-1, 1), 4 * n, ceiling=100.0)
    if small.verdict == FAIL:
        assert big.verdict == FAIL
        assert big.estimate >= small.estimate


# --- builtins ------------------------------------------------------------------------------


def test_spectrally_positive_unit_g_recovers_identity_jump():
    spec = builtin("spectrally_positive", g="const:1", alpha=1.5)
    assert spec.z_support == (0.01, 100.0)
    for z in (0.01, 0.5, 7.0, 100.0):
        assert spec.jump(3.0, z) == z
    assert spec.jump(3.0, 200.0) == 0.0
    assert spec.compensator(0.0) == pytest.approx(spec.measure.first_moment())


def test_constant_jump_builtin():
    spec = builtin("constant_jump", c=0.3)
    assert spec.measure.mass() == 2.0
    assert spec.jump(5.0, -0.9) == 0.3
    assert spec.compensator(1.0) == pytest.approx(0.6)


def test_tanaka_sign_builtin():
    spec = builtin("tanaka_sign")
    assert spec.sigma(0.0) == -1.0 and spec.sigma(0.1) == 1.0
    assert spec.b(2.0) == 0.0 and spec.measure.mass() == 0.0


def test_gbm_builtin():
    spec = builtin("gbm", mu=0.1, vol=0.3)
    assert spec.sigma(2.0) == pytest.approx(0.6) and spec.b(2.0) == pytest.approx(0.2)


def test_stable_like_builtin():
    spec = builtin("stable_like", alpha_lo=0.5, alpha_hi=1.5)
    a0 = 1.0  # alpha(0) is the midpoint
    assert spec.jump(0.0, 0.5) == pytest.approx(0.5 ** -(1 + a0))
    assert check_stable_like_alpha(spec).verdict == PASS
    # compensator closed form agrees with quadrature
    for x in (-2.0, 0.0, 1.5):
        assert spec.compensator(x) == pytest.approx(quadrature_compensator(spec, x), rel=1e-6)


@pytest.mark.parametrize("label", sorted(BUILTIN_MODELS))
def test_every_builtin_compensator_matches_quadrature(label):
    spec = builtin(label)
    for x in (-0.7, 0.0, 0.4, 3.0):
        assert spec.compensator(x) == pytest.approx(quadrature_compensator(spec, x), rel=1e-6, abs=1e-12)


def test_unknown_builtin():
    with pytest.raises(KeyError, match="foo"):
        builtin("foo")


def test_support_must_lie_in_window():
    with pytest.raises(ValueError):
        custom(lambda x: 0, lambda x: 0, lambda x, z: 0, UNIT, (-2.0, 1.0))


def test_integrate_lambda_on_symmetric_stable_window():
    m = LevyMeasure("stable_symmetric", 0.5, 2.0, 1.0)
    val, ok = integrate_lambda(m, lambda z: 1.0)
    assert ok and val == pytest.approx(m.mass(), rel=1e-9)
