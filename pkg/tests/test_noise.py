import math

import numpy as np
import pytest
from scipy import integrate, stats

from jumplab.noise import (LevyMeasure, NoiseRealization, TimeGrid, TruncationError, atoms_from_list,
                           realize, sample_brownian, sample_poisson_atoms, stable_exponent,
                           stable_increment_check, truncated_exponent)

LEB = LevyMeasure("lebesgue_on_interval", 0.0, 1.0)
STABLE = LevyMeasure("stable_positive", 0.01, 100.0, 1.5)


# --- grids and measures ------------------------------------------------------------


def test_uniform_grid_ends_at_t_end():
    g = TimeGrid.uniform(1.0, 0.3)
    assert g.knots[0] == 0.0 and g.knots[-1] == 1.0
    assert np.all(np.diff(g.knots) > 0)


def test_zero_horizon_grid_has_single_knot():
    g = TimeGrid.uniform(0.0, 0.1)
    assert g.knots.tolist() == [0.0]
    assert sample_brownian(g, 3).values.tolist() == [0.0]


@pytest.mark.parametrize("knots", [[0.0, 0.5, 0.5, 1.0], [0.1, 1.0], [0.0, 0.7]])
def test_grid_rejects_bad_knots(knots):
    with pytest.raises(ValueError):
        TimeGrid(1.0, 0.5, np.array(knots))


def test_lebesgue_window_mass_is_its_length():
    assert LEB.mass() == 2.0
    assert LevyMeasure("lebesgue_on_interval", 0.25, 1.0).mass() == pytest.approx(1.5)


def test_stable_tail_mass_matches_antiderivative():
    # int_1^inf z^(-2.5) dz = 1 / 1.5
    m = LevyMeasure("stable_positive", 1.0, math.inf, 1.5)
    assert m.mass() == pytest.approx(2.0 / 3.0, rel=1e-14)


def test_stable_first_moment_matches_quadrature():
    val, _ = integrate.quad(lambda z: z ** -1.5, 0.01, 100.0, epsabs=0, epsrel=1e-12)
    assert STABLE.first_moment() == pytest.approx(val, rel=1e-10)


def test_symmetric_window_has_zero_first_moment():
    m = LevyMeasure("stable_symmetric", 0.1, 10.0, 1.2)
    assert m.first_moment() == 0.0
    assert m.mass() == pytest.approx(2 * (0.1 ** -1.2 - 10.0 ** -1.2) / 1.2)


def test_stable_without_truncation_is_rejected():
    with pytest.raises(TruncationError):
        LevyMeasure("stable_positive", 0.0, 10.0, 1.5)


@pytest.mark.parametrize("alpha", [0.5, 1.0, 2.0])
def test_spectrally_positive_alpha_range(alpha):
    with pytest.raises(ValueError):
        LevyMeasure("stable_positive", 0.1, 10.0, alpha)


def test_unknown_measure_kind():
    with pytest.raises(ValueError):
        LevyMeasure("gamma", 0.1, 1.0)


# --- Brownian path ------------------------------------------------------------------


def test_brownian_is_deterministic_in_seed():
    g = TimeGrid.uniform(1.0, 1e-2)
    a, b = sample_brownian(g, 11), sample_brownian(g, 11)
    assert a.values.tobytes() == b.values.tobytes()
    assert a.values[0] == 0.0
    assert not np.array_equal(a.values, sample_brownian(g, 12).values)


def test_brownian_endpoint_moments():
    g = TimeGrid.uniform(1.0, 1.0)
    w1 = np.array([sample_brownian(g, s).values[-1] for s in range(10_000)])
    assert abs(w1.mean()) <= 0.03
    assert 0.94 <= w1.var(ddof=1) <= 1.06


def test_brownian_increments_pass_ks():
    g = TimeGrid.uniform(1.0, 1e-5)
    w = sample_brownian(g, 0).values
    z = np.diff(w) / np.sqrt(np.diff(g.knots))
    assert z.size == 100_000
    assert stats.kstest(z, "norm").pvalue > 1e-3


# --- Poisson atoms --------------------------------------------------------------------


def test_poisson_count_mean_for_unit_window():
    counts = np.array([len(sample_poisson_atoms(LEB, 1.0, s)) for s in range(10_000)])
    assert 1.958 <= counts.mean() <= 2.042


def test_empty_window_has_no_atoms():
    m = LevyMeasure("lebesgue_on_interval", 0.5, 0.5)
    assert len(sample_poisson_atoms(m, 1.0, 0)) == 0


def test_atoms_inside_window_and_sorted():
    a = sample_poisson_atoms(STABLE, 2.0, 5)
    assert len(a) > 0
    assert np.all(np.diff(a.times) >= 0)
    assert np.all((a.times > 0) & (a.times <= 2.0))
    assert np.all((a.marks >= 0.01) & (a.marks <= 100.0))


def test_symmetric_marks_take_both_signs():
    m = LevyMeasure("stable_symmetric", 0.1, 10.0, 1.2)
    marks = np.concatenate([sample_poisson_atoms(m, 1.0, s).marks for s in range(50)])
    assert np.all(np.abs(marks) >= 0.1)
    assert 0.4 < np.mean(marks > 0) < 0.6


def test_stable_marks_follow_truncated_pareto():
    m = LevyMeasure("stable_positive", 1.0, math.inf, 1.5)
    marks = np.concatenate([sample_poisson_atoms(m, 100.0, s).marks for s in range(100)])
    # survival P(Z > z) = z^(-1.5) on [1, inf)
    assert stats.kstest(marks, lambda z: 1.0 - z ** -1.5).pvalue > 1e-3


def test_atom_list_validation():
    with pytest.raises(ValueError):
        atoms_from_list(LEB, 1.0, [(0.0, 0.5)])
    with pytest.raises(ValueError):
        atoms_from_list(LEB, 1.0, [(1.5, 0.5)])


# --- realizations ------------------------------------------------------------------------


def test_realization_bytes_identical_for_equal_inputs():
    g = TimeGrid.uniform(1.0, 1e-2)
    a, b = realize(g, STABLE, 4), realize(g, STABLE, 4)
    assert a.to_text() == b.to_text()


def test_changing_window_leaves_brownian_path_alone():
    g = TimeGrid.uniform(1.0, 1e-2)
    a = realize(g, STABLE, 9)
    b = realize(g, LevyMeasure("stable_positive", 0.5, 2.0, 1.5), 9)
    assert a.w.values.tobytes() == b.w.values.tobytes()


def test_merged_grid_contains_atoms_as_knots():
    g = TimeGrid.uniform(1.0, 0.25)
    nz = realize(g, LEB, 0, atoms_from_list(LEB, 1.0, [(0.3, 0.5), (0.5, -0.2), (0.3, 0.1)]))
    assert nz.times.tolist() == [0.0, 0.25, 0.3, 0.3, 0.5, 0.5, 0.75, 1.0]
    # base knot before the atom at a shared time; tied atoms in draw order
    assert nz.atom_index.tolist() == [-1, -1, 0, 1, -1, 2, -1, -1]
    dt, dw, is_atom, z = nz.increments()
    assert is_atom.tolist() == [0, 1, 1, 0, 1, 0, 0]
    assert z[is_atom.astype(bool)].tolist() == [0.5, 0.1, -0.2]
    assert dt[2] == 0.0 and dw[2] == 0.0 and dw[3 + 0] == nz.w_merged[4] - nz.w_merged[3]


def test_bridge_interpolates_between_knots():
    g = TimeGrid.uniform(1.0, 0.5)
    nz = realize(g, LEB, 1, atoms_from_list(LEB, 1.0, [(0.5, 0.3), (1.0, 0.1)]))
    # atoms at base knots read W exactly
    assert nz.bridge.tolist() == [nz.w.values[1], nz.w.values[2]]


def test_text_round_trip_is_exact():
    nz = realize(TimeGrid.uniform(1.0, 1e-2), STABLE, 2)
    back = NoiseRealization.from_text(nz.to_text())
    assert back.to_text() == nz.to_text()
    assert back.w_merged.tobytes() == nz.w_merged.tobytes()
    assert back.times.tobytes() == nz.times.tobytes()


def test_realization_is_read_only():
    nz = realize(TimeGrid.uniform(1.0, 0.1), STABLE, 0)
    with pytest.raises(ValueError):
        nz.w_merged[0] = 1.0


# --- stable diagnostics ------------------------------------------------------------------


def test_no_atoms_and_empty_compensator_give_unit_char_function():
    m = LevyMeasure("stable_positive", 50.0, 50.0, 1.5)
    a = sample_poisson_atoms(m, 1.0, 0)
    d = stable_increment_check(a, m, 1.0)
    assert all(e == 1 for e in d.empirical)
    assert all(abs(c - 1) < 1e-12 for c in d.truncated)


def test_truncated_exponent_against_direct_quadrature():
    th = 1.3
    re, _ = integrate.quad(lambda z: (math.cos(th * z) - 1) * z ** -2.5, 0.01, 100.0, limit=500)
    im, _ = integrate.quad(lambda z: (math.sin(th * z) - th * z) * z ** -2.5, 0.01, 100.0, limit=500)
    assert truncated_exponent(STABLE, th) == pytest.approx(complex(re, im), rel=1e-6)


def test_empirical_char_function_matches_truncated_law():
    atoms = [sample_poisson_atoms(STABLE, 1.0, s) for s in range(10_000)]
    d = stable_increment_check(atoms, STABLE, 1.0)
    assert d.max_abs_deviation <= 0.05


def test_truncation_error_shrinks_with_z_min():
    errs = []
    for zmin in (0.1, 0.05, 0.02, 0.01):
        m = LevyMeasure("stable_positive", zmin, 1e4, 1.5)
        errs.append(max(abs(np.exp(truncated_exponent(m, th)) - np.exp(stable_exponent(m, th)))
                        for th in (0.5, 1.0, 2.0)))
    assert all(b < a for a, b in zip(errs, errs[1:]))


def test_stable_check_rejects_lebesgue():
    with pytest.raises(ValueError):
        stable_increment_check(sample_poisson_atoms(LEB, 1.0, 0), LEB, 1.0)
