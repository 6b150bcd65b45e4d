"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

The lines are also collected into the "acceptance criteria" section of the
pytest terminal summary.
"""

import json
import math
import time

import numpy as np
from scipy import stats

from jumplab.cli import main
from jumplab.harness import (FAIL, PASS, REFUSED, big_jump_equivalence_experiment, comparison_experiment,
                             gbm_strong_order, lattice_experiment, slanted_zero_experiment,
                             uniqueness_gap_experiment)
from jumplab.localtime import (build_phi, check_phi_properties, check_prop4_condition_c, check_prop4_condition_d,
                               occupation_identity_check, slanted_local_time, tanaka_local_time)
from jumplab.model import check_osgood, builtin, power_modulus, sample_pairs
from jumplab.noise import LevyMeasure, TimeGrid, realize, sample_brownian, sample_poisson_atoms
from jumplab.solver import SolveConfig, from_values, solve


def report(log, number, ok, detail):
    log(number, ok, detail)
    print(f"criterion {number}: {'PASS' if ok else 'FAIL'}  {detail}")
    return ok


def sqrt_jump_model():
    return builtin("sqrt_jump", measure=LevyMeasure("stable_positive", 0.1, 10.0, 1.5), vol=1.0, g="clamp:1",
                   alpha=1.5, drift=0.0)


def test_criterion_1_noise_statistics(acceptance_log):
    t0 = time.perf_counter()
    g = TimeGrid.uniform(1.0, 1e-5)
    z = np.diff(sample_brownian(g, 0).values) / np.sqrt(np.diff(g.knots))
    ks_p = stats.kstest(z, "norm").pvalue
    leb = LevyMeasure("lebesgue_on_interval", 0.0, 1.0)
    mean_count = np.mean([len(sample_poisson_atoms(leb, 1.0, s)) for s in range(10_000)])
    elapsed = time.perf_counter() - t0
    ok = z.size == 100_000 and ks_p > 1e-3 and abs(mean_count - 2.0) <= 0.042 and elapsed < 10
    assert report(acceptance_log, 1, ok,
                  f"KS p={ks_p:.3g} on {z.size} increments; mean atoms={mean_count:.4f}; {elapsed:.1f}s")


def test_criterion_2_exact_solution_oracles(acceptance_log):
    t0 = time.perf_counter()
    nz = realize(TimeGrid.uniform(1.0, 0.013), LevyMeasure("lebesgue_on_interval", 0.0, 0.0), 1)
    drift_err = float(np.max(np.abs(solve(builtin("affine", b0=1.0), nz, 0.5).values - (0.5 + nz.times))))
    cj = builtin("constant_jump", c=0.4)
    jump_err = 0.0
    for seed in range(20):
        nz = realize(TimeGrid.uniform(1.0, 1e-2), cj.measure, seed)
        counts = np.cumsum(nz.atom_index >= 0)
        p = solve(cj, nz, 0.0)
        jump_err = max(jump_err, float(np.max(np.abs(p.values - 0.4 * (counts - 2.0 * nz.times)))))
    order = gbm_strong_order(steps=(1e-2, 1e-3, 1e-4), n_seeds=100)
    elapsed = time.perf_counter() - t0
    ok = drift_err <= 1e-13 and jump_err <= 1e-12 and 0.35 <= order["order"] <= 0.65 and elapsed < 60
    assert report(acceptance_log, 2, ok,
                  f"drift err={drift_err:.1e}; jump err={jump_err:.1e}; gbm order={order['order']:.3f}; "
                  f"{elapsed:.1f}s")


def test_criterion_3_local_time(acceptance_log):
    t0 = time.perf_counter()
    spec = builtin("affine", s0=1.0)
    grid = TimeGrid.uniform(1.0, 1e-4)
    lt = [tanaka_local_time(solve(spec, realize(grid, spec.measure, s), 0.0), 0.0).value for s in range(1000)]
    mean = float(np.mean(lt))
    target = math.sqrt(2.0 / math.pi)
    # x0 = -1, jump +2 at t = 0.5: L^0 = 1 - 1 - (-2) - 2 = 0 and the slanted version keeps the 2
    p = from_values([0.0, 0.5, 1.0], [-1.0, 1.0, 1.0], {1: 2.0})
    hand = tanaka_local_time(p, 0.0).value == 0.0 and slanted_local_time(p, 0.0).value == 2.0
    elapsed = time.perf_counter() - t0
    ok = abs(mean - target) <= 0.05 and hand and elapsed < 120
    assert report(acceptance_log, 3, ok,
                  f"mean L0_1={mean:.4f} vs {target:.4f}; single-jump hand values {hand}; {elapsed:.1f}s")


def test_criterion_4_occupation_density(acceptance_log):
    spec = builtin("affine", s0=1.0)
    gaps_fine = [occupation_identity_check(solve(spec, realize(TimeGrid.uniform(1.0, 1e-4), spec.measure, s), 0.0),
                                           n_levels=200).relative_gap for s in range(20)]
    means = []
    # level count scales like dt^(-1/2) so the level spacing tracks the path increments
    for step, levels in ((1e-2, 20), (1e-3, 63), (1e-4, 200)):
        gaps = [occupation_identity_check(solve(spec, realize(TimeGrid.uniform(1.0, step), spec.measure, s), 0.0),
                                          n_levels=levels).relative_gap for s in range(20)]
        means.append(float(np.mean(gaps)))
    ok = max(gaps_fine) <= 0.1 and means[0] > means[1] > means[2]
    assert report(acceptance_log, 4, ok,
                  f"max gap at dt=1e-4: {max(gaps_fine):.4f}; mean gap by refinement "
                  + ", ".join(f"{m:.4f}" for m in means))


def test_criterion_5_osgood(acceptance_log):
    got = {p: check_osgood(power_modulus(p)).verdict for p in (0.3, 0.4, 0.5, 0.75, 1.0)}
    want = {p: PASS if p >= 0.5 else FAIL for p in got}
    assert report(acceptance_log, 5, got == want, f"verdicts {got}")


def test_criterion_6_phi_suite(acceptance_log):
    h = power_modulus(1.0)
    phis = [build_phi(h, n) for n in range(1, 11)]
    ab = all(check_phi_properties(phi).verdict == PASS for phi in phis)
    pairs = sample_pairs((-2.0, 2.0), 2000, seed=0)
    c_reports = [check_prop4_condition_c(math.sin, phi, pairs) for phi in phis]
    c_ok = all(r.verdict == PASS and r.estimate <= 2.0 / r_n for r, r_n in zip(c_reports, range(1, 11)))
    m = LevyMeasure("stable_positive", 0.1, 10.0, 1.5)
    spec = builtin("spectrally_positive", measure=m, g="linear:1")
    # a pair only feels the phi_n whose curvature band holds its gap, so the gap set is dense
    d = np.geomspace(1e-3, 1.0, 40)
    d_rep = check_prop4_condition_d(spec, phis, np.column_stack([0.3 + d / 2, 0.3 - d / 2]))
    maxima = d_rep.metadata["maxima"]
    ok = ab and c_ok and d_rep.verdict == PASS
    assert report(acceptance_log, 6, ok,
                  f"(a,b) {ab}; (c) {c_ok}; (d) sup over pairs n=1: {maxima[0]:.3f} -> n=10: {maxima[-1]:.3f}")


def test_criterion_7_theorem_experiments(acceptance_log):
    t0 = time.perf_counter()
    parts = {}
    gap = uniqueness_gap_experiment(builtin("affine", b1=1.0), 0.0, [0.0, 1e-3, 1e-2], 20, SolveConfig(1e-3))
    parts["uniqueness_gap"] = gap.verdict == PASS

    thm14 = comparison_experiment((builtin("affine", s0=1.0), builtin("affine", s0=1.0, b0=1.0)), (0.0, 0.0),
                                  1000, SolveConfig(1e-3))
    m = LevyMeasure("stable_positive", 0.01, 100.0, 1.5)
    thm15 = comparison_experiment((builtin("spectrally_positive", measure=m, g="clamp:1"),
                                   builtin("spectrally_positive", measure=m, g="clamp:1", drift=0.5)),
                                  (0.0, 0.1), 1000, SolveConfig(1e-3))
    swapped = comparison_experiment((builtin("affine", s0=1.0, b0=1.0), builtin("affine", s0=1.0)), (0.0, 0.0),
                                    100, SolveConfig(1e-3), enforce_hypotheses=False)
    swapped_guarded = comparison_experiment((builtin("affine", s0=1.0, b0=1.0), builtin("affine", s0=1.0)),
                                            (0.0, 0.0), 100, SolveConfig(1e-3))
    parts["comparison"] = (thm14.aggregate["total_violations"] == 0 and thm15.aggregate["total_violations"] == 0
                           and thm14.verdict == PASS and thm15.verdict == PASS)
    parts["comparison_control"] = (swapped.verdict == FAIL and swapped.aggregate["total_violations"] > 0
                                   and swapped_guarded.verdict == REFUSED)

    spec = sqrt_jump_model()
    slz = slanted_zero_experiment((spec, spec), (0.2, 0.3), 100, SolveConfig(1e-4))
    tanaka = builtin("tanaka_sign")
    control = slanted_zero_experiment((tanaka, tanaka), (0.0, 0.0), 100, SolveConfig(1e-4), second_leg="mirror")
    parts["slanted"] = slz.verdict == PASS
    parts["slanted_control"] = control.verdict == FAIL

    lat = lattice_experiment(spec, (0.2, 0.3), 40, SolveConfig(4e-3), refinements=(1, 4, 16))
    parts["lattice"] = lat.verdict == PASS

    big = big_jump_equivalence_experiment(builtin("spectrally_positive", measure=m, g="const:1"), 0.0, 100,
                                          SolveConfig(1e-3))
    parts["big_jump"] = big.verdict == PASS and big.aggregate["all_equal"]
    elapsed = time.perf_counter() - t0
    ok = all(parts.values()) and elapsed < 600
    detail = (f"{parts}; gap ratio {gap.aggregate['per_delta'][1]['ratio']:.3f} <= "
              f"{gap.aggregate['envelope_factor']:.3f}; swapped violations {swapped.aggregate['total_violations']}; "
              f"slanted max {slz.aggregate['max_abs_slanted_L0']:.2e} <= tau {slz.tolerances['tau']:.2e}; "
              f"tanaka max {control.aggregate['max_abs_slanted_L0']:.2f}; lattice order {lat.aggregate['order']:.2f}; "
              f"big-jump seeds {big.aggregate['seeds_with_big_jumps']}; {elapsed:.0f}s")
    assert report(acceptance_log, 7, ok, detail)


CRIT8_CONFIGS = {
    "slanted_zero_experiment": """\
[jumplab]
schema_version = 1
[experiment]
name = slanted_zero_experiment
x0s = 0.2, 0.3
[model]
label = sqrt_jump
vol = 1
g = clamp:1
[noise]
base_step = 0.001
kind = stable_positive
z_min = 0.1
z_max = 10
alpha = 1.5
[seeds]
count = 10
""",
    "spectrally_positive_experiment": """\
[jumplab]
schema_version = 1
[experiment]
name = spectrally_positive_experiment
g = clamp:1
[noise]
base_step = 0.01
[seeds]
count = 10
""",
    "lattice_experiment": """\
[jumplab]
schema_version = 1
[experiment]
name = lattice_experiment
x0s = 0.2, 0.3
refinements = 1, 4
[model]
label = spectrally_positive
g = linear:1
[noise]
base_step = 0.01
[seeds]
count = 5
""",
}


def test_criterion_8_determinism(acceptance_log, tmp_path):
    results = {}
    for name, text in CRIT8_CONFIGS.items():
        cfg = tmp_path / f"{name}.ini"
        cfg.write_text(text)
        main(["run", str(cfg), "--out", str(tmp_path / "a")])
        main(["run", str(cfg), "--out", str(tmp_path / "b")])
        main(["run", str(tmp_path / "a" / f"{name}.json"), "--out", str(tmp_path / "c")])
        files = [f"{name}.json", f"{name}.csv"]
        same = all((tmp_path / "a" / f).read_bytes() == (tmp_path / d / f).read_bytes() for f in files for d in "bc")
        embedded = json.loads((tmp_path / "a" / f"{name}.json").read_text())["config"] is not None
        results[name] = same and embedded
    assert report(acceptance_log, 8, all(results.values()), f"rerun and replay byte-identical: {results}")
