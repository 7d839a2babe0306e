"""Acceptance gate: one test per criterion, default-size suites, pinned
tolerances and runtime budgets.  Each test prints a single PASS line."""

import json
import time

import numpy as np
import pytest

from mixednorm.verify import SUITE_IDS, SuiteConfig, _SUITES, report_json, run_all

CFG = SuiteConfig()  # pinned defaults: seeds, counts, tolerances


@pytest.fixture(scope="module")
def suite_results():
    """Run every default suite once, with per-suite wall time."""
    results = {}
    for idx, sid in enumerate(SUITE_IDS):
        rng = np.random.default_rng([CFG.seed, idx])
        t0 = time.perf_counter()
        res = _SUITES[sid](CFG, rng)
        results[sid] = (res, time.perf_counter() - t0)
    return results


def _check(suite_results, sid, budget, label):
    res, dt = suite_results[sid]
    assert dt < budget, f"{label}: runtime {dt:.1f}s exceeds {budget}s"
    assert res["passed"], f"{label}: {res['counterexamples'][:1]}"
    print(f"PASS {label} ({res['checks']} checks, {dt:.1f}s)")


def test_criterion_01_geometric_exactness(suite_results):
    # projection-product inequality and projection identity, 1000 samples,
    # zero violations, axis-box equality within 1e-12, under 10 s
    _check(suite_results, "01-geometry", 10.0, "criterion 1: geometric exactness")


def test_criterion_02_distribution_bounds(suite_results):
    # distribution product and pointwise section bounds at every
    # rearrangement breakpoint of 500 grids, under 20 s
    _check(suite_results, "02-distribution-bounds", 20.0,
           "criterion 2: distribution and pointwise bounds")


def test_criterion_03_fournier_constant(suite_results):
    # ratio <= n' + 1e-9 over the family; half-cube witness ratio 1 +- 1e-12
    _check(suite_results, "03-fournier-constant", 20.0,
           "criterion 3: sharp constant n'")


def test_criterion_04_k_sandwich(suite_results):
    # (1/n) * formula <= K <= 2 * formula, 200 grids x 20 t; square closed
    # form within 1e-9
    _check(suite_results, "04-k-sandwich", 60.0, "criterion 4: K sandwich")


def test_criterion_05_k_classical(suite_results):
    # K(f,t; L1,Linf) equals the truncated integral of f*, 500 x 20, 1e-9
    _check(suite_results, "05-k-classical", 60.0, "criterion 5: classical K identity")


def test_criterion_06_substitution_forms(suite_results):
    # substitution norms match Lorentz closed forms within 1e-9 relative
    _check(suite_results, "06-substitution", 30.0,
           "criterion 6: substitution closed forms")


def test_criterion_07_interpolation(suite_results):
    # interpolation-norm / mixed-L2-norm ratio spread <= 100 over 50 grids,
    # under 60 s
    res, dt = suite_results["07-interpolation"]
    assert res["constants"]["ratio_spread"] <= 100.0
    _check(suite_results, "07-interpolation", 60.0,
           "criterion 7: interpolation equivalence")


def test_criterion_08_fubini(suite_results):
    # |f|_{R(X,L1)} <= 2 |f|_{R(L1,X)} for X in {L2, L^{3,1}}, 300 grids
    _check(suite_results, "08-fubini", 30.0, "criterion 8: order-exchange bound")


def test_criterion_09_sharpness(suite_results):
    # both rejected embeddings: ladder ratios grow >= 1.5x per dyadic step
    res, dt = suite_results["09-sharpness"]
    for sid in ("q-reversal", "fournier-range"):
        ratios = res["constants"][sid]
        assert len(ratios) >= 5  # 4 steps
        assert all(b >= 1.5 * a for a, b in zip(ratios, ratios[1:]))
    _check(suite_results, "09-sharpness", 30.0, "criterion 9: sharpness ladders")


def test_criterion_10_norm_axioms(suite_results):
    # triangle, monotonicity, rearrangement invariance, integral bound:
    # 500 samples per space, tolerance 1e-12
    _check(suite_results, "10-norm-axioms", 30.0, "criterion 10: norm axioms")


def test_criterion_11_determinism_and_total_runtime(suite_results):
    total = sum(dt for _, dt in suite_results.values())
    assert total < 120.0, f"default suite took {total:.1f}s"
    cfg = SuiteConfig(seed=99, geometry_samples=40, distribution_grids=20,
                      k_grids=6, k_stepfns=20, interp_grids=3,
                      fubini_grids=20, axiom_samples=20)
    a = report_json(run_all(cfg))
    b = report_json(run_all(cfg))
    assert a == b, "report bytes differ between identical runs"
    assert json.loads(a)["passed"]
    print(f"PASS criterion 11: determinism, full suite {total:.1f}s < 120s")
