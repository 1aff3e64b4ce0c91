import functools
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from subreg.catalog import Abs, BasePair, NonSmoothError, PowerEven, Quadratic
from subreg.instances import RAMP, SQUARE, catalog_instances, instance, sum_rule_pairs
from subreg.regularity import (
    SampleGrid,
    check_convex_combination_growth,
    check_growth_subregularity,
    check_hessian_equivalence,
    check_monotone_chain,
    check_strong_growth_subregularity,
    check_strong_monotone_relatedness,
    check_sum_rule,
    classify_sweep,
    contingent_derivative_modulus,
    estimate_growth_constant,
    estimate_strong_growth_constant,
    estimate_subregularity_modulus,
    hessian_modulus,
    isolated_in_solution_set,
    jacobi_eigenvalues,
    refute_growth,
    sampled_contingent_modulus,
)

INSTANCES = catalog_instances()
IDS = [i.name for i in INSTANCES]


def bp_of(name):
    return instance(name).bp


# sample grid


def test_grid_samples_stay_in_ball_and_are_symmetric():
    g = SampleGrid([0.5, -1.0], 0.75, per_axis=11, n_random=50, seed=3)
    pts = g.samples()
    assert np.all(np.linalg.norm(pts - g.center, axis=1) <= 0.75 * (1 + 1e-12))
    mesh = g.unit[: len(g.unit) - 50]
    assert {tuple(np.round(p, 12)) for p in mesh} == {tuple(np.round(-p, 12) + 0.0) for p in mesh}


def test_grid_is_deterministic_per_seed():
    a = SampleGrid([0.0], 1.0, seed=7).samples()
    b = SampleGrid([0.0], 1.0, seed=7).samples()
    c = SampleGrid([0.0], 1.0, seed=8).samples()
    assert np.array_equal(a, b)
    assert not np.array_equal(a, c)


def test_grid_rejects_bad_radius():
    with pytest.raises(ValueError):
        SampleGrid([0.0], 0.0)


# subregularity examples


def test_kappa_square():
    r = estimate_subregularity_modulus(bp_of("square"))
    assert r.value == pytest.approx(0.5, abs=1e-9)
    assert r.classification == "holds"
    assert all(e.ratio == pytest.approx(0.5, abs=1e-12) for e in r.ledger)


def test_kappa_quartic_fails_with_fourfold_growth():
    r = estimate_subregularity_modulus(bp_of("quartic"))
    assert r.classification == "fails"
    vals = [v for _, v in r.radii_sweep]
    for a, b in zip(vals, vals[1:]):
        assert b / a == pytest.approx(4.0, rel=0.05)
    # ledger reproduces the analytic ratio 1/(4 x^2)
    for e in r.ledger:
        x = e.x[0]
        assert e.ratio == pytest.approx(1 / (4 * x * x), rel=1e-9)


@pytest.mark.parametrize("name", ["ramp_left", "ramp_kink", "ramp_right"])
def test_kappa_ramp_at_graph_points(name):
    r = estimate_subregularity_modulus(bp_of(name))
    assert r.classification == "holds"
    assert r.value == pytest.approx(1.0, abs=1e-9)


def test_report_value_matches_witness_and_ledger():
    r = estimate_growth_constant(bp_of("abs"))
    assert r.value == min(e.ratio for e in r.ledger)
    e = [e for e in r.ledger if np.allclose(e.x, r.witness)][0]
    assert e.ratio == pytest.approx(r.value, abs=1e-12)
    radii = [s[0] for s in r.radii_sweep]
    assert all(a > b for a, b in zip(radii, radii[1:]))


def test_ledger_csv_header():
    r = estimate_subregularity_modulus(bp_of("square"))
    assert r.ledger_csv().splitlines()[0] == "x,numerator,denominator,ratio"


# growth examples


def test_growth_square():
    r = estimate_growth_constant(bp_of("square"))
    assert r.value == pytest.approx(1.0, abs=1e-9)


def test_growth_with_inverse_kappa_refuted_for_square():
    w = refute_growth(bp_of("square"), 2.0)
    assert w is not None
    x, lhs, rhs = w
    assert x[0] != 0 and lhs < rhs


def test_growth_quartic_fails_quadratically():
    r = estimate_growth_constant(bp_of("quartic"))
    assert r.classification == "fails"
    for (ra, va), (rb, vb) in zip(r.radii_sweep, r.radii_sweep[1:]):
        assert vb / va == pytest.approx(0.25, rel=0.05)
        assert vb == pytest.approx(0.0, abs=rb**2 * 1.0001)


def test_strong_growth_examples():
    assert estimate_strong_growth_constant(bp_of("diag24")).value == pytest.approx(1.0, abs=1e-9)
    r = estimate_strong_growth_constant(bp_of("abs"))
    assert r.value == pytest.approx(1.0, abs=1e-9)
    vals = [v for _, v in r.radii_sweep]
    assert vals == sorted(vals)
    assert vals[-1] == pytest.approx(16.0, rel=1e-9)
    assert estimate_strong_growth_constant(bp_of("diag20")).classification == "fails"


# bound checks


@pytest.mark.parametrize("inst", INSTANCES, ids=IDS)
def test_growth_subregularity_bounds_on_catalog(inst):
    if inst.subregular is None:
        pytest.skip("solution set not kept exact")
    chk = check_growth_subregularity(inst.bp)
    assert chk.ok
    assert chk.subregularity.holds == inst.subregular
    if inst.kappa is not None:
        assert chk.kappa == pytest.approx(inst.kappa, abs=1e-9)
    if inst.c is not None:
        assert chk.c == pytest.approx(inst.c, abs=1e-6 if inst.dim == 1 else 1e-3)


@pytest.mark.parametrize("inst", INSTANCES, ids=IDS)
def test_strong_bounds_and_isolation_on_catalog(inst):
    if inst.subregular is None:
        pytest.skip("solution set not kept exact")
    chk = check_strong_growth_subregularity(inst.bp)
    assert chk.ok
    assert chk.growth.holds == inst.strongly_subregular
    if inst.c_strong is not None:
        assert chk.c == pytest.approx(inst.c_strong, abs=1e-6 if inst.dim == 1 else 1e-3)


def test_isolation_examples():
    assert isolated_in_solution_set(bp_of("abs"))
    assert not isolated_in_solution_set(bp_of("diag20"))
    assert not isolated_in_solution_set(bp_of("ramp_kink"))
    chk = check_strong_growth_subregularity(bp_of("quartic"))
    assert chk.isolated and not chk.growth.holds and not chk.subregularity.holds


def test_gap_is_reported():
    chk = check_growth_subregularity(bp_of("square"))
    assert chk.gap == pytest.approx(0.5)
    assert chk.to_json()["gap"] == pytest.approx(0.5)


# strong monotone relatedness


def test_monotone_examples():
    assert check_strong_monotone_relatedness(bp_of("square")).value == pytest.approx(2.0)
    assert check_strong_monotone_relatedness(bp_of("abs")).value == pytest.approx(1.0)
    assert check_strong_monotone_relatedness(bp_of("diag20")).value == pytest.approx(0.0, abs=1e-12)


@pytest.mark.parametrize("inst", INSTANCES, ids=IDS)
def test_monotone_chain_on_catalog(inst):
    chk = check_monotone_chain(inst.bp)
    assert chk.equivalence_ok
    assert chk.monotone.value >= chk.strong_growth.value - 1e-9


# sum rule


@pytest.mark.parametrize("pair", sum_rule_pairs(), ids=[p[0] for p in sum_rule_pairs()])
def test_sum_rule(pair):
    _, bpf, bpg, exact = pair
    chk = check_sum_rule(bpf, bpg)
    assert chk.ok
    # sampled Rayleigh quotients in 2-D miss the eigenvector by a grid step
    tol = 1e-6 if bpf.f.dim == 1 else 1e-3
    assert chk.c_sum == pytest.approx(exact, abs=tol)


def test_sum_rule_requires_same_base_point():
    with pytest.raises(ValueError):
        check_sum_rule(BasePair(SQUARE, [0.0], [0.0]), BasePair(SQUARE, [1.0], [2.0]))


# second order


def test_hessian_examples():
    assert hessian_modulus(Quadratic(np.diag([2.0, 4.0]), [0.0, 0.0]), [3.0, -1.0]) == pytest.approx(2.0)
    assert hessian_modulus(PowerEven(4), [0.0]) == 0.0
    assert hessian_modulus(Quadratic([[2.0, 1.0], [1.0, 2.0]], [0.0, 0.0]), [0.0, 0.0]) == pytest.approx(1.0)


def test_hessian_nonsmooth_raises():
    with pytest.raises(NonSmoothError):
        hessian_modulus(Abs(), [0.0])


@pytest.mark.parametrize("inst", [i for i in INSTANCES if i.smooth], ids=[i.name for i in INSTANCES if i.smooth])
def test_hessian_equivalence_on_smooth_instances(inst):
    assert check_hessian_equivalence(inst.bp).equivalence_ok


sym = st.lists(st.floats(-5, 5, allow_nan=False), min_size=10, max_size=10)


@given(sym, st.integers(1, 4))
def test_jacobi_matches_numpy(entries, n):
    M = np.zeros((n, n))
    iu = np.triu_indices(n)
    M[iu] = entries[: len(iu[0])]
    M = M + M.T - np.diag(np.diag(M))
    np.testing.assert_allclose(jacobi_eigenvalues(M), np.linalg.eigvalsh(M), atol=1e-9)


def test_contingent_examples():
    assert contingent_derivative_modulus(bp_of("square")).value == pytest.approx(2.0)
    r = contingent_derivative_modulus(bp_of("abs"))
    assert r.value == math.inf and r.classification == "holds"
    assert sampled_contingent_modulus(bp_of("abs")) == math.inf
    r = contingent_derivative_modulus(bp_of("ramp_kink"))
    assert r.value == 0.0 and r.classification == "fails"
    assert sampled_contingent_modulus(bp_of("ramp_kink")) == pytest.approx(0.0, abs=1e-9)


# convex-combination growth


def test_combination_premise_for_square():
    assert check_convex_combination_growth(bp_of("square"), 1.0).premise_holds
    chk = check_convex_combination_growth(bp_of("square"), 1.5)
    assert not chk.premise_holds and chk.premise_witness is not None


def test_combination_premise_fails_for_ramp():
    chk = check_convex_combination_growth(BasePair(RAMP, [0.0], [0.0]), 0.1)
    assert not chk.premise_holds


@pytest.mark.parametrize("inst", INSTANCES, ids=IDS)
@pytest.mark.parametrize("c", [0.25, 1.0])
def test_combination_implication_on_catalog(inst, c):
    assert check_convex_combination_growth(inst.bp, c).implication_ok


# properties


@functools.cache
def _reports(name):
    bp = bp_of(name)
    return bp, estimate_subregularity_modulus(bp), estimate_strong_growth_constant(bp)


@pytest.mark.parametrize("name", ["square", "abs", "ramp_kink", "quartic", "diag24", "coupled"])
@given(st.floats(0.05, 1.0))
def test_monotone_shrinkage(name, r):
    bp, k, c = _reports(name)
    assert k.restricted(r, bp.xbar) <= k.restricted(1.0, bp.xbar)
    assert c.restricted(r, bp.xbar) >= c.restricted(1.0, bp.xbar)
    assert k.restricted(r / 2, bp.xbar) <= k.restricted(r, bp.xbar)


def test_quadratic_growth_tends_to_half_min_eigenvalue():
    bp = bp_of("coupled")
    coarse = estimate_strong_growth_constant(bp, SampleGrid.around(bp, per_axis=5, n_random=0)).value
    fine = estimate_strong_growth_constant(bp, SampleGrid.around(bp, per_axis=81, n_random=0)).value
    target = hessian_modulus(bp.f, bp.xbar) / 2
    assert abs(fine - target) <= abs(coarse - target)
    assert fine == pytest.approx(target, abs=1e-3)


@given(st.lists(st.floats(0.01, 100), min_size=5, max_size=5))
def test_classify_sweep_detects_doubling(vals):
    vals = sorted(vals)
    geometric = [vals[0] * 2.0**k for k in range(5)]
    assert classify_sweep(geometric, sup=True) == "fails"
    assert classify_sweep([vals[0]] * 5, sup=True) == "holds"
    assert classify_sweep([vals[0] * 0.5**k for k in range(5)], sup=False) == "fails"
