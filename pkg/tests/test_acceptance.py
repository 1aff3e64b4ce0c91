"""The ten acceptance criteria, each at its stated tolerance.

Every test carries ``@pytest.mark.criterion(n, title)``; the terminal
summary prints one PASS/FAIL line per criterion.
"""

import subprocess
import sys
import time

import numpy as np
import pytest

import oracles
from subreg.catalog import Abs, PowerEven
from subreg.cli import run_suite
from subreg.duality import (
    SolutionMapSpec,
    check_biconjugation,
    check_conjugate_growth,
    check_inverse_subdifferential,
    check_solution_map,
    conjugate,
)
from subreg.instances import HALF_SQUARE, RAMP, SQUARE, catalog_instances, conjugate_instances, instance, sum_rule_pairs
from subreg.proximal import Constant, Harmonic, Linear, ProxSchedule, classify_rate, run_exact_ppa, run_generalized_ppa
from subreg.regularity import (
    SampleGrid,
    check_convex_combination_growth,
    check_growth_subregularity,
    check_hessian_equivalence,
    check_monotone_chain,
    check_strong_growth_subregularity,
    check_sum_rule,
    contingent_derivative_modulus,
    estimate_growth_constant,
    estimate_strong_growth_constant,
    estimate_strong_subregularity_modulus,
    estimate_subregularity_modulus,
    hessian_modulus,
    refute_growth,
)
from subreg.sets import UnsupportedError

C1 = (1, "x^2: kappa, c, bounds, c = 2 refuted")
C2 = (2, "x^4: not subregular, no growth, sublinear PPA")
C3 = (3, "max(0,x): subregular on the graph, not strongly at the kink")
C4 = (4, "quadratics: Hessian modulus and strong growth")
C5 = (5, "strong growth <=> strong monotone relatedness")
C6 = (6, "sum rule for growth constants")
C7 = (7, "convex-combination premise and its conclusion")
C8 = (8, "proximal point rates")
C9 = (9, "duality: biconjugation, inverse law, calmness")
C10 = (10, "estimators vs brute-force oracle, suite determinism")


def bp(name):
    return instance(name).bp


# 1 -------------------------------------------------------------------------


@pytest.mark.criterion(*C1)
def test_c1_square_constants_and_bounds():
    b = bp("square")
    g = check_growth_subregularity(b)
    assert g.kappa == pytest.approx(0.5, abs=1e-6)
    s = check_strong_growth_subregularity(b)
    assert s.c == pytest.approx(1.0, abs=1e-6)
    assert g.forward_ok and g.backward_ok and s.forward_ok and s.backward_ok
    assert s.c >= 1 / (4 * g.kappa) and g.kappa <= 1 / s.c


@pytest.mark.criterion(*C1)
def test_c1_inverse_kappa_refuted_with_witness():
    w = refute_growth(bp("square"), 2.0)
    assert w is not None
    x, excess, bound = w
    # x^2 >= 2 x^2 fails at every x != 0
    assert x[0] != 0 and excess == pytest.approx(x[0] ** 2) and excess < bound


# 2 -------------------------------------------------------------------------


@pytest.mark.criterion(*C2)
def test_c2_quartic_not_subregular_no_growth():
    b = bp("quartic")
    k = estimate_subregularity_modulus(b)
    c = estimate_growth_constant(b)
    assert k.classification == "fails" and c.classification == "fails"
    kv = [v for _, v in k.radii_sweep]
    cv = [v for _, v in c.radii_sweep]
    assert min(b_ / a_ for a_, b_ in zip(kv, kv[1:])) >= 3.9
    for a_, b_ in zip(cv, cv[1:]):
        assert b_ / a_ == pytest.approx(0.25, abs=0.01)


@pytest.mark.criterion(*C2)
def test_c2_quartic_ppa_sublinear():
    run = run_exact_ppa(PowerEven(4), [1.0], ProxSchedule(Constant(1.0)))
    assert classify_rate(run.iterates, [0.0]).classification == "sublinear"


# 3 -------------------------------------------------------------------------


@pytest.mark.criterion(*C3)
@pytest.mark.parametrize("name", ["ramp_left", "ramp_kink", "ramp_right"])
def test_c3_ramp_subregular_at_graph_points(name):
    # radius 2 at (-1, 0) and (1, 1) so the ball leaves the solution set
    b = bp(name)
    assert (b.xbar[0], b.ystar[0]) in {(-1.0, 0.0), (0.0, 0.0), (1.0, 1.0)}
    r = estimate_subregularity_modulus(b)
    assert r.classification == "holds" and r.ledger
    assert r.value == pytest.approx(1.0, abs=1e-9)


@pytest.mark.criterion(*C3)
def test_c3_ramp_kink_not_strongly_subregular():
    b = bp("ramp_kink")
    s = check_strong_growth_subregularity(b)
    assert s.isolated is False
    assert not s.subregularity.holds and not s.growth.holds
    cd = contingent_derivative_modulus(b)
    assert cd.value == 0.0


# 4 -------------------------------------------------------------------------


@pytest.mark.criterion(*C4)
def test_c4_diag24():
    b = bp("diag24")
    assert hessian_modulus(b.f, b.xbar) == pytest.approx(2.0, abs=1e-12)
    assert estimate_subregularity_modulus(b).value == pytest.approx(0.5, abs=1e-3)
    coarse = estimate_strong_growth_constant(b, SampleGrid.around(b, per_axis=7, n_random=0)).value
    fine = estimate_strong_growth_constant(b).value
    assert abs(fine - 1.0) <= abs(coarse - 1.0)
    assert fine == pytest.approx(1.0, abs=1e-3)
    assert check_hessian_equivalence(b).equivalence_ok


@pytest.mark.criterion(*C4)
def test_c4_diag20():
    b = bp("diag20")
    s = check_strong_growth_subregularity(b)
    assert not s.growth.holds and s.isolated is False
    h = check_hessian_equivalence(b)
    assert h.modulus == 0.0 and h.equivalence_ok


# 5 -------------------------------------------------------------------------


@pytest.mark.criterion(*C5)
@pytest.mark.parametrize("inst", catalog_instances(), ids=lambda i: i.name)
def test_c5_monotone_chain(inst):
    m = check_monotone_chain(inst.bp)
    # "c_mono > 0" is read off the radius sweep: a positive constant that
    # does not collapse to zero as the ball shrinks
    positive = m.monotone.holds and m.monotone.value > 0
    assert m.strong_growth.holds == positive
    assert m.monotone.value >= m.strong_growth.value - 1e-9


# 6 -------------------------------------------------------------------------


@pytest.mark.criterion(*C6)
@pytest.mark.parametrize("pair", sum_rule_pairs(), ids=lambda p: p[0])
def test_c6_sum_rule(pair):
    name, f, g, exact = pair
    chk = check_sum_rule(f, g)
    assert chk.c_sum >= chk.c_left + chk.c_right - 1e-9
    if name == "square+double_square":
        assert (chk.c_left, chk.c_right, chk.c_sum) == pytest.approx((1.0, 2.0, 3.0), abs=1e-12)


# 7 -------------------------------------------------------------------------


@pytest.mark.criterion(*C7)
def test_c7_square_premise():
    b = bp("square")
    assert check_convex_combination_growth(b, 1.0).premise_holds
    assert not check_convex_combination_growth(b, 1.5).premise_holds


@pytest.mark.criterion(*C7)
def test_c7_implication_never_violated():
    rows = [r for r in run_suite(0, "combination")]
    assert rows and all(r[4] for r in rows)
    for inst in catalog_instances():
        for c in (0.1, 0.5, 1.0, 2.0):
            assert check_convex_combination_growth(inst.bp, c).implication_ok, (inst.name, c)


# 8 -------------------------------------------------------------------------


@pytest.mark.criterion(*C8)
def test_c8_square_linear_half():
    run = run_exact_ppa(SQUARE, [1.0], ProxSchedule(Constant(2.0)))
    rep = classify_rate(run.iterates, [0.0])
    assert rep.classification == "linear" and abs(rep.q - 0.5) < 1e-6


@pytest.mark.criterion(*C8)
def test_c8_harmonic_superlinear():
    run = run_exact_ppa(SQUARE, [1.0], ProxSchedule(Harmonic(2.0)))
    assert classify_rate(run.iterates, [0.0]).classification == "superlinear"


@pytest.mark.criterion(*C8)
def test_c8_abs_ten_steps():
    run = run_exact_ppa(Abs(), [10.0], ProxSchedule(Constant(1.0)))
    xs = [float(x[0]) for x in run.iterates]
    assert xs.index(0.0) == 10 and all(x > 0 for x in xs[:10])


@pytest.mark.criterion(*C8)
@pytest.mark.parametrize("name", ["square", "abs", "ramp_kink", "quartic", "tilted_square", "square_plus_abs"])
def test_c8_generalized_matches_exact(name):
    f = bp(name).f
    exact = run_exact_ppa(f, [0.8], ProxSchedule(Constant(1.5), max_iterations=40))
    gen = run_generalized_ppa(f, 0.8, [Linear(1.5)] * 40)
    assert len(gen.iterates) == len(exact.iterates)
    assert max(abs(a[0] - b[0]) for a, b in zip(exact.iterates, gen.iterates)) <= 1e-10


# 9 -------------------------------------------------------------------------

CONJUGABLE_PROBES = {
    "half_square": HALF_SQUARE,
    "square": SQUARE,
    "abs": Abs(),
    "ramp": RAMP,
    "indicator": instance("indicator").bp.f,
    "diag24": instance("diag24").bp.f,
    "sep_abs_square": instance("sep_abs_square").bp.f,
}


@pytest.mark.criterion(*C9)
@pytest.mark.parametrize("name", sorted(CONJUGABLE_PROBES))
def test_c9_biconjugation_and_inverse_law(name):
    f = CONJUGABLE_PROBES[name]
    axis = np.linspace(-2.5, 2.5, 21)
    probes = list(np.stack(np.meshgrid(*([axis] * f.dim)), -1).reshape(-1, f.dim))
    ok, worst = check_biconjugation(f, probes)
    assert ok and worst <= 1e-6
    assert check_inverse_subdifferential(conjugate(f), probes, tol=1e-8).ok


@pytest.mark.criterion(*C9)
@pytest.mark.parametrize("name", ["half_square", "abs", "indicator"])
def test_c9_conjugate_growth(name):
    _, b, V = {c[0]: c for c in conjugate_instances()}[name]
    chk = check_conjugate_growth(b, V_radius=V)
    assert chk.calm_ok and chk.isolated_ok and chk.bound_ok


@pytest.mark.criterion(*C9)
@pytest.mark.parametrize(
    "phi, calm",
    [(HALF_SQUARE, True), (Abs(), True), (PowerEven(4), False)],
    ids=["half_square", "abs", "quartic"],
)
def test_c9_solution_maps(phi, calm):
    rec = check_solution_map(SolutionMapSpec(phi, 1.0), 0.0, 0.0)
    assert rec.calm == calm
    assert rec.calm_ok and rec.isolated_ok


# 10 ------------------------------------------------------------------------

ONE_D = [i for i in catalog_instances() if i.dim == 1]


def _kappa(b):
    try:
        return estimate_subregularity_modulus(b)
    except UnsupportedError:
        # the solution set is {xbar} here, so both moduli coincide
        return estimate_strong_subregularity_modulus(b)


def _growth(b):
    try:
        return estimate_growth_constant(b)
    except UnsupportedError:
        return estimate_strong_growth_constant(b)


@pytest.mark.criterion(*C10)
@pytest.mark.parametrize("inst", ONE_D, ids=lambda i: i.name)
def test_c10_estimators_match_oracle(inst):
    oracle = oracles.CLOSED_FORMS[inst.name]
    b = inst.bp
    k, c = _kappa(b), _growth(b)
    if k.holds:
        assert k.value == pytest.approx(oracles.brute_kappa(oracle, b.radius), abs=1e-6)
    if c.holds:
        assert c.value == pytest.approx(oracles.brute_c(oracle, b.radius), abs=1e-6)
    if not (k.holds and c.holds):
        # a sup/inf that degenerates as the grid refines has no common value;
        # compare the verdicts and the ledger ratios sample by sample instead
        xs = np.array([e.x[0] for e in k.ledger])
        np.testing.assert_allclose([e.ratio for e in k.ledger], oracles.kappa_ratios(oracle, xs), rtol=1e-9)
        xs = np.array([e.x[0] for e in c.ledger])
        np.testing.assert_allclose([e.ratio for e in c.ledger], oracles.growth_ratios(oracle, xs), rtol=1e-9)
        assert not k.holds and not c.holds
        assert oracles.brute_kappa(oracle, 1e-2) >= 3.9**2 * oracles.brute_kappa(oracle, 4e-2)
        assert oracles.brute_c(oracle, 1e-2) <= 0.26**2 * oracles.brute_c(oracle, 4e-2)


@pytest.mark.criterion(*C10)
@pytest.mark.parametrize("inst", ONE_D, ids=lambda i: i.name)
def test_c10_strong_growth_matches_oracle(inst):
    oracle = oracles.CLOSED_FORMS[inst.name]
    c = estimate_strong_growth_constant(inst.bp)
    expected = oracles.brute_c_strong(oracle, inst.bp.radius)
    if expected > 0:
        assert c.value == pytest.approx(expected, abs=1e-6)
    else:
        assert c.value <= 1e-6 or not c.holds


def _run_suite_cli(out):
    t0 = time.perf_counter()
    proc = subprocess.run(
        [sys.executable, "-m", "subreg.cli", "suite", "--out", str(out)], capture_output=True, text=True
    )
    return proc, time.perf_counter() - t0


@pytest.mark.criterion(*C10)
def test_c10_suite_deterministic_and_fast(tmp_path):
    runs = [_run_suite_cli(tmp_path / d) for d in ("a", "b")]
    for proc, elapsed in runs:
        print(f"suite wall time {elapsed:.2f} s")
        assert proc.returncode == 0, proc.stderr
        assert elapsed < 10.0
    assert (tmp_path / "a" / "summary.csv").read_bytes() == (tmp_path / "b" / "summary.csv").read_bytes()
