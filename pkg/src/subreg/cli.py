"""Command-line harness: ``subreg {analyze, prox, duality, solution-map, suite}``.

Exit codes: 0 when every assertion holds, 1 when one fails (its name is
printed on standard error), 2 on a configuration error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
import tempfile
from pathlib import Path

import numpy as np

from .catalog import (
    Abs,
    BasePair,
    ConvexFunction,
    InvalidBasePair,
    NonSmoothError,
    PowerEven,
    Quadratic,
    Tilted,
    function_from_json,
    function_to_json,
    solution_set,
    subdifferential,
    value,
)
from .duality import (
    SolutionMapSpec,
    check_biconjugation,
    check_conjugate_growth,
    check_inverse_subdifferential,
    check_solution_map,
    conjugate,
    estimate_calmness_modulus,
    fenchel_young_gap,
    solution_map_eval,
)
from .instances import catalog_instances, conjugate_instances, instance, sum_rule_pairs
from .proximal import (
    Constant,
    Explicit,
    Harmonic,
    Linear,
    ProxSchedule,
    Saturated,
    check_step,
    classify_rate,
    errors_csv,
    model_rate_bound,
    report_json,
    run_exact_ppa,
    run_generalized_ppa,
)
from .regularity import (
    SampleGrid,
    check_convex_combination_growth,
    check_growth_subregularity,
    check_hessian_equivalence,
    check_monotone_chain,
    check_strong_growth_subregularity,
    check_sum_rule,
    contingent_derivative_modulus,
    refute_growth,
)
from .sets import (
    Empty,
    Singleton,
    UnsupportedError,
    json_number,
    project,
    set_distance,
    set_to_json,
)

SCHEMA = "1"
SUITE_GRID_2D = {"per_axis": 21, "n_random": 100}
LAMBDA_SWEEP = (0.5, 1.0, 2.0, 4.0, 8.0)


class ConfigError(ValueError):
    """Bad command-line configuration (exit code 2)."""


# --------------------------------------------------------------------------
# output helpers


def jsonable(obj):
    """Plain JSON types; non-finite floats become "inf", "-inf", "nan"."""
    if isinstance(obj, dict):
        return {str(k): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [jsonable(v) for v in obj.tolist()]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        return json_number(float(obj))
    return obj


def write_atomic(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.")
    with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)
    os.replace(tmp, path)


def write_json(path: Path, obj) -> None:
    write_atomic(path, json.dumps(jsonable(obj), indent=2, allow_nan=False) + "\n")


def fmt(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return f"{v:.10g}"
    return str(v)


class Assertions:
    """Named boolean assertions; failures are reported on stderr."""

    def __init__(self):
        self.items: dict[str, bool] = {}

    def __setitem__(self, name: str, ok) -> None:
        self.items[name] = bool(ok)

    def failed(self) -> list[str]:
        return [k for k, v in self.items.items() if not v]

    def exit_code(self) -> int:
        bad = self.failed()
        for name in bad:
            print(f"assertion failed: {name}", file=sys.stderr)
        return 1 if bad else 0


# --------------------------------------------------------------------------
# argument parsing


def parse_vector(text: str | None, name: str):
    if text is None:
        return None
    try:
        return np.array([float(t) for t in text.split(",")])
    except ValueError as exc:
        raise ConfigError(f"--{name}: expected comma-separated reals, got {text!r}") from exc


def load_function(spec: str | None) -> ConvexFunction:
    if spec is None:
        raise ConfigError("--function is required")
    text = spec
    if not spec.lstrip().startswith("{"):
        p = Path(spec)
        if not p.is_file():
            raise ConfigError(f"function descriptor {spec!r} not found")
        text = p.read_text(encoding="utf-8")
    try:
        return function_from_json(json.loads(text))
    except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
        raise ConfigError(f"bad function descriptor: {exc}") from exc


def _vec_for(f: ConvexFunction, text: str | None, name: str, default=0.0) -> np.ndarray:
    v = parse_vector(text, name)
    if v is None:
        return np.full(f.dim, default)
    if v.size != f.dim:
        raise ConfigError(f"--{name} has {v.size} entries, function lives on R^{f.dim}")
    return v


def make_grid(args, center, radius: float) -> SampleGrid:
    if not radius > 0:
        raise ConfigError("--radius must be positive")
    kw = {"seed": args.seed}
    if args.grid is not None:
        kw["per_axis"] = args.grid
    if args.samples is not None:
        kw["n_random"] = args.samples
    try:
        return SampleGrid(center, radius, **kw)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc


def base_pair(args, f: ConvexFunction) -> BasePair:
    xbar = _vec_for(f, args.xbar, "xbar")
    ystar = _vec_for(f, args.ystar, "ystar")
    if not args.radius > 0:
        raise ConfigError("--radius must be positive")
    return BasePair(f, xbar, ystar, args.radius)


def parse_schedule(text: str | None):
    """A ProxSchedule, or a list of generalized steps."""
    if text is None:
        return ProxSchedule(Constant(1.0))
    try:
        obj = json.loads(text)
        kind = obj["type"]
        extra = {k: obj[k] for k in ("max_iterations", "stop_tolerance") if k in obj}
        if kind == "Constant":
            return ProxSchedule(Constant(float(obj["lambda"])), **extra)
        if kind == "Harmonic":
            return ProxSchedule(Harmonic(float(obj["lambda0"])), **extra)
        if kind == "Explicit":
            return ProxSchedule(Explicit(tuple(obj["values"])), **extra)
        if kind == "Generalized":
            steps = []
            for s in obj["steps"]:
                if s["type"] == "Linear":
                    steps.append(Linear(float(s["lambda"])))
                elif s["type"] == "Saturated":
                    steps.append(Saturated(float(s["lambda"]), float(s["cap"])))
                else:
                    raise ValueError(f"unknown step {s['type']!r}")
            return steps * int(obj.get("repeat", 1))
        raise ValueError(f"unknown schedule type {kind!r}")
    except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
        raise ConfigError(f"bad schedule: {exc}") from exc


# --------------------------------------------------------------------------
# analyze


def analyze(bp: BasePair, grid: SampleGrid) -> tuple[dict, dict, Assertions]:
    """All regularity checks at one base pair: (report, ledgers, assertions)."""
    report: dict = {}
    ledgers: dict[str, str] = {}
    checks = Assertions()
    try:
        g = check_growth_subregularity(bp, grid)
        report["subregularity_growth"] = g.to_json()
        report["verdict"] = {
            "subregularity": "subregular" if g.subregularity.holds else "not subregular",
            "growth": "growth" if g.growth.holds else "no growth",
        }
        ledgers["subregularity"] = g.subregularity.ledger_csv()
        ledgers["growth"] = g.growth.ledger_csv()
        checks["growth_subregularity.equivalence"] = g.equivalence_ok
        checks["growth_subregularity.forward_bound"] = g.forward_ok
        checks["growth_subregularity.backward_bound"] = g.backward_ok
    except UnsupportedError as exc:
        report["subregularity_growth"] = {"unsupported": str(exc)}
    try:
        s = check_strong_growth_subregularity(bp, grid)
        report["strong_subregularity_growth"] = s.to_json()
        report.setdefault("verdict", {})["strong_subregularity"] = (
            "strongly subregular" if s.subregularity.holds else "not strongly subregular"
        )
        ledgers["strong_subregularity"] = s.subregularity.ledger_csv()
        ledgers["strong_growth"] = s.growth.ledger_csv()
        checks["strong_growth_subregularity.equivalence"] = s.equivalence_ok
        checks["strong_growth_subregularity.forward_bound"] = s.forward_ok
        checks["strong_growth_subregularity.backward_bound"] = s.backward_ok
    except UnsupportedError as exc:
        report["strong_subregularity_growth"] = {"unsupported": str(exc)}
    m = check_monotone_chain(bp, grid)
    report["monotone_chain"] = m.to_json()
    ledgers["monotone"] = m.monotone.ledger_csv()
    checks["monotone_chain.equivalence"] = m.equivalence_ok
    checks["monotone_chain.transfer"] = m.transfer_ok
    try:
        report["contingent_modulus"] = contingent_derivative_modulus(bp).to_json()
    except UnsupportedError as exc:
        report["contingent_modulus"] = {"unsupported": str(exc)}
    try:
        h = check_hessian_equivalence(bp, grid)
        report["hessian"] = h.to_json()
        checks["hessian.equivalence"] = h.equivalence_ok
    except (NonSmoothError, UnsupportedError) as exc:
        report["hessian"] = {"unsupported": str(exc)}
    c = m.strong_growth.value
    if math.isfinite(c) and c > 0:
        comb = check_convex_combination_growth(bp, c, grid)
        report["convex_combination"] = comb.to_json()
        checks["convex_combination.implication"] = comb.implication_ok
    return report, ledgers, checks


def _header(args, command: str) -> dict:
    return {"schema": SCHEMA, "command": command, "seed": args.seed}


def cmd_analyze(args) -> int:
    f = load_function(args.function)
    bp = base_pair(args, f)
    grid = make_grid(args, bp.xbar, bp.radius)
    report, ledgers, checks = analyze(bp, grid)
    out = Path(args.out)
    doc = _header(args, "analyze") | {
        "function": function_to_json(f),
        "xbar": bp.xbar,
        "ystar": bp.ystar,
        "radius": bp.radius,
        "grid": {"per_axis": grid.per_axis, "n_random": grid.n_random},
        **report,
        "assertions": checks.items,
    }
    write_json(out / "analysis.json", doc)
    for name, text in ledgers.items():
        write_atomic(out / f"{name}_ledger.csv", text)
    return checks.exit_code()


# --------------------------------------------------------------------------
# prox


def _xstar(f: ConvexFunction, last: np.ndarray, override: np.ndarray | None):
    if override is not None:
        return override, "given"
    try:
        S = solution_set(f, np.zeros(f.dim))
    except UnsupportedError as exc:
        raise ConfigError(f"no exact solution set ({exc}); pass --xstar") from exc
    if isinstance(S, Empty):
        raise ConfigError("f has no minimizer")
    if isinstance(S, Singleton):
        return S.v, "solution set"
    return project(S, last), "projection of the final iterate onto the solution set"


def cmd_prox(args) -> int:
    f = load_function(args.function)
    x0 = _vec_for(f, args.x0, "x0", default=1.0)
    sched = parse_schedule(args.schedule)
    if isinstance(sched, list):
        if f.dim != 1:
            raise ConfigError("generalized steps need a 1-D function")
        run = run_generalized_ppa(f, float(x0[0]), sched)
        method = "generalized"
    else:
        run = run_exact_ppa(f, x0, sched)
        method = "exact"
    override = None if args.xstar is None else _vec_for(f, args.xstar, "xstar")
    xstar, source = _xstar(f, run.iterates[-1], override)
    rep = classify_rate(run.iterates, xstar)
    checks = Assertions()
    checks["residuals"] = max(run.residuals, default=0.0) <= 1e-10
    out = Path(args.out)
    doc = _header(args, "prox") | {
        "function": function_to_json(f),
        "method": method,
        "x0": x0,
        "xstar_source": source,
        "iterations": len(run.iterates) - 1,
        "rate": report_json(rep, xstar),
        "assertions": checks.items,
    }
    write_json(out / "rate.json", doc)
    write_atomic(out / "run.csv", run.csv(xstar))
    write_atomic(out / "errors.csv", errors_csv(rep))
    return checks.exit_code()


# --------------------------------------------------------------------------
# duality


def probe_points(f: ConvexFunction, lo: float = -3.0, hi: float = 3.0) -> list[np.ndarray]:
    if f.dim == 1:
        return [np.array([t]) for t in np.linspace(lo, hi, 61)]
    axis = np.linspace(lo, hi, 7)
    mesh = np.stack(np.meshgrid(*([axis] * f.dim), indexing="ij"), -1).reshape(-1, f.dim)
    return list(mesh)


def fenchel_young_ok(pair, xs, ys) -> bool:
    """Gap >= -1e-9 everywhere, and gap <= 1e-8 exactly when y is in df(x)."""
    for x in xs:
        D = subdifferential(pair.primal, x)
        for y in ys:
            gap = fenchel_young_gap(pair, x, y)
            if gap < -1e-9:
                return False
            if math.isfinite(gap) and (gap <= 1e-8) != (set_distance(D, y) <= 1e-8):
                return False
    return True


def duality_report(bp: BasePair, grid: SampleGrid, V_radius: float) -> tuple[dict, Assertions]:
    f = bp.f
    checks = Assertions()
    pair = conjugate(f)
    probes = probe_points(f)
    bi_ok, bi_dev = check_biconjugation(f, probes)
    inv = check_inverse_subdifferential(pair, probe_points(f, -2.0, 2.0)[:: (5 if f.dim == 1 else 1)])
    fy = fenchel_young_ok(pair, probe_points(f, -2.0, 2.0)[::4], probe_points(f, -2.0, 2.0)[::4])
    checks["biconjugation"] = bi_ok
    checks["inverse_subdifferential"] = inv.ok
    checks["fenchel_young"] = fy
    doc = {
        "conjugate": function_to_json(pair.conjugate),
        "biconjugation": {"ok": bi_ok, "max_deviation": bi_dev},
        "inverse_subdifferential": inv.to_json(),
        "fenchel_young_ok": fy,
    }
    g = check_conjugate_growth(bp, grid, V_radius)
    doc["conjugate_growth"] = g.to_json()
    checks["conjugate_growth.calm_equivalence"] = g.calm_ok
    checks["conjugate_growth.isolated_equivalence"] = g.isolated_ok
    checks["conjugate_growth.bound"] = g.bound_ok
    if g.calmness.bridge_ok is not None:
        checks["calmness.bridge"] = g.calmness.bridge_ok
    return doc, checks


def cmd_duality(args) -> int:
    f = load_function(args.function)
    bp = base_pair(args, f)
    grid = make_grid(args, bp.xbar, bp.radius)
    if not args.v_radius > 0:
        raise ConfigError("--v-radius must be positive")
    try:
        doc, checks = duality_report(bp, grid, args.v_radius)
    except UnsupportedError as exc:
        # no conjugate in the catalog: calmness alone
        calm = estimate_calmness_modulus(bp, grid, args.v_radius, bridge=False)
        doc, checks = {"conjugate": {"unsupported": str(exc)}, "calmness": calm.to_json()}, Assertions()
    out = Path(args.out)
    write_json(out / "duality.json", _header(args, "duality") | {"function": function_to_json(f), **doc, "assertions": checks.items})
    return checks.exit_code()


# --------------------------------------------------------------------------
# solution map


def cmd_solution_map(args) -> int:
    phi = load_function(args.function)
    base = parse_vector(args.base, "base")
    if base is None or base.size != 2:
        raise ConfigError("--base needs 'alpha,beta'")
    try:
        spec = SolutionMapSpec(phi, float(base[0]), float(base[1]))
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    xbar = float(_vec_for(phi, args.xbar, "xbar")[0])
    ybar = float(_vec_for(phi, args.ystar, "ystar")[0])
    grid = make_grid(args, [xbar], args.radius)
    try:
        rec = check_solution_map(spec, xbar, ybar, grid, V_radius=args.v_radius)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    checks = Assertions()
    checks["calm_equivalence"] = rec.calm_ok
    checks["isolated_implication"] = rec.isolated_ok
    doc = _header(args, "solution-map") | {
        "phi": function_to_json(phi),
        "alpha": spec.alpha,
        "beta": spec.beta,
        "xbar": xbar,
        "ybar": ybar,
        "S_xbar": set_to_json(solution_map_eval(spec, xbar)),
        **rec.to_json(),
        "assertions": checks.items,
    }
    write_json(Path(args.out) / "solution_map.json", doc)
    return checks.exit_code()


# --------------------------------------------------------------------------
# suite


class Rows:
    def __init__(self):
        self.rows: list[tuple[str, str, str, str, bool]] = []

    def add(self, inst: str, check: str, expected, measured, ok) -> None:
        self.rows.append((inst, check, fmt(expected), fmt(measured), bool(ok)))

    def close(self, inst, check, expected: float, measured: float, tol: float) -> None:
        self.add(inst, check, expected, measured, abs(measured - expected) <= tol)


def _suite_grid(bp: BasePair, seed: int) -> SampleGrid:
    kw = SUITE_GRID_2D if bp.f.dim > 1 else {}
    return SampleGrid.around(bp, seed=seed, **kw)


def _cls(holds: bool) -> str:
    return "holds" if holds else "fails"


def suite_regularity(rows: Rows, seed: int) -> None:
    for inst in catalog_instances():
        bp, n = inst.bp, inst.name
        grid = _suite_grid(bp, seed)
        tol = 1e-6 if inst.dim == 1 else 1e-3
        if inst.subregular is not None:
            g = check_growth_subregularity(bp, grid)
            rows.add(n, "regularity.subregularity", _cls(inst.subregular), _cls(g.subregularity.holds), g.subregularity.holds == inst.subregular)
            rows.add(n, "regularity.growth", _cls(inst.subregular), _cls(g.growth.holds), g.growth.holds == inst.subregular)
            if inst.kappa is not None:
                rows.close(n, "regularity.kappa", inst.kappa, g.kappa, tol)
            if inst.c is not None:
                rows.close(n, "regularity.c", inst.c, g.c, tol)
            rows.add(n, "regularity.bounds", "c>=1/(4k), k<=1/c", f"c*k={fmt(g.gap)}", g.forward_ok and g.backward_ok)
            rows.add(n, "regularity.equivalence", True, g.equivalence_ok, g.equivalence_ok)
            s = check_strong_growth_subregularity(bp, grid)
            iso = inst.notes.get("isolated", inst.strongly_subregular)
            rows.add(n, "regularity.isolation", iso, s.isolated, s.isolated == iso)
            rows.add(
                n, "regularity.strong_subregularity", _cls(inst.strongly_subregular),
                _cls(s.subregularity.holds), s.subregularity.holds == inst.strongly_subregular,
            )
            rows.add(n, "regularity.strong_equivalence", True, s.equivalence_ok, s.ok)
        m = check_monotone_chain(bp, grid)
        sg = m.strong_growth
        rows.add(n, "regularity.strong_growth", _cls(inst.strongly_subregular), _cls(sg.holds), sg.holds == inst.strongly_subregular)
        if inst.c_strong is not None:
            rows.close(n, "regularity.c_strong", inst.c_strong, sg.value, tol)
        rows.add(n, "regularity.monotone_equivalence", True, m.equivalence_ok, m.equivalence_ok)
        rows.add(n, "regularity.monotone_transfer", f">={fmt(sg.value)}", m.monotone.value, m.transfer_ok)
        try:
            cd = contingent_derivative_modulus(bp)
            positive = cd.value > 1e-12
            rows.add(n, "regularity.contingent", ">0" if inst.strongly_subregular else "0", cd.value, positive == inst.strongly_subregular)
        except UnsupportedError:
            pass
        if inst.smooth:
            h = check_hessian_equivalence(bp, grid)
            rows.add(n, "regularity.hessian", True, h.equivalence_ok, h.equivalence_ok)
        c = inst.c_strong if inst.c_strong is not None else 0.5
        comb = check_convex_combination_growth(bp, c, grid)
        rows.add(n, "regularity.combination_implication", True, comb.implication_ok, comb.implication_ok)

    sq = instance("square").bp
    grid = _suite_grid(sq, seed)
    w = refute_growth(sq, 2.0, grid, strong=True)
    rows.add("square", "regularity.refute_c2", "witness", "none" if w is None else f"x={fmt(float(w[0][0]))}", w is not None)
    for c, expect in ((1.0, True), (1.5, False)):
        comb = check_convex_combination_growth(sq, c, grid)
        rows.add("square", f"regularity.combination_premise_c{c:g}", expect, comb.premise_holds, comb.premise_holds == expect)
    quartic = instance("quartic").bp
    g = check_growth_subregularity(quartic, _suite_grid(quartic, seed))
    kv = [v for _, v in g.subregularity.radii_sweep]
    cv = [v for _, v in g.growth.radii_sweep]
    kf = min(b / a for a, b in zip(kv, kv[1:]))
    cf = max(b / a for a, b in zip(cv, cv[1:]))
    rows.add("quartic", "regularity.kappa_growth_factor", ">=3.9", kf, kf >= 3.9)
    rows.add("quartic", "regularity.c_shrink_factor", "0.25", cf, abs(cf - 0.25) <= 0.01)
    for name, bpf, bpg, exact in sum_rule_pairs():
        r = check_sum_rule(bpf, bpg, _suite_grid(bpf, seed))
        rows.add(name, "sum_rule.superadditive", f">={fmt(r.c_left + r.c_right)}", r.c_sum, r.ok)
        tol = 1e-6 if bpf.f.dim == 1 else 1e-2
        rows.close(name, "sum_rule.c_sum", exact, r.c_sum, tol)


def suite_prox(rows: Rows, seed: int) -> None:
    sq = instance("square").bp.f
    run = run_exact_ppa(sq, [1.0], ProxSchedule(Constant(2.0)))
    rep = classify_rate(run.iterates, [0.0])
    rows.add("square", "prox.constant_rate", "linear(0.5)", rep.label, rep.classification == "linear" and abs(rep.q - 0.5) < 1e-6)
    rep = classify_rate(run_exact_ppa(sq, [1.0], ProxSchedule(Harmonic(2.0))).iterates, [0.0])
    rows.add("square", "prox.harmonic_rate", "superlinear", rep.label, rep.classification == "superlinear")
    run = run_exact_ppa(Abs(), [10.0], ProxSchedule(Constant(1.0)))
    hit = next((k for k, x in enumerate(run.iterates) if x[0] == 0.0), None)
    rows.add("abs", "prox.finite_steps", 10, hit, hit == 10 and classify_rate(run.iterates, [0.0]).classification == "finite")
    rep = classify_rate(run_exact_ppa(PowerEven(4), [1.0], ProxSchedule(Constant(1.0))).iterates, [0.0])
    rows.add("quartic", "prox.constant_rate", "sublinear", rep.label, rep.classification == "sublinear")
    for name in ("square", "abs", "quartic", "ramp_kink"):
        f = instance(name).bp.f
        ex = run_exact_ppa(f, [0.9], ProxSchedule(Constant(2.0), max_iterations=60))
        ge = run_generalized_ppa(f, 0.9, [Linear(2.0)] * 60)
        k = min(len(ex.iterates), len(ge.iterates))
        dev = max(abs(float(a[0]) - float(b[0])) for a, b in zip(ex.iterates[:k], ge.iterates[:k]))
        rows.add(name, "prox.generalized_matches_exact", "<=1e-10", dev, dev <= 1e-10)
    ge = run_generalized_ppa(sq, 1.0, [Saturated(2.0, 0.1)] * 80)
    rep = classify_rate(ge.iterates, [0.0])
    ok = rep.classification == "linear" and abs(rep.q - 0.5) < 1e-6 and max(ge.residuals) <= 1e-10
    rows.add("square", "prox.saturated_tail", "linear(0.5)", rep.label, ok and check_step(Saturated(2.0, 0.1)))
    ge = run_generalized_ppa(Abs(), 0.5, [Linear(1.0)])
    rows.add("abs", "prox.generalized_one_step", 0.0, float(ge.iterates[1][0]), ge.iterates[1][0] == 0.0)
    # growth => linear (or faster) convergence, with the quadratic model as ceiling
    lam = 1.0
    for inst in catalog_instances():
        if not inst.strongly_subregular or inst.c_strong is None:
            continue
        bp = inst.bp
        f = Tilted(bp.f, bp.ystar)
        x0 = bp.xbar + 0.9 * bp.radius / math.sqrt(bp.f.dim)
        run = run_exact_ppa(f, x0, ProxSchedule(Constant(lam)))
        rep = classify_rate(run.iterates, bp.xbar)
        bound = model_rate_bound(lam, inst.c_strong)
        if rep.classification == "linear":
            ok = rep.q < 1 and rep.q <= bound + 0.05
        else:
            ok = rep.classification in ("finite", "superlinear")
        descent = all(
            value(f, b) + lam / 2 * float(np.sum((b - a) ** 2)) <= value(f, a) + 1e-12
            for a, b in zip(run.iterates, run.iterates[1:])
        )
        rows.add(inst.name, "prox.rate_under_growth", f"q<={fmt(bound + 0.05)}", rep.label, ok and descent)
    # lambda sweep: where the rate stops matching the quadratic model is recorded, not asserted
    for inst in catalog_instances():
        if not inst.strongly_subregular or inst.c_strong is None or inst.bp.f.dim != 1:
            continue
        bp = inst.bp
        f = Tilted(bp.f, bp.ystar)
        labels, ok = [], True
        for lam in LAMBDA_SWEEP:
            rep = classify_rate(run_exact_ppa(f, bp.xbar + 0.9 * bp.radius, ProxSchedule(Constant(lam))).iterates, bp.xbar)
            labels.append(f"{lam:g}:{rep.label}")
            ok &= rep.classification in ("linear", "superlinear", "finite") and (rep.q is None or rep.q < 1)
        rows.add(inst.name, "prox.lambda_sweep", "q<1", " ".join(labels), ok)


def suite_duality(rows: Rows, seed: int) -> None:
    for name, bp, V in conjugate_instances():
        grid = _suite_grid(bp, seed)
        doc, checks = duality_report(bp, grid, V)
        for key, ok in checks.items.items():
            rows.add(name, f"duality.{key}", True, ok, ok)
        pair = conjugate(bp.f)
        worst, trusted = 0.0, 0
        for y in np.linspace(-3, 3, 25):
            num, ok = pair.numeric(float(y))
            exact = value(pair.conjugate, [y])
            if ok and math.isfinite(exact):
                trusted += 1
                worst = max(worst, abs(num - exact))
        rows.add(name, "duality.numeric_conjugate", "<=1e-6", worst, trusted > 0 and worst <= 1e-6)
    expected = {"half_square": (True, True), "abs": (True, False), "indicator": (True, False)}
    for name, bp, V in conjugate_instances():
        if name not in expected:
            continue
        calm = estimate_calmness_modulus(bp, _suite_grid(bp, seed), V, bridge=False)
        got = (calm.calm, calm.isolated_calm)
        rows.add(name, "duality.calm_isolated", expected[name], got, got == expected[name])


def suite_solution_map(rows: Rows, seed: int) -> None:
    cases = [
        ("half_square", Quadratic([[1.0]], [0.0]), True),
        ("abs", Abs(), True),
        ("quartic", PowerEven(4), False),
    ]
    for name, phi, calm in cases:
        spec = SolutionMapSpec(phi, 1.0, 0.0)
        rec = check_solution_map(spec, 0.0, 0.0, SampleGrid([0.0], 0.5, seed=seed))
        rows.add(name, "solution_map.calm", _cls(calm), _cls(rec.calm), rec.calm == calm)
        rows.add(name, "solution_map.calm_equivalence", True, rec.calm_ok, rec.calm_ok)
        rows.add(name, "solution_map.isolated_implication", True, rec.isolated_ok, rec.isolated_ok)


SUITE = [
    ("regularity", suite_regularity),
    ("prox", suite_prox),
    ("duality", suite_duality),
    ("solution_map", suite_solution_map),
]


def run_suite(seed: int = 0, filt: str | None = None) -> list[tuple]:
    rows = Rows()
    for _, fn in SUITE:
        fn(rows, seed)
    out = rows.rows
    if filt:
        out = [r for r in out if filt in r[1]]
    return out


def summary_csv(rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["instance", "check", "expected", "measured", "pass"])
    for inst, check, exp, meas, ok in rows:
        w.writerow([inst, check, exp, meas, "true" if ok else "false"])
    return buf.getvalue()


def cmd_suite(args) -> int:
    rows = run_suite(args.seed, args.filter)
    write_atomic(Path(args.out) / "summary.csv", summary_csv(rows))
    bad = [r for r in rows if not r[4]]
    for inst, check, exp, meas, _ in bad:
        print(f"assertion failed: {inst} {check} (expected {exp}, measured {meas})", file=sys.stderr)
    print(f"{len(rows) - len(bad)}/{len(rows)} checks passed")
    return 1 if bad else 0


# --------------------------------------------------------------------------
# entry point


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="subreg", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, radius=1.0):
        sp.add_argument("--function", help="JSON descriptor: a path or inline JSON")
        sp.add_argument("--xbar", help="base point, comma-separated")
        sp.add_argument("--ystar", help="dual point, comma-separated")
        sp.add_argument("--radius", type=float, default=radius, help="sampling radius (default %(default)s)")
        sp.add_argument("--grid", type=int, help="grid points per axis")
        sp.add_argument("--samples", type=int, help="random samples")
        sp.add_argument("--seed", type=int, default=0, help="RNG seed for the random samples")
        sp.add_argument("--out", default=".", help="output directory")

    common(sub.add_parser("analyze", help="regularity constants at a base pair"))
    sp = sub.add_parser("prox", help="proximal point run and rate classification")
    common(sp)
    sp.add_argument("--x0", help="starting point, comma-separated (default all ones)")
    sp.add_argument("--xstar", help="limit to measure errors against (default: exact solution set)")
    sp.add_argument("--schedule", help='JSON, e.g. {"type": "Constant", "lambda": 2}')
    sp = sub.add_parser("duality", help="conjugate and calmness checks")
    common(sp)
    sp.add_argument("--v-radius", type=float, default=1.0, help="half-width of the dual neighbourhood V")
    sp = sub.add_parser("solution-map", help="calmness of S(x) = (d phi)^-1(-(alpha x + beta))")
    common(sp, radius=0.5)
    sp.add_argument("--base", default="1,0", help="alpha,beta of the base map (default %(default)s)")
    sp.add_argument("--v-radius", type=float, default=1.0, help="half-width of the neighbourhood of ybar")
    sp = sub.add_parser("suite", help="run the acceptance matrix, write summary.csv")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--filter", help="keep rows whose check name contains this substring")
    sp.add_argument("--out", default=".", help="output directory")
    return p


COMMANDS = {
    "analyze": cmd_analyze,
    "prox": cmd_prox,
    "duality": cmd_duality,
    "solution-map": cmd_solution_map,
    "suite": cmd_suite,
}


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if getattr(args, "seed", 0) < 0:
            raise ConfigError("--seed must be nonnegative")
        return COMMANDS[args.command](args)
    except InvalidBasePair as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (ConfigError, UnsupportedError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
