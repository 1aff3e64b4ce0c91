"""Exact and generalized proximal point iterations with rate classification."""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field

import numpy as np

from .catalog import (
    ConvexFunction,
    _bisect_inclusion,
    find_bracket,
    prox,
    subdifferential,
    subgradient_interval,
    value,
)
from .sets import as_vector, json_number, json_vector, set_distance

ERROR_FLOOR = 1e-14


# --------------------------------------------------------------------------
# schedules


@dataclass(frozen=True)
class Constant:
    lam: float

    def __post_init__(self):
        if not self.lam > 0:
            raise ValueError("lambda must be positive")

    def __call__(self, n: int) -> float:
        return self.lam


@dataclass(frozen=True)
class Harmonic:
    """lambda_n = lam0 / (n + 1)."""

    lam0: float

    def __post_init__(self):
        if not self.lam0 > 0:
            raise ValueError("lambda_0 must be positive")

    def __call__(self, n: int) -> float:
        return self.lam0 / (n + 1)


@dataclass(frozen=True)
class Explicit:
    values: tuple

    def __post_init__(self):
        vals = tuple(float(v) for v in self.values)
        if not vals or any(not v > 0 for v in vals):
            raise ValueError("explicit schedule needs positive values")
        object.__setattr__(self, "values", vals)

    def __call__(self, n: int) -> float:
        return self.values[n]


@dataclass(frozen=True)
class ProxSchedule:
    rule: Constant | Harmonic | Explicit
    max_iterations: int = 200
    stop_tolerance: float = 1e-13

    def __post_init__(self):
        if self.max_iterations < 1:
            raise ValueError("max_iterations must be >= 1")

    @property
    def iterations(self) -> int:
        if isinstance(self.rule, Explicit):
            return min(self.max_iterations, len(self.rule.values))
        return self.max_iterations


# --------------------------------------------------------------------------
# generalized steps g_n


@dataclass(frozen=True)
class Linear:
    """g(u) = lam * u."""

    lam: float

    def __call__(self, u: float) -> float:
        return self.lam * u

    @property
    def lipschitz(self) -> float:
        return self.lam


@dataclass(frozen=True)
class Saturated:
    """g(u) = lam * clamp(u, -cap, cap)."""

    lam: float
    cap: float

    def __post_init__(self):
        if not (self.lam > 0 and self.cap > 0):
            raise ValueError("lam and cap must be positive")

    def __call__(self, u: float) -> float:
        return self.lam * min(max(u, -self.cap), self.cap)

    @property
    def lipschitz(self) -> float:
        return self.lam


def check_step(g, probe: np.ndarray | None = None) -> bool:
    """g(0) = 0 and g is nondecreasing with Lipschitz constant g.lipschitz on a probe grid."""
    u = np.linspace(-10, 10, 2001) if probe is None else probe
    gu = np.array([g(t) for t in u])
    du = np.diff(u)
    dg = np.diff(gu)
    return (
        g(0.0) == 0.0
        and bool(np.all(dg >= -1e-15))
        and bool(np.all(np.abs(dg) <= g.lipschitz * du * (1 + 1e-12) + 1e-15))
    )


# --------------------------------------------------------------------------
# runs


@dataclass(eq=False)
class PPARun:
    iterates: list
    lambdas: list
    residuals: list
    values: list = field(default_factory=list)

    @property
    def steps(self) -> list[float]:
        return [float(np.linalg.norm(b - a)) for a, b in zip(self.iterates, self.iterates[1:])]

    def csv(self, xstar) -> str:
        """Rows n,x,f,step,residual,error,ratio (x is ';'-joined)."""
        errs = [float(np.linalg.norm(x - as_vector(xstar))) for x in self.iterates]
        steps = [math.nan] + self.steps
        res = [math.nan] + self.residuals
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["n", "x", "f", "step", "residual", "error", "ratio"])
        for n, x in enumerate(self.iterates):
            ratio = errs[n] / errs[n - 1] if n and errs[n - 1] > ERROR_FLOOR else math.nan
            w.writerow(
                [n, ";".join(repr(float(t)) for t in x), repr(self.values[n]), repr(steps[n]), repr(res[n]), repr(errs[n]), repr(ratio)]
            )
        return buf.getvalue()


def prox_residual(f: ConvexFunction, lam: float, x, z) -> float:
    """d(lam (x - z), df(z)); zero exactly at the prox point."""
    return set_distance(subdifferential(f, z), lam * (as_vector(x) - as_vector(z)))


def run_exact_ppa(f: ConvexFunction, x0, sched: ProxSchedule) -> PPARun:
    """x_{n+1} = argmin_z f(z) + lam_n/2 ||z - x_n||^2."""
    x = as_vector(x0).copy()
    if not np.all(np.isfinite(x)):
        raise ValueError("starting point must be finite")
    run = PPARun([x], [], [], [value(f, x)])
    for n in range(sched.iterations):
        lam = sched.rule(n)
        z = prox(f, lam, x)
        run.iterates.append(z)
        run.lambdas.append(lam)
        run.residuals.append(prox_residual(f, lam, x, z))
        run.values.append(value(f, z))
        step = float(np.linalg.norm(z - x))
        x = z
        if step < sched.stop_tolerance:
            break
    return run


def run_generalized_ppa(f: ConvexFunction, x0: float, steps: list, stop_tolerance: float = 1e-13) -> PPARun:
    """0 in g_n(x_{n+1} - x_n) + df(x_{n+1}) on the real line, by bisection."""
    if f.dim != 1:
        raise ValueError("the generalized iteration is implemented for n = 1")
    x = float(as_vector(x0)[0])
    run = PPARun([np.array([x])], [], [], [value(f, [x])])
    for g in steps:
        xn = x

        def shifted(u, g=g, xn=xn):
            return g(u - xn)

        iv = subgradient_interval(f, xn)
        width = 1.0 if iv is None else max(1.0, min(abs(iv[0]), abs(iv[1])) / g.lipschitz)
        lo, hi = find_bracket(f, shifted, xn, width)
        u = _bisect_inclusion(f, shifted, xn, lo, hi)
        run.iterates.append(np.array([u]))
        run.lambdas.append(g.lipschitz)
        run.residuals.append(set_distance(subdifferential(f, [u]), [-shifted(u)]))
        run.values.append(value(f, [u]))
        x = u
        if abs(u - xn) < stop_tolerance:
            break
    return run


# --------------------------------------------------------------------------
# rate classification


@dataclass(eq=False)
class RateReport:
    errors: list
    ratios: list
    classification: str
    q: float

    @property
    def label(self) -> str:
        if self.classification == "linear":
            return f"linear({self.q:.6g})"
        return self.classification

    def to_json(self) -> dict:
        return {
            "classification": self.classification,
            "label": self.label,
            "q": json_number(self.q),
            "errors": [json_number(e) for e in self.errors],
            "ratios": [json_number(r) for r in self.ratios],
        }


def classify_rate(iterates, xstar, stop_tolerance: float = 1e-13) -> RateReport:
    """Classify the error sequence e_n = ||x_n - x*||.

    Rules, in order: exact zero reached -> finite; fewer than 6 ratios ->
    finite if the error fell below 1e-14, else degenerate; last five ratios
    decreasing with mean < 0.1 -> superlinear; std < 0.05 and mean in
    [0.05, 0.95] -> linear(mean); error below 1e-14 -> finite; errors rising
    for 10 steps -> diverged; mean > 0.95 with the error above the stop
    tolerance -> sublinear; anything else -> degenerate.
    """
    xs = as_vector(xstar)
    errors = [float(np.linalg.norm(as_vector(x) - xs)) for x in iterates]
    ratios = []
    for a, b in zip(errors, errors[1:]):
        if a <= ERROR_FLOOR:
            break
        ratios.append(b / a)
    tail = ratios[-5:]
    q = float(np.mean(tail)) if tail else math.nan

    def report(cls):
        return RateReport(errors, ratios, cls, q)

    if any(e == 0.0 for e in errors):
        return report("finite")
    if len(ratios) < 6:
        return report("finite" if min(errors) < ERROR_FLOOR else "degenerate")
    if all(b < a for a, b in zip(tail, tail[1:])) and q < 0.1:
        return report("superlinear")
    if float(np.std(tail)) < 0.05 and 0.05 <= q <= 0.95:
        return report("linear")
    if min(errors) < ERROR_FLOOR:
        return report("finite")
    rises = 0
    for a, b in zip(errors, errors[1:]):
        rises = rises + 1 if b > a else 0
        if rises >= 10:
            return report("diverged")
    if q > 0.95 and errors[-1] > stop_tolerance:
        return report("sublinear")
    return report("degenerate")


def errors_csv(report: RateReport) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["n", "error"])
    for n, e in enumerate(report.errors):
        w.writerow([n, repr(e)])
    return buf.getvalue()


def model_rate_bound(lam: float, c: float) -> float:
    """lam / (lam + 2c): the contraction factor of the prox on c||x||^2."""
    return lam / (lam + 2 * c)


def report_json(report: RateReport, xstar) -> dict:
    out = report.to_json()
    out["xstar"] = json_vector(xstar)
    return out
